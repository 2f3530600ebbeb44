"""Parameter regions P_{rho,alpha}, their census, and synthesis of maps.

A region is a parallelogram in the (delta, a) square: delta runs over
[delta(rho-, alpha), delta(rho, alpha)] and, for each delta, a runs over an
interval of fixed width whose endpoints move with slope 1/(1 - lambda).  It
is stored through the delta-free offsets a - delta/(1 - lambda).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd

from .core import (
    BoundaryAmbiguous,
    Family,
    MapSpec,
    MapTag,
    Scalar,
    as_scalar,
    cmp,
    is_exact,
    to_float,
)
from .series import Line, Pt, RotationTarget, a_offsets, delta_of


class InfeasibleGoal(ValueError):
    pass


class Membership(str, Enum):
    INSIDE_STRICT = "inside_strict"
    INSIDE_BOUNDARY = "inside_boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Region:
    family: Family
    target: RotationTarget
    delta_lo: Scalar
    delta_hi: Scalar
    a_offset_lo: Scalar
    a_offset_hi: Scalar
    inclusion_mode: str = "half_open"
    caveat: bool = False
    # Widths that are zero by construction rather than by numerics.
    delta_degenerate: bool = field(default=False, compare=False)
    a_degenerate: bool = field(default=False, compare=False)

    def a_interval(self, delta) -> tuple[Scalar, Scalar]:
        base = as_scalar(delta) / (1 - self.family.lam)
        return base + self.a_offset_lo, base + self.a_offset_hi

    @property
    def delta_width(self) -> Scalar:
        return self.delta_hi - self.delta_lo

    @property
    def a_width(self) -> Scalar:
        return self.a_offset_hi - self.a_offset_lo

    @property
    def clipped(self) -> bool:
        """Whether the parallelogram sticks out of the unit square."""
        for delta in (self.delta_lo, self.delta_hi):
            lo, hi = self.a_interval(delta)
            if _safe_cmp(lo, 0) < 0 or _safe_cmp(hi, 1) > 0:
                return True
        return False

    def corners(self) -> list[tuple[Scalar, Scalar]]:
        lo0, hi0 = self.a_interval(self.delta_lo)
        lo1, hi1 = self.a_interval(self.delta_hi)
        return [(self.delta_lo, lo0), (self.delta_hi, lo1), (self.delta_hi, hi1), (self.delta_lo, hi0)]

    def interior_point(self) -> tuple[Scalar, Scalar]:
        """Midpoint in delta, then midpoint of the a-interval clipped to [0, 1]."""
        if self.delta_degenerate:
            delta = self.delta_hi
        else:
            delta = (self.delta_lo + self.delta_hi) / 2
        lo, hi = self.a_interval(delta)
        if self.a_degenerate:
            return delta, hi
        if _safe_cmp(lo, 0) < 0:
            lo = Fraction(0)
        if _safe_cmp(hi, 1) > 0:
            hi = Fraction(1)
        return delta, (lo + hi) / 2


def _safe_cmp(x, y) -> int:
    try:
        return cmp(x, y)
    except BoundaryAmbiguous:
        return 0


def region(fam: Family, target: RotationTarget, mode: str = "auto", err=None,
           inclusion_mode: str = "half_open") -> Region:
    if inclusion_mode not in ("closed", "half_open"):
        raise ValueError("inclusion_mode is 'closed' or 'half_open'")
    dv = delta_of(fam, target, mode, err)
    off = a_offsets(fam, target, mode, err)
    return Region(
        fam,
        target,
        dv.left_limit,
        dv.value,
        off.left_limit,
        off.value,
        inclusion_mode,
        dv.caveat or off.caveat,
        delta_degenerate=_zero(dv.value - dv.left_limit),
        a_degenerate=_zero(off.value - off.left_limit),
    )


def _zero(x) -> bool:
    # Jump sums are exact (possibly zero) Fractions whenever the gap is known
    # symbolically; an Approx difference of equal midpoints also counts.
    if is_exact(x):
        return x == 0
    return x.value == 0


def enumerate_regions(fam: Family, rho, mode: str = "auto") -> list[tuple[Fraction, Region]]:
    """The 2q+1 distinct regions for rho = p/q, sorted by alpha."""
    rho = Fraction(rho)
    p, q = rho.numerator, rho.denominator
    if not (0 < p < q) or gcd(p, q) != 1:
        raise ValueError("rho must be a reduced fraction in (0, 1)")
    alphas = sorted({Fraction(l, q) for l in range(q + 1)} | {Fraction(2 * l + 1, 2 * q) for l in range(q)})
    return [(al, region(fam, RotationTarget(rho, al), mode)) for al in alphas]


def intersect(r1: Region, r2: Region) -> tuple[Scalar, Scalar, Scalar, Scalar] | None:
    """Intersection of two regions of the same family as (dlo, dhi, olo, ohi).

    Equal slopes make the intersection a product in (delta, offset).
    """
    dlo = max(r1.delta_lo, r2.delta_lo)
    dhi = min(r1.delta_hi, r2.delta_hi)
    olo = max(r1.a_offset_lo, r2.a_offset_lo)
    ohi = min(r1.a_offset_hi, r2.a_offset_hi)
    if dlo > dhi or olo > ohi:
        return None
    return dlo, dhi, olo, ohi


def check_adjacent(regions: list[tuple[Fraction, Region]]) -> list[bool]:
    """P_{l/q} and P_{(l+1)/q} meet exactly in the in-between region."""
    out = []
    for i in range(0, len(regions) - 2, 2):
        left, mid, right = regions[i][1], regions[i + 1][1], regions[i + 2][1]
        box = intersect(left, right)
        out.append(box == (mid.delta_lo, mid.delta_hi, mid.a_offset_lo, mid.a_offset_hi))
    return out


def _le(x, y, degenerate: bool) -> bool:
    try:
        return cmp(x, y) <= 0
    except BoundaryAmbiguous:
        if degenerate:
            return True
        raise


def contains(reg: Region, delta, a) -> Membership:
    """Where (delta, a) sits relative to the region.

    ``inside_strict`` means the conjugacy hypotheses hold; ``inside_boundary``
    means the point lies on an edge excluded for rational rho, where only the
    rotation number is guaranteed.  In approximate mode an undecidable
    comparison raises, except along an axis of zero width, where a point
    consistent with the region up to the carried error is accepted.
    """
    delta, a = as_scalar(delta), as_scalar(a)
    if cmp(a, 0) < 0 or cmp(a, 1) > 0:
        return Membership.OUTSIDE
    ddeg, adeg = reg.delta_degenerate, reg.a_degenerate
    if not (_le(reg.delta_lo, delta, ddeg) and _le(delta, reg.delta_hi, ddeg)):
        return Membership.OUTSIDE
    lo, hi = reg.a_interval(delta)
    if not (_le(lo, a, adeg) and _le(a, hi, adeg)):
        return Membership.OUTSIDE
    if reg.target.rational and (cmp(delta, reg.delta_hi) == 0 or cmp(a, lo) == 0):
        return Membership.INSIDE_BOUNDARY
    return Membership.INSIDE_STRICT


def includes(reg: Region, delta, a) -> bool:
    """Set membership under the region's own inclusion mode."""
    m = contains(reg, delta, a)
    if reg.inclusion_mode == "closed":
        return m != Membership.OUTSIDE
    return m == Membership.INSIDE_STRICT


@dataclass(frozen=True)
class ExpectedClass:
    tag: MapTag
    strength: str  # "all_points" or "exists_point"


def classify_alpha(target: RotationTarget) -> ExpectedClass:
    """Map class forced by the position of alpha relative to 1 - rho."""
    line = Line(target)
    s = line.compare(line.alpha_pt, Pt(-1, Fraction(1)))
    tag = MapTag.M1 if s < 0 else MapTag.M2 if s == 0 else MapTag.M3
    return ExpectedClass(tag, "exists_point" if target.rational else "all_points")


@dataclass(frozen=True)
class SynthesisTarget:
    """What the synthesized map should do.

    goal is one of "orbit_count" (n_orbits 1 or 2), "complexity" (generic
    2n+1, or n+b when a resonance index k is given) and "map_type".
    """

    rho: Scalar
    goal: str
    n_orbits: int | None = None
    k: int | None = None
    map_type: MapTag | None = None
    alpha: Scalar | None = None

    def __post_init__(self):
        object.__setattr__(self, "rho", as_scalar(self.rho))
        if self.alpha is not None:
            object.__setattr__(self, "alpha", as_scalar(self.alpha))


def complexity_offset(k: int) -> int:
    """b in p(n) = n + b for alpha = R^k(0)."""
    if k <= -2:
        return -k
    if k in (-1, 0):
        return 1
    return k + 1


def _pick_alpha(goal: SynthesisTarget) -> RotationTarget:
    rho = goal.rho
    rational = is_exact(rho)
    if goal.goal == "orbit_count":
        if not rational:
            raise InfeasibleGoal("periodic orbits need a rational rho")
        q = Fraction(rho).denominator
        if goal.n_orbits not in (1, 2):
            raise InfeasibleGoal("the attractor has one or two cycles")
        alpha = goal.alpha
        if alpha is None:
            alpha = Fraction(0) if goal.n_orbits == 1 else Fraction(1, 2 * q)
        on_grid = (Fraction(alpha) * q).denominator == 1 if is_exact(alpha) else False
        if on_grid != (goal.n_orbits == 1):
            raise InfeasibleGoal(f"alpha = {alpha} does not give {goal.n_orbits} cycle(s)")
        return RotationTarget(rho, alpha)
    if goal.goal == "complexity":
        if rational:
            raise InfeasibleGoal("complexity laws are stated for irrational rho")
        if goal.k is not None:
            return RotationTarget(rho, k=goal.k)
        alpha = goal.alpha if goal.alpha is not None else Fraction(1, 4)
        if not is_exact(alpha):
            raise InfeasibleGoal("generic alpha must be given exactly")
        return RotationTarget(rho, alpha)
    if goal.goal == "map_type":
        tag = MapTag(goal.map_type)
        one = 1 - rho
        if tag == MapTag.M1:
            return RotationTarget(rho, one / 2)
        if tag == MapTag.M2:
            return RotationTarget(rho, k=-1) if not rational else RotationTarget(rho, one)
        if tag == MapTag.M3:
            return RotationTarget(rho, 1 - rho / 2)
        raise InfeasibleGoal("map_type must be M1, M2 or M3")
    raise InfeasibleGoal(f"unknown goal {goal.goal!r}")


def synthesize(fam: Family, goal: SynthesisTarget, err=None) -> tuple[MapSpec, dict]:
    target = _pick_alpha(goal)
    reg = region(fam, target, err=err)
    delta, a = reg.interior_point()
    try:
        spec = MapSpec(fam.lam, fam.d, delta, a)
    except ValueError as exc:
        raise InfeasibleGoal(str(exc)) from exc
    cert: dict = {
        "rho": target.rho,
        "alpha": target.alpha,
        "k": target.k,
        "region": reg,
        "membership": contains(reg, delta, a).value,
        "expected_class": classify_alpha(target).tag.value,
    }
    if target.rational:
        q = target.q
        one_cycle = (Fraction(target.alpha) * q).denominator == 1
        cert["expected"] = {"cycles": 1 if one_cycle else 2, "period": q, "winding": target.p,
                            "complexity_limit": q if one_cycle else 2 * q}
    elif target.k is None:
        cert["expected"] = {"complexity": "2n+1"}
    else:
        b = complexity_offset(target.k)
        cert["expected"] = {"complexity": "n+b", "b": b}
    cert["a_width"] = to_float(reg.a_width)
    cert["delta_width"] = to_float(reg.delta_width)
    return spec, cert
