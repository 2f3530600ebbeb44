"""Orbits, attractors, symbolic codes and their complexity."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .core import (
    Approx,
    BoundaryAmbiguous,
    Family,
    MapSpec,
    MapTag,
    Scalar,
    as_scalar,
    classify,
    cmp,
    floor_of,
    is_exact,
    lift,
    lift_eval,
    to_float,
)
from .regions import Membership, contains, region
from .series import Line, Pt, RotationTarget, as_point, phi


class HypothesisViolated(ValueError):
    pass


class InsufficientLength(ValueError):
    pass


class OutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class Orbit:
    points: list
    windings: list[int]


def iterate_orbit(spec: MapSpec, x0, n: int) -> Orbit:
    """x0, f(x0), ..., f^n(x0) plus the integer part gained at every step."""
    x = as_scalar(x0)
    if cmp(x, 0) < 0 or cmp(x, 1) >= 0:
        raise ValueError("x0 must lie in [0, 1)")
    pts = [x]
    wind = []
    for _ in range(n):
        y = lift_eval(spec, x)
        w = floor_of(y)
        x = y - w
        pts.append(x)
        wind.append(w)
    return Orbit(pts, wind)


# -- partitions and codes -------------------------------------------------------

@dataclass(frozen=True)
class SymbolCode:
    symbols: tuple[int, ...]
    partition: tuple
    truncated: bool = False

    def word(self) -> str:
        return "".join(str(s) for s in self.symbols)

    def __len__(self):
        return len(self.symbols)


def map_partition(spec: MapSpec) -> tuple:
    """Interior discontinuities of f in increasing order: (a, eta) up to order."""
    bp, cls = classify(spec)
    if cls.tag == MapTag.M1:
        return (spec.a, bp.eta1)
    if cls.tag == MapTag.M3:
        return (bp.eta2, spec.a)
    if cls.tag == MapTag.M2:
        return (spec.a,)
    pts = []
    if cmp(spec.a, 0) > 0 and cmp(spec.a, 1) < 0:
        pts.append(spec.a)
    if cmp(bp.eta1, spec.a) >= 0 and cmp(bp.eta1, 0) > 0 and cmp(bp.eta1, 1) < 0:
        pts.append(bp.eta1)
    if cmp(bp.eta2, 0) > 0 and cmp(bp.eta2, spec.a) < 0:
        pts.append(bp.eta2)
    return tuple(sorted(pts, key=to_float))


def _symbol(x, partition) -> int:
    return sum(1 for b in partition if cmp(x, b) >= 0)


def code(spec: MapSpec, x0, n: int) -> SymbolCode:
    """Itinerary of x0 through the natural partition of f, n+1 symbols.

    An approximate iterate too close to a breakpoint ends the word, and the
    result is flagged as truncated instead of guessing the symbol.
    """
    part = map_partition(spec)
    x = as_scalar(x0)
    syms = []
    try:
        for i in range(n + 1):
            syms.append(_symbol(x, part))
            if i < n:
                x = lift_eval(spec, x)
                x = x - floor_of(x)
    except BoundaryAmbiguous:
        return SymbolCode(tuple(syms), part, truncated=True)
    return SymbolCode(tuple(syms), part)


def rotation_partition(target: RotationTarget) -> tuple[Pt, ...]:
    """Breakpoints alpha and 1 - rho as exact points, sorted.

    alpha = 0 or 1 is kept as a breakpoint so that letters keep the meaning
    they have for the map partition; the empty interval simply never occurs.
    alpha = 1 - rho merges the two breakpoints.
    """
    line = Line(target)
    al = line.alpha_pt
    one = Pt(-1, Fraction(1))
    pts = [one]
    s = line.compare(al, one)
    if s < 0:
        pts.insert(0, al)
    elif s > 0:
        pts.append(al)
    return tuple(pts)


def rotation_code(target: RotationTarget, y0, n: int) -> SymbolCode:
    line = Line(target)
    part = rotation_partition(target)
    y = line.reduce(as_point(y0))
    syms = []
    try:
        for i in range(n + 1):
            syms.append(sum(1 for b in part if line.compare(y, b) >= 0))
            y = line.reduce(Pt(y.m + 1, y.c))
    except BoundaryAmbiguous:
        return SymbolCode(tuple(syms), tuple(b.value(target.rho) for b in part), truncated=True)
    return SymbolCode(tuple(syms), tuple(b.value(target.rho) for b in part))


def complexity(word, n_max: int, periodic: bool = False, min_length: int | None = None) -> list[int]:
    """p(1..n_max): number of distinct factors of each length.

    With ``periodic`` the word is one period of a bi-infinite periodic word
    and factors wrap around, which gives the exact factor sets.  Otherwise
    the word must be long enough: by default 4 (n_max + 2 n_max + 1).
    """
    syms = tuple(word.symbols if isinstance(word, SymbolCode) else word)
    if isinstance(word, SymbolCode) and word.truncated and not periodic:
        raise InsufficientLength("word was truncated at an ambiguous symbol")
    L = len(syms)
    if periodic:
        if L == 0:
            raise InsufficientLength("empty period")
        ext = syms * (n_max // L + 2)
        return [len({ext[i:i + n] for i in range(L)}) for n in range(1, n_max + 1)]
    need = min_length if min_length is not None else 4 * (n_max + 2 * n_max + 1)
    if L < need:
        raise InsufficientLength(f"need at least {need} symbols, got {L}")
    return [len({syms[i:i + n] for i in range(L - n + 1)}) for n in range(1, n_max + 1)]


# -- attractors -----------------------------------------------------------------

@dataclass(frozen=True)
class Cycle:
    points: list
    preimages: list
    period: int
    winding: int


@dataclass(frozen=True)
class Attractor:
    kind: str  # "periodic" or "cantor_sample"
    orbits: list[Cycle] = field(default_factory=list)
    sample: list | None = None
    gaps: list | None = None
    unreported_gap_mass: Scalar | None = None


def _require_strict(spec: MapSpec, target: RotationTarget, err=None):
    fam = spec.family
    reg = region(fam, target, err=err)
    try:
        m = contains(reg, spec.delta, spec.a)
    except BoundaryAmbiguous as exc:
        raise HypothesisViolated(f"membership undecided: {exc}") from exc
    if m != Membership.INSIDE_STRICT:
        raise HypothesisViolated(f"(delta, a) is {m.value} for this target")
    return reg


def attractor(spec: MapSpec, target: RotationTarget, grid: int = 64, depth: int = 40, err=None) -> Attractor:
    _require_strict(spec, target, err)
    fam = spec.family
    if target.rational:
        p, q = target.p, target.q
        al = Fraction(target.alpha)
        bases = [Fraction(0)]
        if (al * q).denominator != 1:
            bases.append(al - int(al * q) * Fraction(1, q))  # alpha reduced into (0, 1/q)
        cycles = []
        for b in bases:
            ys = [(b + Fraction(j * p, q)) % 1 for j in range(q)]
            xs = [phi(fam, spec.delta, target, y, err=err).value for y in ys]
            wind = 0
            for j, x in enumerate(xs):
                fx = lift_eval(spec, x)
                w = floor_of(fx)
                wind += w
                nxt = xs[(j + 1) % q]
                if is_exact(fx, nxt):
                    if fx - w != nxt:
                        raise HypothesisViolated("phi does not carry the rotation orbit to an f-orbit")
                elif not (lift(fx - w) - nxt).contains(0):
                    raise HypothesisViolated("phi does not carry the rotation orbit to an f-orbit")
            cycles.append(Cycle(xs, ys, q, wind))
        return Attractor("periodic", cycles)
    line = Line(target)
    sample = []
    for i in range(grid):
        y = Fraction(i, grid)
        sample.append((y, phi(fam, spec.delta, target, y, err=err).value))
    gaps = []
    for k in range(1, depth + 1):
        for base in (Pt(k, Fraction(0)), Pt(k + line.alpha_pt.m, line.alpha_pt.c)):
            y = line.reduce(base)
            sv = phi(fam, spec.delta, target, y, err=err)
            gaps.append((y, sv.left_limit, sv.value))
    gaps.sort(key=lambda g: to_float(g[1]))
    return Attractor("cantor_sample", [], sample, gaps, fam.lam**depth)


# -- conjugacy ------------------------------------------------------------------

@dataclass(frozen=True)
class Residual:
    value: Scalar   # max over the grid of |f(phi(y)) - phi(R(y))| (midpoints in approx mode)
    bound: Scalar   # certified bound the value must respect (0 in exact mode)
    structural: int = 0  # branch decisions taken from the rotation side

    @property
    def ok(self) -> bool:
        return cmp(self.value, self.bound) <= 0 if is_exact(self.value, self.bound) else \
            to_float(self.value) <= to_float(self.bound)


def _branch(tag: MapTag, sym: int) -> tuple[int, int]:
    """(theta_a, wrap) of the map on the given partition interval."""
    if tag == MapTag.M1:
        return [(0, 0), (1, 0), (1, 1)][sym]
    if tag == MapTag.M2:
        return [(0, 0), (1, 1)][sym]
    if tag == MapTag.M3:
        return [(0, 0), (0, 1), (1, 1)][sym]
    raise HypothesisViolated("map is not in M1, M2 or M3")


def _rotation_symbol(line: Line, part, y: Pt) -> int:
    return sum(1 for b in part if line.compare(y, b) >= 0)


class _Driver:
    """Evaluates f on attractor points phi(y) with certified branch choices.

    The branch is read off numerically when the comparison with the
    breakpoints is decidable.  Otherwise it is taken from the position of y
    relative to alpha and 1 - rho: phi is non-decreasing with phi(alpha) = a,
    so this is a certified decision, not a guess.  Any decidable numerical
    comparison that disagrees raises HypothesisViolated.
    """

    def __init__(self, spec: MapSpec, target: RotationTarget):
        self.spec = spec
        self.target = target
        self.tag = classify(spec)[1].tag
        self.part = map_partition(spec)
        self.line = Line(target)
        self.rpart = rotation_partition(target)
        if len(self.rpart) != len(self.part):
            raise HypothesisViolated("map class does not match the position of alpha")
        self.structural = 0

    def symbol(self, x, y: Pt) -> int:
        rs = _rotation_symbol(self.line, self.rpart, y)
        try:
            ms = _symbol(x, self.part)
        except BoundaryAmbiguous:
            self.structural += 1
            return rs
        if ms != rs:
            raise HypothesisViolated(f"code mismatch at y = {y}: map {ms}, rotation {rs}")
        return ms

    def step(self, x, sym: int):
        th, w = _branch(self.tag, sym)
        s = self.spec
        return s.lam * x + s.delta + s.d * th - w


def conjugacy_residual(spec: MapSpec, target: RotationTarget, grid, err=None) -> Residual:
    """max |f(phi(y)) - phi(R(y))| over the grid, with its certified bound."""
    _require_strict(spec, target, err)
    fam = spec.family
    drv = _Driver(spec, target)
    line = drv.line
    worst = Fraction(0)
    bound = Fraction(0)
    exact = spec.exact and target.rational
    for y in grid:
        ypt = line.reduce(as_point(y))
        ry = line.reduce(Pt(ypt.m + 1, ypt.c))
        if target.rational:
            ypt, ry = Pt(0, ypt.value(target.rho)), Pt(0, ry.value(target.rho))
        x = phi(fam, spec.delta, target, ypt, err=err).value
        fx = drv.step(x, drv.symbol(x, ypt))
        rhs = phi(fam, spec.delta, target, ry, err=err).value
        diff = fx - rhs
        if exact:
            worst = max(worst, abs(diff))
        else:
            d = lift(diff)
            worst = max(worst, Fraction(abs(float(d.value))))
            bound = max(bound, Fraction(float(d.err)))
    return Residual(worst, bound, drv.structural)


def attractor_code(spec: MapSpec, target: RotationTarget, y0, n: int, check_every: int = 0,
                   err=None) -> SymbolCode:
    """Code of the f-orbit of the attractor point phi(y0), n+1 symbols.

    Iterates f itself from phi(y0).  Attractor points come closer to the
    breakpoints than any fixed precision can resolve (the separation decays
    like lambda^k with k in the thousands over a few thousand steps), so
    branch choices use the certified rule of ``_Driver``.  Every
    ``check_every`` steps the iterate is compared with an independent
    evaluation of phi on the rotated point.
    """
    fam = spec.family
    drv = _Driver(spec, target)
    line = drv.line
    y = line.reduce(as_point(y0))
    x = phi(fam, spec.delta, target, y, err=err).value
    syms = []
    for i in range(n + 1):
        s = drv.symbol(x, y)
        syms.append(s)
        if i == n:
            break
        x = drv.step(x, s)
        y = line.reduce(Pt(y.m + 1, y.c))
        if target.rational:
            y = Pt(0, y.value(target.rho))
        if check_every and (i + 1) % check_every == 0:
            ref = phi(fam, spec.delta, target, y, err=err).value
            if is_exact(x, ref):
                drifted = x != ref
            else:
                drifted = not lift(x - ref).contains(0)
            if drifted:
                raise HypothesisViolated(f"orbit left phi's image at step {i + 1}")
    return SymbolCode(tuple(syms), drv.part)


# -- generalized inverse --------------------------------------------------------

def _surely(x, y, sign: int) -> bool:
    """cmp(x, y) == sign, False when undecidable."""
    try:
        return cmp(x, y) == sign
    except BoundaryAmbiguous:
        return False


def generalized_inverse(fam: Family, delta, target: RotationTarget, x, tol=Fraction(1, 2**40), err=None) -> Scalar:
    """inf { y in [0, 1) : phi(y) >= x }.

    Exact for rational rho (phi is a step function whose steps sit on the
    grid (1/q)Z and alpha + (1/q)Z).  For irrational rho a bisection returns
    an enclosure, stopping early when phi can no longer be compared with x.
    """
    x = as_scalar(x)
    lo_v = phi(fam, delta, target, 0, err=err)
    # Only a decidable violation is an error: an approximate x may equal phi(0).
    if _surely(x, lo_v.value, -1):
        raise OutOfRange("x must lie in [phi(0), phi(1-))")
    # For rational rho, phi(1-) is attained on the last step and is allowed.
    top = lo_v.left_limit + 1
    if _surely(x, top, 1) or (not target.rational and _surely(x, top, 0)):
        raise OutOfRange("x must lie in [phi(0), phi(1-))")
    if target.rational:
        q = target.q
        al = Fraction(target.alpha)
        steps = sorted({Fraction(i, q) for i in range(q)} | {(al + Fraction(i, q)) % 1 for i in range(q)})
        for y in steps:
            if cmp(phi(fam, delta, target, y, err=err).value, x) >= 0:
                return y
        raise OutOfRange("x lies above every step of phi")
    if _surely(lo_v.value, x, 1) or _surely(lo_v.value, x, 0):
        return Fraction(0)
    lo, hi = Fraction(0), Fraction(1)  # phi(lo) < x and the infimum lies in [lo, hi]
    while hi - lo > tol:
        mid = (lo + hi) / 2
        try:
            s = cmp(phi(fam, delta, target, mid, err=err).value, x)
        except BoundaryAmbiguous:
            break
        if s >= 0:
            hi = mid
        else:
            lo = mid
    return Approx((lo + hi) / 2, (hi - lo) / 2)
