"""Rotation numbers of given maps and the inverse problem (delta, a) -> (rho, alpha)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

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
    fixed_point_check,
    floor_of,
    in_m,
    is_exact,
    lift,
    to_float,
)
from .regions import Membership, contains, region
from .series import RotationTarget, delta_of, phi

Q_CAP = 64
CYCLE_EPS = 1e-12


class FixedPointRegion(ValueError):
    pass


class Inconclusive(ArithmeticError):
    pass


class OutOfDomain(ValueError):
    pass


@dataclass(frozen=True)
class RotationEstimate:
    lower: Scalar
    upper: Scalar
    exact: Fraction | None = None
    winding: int | None = None
    period: int | None = None
    iterations: int = 0


# -- rotation number of a map --------------------------------------------------------

def _floats(spec: MapSpec):
    return tuple(to_float(v) for v in (spec.lam, spec.d, spec.delta, spec.a))


def _step_exact(spec: MapSpec, x):
    """One step of f returning (x', theta, wrap)."""
    th = 1 if cmp(x, spec.a) >= 0 else 0
    y = spec.lam * x + spec.delta + spec.d * th
    w = floor_of(y)
    return y - w, th, w


def _confirm_cycle(spec: MapSpec, branches: list[tuple[int, int]]):
    """Exact (or certified) periodic point following the given branch word, or None."""
    lam, d, delta = spec.lam, spec.d, spec.delta
    # composition of x -> lam x + delta + d th - w over the word
    c = 0
    for th, w in branches:
        c = lam * c + delta + d * th - w
    q = len(branches)
    x0 = c / (1 - lam**q)
    x = x0
    wind = 0
    try:
        if cmp(x, 0) < 0 or cmp(x, 1) >= 0:
            return None
        for th, w in branches:
            x, th2, w2 = _step_exact(spec, x)
            if (th2, w2) != (th, w):
                return None
            wind += w
    except BoundaryAmbiguous:
        return None
    return x0, wind


def _certified_bracket(spec: MapSpec, n: int):
    x = Fraction(0) if spec.exact else lift(0)
    total = 0
    done = 0
    try:
        for _ in range(n):
            x, _, w = _step_exact(spec, x)
            total += w
            done += 1
    except BoundaryAmbiguous:
        pass
    if done == 0:
        return Fraction(0), Fraction(1), 0
    lift_val = x + total
    lo = (lift_val - 1) / done
    hi = (lift_val + 1) / done
    if cmp(lo, 0) < 0:
        lo = Fraction(0)
    if cmp(hi, 1) > 0:
        hi = Fraction(1)
    return lo, hi, done


def rotation_number(spec: MapSpec, n_max: int = 10000, eps: float = CYCLE_EPS,
                    q_cap: int = Q_CAP, width=None, bracket_steps: int = 200) -> RotationEstimate:
    """Certified bracket for the rotation number, exact when a cycle is found.

    Cycle search runs in binary64 from x = 0; a candidate period is accepted
    only after the periodic point of the observed branch word is recomputed
    exactly (or with certified error) and shown to follow that word.
    """
    if n_max < 1:
        raise ValueError("n_max must be positive")
    fp = fixed_point_check(spec)
    if fp.region != "none":
        return RotationEstimate(Fraction(0), Fraction(0), Fraction(0), 0, 1, 0)
    lam, d, delta, a = _floats(spec)
    xs = [0.0]
    br: list[tuple[int, int]] = []
    x = 0.0
    for n in range(1, n_max + 1):
        th = 1 if x >= a else 0
        y = lam * x + delta + d * th
        w = math.floor(y)
        x = y - w
        xs.append(x)
        br.append((th, w))
        if n % 8 == 0 or n == n_max:
            for j in range(1, min(q_cap, n) + 1):
                if abs(xs[n] - xs[n - j]) < eps:
                    got = _confirm_cycle(spec, br[n - j:n])
                    if got is not None:
                        _, p = got
                        r = Fraction(p, j)
                        return RotationEstimate(r, r, r, r.numerator, r.denominator, n)
                    break
    lo, hi, done = _certified_bracket(spec, min(n_max, bracket_steps))
    if width is not None and cmp(hi - lo, width) > 0:
        raise Inconclusive(f"no cycle found and bracket [{to_float(lo)}, {to_float(hi)}] is too wide")
    return RotationEstimate(lo, hi, None, None, None, done)


# -- the monotone constructions for the inverse problem ---------------------------

@lru_cache(maxsize=65536)
def _delta_pair(fam: Family, rho: Fraction, alpha: Fraction):
    sv = delta_of(fam, RotationTarget(rho, alpha, allow_edge=True))
    return sv.left_limit, sv.value


def _check_delta(fam: Family, delta):
    if cmp(delta, 1 - fam.lam - fam.d) <= 0 or cmp(delta, 1) >= 0:
        raise OutOfDomain("delta must lie in (1 - lambda - d, 1)")


def rho_delta(fam: Family, delta, alpha, tol=Fraction(1, 2**30), q_cap: int = Q_CAP) -> Scalar:
    """min { rho in [0, 1] : delta(rho, alpha) >= delta }.

    Walks the Stern-Brocot tree with exact plateau tests up to denominator
    q_cap, then bisects at dyadic points with certified evaluations.  Returns
    a Fraction when a plateau (or the window at rho = 0 or 1) is hit, else an
    Approx enclosure of width at most tol.
    """
    delta, alpha = as_scalar(delta), as_scalar(alpha)
    _check_delta(fam, delta)
    lam, d = fam.lam, fam.d
    at_zero = 1 - lam - d + (d if alpha == 1 else 0)
    if cmp(delta, at_zero) <= 0:
        return Fraction(0)
    below_one = 1 - (d if alpha == 0 else 0)
    if cmp(delta, below_one) > 0:
        return Fraction(1)
    exact = is_exact(delta, alpha) and fam.exact
    lo, hi = Fraction(0), Fraction(1)
    while True:
        m = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        if m.denominator > q_cap:
            break
        if exact:
            left, val = _delta_pair(fam, m, alpha)
        else:
            sv = delta_of(fam, RotationTarget(m, alpha))
            left, val = sv.left_limit, sv.value
        if cmp(delta, left) < 0:
            hi = m
        elif cmp(delta, val) > 0:
            lo = m
        else:
            return m
    tol = as_scalar(tol)
    while cmp(hi - lo, tol) > 0:
        mid = (lo + hi) / 2
        try:
            v = delta_of(fam, RotationTarget(mid, alpha), mode="approx").value
            s = cmp(v, delta)
        except BoundaryAmbiguous:
            break
        if s >= 0:
            hi = mid
        else:
            lo = mid
    return Approx((lo + hi) / 2, (hi - lo) / 2)


def _phi_at(fam: Family, delta, rho, alpha, y, left: bool = False) -> Scalar:
    if is_exact(rho):
        sv = phi(fam, delta, RotationTarget(rho, alpha, allow_edge=True), y)
        return sv.left_limit if left else sv.value
    # a(delta, ., alpha) is non-increasing in rho, so the enclosure of rho
    # maps to an enclosure of the value.
    lo, hi = lift(rho).bounds()
    lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
    mode = "approx"
    v_hi = lift(phi(fam, delta, RotationTarget(lo, alpha, allow_edge=True), y, mode=mode).value)
    v_lo = lift(phi(fam, delta, RotationTarget(hi, alpha, allow_edge=True), y, mode=mode).left_limit)
    bottom, top = v_lo.lo, v_hi.hi
    return Approx((bottom + top) / 2, (top - bottom) / 2)


def big_phi(fam: Family, delta, alpha, tol=Fraction(1, 2**30)) -> Scalar:
    """Phi_delta(alpha) = phi_{delta, rho_delta(alpha), alpha}(alpha)."""
    delta, alpha = as_scalar(delta), as_scalar(alpha)
    rho = rho_delta(fam, delta, alpha, tol)
    return _phi_at(fam, delta, rho, alpha, alpha)


def big_phi_left_one_bound(fam: Family, delta, tol=Fraction(1, 2**30)) -> Scalar:
    """Lower bound phi_{delta, rho_delta(1), 1}(1-) for Phi_delta(1-)."""
    rho = rho_delta(fam, delta, Fraction(1), tol)
    return _phi_at(fam, delta, rho, Fraction(1), Fraction(1), left=True)


# -- inverse ---------------------------------------------------------------------

@dataclass(frozen=True)
class InverseCertificate:
    rho: Scalar
    alpha: Scalar
    delta_check: bool
    a_check: bool
    membership: str
    case: int


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Fraction of least denominator in the open interval (lo, hi), 0 <= lo < hi."""
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    if fl == lo:
        # (n, hi) with hi <= n + 1: recurse on the reciprocal of the fractional part
        return fl + 1 / _simplest_above(1 / (hi - fl))
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def _simplest_above(x: Fraction) -> Fraction:
    """Simplest fraction in (x, infinity)."""
    return Fraction(math.floor(x) + 1)


@lru_cache(maxsize=4096)
def _region_cached(fam: Family, rho: Fraction, alpha: Fraction):
    return region(fam, RotationTarget(rho, alpha))


def _canonical_alphas(q: int) -> list[Fraction]:
    return sorted({Fraction(l, q) for l in range(q + 1)} | {Fraction(2 * l + 1, 2 * q) for l in range(q)})


def _try(fam: Family, delta, a, rho, alphas, case: int, tag: MapTag):
    """Best certified region among the candidate alphas.

    Candidates are ranked by agreement with the map class (alpha below,
    equal to or above 1 - rho), then strict membership, then alpha off the
    grid i/q, whose region is the smallest and carries both cycles.
    """
    if not is_exact(rho) or rho <= 0 or rho >= 1:
        return None
    best = None
    for al in alphas:
        reg = _region_cached(fam, rho, al) if is_exact(al) and fam.exact else region(fam, RotationTarget(rho, al))
        m = contains(reg, delta, a)
        if m == Membership.OUTSIDE:
            continue
        s = cmp(al, 1 - rho)
        fits = (tag == MapTag.M1 and s <= 0) or (tag == MapTag.M2 and s == 0) or (tag == MapTag.M3 and s >= 0)
        off_grid = (al * rho.denominator).denominator != 1
        rank = (fits, m == Membership.INSIDE_STRICT, off_grid)
        if best is None or rank > best[0]:
            dchk = cmp(reg.delta_lo, delta) <= 0 and cmp(delta, reg.delta_hi) <= 0
            lo, hi = reg.a_interval(delta)
            achk = cmp(lo, a) <= 0 and cmp(a, hi) <= 0
            best = (rank, InverseCertificate(rho, al, dchk, achk, m.value, case))
    return best[1] if best else None


def invert(fam: Family, delta, a, tol=Fraction(1, 2**24)) -> InverseCertificate:
    """Recover (rho, alpha) with (delta, a) in the closed region P_{rho, alpha}."""
    delta, a = as_scalar(delta), as_scalar(a)
    spec = MapSpec(fam.lam, fam.d, delta, a)
    if not in_m(spec):
        raise OutOfDomain("delta must lie in (1 - lambda - d, 1)")
    if fixed_point_check(spec).region != "none":
        raise FixedPointRegion("(delta, a) lies in a fixed-point region; rotation number 0")
    lam, d = fam.lam, fam.d
    tag = classify(spec)[1].tag

    def attempt(alpha, case):
        rho = rho_delta(fam, delta, alpha)
        if not is_exact(rho):
            return None, rho
        alphas = [alpha] + [al for al in _canonical_alphas(rho.denominator) if al != alpha]
        return _try(fam, delta, a, rho, alphas, case, tag), rho

    if cmp(delta, 1 - d) < 0 and cmp(a, big_phi(fam, delta, 0)) <= 0:
        got, _ = attempt(Fraction(0), 1)
        if got:
            return got
    if cmp(delta, 1 - lam) > 0 and cmp(a, big_phi_left_one_bound(fam, delta)) >= 0:
        got, _ = attempt(Fraction(1), 2)
        if got:
            return got
    lo, hi = Fraction(0), Fraction(1)
    tol = as_scalar(tol)
    tried = set()
    while cmp(hi - lo, tol) > 0:
        # alpha_delta(a) is often a grid point l/q, which dyadic midpoints never
        # hit, so the simplest rational of the bracket is tried first.
        simple = _simplest_between(lo, hi)
        if simple not in tried and simple.denominator <= Q_CAP:
            tried.add(simple)
            got, _ = attempt(simple, 3)
            if got:
                return got
        mid = (lo + hi) / 2
        got, rho = attempt(mid, 3)
        if got:
            return got
        try:
            s = cmp(_phi_at(fam, delta, rho, mid, mid), a)
        except BoundaryAmbiguous:
            break
        if s >= 0:
            hi = mid
        else:
            lo = mid
    raise Inconclusive(f"no certified (rho, alpha) found; alpha in [{lo}, {hi}]")
