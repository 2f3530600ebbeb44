"""Boundary functions delta(rho, alpha), a(delta, rho, alpha) and the map phi.

Every quantity here is a series sum_k lambda^k psi(z_k) along an arithmetic
progression z_k = y +/- k rho.  For rational rho = p/q the summand is periodic
up to a known drift, so the series collapses to q terms and stays exact.
Otherwise the series is truncated with a certified tail.

One-sided limits are never taken numerically.  Each sided value equals the
value minus the total jump of the summands, and that jump series is again
summed in closed form (rational rho) or decided term by term on the lattice
Z rho + Q (irrational rho with a declared resonance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .core import (
    _CTX,
    _SAFETY,
    WORK_PREC,
    Approx,
    BoundaryAmbiguous,
    Family,
    Scalar,
    as_scalar,
    cmp,
    floor_of,
    is_exact,
    lift,
    to_float,
)

DEFAULT_ERR = Fraction(1, 2**100)
N_MAX = 4096


class PrecisionExhausted(ArithmeticError):
    pass


@dataclass(frozen=True)
class RotationTarget:
    """A rotation number rho with coding parameter alpha.

    Exact rho is always treated as rational p/q.  An ``Approx`` rho stands for
    an irrational number; alpha may then be declared as alpha = {k rho} by
    passing ``k``, which is the only way the gap at a resonance is detected.
    """

    rho: Scalar
    alpha: Scalar | None = None
    k: int | None = None
    allow_edge: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        rho = as_scalar(self.rho)
        object.__setattr__(self, "rho", rho)
        if self.k is not None:
            alpha = rho * self.k
            alpha = alpha - floor_of(alpha)
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is None:
            raise ValueError("give alpha or a resonance index k")
        else:
            object.__setattr__(self, "alpha", as_scalar(self.alpha))
        lo_ok = cmp(rho, 0) >= 0 if self.allow_edge else cmp(rho, 0) > 0
        hi_ok = cmp(rho, 1) <= 0 if self.allow_edge else cmp(rho, 1) < 0
        if not (lo_ok and hi_ok):
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        if cmp(self.alpha, 0) < 0 or cmp(self.alpha, 1) > 0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")

    @property
    def rational(self) -> bool:
        return is_exact(self.rho)

    @property
    def p(self) -> int:
        return Fraction(self.rho).numerator

    @property
    def q(self) -> int:
        return Fraction(self.rho).denominator

    def with_alpha(self, alpha) -> "RotationTarget":
        return RotationTarget(self.rho, alpha, allow_edge=self.allow_edge)


@dataclass(frozen=True)
class SidedValue:
    """A value together with its one-sided companion.

    For delta the companion is delta(rho-, alpha), for a it is a(delta, rho+,
    alpha), for phi it is phi(y-).
    """

    value: Scalar
    left_limit: Scalar
    caveat: bool = False

    @property
    def gap(self) -> Scalar:
        return self.value - self.left_limit


@dataclass(frozen=True)
class Pt:
    """The point m * rho + c of the line; c is a Fraction unless alpha is free."""

    m: int
    c: Scalar

    def shift(self, dm: int, dc=0) -> "Pt":
        return Pt(self.m + dm, self.c + dc)

    def value(self, rho) -> Scalar:
        if self.m == 0:
            return self.c
        return rho * self.m + self.c


def as_point(y) -> Pt:
    return y if isinstance(y, Pt) else Pt(0, as_scalar(y))


def tail_bound(N: int, lam, d, rho, alpha, y) -> Scalar:
    """Bound on |sum_{k>N} lambda^k psi_alpha(y - k rho)|.

    Uses |psi(z)| <= (1 - lambda)(|z| + 1) + d and |z| <= |y| + k|rho|.
    ``alpha`` does not enter the bound but is accepted for symmetry.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    lam, d, rho, y = (as_scalar(v) for v in (lam, d, rho, y))
    if cmp(rho, 0) < 0:
        rho = -rho
    if cmp(y, 0) < 0:
        y = -y
    lp = lam ** (N + 1)
    first = (1 - lam) * rho * lp * ((N + 1) - N * lam) / (1 - lam) ** 2
    second = ((1 - lam) * (y + 1) + d) * lp / (1 - lam)
    return first + second


@lru_cache(maxsize=4096)
def _terms_needed(lam: float, d: float, rho: float, y: float, log_err: float) -> int:
    # Log-space search on a slightly inflated bound, so float rounding can
    # only make N larger.  The certified tail is recomputed afterwards.
    def log_bound(n: int) -> float:
        lp = (n + 1) * math.log(lam)
        a = (1 - lam) * rho * ((n + 1) - n * lam) / (1 - lam) ** 2
        b = ((1 - lam) * (y + 1) + d) / (1 - lam)
        return lp + math.log(a + b) + 1e-9

    lo, hi = 1, N_MAX
    if log_bound(hi) > log_err:
        return N_MAX + 1
    while lo < hi:
        mid = (lo + hi) // 2
        if log_bound(mid) <= log_err:
            hi = mid
        else:
            lo = mid + 1
    return lo


def choose_terms(lam, d, rho, y, err) -> int:
    """Smallest N whose tail bound is at most err (capped at N_MAX)."""
    up = 1 + 1e-12
    n = _terms_needed(
        min(to_float(lam) * up + 1e-300, 1 - 1e-300),
        to_float(d) * up,
        abs(to_float(rho)) * up + 1e-300,
        math.ceil(abs(to_float(y)) * 16 + 1) / 16,
        math.log(to_float(err)) if to_float(err) > 0 else -math.inf,
    )
    if n > N_MAX:
        raise PrecisionExhausted(f"tail bound cannot reach {to_float(err):.3g} within {N_MAX} terms")
    return n


class Line:
    """Exact bookkeeping on the line Z rho + Q for one target.

    Points m*rho + c with a rational c are compared exactly whenever the
    answer is forced (rho rational, or m = 0, or an irrational multiple that
    can never hit a rational); only the remaining cases fall back to a
    certified numerical comparison.
    """

    def __init__(self, target: RotationTarget):
        self.target = target
        self.rho = target.rho
        self.caveat = False
        if target.k is not None and not target.rational:
            kr = self.rho * target.k
            self.alpha_pt = Pt(target.k, Fraction(-floor_of(kr)))
        else:
            self.alpha_pt = Pt(0, target.alpha)
            if not is_exact(target.alpha) and not target.rational:
                # alpha is an opaque approximation: resonances are invisible.
                self.caveat = True
        self.beta_pt = Pt(-self.alpha_pt.m, 1 - self.alpha_pt.c)
        if not target.rational:
            r = lift(self.rho)
            self._rho_f = float(r.value)
            self._rho_e = float(abs(r.value - self._rho_f) + r.err) * 1.01

    def _exactly_known(self, pt: Pt) -> bool:
        return is_exact(pt.c) and (pt.m == 0 or is_exact(self.rho))

    def _fast_floor(self, pt: Pt):
        """Floor via binary64 when the point is far from an integer, else None."""
        if not is_exact(pt.c) or is_exact(self.rho):
            return None
        cf = float(pt.c)
        mr = pt.m * self._rho_f
        z = mr + cf
        n = math.floor(z)
        margin = abs(pt.m) * self._rho_e + 4e-15 * (abs(mr) + abs(cf) + 1)
        if z - n > margin and n + 1 - z > margin:
            return n
        return None

    def floor(self, pt: Pt) -> int:
        if self._exactly_known(pt):
            return math.floor(pt.value(self.rho))
        f = self._fast_floor(pt)
        if f is not None:
            return f
        return floor_of(lift(pt.value(self.rho)))

    def sign(self, pt: Pt) -> int:
        """Certified sign of the point's value."""
        if self._exactly_known(pt):
            v = pt.value(self.rho)
            return (v > 0) - (v < 0)
        f = self._fast_floor(pt)
        if f is not None:
            return 1 if f >= 0 else -1
        return cmp(pt.value(self.rho), 0)

    def compare(self, p1: Pt, p2: Pt) -> int:
        return self.sign(Pt(p1.m - p2.m, p1.c - p2.c))

    def reduce(self, pt: Pt) -> Pt:
        """The same point moved into [0, 1)."""
        n = self.floor(pt)
        return Pt(pt.m, pt.c - n) if n else pt

    def is_integer(self, pt: Pt) -> bool:
        if self._exactly_known(pt):
            return Fraction(pt.value(self.rho)).denominator == 1
        if pt.m != 0 and is_exact(pt.c):
            return False  # irrational multiple plus a rational is never an integer
        self.caveat = True
        return False

    def psi_parts(self, beta: Pt, z: Pt) -> tuple[int, int]:
        n = self.floor(z)
        diff = Pt(z.m - beta.m, z.c - n - beta.c)
        return n, 1 if self.sign(diff) >= 0 else 0

    def jump_parts(self, beta: Pt, z: Pt) -> tuple[int, int]:
        on_int = 1 if self.is_integer(z) else 0
        on_beta = 1 if self.is_integer(Pt(z.m - beta.m, z.c - beta.c)) else 0
        return on_int, on_beta


class _Frame:
    """Series evaluator bound to one family and one target."""

    def __init__(self, fam: Family, target: RotationTarget, truncate: bool, err):
        self.fam = fam
        self.lam, self.d = fam.lam, fam.d
        self.target = target
        self.rho = target.rho
        self.periodic = target.rational and not truncate
        self.err = as_scalar(err) if err is not None else DEFAULT_ERR
        self.line = Line(target)
        self.alpha_pt = self.line.alpha_pt
        self.beta_pt = self.line.beta_pt
        self.psi_parts = self.line.psi_parts
        self.jump_parts = self.line.jump_parts

    @property
    def caveat(self) -> bool:
        return self.line.caveat

    # -- sums ---------------------------------------------------------------
    def _steps(self, y: Pt, s: int, n: int):
        rho = self.rho
        if self.periodic:
            yv = y.value(rho)
            for r in range(1, n + 1):
                yield r, Pt(0, yv + s * r * rho)
        else:
            for r in range(1, n + 1):
                yield r, Pt(y.m + s * r, y.c)

    def S(self, beta: Pt, y: Pt, s: int) -> Scalar:
        """sum_{k>=1} lambda^k psi_beta(y + s k rho)."""
        lam, d = self.lam, self.d
        if self.periodic:
            q, p = self.target.q, self.target.p
            fast = self._int_parts(beta, y, s, q) if self.fam.exact else None
            if fast is not None:
                acc_n = _poly(lam, fast[0])
                acc_t = _poly(lam, fast[1])
                total = (1 - lam) * acc_n + d * acc_t + s * p * lam ** (q + 1)
                return total / (1 - lam**q)
            acc_n = 0
            acc_t = 0
            for r, z in self._steps(y, s, q):
                n, t = self.psi_parts(beta, z)
                w = lam**r
                acc_n = acc_n + w * n
                acc_t = acc_t + w * t
            total = (1 - lam) * acc_n + d * acc_t + s * p * lam ** (q + 1)
            return total / (1 - lam**q)
        yv = y.value(self.rho)
        N = choose_terms(lam, d, self.rho, yv, self.err)
        fast = self._int_parts(beta, y, s, N)
        if fast is not None:
            ns, ts = fast[0], fast[1]
        elif self._on_line(beta, y):
            ns, ts = self._line_parts(beta, y, s, N)
        else:
            ns, ts = [], []
            for _, z in self._steps(y, s, N):
                n, t = self.psi_parts(beta, z)
                ns.append(n)
                ts.append(t)
        A = _horner(lam, ns)
        B = _horner(lam, ts)
        tail = tail_bound(N, lift(lam), lift(d), lift(self.rho), 0, lift(yv))
        out = (1 - lam) * A + d * B
        return Approx(out.value, (out.err + tail.value + tail.err) * _SAFETY)

    def J(self, beta: Pt, y: Pt, s: int) -> Scalar:
        """sum_{k>=1} lambda^k jump_beta(y + s k rho)."""
        lam, d = self.lam, self.d
        c1, c2 = 1 - lam - d, d
        if self.periodic:
            q = self.target.q
            fast = self._int_parts(beta, y, s, q) if self.fam.exact else None
            if fast is not None:
                return (c1 * _poly(lam, fast[2]) + c2 * _poly(lam, fast[3])) / (1 - lam**q)
            acc = 0
            for r, z in self._steps(y, s, q):
                i1, i2 = self.jump_parts(beta, z)
                if i1 or i2:
                    acc = acc + lam**r * (c1 * i1 + c2 * i2)
            return acc / (1 - lam**q)
        if self._on_line(beta, y):
            # Off the rational case the summand can only jump where the
            # coefficient of rho vanishes, so the full series has at most two
            # nonzero terms and is summed exactly.
            acc = 0
            for coeff, m, c in ((c1, y.m, y.c), (c2, y.m - beta.m, y.c - beta.c)):
                if m * s < 0 and Fraction(c).denominator == 1:
                    acc = acc + coeff * lam ** abs(m)
            return acc
        yv = y.value(self.rho)
        N = choose_terms(lam, d, self.rho, yv, self.err)
        fast = self._int_parts(beta, y, s, N)
        if fast is not None:
            i1s, i2s = fast[2], fast[3]
        else:
            i1s, i2s = [], []
            for _, z in self._steps(y, s, N):
                i1, i2 = self.jump_parts(beta, z)
                i1s.append(i1)
                i2s.append(i2)
        out = c1 * _horner(lam, i1s) + c2 * _horner(lam, i2s)
        # every omitted jump is at most 1 - lambda, so the tail is below lambda^(N+1)
        tail = lift(lam ** (N + 1))
        return Approx(out.value, (out.err + tail.value + tail.err) * _SAFETY)


    def _int_parts(self, beta: Pt, y: Pt, s: int, count: int):
        """Floors, steps and jump indicators of the first ``count`` terms in
        integer arithmetic, for rational rho and exact points; None otherwise."""
        if not self.target.rational:
            return None
        rho = self.rho
        yv, bv = y.value(rho), beta.value(rho)
        if not is_exact(yv, bv):
            return None
        yv, bv = Fraction(yv), Fraction(bv)
        q, p = self.target.q, self.target.p
        den = math.lcm(yv.denominator, bv.denominator, q)
        Y, B, P = yv.numerator * (den // yv.denominator), bv.numerator * (den // bv.denominator), p * (den // q)
        ns, ts, i1s, i2s = [], [], [], []
        for r in range(1, count + 1):
            Z = Y + s * r * P
            n, rem = divmod(Z, den)
            ns.append(n)
            ts.append(1 if rem >= B else 0)
            i1s.append(1 if rem == 0 else 0)
            i2s.append(1 if (Z - B) % den == 0 else 0)
        return ns, ts, i1s, i2s

    def _on_line(self, beta: Pt, y: Pt) -> bool:
        return not self.target.rational and is_exact(beta.c, y.c)

    def _line_parts(self, beta: Pt, y: Pt, s: int, N: int):
        """Floors and steps of psi_beta(y + s k rho) for k = 1..N, decided in
        binary64 with a rigorous margin and re-decided exactly when too close."""
        line = self.line
        rf, re = line._rho_f, line._rho_e
        c0 = float(y.c)
        cb = float(beta.c)
        ns, ts = [], []
        for k in range(1, N + 1):
            m = y.m + s * k
            mr = m * rf
            z = mr + c0
            n = math.floor(z)
            margin = abs(m) * re + 4e-15 * (abs(mr) + abs(c0) + 1)
            if not (z - n > margin and n + 1 - z > margin):
                n = line.floor(Pt(m, y.c))
            dm = m - beta.m
            if dm == 0:
                t = 1 if y.c - n - beta.c >= 0 else 0
            else:
                w = dm * rf + (c0 - n - cb)
                margin = abs(dm) * re + 4e-15 * (abs(dm * rf) + abs(c0) + abs(n) + abs(cb) + 1)
                if w > margin:
                    t = 1
                elif w < -margin:
                    t = 0
                else:
                    t = 1 if line.sign(Pt(dm, y.c - n - beta.c)) >= 0 else 0
            ns.append(n)
            ts.append(t)
        return ns, ts


def _poly(lam: Fraction, coeffs: list[int]) -> Fraction:
    """sum_{r=1}^q lam^r coeffs[r-1], exactly, over the common denominator v^q."""
    u, v = lam.numerator, lam.denominator
    acc = 0
    vpow = 1
    for c in reversed(coeffs):
        acc = acc * u + c * vpow
        vpow *= v
    # acc = sum_r c_r u^(r-1) v^(q-r); one more factor u/v gives lam^r
    return Fraction(acc * u, vpow)


def _horner(lam, coeffs: list[int]) -> Approx:
    """sum_{k=1}^N lam^k coeffs[k-1] evaluated in the working precision.

    Rounding: each Horner step contributes at most two roundings relative to
    the partial sum, which is bounded by sum lam^k |c_k|; the error in lam
    itself is propagated through the derivative bound sum k lam^(k-1) |c_k|.
    """
    if is_exact(lam):
        # Integer Horner on the scaled sum: exact, then one rounding.
        P, Q = Fraction(lam).numerator, Fraction(lam).denominator
        acc = 0
        qpow = 1
        for c in reversed(coeffs):
            acc = c * qpow + P * acc
            qpow *= Q
        num = P * acc
        den = qpow
        v = _CTX.mpf(num) / den if num else _CTX.mpf(0)
        return Approx(v, abs(v) * 2.0 ** (2 - WORK_PREC))
    L = lift(lam)
    lv = L.value
    acc = _CTX.mpf(0)
    for c in reversed(coeffs):
        acc = (acc + c) * lv
    N = len(coeffs)
    lf = min(float(lv) + float(L.err), 1.0)
    mag = 0.0
    dmag = 0.0
    pw = 1.0
    for k, c in enumerate(coeffs, start=1):
        if c:
            mag += pw * lf * abs(c)
            dmag += k * pw * abs(c)
        pw *= lf
    ulp = 2.0 ** (1 - WORK_PREC)
    err = (4 * N + 8) * ulp * (mag + 1) + float(L.err) * dmag * 1.01
    return Approx(acc, _CTX.mpf(err) * 2)


def _frame(fam: Family, target: RotationTarget, mode: str, err) -> _Frame:
    if mode not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact" and not (target.rational and fam.exact and is_exact(target.alpha)):
        raise ValueError("exact mode needs rational rho and exact lambda, d, alpha")
    return _Frame(fam, target, truncate=(mode == "approx"), err=err)


def delta_of(fam: Family, target: RotationTarget, mode: str = "auto", err=None) -> SidedValue:
    """delta(rho, alpha) and delta(rho-, alpha)."""
    fr = _frame(fam, target, mode, err)
    lam, d = fam.lam, fam.d
    scale = (1 - lam) / lam
    zero = Pt(0, Fraction(0))
    value = 1 - lam - d + scale * fr.S(fr.beta_pt, zero, +1)
    left = value - scale * fr.J(fr.beta_pt, zero, +1)
    return SidedValue(value, left, fr.caveat)


def a_offsets(fam: Family, target: RotationTarget, mode: str = "auto", err=None) -> SidedValue:
    """a(delta, rho, alpha) - delta/(1 - lambda), with the rho+ companion."""
    fr = _frame(fam, target, mode, err)
    hi = fr.S(fr.alpha_pt, fr.alpha_pt, -1) / fam.lam
    lo = hi - fr.J(fr.alpha_pt, fr.alpha_pt, -1) / fam.lam
    return SidedValue(hi, lo, fr.caveat)


def a_of(fam: Family, delta, target: RotationTarget, mode: str = "auto", err=None) -> SidedValue:
    """a(delta, rho, alpha) with a(delta, rho+, alpha) in ``left_limit``."""
    delta = as_scalar(delta)
    off = a_offsets(fam, target, mode, err)
    base = delta / (1 - fam.lam)
    return SidedValue(base + off.value, base + off.left_limit, off.caveat)


def phi(fam: Family, delta, target: RotationTarget, y, mode: str = "auto", err=None) -> SidedValue:
    """phi_{delta,rho,alpha}(y) and phi(y-).

    ``y`` may be a plain scalar or a ``Pt`` m*rho + c, the latter keeping
    decisions exact on rotation orbits of an irrational rho.
    """
    delta = as_scalar(delta)
    fr = _frame(fam, target, mode, err)
    ypt = as_point(y)
    base = delta / (1 - fam.lam)
    value = base + fr.S(fr.alpha_pt, ypt, -1) / fam.lam
    left = value - fr.J(fr.alpha_pt, ypt, -1) / fam.lam
    return SidedValue(value, left, fr.caveat)


__all__ = [
    "BoundaryAmbiguous",
    "Line",
    "PrecisionExhausted",
    "Pt",
    "RotationTarget",
    "SidedValue",
    "a_of",
    "a_offsets",
    "delta_of",
    "phi",
    "tail_bound",
]
