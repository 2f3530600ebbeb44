"""Scalars, map parameters and the basic maps of the family.

A scalar is either an exact ``Fraction`` or an ``Approx`` carrying a value
and a rigorous error radius.  Everything in the package is written against
the small set of helpers here (``floor_of``, ``cmp``, ``frac`` ...) so that
the same code runs in both modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Union

from mpmath.ctx_mp import MPContext

# Private context so that nobody else's precision changes leak in.
WORK_PREC = 200
_CTX = MPContext()
_CTX.prec = WORK_PREC
_ULP = _CTX.ldexp(_CTX.mpf(1), 1 - WORK_PREC)
_SAFETY = 1 + _CTX.ldexp(_CTX.mpf(1), 8 - WORK_PREC)


class BoundaryAmbiguous(ArithmeticError):
    """An approximate comparison could not be decided at the carried precision."""


class InvalidParameters(ValueError):
    pass


def mpf(x) -> "_CTX.mpf":
    return _CTX.mpf(x)


def mpf_to_fraction(x) -> Fraction:
    man, exp = _CTX.mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


def _up(e):
    """An mpf not smaller than e."""
    if isinstance(e, Fraction):
        return _CTX.mpf(e.numerator) / e.denominator * _SAFETY
    return _CTX.mpf(e)


def _round_err(v) -> object:
    return abs(v) * _ULP


class Approx:
    """Midpoint-radius real: the true value lies in [value - err, value + err].

    Every arithmetic result is widened by one rounding unit of the working
    precision, so the enclosure stays rigorous.
    """

    __slots__ = ("value", "err")

    def __init__(self, value, err=0):
        if isinstance(value, Fraction):
            exact = Approx.from_fraction(value)
            value, err = exact.value, exact.err + _up(err)
        value = _CTX.mpf(value)
        err = _up(err)
        if err < 0 or not _CTX.isfinite(err) or not _CTX.isfinite(value):
            raise ValueError("approx scalar needs a finite value and err >= 0")
        self.value = value
        self.err = err

    @classmethod
    def from_fraction(cls, x: Fraction) -> "Approx":
        x = Fraction(x)
        if x.denominator == 1 and abs(x.numerator).bit_length() <= WORK_PREC:
            return cls(x.numerator, 0)
        v = _CTX.mpf(x.numerator) / x.denominator
        return cls(v, _round_err(v))

    # -- arithmetic ---------------------------------------------------------
    def _new(self, v, e) -> "Approx":
        return Approx(v, (e + _round_err(v)) * _SAFETY)

    def __add__(self, other):
        o = lift(other)
        return self._new(self.value + o.value, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other):
        o = lift(other)
        return self._new(self.value - o.value, self.err + o.err)

    def __rsub__(self, other):
        return lift(other) - self

    def __mul__(self, other):
        o = lift(other)
        e = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return self._new(self.value * o.value, e)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = lift(other)
        den = abs(o.value) - o.err
        if den <= 0:
            raise BoundaryAmbiguous("division by an interval containing zero")
        v = self.value / o.value
        e = (abs(self.value) * o.err + abs(o.value) * self.err) / (abs(o.value) * den)
        return self._new(v, e)

    def __rtruediv__(self, other):
        return lift(other) / self

    def __neg__(self):
        return Approx(-self.value, self.err)

    def __pos__(self):
        return self

    def __abs__(self):
        return Approx(abs(self.value), self.err)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out: Approx = Approx(1, 0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparisons raise when undecidable ----------------------------------
    def __lt__(self, other):
        return cmp(self, other) < 0

    def __le__(self, other):
        return cmp(self, other) <= 0

    def __gt__(self, other):
        return cmp(self, other) > 0

    def __ge__(self, other):
        return cmp(self, other) >= 0

    def __float__(self):
        return float(self.value)

    @property
    def lo(self):
        return self.value - self.err

    @property
    def hi(self):
        return self.value + self.err

    def rounded_binary64(self) -> "Approx":
        """Round the midpoint to the nearest double, widening err accordingly."""
        f = float(self.value)
        return Approx(f, (self.err + abs(self.value - f)) * _SAFETY)

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Exact rational endpoints enclosing the interval, widened outward by one unit."""
        pad = Fraction(1, 2 ** (WORK_PREC - 8))
        return mpf_to_fraction(self.lo) - pad * (1 + abs(mpf_to_fraction(self.value))), \
            mpf_to_fraction(self.hi) + pad * (1 + abs(mpf_to_fraction(self.value)))

    def contains(self, x) -> bool:
        x = lift(x)
        return abs(x.value - self.value) <= self.err + x.err

    def __repr__(self):
        return f"Approx({_CTX.nstr(self.value, 20)} ± {_CTX.nstr(self.err, 3)})"


Scalar = Union[Fraction, Approx]


def lift(x) -> Approx:
    if isinstance(x, Approx):
        return x
    if isinstance(x, (int, Fraction)):
        return Approx.from_fraction(Fraction(x))
    if isinstance(x, float):
        return Approx(x, 0)
    if isinstance(x, _CTX.mpf) or type(x).__name__ == "mpf":
        return Approx(x, 0)
    raise TypeError(f"cannot use {type(x).__name__} as a scalar")


def as_scalar(x) -> Scalar:
    """Normalize user input: ints, Fractions and decimal or "p/q" strings stay exact."""
    if isinstance(x, Approx):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidParameters("non-finite number")
        # Floats are read as the decimal they print as, the way a user typed them.
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    return lift(x)


def is_exact(*xs) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in xs)


def to_float(x) -> float:
    return float(x.value) if isinstance(x, Approx) else float(x)


def cmp(x, y) -> int:
    """Certified sign of x - y; raises BoundaryAmbiguous if it cannot be decided."""
    if is_exact(x, y):
        diff = Fraction(x) - Fraction(y)
        return (diff > 0) - (diff < 0)
    diff = lift(x) - lift(y)
    v, e = diff.value, diff.err
    if e == 0:
        return (v > 0) - (v < 0)
    if abs(v) <= e:
        raise BoundaryAmbiguous(f"cannot order values {x!r} and {y!r}")
    return 1 if v > 0 else -1


def floor_of(x) -> int:
    if isinstance(x, (int, Fraction)):
        return math.floor(x)
    x = lift(x)
    lo = int(_CTX.floor(x.value - x.err))
    hi = int(_CTX.floor(x.value + x.err))
    if lo != hi:
        raise BoundaryAmbiguous(f"floor of {x!r} is undecided")
    return lo


def frac(x) -> Scalar:
    return x - floor_of(x)


# -- map parameters --------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """The pair (lambda, d) shared by a whole parameter plane."""

    lam: Scalar
    d: Scalar

    def __post_init__(self):
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "d", as_scalar(self.d))
        try:
            ok = cmp(self.lam, 0) > 0 and cmp(self.lam, 1) < 0
            ok = ok and cmp(self.d, 0) > 0 and cmp(self.d, 1 - self.lam) < 0
        except BoundaryAmbiguous:
            ok = False
        if not ok:
            raise InvalidParameters(
                f"need 0 < lambda < 1 and 0 < d < 1 - lambda, got {self.lam}, {self.d}"
            )

    @property
    def exact(self) -> bool:
        return is_exact(self.lam, self.d)


@dataclass(frozen=True)
class MapSpec:
    lam: Scalar
    d: Scalar
    delta: Scalar
    a: Scalar

    def __post_init__(self):
        for name in ("lam", "d", "delta", "a"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        Family(self.lam, self.d)
        for name in ("delta", "a"):
            v = getattr(self, name)
            try:
                ok = cmp(v, 0) >= 0 and cmp(v, 1) <= 0
            except BoundaryAmbiguous:
                ok = False
            if not ok:
                raise InvalidParameters(f"{name} must lie in [0, 1], got {v}")

    @property
    def family(self) -> Family:
        return Family(self.lam, self.d)

    @property
    def exact(self) -> bool:
        return is_exact(self.lam, self.d, self.delta, self.a)


@dataclass(frozen=True)
class Breakpoints:
    eta1: Scalar
    eta2: Scalar


class MapTag(str, Enum):
    M1 = "M1"
    M2 = "M2"
    M3 = "M3"
    OUT = "OutOfM"


_BRANCH_FORMS = {
    MapTag.M1: "three_piece_low",
    MapTag.M2: "two_piece",
    MapTag.M3: "three_piece_high",
    MapTag.OUT: None,
}


@dataclass(frozen=True)
class MapClass:
    tag: MapTag
    branch_form: str | None


@dataclass(frozen=True)
class FixedPointInfo:
    region: str  # "F1", "F2" or "none"
    x_star: Scalar | None = None
    ghost: bool = False


# -- the maps themselves ----------------------------------------------------------

def theta(a, z) -> int:
    """Heaviside step with threshold a: 1 iff z >= a."""
    return 1 if cmp(z, a) >= 0 else 0


def psi(alpha, z, family: Family) -> Scalar:
    """(1 - lambda) floor(z) + d * theta_alpha({z})."""
    n = floor_of(z)
    return (1 - family.lam) * n + family.d * theta(alpha, z - n)


def lift_eval(spec: MapSpec, x) -> Scalar:
    n = floor_of(x)
    step = theta(spec.a, x - n)
    return spec.lam * x + spec.delta + (1 - spec.lam) * n + spec.d * step


def map_eval(spec: MapSpec, x) -> Scalar:
    if cmp(x, 0) < 0 or cmp(x, 1) >= 0:
        raise ValueError("map_eval expects 0 <= x < 1")
    return frac(lift_eval(spec, x))


def rotation_eval(rho, y) -> Scalar:
    if cmp(y, 0) < 0 or cmp(y, 1) >= 0:
        raise ValueError("rotation_eval expects 0 <= y < 1")
    return frac(y + rho)


def breakpoints(spec: MapSpec) -> Breakpoints:
    return Breakpoints(
        (1 - spec.delta - spec.d) / spec.lam,
        (1 - spec.delta) / spec.lam,
    )


def in_m(spec: MapSpec) -> bool:
    """Whether delta lies in the open window (1 - lambda - d, 1)."""
    return cmp(spec.delta, 1 - spec.lam - spec.d) > 0 and cmp(spec.delta, 1) < 0


def classify(spec: MapSpec) -> tuple[Breakpoints, MapClass]:
    bp = breakpoints(spec)
    if not in_m(spec):
        tag = MapTag.OUT
    elif cmp(spec.a, bp.eta1) < 0:
        tag = MapTag.M1
    elif cmp(spec.a, bp.eta2) > 0:
        tag = MapTag.M3
    else:
        tag = MapTag.M2
    return bp, MapClass(tag, _BRANCH_FORMS[tag])


def fixed_point_check(spec: MapSpec) -> FixedPointInfo:
    lam, d, delta, a = spec.lam, spec.d, spec.delta, spec.a
    if cmp(delta, 1 - lam - d) > 0 and cmp(delta, 1 - lam) <= 0:
        x = delta / (1 - lam)
        if cmp(a, x) >= 0:
            ghost = cmp(x, a) == 0 or cmp(x, 1) == 0
            return FixedPointInfo("F1", x, ghost)
    if cmp(delta, 1 - d) >= 0 and cmp(delta, 1) < 0:
        x = (delta + d - 1) / (1 - lam)
        if cmp(a, x) <= 0:
            return FixedPointInfo("F2", x, False)
    return FixedPointInfo("none")
