"""Piecewise contracting circle maps with three intervals: parameter regions,
conjugacy to rotations, attractors and symbolic codes."""

from .core import (
    Approx,
    BoundaryAmbiguous,
    Breakpoints,
    Family,
    FixedPointInfo,
    InvalidParameters,
    MapClass,
    MapSpec,
    MapTag,
    as_scalar,
    breakpoints,
    classify,
    fixed_point_check,
    lift_eval,
    map_eval,
    psi,
    rotation_eval,
    theta,
)
from .dynamics import (
    Attractor,
    HypothesisViolated,
    InsufficientLength,
    OutOfRange,
    SymbolCode,
    attractor,
    attractor_code,
    code,
    complexity,
    conjugacy_residual,
    generalized_inverse,
    iterate_orbit,
    rotation_code,
)
from .inverse import (
    FixedPointRegion,
    Inconclusive,
    InverseCertificate,
    OutOfDomain,
    RotationEstimate,
    big_phi,
    invert,
    rho_delta,
    rotation_number,
)
from .regions import (
    InfeasibleGoal,
    Membership,
    Region,
    SynthesisTarget,
    classify_alpha,
    contains,
    enumerate_regions,
    region,
    synthesize,
)
from .series import (
    PrecisionExhausted,
    RotationTarget,
    SidedValue,
    a_of,
    delta_of,
    phi,
    tail_bound,
)

__version__ = "0.1.0"
