"""Generalized bilinear transformation toolkit.

Discretizes continuous-time rational transfer functions with the shape-factor
substitution s -> (1/T)(z - 1)/(alpha*z + 1 - alpha), analyzes the resulting
magnitude/phase distortion against the analog reference, optimizes the shape
factor for single-point, weighted-multipoint, and interval design scenarios,
and validates the predictions with a time-domain difference-equation simulator.
"""

from .errors import (
    ConjugateViolation,
    ConstraintViolation,
    DegenerateMap,
    DegenerateScenario,
    EvaluationAtPole,
    GbtError,
    ImproperTransferFunction,
    NoCrossing,
    NonConvergence,
    NyquistExceeded,
    ParameterOutOfRange,
    PoleOfMap,
    UnstablePlant,
    ZeroPolynomial,
)
from .ratfun import (
    Polynomial,
    PoleZeroGain,
    RationalFunction,
    moebius_substitute,
    poly_eval,
    poly_roots,
    pzk_to_rational,
)
from .gbtcore import (
    DiscretizationSpec,
    HexagonalStep,
    ShapeFactor,
    StabilityDisk,
    alias_to_alpha,
    gbt_substitute,
    hexagonal_integrate,
    is_discrete_stable,
    prewarp,
    s_to_z_point,
    stability_disk,
    z_to_s_point,
)
from .response import (
    FrequencyPoint,
    ResponseOptions,
    analog_response,
    bode_grid,
    delay_phase,
    discrete_response,
    lpf_discrete_response,
    lpf_plant,
)
from .design import (
    Channel,
    DesignResult,
    DesignScenario,
    NormConvention,
    TypeA,
    TypeB,
    TypeC,
    mag_error,
    normalization_ref,
    objective,
    optimize_alpha,
    phase_error,
    tradeoff_alpha,
)
from .simkit import (
    DifferenceEquation,
    ProbeResult,
    compensate_delay,
    realize,
    sine_probe,
    step,
)
from .verify import verify_tables

__version__ = "0.1.0"
