"""The generalized bilinear substitution s -> (1/T)(z-1)/(alpha*z + 1 - alpha).

Covers the named-method aliases, frequency pre-warping, the forward/inverse
first-order point maps, the z-plane stability disk, and the hexagonal
integration recurrence that gives the shape factor its meaning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    NyquistExceeded,
    ParameterOutOfRange,
    PoleOfMap,
)
from .ratfun import PoleZeroGain, RationalFunction, moebius_substitute, poly_roots, pzk_to_rational

STABLE_ALPHA_MIN = 0.5
STABLE_ALPHA_MAX = 1.0
_STABILITY_TOL = 1e-10  # poles exactly on the unit circle must not flip on rounding


@dataclass(frozen=True)
class ShapeFactor:
    """Backward-rectangle fraction of the hexagonal integration step."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ParameterOutOfRange(f"shape factor {self.alpha} outside [0, 1]")

    @property
    def is_stable(self) -> bool:
        """True on the sub-range [0.5, 1] where the transformation is stable."""
        return STABLE_ALPHA_MIN <= self.alpha <= STABLE_ALPHA_MAX


@dataclass(frozen=True)
class DiscretizationSpec:
    """Shape factor plus sampling period: the transformation's two knobs."""

    shape: ShapeFactor
    period: float

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"sampling period must be positive, got {self.period}")

    @classmethod
    def from_alpha(cls, alpha: float, f_samp: float) -> "DiscretizationSpec":
        return cls(ShapeFactor(alpha), 1.0 / f_samp)

    @property
    def alpha(self) -> float:
        return self.shape.alpha

    @property
    def f_samp(self) -> float:
        return 1.0 / self.period

    @property
    def nyquist(self) -> float:
        return 0.5 / self.period


@dataclass(frozen=True)
class StabilityDisk:
    """z-plane disk the left half s-plane maps into."""

    center: float
    radius: float

    @property
    def crossing_points(self) -> tuple[float, float]:
        """Real-axis crossings (gamma_z1, gamma_z2) = (1, center - radius)."""
        return (self.center + self.radius, self.center - self.radius)

    @property
    def inside_unit_circle(self) -> bool:
        return self.center - self.radius >= -1.0


@dataclass(frozen=True)
class HexagonalStep:
    """One integration step split into forward and backward rectangles."""

    e_prev: float
    e_curr: float
    period: float
    alpha: float

    @property
    def area_fw(self) -> float:
        return (1.0 - self.alpha) * self.period * self.e_prev

    @property
    def area_bw(self) -> float:
        return self.alpha * self.period * self.e_curr

    @property
    def increment(self) -> float:
        return self.area_fw + self.area_bw


def gbt_substitute(
    plant: PoleZeroGain | RationalFunction, spec: DiscretizationSpec
) -> RationalFunction:
    """Discretize an s-domain plant with the generalized bilinear substitution.

    Applies s = (1/T)(z - 1)/(alpha*z + 1 - alpha) and returns the z-domain
    rational function with monic denominator.
    """
    if isinstance(plant, PoleZeroGain):
        plant = pzk_to_rational(plant)
    t = spec.period
    a = spec.alpha
    return moebius_substitute(plant, 1.0 / t, -1.0 / t, a, 1.0 - a)


_FIXED_ALIASES = {"euler": 1.0, "backward_euler": 1.0, "tustin": 0.5, "bilinear": 0.5}


def alias_to_alpha(method: str, param: float | None = None) -> ShapeFactor:
    """Map a named discretization method (and optional parameter) to alpha.

    euler -> 1, tustin -> 0.5, al_alaoui(a) -> (1+a)/2,
    gbt_extended(a_g) -> a_g, pole_placement(a_p) -> 1/(1+a_p).
    """
    key = method.strip().lower().replace("-", "_")
    if key in _FIXED_ALIASES:
        if param is not None:
            raise ParameterOutOfRange(f"{method} takes no parameter")
        return ShapeFactor(_FIXED_ALIASES[key])
    if param is None:
        raise ParameterOutOfRange(f"{method} requires a parameter")
    if key in ("al_alaoui", "alaoui"):
        if not 0.0 <= param <= 1.0:
            raise ParameterOutOfRange(f"al_alaoui parameter {param} outside [0, 1]")
        return ShapeFactor((1.0 + param) / 2.0)
    if key in ("gbt", "gbt_extended"):
        # ShapeFactor itself rejects values outside the definitional [0, 1]
        return ShapeFactor(param)
    if key in ("pole_placement", "pole"):
        if not 0.0 <= param <= 1.0:
            raise ParameterOutOfRange(f"pole_placement parameter {param} outside [0, 1]")
        return ShapeFactor(1.0 / (1.0 + param))
    raise ParameterOutOfRange(f"unknown method alias: {method}")


def prewarp(omega_ori: float, period: float) -> float:
    """Tangent pre-warp: (2/T) * tan(omega * T / 2)."""
    if omega_ori <= 0:
        raise ValueError("frequency must be positive")
    x = omega_ori * period
    if x >= math.pi:
        raise NyquistExceeded(f"omega*T = {x:.4g} >= pi")
    return (2.0 / period) * math.tan(0.5 * x)


def s_to_z_point(s: complex, spec: DiscretizationSpec) -> complex:
    """First-order forward map z = (1 + s(1-alpha)T) / (1 - s*alpha*T)."""
    t, a = spec.period, spec.alpha
    den = 1.0 - s * a * t
    if abs(den) == 0:
        raise PoleOfMap(f"forward map singular at s = {s}")
    return (1.0 + s * (1.0 - a) * t) / den


def z_to_s_point(z: complex, spec: DiscretizationSpec) -> complex:
    """Inverse map s = (1/T)(z - 1) / (alpha*z + 1 - alpha)."""
    t, a = spec.period, spec.alpha
    den = a * z + (1.0 - a)
    if abs(den) == 0:
        raise PoleOfMap(f"inverse map singular at z = {z}")
    return (z - 1.0) / (t * den)


def stability_disk(shape: ShapeFactor | float) -> StabilityDisk:
    """Disk [gamma - (1 - 1/(2a))]^2 + zeta^2 <= (1/(2a))^2 for alpha > 0."""
    alpha = shape.alpha if isinstance(shape, ShapeFactor) else float(shape)
    if alpha <= 0:
        raise ParameterOutOfRange("stability disk undefined for alpha <= 0")
    half = 1.0 / (2.0 * alpha)
    return StabilityDisk(center=1.0 - half, radius=half)


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    poles: tuple[complex, ...]
    magnitudes: tuple[float, ...]

    def __bool__(self) -> bool:
        return self.stable


def is_discrete_stable(ztf: RationalFunction) -> StabilityReport:
    """Check all denominator roots against |z| < 1 (tolerance 1e-10)."""
    poles = poly_roots(ztf.den)
    mags = tuple(abs(p) for p in poles)
    stable = all(m < 1.0 + _STABILITY_TOL for m in mags)
    return StabilityReport(stable=stable, poles=poles, magnitudes=mags)


def hexagonal_integrate(
    samples: Sequence[float], spec: DiscretizationSpec
) -> tuple[list[float], list[HexagonalStep]]:
    """Running integral u(n) = (1-a)*e(n-1)*T + a*e(n)*T + u(n-1), u(0) = 0.

    Returns the integral sequence and the per-step rectangle records.
    """
    if len(samples) < 1:
        raise ValueError("need at least one sample")
    t, a = spec.period, spec.alpha
    u = [0.0]
    steps: list[HexagonalStep] = []
    for prev, curr in zip(samples, samples[1:]):
        step = HexagonalStep(e_prev=prev, e_curr=curr, period=t, alpha=a)
        steps.append(step)
        u.append(u[-1] + step.increment)
    return u, steps
