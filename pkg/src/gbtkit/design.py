"""Shape-factor design: distortion metrics, normalized objectives, optimizer.

Three scenario shapes are supported: a single expected frequency (Type A), a
weighted set of frequency points (Type B), and a frequency interval scored by
an averaged integral error (Type C).  Magnitude (dB) and phase (degrees) live
on different scales, so each channel is normalized by a maximum-absolute-error
reference before objectives are compared or minimized.

Two normalization conventions are available.  ``SHARED_REF`` scales every
scenario shape by the point-error maximum at a single reference frequency
(for Type A this is the expected frequency itself); ``SELF_MAX`` scales each
objective by the maximum of its own numerator over the stable alpha range.
``SHARED_REF`` is the default.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConstraintViolation, DegenerateScenario, NoCrossing
from .gbtcore import DiscretizationSpec, ShapeFactor, gbt_substitute
from .ratfun import PoleZeroGain, poly_eval
from .response import ResponseOptions, analog_response, zoh_factor

ALPHA_MIN = 0.5
ALPHA_MAX = 1.0
ALPHA_GRID = np.linspace(ALPHA_MIN, ALPHA_MAX, 501)  # 0.001 steps, endpoints included
TYPE_C_QUADRATURE_POINTS = 481
_REFINE_TOL = 1e-6
_MULTISTART = 8

SEED_ENV_VAR = "GBTKIT_SEED"


class Channel(enum.Enum):
    MAGNITUDE_FIRST = "mag"
    PHASE_FIRST = "phase"
    TRADE_OFF = "tradeoff"


class NormConvention(enum.Enum):
    SHARED_REF = "shared-ref"
    SELF_MAX = "self-max"


@dataclass(frozen=True)
class TypeA:
    f_exp: float


@dataclass(frozen=True)
class TypeB:
    points: tuple[tuple[float, float, float], ...]  # (freq, K_L, K_phi)

    def __post_init__(self):
        if not self.points:
            raise ValueError("Type B needs at least one frequency point")
        if any(kl < 0 or kp < 0 for _, kl, kp in self.points):
            raise ValueError("Type B weights must be >= 0")
        if not any(kl > 0 for _, kl, _ in self.points):
            raise ValueError("Type B needs a positive magnitude weight")
        if not any(kp > 0 for _, _, kp in self.points):
            raise ValueError("Type B needs a positive phase weight")


@dataclass(frozen=True)
class TypeC:
    f_start: float
    f_end: float

    def __post_init__(self):
        if not self.f_start < self.f_end:
            raise ValueError("Type C needs f_start < f_end")


@dataclass(frozen=True)
class DesignScenario:
    kind: TypeA | TypeB | TypeC
    plant: PoleZeroGain
    period: float
    f_ref: float | None = None  # normalization reference frequency override

    def __post_init__(self):
        nyq = 0.5 / self.period
        for f in self.frequencies():
            if not 0.0 < f < nyq:
                raise ValueError(f"scenario frequency {f} Hz outside (0, {nyq})")
        if self.f_ref is not None and not 0.0 < self.f_ref < nyq:
            raise ValueError(f"reference frequency {self.f_ref} Hz outside (0, {nyq})")

    def frequencies(self) -> tuple[float, ...]:
        if isinstance(self.kind, TypeA):
            return (self.kind.f_exp,)
        if isinstance(self.kind, TypeB):
            return tuple(f for f, _, _ in self.kind.points)
        return (self.kind.f_start, self.kind.f_end)

    def reference_frequency(self, channel: Channel) -> float:
        """Frequency whose worst-case point error anchors the normalization."""
        if self.f_ref is not None:
            return self.f_ref
        if isinstance(self.kind, TypeA):
            return self.kind.f_exp
        if isinstance(self.kind, TypeB):
            # heaviest-weighted point for the channel; ties go to the higher f
            idx = 1 if channel is Channel.MAGNITUDE_FIRST else 2
            best = max(self.kind.points, key=lambda p: (p[idx], p[0]))
            return best[0]
        return 0.5 * (self.kind.f_start + self.kind.f_end)


@dataclass(frozen=True)
class DesignResult:
    alpha_opt: float
    q_value: float
    channel: Channel
    normalization_refs: tuple[float, float]  # (L_err_max dB, phi_err_max deg)


def _point_errors(
    plant: PoleZeroGain, period: float, alpha: float, freqs: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized signed magnitude (dB) and phase (deg) errors, ZOH included."""
    spec = DiscretizationSpec(ShapeFactor(alpha), period)
    ztf = gbt_substitute(plant, spec)
    z = np.exp(1j * 2.0 * np.pi * freqs * period)
    disc = np.polyval(ztf.num.coeffs[::-1], z) / np.polyval(ztf.den.coeffs[::-1], z)
    disc = disc * np.array([zoh_factor(f, period) for f in freqs])
    anlg = np.array([analog_response(plant, f) for f in freqs])
    mag = 20.0 * np.log10(np.abs(disc) / np.abs(anlg))
    phase = np.degrees(np.angle(disc) - np.angle(anlg))
    return mag, phase


def mag_error(plant: PoleZeroGain, period: float, f: float, alpha: float) -> float:
    """Signed magnitude error 20*log10(|G_disc| / |G_anlg|) in dB."""
    spec = DiscretizationSpec(ShapeFactor(alpha), period)
    if not 0.0 < f < spec.nyquist:
        from .errors import NyquistExceeded

        raise NyquistExceeded(f"frequency {f} Hz outside (0, {spec.nyquist})")
    mag, _ = _point_errors(plant, period, alpha, np.array([f]))
    return float(mag[0])


def phase_error(plant: PoleZeroGain, period: float, f: float, alpha: float) -> float:
    """Signed phase error (discrete minus analog) in degrees."""
    spec = DiscretizationSpec(ShapeFactor(alpha), period)
    if not 0.0 < f < spec.nyquist:
        from .errors import NyquistExceeded

        raise NyquistExceeded(f"frequency {f} Hz outside (0, {spec.nyquist})")
    _, phase = _point_errors(plant, period, alpha, np.array([f]))
    return float(phase[0])


def _channel_index(channel: Channel) -> int:
    if channel is Channel.MAGNITUDE_FIRST:
        return 0
    if channel is Channel.PHASE_FIRST:
        return 1
    raise ValueError("trade-off is not a single error channel")


def _raw_objective(scenario: DesignScenario, channel: Channel, alpha: float) -> float:
    """Unnormalized objective numerator for one alpha."""
    ci = _channel_index(channel)
    kind = scenario.kind
    if isinstance(kind, TypeA):
        errs = _point_errors(scenario.plant, scenario.period, alpha,
                             np.array([kind.f_exp]))[ci]
        return float(abs(errs[0]))
    if isinstance(kind, TypeB):
        freqs = np.array([f for f, _, _ in kind.points])
        weights = np.array([p[1 + ci] for p in kind.points])
        errs = _point_errors(scenario.plant, scenario.period, alpha, freqs)[ci]
        return float(np.sqrt(np.sum(weights * errs**2)))
    freqs = np.linspace(kind.f_start, kind.f_end, TYPE_C_QUADRATURE_POINTS)
    errs = _point_errors(scenario.plant, scenario.period, alpha, freqs)[ci]
    integral = np.trapezoid(np.abs(errs), freqs)
    return float(integral / (kind.f_end - kind.f_start))


def normalization_ref(
    scenario: DesignScenario,
    channel: Channel,
    convention: NormConvention = NormConvention.SHARED_REF,
) -> float:
    """Maximum-absolute-error scale for one channel (positive)."""
    ci = _channel_index(channel)
    if convention is NormConvention.SHARED_REF:
        f_ref = scenario.reference_frequency(channel)
        ref = max(
            abs(_point_errors(scenario.plant, scenario.period, a,
                              np.array([f_ref]))[ci][0])
            for a in ALPHA_GRID
        )
    elif isinstance(scenario.kind, TypeC):
        # pointwise maximum over the alpha grid and the frequency grid
        freqs = np.linspace(scenario.kind.f_start, scenario.kind.f_end,
                            TYPE_C_QUADRATURE_POINTS)
        ref = max(
            float(np.max(np.abs(
                _point_errors(scenario.plant, scenario.period, a, freqs)[ci])))
            for a in ALPHA_GRID
        )
    else:
        ref = max(_raw_objective(scenario, channel, a) for a in ALPHA_GRID)
    if ref == 0.0:
        raise DegenerateScenario("error channel vanishes over the whole alpha range")
    return float(ref)


def objective(
    scenario: DesignScenario,
    channel: Channel,
    alpha: float,
    ref: float | None = None,
    convention: NormConvention = NormConvention.SHARED_REF,
) -> float:
    """Normalized, dimensionless objective Q for one shape factor."""
    if not ALPHA_MIN <= alpha <= ALPHA_MAX:
        raise ConstraintViolation(f"alpha {alpha} outside [{ALPHA_MIN}, {ALPHA_MAX}]")
    if ref is None:
        ref = normalization_ref(scenario, channel, convention)
    return _raw_objective(scenario, channel, alpha) / ref


def _golden_section(f: Callable[[float], float], lo: float, hi: float,
                    tol: float = _REFINE_TOL) -> tuple[float, float]:
    """Minimize a scalar function on [lo, hi]; returns (x, f(x))."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV_VAR)
    return int(env) if env else 0


def optimize_alpha(
    scenario: DesignScenario,
    channel: Channel,
    seed: int | None = None,
    convention: NormConvention = NormConvention.SHARED_REF,
) -> DesignResult:
    """Global minimizer of the normalized objective on [0.5, 1].

    Coarse boundary-inclusive scan at 0.001 resolution, golden-section
    refinement around the best grid point, plus eight random-start local
    refinements.  Deterministic for a fixed seed; ties break toward the
    smaller alpha.
    """
    refs = (
        normalization_ref(scenario, Channel.MAGNITUDE_FIRST, convention),
        normalization_ref(scenario, Channel.PHASE_FIRST, convention),
    )
    ref = refs[_channel_index(channel)]
    q = lambda a: _raw_objective(scenario, channel, a) / ref

    grid_q = [q(a) for a in ALPHA_GRID]
    best_i = int(np.argmin(grid_q))

    candidates: list[tuple[float, float]] = [
        (ALPHA_MIN, grid_q[0]),
        (ALPHA_MAX, grid_q[-1]),
        (float(ALPHA_GRID[best_i]), grid_q[best_i]),
    ]
    lo = float(ALPHA_GRID[max(best_i - 1, 0)])
    hi = float(ALPHA_GRID[min(best_i + 1, len(ALPHA_GRID) - 1)])
    candidates.append(_golden_section(q, lo, hi))

    rng = np.random.default_rng(_resolve_seed(seed))
    for start in rng.uniform(ALPHA_MIN, ALPHA_MAX, _MULTISTART):
        lo = max(ALPHA_MIN, start - 0.05)
        hi = min(ALPHA_MAX, start + 0.05)
        candidates.append(_golden_section(q, lo, hi))

    q_min = min(v for _, v in candidates)
    alpha_opt = min(a for a, v in candidates if v <= q_min + 1e-12)
    return DesignResult(
        alpha_opt=alpha_opt,
        q_value=q(alpha_opt),
        channel=channel,
        normalization_refs=refs,
    )


def tradeoff_alpha(
    scenario: DesignScenario,
    convention: NormConvention = NormConvention.SHARED_REF,
) -> DesignResult:
    """Alpha where normalized magnitude and phase objectives are equal.

    Bisects Q_L(alpha) - Q_phi(alpha) on [0.5, 1]; raises ``NoCrossing`` when
    the difference has the same sign at both endpoints.
    """
    refs = (
        normalization_ref(scenario, Channel.MAGNITUDE_FIRST, convention),
        normalization_ref(scenario, Channel.PHASE_FIRST, convention),
    )
    q_mag = lambda a: _raw_objective(scenario, Channel.MAGNITUDE_FIRST, a) / refs[0]
    q_phase = lambda a: _raw_objective(scenario, Channel.PHASE_FIRST, a) / refs[1]
    gap = lambda a: q_mag(a) - q_phase(a)

    lo, hi = ALPHA_MIN, ALPHA_MAX
    g_lo, g_hi = gap(lo), gap(hi)
    if g_lo == 0.0:
        alpha = lo
    elif g_hi == 0.0:
        alpha = hi
    elif g_lo * g_hi > 0:
        raise NoCrossing("normalized error curves do not cross on [0.5, 1]")
    else:
        while hi - lo > _REFINE_TOL:
            mid = 0.5 * (lo + hi)
            g_mid = gap(mid)
            if g_mid == 0.0:
                lo = hi = mid
                break
            if g_lo * g_mid < 0:
                hi, g_hi = mid, g_mid
            else:
                lo, g_lo = mid, g_mid
        alpha = 0.5 * (lo + hi)
    return DesignResult(
        alpha_opt=alpha,
        q_value=q_mag(alpha),
        channel=Channel.TRADE_OFF,
        normalization_refs=refs,
    )
