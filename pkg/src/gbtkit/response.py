"""Frequency-response evaluation for analog plants and their discretizations.

The discrete response optionally includes the zero-order-hold reconstruction
factors (sinc magnitude decay plus half-sample phase delay) and an extra
processing-delay term.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import EvaluationAtPole, NyquistExceeded
from .gbtcore import DiscretizationSpec, gbt_substitute
from .ratfun import PoleZeroGain, Polynomial, RationalFunction, poly_eval, pzk_to_rational


@dataclass(frozen=True)
class ResponseOptions:
    include_zoh: bool = True
    extra_delay: float = 0.0  # seconds, e.g. ADC + compute + DAC latency
    phase_unwrap: bool = False

    def __post_init__(self):
        if self.extra_delay < 0:
            raise ValueError("extra_delay must be >= 0")


@dataclass(frozen=True)
class FrequencyPoint:
    freq: float
    mag_db: float
    phase_deg: float


def lpf_plant(w_c: float) -> PoleZeroGain:
    """First-order low-pass w_c / (s + w_c)."""
    return PoleZeroGain(gain=w_c, zeros=(), poles=(w_c,))


def analog_response(plant: PoleZeroGain, freq: float) -> complex:
    """K * prod(jw + Z_i) / prod(jw + P_k) at w = 2*pi*freq."""
    s = 1j * 2.0 * math.pi * freq
    num: complex = plant.gain
    for z in plant.zeros:
        num *= s + z
    den: complex = 1.0
    for p in plant.poles:
        factor = s + p
        if abs(factor) == 0:
            raise EvaluationAtPole(f"jw equals pole {-p}")
        den *= factor
    return num / den


def gbt_operator(alpha: float, period: float, freq: float) -> complex:
    """The substitution operator evaluated on the unit circle z = e^{jwT}."""
    z = cmath.exp(1j * 2.0 * math.pi * freq * period)
    return (z - 1.0) / (period * (alpha * z + 1.0 - alpha))


def gbt_operator_expanded(alpha: float, period: float, freq: float) -> complex:
    """Expanded real/imaginary form of the operator on the unit circle.

    Algebraically identical to :func:`gbt_operator`; kept as a second
    evaluation path so the two can cross-check each other.
    """
    wt = 2.0 * math.pi * freq * period
    num = (1.0 - 2.0 * alpha) * (math.cos(wt) - 1.0) + 1j * math.sin(wt)
    den = (2.0 * alpha - 2.0 * alpha**2) * math.cos(wt) + (
        2.0 * alpha**2 - 2.0 * alpha + 1.0
    )
    return num / (period * den)


def zoh_factor(freq: float, period: float) -> complex:
    """sinc magnitude decay times half-sample phase delay."""
    x = math.pi * freq * period  # 0.5 * w * T
    mag = math.sin(x) / x if x != 0 else 1.0
    return mag * cmath.exp(-1j * x)


def _check_band(freq: float, spec: DiscretizationSpec) -> None:
    if not 0.0 < freq < spec.nyquist:
        raise NyquistExceeded(
            f"frequency {freq} Hz outside (0, {spec.nyquist}) Hz"
        )


def _eval_ztf(ztf: RationalFunction, freq: float, spec: DiscretizationSpec) -> complex:
    z = cmath.exp(1j * 2.0 * math.pi * freq * spec.period)
    den = poly_eval(ztf.den, z)
    if abs(den) < 1e-300:
        raise EvaluationAtPole(f"discrete pole on the unit circle at {freq} Hz")
    return poly_eval(ztf.num, z) / den


def _apply_reconstruction(g: complex, freq: float, spec: DiscretizationSpec,
                          opts: ResponseOptions) -> complex:
    if opts.include_zoh:
        g *= zoh_factor(freq, spec.period)
    if opts.extra_delay > 0:
        g *= cmath.exp(-1j * 2.0 * math.pi * freq * opts.extra_delay)
    return g


def discrete_response(
    plant: PoleZeroGain | RationalFunction,
    spec: DiscretizationSpec,
    freq: float,
    opts: ResponseOptions = ResponseOptions(),
) -> complex:
    """Discretized frequency response at z = e^{jwT}, with reconstruction model."""
    _check_band(freq, spec)
    ztf = gbt_substitute(plant, spec)
    return _apply_reconstruction(_eval_ztf(ztf, freq, spec), freq, spec, opts)


def lpf_discrete_response(
    w_c: float,
    spec: DiscretizationSpec,
    freq: float,
    opts: ResponseOptions = ResponseOptions(),
) -> complex:
    """Closed-form discrete response of the first-order low-pass plant."""
    _check_band(freq, spec)
    op = gbt_operator_expanded(spec.alpha, spec.period, freq)
    g = w_c / (op + w_c)
    return _apply_reconstruction(g, freq, spec, opts)


def bode_grid(
    plant: PoleZeroGain | RationalFunction,
    spec: DiscretizationSpec,
    f_lo: float,
    f_hi: float,
    n: int,
    spacing: str = "log",
    opts: ResponseOptions = ResponseOptions(),
    which: str = "discrete",
) -> list[FrequencyPoint]:
    """Evaluate the discrete (or analog) response on a frequency grid.

    Phase is reported in degrees and unwrapped along the grid when
    ``opts.phase_unwrap`` is set.
    """
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    if not 0.0 < f_lo < f_hi < spec.nyquist:
        raise NyquistExceeded(
            f"grid [{f_lo}, {f_hi}] must lie inside (0, {spec.nyquist}) Hz"
        )
    if spacing == "log":
        freqs = np.geomspace(f_lo, f_hi, n)
    elif spacing == "linear":
        freqs = np.linspace(f_lo, f_hi, n)
    else:
        raise ValueError(f"unknown spacing {spacing!r}")

    if which == "discrete":
        ztf = gbt_substitute(plant, spec)
        values = [
            _apply_reconstruction(_eval_ztf(ztf, f, spec), f, spec, opts)
            for f in freqs
        ]
    elif which == "analog":
        pzk = plant if isinstance(plant, PoleZeroGain) else None
        if pzk is None:
            raise ValueError("analog grid requires a PoleZeroGain plant")
        values = [analog_response(pzk, f) for f in freqs]
    else:
        raise ValueError(f"unknown response selector {which!r}")

    phases = np.angle(values)
    if opts.phase_unwrap:
        phases = np.unwrap(phases)
    return [
        FrequencyPoint(
            freq=float(f),
            mag_db=20.0 * math.log10(abs(v)),
            phase_deg=math.degrees(ph),
        )
        for f, v, ph in zip(freqs, values, phases)
    ]


def delay_phase(freq: float, t_delay: float) -> float:
    """Phase lag in degrees contributed by a pure time delay (negative)."""
    if t_delay < 0:
        raise ValueError("t_delay must be >= 0")
    return -360.0 * freq * t_delay
