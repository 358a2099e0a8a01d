"""Time-domain execution of discretized systems.

A z-domain transfer function is realized as a direct-form difference
equation; a steady-state sinusoid probe then measures the sampled-domain
magnitude and phase empirically.  The probe sees H(e^{jwT}) only: the
zero-order-hold sinc and half-sample delay belong to the reconstruction
model and are applied analytically when comparing against the full
frequency-response prediction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from .errors import ImproperTransferFunction, NyquistExceeded, UnstablePlant
from .gbtcore import is_discrete_stable
from .ratfun import RationalFunction
from .response import delay_phase


class DifferenceEquation:
    """Direct-form recurrence y(n) = sum b_k x(n-k) - sum a_k y(n-k).

    Single-owner mutable state: one instance must not be shared between
    threads.  State starts at zero; ``reset`` returns to it.
    """

    def __init__(self, in_coeffs, out_coeffs, source: RationalFunction | None = None):
        self.in_coeffs = tuple(float(b) for b in in_coeffs)   # b_0 .. b_M
        self.out_coeffs = tuple(float(a) for a in out_coeffs)  # a_1 .. a_N
        self.source = source
        self._x = deque([0.0] * len(self.in_coeffs), maxlen=len(self.in_coeffs))
        self._y = deque([0.0] * max(len(self.out_coeffs), 1),
                        maxlen=max(len(self.out_coeffs), 1))

    def reset(self) -> None:
        for _ in range(len(self._x)):
            self._x.append(0.0)
        for _ in range(len(self._y)):
            self._y.append(0.0)

    def step(self, v_in: float) -> float:
        """Advance one sample and return the new output."""
        self._x.appendleft(v_in)
        acc = 0.0
        for b, x in zip(self.in_coeffs, self._x):
            acc += b * x
        for a, y in zip(self.out_coeffs, self._y):
            acc -= a * y
        self._y.appendleft(acc)
        return acc


def realize(ztf: RationalFunction) -> DifferenceEquation:
    """Turn a proper z-domain transfer function into a difference equation.

    Coefficients are re-indexed from ascending powers of z to delays in
    z^{-1} and scaled so the zero-delay output coefficient is 1.
    """
    n = ztf.den.degree
    if ztf.num.degree > n:
        raise ImproperTransferFunction(
            f"numerator degree {ztf.num.degree} exceeds denominator degree {n}"
        )
    den = ztf.den.coeffs
    num = list(ztf.num.coeffs) + [0.0] * (n - ztf.num.degree)
    lead = den[-1]
    b = [num[n - k] / lead for k in range(n + 1)]
    a = [den[n - k] / lead for k in range(1, n + 1)]
    return DifferenceEquation(b, a, source=ztf)


def step(deq: DifferenceEquation, v_in: float) -> float:
    return deq.step(v_in)


@dataclass(frozen=True)
class ProbeResult:
    freq: float
    mag_db: float
    phase_deg: float
    cycles_used: int
    residual: float  # fit RMS over signal RMS


def sine_probe(
    deq: DifferenceEquation,
    freq: float,
    f_samp: float,
    settle_cycles: int = 50,
    fit_cycles: int = 20,
    amplitude: float = 1.0,
) -> ProbeResult:
    """Measure steady-state gain and phase by driving a sinusoid.

    Discards ``settle_cycles`` input cycles, then least-squares fits
    A*sin + B*cos over ``fit_cycles`` cycles of output.
    """
    if not 0.0 < freq < 0.5 * f_samp:
        raise NyquistExceeded(f"probe frequency {freq} Hz outside (0, {0.5 * f_samp})")
    if deq.source is not None:
        report = is_discrete_stable(deq.source)
        if not report.stable:
            raise UnstablePlant(
                f"pole magnitudes {tuple(round(m, 6) for m in report.magnitudes)}"
            )

    period = 1.0 / f_samp
    omega = 2.0 * math.pi * freq
    n_settle = math.ceil(settle_cycles * f_samp / freq)
    n_fit = math.ceil(fit_cycles * f_samp / freq)

    deq.reset()
    for n in range(n_settle):
        deq.step(amplitude * math.sin(omega * n * period))
    t = (np.arange(n_settle, n_settle + n_fit)) * period
    out = np.array([deq.step(amplitude * math.sin(omega * n * period))
                    for n in range(n_settle, n_settle + n_fit)])

    basis = np.column_stack([np.sin(omega * t), np.cos(omega * t)])
    (a_fit, b_fit), *_ = np.linalg.lstsq(basis, out, rcond=None)
    resid = out - basis @ np.array([a_fit, b_fit])
    rms_out = math.sqrt(float(np.mean(out**2)))
    residual = math.sqrt(float(np.mean(resid**2))) / rms_out if rms_out > 0 else 0.0

    gain = math.hypot(a_fit, b_fit) / amplitude
    return ProbeResult(
        freq=freq,
        mag_db=20.0 * math.log10(gain),
        phase_deg=math.degrees(math.atan2(b_fit, a_fit)),
        cycles_used=fit_cycles,
        residual=residual,
    )


def compensate_delay(probe: ProbeResult, t_delay: float) -> ProbeResult:
    """Remove the phase lag of a pure processing delay; magnitude unchanged."""
    if t_delay < 0:
        raise ValueError("t_delay must be >= 0")
    return replace(probe, phase_deg=probe.phase_deg - delay_phase(probe.freq, t_delay))
