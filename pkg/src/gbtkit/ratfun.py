"""Real-coefficient polynomial and rational-function algebra.

Coefficients are stored in ascending degree everywhere: ``coeffs[k]`` is the
coefficient of ``x**k``.  Rational functions are kept canonical with a monic
denominator so that two representations of the same transfer function compare
equal coefficient-by-coefficient.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConjugateViolation, DegenerateMap, NonConvergence, ZeroPolynomial

_ROOT_TOL = 1e-12
_ROOT_MAX_ITER = 500


def _trim(coeffs: Sequence[float]) -> tuple[float, ...]:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(float(v) for v in c)


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in one variable, ascending-degree coefficients."""

    coeffs: tuple[float, ...]

    def __init__(self, coeffs: Sequence[float]):
        if len(coeffs) == 0:
            raise ValueError("polynomial needs at least one coefficient")
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def __call__(self, x: complex) -> complex:
        return poly_eval(self, x)

    def scale(self, k: float) -> "Polynomial":
        return Polynomial([k * c for c in self.coeffs])

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(np.convolve(self.coeffs, other.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n)
        a[: len(self.coeffs)] += self.coeffs
        a[: len(other.coeffs)] += other.coeffs
        return Polynomial(a)


def poly_eval(p: Polynomial, x: complex) -> complex:
    """Horner evaluation of p at a (possibly complex) point."""
    acc: complex = 0.0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def _aberth_initial(coeffs: np.ndarray) -> np.ndarray:
    n = len(coeffs) - 1
    # Cauchy bound keeps every root inside the start circle
    radius = 1.0 + max(abs(c) for c in coeffs[:-1]) / abs(coeffs[-1])
    k = np.arange(n)
    angles = 2 * np.pi * k / n + 0.4  # offset breaks real-axis symmetry traps
    return 0.5 * radius * np.exp(1j * angles)


def poly_roots(p: Polynomial) -> tuple[complex, ...]:
    """All complex roots via Aberth-Ehrlich simultaneous iteration.

    Refines until ``max |p(r)| / scale < 1e-12`` with
    ``scale = max|coeff| * max(1, |r|)**degree``, then enforces conjugate
    symmetry by pairing roots (the input has real coefficients).
    """
    if p.is_zero:
        raise ZeroPolynomial("zero polynomial has no well-defined roots")
    if p.degree == 0:
        return ()

    c = np.asarray(p.coeffs, dtype=complex)
    n = len(c) - 1
    dc = c[1:] * np.arange(1, n + 1)
    cmax = max(abs(v) for v in c)

    z = _aberth_initial(c)
    converged = False
    for _ in range(_ROOT_MAX_ITER):
        pv = np.polyval(c[::-1], z)
        scale = cmax * np.maximum(1.0, np.abs(z)) ** n
        if np.max(np.abs(pv) / scale) < _ROOT_TOL:
            converged = True
            break
        dv = np.polyval(dc[::-1], z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = pv / dv
            diff = z[:, None] - z[None, :]
            np.fill_diagonal(diff, np.inf)
            repulse = np.sum(1.0 / diff, axis=1)
            step = newton / (1.0 - newton * repulse)
        step = np.where(np.isfinite(step), step, 0.1 + 0.1j)
        z = z - step
    if not converged:
        raise NonConvergence(
            f"root refinement did not converge in {_ROOT_MAX_ITER} iterations"
        )
    return _pair_conjugates(z)


def _pair_conjugates(roots: np.ndarray) -> tuple[complex, ...]:
    out = list(roots)
    used = [False] * len(out)
    for i, r in enumerate(out):
        if used[i]:
            continue
        tol = 1e-8 * (1.0 + abs(r))
        if abs(r.imag) <= tol:
            out[i] = complex(r.real, 0.0)
            used[i] = True
            continue
        # find the closest unpaired conjugate partner
        best, bestd = -1, math.inf
        for j in range(i + 1, len(out)):
            if used[j]:
                continue
            d = abs(out[j] - r.conjugate())
            if d < bestd:
                best, bestd = j, d
        if best >= 0 and bestd <= 1e-6 * (1.0 + abs(r)):
            avg = 0.5 * (r + out[best].conjugate())
            out[i], out[best] = avg, avg.conjugate()
            used[i] = used[best] = True
        else:
            used[i] = True
    return tuple(sorted(out, key=lambda v: (v.real, v.imag)))


@dataclass(frozen=True)
class RationalFunction:
    """Ratio of two real polynomials, canonicalized to a monic denominator."""

    num: Polynomial
    den: Polynomial

    def __init__(self, num: Polynomial | Sequence[float], den: Polynomial | Sequence[float]):
        if not isinstance(num, Polynomial):
            num = Polynomial(num)
        if not isinstance(den, Polynomial):
            den = Polynomial(den)
        if den.is_zero:
            raise ZeroPolynomial("denominator must not be the zero polynomial")
        num, den = _canonicalize(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __call__(self, x: complex) -> complex:
        return poly_eval(self.num, x) / poly_eval(self.den, x)

    def is_close(self, other: "RationalFunction", tol: float = 1e-12) -> bool:
        """Coefficient-wise comparison of two canonical forms."""
        if len(self.num.coeffs) != len(other.num.coeffs):
            return False
        if len(self.den.coeffs) != len(other.den.coeffs):
            return False
        scale = max(
            1.0,
            max(abs(c) for c in self.num.coeffs + self.den.coeffs),
        )
        pairs = zip(
            self.num.coeffs + self.den.coeffs, other.num.coeffs + other.den.coeffs
        )
        return all(abs(a - b) <= tol * scale for a, b in pairs)


def _canonicalize(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    # scrub cancellation residue before picking the leading coefficient
    mag = max(max(abs(c) for c in num.coeffs), max(abs(c) for c in den.coeffs))
    if mag == 0:
        return Polynomial([0.0]), den
    clean = lambda cs: [0.0 if abs(c) <= 1e-14 * mag else c for c in cs]
    num = Polynomial(clean(num.coeffs))
    den = Polynomial(clean(den.coeffs))
    if den.is_zero:
        raise ZeroPolynomial("denominator vanished during canonicalization")
    lead = den.coeffs[-1]
    return num.scale(1.0 / lead), den.scale(1.0 / lead)


@dataclass(frozen=True)
class PoleZeroGain:
    """Factored analog plant: gain * prod(s + z_i) / prod(s + p_k)."""

    gain: float
    zeros: tuple[complex, ...]
    poles: tuple[complex, ...]

    def __init__(self, gain: float, zeros: Sequence[complex], poles: Sequence[complex]):
        zeros = tuple(complex(z) for z in zeros)
        poles = tuple(complex(p) for p in poles)
        if len(zeros) > len(poles):
            raise ValueError("improper plant: more zeros than poles")
        for name, vals in (("zeros", zeros), ("poles", poles)):
            if not _conjugate_closed(vals):
                raise ConjugateViolation(f"{name} are not closed under conjugation")
        object.__setattr__(self, "gain", float(gain))
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "poles", poles)


def _conjugate_closed(vals: Sequence[complex], tol: float = 1e-9) -> bool:
    rem = list(vals)
    while rem:
        v = rem.pop()
        if abs(v.imag) <= tol * (1.0 + abs(v)):
            continue
        match = min(
            range(len(rem)),
            key=lambda i: abs(rem[i] - v.conjugate()),
            default=None,
        )
        if match is None or abs(rem[match] - v.conjugate()) > tol * (1.0 + abs(v)):
            return False
        rem.pop(match)
    return True


def moebius_substitute(
    r: RationalFunction, a: float, b: float, c: float, d: float
) -> RationalFunction:
    """Substitute x = (a*y + b) / (c*y + d) into r(x) and clear denominators.

    Each degree-k term picks up a factor (c*y + d)**(N - k) with
    N = max(deg num, deg den), so the result is again a ratio of polynomials.
    """
    if a * d - b * c == 0:
        raise DegenerateMap("ad - bc = 0: map is not invertible")
    n_deg = max(r.num.degree, r.den.degree)

    fwd = Polynomial([b, a])   # a*y + b
    bwd = Polynomial([d, c])   # c*y + d
    # power tables up to N
    fwd_pow = [Polynomial([1.0])]
    bwd_pow = [Polynomial([1.0])]
    for _ in range(n_deg):
        fwd_pow.append(fwd_pow[-1] * fwd)
        bwd_pow.append(bwd_pow[-1] * bwd)

    def substitute(p: Polynomial) -> Polynomial:
        acc = Polynomial([0.0])
        for k, coef in enumerate(p.coeffs):
            if coef == 0:
                continue
            acc = acc + (fwd_pow[k] * bwd_pow[n_deg - k]).scale(coef)
        return acc

    return RationalFunction(substitute(r.num), substitute(r.den))


def pzk_to_rational(pzk: PoleZeroGain) -> RationalFunction:
    """Expand K * prod(s + Z_i) / prod(s + P_k) into real polynomials."""
    num = _expand_factors(pzk.zeros)
    den = _expand_factors(pzk.poles)
    num = [pzk.gain * c for c in num]
    scale = max(max(abs(c) for c in num), max(abs(c) for c in den), 1e-300)
    worst = max(max(abs(c.imag) for c in num), max(abs(c.imag) for c in den))
    if worst >= 1e-12 * scale:
        raise ConjugateViolation(
            f"expansion left imaginary residue {worst:.3g} (scale {scale:.3g})"
        )
    return RationalFunction([c.real for c in num], [c.real for c in den])


def _expand_factors(roots: Sequence[complex]) -> list[complex]:
    acc = np.array([1.0 + 0j])
    for r in roots:
        acc = np.convolve(acc, [r, 1.0])  # factor (s + r), ascending
    return list(acc)
