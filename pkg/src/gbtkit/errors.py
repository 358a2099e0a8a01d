"""Exception hierarchy shared across the toolkit."""


class GbtError(Exception):
    """Base class for all domain errors raised by gbtkit."""


class ZeroPolynomial(GbtError):
    """Root finding requested on the zero polynomial."""


class NonConvergence(GbtError):
    """Iterative root refinement failed to reach the residual target."""


class DegenerateMap(GbtError):
    """Linear-fractional map with ad - bc = 0 (not invertible)."""


class ConjugateViolation(GbtError):
    """Pole/zero set is not closed under complex conjugation."""


class ParameterOutOfRange(GbtError):
    """Method parameter outside its documented range."""


class NyquistExceeded(GbtError):
    """Frequency at or above half the sampling frequency."""


class PoleOfMap(GbtError):
    """Point map evaluated where its denominator vanishes."""


class EvaluationAtPole(GbtError):
    """Frequency response requested exactly at a system pole."""


class ImproperTransferFunction(GbtError):
    """Numerator degree exceeds denominator degree."""


class UnstablePlant(GbtError):
    """Simulation refused: discrete plant has poles outside the unit circle."""


class DegenerateScenario(GbtError):
    """Normalization reference is zero (error vanishes identically)."""


class ConstraintViolation(GbtError):
    """Shape factor outside the stable design range [0.5, 1]."""


class NoCrossing(GbtError):
    """Normalized magnitude and phase curves do not intersect on [0.5, 1]."""
