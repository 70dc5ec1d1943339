"""Exception types shared across the duosc package."""


class DuoscError(Exception):
    """Base class for all duosc-specific errors."""


class ConfigError(DuoscError):
    """Invalid configuration input."""


class CouplingTooStrong(ConfigError):
    """Dimensionless coupling at or beyond the bilinear-model breakdown point."""


class DegenerateModes(DuoscError):
    """The two mode frequencies coincide within tolerance."""


class NonRealRatio(DuoscError):
    """A mode amplitude ratio came out with a non-negligible imaginary part."""


class CausticTime(DuoscError):
    """sin(Omega*t) is too close to zero; the boundary-value form is singular.

    These are isolated times; callers may perturb t and retry.
    """


class QuadratureNonConvergence(DuoscError):
    """Two independent quadrature routes disagree beyond tolerance."""


class NotNormalizable(DuoscError):
    """The reduced Gaussian state is not normalizable (beta determinant <= 0)."""


class NonHermitianLarge(DuoscError):
    """Dropped non-Hermitian coefficients exceed the allowed fraction of kept ones."""


class StepFailure(DuoscError):
    """Adaptive ODE integration failed to meet its tolerance."""
