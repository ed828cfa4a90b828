"""Exception types shared across the package."""


class SingBernError(Exception):
    """Base class for package errors."""


class DomainError(SingBernError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularSample(SingBernError, ValueError):
    """A required evaluation point falls inside the singularity guard band."""


class DomainTooSmall(SingBernError, ValueError):
    """The degree n is too small for the node/knot construction at this xi."""


class StencilOutOfRange(SingBernError, ValueError):
    """A finite-difference stencil leaves the unit interval."""


class StencilHitsSingularity(SingBernError, ValueError):
    """A finite-difference stencil point falls inside the singularity guard."""


class InsufficientData(SingBernError, ValueError):
    """Too few usable points for a rate fit."""


class ConfigError(SingBernError, ValueError):
    """Invalid experiment or CLI configuration."""
