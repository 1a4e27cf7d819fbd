"""Exception hierarchy for kg2d."""


class Kg2dError(Exception):
    """Base class for all kg2d errors."""


class ConfigError(Kg2dError):
    """Malformed or invalid run configuration."""


class WeakFieldError(Kg2dError):
    """Magnetic confinement too weak: the squared harmonic coefficient is non-positive."""


class KappaDomainError(Kg2dError):
    """Trial energy outside the bound-state domain: squared angular coefficient non-positive."""


class NoBoundStateError(Kg2dError):
    """No root of the quantization condition (or of the discretized operator) in the scan window."""


class AmbiguousBracketError(Kg2dError):
    """More than one root matches the requested radial quantum number."""


class GridError(Kg2dError):
    """Radial grid unusable: too short, too coarse, or producing non-finite operator entries."""
