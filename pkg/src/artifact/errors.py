"""Exception hierarchy shared by every module."""


class ArtifactError(Exception):
    """Base class for all library errors."""


class PoleError(ArtifactError):
    """Argument lies on (or within tolerance of) a pole."""


class DomainError(ArtifactError, ValueError):
    """Argument outside the supported domain."""


class ConvergenceError(ArtifactError):
    """A series, product or quadrature failed to reach its tolerance."""


class ModelError(ArtifactError):
    """Scattering model missing or lacking a required quantity."""


class InternalError(ArtifactError):
    """Two independent computations of the same exact quantity disagree."""


class DiagnosticError(ArtifactError):
    """A numerical consistency diagnostic is out of range."""
