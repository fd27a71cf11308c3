"""Resolvent trace formula and regularized determinants of n-Laplacians on
cofinite hyperbolic surfaces."""

from .errors import (ArtifactError, ConvergenceError, DiagnosticError, DomainError,
                     InternalError, ModelError, PoleError)
from .scattering import ModularScattering, NoScattering, SampledScattering
from .surface import SurfaceSignature, dim_holomorphic, dim_via_residue
from .trace_geom import LengthSpectrum, geometric_trace, geometric_trace_difference
from .zeta_det import det_prime, det_resolvent, selberg_log_zeta

__version__ = "0.1.0"

__all__ = [
    "ArtifactError", "ConvergenceError", "DiagnosticError", "DomainError", "InternalError",
    "LengthSpectrum", "ModelError", "ModularScattering", "NoScattering", "PoleError",
    "SampledScattering", "SurfaceSignature", "det_prime", "det_resolvent", "dim_holomorphic",
    "dim_via_residue", "geometric_trace", "geometric_trace_difference", "selberg_log_zeta",
]
