"""Adaptive quadrature for complex-valued integrands.

Thin layer over QUADPACK (scipy.integrate.quad): real and imaginary parts
are integrated separately, infinite ranges are split at 1 so the
reciprocal mapping of the tail stays well conditioned, and a stalled error
estimate raises ConvergenceError instead of a warning.
"""

from __future__ import annotations

import math
import warnings
from typing import Callable

from scipy import integrate as _si

from .errors import ConvergenceError


def _quad_real(f, a, b, epsabs, epsrel, limit, points, weight, wvar):
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit)
    if points is not None and math.isfinite(a) and math.isfinite(b):
        kwargs["points"] = points
    if weight is not None:
        kwargs["weight"] = weight
        kwargs["wvar"] = wvar
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        val, err = _si.quad(f, a, b, **kwargs)[:2]
    return val, err


def integrate(
    f: Callable[[float], complex],
    a: float,
    b: float,
    *,
    epsabs: float = 1e-12,
    epsrel: float = 1e-12,
    limit: int = 400,
    points=None,
    fail_tol: float | None = 1e-8,
    weight: str | None = None,
    wvar: float | None = None,
    real: bool = False,
) -> tuple[complex, float]:
    """Integral of f over [a, b] with an error estimate.

    ``fail_tol`` bounds the acceptable absolute error estimate (scaled by
    max(1, |value|)); pass None to skip the check.  ``real=True`` skips the
    imaginary pass for integrands known to be real.
    """
    if math.isinf(b) and math.isfinite(a) and weight is None and a < 1.0:
        v1, e1 = integrate(f, a, 1.0, epsabs=epsabs, epsrel=epsrel, limit=limit,
                           points=points, fail_tol=None, real=real)
        v2, e2 = integrate(f, 1.0, b, epsabs=epsabs, epsrel=epsrel, limit=limit,
                           fail_tol=None, real=real)
        val, err = v1 + v2, e1 + e2
    else:
        cache: dict[float, complex] = {}

        def fc(x: float) -> complex:
            v = cache.get(x)
            if v is None:
                v = complex(f(x))
                cache[x] = v
            return v

        re, e_re = _quad_real(lambda x: fc(x).real, a, b, epsabs, epsrel, limit,
                              points, weight, wvar)
        if real:
            im, e_im = 0.0, 0.0
        else:
            im, e_im = _quad_real(lambda x: fc(x).imag, a, b, epsabs, epsrel, limit,
                                  points, weight, wvar)
        val, err = complex(re, im), e_re + e_im
    if not (math.isfinite(val.real) and math.isfinite(val.imag)):
        raise ConvergenceError("quadrature produced a non-finite value")
    if fail_tol is not None and err > fail_tol * max(1.0, abs(val)):
        raise ConvergenceError(f"quadrature error estimate {err:.3g} exceeds {fail_tol:.3g}")
    return val, err
