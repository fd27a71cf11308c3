"""Resolvent point-pair kernel and the Psi -> Q -> g -> h chain.

Psi_{n,s}(u) solves the radial resolvent equation for the n-Laplacian.  The
difference Psi_{n,s} - Psi_{n,a} is finite at u = 0; it is the kernel fed to
every quadrature in the trace computations.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, PoleError
from .quadrature import integrate
from .special_fn import EULER_GAMMA, digamma, hyp2f1_resolvent, log_gamma

FOUR_PI = 4.0 * math.pi
SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class KernelParams:
    n: int
    s: complex
    a: complex

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 0:
            raise DomainError("n must be a nonnegative integer")
        s, a = complex(self.s), complex(self.a)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "a", a)
        if s.real <= 0 or a.real <= 0:
            raise DomainError("Re s and Re a must be positive")
        if s == a:
            raise DomainError("s and a must differ")


def psi_single(n: int, s, u: float) -> complex:
    """Psi_{n,s}(u); logarithmically singular at u = 0."""
    if u <= 0:
        raise DomainError("psi requires u > 0")
    s = complex(s)
    z = 1.0 / (u + 1.0)
    pref = cmath.exp(-s * math.log1p(u) + log_gamma(s) + log_gamma(s + 2 * n) - log_gamma(2 * s + 2 * n))
    return pref * hyp2f1_resolvent(s, n, z) / FOUR_PI


def psi_ns(p: KernelParams, u: float) -> complex:
    return psi_single(p.n, p.s, u)


def psi_pair(p: KernelParams, u: float) -> complex:
    """Psi_{n,s}(u) - Psi_{n,a}(u), finite as u -> 0."""
    return psi_single(p.n, p.s, u) - psi_single(p.n, p.a, u)


def psi_small_u_expansion(p: KernelParams, u: float) -> complex:
    if u <= 0:
        raise DomainError("expansion requires u > 0")
    n, s = p.n, p.s
    return (math.log(1.0 / u) - 2 * EULER_GAMMA - digamma(s + 2 * n) - digamma(s)) / FOUR_PI


def ode_residual(n: int, s, u: float, h: float = 1e-3) -> float:
    """Relative residual of u(u+1)Psi'' - [(2n-2)u - 1]Psi' - s(s+2n-1)Psi.

    Derivatives by 5-point central differences.
    """
    s = complex(s)
    f = [psi_single(n, s, u + k * h) for k in (-2, -1, 0, 1, 2)]
    d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h)
    d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h)
    t1 = u * (u + 1) * d2
    t2 = ((2 * n - 2) * u - 1) * d1
    t3 = s * (s + 2 * n - 1) * f[2]
    scale = max(abs(t1), abs(t2), abs(t3))
    return abs(t1 - t2 - t3) / scale


# ------------------------------------------------------------- Q transform


def q_power_closed(alpha, n: int, v: float) -> complex:
    """Q(v) for Psi(x) = (x+1)^(-alpha)."""
    alpha = complex(alpha)
    lg = log_gamma(alpha + n) + log_gamma(alpha + n - 0.5) - log_gamma(alpha) - log_gamma(alpha + 2 * n)
    return 2 * SQRT_PI * cmath.exp(lg - (alpha + n - 0.5) * math.log1p(v))


def q_power_closed_deriv(alpha, n: int, v: float) -> complex:
    alpha = complex(alpha)
    lg = log_gamma(alpha + n) + log_gamma(alpha + n + 0.5) - log_gamma(alpha) - log_gamma(alpha + 2 * n)
    return -2 * SQRT_PI * cmath.exp(lg - (alpha + n + 0.5) * math.log1p(v))


def q_quadrature(psi: Callable[[float], complex], n: int, v: float, *, fail_tol: float = 1e-9) -> complex:
    """Q(v) = 2(-1)^n int_R Psi(x^2+v) (x - i sqrt(v+1))^(-2n) dx, folded onto x > 0."""
    c2 = v + 1.0
    c = math.sqrt(c2)

    def f(x: float) -> complex:
        w = complex(x, c) ** (2 * n)
        return psi(x * x + v) * 2.0 * w.real / (x * x + c2) ** (2 * n)

    val, _ = integrate(f, 0.0, math.inf, fail_tol=fail_tol)
    return 2 * (-1) ** n * val


def _mu(n: int, s: complex) -> complex:
    return s + n - 0.5


def q_pair_closed(p: KernelParams, v: float) -> complex:
    """Q(v) of the resolvent pair, i.e. g(t) at v = sinh^2(t/2)."""
    return g_of_t(p, 2.0 * math.asinh(math.sqrt(v)))


def q_pair_deriv(p: KernelParams, v: float) -> complex:
    """Analytic Q'(v) of the resolvent pair for v > 0."""
    if v <= 0:
        raise DomainError("Q' of the resolvent pair needs v > 0")
    half_t = math.asinh(math.sqrt(v))
    ms, ma = _mu(p.n, p.s), _mu(p.n, p.a)
    # e^{-2 ms A} - e^{-2 ma A} with A = t/2, written to avoid cancellation at small v
    diff = cmath.exp(-2 * ma * half_t) * _expm1(-2 * (ms - ma) * half_t)
    return -diff / (2.0 * math.sqrt(v * (v + 1.0)))


def _expm1(z: complex) -> complex:
    if abs(z) < 1e-5:
        return z + z * z / 2 + z * z * z / 6
    return cmath.exp(z) - 1


def g_of_t(p: KernelParams, t: float) -> complex:
    t = abs(t)
    out = 0j
    for sign, x in ((1, p.s), (-1, p.a)):
        two_mu = 2 * _mu(p.n, x)
        if abs(two_mu) < 1e-14:
            raise PoleError("g: 2s+2n-1 = 0")
        out += sign * cmath.exp(-t * two_mu / 2) / two_mu
    return out


def h_of_r(p: KernelParams, r: float) -> complex:
    out = 0j
    for sign, x in ((1, p.s), (-1, p.a)):
        mu = _mu(p.n, x)
        out += sign / (r * r + mu * mu)
    return out


def fourier_residual(p: KernelParams, r: float) -> float:
    """|int g(|t|) e^{irt} dt - h(r)| by quadrature."""
    if r == 0:
        val, _ = integrate(lambda t: g_of_t(p, t), 0.0, math.inf, fail_tol=1e-10)
    else:
        val, _ = integrate(lambda t: g_of_t(p, t), 0.0, math.inf, weight="cos", wvar=r,
                           fail_tol=1e-10)
    return abs(2 * val - h_of_r(p, r))


# --------------------------------------------------------------- inversion


def inversion_integral(q_deriv: Callable[[float], complex], n: int, x: float) -> complex:
    """-(1/2pi) int_R Q'(x+t^2) (sqrt(x+1+t^2) - t)^(2n) dt, folded onto t > 0."""
    if x <= 0:
        raise DomainError("inversion requires x > 0")

    def f(t: float) -> complex:
        root = math.sqrt(x + 1.0 + t * t)
        return q_deriv(x + t * t) * ((root - t) ** (2 * n) + (root + t) ** (2 * n))

    val, _ = integrate(f, 0.0, math.inf, fail_tol=1e-10)
    return -val / (2 * math.pi)


def inversion_check(p: KernelParams, x: float) -> float:
    """|inversion of the analytic Q' - (Psi_{n,s}(x) - Psi_{n,a}(x))|."""
    val = inversion_integral(lambda v: q_pair_deriv(p, v), p.n, x)
    return abs(val - psi_pair(p, x))


def inversion_check_power(alpha, n: int, x: float) -> float:
    """Same round trip for Psi(x) = (x+1)^(-alpha), where both sides are elementary."""
    val = inversion_integral(lambda v: q_power_closed_deriv(alpha, n, v), n, x)
    return abs(val - (x + 1.0) ** (-complex(alpha)))
