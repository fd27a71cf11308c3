"""Selberg zeta products, the determinant factors and the constants B, D, C_n.

Everything is accumulated as a logarithm.  Branches are the sums of
principal logarithms of the individual factors, which is continuous along
the positive real axis where determinants are assembled.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DiagnosticError, DomainError, InternalError, PoleError
from .quadrature import integrate
from .residues import alpha, beta_closed
from .scattering import ScatteringModel, a_constant
from .special_fn import EULER_GAMMA, LOG_2PI, ZETA_PRIME_MINUS_ONE, gamma, log_gamma, log_gamma2
from .surface import SurfaceSignature, dim_holomorphic
from .trace_geom import LengthSpectrum

LOG2 = math.log(2.0)
LOG_PI = math.log(math.pi)
ZERO_TAIL = 1e-18


@dataclass(frozen=True)
class DetConstants:
    B: float
    D: float
    A: float = 0.0
    C: float | None = None
    n0: int = 0

    def to_dict(self) -> dict:
        return {"B": self.B, "D": self.D, "A": self.A, "C": self.C, "n0": self.n0}


# ------------------------------------------------------ truncated Z(s)


def _kmax_for(norm: float, sigma: float) -> int:
    # smallest k with N^{-(sigma+k)} < ZERO_TAIL
    k = int(math.ceil(-math.log(ZERO_TAIL) / math.log(norm) - sigma))
    return max(k, 1)


def _log1m(x: complex) -> complex:
    """log(1 - x), accurate for small |x|."""
    if abs(x) < 1e-4:
        return -(x + x * x / 2 + x ** 3 / 3 + x ** 4 / 4 + x ** 5 / 5)
    return cmath.log(1 - x)


def _terms(spec: LengthSpectrum, s: complex, kmax: int | None):
    if s.real <= 0:
        raise DomainError("truncated Selberg product needs Re s > 0")
    for norm, mult in spec.entries:
        kk = kmax if kmax is not None else _kmax_for(norm, s.real)
        if kk > 10 ** 6:
            raise DomainError(f"norm {norm} too close to 1 for the truncated product")
        yield norm, mult, kk


def selberg_log_zeta(spec: LengthSpectrum, s, kmax: int | None = None) -> tuple[complex, float]:
    """log Z(s) of the truncated Euler product and an estimate of the dropped tail.

    kmax=None picks per entry the first k with N^{-(Re s + k)} < 1e-18.
    """
    s = complex(s)
    total = 0j
    tail = 0.0
    for norm, mult, kk in _terms(spec, s, kmax):
        ln = math.log(norm)
        acc = 0j
        for k in range(kk):
            x = cmath.exp(-(s + k) * ln)
            if x == 1:
                raise PoleError("truncated product vanishes")
            acc += _log1m(x)
        lead = norm ** -(s.real + kk)
        tail += mult * lead / ((1 - lead) * (1 - 1 / norm))
        total += mult * acc
    return total, tail


def selberg_zeta_trunc(spec: LengthSpectrum, s, kmax: int | None = None) -> complex:
    return cmath.exp(selberg_log_zeta(spec, s, kmax)[0])


def selberg_log_deriv(spec: LengthSpectrum, s, kmax: int | None = None) -> complex:
    """d/ds log Z(s) = sum_P sum_k log N / (N^{s+k} - 1)."""
    s = complex(s)
    total = 0j
    for norm, mult, kk in _terms(spec, s, kmax):
        ln = math.log(norm)
        total += mult * sum(ln / (cmath.exp((s + k) * ln) - 1) for k in range(kk))
    return total


def selberg_zeta_deriv(spec: LengthSpectrum, s, kmax: int | None = None) -> complex:
    return selberg_zeta_trunc(spec, s, kmax) * selberg_log_deriv(spec, s, kmax)


# --------------------------------------------------------- the factors


def _check_u(n: int, s: complex) -> complex:
    u = s + n - 0.5
    if abs(u) < 1e-14:
        raise PoleError("s + n - 1/2 = 0")
    return u


def log_z_infinity(sig: SurfaceSignature, n: int, s) -> complex:
    s = complex(s)
    inner = ((2 * s + 2 * n - 1) * LOG_2PI + 2 * log_gamma2(s + 2 * n) + 2 * log_gamma2(s)
             + (2 * n - 1) * log_gamma(s + 2 * n) - (2 * n + 1) * log_gamma(s))
    return float(sig.area_over_2pi) / 2 * inner


def z_ell_exponents(m: int, n: int) -> tuple[list[Fraction], list[Fraction]]:
    """Exponents of Gamma((s+r)/m) and Gamma((s+2n+r)/m) in Z_ell."""
    lo = [Fraction(2 * alpha(m, r - n) + 1 - m, 2 * m) for r in range(m)]
    hi = [Fraction(2 * alpha(m, r + n) + 1 - m, 2 * m) for r in range(m)]
    return lo, hi


def log_z_ell(sig: SurfaceSignature, n: int, s) -> complex:
    s = complex(s)
    acc = 0j
    for m in sig.elliptic_orders:
        lo, hi = z_ell_exponents(m, n)
        for r in range(m):
            if lo[r]:
                acc += float(lo[r]) * log_gamma((s + r) / m)
            if hi[r]:
                acc += float(hi[r]) * log_gamma((s + 2 * n + r) / m)
    return acc


def log_z_par(sig: SurfaceSignature, n: int, s, A: float = 0.0) -> complex:
    s = complex(s)
    q = sig.cusps
    acc = 0j
    if q:
        inner = (log_gamma(s) + log_gamma(s + 2 * n) - (2 * s + 2 * n - 1) * LOG2
                 - 2 * log_gamma(s + n) - 2 * log_gamma(s + n + 0.5))
        acc += q / 2 * inner
    if A:
        # A is an even integer, so (s+n-1/2)^{A/2} has no branch ambiguity
        acc += A / 2 * cmath.log(_check_u(n, s))
    return acc


def z_infinity(sig, n, s) -> complex:
    return cmath.exp(log_z_infinity(sig, n, s))


def z_ell(sig, n, s) -> complex:
    return cmath.exp(log_z_ell(sig, n, s))


def z_par(sig, n, s, A: float = 0.0) -> complex:
    return cmath.exp(log_z_par(sig, n, s, A))


# ---------------------------------------------------------- constants


def _beta_sum(sig: SurfaceSignature, n: int) -> Fraction:
    return sum((beta_closed(m, n) for m in sig.elliptic_orders), Fraction(0))


def _beta_log_sum(sig: SurfaceSignature, n: int) -> float:
    return math.fsum(float(beta_closed(m, n)) * math.log(m) for m in sig.elliptic_orders)


def b_d_constants(sig: SurfaceSignature, n: int) -> DetConstants:
    area = sig.area
    b = -area / (2 * math.pi)
    d = math.fsum([area / math.pi * ZETA_PRIME_MINUS_ONE, sig.cusps / 2 * LOG_2PI,
                   _beta_log_sum(sig, n)])
    return DetConstants(B=b, D=d)


def asymptotic_coeffs_ell(sig: SurfaceSignature, n: int) -> tuple[Fraction, float]:
    """(B_ell, D_ell) with log Z_ell = B_ell log u + D_ell + o(1).

    The u log u and u coefficients are sums of the zero-sum families and are
    checked to vanish exactly.
    """
    for m in sig.elliptic_orders:
        lo, hi = z_ell_exponents(m, n)
        if sum(lo) + sum(hi) != 0:
            raise InternalError(f"u log u coefficient nonzero for m = {m}")
    return _beta_sum(sig, n), -_beta_log_sum(sig, n)


def beta_from_exponents(m: int, n: int) -> Fraction:
    """beta_j summed straight from the Z_ell exponents (asymptotic expansion route)."""
    lo, hi = z_ell_exponents(m, n)
    total = Fraction(0)
    for r in range(m):
        total += lo[r] * (Fraction(2 * r - 2 * n + 1, 2 * m) - Fraction(1, 2))
        total += hi[r] * (Fraction(2 * r + 2 * n + 1, 2 * m) - Fraction(1, 2))
    return total


# -------------------------------------------------------- determinant


def log_det_resolvent(sig: SurfaceSignature, n: int, s, spec: LengthSpectrum | None = None,
                      A: float = 0.0, kmax: int | None = None) -> complex:
    s = complex(s)
    spec = spec if spec is not None else LengthSpectrum()
    cst = b_d_constants(sig, n)
    u = s + n - 0.5
    return (log_z_infinity(sig, n, s) + selberg_log_zeta(spec, s + n, kmax)[0]
            + log_z_ell(sig, n, s) + log_z_par(sig, n, s, A) + cst.B * u * u + cst.D)


def _model_a(sig: SurfaceSignature, model: ScatteringModel | None) -> int:
    if sig.cusps == 0 or model is None:
        return 0
    return a_constant(model)


def det_resolvent(sig: SurfaceSignature, n: int, s, spec: LengthSpectrum | None = None,
                  model: ScatteringModel | None = None, kmax: int | None = None) -> complex:
    """det(Delta_n + s(s+2n-1)) = Z_inf Z(s+n) Z_ell Z_par exp(B u^2 + D)."""
    return cmath.exp(log_det_resolvent(sig, n, s, spec, _model_a(sig, model), kmax))


def large_u_law(sig: SurfaceSignature, n: int, u: float, A: float = 0.0) -> float:
    """Large-u form of log det(Delta_n + s(s+2n-1)) with u = s + n - 1/2."""
    lu = math.log(u)
    k = float(sig.area_over_2pi) / 2
    b_ell, d_ell = asymptotic_coeffs_ell(sig, n)
    cst = b_d_constants(sig, n)
    q = sig.cusps
    return math.fsum([
        k * (-2 * u * u + 2 * n * n - 1 / 6) * lu, k * 3 * u * u, -k * 4 * ZETA_PRIME_MINUS_ONE,
        float(b_ell) * lu, d_ell,
        q / 2 * (-(2 * u + 1) * lu), q / 2 * (2 * u), -q / 2 * LOG_2PI, -q / 2 * (2 * u * LOG2),
        A / 2 * lu, cst.B * u * u, cst.D,
    ])


def z_infinity_asymptotic(sig: SurfaceSignature, n: int, u: float) -> float:
    lu = math.log(u)
    k = float(sig.area_over_2pi) / 2
    return math.fsum([k * (-2 * u * u + 2 * n * n - 1 / 6) * lu, k * 3 * u * u,
                      -k * 4 * ZETA_PRIME_MINUS_ONE])


def z_par_asymptotic(sig: SurfaceSignature, n: int, u: float, A: float = 0.0) -> float:
    lu = math.log(u)
    q = sig.cusps
    return math.fsum([q / 2 * (-(2 * u + 1) * lu), q * u, -q / 2 * LOG_2PI,
                      -q * u * LOG2, A / 2 * lu])


# -------------------------------------------------------------- C_n


def small_s_exponent(sig: SurfaceSignature, n: int) -> Fraction:
    """Power of s in Z_inf Z_ell Z_par as s -> 0."""
    k = sig.area_over_2pi / 2
    if n == 0:
        e = -2 * k
        for m in sig.elliptic_orders:
            e += Fraction(m - 1, m)
        return e
    e = (2 * n - 1) * k
    for m in sig.elliptic_orders:
        e += Fraction(m - 1 - 2 * alpha(m, -n), 2 * m)
    return e - Fraction(sig.cusps, 2)


def log_c_constant(sig: SurfaceSignature, n: int, A: float = 0.0, n0: int = 0) -> complex:
    """log C_n from the closed forms; imaginary part pi when C_0 is negative."""
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    cst = b_d_constants(sig, n)
    k = float(sig.area_over_2pi) / 2
    q = sig.cusps
    if n == 0:
        sign_pow = int(round(A / 2)) + 1 - n0
        acc = [(q - A / 2) * LOG2, -(q / 2 + k) * LOG_2PI, cst.B / 4 + cst.D]
        for m in sig.elliptic_orders:
            acc.append((1 - m) / m * math.log(m))
            for r in range(1, m):
                acc.append((2 * r + 1 - m) / m * log_gamma(r / m).real)
        val = complex(math.fsum(acc))
        return val + (1j * math.pi if sign_pow % 2 else 0)
    dn = dim_holomorphic(sig, n)
    acc = [k * ((2 * n - 1) * LOG_2PI + 2 * log_gamma2(2 * n).real
                + (2 * n - 1) * log_gamma(2 * n).real)]
    for m in sig.elliptic_orders:
        acc.append((2 * alpha(m, -n) + 1 - m) / (2 * m) * math.log(m))
        for r in range(1, m):
            acc.append((2 * alpha(m, r - n) + 1 - m) / (2 * m) * log_gamma(r / m).real)
        for r in range(m):
            acc.append((2 * alpha(m, r + n) + 1 - m) / (2 * m) * log_gamma((2 * n + r) / m).real)
    acc.append(q / 2 * ((2 * n - 1) * LOG2 - LOG_PI - log_gamma(2 * n).real))
    acc.append(-dn * math.log(2 * n - 1))
    if A:
        acc.append(A / 2 * math.log(n - 0.5))
    acc.append(cst.B * (n - 0.5) ** 2 + cst.D)
    return complex(math.fsum(acc))


def c_constant(sig: SurfaceSignature, n: int, A: float = 0.0, n0: int = 0) -> float:
    lc = log_c_constant(sig, n, A, n0)
    return (cmath.exp(lc)).real


def _neville_at_zero(xs: list[float], ys: list[complex]) -> complex:
    p = list(ys)
    for k in range(1, len(xs)):
        for i in range(len(xs) - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return p[0]


def log_c_constant_from_limits(sig: SurfaceSignature, n: int, A: float = 0.0, n0: int = 0) -> complex:
    """log C_n by extrapolating the regular part of the factors to s = 0.

    log(Z_inf Z_ell Z_par) + B u^2 + D - e log s is analytic at s = 0; it is
    sampled on a geometric grid and extrapolated with Neville's scheme.
    """
    e = small_s_exponent(sig, n)
    cst = b_d_constants(sig, n)
    hs = [0.02 / 2 ** j for j in range(8)]
    vals = []
    for h in hs:
        u = h + n - 0.5
        lf = log_z_infinity(sig, n, h) + log_z_ell(sig, n, h) + log_z_par(sig, n, h, A)
        vals.append(lf + cst.B * u * u + cst.D - float(e) * math.log(h))
    lim = _neville_at_zero(hs, vals)
    if n == 0:
        # det / [s(s-1)]^{1-n0}; (s-1)^{1-n0} -> (-1)^{1-n0}
        return lim + (1j * math.pi if (1 - n0) % 2 else 0)
    dn = dim_holomorphic(sig, n)
    expect = dn - (1 if n == 1 else 0)
    if e != expect:
        raise InternalError(f"small-s exponent {e} disagrees with d_n bookkeeping {expect}")
    return lim - dn * math.log(2 * n - 1)


# ---------------------------------------------------------------- det'


@dataclass(frozen=True)
class DetPrime:
    value: float
    c_constant: float
    zeta_factor: float
    diagnostic: float | None


def _z0_from_product(spec: LengthSpectrum, order: int) -> float:
    # the truncated product vanishes at s = 0 to order sum(mult) from the k = 0 factors
    total = sum(mult for _, mult in spec.entries)
    if total != order:
        raise DomainError(
            f"truncated product has a zero of order {total} at 0, expected {order}; supply Z_0")
    acc = 0.0
    for norm, mult in spec.entries:
        ln = math.log(norm)
        acc += mult * math.log(ln)
        acc += mult * selberg_log_zeta(LengthSpectrum(((norm, 1),)), 1.0)[0].real
    return math.exp(acc)


def det_prime(sig: SurfaceSignature, n: int, spec: LengthSpectrum | None = None,
              model: ScatteringModel | None = None, n0: int = 0, z0: float | None = None,
              diag_s: float = 1e-4) -> DetPrime:
    spec = spec if spec is not None else LengthSpectrum()
    A = _model_a(sig, model)
    cn = c_constant(sig, n, A, n0)
    if n == 0:
        zf = z0 if z0 is not None else _z0_from_product(spec, 2 * sig.genus - 1 + sig.cusps - n0)
        return DetPrime(cn * zf, cn, zf, None)
    if n == 1:
        zf = selberg_zeta_deriv(spec, 1.0).real
        return DetPrime(cn * zf, cn, zf, None)
    zf = selberg_zeta_trunc(spec, float(n)).real
    dn = dim_holomorphic(sig, n)
    ld = log_det_resolvent(sig, n, diag_s, spec, A)
    ratio = cmath.exp(ld - dn * math.log(diag_s * (diag_s + 2 * n - 1))
                      - log_c_constant(sig, n, A, n0) - math.log(zf)).real
    if abs(ratio - 1) > 1e-2:
        raise DiagnosticError(f"det' limit ratio {ratio} deviates from 1")
    return DetPrime(cn * zf, cn, zf, ratio)


# ------------------------------------------------------------- Mellin


def mellin_closed(kind: str, u: float) -> float:
    """d/dw at 0 of (1/Gamma(w)) int_0^inf t^{w-1+p} [log t] e^{-t u^2} dt."""
    lu = math.log(u)
    if kind == "p0":
        return -2 * lu
    if kind == "pm1":
        return -u * u + 2 * u * u * lu
    if kind == "pm_half":
        return -2 * math.sqrt(math.pi) * u
    if kind == "pm_half_log":
        return -2 * math.sqrt(math.pi) * u * (2 - 2 * LOG2 - EULER_GAMMA - 2 * lu)
    raise DomainError(f"unknown Mellin kind {kind}")


_MELLIN_P = {"p0": (0.0, False), "pm1": (-1.0, False), "pm_half": (-0.5, False),
             "pm_half_log": (-0.5, True)}


def _mellin_integral(w: float, p: float, with_log: bool, u: float) -> float:
    """int_0^inf t^{w+p-1} [log t] e^{-t u^2} dt, continued to w + p <= 0.

    On (0, 1) the Taylor terms of e^{-t u^2} that make the integral diverge
    are removed and integrated in closed form.
    """
    a = w + p
    u2 = u * u
    nsub = 0
    while a + nsub <= 0.5:
        nsub += 1

    def remainder(t: float) -> float:
        x = u2 * t
        term, acc, j = 1.0, 0.0, 0
        while True:
            if j >= nsub:
                acc += term
                if abs(term) < 1e-18 * max(abs(acc), 1e-300) or j > 200:
                    break
            j += 1
            term *= -x / j
        return acc

    def f(t: float) -> float:
        v = t ** (a - 1) * remainder(t)
        return v * math.log(t) if with_log else v

    head, _ = integrate(f, 0.0, 1.0, fail_tol=1e-9, real=True, epsabs=1e-14, epsrel=1e-13)
    closed = 0.0
    c = 1.0
    for j in range(nsub):
        closed += c * (-1.0 / (a + j) ** 2 if with_log else 1.0 / (a + j))
        c *= -u2 / (j + 1)

    def g(t: float) -> float:
        v = t ** (a - 1) * math.exp(-u2 * t)
        return v * math.log(t) if with_log else v

    tail, _ = integrate(g, 1.0, math.inf, fail_tol=1e-9, real=True, epsabs=1e-14, epsrel=1e-13)
    return head.real + closed + tail.real


def mellin_numeric(kind: str, u: float, h: float = 1e-5) -> float:
    """Central difference in w of the quadrature-continued Mellin transform."""
    if kind not in _MELLIN_P:
        raise DomainError(f"unknown Mellin kind {kind}")
    p, with_log = _MELLIN_P[kind]

    def F(w: float) -> float:
        return (_mellin_integral(w, p, with_log, u) / gamma(w)).real

    return (F(h) - F(-h)) / (2 * h)
