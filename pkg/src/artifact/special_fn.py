"""Complex special functions in double precision.

Log-gamma, digamma, the double gamma function (reciprocal Barnes G), the
Gauss function 2F1(s, s+2n; 2s+2n; z), a terminating balanced 4F3 and the
Riemann zeta function with its logarithmic derivative.

Every public function takes and returns Python ``complex`` values.  Results
are checked for finiteness; overflow surfaces as ``DomainError`` instead of
leaking NaN or Inf.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from math import comb

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

EULER_GAMMA = 0.57721566490153286060651209008240243
LOG_2PI = math.log(2.0 * math.pi)
# log of the Glaisher-Kinkelin constant A
LOG_GLAISHER = 0.24875447703378426254725291997
# zeta'(-1) = 1/12 - log A
ZETA_PRIME_MINUS_ONE = 1.0 / 12.0 - LOG_GLAISHER

POLE_TOL = 1e-14


def _bernoulli_numbers(count: int) -> list[Fraction]:
    b = [Fraction(1)]
    for m in range(1, count + 1):
        acc = sum(comb(m + 1, k) * b[k] for k in range(m))
        b.append(-acc / (m + 1))
    return b


_B = _bernoulli_numbers(40)
# B_2, B_4, ... as floats
_B2K = [float(_B[2 * k]) for k in range(1, 20)]


def _finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"{what}: result is not finite (overflow)")
    return z


def _nonpositive_integer_pole(z: complex) -> bool:
    if abs(z.imag) > POLE_TOL or z.real > 0.5:
        return False
    return abs(z.real - round(z.real)) <= POLE_TOL


def _check_gamma_pole(z: complex, what: str) -> None:
    if _nonpositive_integer_pole(z):
        raise PoleError(f"{what}: pole at {z}")


# ---------------------------------------------------------------- gamma


def _stirling(z: complex) -> complex:
    # valid for |z| >= 10 away from the negative axis
    r = (z - 0.5) * cmath.log(z) - z + 0.5 * LOG_2PI
    zinv = 1.0 / z
    z2 = zinv * zinv
    p = zinv
    for k in range(1, 13):
        r += _B2K[k - 1] / (2 * k * (2 * k - 1)) * p
        p *= z2
    return r


def log_gamma(z) -> complex:
    """Principal log Gamma(z) via upward shift to Re z >= 10 and Stirling."""
    z = complex(z)
    _check_gamma_pole(z, "log_gamma")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError("log_gamma: non-finite argument")
    if abs(z) > 1e150:
        raise DomainError("log_gamma: argument too large")
    shift = 0j
    w = z
    while w.real < 10.0:
        shift += cmath.log(w)
        w += 1.0
    return _finite(_stirling(w) - shift, "log_gamma")


def gamma(z) -> complex:
    lg = log_gamma(z)
    if lg.real > 709.0:
        raise DomainError("gamma: overflow")
    return cmath.exp(lg)


def digamma(z) -> complex:
    """psi(z) = Gamma'(z)/Gamma(z)."""
    z = complex(z)
    _check_gamma_pole(z, "digamma")
    if abs(z) > 1e150:
        raise DomainError("digamma: argument too large")
    shift = 0j
    w = z
    while w.real < 10.0:
        shift += 1.0 / w
        w += 1.0
    zinv = 1.0 / w
    z2 = zinv * zinv
    r = cmath.log(w) - 0.5 * zinv
    p = z2
    for k in range(1, 13):
        r -= _B2K[k - 1] / (2 * k) * p
        p *= z2
    return _finite(r - shift, "digamma")


# --------------------------------------------------------- double gamma


def _log_barnes_g_shifted(w: complex) -> complex:
    """Asymptotic log G(w+1) for |w| >= 20."""
    real = w.imag == 0.0 and w.real > 0.0
    if real:
        x = w.real
        lx = math.log(x)
        lead = math.fsum(
            [0.5 * x * x * lx, -0.75 * x * x, 0.5 * x * LOG_2PI, -lx / 12.0,
             ZETA_PRIME_MINUS_ONE]
        )
        corr = 0.0
        x2 = 1.0 / (x * x)
        p = x2
        for k in range(1, 12):
            corr += float(_B[2 * k + 2]) / (4 * k * (k + 1)) * p
            p *= x2
        return complex(lead + corr)
    lw = cmath.log(w)
    r = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * LOG_2PI - lw / 12.0
    r += ZETA_PRIME_MINUS_ONE
    w2 = 1.0 / (w * w)
    p = w2
    for k in range(1, 12):
        r += float(_B[2 * k + 2]) / (4 * k * (k + 1)) * p
        p *= w2
    return r


def log_gamma2(z) -> complex:
    """log Gamma_2(z) = -log G(z), with Gamma_2(s+1) = Gamma_2(s)/Gamma(s).

    Shifts the argument upward until Re z >= 20, then uses the Barnes
    asymptotic series for log G.
    """
    z = complex(z)
    _check_gamma_pole(z, "log_gamma2")
    if abs(z) > 1e100:
        raise DomainError("log_gamma2: |z| too large for double precision")
    if z.real >= 21.0:
        return _finite(-_log_barnes_g_shifted(z - 1.0), "log_gamma2")
    n_shift = int(math.ceil(21.0 - z.real))
    # sum_{k<n_shift} log Gamma(z+k) by the log Gamma recurrence
    lg = log_gamma(z)
    acc = lg
    w = z
    for _ in range(n_shift - 1):
        lg += cmath.log(w)
        w += 1.0
        acc += lg
    top = z + n_shift
    return _finite(acc - _log_barnes_g_shifted(top - 1.0), "log_gamma2")


def log_gamma2_asymptotic_leading(s: float) -> float:
    """Leading large-s form of log Gamma_2(s+1) without Bernoulli corrections."""
    ls = math.log(s)
    return math.fsum(
        [-0.5 * s * s * ls, 0.75 * s * s, -0.5 * s * LOG_2PI, ls / 12.0,
         -ZETA_PRIME_MINUS_ONE]
    )


# -------------------------------------------------------- hypergeometric


def _series_2f1(a: complex, b: complex, c: complex, z: float, max_terms: int) -> complex:
    total = 1 + 0j
    term = 1 + 0j
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        total += term
        if abs(term) < 1e-17 * abs(total) and k > 2:
            return total
    raise ConvergenceError("2F1 series did not converge")


def _log_connection_2f1(a: complex, b: complex, z: float) -> tuple[complex, float]:
    # c = a + b exactly; expansion about z = 1
    w = 1.0 - z
    lw = math.log(w)
    pa = digamma(a)
    pb = digamma(b)
    p1 = -EULER_GAMMA
    t = 1 + 0j
    total = t * (2 * p1 - pa - pb - lw)
    biggest = abs(total)
    for k in range(0, 5000):
        p1 += 1.0 / (k + 1)
        pa += 1.0 / (a + k)
        pb += 1.0 / (b + k)
        t *= (a + k) * (b + k) / ((k + 1) * (k + 1)) * w
        term = t * (2 * p1 - pa - pb - lw)
        total += term
        biggest = max(biggest, abs(term))
        if abs(t) * (abs(2 * p1 - pa - pb) + abs(lw) + 1) < 1e-17 * abs(total) and k > 2:
            pref = cmath.exp(log_gamma(a + b) - log_gamma(a) - log_gamma(b))
            return pref * total, biggest / max(abs(total), 1e-300)
    raise ConvergenceError("2F1 connection series did not converge")


def hyp2f1_resolvent(s, n: int, z: float) -> complex:
    """2F1(s, s+2n; 2s+2n; z) for 0 < z < 1.

    Direct series for z <= 1/2, logarithmic connection formula about z = 1
    otherwise.  When the connection series cancels badly (large parameters
    with 1-z not small) the direct series is used instead.
    """
    s = complex(s)
    if n < 0 or int(n) != n:
        raise DomainError("hyp2f1_resolvent: n must be a nonnegative integer")
    z = float(z)
    if not (0.0 < z < 1.0):
        raise DomainError("hyp2f1_resolvent: z must lie in (0, 1)")
    a, b, c = s, s + 2 * n, 2 * s + 2 * n
    if _nonpositive_integer_pole(c):
        raise PoleError("hyp2f1_resolvent: c is a nonpositive integer")
    if _nonpositive_integer_pole(a) or _nonpositive_integer_pole(b):
        # terminating polynomial; the direct series is exact
        return _series_2f1(a, b, c, z, 100000)
    if z <= 0.5:
        return _finite(_series_2f1(a, b, c, z, 100000), "hyp2f1_resolvent")
    val, cancel = _log_connection_2f1(a, b, z)
    if cancel > 1e4:
        # digits lost to cancellation; cost of the direct series grows like 1/(1-z)
        if (1.0 - z) * 1e5 > 1.0:
            val = _series_2f1(a, b, c, z, 2000000)
    return _finite(val, "hyp2f1_resolvent")


def _poch(x: complex, m: int) -> complex:
    p = 1 + 0j
    for i in range(m):
        p *= x + i
    return p


def hyp_terminating(upper: list, lower: list, n_terms: int) -> complex:
    """sum_{m=0}^{n_terms-1} prod (upper)_m / (prod (lower)_m m!) at argument 1."""
    total = 0j
    term = 1 + 0j
    for m in range(n_terms):
        total += term
        num = 1 + 0j
        den = complex(m + 1)
        for x in upper:
            num *= complex(x) + m
        for y in lower:
            den *= complex(y) + m
        if num == 0:
            break
        if abs(den) < POLE_TOL:
            raise PoleError("terminating series: denominator Pochhammer vanishes")
        term *= num / den
    return total


def hyp4f3_balanced(n: int, alpha, s) -> complex:
    """4F3(-n, -n+1/2, alpha+1/2, alpha+1/2; 1/2, -s-2n+alpha+3/2, s+alpha+1/2; 1)."""
    if n < 0 or int(n) != n:
        raise DomainError("hyp4f3_balanced: n must be a nonnegative integer")
    alpha = complex(alpha)
    s = complex(s)
    upper = [-n, -n + 0.5, alpha + 0.5, alpha + 0.5]
    lower = [0.5, -s - 2 * n + alpha + 1.5, s + alpha + 0.5]
    for y in lower:
        for m in range(n):
            if abs(y + m) < POLE_TOL:
                raise PoleError("hyp4f3_balanced: lower parameter hits zero")
    return _finite(hyp_terminating(upper, lower, n + 1), "hyp4f3_balanced")


def hyp4f3_whipple_form(n: int, alpha, s) -> complex:
    """Same value through the Whipple transformation of the balanced series.

    Gamma prefactor times 4F3(-n, -n+1/2, -alpha, -alpha; 1/2, s-alpha,
    1-s-2n-alpha; 1).  Gamma ratios with poles in both numerator and
    denominator are evaluated as finite products.
    """
    alpha = complex(alpha)
    s = complex(s)

    def ratio(x: complex, k: int) -> complex:
        # Gamma(x)/Gamma(x-k) = (x-1)(x-2)...(x-k)
        return _poch(x - k, k)

    # Gamma(a+1-s)/Gamma(a+1-s-n)
    pref = ratio(alpha + 1 - s, n)
    # Gamma(a+s+2n)/Gamma(a+s+n)
    pref *= _poch(alpha + s + n, n)
    # Gamma(a-s-2n+3/2)/Gamma(a-s-n+3/2)
    pref /= ratio(alpha - s - n + 1.5, n)
    # Gamma(a+s+1/2)/Gamma(a+s+n+1/2)
    pref /= _poch(alpha + s + 0.5, n)
    upper = [-n, -n + 0.5, -alpha, -alpha]
    lower = [0.5, s - alpha, 1 - s - 2 * n - alpha]
    return _finite(pref * hyp_terminating(upper, lower, n + 1), "hyp4f3_whipple_form")


# ------------------------------------------------------------- zeta


def _em_terms(z: complex) -> int:
    return 50 if abs(z.imag) <= 50.0 else int(abs(z.imag)) + 50


def _zeta_parts(z: complex) -> tuple[complex, complex, complex, complex]:
    """Euler-Maclaurin pieces: zeta(z) = H(z) + P(z)/(z-1).

    Returns (H, H', P, P') with P = N^{1-z}.
    """
    n_terms = _em_terms(z)
    k = np.arange(1, n_terms, dtype=float)
    lk = np.log(k)
    pw = np.exp(-z * lk)
    h = complex(pw.sum())
    dh = complex(-(lk * pw).sum())
    big_n = float(n_terms)
    ln = math.log(big_n)
    nz = cmath.exp(-z * ln)
    h += 0.5 * nz
    dh -= 0.5 * ln * nz
    # Bernoulli corrections B_2j/(2j)! z(z+1)..(z+2j-2) N^{-z-2j+1}
    p = z
    dp = 1 + 0j
    fact = 2.0
    npow = nz / big_n
    for j in range(1, 11):
        coef = _B2K[j - 1] / fact
        h += coef * p * npow
        dh += coef * (dp - ln * p) * npow
        for i in (2 * j - 1, 2 * j):
            dp = dp * (z + i) + p
            p = p * (z + i)
        fact *= (2 * j + 1) * (2 * j + 2)
        npow /= big_n * big_n
    big_p = big_n * nz
    return h, dh, big_p, -ln * big_p


def _zeta_and_deriv(z: complex) -> tuple[complex, complex]:
    h, dh, p, dp = _zeta_parts(z)
    zm1 = z - 1
    return h + p / zm1, dh + dp / zm1 - p / (zm1 * zm1)


def zeta_pole_removed(z) -> tuple[complex, complex]:
    """(F(z), F'(z)) for the entire function F(z) = (z-1) zeta(z)."""
    z = complex(z)
    if z.real <= -2.0:
        raise DomainError("zeta_pole_removed: requires Re z > -2")
    h, dh, p, dp = _zeta_parts(z)
    zm1 = z - 1
    return _finite(zm1 * h + p, "zeta_pole_removed"), _finite(h + zm1 * dh + dp, "zeta_pole_removed")


def riemann_zeta(z) -> complex:
    """zeta(z) by Euler-Maclaurin summation, Re z > -2."""
    z = complex(z)
    if abs(z - 1) <= POLE_TOL:
        raise PoleError("riemann_zeta: pole at z = 1")
    if z.real <= -2.0:
        raise DomainError("riemann_zeta: requires Re z > -2")
    return _finite(_zeta_and_deriv(z)[0], "riemann_zeta")


def riemann_zeta_deriv(z) -> complex:
    """zeta'(z) by term-wise differentiation of the Euler-Maclaurin form."""
    z = complex(z)
    if abs(z - 1) <= POLE_TOL:
        raise PoleError("riemann_zeta_deriv: pole at z = 1")
    if z.real <= -2.0:
        raise DomainError("riemann_zeta_deriv: requires Re z > -2")
    return _finite(_zeta_and_deriv(z)[1], "riemann_zeta_deriv")


def zeta_log_deriv(z) -> complex:
    """zeta'(z)/zeta(z)."""
    z = complex(z)
    if abs(z - 1) <= POLE_TOL:
        raise PoleError("zeta_log_deriv: pole at z = 1")
    if z.real <= -2.0:
        raise DomainError("zeta_log_deriv: requires Re z > -2")
    v, d = _zeta_and_deriv(z)
    if abs(v) < 1e-300:
        raise PoleError("zeta_log_deriv: zero of zeta")
    return _finite(d / v, "zeta_log_deriv")
