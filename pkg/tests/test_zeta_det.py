import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from artifact import trace_geom as tg, zeta_det as zd
from artifact.errors import DomainError
from artifact.residues import beta_closed
from artifact.scattering import ModularScattering, sigma_integral
from artifact.special_fn import ZETA_PRIME_MINUS_ONE
from artifact.surface import SurfaceSignature, dim_holomorphic

MODULAR = SurfaceSignature(0, 1, (2, 3))
COMPACT = SurfaceSignature(2, 0, ())
SPEC = tg.LengthSpectrum(((3.0, 1), (5.5, 2), (9.0, 1)))
LOG_2PI = math.log(2 * math.pi)

spectra = st.lists(st.tuples(st.floats(2.0, 100.0), st.integers(1, 3)), min_size=1, max_size=15).map(
    lambda e: tg.LengthSpectrum(tuple(e)))


def test_empty_product_is_one():
    assert zd.selberg_zeta_trunc(tg.LengthSpectrum(), 1.7) == 1


def test_longer_truncation_agrees():
    spec = tg.LengthSpectrum(((math.e ** 3, 1),))
    a = zd.selberg_zeta_trunc(spec, 2.0, kmax=100)
    b = zd.selberg_zeta_trunc(spec, 2.0, kmax=200)
    direct = math.prod(1 - math.exp(-3 * (2 + k)) for k in range(100))
    assert abs(a - b) < 1e-15 and abs(a - direct) < 1e-15


def test_log_derivative_central_difference():
    n, s = 1, 1.5
    sp = s + n
    h = 1e-6
    fd = (zd.selberg_log_zeta(SPEC, sp + h)[0] - zd.selberg_log_zeta(SPEC, sp - h)[0]) / (2 * h)
    assert abs(fd - (2 * s + 2 * n - 1) * tg.hyperbolic_term(SPEC, n, s)) < 1e-8


@settings(max_examples=20, deadline=None)
@given(spectra, st.floats(0.7, 3.0), st.floats(-2.0, 2.0))
def test_log_derivative_identity(spec, x, y):
    s = complex(x, y)
    h = 1e-6
    fd = (zd.selberg_log_zeta(spec, s + h)[0] - zd.selberg_log_zeta(spec, s - h)[0]) / (2 * h)
    assert abs(fd - zd.selberg_log_deriv(spec, s)) < 1e-8 * max(1.0, abs(fd))


def test_empty_factors():
    assert zd.z_par(COMPACT, 2, 1.3) == 1
    assert zd.z_ell(COMPACT, 2, 1.3) == 1


def test_z_par_a_power():
    for s in (0.7, 2.4):
        ratio = zd.log_z_par(MODULAR, 1, s, 2) - zd.log_z_par(MODULAR, 1, s, 0)
        assert abs(ratio - math.log(s + 0.5)) < 1e-15


def test_factor_log_derivative_matches_trace():
    sig, n, s = MODULAR, 1, 2.0
    model = ModularScattering()
    A = 2

    def f(x):
        return zd.log_z_infinity(sig, n, x) + zd.log_z_ell(sig, n, x) + zd.log_z_par(sig, n, x, A)

    h = 1e-5
    fd = (f(s + h) - f(s - h)) / (2 * h)
    u = s + n - 0.5
    b = zd.b_d_constants(sig, n).B
    lhs = (fd + 2 * b * u) / (2 * s + 2 * n - 1)
    trace = (tg.identity_term(sig, n, s) + tg.elliptic_term(sig, n, s) + tg.parabolic_term(sig, n, s, model))
    rhs = trace - sigma_integral(n, s, model).value / 2
    assert abs(lhs - rhs) < 1e-6


def test_full_derivative_identity_with_spectrum():
    sig, n, s = MODULAR, 2, 1.7
    model = ModularScattering()
    h = 1e-5
    ld = lambda x: zd.log_det_resolvent(sig, n, x, SPEC, 2)
    lhs = (ld(s + h) - ld(s - h)) / (2 * h) / (2 * s + 2 * n - 1)
    rhs = tg.geometric_trace(sig, n, s, SPEC, model).total - sigma_integral(n, s, model).value / 2
    assert abs(lhs - rhs) < 1e-7


def test_b_d_compact():
    for n in (0, 1, 2, 5):
        c = zd.b_d_constants(COMPACT, n)
        assert abs(c.B + 2) < 1e-15
        assert abs(c.D - 4 * ZETA_PRIME_MINUS_ONE) < 1e-15


def test_b_d_modular_n2():
    c = zd.b_d_constants(MODULAR, 2)
    want = ZETA_PRIME_MINUS_ONE / 3 + LOG_2PI / 2 + math.log(2) / 4 - 2 * math.log(3) / 9
    assert abs(c.B + 1 / 6) < 1e-15
    assert abs(c.D - want) < 1e-14
    assert abs(c.D - 0.79295) < 1e-5


def test_d_periodic_in_n():
    for n in (1, 2, 3):
        assert zd.b_d_constants(MODULAR, n).D == zd.b_d_constants(MODULAR, n + 6).D


def test_asymptotic_coefficients():
    assert zd.asymptotic_coeffs_ell(COMPACT, 2) == (0, 0)
    b, d = zd.asymptotic_coeffs_ell(MODULAR, 1)
    assert b == Fraction(-17, 36)
    assert abs(d - (math.log(2) / 4 + 2 * math.log(3) / 9)) < 1e-15


@pytest.mark.parametrize("m", [2, 3, 5, 7])
@pytest.mark.parametrize("n", [0, 1, 2, 3, 8])
def test_beta_two_routes(m, n):
    assert zd.beta_from_exponents(m, n) == beta_closed(m, n)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_asymptotic_laws(n):
    u = 1e4
    s = u - n + 0.5
    b, d = zd.asymptotic_coeffs_ell(MODULAR, n)
    assert abs(zd.log_z_ell(MODULAR, n, s).real - (float(b) * math.log(u) + d)) < 1e-3
    assert abs(zd.log_z_infinity(MODULAR, n, s).real - zd.z_infinity_asymptotic(MODULAR, n, u)) < 1e-3
    assert abs(zd.log_z_par(MODULAR, n, s, 2).real - zd.z_par_asymptotic(MODULAR, n, u, 2)) < 1e-3


def test_large_u_law_trend():
    spec = tg.LengthSpectrum(((4.0, 1), (7.0, 1)))
    res = []
    for u in (1e2, 1e3):
        s = u - 1 + 0.5
        res.append(abs(zd.log_det_resolvent(MODULAR, 1, s, spec, 2).real - zd.large_u_law(MODULAR, 1, u, 2)))
    assert res[1] < res[0] and res[1] < 1e-2


def test_det_factor_consistency():
    s, n = 1.0, 2
    total = zd.det_resolvent(MODULAR, n, s, SPEC, ModularScattering())
    cst = zd.b_d_constants(MODULAR, n)
    u = s + n - 0.5
    parts = (zd.z_infinity(MODULAR, n, s) * zd.selberg_zeta_trunc(SPEC, s + n) * zd.z_ell(MODULAR, n, s)
             * zd.z_par(MODULAR, n, s, 2))
    assert abs(total / cmath.exp(cst.B * u * u + cst.D) - parts) < 1e-12 * abs(parts)
    assert abs(total - cmath.exp(zd.log_det_resolvent(MODULAR, n, s, SPEC, 2))) < 1e-15 * abs(total)


def test_c2_compact_closed_form():
    # [(2pi)^3 G2(4)^2 G(4)^3]^{|X|/4pi} 3^{-d_2} e^{B (3/2)^2 + D}, with |X|/4pi = 1 and G2(4) = 1/2
    d2 = dim_holomorphic(COMPACT, 2)
    want = (2 * math.pi) ** 3 * 0.25 * 6 ** 3 * 3.0 ** -d2 * math.exp(-2 * 2.25 + 4 * ZETA_PRIME_MINUS_ONE)
    assert abs(zd.c_constant(COMPACT, 2) - want) < 1e-12 * want
    via_limits = math.exp(zd.log_c_constant_from_limits(COMPACT, 2).real)
    assert abs(via_limits - want) < 1e-10 * want


@pytest.mark.parametrize("sig,n,A", [(MODULAR, 1, 2), (MODULAR, 2, 2), (MODULAR, 3, 2), (COMPACT, 1, 0),
                                     (SurfaceSignature(1, 2, (3, 4)), 2, 2)])
def test_c_dual_route(sig, n, A):
    a = zd.log_c_constant(sig, n, A)
    b = zd.log_c_constant_from_limits(sig, n, A)
    assert abs(a - b) < 1e-10


def test_c1_modular_positive():
    c = zd.c_constant(MODULAR, 1, 2)
    assert c > 0 and math.isfinite(c)


@pytest.mark.parametrize("sig,model", [(COMPACT, None), (MODULAR, ModularScattering())])
@pytest.mark.parametrize("n", [2, 3])
def test_det_prime_diagnostic(sig, model, n):
    d = zd.det_prime(sig, n, SPEC, model)
    assert abs(d.diagnostic - 1) < 1e-3


def test_det_prime_compact_empty_spectrum():
    d = zd.det_prime(COMPACT, 3)
    assert d.zeta_factor == 1
    assert d.value == zd.c_constant(COMPACT, 3)


def test_det_prime_n1_uses_derivative():
    h = 1e-6
    fd = (zd.selberg_zeta_trunc(SPEC, 1 + h) - zd.selberg_zeta_trunc(SPEC, 1 - h)).real / (2 * h)
    assert abs(zd.selberg_zeta_deriv(SPEC, 1.0).real - fd) < 1e-8
    d = zd.det_prime(COMPACT, 1, SPEC)
    assert abs(d.zeta_factor - zd.selberg_zeta_deriv(SPEC, 1.0).real) < 1e-15


def test_det_prime_n0_zero_order():
    # Z_0 from the product only when the zero order at s = 0 matches
    with pytest.raises(DomainError):
        zd.det_prime(COMPACT, 0, SPEC)
    d = zd.det_prime(COMPACT, 0, SPEC, z0=2.5)
    assert d.zeta_factor == 2.5


@pytest.mark.parametrize("kind", ["p0", "pm1", "pm_half", "pm_half_log"])
def test_mellin_identities(kind):
    assert abs(zd.mellin_numeric(kind, 2.0) - zd.mellin_closed(kind, 2.0)) < 1e-5


def test_small_s_exponent_matches_dimension():
    for sig in (MODULAR, COMPACT, SurfaceSignature(1, 2, (3, 4))):
        for n in range(1, 7):
            assert zd.small_s_exponent(sig, n) == dim_holomorphic(sig, n) - (n == 1)
