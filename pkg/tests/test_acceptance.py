"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints a single PASS/FAIL line; the lines are repeated in the
pytest terminal summary.  Run as a script for the same lines without pytest.
"""

import cmath
import json
import math
import random
import subprocess
import sys
import time

import pytest

from artifact import cli, kernel, residues, scattering, special_fn, surface, trace_geom, zeta_det
from artifact.surface import SurfaceSignature
from artifact.trace_geom import LengthSpectrum

MODULAR = SurfaceSignature(0, 1, (2, 3))


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _random_spectrum(rng, size):
    return LengthSpectrum(tuple((2.0 + rng.expovariate(0.1), rng.randint(1, 3)) for _ in range(size)))


def test_criterion_01_exact_identities(report):
    t0 = time.perf_counter()
    zero_ok = all(residues.zero_sum(m, n) == (0, 0) for m in range(2, 51) for n in range(21))
    beta_ok = all(residues.beta_closed(m, n) == residues.beta_bruteforce(m, n)
                  for m in range(2, 31) for n in range(11))
    s_err = max(abs(residues.s_sum_closed(m, k) - residues.s_sum_bruteforce(m, k))
                for m in range(2, 21) for k in range(-40, 41))
    elapsed = time.perf_counter() - t0
    ok = zero_ok and beta_ok and s_err < 1e-9 and elapsed < 1.0
    report(1, ok, f"zero-sums={zero_ok} beta exact={beta_ok} max S_k err={s_err:.1e}", elapsed)
    assert ok


def test_criterion_02_dimension_cross_check(report):
    t0 = time.perf_counter()
    mismatches = 0
    orders_pool = (2, 3, 5, 7)
    subsets = [tuple(o for i, o in enumerate(orders_pool) if mask >> i & 1) for mask in range(16)]
    for g in range(6):
        for q in range(4):
            for orders in subsets:
                try:
                    sig = SurfaceSignature(g, q, orders)
                except ValueError:
                    continue
                for n in range(1, 13):
                    mismatches += surface.dim_via_residue(sig, n) != surface.dim_holomorphic(sig, n)
    rng = random.Random(11)
    checked = 0
    d1_bad = 0
    while checked < 200:
        g, q = rng.randint(0, 12), rng.randint(0, 6)
        orders = tuple(rng.randint(2, 15) for _ in range(rng.randint(0, 6)))
        try:
            sig = SurfaceSignature(g, q, orders)
        except ValueError:
            continue
        checked += 1
        d1_bad += surface.dim_holomorphic(sig, 1) != g
    seq = [surface.dim_holomorphic(MODULAR, n) for n in range(2, 7)]
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and d1_bad == 0 and seq == [0, 0, 0, 0, 1] and elapsed < 1.0
    report(2, ok, f"residue mismatches={mismatches} d_1!=g on {d1_bad}/200 modular d_2..d_6={seq}", elapsed)
    assert ok


def test_criterion_03_kernel_transform_chain(report):
    t0 = time.perf_counter()
    q_err = max(_rel(kernel.q_quadrature(lambda x, al=al: (x + 1.0) ** -al, n, v),
                     kernel.q_power_closed(al, n, v))
                for al in (1.5, 2.5) for n in (0, 1, 2) for v in (0.0, 0.5, 2.0))
    inv_err = max(kernel.inversion_check(kernel.KernelParams(n, s, a), x)
                  for n, s, a in ((0, 1.5, 4.0), (2, 2.0, 6.0)) for x in (0.3, 1.0, 3.0))
    f_err = max(kernel.fourier_residual(kernel.KernelParams(n, s, a), r)
                for n, s, a in ((0, 1.5, 4.0), (2, 2.0, 6.0)) for r in (0.0, 0.7, 3.0))
    elapsed = time.perf_counter() - t0
    ok = q_err < 1e-6 and inv_err < 1e-5 and f_err < 1e-8 and elapsed < 30.0
    report(3, ok, f"Q rel err={q_err:.1e} inversion err={inv_err:.1e} Fourier residual={f_err:.1e}", elapsed)
    assert ok


def test_criterion_04_ode_and_small_u(report):
    t0 = time.perf_counter()
    points = [(n, s, u) for n, s in ((0, 1.5), (1, 2.2), (2, 1.7), (3, 0.9 + 0.5j))
              for u in (0.05, 0.3, 1.0, 4.0, 20.0)]
    ode = max(kernel.ode_residual(n, s, u) for n, s, u in points)
    # O(u) remainder: sup of |Psi - expansion|/u within 10x its u = 1e-4 value
    envelope_ok = True
    worst = 0.0
    for n, s in ((0, 1.5), (2, 2.0), (1, 0.7 + 0.3j)):
        p = kernel.KernelParams(n, s, complex(s) + 3)
        ratios = [abs(kernel.psi_ns(p, u) - kernel.psi_small_u_expansion(p, u)) / u
                  for u in (1e-4, 1e-5, 1e-6)]
        worst = max(worst, *ratios)
        envelope_ok &= max(ratios) < 10 * ratios[0]
    elapsed = time.perf_counter() - t0
    ok = len(points) == 20 and ode < 1e-5 and envelope_ok and elapsed < 5.0
    report(4, ok, f"ODE residual={ode:.1e} sup |Psi-exp|/u={worst:.2f} (within 10x of u=1e-4)", elapsed)
    assert ok


def test_criterion_05_elliptic_dual_route(report):
    t0 = time.perf_counter()
    err = 0.0
    for m in (2, 3, 4):
        for n in (0, 1, 2):
            for ell in range(1, m):
                q, _ = trace_geom.elliptic_single_quadrature(m, ell, n, 2.0, 7.0)
                err = max(err, abs(q - trace_geom.elliptic_pair_closed(m, ell, n, 2.0, 7.0)))
    pi_err = max(abs(trace_geom.lemma_pi_integral(t) - math.pi) for t in (1.1, 2.0, 10.0))
    cosh_err = max(abs(trace_geom.lemma_cosh_integral(mu, math.pi * l / m)
                       - trace_geom.lemma_cosh_series(mu, math.pi * l / m, m))
                   for mu in (0.5, 2.5) for m in (3, 4, 5) for l in range(1, m)
                   if abs(math.sin(2 * math.pi * l / m)) > 1e-12)
    elapsed = time.perf_counter() - t0
    ok = err < 1e-6 and pi_err < 1e-8 and cosh_err < 1e-8 and elapsed < 60.0
    report(5, ok, f"closed vs quadrature={err:.1e} pi lemma={pi_err:.1e} cosh lemma={cosh_err:.1e}", elapsed)
    assert ok


def test_criterion_06_parabolic_ip1(report):
    t0 = time.perf_counter()
    a = 8.0
    ip1 = max(_rel(trace_geom.ip1_quadrature(n, s, a),
                   trace_geom.ip1_closed(n, s) - trace_geom.ip1_closed(n, a))
              for n in (0, 1, 2) for s in (1.3, 2.7))
    ip0 = max(abs(trace_geom.ip0_quadrature(n, s, a) - trace_geom.ip0_closed(n, s, a))
              for n in (0, 1, 2) for s in (1.3, 2.7))
    elapsed = time.perf_counter() - t0
    ok = ip1 < 1e-5 and ip0 < 1e-10 and elapsed < 30.0
    report(6, ok, f"I_P1 rel err={ip1:.1e} I_P0 err={ip0:.1e}", elapsed)
    assert ok


def _contour_derivative(f, s, radius=0.05, points=64):
    # trapezoid rule on a circle: spectrally accurate for analytic f
    acc = 0j
    for k in range(points):
        w = cmath.exp(2j * math.pi * k / points)
        acc += f(s + radius * w) / w
    return acc / (points * radius)


def test_criterion_07_zeta_log_derivative(report):
    t0 = time.perf_counter()
    rng = random.Random(7)
    err_h = err_c = 0.0
    for _ in range(20):
        spec = _random_spectrum(rng, rng.randint(1, 50))
        n = rng.randint(0, 3)
        s = complex(rng.uniform(0.8, 3.0), rng.uniform(-2.0, 2.0))
        h = trace_geom.hyperbolic_term(spec, n, s)
        d = zeta_det.selberg_log_deriv(spec, s + n)
        err_h = max(err_h, abs(h - d / (2 * s + 2 * n - 1)))
        c = _contour_derivative(lambda z: zeta_det.selberg_log_zeta(spec, z)[0], s + n)
        err_c = max(err_c, abs(c - d) / max(1.0, abs(d)))
    elapsed = time.perf_counter() - t0
    ok = err_h < 1e-10 and err_c < 1e-10 and elapsed < 5.0
    report(7, ok, f"hyperbolic vs Z'/Z={err_h:.1e} Z'/Z vs contour derivative={err_c:.1e}", elapsed)
    assert ok


def test_criterion_08_asymptotics(report):
    t0 = time.perf_counter()
    u = 1e4
    ell = zinf = zpar = 0.0
    for n in (1, 2, 3):
        s = u - n + 0.5
        b, d = zeta_det.asymptotic_coeffs_ell(MODULAR, n)
        ell = max(ell, abs(zeta_det.log_z_ell(MODULAR, n, s).real - (float(b) * math.log(u) + d)))
        zinf = max(zinf, abs(zeta_det.log_z_infinity(MODULAR, n, s).real
                             - zeta_det.z_infinity_asymptotic(MODULAR, n, u)))
        zpar = max(zpar, abs(zeta_det.log_z_par(MODULAR, n, s, 2).real
                             - zeta_det.z_par_asymptotic(MODULAR, n, u, 2)))
    g2 = [abs(special_fn.log_gamma2(x + 1).real - special_fn.log_gamma2_asymptotic_leading(x))
          for x in (1e2, 1e3, 1e4)]
    monotone = g2[0] > g2[1] > g2[2]
    elapsed = time.perf_counter() - t0
    ok = ell < 1e-3 and zinf < 1e-3 and zpar < 1e-3 and g2[-1] < 1e-4 and monotone and elapsed < 10.0
    report(8, ok, f"Z_ell={ell:.1e} Z_inf={zinf:.1e} Z_par={zpar:.1e} Gamma_2 residuals="
                  + ",".join(f"{x:.1e}" for x in g2), elapsed)
    assert ok


def test_criterion_09_determinant_consistency(report):
    t0 = time.perf_counter()
    rng = random.Random(9)
    model = scattering.ModularScattering()
    diag = 0.0
    for sig, mdl in ((SurfaceSignature(2, 0, ()), None), (MODULAR, model)):
        for n in (2, 3):
            spec = _random_spectrum(rng, 12)
            dp = zeta_det.det_prime(sig, n, spec, mdl)
            diag = max(diag, abs(dp.diagnostic - 1))
    mellin = max(abs(zeta_det.mellin_numeric(k, 2.0) - zeta_det.mellin_closed(k, 2.0))
                 for k in ("p0", "pm1", "pm_half", "pm_half_log"))
    elapsed = time.perf_counter() - t0
    ok = diag < 1e-3 and mellin < 1e-5 and elapsed < 30.0
    report(9, ok, f"max |diagnostic-1|={diag:.1e} Mellin err={mellin:.1e}", elapsed)
    assert ok


def test_criterion_10_scattering_fixture(report):
    t0 = time.perf_counter()
    m = scattering.ModularScattering()
    grid = [complex(x, y) for x in (-0.4, 0.1, 0.3, 0.8, 1.4) for y in (0.0, 0.9, 4.0, -7.5)]
    fe = max(abs(m.phi(s) * m.phi(1 - s) - 1) for s in grid)
    unit = max(abs(abs(m.phi(0.5 + 1j * r)) - 1) for r in (0.1, 0.5, 1.0, 3.0, 10.0, 40.0))
    a_ok = scattering.a_constant(m) == 2
    sc_err = max(abs(scattering.sigma_integral(n, s, m, r0=100.0).value
                     - scattering.sigma_integral(n, s, m, r0=200.0).value)
                 for n, s in ((0, 1.2), (1, 0.7), (2, 0.3 + 0.5j)))
    h = 1e-4
    ms = 0.0
    for r, y in ((1.0, 100.0), (2.0, 50.0)):
        up = scattering.maass_selberg_general(0.5 + h + 1j * r, 0.5 + h + 1j * r, y, m)
        dn = scattering.maass_selberg_general(0.5 - h + 1j * r, 0.5 - h + 1j * r, y, m)
        ms = max(ms, abs((up + dn) / 2 - scattering.maass_selberg_limit(r, y, m)))
    pole = [abs(s * scattering.sigma_integral(2, s, m).value) for s in (1e-2, 1e-3)]
    elapsed = time.perf_counter() - t0
    ok = (len(grid) == 20 and fe < 1e-8 and unit < 1e-8 and a_ok and sc_err < 1e-6 and ms < 1e-5
          and pole[0] > pole[1] and elapsed < 60.0)
    report(10, ok, f"FE={fe:.1e} unitarity={unit:.1e} A=2:{a_ok} Sigma doubling={sc_err:.1e} "
                   f"Maass-Selberg={ms:.1e} |s Sigma|={pole[0]:.1e}>{pole[1]:.1e}", elapsed)
    assert ok


def _round_trip_tables():
    sig = SurfaceSignature(0, 1, (2, 3))
    spec_cfg = cli.RunConfig(surface=sig, scattering="modular", n=1, s_grid=[1.5, 2.25])
    yield cli.cmd_dims(cli.RunConfig(surface=sig, n=6))[0]
    yield cli.cmd_area(spec_cfg)
    yield cli.cmd_constants(spec_cfg)
    for kind in ("trace", "det", "zeta"):
        yield cli.grid_table(kind, spec_cfg)


def test_criterion_11_cli_contract(report):
    t0 = time.perf_counter()
    run = [sys.executable, "-m", "artifact.cli"]
    good = subprocess.run(run + ["verify", "residues"], capture_output=True, text=True)
    rep = json.loads(good.stdout)
    schema_ok = {"suite", "cases", "passed", "failed", "max_residual"} <= rep.keys() and rep["failed"] == 0
    bad = subprocess.run(run + ["verify", "no_such_suite"], capture_output=True, text=True)
    listing_ok = bad.returncode == 2 and "residues" in bad.stderr
    appx = json.loads(subprocess.run(run + ["verify", "appendixA"], capture_output=True, text=True).stdout)
    inv_ok = any("inversion_check" in d["name"] for d in appx["details"])
    trips = list(_round_trip_tables())
    rt_ok = all(cli.from_csv(cli.to_csv(t)) == t and cli.from_json(cli.to_json(t)) == t for t in trips)
    elapsed = time.perf_counter() - t0
    ok = good.returncode == 0 and schema_ok and listing_ok and inv_ok and rt_ok and elapsed < 10.0
    report(11, ok, f"verify exit={good.returncode} unknown-suite exit={bad.returncode} "
                   f"schema={schema_ok} round-trip on {len(trips)} tables={rt_ok}", elapsed)
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
