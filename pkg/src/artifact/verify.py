"""Invariant suites run by ``artifact verify``.

Each suite returns a list of Case records; a case passes when its residual
is at most its tolerance.  Suites are sized to finish in seconds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable

from . import kernel, residues, scattering, special_fn, surface, trace_geom, zeta_det
from .surface import SurfaceSignature


@dataclass(frozen=True)
class Case:
    name: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return math.isfinite(self.residual) and self.residual <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def suite_residues() -> list[Case]:
    out = []
    worst = 0
    for m in range(2, 51):
        for n in range(21):
            a, b = residues.zero_sum(m, n)
            worst = max(worst, abs(a), abs(b))
    out.append(Case("zero_sums m<=50 n<=20", float(worst), 0.0))
    bad = sum(residues.beta_closed(m, n) != residues.beta_bruteforce(m, n)
              for m in range(2, 31) for n in range(11))
    out.append(Case("beta closed == bruteforce", float(bad), 0.0))
    err = max(abs(residues.s_sum_closed(m, k) - residues.s_sum_bruteforce(m, k))
              for m in range(2, 21) for k in range(-40, 41))
    out.append(Case("S_k closed vs roots of unity", err, 1e-9))
    anti = max(abs(residues.s_sum_closed(m, -k) + residues.s_sum_closed(m, k - 1))
               for m in range(2, 21) for k in range(-40, 41))
    out.append(Case("S antisymmetry", float(anti), 0.0))
    return out


def suite_surface() -> list[Case]:
    bad = 0
    for g in range(4):
        for q in range(3):
            for orders in ((), (2,), (3,), (2, 3), (2, 2, 5), (7,)):
                try:
                    sig = SurfaceSignature(g, q, orders)
                except Exception:
                    continue
                for n in range(1, 9):
                    if surface.dim_via_residue(sig, n) != surface.dim_holomorphic(sig, n):
                        bad += 1
    modular = SurfaceSignature(0, 1, (2, 3))
    seq = [surface.dim_holomorphic(modular, n) for n in range(2, 7)]
    return [Case("dim_via_residue == dim_holomorphic", float(bad), 0.0),
            Case("modular d_2..d_6", float(seq != [0, 0, 0, 0, 1]), 0.0)]


def suite_special_fn() -> list[Case]:
    out = []
    z = 2.3 + 1.1j
    out.append(Case("digamma recurrence",
                    abs(special_fn.digamma(z + 1) - special_fn.digamma(z) - 1 / z), 1e-13))
    out.append(Case("log_gamma2 recurrence",
                    abs(special_fn.log_gamma2(z + 1) - special_fn.log_gamma2(z)
                        + special_fn.log_gamma(z)), 1e-11))
    out.append(Case("zeta(2)", abs(special_fn.riemann_zeta(2) - math.pi ** 2 / 6), 1e-14))
    out.append(Case("zeta'(-1) constant", abs(special_fn.riemann_zeta_deriv(-1)
                                               - special_fn.ZETA_PRIME_MINUS_ONE), 1e-10))
    out.append(Case("4F3 direct vs Whipple",
                    _rel(special_fn.hyp4f3_balanced(2, 0.3, 3), special_fn.hyp4f3_whipple_form(2, 0.3, 3)),
                    1e-12))
    return out


def suite_appendix_a() -> list[Case]:
    out = []
    worst = 0.0
    for al in (1.5, 2.5):
        for n in (0, 1, 2):
            for v in (0.0, 0.5, 2.0):
                q = kernel.q_quadrature(lambda x: (x + 1.0) ** -al, n, v)
                worst = max(worst, _rel(q, kernel.q_power_closed(al, n, v)))
    out.append(Case("power kernel Q closed vs quadrature", worst, 1e-6))
    for n, s, a in ((0, 1.5, 4.0), (2, 2.0, 6.0)):
        p = kernel.KernelParams(n, s, a)
        err = max(kernel.inversion_check(p, x) for x in (0.3, 1.0, 3.0))
        out.append(Case(f"inversion_check n={n} s={s} a={a}", err, 1e-5))
    p = kernel.KernelParams(1, 1.5, 4.0)
    out.append(Case("Fourier pair residual",
                    max(kernel.fourier_residual(p, r) for r in (0.0, 0.7, 3.0)), 1e-8))
    out.append(Case("resolvent ODE residual",
                    max(kernel.ode_residual(n, 1.7, u) for n in (0, 2) for u in (0.2, 1.0, 4.0)),
                    1e-5))
    return out


def suite_scattering() -> list[Case]:
    m = scattering.ModularScattering()
    out = []
    fe = max(abs(m.phi(s) * m.phi(1 - s) - 1) for s in (0.3, 0.7 + 0.4j, 1.2 - 2j, -0.3 + 3j))
    out.append(Case("phi(s) phi(1-s) = 1", fe, 1e-8))
    un = max(abs(abs(m.phi(0.5 + 1j * r)) - 1) for r in (0.3, 1.0, 5.0, 20.0))
    out.append(Case("|phi(1/2+ir)| = 1", un, 1e-8))
    out.append(Case("A = 2", float(scattering.a_constant(m) != 2), 0.0))
    sig = scattering.sigma_integral(1, 0.7, m).value
    out.append(Case("Sigma vs contour closed form",
                    abs(sig - scattering.sigma_modular_closed(1, 0.7)), 1e-8))
    return out


def suite_trace_geom() -> list[Case]:
    out = []
    worst = 0.0
    for m in (2, 3):
        for n in (0, 1):
            for ell in range(1, m):
                q, _ = trace_geom.elliptic_single_quadrature(m, ell, n, 2.0, 7.0)
                worst = max(worst, abs(q - trace_geom.elliptic_pair_closed(m, ell, n, 2.0, 7.0)))
    out.append(Case("elliptic closed vs quadrature", worst, 1e-6))
    out.append(Case("pi lemma", abs(trace_geom.lemma_pi_integral(2.0) - math.pi), 1e-8))
    out.append(Case("cosh series lemma",
                    abs(trace_geom.lemma_cosh_integral(2.5, math.pi / 3)
                        - trace_geom.lemma_cosh_series(2.5, math.pi / 3, 3)), 1e-8))
    c = trace_geom.ip1_closed(1, 1.3) - trace_geom.ip1_closed(1, 8.0)
    out.append(Case("I_P1 closed vs quadrature", _rel(trace_geom.ip1_quadrature(1, 1.3, 8.0), c), 1e-5))
    out.append(Case("I_P0", abs(trace_geom.ip0_quadrature(1, 1.3, 8.0)
                                - trace_geom.ip0_closed(1, 1.3, 8.0)), 1e-10))
    spec = trace_geom.LengthSpectrum(((2.5, 1), (4.0, 2), (11.0, 1)))
    h = trace_geom.hyperbolic_term(spec, 1, 1.6)
    z = zeta_det.selberg_log_deriv(spec, 2.6) / (2 * 1.6 + 1)
    out.append(Case("hyperbolic vs log-derivative of Z", abs(h - z), 1e-10))
    return out


def suite_zeta_det() -> list[Case]:
    out = []
    for kind in ("p0", "pm1", "pm_half", "pm_half_log"):
        out.append(Case(f"Mellin {kind}",
                        abs(zeta_det.mellin_numeric(kind, 2.0) - zeta_det.mellin_closed(kind, 2.0)), 1e-5))
    spec = trace_geom.LengthSpectrum(((3.0, 1), (5.5, 2)))
    m = scattering.ModularScattering()
    for sig, model in ((SurfaceSignature(2, 0, ()), None), (SurfaceSignature(0, 1, (2, 3)), m)):
        a = 2 if model else 0
        c1 = zeta_det.c_constant(sig, 2, a)
        c2 = math.exp(zeta_det.log_c_constant_from_limits(sig, 2, a).real)
        out.append(Case(f"C_2 dual route {sig.to_dict()}", _rel(c1, c2), 1e-10))
        d = zeta_det.det_prime(sig, 2, spec, model)
        out.append(Case(f"det' limit diagnostic {sig.to_dict()}", abs(d.diagnostic - 1), 1e-3))
    sig = SurfaceSignature(0, 1, (2, 3))
    u = 1e4
    for n in (1, 2):
        b, dd = zeta_det.asymptotic_coeffs_ell(sig, n)
        val = zeta_det.log_z_ell(sig, n, u - n + 0.5).real
        out.append(Case(f"log Z_ell asymptotic n={n}", abs(val - (float(b) * math.log(u) + dd)), 1e-3))
    return out


SUITES: dict[str, Callable[[], list[Case]]] = {
    "residues": suite_residues,
    "surface": suite_surface,
    "special_fn": suite_special_fn,
    "appendixA": suite_appendix_a,
    "scattering": suite_scattering,
    "trace_geom": suite_trace_geom,
    "zeta_det": suite_zeta_det,
}


def run_suite(name: str | None = None) -> dict:
    """JSON-ready report {suite, cases, passed, failed, max_residual, details}."""
    names = list(SUITES) if name is None else [name]
    details = []
    for nm in names:
        try:
            cases = SUITES[nm]()
        except Exception as exc:  # a crashing suite counts as one failed case
            cases = [Case(f"{nm}: raised {type(exc).__name__}: {exc}", math.inf, 0.0)]
        details.extend({"suite": nm, **c.to_dict()} for c in cases)
    passed = sum(d["passed"] for d in details)
    finite = [d["residual"] for d in details if math.isfinite(d["residual"])]
    return {
        "suite": name or "all",
        "cases": len(details),
        "passed": passed,
        "failed": len(details) - passed,
        "max_residual": max(finite) if finite else None,
        "details": [{**d, "residual": d["residual"] if math.isfinite(d["residual"]) else None}
                    for d in details],
    }
