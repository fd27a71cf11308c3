"""Geometric side of the resolvent trace formula.

Every term is exposed in single-parameter form E(s); the trace-formula
quantity is E(s) - E(a).  Each closed form has a second route (quadrature or
an independently summed series) used by the tests.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from scipy.special import zeta as hurwitz_zeta

from .errors import ConvergenceError, DomainError, ModelError, PoleError
from .kernel import KernelParams, _expm1, psi_pair
from .quadrature import integrate
from .residues import alpha
from .scattering import NoScattering, ScatteringModel, a_constant, sigma_integral
from .special_fn import EULER_GAMMA, digamma
from .surface import SurfaceSignature

LOG2 = math.log(2.0)
FOUR_PI = 4.0 * math.pi


# ------------------------------------------------------------------ types


@dataclass(frozen=True)
class LengthSpectrum:
    """Primitive hyperbolic classes as (norm N > 1, multiplicity)."""

    entries: tuple = ()

    def __post_init__(self) -> None:
        clean = []
        for norm, mult in self.entries:
            norm = float(norm)
            if int(mult) != mult or mult < 1:
                raise DomainError("multiplicities must be positive integers")
            if not norm > 1.0 or not math.isfinite(norm):
                raise DomainError(f"norm {norm} must be a finite number > 1")
            clean.append((norm, int(mult)))
        clean.sort()
        object.__setattr__(self, "entries", tuple(clean))

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> dict:
        return {"entries": [{"norm": nm, "multiplicity": k} for nm, k in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "LengthSpectrum":
        try:
            return cls(tuple((e["norm"], e["multiplicity"]) for e in d["entries"]))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed spectrum: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "LengthSpectrum":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class TraceBreakdown:
    identity: complex
    hyperbolic: complex
    elliptic: complex
    parabolic: complex
    total: complex
    truncation_error: float
    partial: bool = False

    def to_dict(self) -> dict:
        out = {}
        for key in ("identity", "hyperbolic", "elliptic", "parabolic", "total"):
            v = complex(getattr(self, key))
            out[key] = {"re": v.real, "im": v.imag}
        out["truncation_error"] = self.truncation_error
        out["partial"] = self.partial
        return out


def _two_mu(n: int, s: complex) -> complex:
    d = 2 * s + 2 * n - 1
    if abs(d) < 1e-14:
        raise PoleError("2s+2n-1 = 0")
    return d


# --------------------------------------------------------------- identity


def identity_term(sig: SurfaceSignature, n: int, s) -> complex:
    s = complex(s)
    return -(sig.area / FOUR_PI) * (digamma(s + 2 * n) + digamma(s))


# ------------------------------------------------------------- hyperbolic


def hyperbolic_term_with_bound(spec: LengthSpectrum, n: int, s, kmax: int = 64,
                               tail_tol: float = 1e-8) -> tuple[complex, float]:
    """E_H(s) truncated at k < kmax, and a bound on the discarded tail."""
    s = complex(s)
    if kmax < 1:
        raise DomainError("kmax must be >= 1")
    if not spec.entries:
        return 0j, 0.0
    w = s + n
    if w.real <= 0:
        raise DomainError("hyperbolic sum needs Re(s+n) > 0")
    if spec.entries[0][0] <= 1.0 + 1e-12:
        raise ConvergenceError("smallest norm too close to 1")
    pref = 1.0 / _two_mu(n, s)
    total = 0j
    bound = 0.0
    for norm, mult in spec.entries:
        ln = math.log(norm)
        acc = 0j
        for k in range(kmax):
            acc += ln / _expm1((w + k) * ln)
        # |N^{w+k} - 1| >= N^{Re w + k} - 1, summed geometrically from k = kmax
        lead = norm ** -(w.real + kmax)
        bound += mult * ln * lead / ((1.0 - lead) * (1.0 - 1.0 / norm))
        total += mult * acc
    bound *= abs(pref)
    val = pref * total
    if bound > tail_tol * max(1.0, abs(val)):
        raise ConvergenceError(f"hyperbolic tail bound {bound:.3g} exceeds tolerance; raise kmax")
    return val, bound


def hyperbolic_term(spec: LengthSpectrum, n: int, s, kmax: int = 64) -> complex:
    return hyperbolic_term_with_bound(spec, n, s, kmax)[0]


# --------------------------------------------------------------- elliptic


def elliptic_coefficients(m: int, n: int) -> tuple[list[float], list[float]]:
    """Coefficient families multiplying psi((s+r)/m) and psi((s+2n+r)/m)."""
    lo = [(2 * alpha(m, r - n) + 1 - m) / (2 * m * m) for r in range(m)]
    hi = [(2 * alpha(m, r + n) + 1 - m) / (2 * m * m) for r in range(m)]
    return lo, hi


def elliptic_term(sig: SurfaceSignature, n: int, s) -> complex:
    s = complex(s)
    if not sig.elliptic_orders:
        return 0j
    acc = 0j
    for m in sig.elliptic_orders:
        lo, hi = elliptic_coefficients(m, n)
        for r in range(m):
            if lo[r]:
                acc += lo[r] * digamma((s + r) / m)
            if hi[r]:
                acc += hi[r] * digamma((s + 2 * n + r) / m)
    return acc / _two_mu(n, s)


def periodic_harmonic_sum(coeffs: Sequence[complex], shift, *, blocks: int = 200,
                          orders: int = 40) -> complex:
    """sum_{k>=0} c_{k mod m} / (shift + k) for a zero-mean period c.

    Whole periods are summed directly for q < Q; the remaining blocks are
    expanded in 1/q and resummed with Hurwitz zeta values.
    """
    c = [complex(x) for x in coeffs]
    m = len(c)
    shift = complex(shift)
    if abs(sum(c)) > 1e-12 * max(1.0, sum(abs(x) for x in c)):
        raise DomainError("coefficients must have zero mean; the series diverges otherwise")
    b = [(shift + r) / m for r in range(m)]
    bmax = max(abs(x) for x in b)
    q_start = max(blocks, int(math.ceil(20 * bmax)) + 1)
    for r in range(m):
        if c[r] != 0 and shift + r == 0:
            raise PoleError("shift + k = 0 for a nonzero coefficient")
    head = 0j
    for q in range(q_start):
        base = m * q + shift
        head += sum(c[r] / (base + r) for r in range(m) if c[r] != 0)
    # 1/(q+b) = sum_j (-b)^{j-1} q^{-j}; the j = 1 row vanishes by zero mean
    tail = 0j
    for j in range(2, orders + 1):
        coef = sum(c[r] * (-b[r]) ** (j - 1) for r in range(m))
        term = coef * float(hurwitz_zeta(j, q_start))
        tail += term
        if abs(term) < 1e-18 * max(1e-300, abs(head)):
            break
    return head + tail / m


def elliptic_single_closed(m: int, ell: int, n: int, s) -> complex:
    """Single-parameter closed form of I_E(pi ell / m) via periodic series."""
    if m < 2 or not 1 <= ell <= m - 1:
        raise DomainError("need m >= 2 and 1 <= ell <= m-1")
    s = complex(s)
    # the rotation enters with angle -pi ell/m relative to the printed form;
    # the sum over ell is unchanged because ell and m - ell are swapped
    th = -math.pi * ell / m
    down = [cmath.exp(-1j * (2 * k + 1) * th) for k in range(m)]
    up = [cmath.exp(1j * (2 * k + 1) * th) for k in range(m)]
    bracket = periodic_harmonic_sum(down, s) - periodic_harmonic_sum(up, s + 2 * n)
    pref = 1j * cmath.exp(2j * n * th) / (2 * m * math.sin(th))
    return pref * bracket / _two_mu(n, s)


def _psi_pair_safe(p: KernelParams, u: float) -> complex:
    if u < 1e-14:
        n = p.n
        return -(digamma(p.s + 2 * n) + digamma(p.s) - digamma(p.a + 2 * n) - digamma(p.a)) / FOUR_PI
    return psi_pair(p, u)


def elliptic_single_quadrature(m: int, ell: int, n: int, s, a) -> tuple[complex, float]:
    """I_E(pi ell/m) for the kernel pair by adaptive quadrature; returns (value, error)."""
    if m < 2 or not 1 <= ell <= m - 1:
        raise DomainError("need m >= 2 and 1 <= ell <= m-1")
    p = KernelParams(n, s, a)
    th = math.pi * ell / m
    sn2, cs = math.sin(th) ** 2, math.cos(th)

    def f(u: float) -> complex:
        root = math.sqrt(u + sn2)
        return _psi_pair_safe(p, u) * complex(root, -cs) ** (-2 * n) / root

    val, err = integrate(f, 0.0, math.inf, epsabs=1e-13, epsrel=1e-11, fail_tol=1e-8)
    pref = (-1) ** n * math.pi / (m * math.sin(th))
    return pref * val, abs(pref) * err


def elliptic_pair_closed(m: int, ell: int, n: int, s, a) -> complex:
    return elliptic_single_closed(m, ell, n, s) - elliptic_single_closed(m, ell, n, a)


# ------------------------------------------------------------ lemma checks


def lemma_pi_integral(t: float) -> float:
    """int over (t - sqrt(t^2-1), t + sqrt(t^2-1)) of dy / (y sqrt(2yt - 1 - y^2)); equals pi."""
    if t <= 1:
        raise DomainError("t must exceed 1")
    d = math.sqrt(t * t - 1.0)
    lo, hi = t - d, t + d
    # 2yt - 1 - y^2 = (y - lo)(hi - y); the inverse square roots go into the weight
    val, _ = integrate(lambda y: 1.0 / y, lo, hi, weight="alg", wvar=(-0.5, -0.5),
                       fail_tol=1e-10, real=True)
    return val.real


def lemma_cosh_integral(mu: float, theta: float) -> float:
    """int_0^inf e^{-mu t} / (cosh t - cos 2 theta) dt by quadrature."""
    c2 = math.cos(2 * theta)
    # 1/(cosh t - c) = 2e^{-t}/(1 - 2c e^{-t} + e^{-2t}), safe for large t
    def f(t: float) -> float:
        x = math.exp(-t)
        return 2.0 * math.exp(-(mu + 1.0) * t) / (1.0 - 2.0 * c2 * x + x * x)

    val, _ = integrate(f, 0.0, math.inf,
                       fail_tol=1e-10, real=True)
    return val.real


def lemma_cosh_series(mu: float, theta: float, period: int) -> float:
    """(2/sin 2theta) sum_{k>=1} sin(2k theta)/(mu+k), theta a rational multiple of pi.

    ``period`` is the period of k -> sin(2k theta).
    """
    coeffs = [math.sin(2 * (k + 1) * theta) for k in range(period)]
    val = periodic_harmonic_sum(coeffs, mu + 1.0)
    return (2.0 / math.sin(2 * theta) * val).real


# -------------------------------------------------------------- parabolic


def parabolic_bracket(n: int, s) -> complex:
    """psi(s) + psi(s+2n) - 2 log 2 - 2 psi(s+n+1/2) - 2 psi(s+n)."""
    s = complex(s)
    return (digamma(s) + digamma(s + 2 * n) - 2 * LOG2
            - 2 * digamma(s + n + 0.5) - 2 * digamma(s + n))


def _check_model(sig: SurfaceSignature, model: ScatteringModel | None, skip: bool) -> None:
    if sig.cusps == 0:
        if model is not None and not isinstance(model, NoScattering) and model.q != 0:
            raise ModelError("scattering model supplied for a surface without cusps")
        return
    if model is None or isinstance(model, NoScattering):
        if not skip:
            raise ModelError("surface has cusps: supply a scattering model or skip it explicitly")
        return
    if model.q != sig.cusps:
        raise ModelError(f"model has q = {model.q} but the signature has {sig.cusps} cusps")


def parabolic_term(sig: SurfaceSignature, n: int, s, model: ScatteringModel | None = None, *,
                   skip_scattering: bool = False) -> complex:
    """E_P(s).  With skip_scattering the Sigma and A pieces are dropped (partial result)."""
    s = complex(s)
    _check_model(sig, model, skip_scattering)
    q = sig.cusps
    if q == 0:
        return 0j
    d = _two_mu(n, s)
    val = q / (2 * d) * parabolic_bracket(n, s)
    if model is None or isinstance(model, NoScattering):
        return val
    val += a_constant(model) / (d * d)
    val += sigma_integral(n, s, model).value / 2
    return val


def ip1_closed(n: int, s) -> complex:
    """Single-parameter closed form of I_{P,1}."""
    s = complex(s)
    d = _two_mu(n, s)
    br = (digamma(s) + digamma(s + 2 * n) - 4 * LOG2
          - 2 * digamma(s + n + 0.5) - 2 * digamma(s + n))
    return br / (2 * d) - EULER_GAMMA / d + 1.0 / (d * d)


def _ip_quadrature(n: int, s, a, with_log: bool) -> complex:
    p = KernelParams(n, s, a)

    def f(u: float) -> complex:
        w = complex(u, 1.0) ** (2 * n)
        val = _psi_pair_safe(p, u * u) * 2.0 * w.real / (u * u + 1.0) ** (2 * n)
        return val * math.log(u) if with_log else val

    val, _ = integrate(f, 0.0, math.inf, epsabs=1e-13, epsrel=1e-11, fail_tol=1e-9)
    return 2 * (-1) ** n * val


def ip1_quadrature(n: int, s, a) -> complex:
    """2(-1)^n int_0^inf Psi(u^2)[(u+i)^{-2n} + (u-i)^{-2n}] log u du for the kernel pair."""
    return _ip_quadrature(n, s, a, True)


def ip0_quadrature(n: int, s, a) -> complex:
    return _ip_quadrature(n, s, a, False)


def ip0_closed(n: int, s, a) -> complex:
    return 1.0 / _two_mu(n, complex(s)) - 1.0 / _two_mu(n, complex(a))


# -------------------------------------------------------------- assembly


def geometric_trace(sig: SurfaceSignature, n: int, s, spec: LengthSpectrum | None = None,
                    model: ScatteringModel | None = None, kmax: int = 64, *,
                    skip_scattering: bool = False) -> TraceBreakdown:
    s = complex(s)
    spec = spec if spec is not None else LengthSpectrum()
    ident = identity_term(sig, n, s)
    hyp, trunc = hyperbolic_term_with_bound(spec, n, s, kmax)
    ell = elliptic_term(sig, n, s)
    par = parabolic_term(sig, n, s, model, skip_scattering=skip_scattering)
    partial = sig.cusps > 0 and (model is None or isinstance(model, NoScattering))
    return TraceBreakdown(ident, hyp, ell, par, ident + hyp + ell + par, trunc, partial)


def geometric_trace_difference(sig: SurfaceSignature, n: int, s, a, spec=None, model=None,
                               kmax: int = 64) -> complex:
    """T_G(s) - T_G(a)."""
    return (geometric_trace(sig, n, s, spec, model, kmax).total
            - geometric_trace(sig, n, a, spec, model, kmax).total)
