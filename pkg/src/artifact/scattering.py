"""Scattering-determinant models and the integrals built on them.

A model supplies phi(s) = det Phi(s), its logarithmic derivative on the line
Re s = 1/2, Tr Phi(1/2) and, optionally, an analytic tail for the Sigma
integral.  Three variants exist: no cusps, the modular-group fixture
phi(s) = sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)), and a
sampled table of phi'/phi(1/2+ir).

The modular fixture is an external test object; the trace formulas accept
any model.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DomainError, ModelError, PoleError
from .quadrature import integrate
from .special_fn import (
    POLE_TOL,
    digamma,
    log_gamma,
    riemann_zeta,
    zeta_log_deriv,
    zeta_pole_removed,
)

LOG_PI = math.log(math.pi)
SQRT_PI = math.sqrt(math.pi)


class ScatteringModel:
    """Interface shared by all variants; subclasses define ``q`` and ``name``."""

    def phi(self, s) -> complex:
        raise ModelError(f"{self.name} model does not supply phi(s)")

    def phi_log_deriv_line(self, r: float) -> float:
        """phi'/phi(1/2 + ir), real for a unitary scattering matrix."""
        raise ModelError(f"{self.name} model does not supply phi'/phi")

    def trace_phi_half(self) -> float:
        raise ModelError(f"{self.name} model does not supply Tr Phi(1/2)")

    def tail_integral(self, big_r: float, u: complex) -> tuple[complex, float]:
        """int_{|r|>R} phi'/phi(1/2+ir) / (r^2+u^2) dr with an error estimate."""
        raise ModelError(f"{self.name} model has no tail information")


@dataclass(frozen=True)
class NoScattering(ScatteringModel):
    """Compact case: no cusps, Sigma vanishes."""

    q: int = 0
    name: str = "none"

    def trace_phi_half(self) -> float:
        return 0.0


@dataclass(frozen=True)
class ModularScattering(ScatteringModel):
    """phi for PSL(2,Z), one cusp."""

    q: int = 1
    name: str = "modular"

    def phi(self, s) -> complex:
        return phi_modular(s)

    def phi_log_deriv(self, s) -> complex:
        return phi_modular_log_deriv(s)

    def phi_log_deriv_line(self, r: float) -> float:
        # functional-equation form: 2 log pi - 2 Re psi(1/2+ir) - 4 Re zeta'/zeta(1+2ir)
        f, df = zeta_pole_removed(1.0 + 2j * r)
        # the pole part -1/(2ir) is purely imaginary and drops from the real part
        reg = df / f
        return 2 * LOG_PI - 2 * digamma(0.5 + 1j * r).real - 4 * reg.real

    def trace_phi_half(self) -> float:
        return -1.0

    def _lower_rep(self, r: complex) -> complex:
        # analytic in Im r < 0, real part equals phi'/phi on the real axis
        w = 1.0 + 2j * r
        return 2 * LOG_PI - 2 * digamma(0.5 + 1j * r) - 4 * zeta_log_deriv(w)

    def tail_integral(self, big_r: float, u: complex) -> tuple[complex, float]:
        # rotate [R, inf) onto R - i[0, inf) for the lower representative and onto
        # R + i[0, inf) for its reflection; both tails (r > R and r < -R) agree
        u2 = complex(u) * complex(u)

        def lower(y: float) -> complex:
            r = complex(big_r, -y)
            return self._lower_rep(r) / (r * r + u2) * (-1j)

        def upper(y: float) -> complex:
            r = complex(big_r, y)
            rep = self._lower_rep(r.conjugate()).conjugate()
            return rep / (r * r + u2) * 1j

        v1, e1 = integrate(lower, 0.0, math.inf, epsabs=1e-13, epsrel=1e-11, fail_tol=1e-9)
        v2, e2 = integrate(upper, 0.0, math.inf, epsabs=1e-13, epsrel=1e-11, fail_tol=1e-9)
        return v1 + v2, e1 + e2


@dataclass(frozen=True)
class SampledScattering(ScatteringModel):
    """Table of phi'/phi(1/2+ir) on [-R_t, R_t] with an algebraic tail.

    Between nodes the value is the local cubic through the four nearest
    samples; beyond the table it is the end value times (|r|/R_t)^tail_exponent.
    """

    q: int
    r: tuple[float, ...]
    values: tuple[complex, ...]
    trace_phi_half_value: float | None = None
    tail_exponent: float = -1.0
    phi_constant: float | None = None
    name: str = field(default="sampled")

    def __post_init__(self) -> None:
        r = tuple(float(x) for x in self.r)
        if len(r) < 4:
            raise ModelError("sampled model needs at least four samples")
        if len(r) != len(self.values):
            raise ModelError("sample arrays differ in length")
        if any(b <= a for a, b in zip(r, r[1:])):
            raise ModelError("samples must be sorted by r without repeats")
        if abs(r[0] + r[-1]) > 1e-9 * max(1.0, abs(r[-1])):
            raise ModelError("samples must cover a symmetric interval [-R, R]")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))
        object.__setattr__(self, "_r_arr", np.asarray(r))

    def phi(self, s) -> complex:
        if self.phi_constant is None:
            raise ModelError("sampled model has no phi values")
        return complex(self.phi_constant)

    def trace_phi_half(self) -> float:
        if self.trace_phi_half_value is None:
            raise ModelError("sampled model lacks trace_phi_half")
        return float(self.trace_phi_half_value)

    @property
    def extent(self) -> float:
        return self.r[-1]

    def value(self, x: float) -> complex:
        rr = self.r
        if x >= rr[-1]:
            return self.values[-1] * (x / rr[-1]) ** self.tail_exponent
        if x <= rr[0]:
            return self.values[0] * (x / rr[0]) ** self.tail_exponent
        i = int(np.searchsorted(self._r_arr, x)) - 1
        lo = min(max(i - 1, 0), len(rr) - 4)
        xs = rr[lo:lo + 4]
        ys = self.values[lo:lo + 4]
        out = 0j
        for j in range(4):
            w = 1.0
            for k in range(4):
                if k != j:
                    w *= (x - xs[k]) / (xs[j] - xs[k])
            out += w * ys[j]
        return out

    def phi_log_deriv_line(self, r: float) -> complex:
        return self.value(r)

    def _values(self, x: np.ndarray) -> np.ndarray:
        # vectorised form of value() for points strictly inside the table
        r = self._r_arr
        ys = np.asarray(self.values)
        i = np.searchsorted(r, x) - 1
        lo = np.clip(i - 1, 0, len(r) - 4)
        idx = lo[:, None] + np.arange(4)[None, :]
        xs = r[idx]
        out = np.zeros(x.shape, dtype=complex)
        for j in range(4):
            w = np.ones(x.shape)
            for k in range(4):
                if k != j:
                    w *= (x - xs[:, k]) / (xs[:, j] - xs[:, k])
            out += w * ys[idx[:, j]]
        return out

    def window_integral(self, lo: float, hi: float, u2: complex) -> tuple[complex, float]:
        """int_lo^hi phi'/phi / (r^2 + u2) dr inside the table.

        The interpolant is a fixed cubic on each node interval, so the
        integral is taken interval by interval with 8-point Gauss-Legendre.
        """
        if lo < self.r[0] or hi > self.r[-1]:
            raise ModelError("window extends beyond the sampled table")
        inner = self._r_arr[(self._r_arr > lo) & (self._r_arr < hi)]
        edges = np.concatenate(([lo], inner, [hi]))
        a, b = edges[:-1], edges[1:]
        half, mid = (b - a) / 2, (b + a) / 2
        x = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
        f = self._values(x) / (x * x + u2)
        val = complex(np.sum(f.reshape(len(a), -1) * _GL_W[None, :] * half[:, None]))
        return val, 1e-15 * (abs(val) + 1)

    def tail_integral(self, big_r: float, u: complex) -> tuple[complex, float]:
        if big_r < self.extent:
            raise ModelError("tail requested inside the sampled table")
        u2 = complex(u) ** 2
        v_hi, e_hi = integrate(lambda x: self.value(x) / (x * x + u2), big_r, math.inf,
                               fail_tol=1e-9)
        v_lo, e_lo = integrate(lambda x: self.value(-x) / (x * x + u2), big_r, math.inf,
                               fail_tol=1e-9)
        return v_hi + v_lo, e_hi + e_lo

    def to_dict(self) -> dict:
        d = {
            "q": self.q,
            "trace_phi_half": self.trace_phi_half_value,
            "samples": [{"r": x, "re": v.real, "im": v.imag} for x, v in zip(self.r, self.values)],
            "tail_exponent": self.tail_exponent,
        }
        if self.phi_constant is not None:
            d["phi_constant"] = self.phi_constant
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SampledScattering":
        try:
            samples = sorted(d["samples"], key=lambda e: float(e["r"]))
            return cls(
                q=int(d["q"]),
                r=tuple(float(e["r"]) for e in samples),
                values=tuple(complex(float(e["re"]), float(e.get("im", 0.0))) for e in samples),
                trace_phi_half_value=None if d.get("trace_phi_half") is None else float(d["trace_phi_half"]),
                tail_exponent=float(d.get("tail_exponent", -1.0)),
                phi_constant=None if d.get("phi_constant") is None else float(d["phi_constant"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed sampled model: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SampledScattering":
        return cls.from_dict(json.loads(text))


def sample_model(model: ScatteringModel, extent: float, step: float, trace_phi_half=None,
                 tail_exponent: float = -1.0) -> SampledScattering:
    """Tabulate another model's phi'/phi on a uniform symmetric grid."""
    count = int(round(extent / step))
    rs = [k * step for k in range(-count, count + 1)]
    vals = [complex(model.phi_log_deriv_line(x)) for x in rs]
    return SampledScattering(q=model.q, r=tuple(rs), values=tuple(vals),
                             trace_phi_half_value=trace_phi_half, tail_exponent=tail_exponent)


# ------------------------------------------------------------ modular phi


def phi_modular(s) -> complex:
    """sqrt(pi) Gamma(s-1/2) zeta(2s-1) / (Gamma(s) zeta(2s)).

    Written as 2 sqrt(pi) Gamma(s+1/2) zeta(2s-1) / (Gamma(s) F(2s)) with
    F(w) = (w-1) zeta(w), which removes the removable singularity at s = 1/2.
    """
    s = complex(s)
    if abs(s - 1) <= POLE_TOL:
        raise PoleError("phi_modular: pole at s = 1")
    f, _ = zeta_pole_removed(2 * s)
    if abs(f) < 1e-300:
        raise PoleError("phi_modular: zero of zeta(2s)")
    g = cmath.exp(log_gamma(s + 0.5) - log_gamma(s))
    return 2 * SQRT_PI * g * riemann_zeta(2 * s - 1) / f


def phi_modular_log_deriv(s) -> complex:
    """phi'/phi(s) = psi(s+1/2) - psi(s) + 2 zeta'/zeta(2s-1) - 2 F'/F(2s)."""
    s = complex(s)
    f, df = zeta_pole_removed(2 * s)
    return digamma(s + 0.5) - digamma(s) + 2 * zeta_log_deriv(2 * s - 1) - 2 * df / f


def sigma_modular_closed(n: int, s) -> complex:
    """Sigma(s) of the modular fixture by closing the contour.

    With u = s+n-1/2 real and positive:
    Sigma = (1/u)[log pi - psi(1/2+u) - 2 zeta'/zeta(1+2u)] - 1/u^2.
    """
    u = complex(s) + n - 0.5
    if abs(u.imag) > 0 or u.real <= 0:
        raise DomainError("closed form needs real s + n - 1/2 > 0")
    return (LOG_PI - digamma(0.5 + u) - 2 * zeta_log_deriv(1 + 2 * u)) / u - 1 / (u * u)


# ----------------------------------------------------------- weight shift


def weight_shift(s, n: int, phi0) -> complex:
    """phi(s; n) = Gamma(s)^2 / (Gamma(s+n) Gamma(s-n)) phi(s; 0)."""
    s = complex(s)
    for x in (s, s - n):
        if abs(x.imag) <= POLE_TOL and x.real <= 0.5 and abs(x.real - round(x.real)) <= POLE_TOL:
            raise PoleError("weight_shift: gamma pole")
    factor = 1 + 0j
    for k in range(1, n + 1):
        factor *= (s - k) / (s + k - 1)
    return factor * complex(phi0)


def a_constant(model: ScatteringModel) -> int:
    """A = q - Tr Phi(1/2), validated to lie within 1e-8 of an even integer."""
    if isinstance(model, NoScattering):
        return 0
    a = model.q - model.trace_phi_half()
    k = round(a / 2)
    if abs(a - 2 * k) > 1e-8:
        raise ModelError(f"A = {a} is not an even integer")
    return 2 * k


# ----------------------------------------------------------------- Sigma


@dataclass(frozen=True)
class SigmaValue:
    value: complex
    error_estimate: float


MAX_R = 1600.0
_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


def _segment(model: ScatteringModel, u2: complex, lo: float, hi: float) -> tuple[complex, float]:
    # integrand is even in r; integrate [lo, hi] in chunks of about 5
    total, err = 0j, 0.0
    if isinstance(model, SampledScattering) and lo < model.extent:
        # table part by the per-interval rule; beyond it the tail law is smooth
        cut = min(hi, model.extent)
        total, err = model.window_integral(lo, cut, u2)
        if cut >= hi:
            return total, err
        lo = cut
    edges = np.linspace(lo, hi, max(2, int(math.ceil((hi - lo) / 5.0)) + 1))
    for a, b in zip(edges[:-1], edges[1:]):
        v, e = integrate(lambda x: model.phi_log_deriv_line(x) / (x * x + u2), float(a), float(b),
                         epsabs=1e-13, epsrel=1e-12, fail_tol=1e-9)
        total += v
        err += e
    return total, err


def sigma_window(n: int, s, model: ScatteringModel, big_r: float) -> complex:
    """(1/2pi) int_{-R}^{R} phi'/phi(1/2+ir) / (r^2+(s+n-1/2)^2) dr without any tail."""
    u = complex(s) + n - 0.5
    v, _ = _segment(model, u * u, 0.0, big_r)
    return 2 * v / (2 * math.pi)


def sigma_integral(n: int, s, model: ScatteringModel, *, r0: float = 100.0,
                   max_r: float = MAX_R, tol: float = 1e-8) -> SigmaValue:
    """Sigma(s) = (1/2pi) int phi'/phi(1/2+ir) / (r^2+(s+n-1/2)^2) dr.

    The window [-R, R] is integrated adaptively and the model's tail beyond R
    is added.  R starts at r0 and doubles until two successive totals agree
    to ``tol``; failing that by max_r raises ConvergenceError.
    """
    if isinstance(model, NoScattering):
        return SigmaValue(0j, 0.0)
    u = complex(s) + n - 0.5
    if u.real <= 0:
        raise DomainError("Sigma requires Re(s+n-1/2) > 0")
    u2 = u * u
    big_r = r0
    if isinstance(model, SampledScattering):
        big_r = max(big_r, model.extent)
    window, werr = _segment(model, u2, 0.0, big_r)
    tail, terr = model.tail_integral(big_r, u)
    prev = 2 * window + tail
    prev_err = 2 * werr + terr
    while big_r < max_r:
        nxt_r = 2 * big_r
        seg, serr = _segment(model, u2, big_r, nxt_r)
        window += seg
        werr += serr
        tail, terr = model.tail_integral(nxt_r, u)
        cur = 2 * window + tail
        cur_err = 2 * werr + terr
        change = abs(cur - prev)
        big_r = nxt_r
        if change < tol:
            scale = 1.0 / (2 * math.pi)
            return SigmaValue(cur * scale, (change + cur_err) * scale)
        prev, prev_err = cur, cur_err
    raise ConvergenceError(f"Sigma did not settle to {tol} by R = {max_r}")


# --------------------------------------------------------- Maass-Selberg


def maass_selberg_general(s1, s2, y: float, model: ScatteringModel) -> complex:
    """Truncated inner product of Eisenstein series, single cusp, diagonal entry."""
    s1, s2 = complex(s1), complex(s2)
    if y <= 1:
        raise DomainError("Y must exceed 1")
    s2b = s2.conjugate()
    if abs(s1 - s2b) < 1e-14 or abs(s1 + s2b - 1) < 1e-14:
        raise DomainError("excluded parameters: s1 = conj(s2) or s1 + conj(s2) = 1")
    p1 = model.phi(s1)
    p2b = model.phi(s2).conjugate()
    ly = math.log(y)
    t1 = cmath.exp((s1 + s2b - 1) * ly) / (s1 + s2b - 1)
    t2 = p1 * cmath.exp((s2b - s1) * ly) / (s2b - s1)
    t3 = p2b * cmath.exp((s1 - s2b) * ly) / (s1 - s2b)
    t4 = -p1 * p2b * cmath.exp((1 - s1 - s2b) * ly) / (s1 + s2b - 1)
    return t1 + t2 + t3 + t4


def maass_selberg_limit(r: float, y: float, model: ScatteringModel) -> complex:
    """(1/2ir)[phi(1/2-ir)Y^{2ir} - phi(1/2+ir)Y^{-2ir}] + 2q log Y - phi'/phi(1/2+ir)."""
    if r == 0:
        raise DomainError("r = 0 is excluded")
    if y <= 1:
        raise DomainError("Y must exceed 1")
    ly = math.log(y)
    osc = (model.phi(0.5 - 1j * r) * cmath.exp(2j * r * ly)
           - model.phi(0.5 + 1j * r) * cmath.exp(-2j * r * ly)) / (2j * r)
    return osc + 2 * model.q * ly - model.phi_log_deriv_line(r)


def model_from_selector(selector: str, q: int | None = None) -> ScatteringModel:
    """Parse 'none', 'modular' or 'file:PATH'."""
    if selector == "none":
        return NoScattering()
    if selector == "modular":
        return ModularScattering()
    if selector.startswith("file:"):
        path = selector[5:]
        try:
            with open(path, encoding="utf-8") as fh:
                return SampledScattering.from_json(fh.read())
        except OSError as exc:
            raise ModelError(f"cannot read scattering file: {exc}") from exc
    raise ModelError(f"unknown scattering selector {selector!r}")


__all__ = [
    "ModularScattering",
    "NoScattering",
    "SampledScattering",
    "ScatteringModel",
    "SigmaValue",
    "a_constant",
    "maass_selberg_general",
    "maass_selberg_limit",
    "model_from_selector",
    "phi_modular",
    "phi_modular_log_deriv",
    "sample_model",
    "sigma_integral",
    "sigma_modular_closed",
    "sigma_window",
    "weight_shift",
]
