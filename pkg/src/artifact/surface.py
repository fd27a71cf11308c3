"""Orbifold signatures, hyperbolic area and dimensions of holomorphic n-differentials."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, InternalError
from .residues import alpha


@dataclass(frozen=True)
class SurfaceSignature:
    """Type (g; q; m_1, ..., m_v) of a cofinite orbifold surface."""

    genus: int
    cusps: int
    elliptic_orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        orders = tuple(sorted(int(m) for m in self.elliptic_orders))
        object.__setattr__(self, "elliptic_orders", orders)
        if int(self.genus) != self.genus or self.genus < 0:
            raise DomainError("genus must be a nonnegative integer")
        if int(self.cusps) != self.cusps or self.cusps < 0:
            raise DomainError("cusps must be a nonnegative integer")
        if any(m < 2 for m in orders):
            raise DomainError("elliptic orders must be >= 2")
        if self.area_over_2pi <= 0:
            raise DomainError("signature is not cofinite: area <= 0")

    @property
    def area_over_2pi(self) -> Fraction:
        """Exact |X|/(2 pi)."""
        e = sum((1 - Fraction(1, m) for m in self.elliptic_orders), Fraction(0))
        return 2 * self.genus - 2 + self.cusps + e

    @property
    def area(self) -> float:
        return 2.0 * math.pi * float(self.area_over_2pi)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "cusps": self.cusps,
            "elliptic_orders": list(self.elliptic_orders),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "SurfaceSignature":
        try:
            return cls(int(d["genus"]), int(d["cusps"]), tuple(d.get("elliptic_orders", [])))
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed signature: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "SurfaceSignature":
        return cls.from_dict(json.loads(text))


def area(sig: SurfaceSignature) -> float:
    return sig.area


def _dim_floor_form(sig: SurfaceSignature, n: int) -> int:
    g, q = sig.genus, sig.cusps
    return (2 * n - 1) * (g - 1) + (n - 1) * q + sum((n * m - n) // m for m in sig.elliptic_orders)


def _dim_alpha_form(sig: SurfaceSignature, n: int) -> Fraction:
    ell = sum((Fraction(m - 1 - 2 * alpha(m, -n), m) for m in sig.elliptic_orders), Fraction(0))
    return Fraction(2 * n - 1, 2) * sig.area_over_2pi + ell / 2 - Fraction(sig.cusps, 2)


def dim_holomorphic(sig: SurfaceSignature, n: int) -> int:
    """Dimension d_n of holomorphic n-differentials."""
    if int(n) != n or n < 0:
        raise DomainError("n must be a nonnegative integer")
    if n == 0:
        return 1
    if n == 1:
        return sig.genus
    d_floor = _dim_floor_form(sig, n)
    d_alpha = _dim_alpha_form(sig, n)
    if d_alpha != d_floor:
        raise InternalError(f"dimension forms disagree: {d_floor} vs {d_alpha}")
    return d_floor


@dataclass(frozen=True)
class DigammaPole:
    """coef * psi((s + offset)/scale) multiplied by 1/(2s + 2n - 1)."""

    coef: Fraction
    offset: Fraction | int
    scale: int

    def residue_at_zero(self, n: int) -> Fraction:
        if self.offset > 0:
            return Fraction(0)
        x = Fraction(self.offset, self.scale)
        if x.denominator == 1 and x <= 0:
            # psi((s+c)/m) has residue -m at s = -c
            return self.coef * (-self.scale) / (2 * n - 1)
        return Fraction(0)


def pole_ledger(sig: SurfaceSignature, n: int) -> list[DigammaPole]:
    """Every digamma term of the geometric trace, written in the 1/(2s+2n-1) normalisation."""
    ledger: list[DigammaPole] = []
    # identity term -(|X|/4pi)[psi(s+2n) + psi(s)]; fold (2s+2n-1) in at s = 0
    c_id = -sig.area_over_2pi / 2 * (2 * n - 1)
    ledger.append(DigammaPole(c_id, 2 * n, 1))
    ledger.append(DigammaPole(c_id, 0, 1))
    for m in sig.elliptic_orders:
        for r in range(m):
            ledger.append(DigammaPole(Fraction(2 * alpha(m, r - n) + 1 - m, 2 * m * m), r, m))
            ledger.append(DigammaPole(Fraction(2 * alpha(m, r + n) + 1 - m, 2 * m * m), 2 * n + r, m))
    half_q = Fraction(sig.cusps, 2)
    ledger.append(DigammaPole(half_q, 0, 1))
    ledger.append(DigammaPole(half_q, 2 * n, 1))
    ledger.append(DigammaPole(-2 * half_q, Fraction(2 * n + 1, 2), 1))
    ledger.append(DigammaPole(-2 * half_q, n, 1))
    return ledger


def dim_via_residue(sig: SurfaceSignature, n: int) -> Fraction:
    """d_n = (2n-1) Res_{s=0} of the geometric trace, by exact pole bookkeeping."""
    if int(n) != n or n < 1:
        raise DomainError("dim_via_residue requires n >= 1")
    # only poles sitting at s = 0 (offset 0) contribute
    res = sum((p.residue_at_zero(n) for p in pole_ledger(sig, n) if p.offset <= 0), Fraction(0))
    # log-derivative of Z(s+n): simple zero of Z at 1 gives residue 1 when n = 1
    if n == 1:
        res += Fraction(1, 2 * n - 1)
    return (2 * n - 1) * res
