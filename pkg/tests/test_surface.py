import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from artifact.errors import DomainError
from artifact.surface import SurfaceSignature, area, dim_holomorphic, dim_via_residue, pole_ledger
from artifact import surface

signatures = st.builds(
    lambda g, q, orders: (g, q, tuple(orders)),
    st.integers(0, 6), st.integers(0, 4), st.lists(st.integers(2, 12), max_size=5),
)


def _make(t):
    try:
        return SurfaceSignature(*t)
    except DomainError:
        assume(False)


@pytest.mark.parametrize("sig,want", [
    ((2, 0, ()), 4 * math.pi),
    ((0, 1, (2, 3)), math.pi / 3),
    ((1, 1, ()), 2 * math.pi),
])
def test_area(sig, want):
    assert abs(area(SurfaceSignature(*sig)) - want) < 1e-12


@pytest.mark.parametrize("bad", [(0, 0, ()), (0, 0, (2, 3, 6)), (1, 0, ()), (0, 2, ()), (0, 1, (1,)), (-1, 3, ())])
def test_rejects_non_cofinite(bad):
    with pytest.raises(DomainError):
        SurfaceSignature(*bad)


def test_json_round_trip():
    sig = SurfaceSignature(3, 2, (2, 2))
    assert SurfaceSignature.from_json(sig.to_json()) == sig


@pytest.mark.parametrize("sig,n,want", [
    ((3, 2, (2, 2)), 1, 3),
    ((0, 1, (2, 3)), 6, 1),
    ((2, 0, ()), 2, 3),
    ((2, 0, ()), 0, 1),
])
def test_dim_holomorphic_values(sig, n, want):
    assert dim_holomorphic(SurfaceSignature(*sig), n) == want


@pytest.mark.parametrize("sig,n,want", [((0, 1, (2, 3)), 2, 0), ((2, 0, ()), 1, 2)])
def test_dim_via_residue_values(sig, n, want):
    assert dim_via_residue(SurfaceSignature(*sig), n) == want


def test_dim_via_residue_matches_for_two_cusps():
    sig = SurfaceSignature(3, 2, (2, 2))
    assert dim_via_residue(sig, 3) == dim_holomorphic(sig, 3)


def test_modular_sequence():
    sig = SurfaceSignature(0, 1, (2, 3))
    assert [dim_holomorphic(sig, n) for n in range(2, 7)] == [0, 0, 0, 0, 1]


@given(signatures, st.integers(1, 12))
def test_residue_route_matches(t, n):
    sig = _make(t)
    assert dim_via_residue(sig, n) == dim_holomorphic(sig, n)


@given(signatures, st.integers(2, 12))
def test_two_forms_agree(t, n):
    sig = _make(t)
    a = surface._dim_alpha_form(sig, n)
    assert a.denominator == 1
    assert a == surface._dim_floor_form(sig, n)


@given(signatures)
def test_d1_is_genus(t):
    sig = _make(t)
    assert dim_holomorphic(sig, 1) == sig.genus


@given(signatures)
def test_monotone_for_genus_two_and_up(t):
    sig = _make(t)
    assume(sig.genus >= 2)
    seq = [dim_holomorphic(sig, n) for n in range(2, 14)]
    assert all(a <= b for a, b in zip(seq, seq[1:]))


def test_pole_ledger_is_rational():
    ledger = pole_ledger(SurfaceSignature(0, 1, (2, 3)), 2)
    assert all(isinstance(p.coef, Fraction) for p in ledger)
    assert sum(p.residue_at_zero(2) for p in ledger) == Fraction(0)


def test_dim_via_residue_requires_positive_n():
    with pytest.raises(DomainError):
        dim_via_residue(SurfaceSignature(2, 0, ()), 0)
