import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlib import chipfire
from critlib.errors import (
    InvalidToppling,
    NegativeInput,
    NotAvalancheFinite,
    NotCovering,
    NotInImage,
    NotZMatrix,
    TooLarge,
)
from critlib.intlinalg import IntMatrix, cokernel_invariants
from critlib.suite import A4_C, A4_RECURRENTS, A4_SUPERSTABLES

from oracles import stabilize_naive, superstable_by_definition

A4 = chipfire.certify(IntMatrix.from_rows(A4_C))
A2 = chipfire.certify(IntMatrix.from_rows([[2, -1], [-1, 2]]))


@st.composite
def avalanche_finite(draw):
    """Diagonally dominant Z-matrices with at least one strictly dominant row reaching everything."""
    n = draw(st.integers(1, 4))
    rows = []
    for i in range(n):
        off = [0 if j == i else -draw(st.integers(0, 2)) for j in range(n)]
        off[i] = -sum(off) + draw(st.integers(0, 2))
        rows.append(off)
    rows[0][0] += 1
    for i in range(1, n):
        if rows[i][i - 1] == 0:
            rows[i][i - 1] = -1
            rows[i][i] += 1
    return rows


@settings(max_examples=80, deadline=None)
@given(avalanche_finite(), st.lists(st.integers(0, 12), min_size=4, max_size=4))
def test_stabilize_matches_naive(rows, v):
    sys = chipfire.certify(IntMatrix.from_rows(rows))
    v = v[: sys.size]
    expected = stabilize_naive(rows, v)
    for strategy in ("queue", "max-surplus"):
        out, rec = chipfire.stabilize(sys, v, strategy)
        assert (out, rec.counts) == expected
        assert rec.total == sum(rec.counts)


def test_a4_goldens():
    assert chipfire.recurrent_representatives(A4) == sorted(A4_RECURRENTS)
    assert chipfire.superstable_representatives(A4) == sorted(A4_SUPERSTABLES)
    assert chipfire.recurrents_by_forward_image(A4) == sorted(A4_RECURRENTS)
    assert str(chipfire.critical_group(A4)) == "Z/3"
    assert A4.certificate.witness_r == (2, 2, 5)


def test_small_stabilization_example():
    out, rec = chipfire.stabilize(A2, (3, 3))
    assert out == (1, 1) and rec.counts == (2, 2)
    with pytest.raises(NegativeInput):
        chipfire.stabilize(A2, (-1, 3))
    with pytest.raises(ValueError):
        chipfire.stabilize(A2, (1, 1), strategy="random")


def test_topple_rules():
    assert chipfire.topple(A2, (2, 0), 1) == (0, 1)
    with pytest.raises(InvalidToppling):
        chipfire.topple(A2, (1, 0), 1)
    with pytest.raises(IndexError):
        chipfire.topple(A2, (2, 0), 3)


def test_superstables_match_definition():
    rows = A4_C
    for u in chipfire.stable_configs(A4):
        assert chipfire.is_superstable(A4, u) == superstable_by_definition(rows, u)
        assert chipfire.is_superstable(A4, u) == chipfire.is_superstable_direct(A4, u)


def test_every_coset_has_one_recurrent():
    recs = chipfire.recurrent_representatives(A4)
    keys = {A4.lattice.key(v) for v in recs}
    assert len(keys) == len(recs) == cokernel_invariants(A4.C).order


def test_energy_is_minimised_by_superstables():
    rng = random.Random(7)
    supers = chipfire.superstable_representatives(A4)
    for u in supers:
        for _ in range(20):
            z = [rng.randint(-3, 3) for _ in range(3)]
            w = tuple(a + b for a, b in zip(u, A4.C.T.apply(z)))
            if min(w) >= 0 and any(z):
                assert chipfire.energy(A4, w) > chipfire.energy(A4, u)
    assert chipfire.energy(A2, (1, 0)) == Fraction(5, 9)


def test_burning():
    cert = chipfire.check_burning(A2, (1, 1))
    assert cert.z == (1, 1)
    assert chipfire.recurrent_test_via_burning(A2, cert, (1, 1))
    assert not chipfire.recurrent_test_via_burning(A2, cert, (0, 0))
    with pytest.raises(NotInImage):
        chipfire.check_burning(A2, (1, 0))
    diag = chipfire.certify(IntMatrix.from_rows([[1, 0], [0, 1]]))
    with pytest.raises(NotCovering):
        chipfire.check_burning(diag, (1, 0))
    for v in chipfire.stable_configs(A4):
        assert chipfire.recurrent_test_via_burning(A4, (1, 1, 1), v) == chipfire.is_recurrent(A4, v)


def test_certify_rejections():
    with pytest.raises(NotZMatrix):
        chipfire.certify(IntMatrix.from_rows([[2, 1], [1, 2]]))
    with pytest.raises(NotAvalancheFinite):
        chipfire.certify(IntMatrix.from_rows([[1, -1], [-1, 1]]))
    with pytest.raises(NotAvalancheFinite):
        chipfire.certify(IntMatrix.from_rows([[1, -2], [-2, 1]]))
    with pytest.raises(NotZMatrix):
        chipfire.certify(IntMatrix.zeros(0, 0))


def test_guard(monkeypatch):
    monkeypatch.setenv("CRITLIB_GUARD", "5")
    big = chipfire.certify(IntMatrix.from_rows([[3, -1], [-1, 3]]))
    with pytest.raises(TooLarge):
        chipfire.recurrent_representatives(big)


def test_zero_coset():
    v = chipfire.zero_coset_recurrent(A4)
    assert A4.lattice.contains(v) and v in A4_RECURRENTS


def test_extended_cokernel_relations():
    tri = IntMatrix.from_rows([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    rep = chipfire.extended_cokernel_relations(tri)
    assert rep.hypotheses_hold and rep.passed
    assert str(rep.coker_Ctilde) == "Z x Z/3"
    odd = chipfire.extended_cokernel_relations(IntMatrix.from_rows([[30, -15], [-20, 10]]))
    assert (odd.delta, odd.gamma) == ((1, 2), (2, 3))
    assert not odd.hypotheses_hold
    assert str(odd.coker_C) == "Z/10" and str(odd.perp_quotient) == "Z/5"
    assert not odd.relation_perp and odd.relation_perp_general and odd.passed
    assert "coker_Ct_is_perp_quotient" in odd.to_json()
