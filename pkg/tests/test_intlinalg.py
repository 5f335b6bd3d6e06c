import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from critlib.errors import ParseError, RankDeficiencyNotOne, Singular
from critlib.intlinalg import (
    AbelianGroupInvariants,
    ImageLattice,
    IntMatrix,
    arborescence_count,
    cokernel_invariants,
    determinant,
    exact_inverse,
    integer_kernel_basis,
    is_unimodular,
    leading_principal_minors,
    nullspace_primitive,
    rank,
    smith_normal_form,
    strike,
)

from oracles import det_leibniz, inverse_gauss


def mat(rows):
    return IntMatrix.from_rows(rows)


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)
square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_is_a_valid_decomposition(rows):
    A = mat(rows)
    s = smith_normal_form(A)
    assert is_unimodular(s.U) and is_unimodular(s.V)
    assert s.U @ A @ s.V == s.S
    d = s.diagonal
    nz = [x for x in d if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(x == 0 for x in d[len(nz):])
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert s.S[i, j] == 0


@settings(max_examples=150, deadline=None)
@given(square)
def test_determinant_matches_leibniz(rows):
    assert determinant(mat(rows)) == det_leibniz(rows)


@settings(max_examples=100, deadline=None)
@given(square)
def test_cokernel_order_is_abs_det(rows):
    A = mat(rows)
    d = det_leibniz(rows)
    K = cokernel_invariants(A)
    if d == 0:
        assert K.free_rank >= 1
    else:
        assert K.is_finite and K.order == abs(d)


@settings(max_examples=80, deadline=None)
@given(square)
def test_inverse_matches_gauss(rows):
    A = mat(rows)
    if det_leibniz(rows) == 0:
        with pytest.raises(Singular):
            exact_inverse(A)
    else:
        assert exact_inverse(A).tolist() == inverse_gauss(rows)


def test_snf_small_examples():
    assert smith_normal_form(mat([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])).diagonal == (2, 6, 12)
    assert str(cokernel_invariants(mat([[2, 0], [0, 3]]))) == "Z/6"
    assert str(cokernel_invariants(mat([[2, -1], [-1, 2]]))) == "Z/3"
    assert str(cokernel_invariants(mat([[0, 0], [0, 0]]))) == "Z^2"
    assert str(cokernel_invariants(mat([[1, 2, 3]]))) == "Z^2"


def test_snf_is_deterministic():
    rng = random.Random(3)
    A = mat([[rng.randint(-9, 9) for _ in range(4)] for _ in range(3)])
    assert smith_normal_form(A) == smith_normal_form(A)


def test_invariant_strings_roundtrip():
    for text in ["0", "Z", "Z^3", "Z/4", "Z/2 x Z/2", "Z x Z/2 x Z/6"]:
        assert str(AbelianGroupInvariants.parse(text)) == text
    assert str(AbelianGroupInvariants.from_cyclic_orders([4, 6])) == "Z/2 x Z/12"
    assert str(AbelianGroupInvariants.from_cyclic_orders([1, 1])) == "0"
    with pytest.raises(ParseError):
        AbelianGroupInvariants.parse("Q/2")


def test_invariants_reject_bad_chain():
    with pytest.raises(ValueError):
        AbelianGroupInvariants(0, (4, 2))


def test_json_roundtrip_with_big_entries():
    A = mat([[10**40, -1], [3, -(10**30)]])
    assert IntMatrix.from_json(A.to_json()) == A
    with pytest.raises(ParseError):
        IntMatrix.from_json({"rows": 1})


def test_empty_matrix_and_arborescences():
    assert determinant(IntMatrix.zeros(0, 0)) == 1
    assert arborescence_count(IntMatrix.zeros(0, 0)) == 1
    # directed triangle 0->1->2->0: one arborescence toward each vertex
    L = mat([[1, -1, 0], [0, 1, -1], [-1, 0, 1]])
    assert arborescence_count(strike(L, 0)) == 1


def test_nullspace_and_kernel():
    Ct = mat([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
    assert nullspace_primitive(Ct) == (1, 1, 1)
    assert nullspace_primitive(mat([[2, -1], [-1, 2]])) is None
    with pytest.raises(RankDeficiencyNotOne):
        nullspace_primitive(IntMatrix.zeros(2, 2))
    basis = integer_kernel_basis(mat([[1, 2, 3]]))
    assert len(basis) == 2 and all(b[0] + 2 * b[1] + 3 * b[2] == 0 for b in basis)
    assert rank(Ct) == 2


def test_strike_and_minors():
    A = mat([[1, 2, 3], [4, 5, 6], [7, 8, 10]])
    assert strike(A, 1).tolist() == [[1, 3], [7, 10]]
    assert leading_principal_minors(A) == [1, -3, -3]


def test_image_lattice_cosets():
    A = mat([[2, 0], [0, 3]])
    lat = ImageLattice(A)
    assert lat.contains((4, 9)) and not lat.contains((1, 0))
    assert lat.key((5, 7)) == lat.key((1, 1))
    assert lat.canonical((5, 7)) == lat.canonical((1, 1))
    assert str(lat.quotient_invariants()) == "Z/6"
    w = lat.solve((4, -3))
    assert A.apply(w) == (4, -3)
    with pytest.raises(ValueError):
        lat.solve((1, 0))


@settings(max_examples=60, deadline=None)
@given(square, st.lists(st.integers(-30, 30), min_size=4, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_canonical_is_a_coset_invariant(rows, x, w):
    A = mat(rows)
    n = A.rows
    x, w = tuple(x[:n]), tuple(w[:n])
    lat = ImageLattice(A)
    shifted = tuple(a + b for a, b in zip(x, A.apply(w)))
    assert lat.canonical(x) == lat.canonical(shifted)
    diff = tuple(a - b for a, b in zip(x, lat.canonical(x)))
    assert lat.contains(diff)
