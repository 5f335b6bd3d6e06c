import pytest

from critlib import chipfire, rootsys
from critlib.errors import InvalidRank, InvalidType, NotMinuscule, NotNegativeAtNode
from critlib.intlinalg import determinant
from critlib.suite import C4_PADDED, C4_TOPPLING, E6_ORDER, E6_PADDED, E6_TOPPLING

# (positive roots, Coxeter number, minuscule nodes, det C)
KNOWN = {
    "A1": (1, 2, {1}, 2),
    "A4": (10, 5, {1, 2, 3, 4}, 5),
    "B3": (9, 6, {3}, 2),
    "C3": (9, 6, {1}, 2),
    "D4": (12, 6, {1, 3, 4}, 4),
    "D5": (20, 8, {1, 4, 5}, 4),
    "E6": (36, 12, {1, 6}, 3),
    "E7": (63, 18, {7}, 2),
    "E8": (120, 30, set(), 1),
    "F4": (24, 12, set(), 1),
    "G2": (6, 6, set(), 1),
}


@pytest.mark.parametrize("name", sorted(KNOWN))
def test_classical_invariants(name):
    npos, h, mins, det = KNOWN[name]
    R = rootsys.root_system(name)
    assert len(R.positive_roots) == npos
    assert R.coxeter_number == h
    assert set(R.minuscule_nodes) == mins
    assert determinant(R.cartan) == det == R.index_of_connection
    ext = R.extended_cartan
    assert ext.T.apply(R.marks) == (0,) * ext.rows
    assert ext.apply(R.phi) == (0,) * ext.rows


def test_parsing_and_validation():
    assert str(rootsys.DynkinType.parse("e_6")) == "E6"
    with pytest.raises(InvalidType):
        rootsys.DynkinType.parse("H3")
    with pytest.raises(InvalidRank):
        rootsys.DynkinType.parse("E9")
    with pytest.raises(InvalidRank):
        rootsys.DynkinType.parse("B1")


def test_cartan_conventions():
    assert rootsys.cartan_matrix("G2").tolist() == [[2, -1], [-3, 2]]
    assert rootsys.cartan_matrix("B2").tolist() == [[2, -2], [-1, 2]]
    assert rootsys.cartan_matrix("C2").tolist() == rootsys.cartan_matrix("B2").T.tolist()
    e6 = rootsys.cartan_matrix("E6")
    assert e6[1, 3] == -1 and e6[1, 2] == 0


def test_highest_roots():
    top, star = rootsys.highest_roots("B4")
    assert top.coords == (1, 2, 2, 2)
    assert star.coords == (1, 1, 1, 1)
    top, star = rootsys.highest_roots("G2")
    assert top.coords == (3, 2) and star.coords == (2, 1)
    assert rootsys.dual_type("C4") == rootsys.DynkinType("B", 4)


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2", "F4", "E6"])
def test_minuscule_classification(name):
    assert rootsys.verify_minuscule_classification(name).passed


def test_rho_chain_is_a_maximal_chain():
    for name in ["A3", "B3", "G2", "E6"]:
        R = rootsys.root_system(name)
        chain = rootsys.stabilization_chain_from_rho(name)
        assert chain.states[-1] == R.weyl_vector
        assert len(chain.chain) == R.coxeter_number - 1
        assert chain.chain[-1] == R.alpha_tilde.coords


def test_maximal_chain_counts():
    assert rootsys.positive_roots("A2").count_maximal_chains() == 2
    poset = rootsys.positive_roots("B2")
    assert poset.count_maximal_chains() == len(list(poset.maximal_chains()))


def test_stabilization_sequence_count():
    sys = rootsys.chip_system("A2")
    assert rootsys.count_stabilization_sequences(sys, (1, 1)) == 1
    assert rootsys.count_stabilization_sequences(sys, (2, 1)) == 1
    assert rootsys.count_stabilization_sequences(sys, (2, 2)) == 2


def test_e6_looping_matches_printed_sequence():
    seq = rootsys.minuscule_toppling_and_looping("E6", 1, order=E6_ORDER)
    assert list(seq.v[1:]) == E6_TOPPLING
    assert list(seq.padded) == E6_PADDED
    assert seq.fired == E6_ORDER


def test_c4_looping():
    seq = rootsys.minuscule_toppling_and_looping("C4", 1)
    assert list(seq.v) == C4_TOPPLING
    assert list(seq.padded) == C4_PADDED
    assert seq.dual_type == "B4"


def test_looping_rejects_bad_input():
    with pytest.raises(NotMinuscule):
        rootsys.minuscule_toppling_and_looping("E8", 1)
    with pytest.raises(NotNegativeAtNode):
        rootsys.minuscule_toppling_and_looping("E6", 1, order=(1,) + E6_ORDER[1:])
    with pytest.raises(NotNegativeAtNode):
        rootsys.numbers_fire("A2", (1, 0), 1)


def test_burning_configurations():
    assert rootsys.burning_configurations_cartan("A2", (1, 1))
    assert not rootsys.burning_configurations_cartan("A2", (1, 0))
    assert not rootsys.burning_configurations_cartan("A2", (0, 0))
    sys = rootsys.chip_system("A2")
    with pytest.raises(Exception):
        chipfire.check_burning(sys, (1, 0))


def test_layout():
    text = rootsys.dynkin_layout("E6", (1, 2, 3, 4, 5, 6))
    assert text.splitlines() == ["    2", "1 3 4 5 6"]
    assert rootsys.dynkin_layout("A3", (1, 0, 1)) == "[1 0 1]"


def _top_state(name):
    R = rootsys.root_system(name)
    return tuple(a + b for a, b in zip(R.weyl_vector, R.alpha_tilde.weights))


@pytest.mark.parametrize("name", ["A2", "A3", "D4"])
def test_toppling_sequences_match_maximal_chains_simply_laced(name):
    sys = rootsys.chip_system(name)
    chains = rootsys.positive_roots(name).count_maximal_chains()
    assert rootsys.count_stabilization_sequences(sys, _top_state(name)) == chains


def test_toppling_sequences_undercount_chains_in_b2():
    sys = rootsys.chip_system("B2")
    assert rootsys.count_stabilization_sequences(sys, _top_state("B2")) == 1
    assert rootsys.positive_roots("B2").count_maximal_chains() == 2


def test_default_e6_descent_agrees_with_printed_one():
    seq = rootsys.minuscule_toppling_and_looping("E6", 1)
    assert sorted(seq.fired) == sorted(E6_ORDER)
    assert seq.v[0] == seq.v[-1] == (0, 1, 1, 1, 1, 1)
    assert seq.v[1] == E6_TOPPLING[0] and seq.v[-1] == E6_TOPPLING[-1]
