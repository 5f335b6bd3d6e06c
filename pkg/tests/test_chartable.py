import copy
import json

import pytest

from critlib import chartable
from critlib.cyclotomic import Cyclotomic
from critlib.errors import CorruptTable, UnknownGroup

ALL = chartable.bundled_groups(max_cyclic=8, max_dihedral=6)


@pytest.mark.parametrize("name", sorted(ALL))
def test_catalog_tables_validate(name):
    t = ALL[name]
    assert chartable.validate(t) is t
    assert sum(d * d for d in t.degrees) == t.order
    assert sum(c.size for c in t.classes) == t.order


@pytest.mark.parametrize("name", ["A4", "S4", "A5", "binary-tetrahedral", "binary-octahedral", "binary-icosahedral"])
def test_json_roundtrip(name, tmp_path):
    t = chartable.get_table(name)
    path = tmp_path / "t.json"
    chartable.save_table(t, path)
    back = chartable.load_table(path)
    assert back.to_json() == t.to_json()


def _corrupt(mutate):
    obj = copy.deepcopy(chartable.get_table("A4").to_json())
    mutate(obj)
    with pytest.raises(CorruptTable):
        chartable.table_from_json(obj)


def test_corruptions_are_caught():
    def swap_value(o):
        o["characters"][1][1], o["characters"][1][2] = o["characters"][1][2], o["characters"][1][1]
        o["characters"][2][1] = o["characters"][1][1]

    def bad_size(o):
        o["classes"][1]["size"] = 5

    def bad_order(o):
        o["order"] = 13

    def bad_power(o):
        o["power_map"][0] = [0, 0, 0, 0]

    def drop_row(o):
        o["characters"].pop()

    def missing_key(o):
        del o["classes"]

    def bad_degree(o):
        o["characters"][3][0] = {"num": [2, 0], "den": 1}

    for m in [swap_value, bad_size, bad_order, bad_power, drop_row, missing_key, bad_degree]:
        _corrupt(m)


def test_unparseable_file(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(CorruptTable):
        chartable.load_table(p)


def test_unknown_groups():
    for name in ["Q8", "cyclic-0", "binary-dihedral-1", "S5"]:
        with pytest.raises(UnknownGroup):
            chartable.get_table(name)


def test_cyclic_table():
    t = chartable.get_table("cyclic-5")
    assert t.natural_gamma == (0, 1, 0, 0, 1)
    assert t.characters[2][3] == Cyclotomic.zeta(5, 6)
    assert t.dual_involution == (0, 4, 3, 2, 1)
    assert chartable.get_table("cyclic-2").natural_gamma == (0, 2)


def test_abelian_table_order():
    t = chartable.abelian_character_table([2, 2])
    assert [c.label for c in t.classes] == ["(0,0)", "(0,1)", "(1,0)", "(1,1)"]
    assert [c.order for c in t.classes] == [1, 2, 2, 2]
    assert t.linear_indices == (0, 1, 2, 3)
    assert t.characters[3][1] == -1 and t.characters[3][3] == 1


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_binary_dihedral(m):
    t = chartable.binary_dihedral_table(m)
    assert t.order == 4 * m and t.size == m + 3
    assert t.degrees == (1, 1) + (2,) * (m - 1) + (1, 1)
    assert len(t.linear_indices) == 4


def test_power_maps_and_inner_products():
    t = chartable.get_table("binary-icosahedral")
    orders = [c.order for c in t.classes]
    for c in range(len(t.classes)):
        assert t.power(c, orders[c]) == 0
        assert orders[t.power(c, 2)] == orders[c] // (2 if orders[c] % 2 == 0 else 1)
    assert t.inner(t.characters[4], t.characters[4]) == 1
    assert t.find_character(t.characters[5]) == 5
    assert t.character_of([0] * 8 + [1]) == t.characters[8]


def test_bundled_files_are_valid_json():
    for name, fname in chartable.BUNDLED_FILES.items():
        obj = json.loads((chartable.resources.files("critlib") / "data" / fname).read_text())
        assert obj["name"] == name or obj["name"].replace("_", "-") == name
