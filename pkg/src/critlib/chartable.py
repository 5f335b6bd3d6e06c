"""Character tables with exact cyclotomic entries.

Nonabelian tables ship as JSON files under ``critlib/data`` and are
re-validated every time they are loaded.  Abelian and binary dihedral
tables are generated from formulas.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from itertools import product
from math import gcd, lcm
from pathlib import Path
from typing import Sequence

from .cyclotomic import Cyclotomic
from .errors import CorruptTable, UnknownGroup

BUNDLED_FILES = {
    "A4": "A4.json",
    "S4": "S4.json",
    "A5": "A5.json",
    "binary-tetrahedral": "binary_tetrahedral.json",
    "binary-octahedral": "binary_octahedral.json",
    "binary-icosahedral": "binary_icosahedral.json",
}


@dataclass(frozen=True)
class ConjugacyClass:
    label: str
    size: int
    order: int


@dataclass(frozen=True, eq=False)
class CharacterTable:
    """Rows are irreducible characters (row 0 trivial), columns are classes.

    ``power_map[k-1][c]`` is the class of g^k for g in class c.
    """

    name: str
    order: int
    exponent: int
    classes: tuple[ConjugacyClass, ...]
    power_map: tuple[tuple[int, ...], ...]
    characters: tuple[tuple[Cyclotomic, ...], ...]
    natural_gamma: tuple[int, ...] | None = None
    char_labels: tuple[str, ...] | None = None
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self) -> int:
        """Number of irreducible characters, i.e. l + 1."""
        return len(self.characters)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(int(row[0].to_rational()) for row in self.characters)

    @property
    def max_power(self) -> int:
        return len(self.power_map)

    def value(self, i: int, c: int) -> Cyclotomic:
        return self.characters[i][c]

    def power(self, c: int, k: int) -> int:
        """Class of g^k; k is reduced modulo the element order first."""
        k %= self.classes[c].order
        if k == 0:
            return 0
        if k > self.max_power:
            raise ValueError(f"power map for k = {k} is not stored")
        return self.power_map[k - 1][c]

    def inner(self, f: Sequence[Cyclotomic], g: Sequence[Cyclotomic]) -> Fraction:
        """<f, g> = (1/|G|) sum_c |c| f(c) conj(g(c)); must be rational."""
        acc = Cyclotomic.rational(0, self.exponent)
        for cl, a, b in zip(self.classes, f, g):
            acc = acc + a * b.conjugate() * cl.size
        acc = acc / self.order
        if not acc.is_rational():
            raise CorruptTable(f"{self.name}: inner product {acc} is not rational")
        return acc.to_rational()

    @property
    def conjugates(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        if "conj" not in self._memo:
            self._memo["conj"] = tuple(tuple(x.conjugate() for x in row) for row in self.characters)
        return self._memo["conj"]

    @property
    def dual_involution(self) -> tuple[int, ...]:
        """i -> i* with conj(chi_i) = chi_{i*}."""
        if "dual" not in self._memo:
            rows = self.characters
            out = []
            for cr in self.conjugates:
                hits = [j for j, r in enumerate(rows) if all(a == b for a, b in zip(cr, r))]
                if len(hits) != 1:
                    raise CorruptTable(f"{self.name}: conjugate character not found in the table")
                out.append(hits[0])
            self._memo["dual"] = tuple(out)
        return self._memo["dual"]

    @property
    def linear_indices(self) -> tuple[int, ...]:
        return tuple(i for i, d in enumerate(self.degrees) if d == 1)

    def find_character(self, values: Sequence[Cyclotomic]) -> int | None:
        for i, row in enumerate(self.characters):
            if all(a == b for a, b in zip(row, values)):
                return i
        return None

    def character_of(self, coeffs: Sequence[int]) -> tuple[Cyclotomic, ...]:
        """Values of the virtual character sum_i coeffs[i] chi_i."""
        if len(coeffs) != self.size:
            raise ValueError(f"expected {self.size} coefficients, got {len(coeffs)}")
        out = []
        for c in range(len(self.classes)):
            acc = Cyclotomic.rational(0, self.exponent)
            for a, row in zip(coeffs, self.characters):
                if a:
                    acc = acc + row[c] * a
            out.append(acc)
        return tuple(out)

    def to_json(self) -> dict:
        obj = {
            "name": self.name,
            "order": self.order,
            "exponent": self.exponent,
            "classes": [{"label": c.label, "size": c.size, "order": c.order} for c in self.classes],
            "power_map": [list(r) for r in self.power_map],
            "characters": [[x.lift(self.exponent).to_json() for x in row] for row in self.characters],
        }
        if self.natural_gamma is not None:
            obj["natural_gamma"] = list(self.natural_gamma)
        if self.char_labels is not None:
            obj["character_labels"] = list(self.char_labels)
        return obj


def validate(t: CharacterTable) -> CharacterTable:
    """Check the table invariants; raise CorruptTable on the first failure."""
    k = len(t.classes)

    def bad(msg: str) -> CorruptTable:
        return CorruptTable(f"{t.name}: {msg}")

    if k == 0 or len(t.characters) != k:
        raise bad("the table must be square and nonempty")
    if any(len(row) != k for row in t.characters):
        raise bad("ragged character rows")
    if t.classes[0].size != 1 or t.classes[0].order != 1:
        raise bad("class 0 must be the identity")
    if sum(c.size for c in t.classes) != t.order:
        raise bad("class sizes do not sum to the group order")
    if any(t.order % c.size or t.exponent % c.order for c in t.classes):
        raise bad("class size or element order is inconsistent with the group")
    if any(x != 1 for x in t.characters[0]):
        raise bad("row 0 is not the trivial character")
    for row in t.characters:
        d = row[0]
        if not d.is_integer() or d.to_rational() <= 0:
            raise bad("degrees must be positive integers")
    if sum(d * d for d in t.degrees) != t.order:
        raise bad("squared degrees do not sum to the group order")
    if not t.power_map or tuple(t.power_map[0]) != tuple(range(k)):
        raise bad("power map for k = 1 must be the identity")
    if len(t.power_map) < max(t.degrees):
        raise bad("power maps must reach the largest degree")
    for kk, pm in enumerate(t.power_map, start=1):
        if len(pm) != k or any(not 0 <= c < k for c in pm):
            raise bad(f"power map {kk} has a bad entry")
        for c, img in enumerate(pm):
            o = t.classes[c].order
            if t.classes[img].order != o // gcd(o, kk):
                raise bad(f"power map {kk} sends class {t.classes[c].label} to the wrong order")
    # linear characters are homomorphisms, so chi(g^k) = chi(g)^k
    for i in t.linear_indices:
        row = t.characters[i]
        for kk, pm in enumerate(t.power_map, start=1):
            if any(row[pm[c]] != row[c] ** kk for c in range(k)):
                raise bad(f"power map {kk} disagrees with linear character {i}")
    for i in range(k):
        for j in range(i, k):
            if t.inner(t.characters[i], t.characters[j]) != (1 if i == j else 0):
                raise bad(f"rows {i} and {j} are not orthonormal")
    if t.natural_gamma is not None:
        if len(t.natural_gamma) != k or any(a < 0 for a in t.natural_gamma):
            raise bad("natural_gamma must be a nonnegative vector over Irr(G)")
    t.dual_involution  # every conjugate must be a row
    return t


def table_from_json(obj: dict) -> CharacterTable:
    try:
        N = int(obj["exponent"])
        chars = tuple(
            tuple(Cyclotomic.from_powers(N, [int(a) for a in x["num"]], int(x.get("den", 1))) for x in row)
            for row in obj["characters"]
        )
        t = CharacterTable(
            name=str(obj["name"]),
            order=int(obj["order"]),
            exponent=N,
            classes=tuple(ConjugacyClass(str(c["label"]), int(c["size"]), int(c["order"])) for c in obj["classes"]),
            power_map=tuple(tuple(int(x) for x in r) for r in obj["power_map"]),
            characters=chars,
            natural_gamma=tuple(int(a) for a in obj["natural_gamma"]) if obj.get("natural_gamma") else None,
            char_labels=tuple(obj["character_labels"]) if obj.get("character_labels") else None,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptTable(f"malformed table: {exc}") from exc
    return validate(t)


def load_table(path: str | Path) -> CharacterTable:
    with open(path) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CorruptTable(f"{path}: {exc}") from exc
    return table_from_json(obj)


def save_table(t: CharacterTable, path: str | Path) -> None:
    with open(path, "w") as fh:
        json.dump(t.to_json(), fh, indent=1, sort_keys=True)
        fh.write("\n")


def _order_mod(x: Sequence[int], moduli: Sequence[int]) -> int:
    return lcm(1, *(n // gcd(a, n) for a, n in zip(x, moduli)))


def abelian_character_table(invariants: Sequence[int]) -> CharacterTable:
    """Table of Z/n_1 x ... x Z/n_r; elements and characters in lexicographic order.

    The character indexed by k sends x to zeta_N^{sum_i k_i x_i N / n_i}.
    """
    moduli = tuple(int(n) for n in invariants)
    if any(n < 1 for n in moduli):
        raise ValueError("invariants must be positive integers")
    elements = list(product(*(range(n) for n in moduli))) if moduli else [()]
    N = lcm(1, *moduli)
    index = {x: i for i, x in enumerate(elements)}
    zeta = [Cyclotomic.zeta(N, e) for e in range(N)]
    chars = tuple(
        tuple(zeta[sum(k * x * (N // n) for k, x, n in zip(kk, xx, moduli)) % N] for xx in elements)
        for kk in elements
    )
    classes = tuple(
        ConjugacyClass("(" + ",".join(map(str, x)) + ")", 1, _order_mod(x, moduli)) for x in elements
    )
    power_map = (tuple(range(len(elements))),)
    name = "x".join(f"Z/{n}" for n in moduli) if moduli else "Z/1"
    return validate(
        CharacterTable(name, len(elements), N, classes, power_map, chars, char_labels=tuple(
            "chi" + "".join(map(str, k)) if len(moduli) > 1 else f"chi{k[0] if k else 0}" for k in elements
        ))
    )


def cyclic_table(m: int) -> CharacterTable:
    """Z/m with natural gamma chi_1 + chi_{m-1}, the SL_2 embedding g -> diag(w, w^-1)."""
    t = abelian_character_table([m])
    gamma = [0] * m
    gamma[1 % m] += 1
    gamma[(m - 1) % m] += 1
    return CharacterTable(
        f"cyclic-{m}", t.order, t.exponent, t.classes, t.power_map, t.characters, tuple(gamma), t.char_labels
    )


def binary_dihedral_table(m: int) -> CharacterTable:
    """Binary dihedral group of order 4m, generated by a (order 2m) and x with x^2 = a^m.

    Classes: e, a^m, {a^k, a^-k} for 0 < k < m, x-class, xa-class.  Rows are
    ordered along the affine D_{m+2} diagram: trivial, the other linear
    character with s = 1, rho_1 .. rho_{m-1}, then the two with s = -1.
    """
    if m < 2:
        raise UnknownGroup("binary dihedral groups need m >= 2")
    n2 = 2 * m
    N = lcm(n2, 4)
    z = lambda e: Cyclotomic.zeta(N, (e * (N // n2)) % N)  # noqa: E731
    i_unit = Cyclotomic.zeta(N, N // 4)
    one = Cyclotomic.rational(1, N)
    zero = Cyclotomic.rational(0, N)

    powers_a = [0, m] + list(range(1, m))
    classes = [ConjugacyClass("1a", 1, 1), ConjugacyClass(f"a^{m}", 1, 2)]
    classes += [ConjugacyClass(f"a^{k}", 2, n2 // gcd(k, n2)) for k in range(1, m)]
    classes += [ConjugacyClass("x", m, 4), ConjugacyClass("xa", m, 4)]

    def linear(s: int, t: Cyclotomic) -> tuple[Cyclotomic, ...]:
        vals = [one * (s**k) for k in powers_a]
        return tuple(vals + [t, t * s])

    def rho(h: int) -> tuple[Cyclotomic, ...]:
        return tuple([z(h * k) + z(-h * k) for k in powers_a] + [zero, zero])

    t_plus = one if m % 2 == 0 else i_unit
    rows = [linear(1, one), linear(1, -one)]
    rows += [rho(h) for h in range(1, m)]
    rows += [linear(-1, t_plus), linear(-1, -t_plus)]

    def cls_of_a(e: int) -> int:
        e %= n2
        e = min(e, n2 - e)
        return 0 if e == 0 else 1 if e == m else e + 1

    square = [cls_of_a(2 * k) for k in powers_a] + [1, 1]
    labels = ["1", "sign"] + [f"rho{h}" for h in range(1, m)] + ["eps+", "eps-"]
    gamma = [0] * (m + 3)
    gamma[2] = 1
    return validate(
        CharacterTable(
            f"binary-dihedral-{m}",
            4 * m,
            N,
            tuple(classes),
            (tuple(range(m + 3)), tuple(square)),
            tuple(rows),
            tuple(gamma),
            tuple(labels),
        )
    )


@lru_cache(maxsize=None)
def _bundled(name: str) -> CharacterTable:
    data = resources.files("critlib") / "data" / BUNDLED_FILES[name]
    return table_from_json(json.loads(data.read_text()))


_PARAM = re.compile(r"^(cyclic|binary-dihedral)-(\d+)$")


@lru_cache(maxsize=None)
def get_table(name: str) -> CharacterTable:
    """Look up a catalog group: cyclic-m, binary-dihedral-m, or a bundled name."""
    if name in BUNDLED_FILES:
        return _bundled(name)
    m = _PARAM.match(name)
    if m:
        k = int(m.group(2))
        if m.group(1) == "cyclic":
            if k < 1:
                raise UnknownGroup("cyclic groups need m >= 1")
            return cyclic_table(k)
        return binary_dihedral_table(k)
    raise UnknownGroup(f"unknown group {name!r}")


def bundled_groups(max_cyclic: int = 12, max_dihedral: int = 8) -> dict[str, CharacterTable]:
    """The catalog in a fixed order: cyclic, binary dihedral, binary polyhedral, then A4, S4, A5."""
    names = [f"cyclic-{m}" for m in range(1, max_cyclic + 1)]
    names += [f"binary-dihedral-{m}" for m in range(2, max_dihedral + 1)]
    names += ["binary-tetrahedral", "binary-octahedral", "binary-icosahedral", "A4", "S4", "A5"]
    return {n: get_table(n) for n in names}


SL2_GROUPS = ("cyclic", "binary-dihedral", "binary-tetrahedral", "binary-octahedral", "binary-icosahedral")


def is_sl2_group(name: str) -> bool:
    return name.startswith(SL2_GROUPS)
