"""Regenerate the bundled character tables in src/critlib/data.

Values are entered by hand from the standard tables and then pushed
through the same validation the loader runs (orthogonality, degree sum,
power maps against linear characters).  Rows of the binary polyhedral
groups follow the Bourbaki numbering of the affine E6/E7/E8 diagrams, so
the McKay-Cartan matrix of the natural 2-dim representation is literally
the extended Cartan matrix.

Run:  python3 tools/make_tables.py
"""

from __future__ import annotations

from pathlib import Path

from critlib.chartable import CharacterTable, ConjugacyClass, save_table, validate
from critlib.cyclotomic import Cyclotomic

OUT = Path(__file__).resolve().parents[1] / "src" / "critlib" / "data"


def build(name, order, N, classes, power_map, rows, labels, gamma=None):
    def lift(x):
        return x.lift(N) if isinstance(x, Cyclotomic) else Cyclotomic.rational(x, N)

    t = CharacterTable(
        name=name,
        order=order,
        exponent=N,
        classes=tuple(ConjugacyClass(*c) for c in classes),
        power_map=tuple(tuple(p) for p in power_map),
        characters=tuple(tuple(lift(x) for x in r) for r in rows),
        natural_gamma=tuple(gamma) if gamma else None,
        char_labels=tuple(labels),
    )
    return validate(t)


def idx(labels, names):
    pos = {lab: i for i, lab in enumerate(labels)}
    return [pos[n] for n in names]


def a4():
    w = Cyclotomic.zeta(3)
    cl = [("1a", 1, 1), ("3a", 4, 3), ("3b", 4, 3), ("2a", 3, 2)]
    labs = [c[0] for c in cl]
    pm = [range(4), idx(labs, ["1a", "3b", "3a", "1a"]), idx(labs, ["1a", "1a", "1a", "2a"])]
    rows = [[1, 1, 1, 1], [1, w, w**2, 1], [1, w**2, w, 1], [3, 0, 0, -1]]
    return build("A4", 12, 6, cl, pm, rows, ["chi0", "chi1", "chi2", "chi3"], [0, 0, 0, 1])


def s4():
    cl = [("1a", 1, 1), ("2a", 6, 2), ("2b", 3, 2), ("3a", 8, 3), ("4a", 6, 4)]
    labs = [c[0] for c in cl]
    pm = [range(5), idx(labs, ["1a", "1a", "1a", "3a", "2b"]), idx(labs, ["1a", "2a", "2b", "1a", "4a"])]
    rows = [[1, 1, 1, 1, 1], [1, -1, 1, 1, -1], [2, 0, 2, -1, 0], [3, 1, -1, 0, -1], [3, -1, -1, 0, 1]]
    return build("S4", 24, 12, cl, pm, rows, ["1", "sign", "2", "3", "3'"], [0, 0, 0, 0, 1])


def a5():
    z5 = Cyclotomic.zeta(5)
    phi = z5 + z5**4 + 1  # golden ratio
    cl = [("1a", 1, 1), ("2a", 15, 2), ("3a", 20, 3), ("5a", 12, 5), ("5b", 12, 5)]
    labs = [c[0] for c in cl]
    pm = [
        range(5),
        idx(labs, ["1a", "1a", "3a", "5b", "5a"]),
        idx(labs, ["1a", "2a", "1a", "5b", "5a"]),
        idx(labs, ["1a", "1a", "3a", "5a", "5b"]),
        idx(labs, ["1a", "2a", "3a", "1a", "1a"]),
    ]
    rows = [
        [1, 1, 1, 1, 1],
        [3, -1, 0, phi, 1 - phi],
        [3, -1, 0, 1 - phi, phi],
        [4, 0, 1, -1, -1],
        [5, 1, -1, 0, 0],
    ]
    return build("A5", 60, 30, cl, pm, rows, ["1", "3", "3'", "4", "5"], [0, 1, 0, 0, 0])


def binary_tetrahedral():
    w = Cyclotomic.zeta(3)
    w2 = w**2
    cl = [("1a", 1, 1), ("2a", 1, 2), ("4a", 6, 4), ("3a", 4, 3), ("3b", 4, 3), ("6a", 4, 6), ("6b", 4, 6)]
    labs = [c[0] for c in cl]
    pm = [
        range(7),
        idx(labs, ["1a", "1a", "2a", "3b", "3a", "3b", "3a"]),
        idx(labs, ["1a", "2a", "4a", "1a", "1a", "2a", "2a"]),
    ]
    rows = [
        [1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, w, w2, w, w2],
        [2, -2, 0, -1, -1, 1, 1],
        [2, -2, 0, -w, -w2, w, w2],
        [3, 3, -1, 0, 0, 0, 0],
        [2, -2, 0, -w2, -w, w2, w],
        [1, 1, 1, w2, w, w2, w],
    ]
    labels = ["1", "1w", "2", "2w", "3", "2w2", "1w2"]
    return build("binary-tetrahedral", 24, 12, cl, pm, rows, labels, [0, 0, 1, 0, 0, 0, 0])


def binary_octahedral():
    z8 = Cyclotomic.zeta(8)
    r2 = z8 + z8**7  # sqrt 2
    cl = [
        ("1a", 1, 1), ("2a", 1, 2), ("4a", 6, 4), ("3a", 8, 3),
        ("6a", 8, 6), ("8a", 6, 8), ("8b", 6, 8), ("4b", 12, 4),
    ]
    labs = [c[0] for c in cl]
    pm = [
        range(8),
        idx(labs, ["1a", "1a", "2a", "3a", "3a", "4a", "4a", "2a"]),
        idx(labs, ["1a", "2a", "4a", "1a", "2a", "8b", "8a", "4b"]),
        idx(labs, ["1a", "1a", "1a", "3a", "3a", "2a", "2a", "1a"]),
    ]
    rows = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [2, -2, 0, -1, 1, r2, -r2, 0],
        [2, 2, 2, -1, -1, 0, 0, 0],
        [3, 3, -1, 0, 0, 1, 1, -1],
        [4, -4, 0, 1, -1, 0, 0, 0],
        [3, 3, -1, 0, 0, -1, -1, 1],
        [2, -2, 0, -1, 1, -r2, r2, 0],
        [1, 1, 1, 1, 1, -1, -1, -1],
    ]
    labels = ["1", "2", "2s", "3", "4", "3s", "2x", "sign"]
    return build("binary-octahedral", 48, 24, cl, pm, rows, labels, [0, 1, 0, 0, 0, 0, 0, 0])


def binary_icosahedral():
    z5 = Cyclotomic.zeta(5)
    p = z5 + z5**4 + 1  # golden ratio
    q = 1 - p
    # rotation angle of each class in the natural 2-dim representation, as a fraction of pi
    from fractions import Fraction as F

    cl = [
        ("1a", 1, 1, F(0)), ("2a", 1, 2, F(1)), ("4a", 30, 4, F(1, 2)), ("3a", 20, 3, F(2, 3)),
        ("6a", 20, 6, F(1, 3)), ("5a", 12, 5, F(2, 5)), ("5b", 12, 5, F(4, 5)),
        ("10a", 12, 10, F(1, 5)), ("10b", 12, 10, F(3, 5)),
    ]
    angle = [c[3] for c in cl]

    def power_class(c, k):
        a = (angle[c] * k) % 2
        a = min(a, 2 - a)
        return angle.index(a)

    pm = [[power_class(c, k) for c in range(9)] for k in range(1, 7)]
    rows = [
        [1] * 9,
        [2, -2, 0, -1, 1, -p, -q, q, p],  # 2'
        [3, 3, -1, 0, 0, p, q, q, p],  # 3'
        [4, 4, 0, 1, 1, -1, -1, -1, -1],  # 4'
        [6, -6, 0, 0, 0, 1, 1, -1, -1],
        [5, 5, 1, -1, -1, 0, 0, 0, 0],
        [4, -4, 0, 1, -1, -1, -1, 1, 1],
        [3, 3, -1, 0, 0, q, p, p, q],
        [2, -2, 0, -1, 1, -q, -p, p, q],  # natural
    ]
    labels = ["1", "2'", "3'", "4'", "6", "5", "4", "3", "2"]
    return build(
        "binary-icosahedral", 120, 60, [c[:3] for c in cl], pm, rows, labels, [0, 0, 0, 0, 0, 0, 0, 0, 1]
    )


TABLES = {
    "A4.json": a4,
    "S4.json": s4,
    "A5.json": a5,
    "binary_tetrahedral.json": binary_tetrahedral,
    "binary_octahedral.json": binary_octahedral,
    "binary_icosahedral.json": binary_icosahedral,
}


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for fname, make in TABLES.items():
        save_table(make(), OUT / fname)
        print("wrote", OUT / fname)


if __name__ == "__main__":
    main()
