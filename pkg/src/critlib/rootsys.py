"""Finite crystallographic root systems and the chip-firing theorems on their Cartan matrices.

Conventions: c_ij = (α_i, α_j^∨), Bourbaki node numbering (E6 as printed,
with node 2 attached to node 4).  Row i of C is α_i in fundamental-weight
coordinates, so a root with simple-root coordinates x has weight
coordinates Cᵗx.  G2 has α1 short: C = [[2,-1],[-3,2]].
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from . import chipfire
from .errors import InvalidRank, InvalidToppling, InvalidType, NotMinuscule, NotNegativeAtNode
from .intlinalg import IntMatrix, Vector, determinant

_FAMILIES = "ABCDEFG"


@dataclass(frozen=True)
class DynkinType:
    family: str
    rank: int

    def __post_init__(self) -> None:
        f, n = self.family, self.rank
        if f not in _FAMILIES:
            raise InvalidType(f"unknown family {f!r}")
        ok = {
            "A": n >= 1,
            "B": n >= 2,
            "C": n >= 2,
            "D": n >= 3,
            "E": n in (6, 7, 8),
            "F": n == 4,
            "G": n == 2,
        }[f]
        if not ok:
            raise InvalidRank(f"{f}{n} is not a valid type")

    @classmethod
    def parse(cls, text: str | DynkinType) -> DynkinType:
        if isinstance(text, DynkinType):
            return text
        m = re.fullmatch(r"\s*([A-Ga-g])_?(\d+)\s*", str(text))
        if not m:
            raise InvalidType(f"cannot parse type {text!r}")
        return cls(m.group(1).upper(), int(m.group(2)))

    def __str__(self) -> str:
        return f"{self.family}{self.rank}"

    @property
    def simply_laced(self) -> bool:
        return self.family in "ADE"


def _diagram(t: DynkinType) -> tuple[list[tuple[int, int]], list[int]]:
    """Edges (1-based) and squared lengths of the simple roots."""
    f, n = t.family, t.rank
    chain = [(i, i + 1) for i in range(1, n)]
    if f == "A":
        return chain, [2] * n
    if f == "B":
        return chain, [4] * (n - 1) + [2]
    if f == "C":
        return chain, [2] * (n - 1) + [4]
    if f == "D":
        edges = [(i, i + 1) for i in range(1, n - 1)] + [(n - 2, n)]
        return edges, [2] * n
    if f == "E":
        edges = [(1, 3), (3, 4), (2, 4)] + [(i, i + 1) for i in range(4, n)]
        return edges, [2] * n
    if f == "F":
        return chain, [4, 4, 2, 2]
    return [(1, 2)], [2, 6]


def cartan_matrix(t: DynkinType | str) -> IntMatrix:
    """Cartan matrix c_ij = 2(α_i, α_j)/(α_j, α_j)."""
    t = DynkinType.parse(t)
    edges, L = _diagram(t)
    n = t.rank
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = Fraction(L[i])
    for a, b in edges:
        # bond multiplicity is the length ratio, so (α_a, α_b) = -max(L)/2
        gram[a - 1][b - 1] = gram[b - 1][a - 1] = -Fraction(max(L[a - 1], L[b - 1]), 2)
    return IntMatrix.from_rows([[int(2 * gram[i][j] / L[j]) for j in range(n)] for i in range(n)])


def symmetrizer(C: IntMatrix) -> tuple[int, ...]:
    """Squared lengths L_i with c_ij L_j = c_ji L_i, scaled so the shortest is 2."""
    n = C.rows
    L: list[Fraction | None] = [None] * n
    L[0] = Fraction(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(n):
            if j != i and C[i, j] != 0 and L[j] is None:
                L[j] = L[i] * C[j, i] / C[i, j]
                todo.append(j)
    if any(x is None for x in L):
        raise InvalidType("Cartan matrix is not connected")
    m = min(L)
    return tuple(int(2 * x / m) for x in L)


@dataclass(frozen=True)
class Root:
    coords: Vector  # simple-root coordinates
    weights: Vector  # fundamental-weight coordinates, Cᵗ·coords
    norm: int  # squared length (shortest roots have 2)

    @property
    def height(self) -> int:
        return sum(self.coords)


@dataclass(frozen=True)
class RootPoset:
    elements: tuple[Root, ...]
    covers: tuple[tuple[int, int, int], ...]  # (lower, upper, node) with upper = lower + α_node

    @property
    def maximum(self) -> int:
        top = max(r.height for r in self.elements)
        tops = [k for k, r in enumerate(self.elements) if r.height == top]
        assert len(tops) == 1
        return tops[0]

    def index(self, coords: Sequence[int]) -> int:
        return self._index()[tuple(coords)]

    def _index(self) -> dict[Vector, int]:
        return {r.coords: k for k, r in enumerate(self.elements)}

    def count_maximal_chains(self) -> int:
        """Saturated chains from a simple root up to the highest root."""
        ways = [0] * len(self.elements)
        up: dict[int, list[int]] = {}
        for lo, hi, _ in self.covers:
            up.setdefault(lo, []).append(hi)
        for k in sorted(range(len(self.elements)), key=lambda k: -self.elements[k].height):
            ways[k] = 1 if k == self.maximum else sum(ways[h] for h in up.get(k, []))
        return sum(ways[k] for k, r in enumerate(self.elements) if r.height == 1)

    def maximal_chains(self) -> Iterator[list[int]]:
        up: dict[int, list[int]] = {}
        for lo, hi, _ in self.covers:
            up.setdefault(lo, []).append(hi)
        top = self.maximum

        def walk(path: list[int]) -> Iterator[list[int]]:
            if path[-1] == top:
                yield list(path)
                return
            for h in up.get(path[-1], []):
                path.append(h)
                yield from walk(path)
                path.pop()

        for k, r in enumerate(self.elements):
            if r.height == 1:
                yield from walk([k])


def _positive_roots(C: IntMatrix, L: Sequence[int]) -> RootPoset:
    n = C.rows
    Ct = C.T

    def make(x: Vector) -> Root:
        norm = sum(x[i] * x[j] * C[i, j] * L[j] for i in range(n) for j in range(n)) // 2
        return Root(x, Ct.apply(x), norm)

    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    known: dict[Vector, Root] = {x: make(x) for x in simple}
    covers: list[tuple[Vector, Vector, int]] = []
    level = list(simple)
    while level:
        nxt: list[Vector] = []
        for x in level:
            w = known[x].weights
            for i in range(n):
                # α_i-string through x: x - pα_i, ..., x + qα_i with p - q = (x, α_i^∨)
                p = 0
                y = list(x)
                while True:
                    y[i] -= 1
                    if tuple(y) in known:
                        p += 1
                    else:
                        break
                if p - w[i] > 0:
                    z = list(x)
                    z[i] += 1
                    z = tuple(z)
                    if z not in known:
                        known[z] = make(z)
                        nxt.append(z)
                    covers.append((x, z, i + 1))
        level = sorted(set(nxt))
    order = sorted(known, key=lambda x: (sum(x), x))
    idx = {x: k for k, x in enumerate(order)}
    return RootPoset(
        tuple(known[x] for x in order),
        tuple(sorted({(idx[a], idx[b], i) for a, b, i in covers})),
    )


@dataclass(frozen=True)
class RootSystemData:
    type: DynkinType | None
    cartan: IntMatrix
    lengths: tuple[int, ...]
    poset: RootPoset
    highest_root: int
    highest_short_root: int
    extended_cartan: IntMatrix
    marks: Vector  # δ, with δ_0 = 1
    dual_marks: Vector  # δ^∨, with δ^∨_0 = 1
    phi: Vector  # right kernel of the extended Cartan matrix, φ_0 = 1
    minuscule_nodes: frozenset[int]
    coxeter_number: int
    index_of_connection: int

    @property
    def rank(self) -> int:
        return self.cartan.rows

    @property
    def positive_roots(self) -> tuple[Root, ...]:
        return self.poset.elements

    @property
    def alpha_tilde(self) -> Root:
        return self.poset.elements[self.highest_root]

    @property
    def alpha_star(self) -> Root:
        return self.poset.elements[self.highest_short_root]

    @property
    def weyl_vector(self) -> Vector:
        return (1,) * self.rank

    @property
    def name(self) -> str:
        return str(self.type) if self.type else "custom"


def _extended(C: IntMatrix, L: Sequence[int], theta: Root) -> IntMatrix:
    """Extended matrix for α_0 = -θ: entries (α_i, α_j^∨) over i, j = 0..ℓ."""
    n = C.rows
    x = theta.coords
    rows = [[2] + [-w for w in theta.weights]]
    for i in range(n):
        pair = Fraction(sum(x[k] * C[i, k] * L[k] for k in range(n)), theta.norm)
        if pair.denominator != 1:
            raise AssertionError("extended Cartan entry is not integral")
        rows.append([-int(pair)] + list(C.row(i)))
    return IntMatrix.from_rows(rows)


def root_system_from_cartan(C: IntMatrix, t: DynkinType | None = None) -> RootSystemData:
    L = symmetrizer(C)
    poset = _positive_roots(C, L)
    top = poset.maximum
    short = min(r.norm for r in poset.elements)
    shorts = [k for k, r in enumerate(poset.elements) if r.norm == short]
    hs = max(shorts, key=lambda k: poset.elements[k].height)
    theta, star = poset.elements[top], poset.elements[hs]
    n = C.rows
    ext = _extended(C, L, theta)
    delta = (1,) + theta.coords
    phi = (1,) + tuple(int(Fraction(theta.coords[i] * L[i], theta.norm)) for i in range(n))
    dual = (1,) + tuple(int(Fraction(star.coords[i] * L[i], star.norm)) for i in range(n))
    f = determinant(C)
    return RootSystemData(
        type=t,
        cartan=C,
        lengths=L,
        poset=poset,
        highest_root=top,
        highest_short_root=hs,
        extended_cartan=ext,
        marks=delta,
        dual_marks=dual,
        phi=phi,
        minuscule_nodes=frozenset(i for i in range(1, n + 1) if dual[i] == 1),
        coxeter_number=1 + sum(delta[1:]),
        index_of_connection=abs(f),
    )


@lru_cache(maxsize=None)
def _root_system(t: DynkinType) -> RootSystemData:
    return root_system_from_cartan(cartan_matrix(t), t)


def root_system(t: DynkinType | str) -> RootSystemData:
    return _root_system(DynkinType.parse(t))


def dual_type(t: DynkinType | str) -> DynkinType:
    t = DynkinType.parse(t)
    return DynkinType({"B": "C", "C": "B"}.get(t.family, t.family), t.rank)


def dual_root_system(t: DynkinType | str) -> RootSystemData:
    """Φ^∨ with the same node numbering: its Cartan matrix is Cᵗ."""
    t = DynkinType.parse(t)
    return root_system_from_cartan(cartan_matrix(t).T, dual_type(t))


def positive_roots(t: DynkinType | str) -> RootPoset:
    return root_system(t).poset


def highest_roots(t: DynkinType | str) -> tuple[Root, Root]:
    R = root_system(t)
    return R.alpha_tilde, R.alpha_star


def minuscule_dominant_weights(t: DynkinType | str) -> frozenset[int]:
    return root_system(t).minuscule_nodes


def chip_system(t: DynkinType | str) -> chipfire.ChipSystem:
    return _chip_system(DynkinType.parse(t))


@lru_cache(maxsize=None)
def _chip_system(t: DynkinType) -> chipfire.ChipSystem:
    return chipfire.certify(cartan_matrix(t))


def unit(n: int, i: int) -> Vector:
    return tuple(int(j == i - 1) for j in range(n))


@dataclass(frozen=True)
class TheoremReport:
    type: str
    minuscule_nodes: tuple[int, ...]
    superstables: tuple[Vector, ...]
    recurrents: tuple[Vector, ...]
    expected_superstables: tuple[Vector, ...]
    expected_recurrents: tuple[Vector, ...]

    @property
    def passed(self) -> bool:
        return (
            self.superstables == self.expected_superstables
            and self.recurrents == self.expected_recurrents
        )

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "minuscule_nodes": list(self.minuscule_nodes),
            "superstables": [list(v) for v in self.superstables],
            "recurrents": [list(v) for v in self.recurrents],
            "passed": self.passed,
        }


def verify_minuscule_classification(t: DynkinType | str, guard: int | None = None) -> TheoremReport:
    """Enumerate recurrents/superstables of the Cartan matrix and compare with the minuscule-node prediction."""
    t = DynkinType.parse(t)
    R = root_system(t)
    sys = chip_system(t)
    n = R.rank
    mins = sorted(R.minuscule_nodes)
    exp_s = sorted([(0,) * n] + [unit(n, i) for i in mins])
    one = (1,) * n
    exp_r = sorted([one] + [tuple(a - b for a, b in zip(one, unit(n, i))) for i in mins])
    return TheoremReport(
        type=str(t),
        minuscule_nodes=tuple(mins),
        superstables=tuple(chipfire.superstable_representatives(sys, guard)),
        recurrents=tuple(chipfire.recurrent_representatives(sys, guard)),
        expected_superstables=tuple(exp_s),
        expected_recurrents=tuple(exp_r),
    )


def burning_configurations_cartan(t: DynkinType | str, b: Sequence[int]) -> bool:
    """b is burning iff b ≠ 0, b ≥ 0 and b lies in the root lattice im(Cᵗ)."""
    sys = chip_system(t)
    b = tuple(b)
    if len(b) != sys.size:
        raise ValueError("vector length does not match the rank")
    return any(b) and all(x >= 0 for x in b) and sys.lattice.contains(b)


@dataclass(frozen=True)
class RhoChain:
    states: tuple[Vector, ...]  # ρ + α̃, ..., ρ
    record: chipfire.FiringRecord
    chain: tuple[Vector, ...]  # β_1 < ... < β_{h-1} = α̃, simple-root coordinates


def stabilization_chain_from_rho(t: DynkinType | str) -> RhoChain:
    """Topple ρ + α̃ down to ρ along a maximal chain of the root order.

    At each root β, fire the lowest node i with (β, α_i^∨) > 0; then
    β - α_i is a positive root (or zero when β is simple).
    """
    t = DynkinType.parse(t)
    R = root_system(t)
    sys = chip_system(t)
    n = R.rank
    rho = R.weyl_vector
    beta = R.alpha_tilde.coords
    v = tuple(a + b for a, b in zip(rho, R.alpha_tilde.weights))
    states, seq, chain = [v], [], []
    index = {r.coords: r for r in R.positive_roots}
    while any(beta):
        chain.append(beta)
        w = index[beta].weights
        i = next(k for k in range(n) if w[k] > 0) + 1
        v = chipfire.topple(sys, v, i)
        seq.append(i)
        states.append(v)
        beta = tuple(b - int(k == i - 1) for k, b in enumerate(beta))
        if any(beta) and beta not in index:
            raise AssertionError("descent left the positive roots")
    if v != rho or not chipfire.is_stable(sys, v):
        raise AssertionError("chain did not end at ρ")
    counts = tuple(seq.count(i) for i in range(1, n + 1))
    return RhoChain(tuple(states), chipfire.FiringRecord(tuple(seq), counts), tuple(reversed(chain)))


def count_stabilization_sequences(sys: chipfire.ChipSystem, v: Sequence[int]) -> int:
    """Number of distinct single-firing sequences from v to its stabilization (brute force)."""
    memo: dict[Vector, int] = {}

    def go(u: Vector) -> int:
        if u in memo:
            return memo[u]
        ready = [i + 1 for i in range(sys.size) if u[i] >= sys.diag[i]]
        total = 1 if not ready else sum(go(chipfire.topple(sys, u, i)) for i in ready)
        memo[u] = total
        return total

    return go(tuple(v))


def numbers_fire(t: DynkinType | str | IntMatrix, u: Sequence[int], i: int) -> Vector:
    """Numbers-game firing at node i (1-based): u'_j = u_j - c_ij u_i, allowed when u_i < 0."""
    C = t if isinstance(t, IntMatrix) else cartan_matrix(t)
    return _fire_rows(C, u, i - 1)


def _fire_rows(M: IntMatrix, u: Sequence[int], k: int) -> Vector:
    if u[k] >= 0:
        raise NotNegativeAtNode(f"coordinate {k} is {u[k]}, not negative")
    row = M.row(k)
    return tuple(a - c * u[k] for a, c in zip(u, row))


@dataclass(frozen=True)
class LoopingSequence:
    type: str
    node: int
    dual_type: str
    alpha_star: Vector  # weight coordinates
    fired: tuple[int, ...]
    u: tuple[Vector, ...]  # u^(0), ..., u^(m)
    v: tuple[Vector, ...]  # ρ - λ, then v^(0), ..., v^(m)
    padded: tuple[Vector, ...]  # ũ^(-1), ũ^(0), ..., ũ^(m); position 0 is node 0
    padding: Vector  # the vector whose orthogonal complement holds every ũ
    dual_extended: IntMatrix

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "node": self.node,
            "dual_type": self.dual_type,
            "alpha_star_weights": list(self.alpha_star),
            "fired": list(self.fired),
            "numbers_game": [list(x) for x in self.u],
            "toppling": [list(x) for x in self.v],
            "padded": [list(x) for x in self.padded],
            "padding_vector": list(self.padding),
        }


def minuscule_toppling_and_looping(
    t: DynkinType | str, node: int, order: Sequence[int] | None = None
) -> LoopingSequence:
    """Numbers-game descent from λ - α* to λ, its toppling mirror, and the padded loop.

    `order`, when given, lists the nodes to fire; each choice is checked to
    be legal.  Otherwise the lowest node with a negative coordinate fires.
    """
    t = DynkinType.parse(t)
    R = root_system(t)
    n = R.rank
    if not 1 <= node <= n or node not in R.minuscule_nodes:
        raise NotMinuscule(f"node {node} is not minuscule for {t}")
    C = R.cartan
    lam = unit(n, node)
    star = R.alpha_star
    u = tuple(a - b for a, b in zip(lam, star.weights))
    us, fired = [u], []
    step = 0
    while any(x < 0 for x in u):
        if order is not None:
            if step >= len(order):
                raise ValueError("firing order ended before reaching λ")
            i = order[step]
            if u[i - 1] >= 0:
                raise NotNegativeAtNode(f"step {step + 1}: node {i} has coordinate {u[i - 1]}")
        else:
            i = next(k for k in range(n) if u[k] < 0) + 1
        if u[i - 1] != -1:
            raise AssertionError("minuscule descent fired a coordinate other than -1")
        u = numbers_fire(C, u, i)
        us.append(u)
        fired.append(i)
        step += 1
    if order is not None and step != len(order):
        raise ValueError("firing order is longer than the descent")
    if u != lam or len(fired) != star.height:
        raise AssertionError("descent did not end at λ after ht(α*) steps")

    sys = chip_system(t)
    rho = R.weyl_vector
    vs = [tuple(a - b for a, b in zip(rho, x)) for x in us]
    start = tuple(a - b for a, b in zip(rho, lam))
    if vs[0] != tuple(a + b for a, b in zip(start, star.weights)) or vs[-1] != start:
        raise AssertionError("toppling endpoints are wrong")
    for k, i in enumerate(fired):
        if chipfire.topple(sys, vs[k], i) != vs[k + 1]:
            raise InvalidToppling(f"step {k + 1} is not a toppling")

    pad = R.dual_marks
    padded = [(-sum(p * x for p, x in zip(pad[1:], w)),) + w for w in [lam] + us]
    D = dual_root_system(t)
    M = D.extended_cartan.T
    for k in range(1, len(padded)):
        prev, cur = padded[k - 1], padded[k]
        src = 0 if k == 1 else fired[k - 2]
        if _fire_rows(M, prev, src) != cur:
            raise AssertionError(f"padded step {k} is not a numbers firing at node {src}")
    for w in padded:
        if sum(p * x for p, x in zip(pad, w)) != 0:
            raise AssertionError("padded state left the orthogonal complement")
    return LoopingSequence(
        type=str(t),
        node=node,
        dual_type=str(dual_type(t)),
        alpha_star=star.weights,
        fired=tuple(fired),
        u=tuple(us),
        v=(start,) + tuple(vs),
        padded=tuple(padded),
        padding=pad,
        dual_extended=D.extended_cartan,
    )


def dynkin_layout(t: DynkinType | str, v: Sequence[int], padded: bool = False) -> str:
    """Text rendering of a node-indexed vector; E types use a two-row diagram layout."""
    t = DynkinType.parse(t)
    vals = [str(x) for x in v]
    if t.family != "E":
        return "[" + " ".join(vals) + "]"
    if padded:
        zero, vals = vals[0], vals[1:]
    bottom = [vals[0]] + vals[2:]
    width = max(len(s) for s in vals + ([zero] if padded else []))
    cells = [s.rjust(width) for s in bottom]
    col = 2  # node 4 is the third entry of the bottom row
    offset = sum(len(c) + 1 for c in cells[:col])
    lines = []
    if padded:
        lines.append(" " * offset + zero.rjust(width))
    lines.append(" " * offset + vals[1].rjust(width))
    lines.append(" ".join(cells))
    return "\n".join(lines)
