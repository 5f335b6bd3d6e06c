"""McKay-Cartan matrices of finite group representations.

A representation gamma is given by its multiplicities over Irr(G), as a
vector of nonnegative integers.  Everything below is exact: character
values are cyclotomic numbers and all lattice work is done over Z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Sequence

from . import chipfire
from .chartable import CharacterTable, abelian_character_table
from .cyclotomic import Cyclotomic
from .errors import (
    CorruptTable,
    GeneratorsInvalid,
    KernelCheckFailed,
    NegativeInput,
    NoMatchingLinearCharacter,
    NotAvalancheFinite,
    NotDegreeZero,
    NotInSL,
    NotIntegral,
    PresentationsDisagree,
)
from .intlinalg import (
    AbelianGroupInvariants,
    ImageLattice,
    IntMatrix,
    Vector,
    arborescence_count,
    cokernel_invariants,
    dot,
    leading_principal_minors,
    strike,
)


@dataclass(frozen=True)
class VirtualCharacter:
    coeffs: Vector

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))

    @property
    def is_genuine(self) -> bool:
        return all(a >= 0 for a in self.coeffs)

    def degree(self, table: CharacterTable) -> int:
        return dot(self.coeffs, table.degrees)

    def __add__(self, other: VirtualCharacter) -> VirtualCharacter:
        return VirtualCharacter(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


def _gamma(table: CharacterTable, gamma) -> VirtualCharacter:
    g = gamma if isinstance(gamma, VirtualCharacter) else VirtualCharacter(tuple(gamma))
    if len(g.coeffs) != table.size:
        raise ValueError(f"gamma needs {table.size} coefficients, got {len(g.coeffs)}")
    if not g.is_genuine:
        raise NegativeInput("gamma must have nonnegative coefficients")
    return g


def _as_integer(x: Cyclotomic, what: str) -> int:
    if not x.is_rational():
        raise NotIntegral(f"{what} = {x} is not rational")
    q = x.to_rational()
    if q.denominator != 1 or q < 0:
        raise NotIntegral(f"{what} = {q} is not a nonnegative integer")
    return int(q)


def tensor_multiplicities(table: CharacterTable, gamma) -> IntMatrix:
    """m_ij = multiplicity of chi_j in chi_i (x) gamma."""
    g = _gamma(table, gamma)
    chi_g = table.character_of(g.coeffs)
    w = [chi_g[c] * Fraction(cl.size, table.order) for c, cl in enumerate(table.classes)]
    rows = []
    for i, row in enumerate(table.characters):
        a = [w[c] * row[c] for c in range(len(w))]
        out = []
        for j, conj in enumerate(table.conjugates):
            acc = Cyclotomic.rational(0, table.exponent)
            for ac, bc in zip(a, conj):
                acc = acc + ac * bc
            out.append(_as_integer(acc, f"m[{i},{j}]"))
        rows.append(out)
    return IntMatrix.from_rows(rows)


def is_faithful(table: CharacterTable, gamma) -> tuple[bool, tuple[int, ...]]:
    """(faithful?, kernel classes) where the kernel is {c : chi_gamma(c) = n}."""
    g = _gamma(table, gamma)
    vals = table.character_of(g.coeffs)
    n = g.degree(table)
    ker = tuple(c for c, v in enumerate(vals) if v == n)
    return ker == (0,), ker


@dataclass(frozen=True, eq=False)
class McKayData:
    table: CharacterTable
    gamma: VirtualCharacter
    n: int
    M: IntMatrix
    Ctilde: IntMatrix
    C: IntMatrix
    delta_e: Vector
    dual_involution: tuple[int, ...]
    kernel_classes: tuple[int, ...]
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def faithful(self) -> bool:
        return self.kernel_classes == (0,)

    @property
    def size(self) -> int:
        return self.table.size

    @property
    def image_lattice(self) -> ImageLattice:
        """im(C~^t) inside Z^{l+1}."""
        if "lattice" not in self._memo:
            self._memo["lattice"] = ImageLattice(self.Ctilde.T)
        return self._memo["lattice"]

    def to_json(self) -> dict:
        return {
            "group": self.table.name,
            "gamma": list(self.gamma.coeffs),
            "n": self.n,
            "M": self.M.tolist(),
            "Ctilde": self.Ctilde.tolist(),
            "C": self.C.tolist(),
            "delta_e": list(self.delta_e),
            "faithful": self.faithful,
        }


def mckay_cartan(table: CharacterTable, gamma=None) -> McKayData:
    """Assemble M, C~ = nI - M and C = C~ with node 0 struck.

    Defaults to the table's natural gamma.  Every column delta^(g) of the
    character table is checked to be an eigenvector of C~ with eigenvalue
    n - chi_gamma(g); since those columns are independent, this pins M down.
    """
    if gamma is None:
        if table.natural_gamma is None:
            raise ValueError(f"{table.name} has no natural representation; pass gamma")
        gamma = table.natural_gamma
    g = _gamma(table, gamma)
    n = g.degree(table)
    M = tensor_multiplicities(table, g)
    k = table.size
    Ct = IntMatrix.from_rows([[(n if i == j else 0) - M[i, j] for j in range(k)] for i in range(k)])
    chi_g = table.character_of(g.coeffs)
    for c in range(len(table.classes)):
        col = [row[c] for row in table.characters]
        lam = chi_g[c] * -1 + n
        for i in range(k):
            lhs = Cyclotomic.rational(0, table.exponent)
            for j in range(k):
                if Ct[i, j]:
                    lhs = lhs + col[j] * Ct[i, j]
            if lhs != lam * col[i]:
                raise CorruptTable(f"eigenvector equation fails at class {table.classes[c].label}, row {i}")
    _, ker = is_faithful(table, g)
    return McKayData(
        table=table,
        gamma=g,
        n=n,
        M=M,
        Ctilde=Ct,
        C=strike(Ct, 0),
        delta_e=table.degrees,
        dual_involution=table.dual_involution,
        kernel_classes=ker,
    )


def chip_system(data: McKayData) -> chipfire.ChipSystem:
    if "system" not in data._memo:
        if not data.faithful:
            raise NotAvalancheFinite("gamma is not faithful, so C is singular")
        data._memo["system"] = chipfire.certify(data.C)
    return data._memo["system"]


def certify_avalanche_finite_mckay(data: McKayData) -> chipfire.AvalancheCertificate:
    """Certify C and, independently, that C + C^t is positive definite."""
    sys = chip_system(data)
    S = data.C + data.C.T
    if any(m <= 0 for m in leading_principal_minors(S)):
        raise NotAvalancheFinite("C + C^t is not positive definite")
    return sys.certificate


def critical_group(data: McKayData) -> AbelianGroupInvariants:
    """K(gamma), cross-checked across four presentations."""
    if not data.faithful:
        raise NotAvalancheFinite("gamma is not faithful")
    k = data.size
    K = cokernel_invariants(data.C)
    perp = chipfire.perp_quotient(data.Ctilde, data.delta_e)
    e0 = [1] + [0] * (k - 1)
    with_e0 = cokernel_invariants(IntMatrix.from_rows(list(data.Ctilde.entries) + [e0], k))
    full = cokernel_invariants(data.Ctilde)
    ok = K == perp == with_e0 and full == AbelianGroupInvariants(K.free_rank + 1, K.torsion)
    if not ok:
        raise PresentationsDisagree(f"coker(C^t)={K}, perp={perp}, mod e0={with_e0}, coker(C~^t)={full}")
    return K


def burning_config_b0(data: McKayData) -> chipfire.BurningCertificate:
    """b0 = (m_01, ..., m_0l); its firing vector is delta^(e) without node 0."""
    sys = chip_system(data)
    b0 = data.M.row(0)[1:]
    cert = chipfire.check_burning(sys, b0)
    if sum(cert.z) != sum(data.delta_e[1:]):
        raise AssertionError(f"firing total {sum(cert.z)} differs from {sum(data.delta_e[1:])}")
    return cert


# ---- degree-one characters and determinants ----


def det_character(table: CharacterTable, chi_index: int) -> int:
    """Index of the linear character det o chi, via Newton's identities."""
    d = table.degrees[chi_index]
    chi = table.characters[chi_index]
    vals = []
    for c in range(len(table.classes)):
        p = [chi[table.power(c, k)] for k in range(1, d + 1)]
        e = [Cyclotomic.rational(1, table.exponent)]
        for k in range(1, d + 1):
            acc = Cyclotomic.rational(0, table.exponent)
            for i in range(1, k + 1):
                term = e[k - i] * p[i - 1]
                acc = acc + term if i % 2 else acc - term
            e.append(acc / k)
        vals.append(e[d])
    for i in table.linear_indices:
        if all(a == b for a, b in zip(table.characters[i], vals)):
            return i
    raise NoMatchingLinearCharacter(f"det of character {chi_index} is not a row of {table.name}")


@dataclass(frozen=True)
class LinearCharacterGroup:
    """G^ = Hom(G, C^*) presented on generators e_a (a a linear row) with e_a + e_b = e_{ab}."""

    indices: tuple[int, ...]
    mult: tuple[tuple[int, ...], ...]  # positions into `indices`
    invariants: AbelianGroupInvariants
    relations: IntMatrix

    def position(self, chi_index: int) -> int:
        return self.indices.index(chi_index)


def linear_character_group(table: CharacterTable) -> LinearCharacterGroup:
    memo = table._memo
    if "ghat" in memo:
        return memo["ghat"]
    idx = table.linear_indices
    rows = table.characters
    mult = []
    for a in idx:
        line = []
        for b in idx:
            prod_vals = [x * y for x, y in zip(rows[a], rows[b])]
            hit = table.find_character(prod_vals)
            if hit is None or hit not in idx:
                raise CorruptTable("product of linear characters is not a linear character")
            line.append(idx.index(hit))
        mult.append(tuple(line))
    L = len(idx)
    rel = []
    for a in range(L):
        for b in range(a, L):
            r = [0] * L
            r[a] += 1
            r[b] += 1
            r[mult[a][b]] -= 1
            rel.append(r)
    triv = [0] * L
    triv[idx.index(0)] = 1
    rel.append(triv)
    R = IntMatrix.from_rows(rel, L)
    out = LinearCharacterGroup(idx, tuple(mult), cokernel_invariants(R), R)
    memo["ghat"] = out
    return out


def _ghat_lattice(table: CharacterTable) -> ImageLattice:
    if "ghat_lattice" not in table._memo:
        table._memo["ghat_lattice"] = ImageLattice(linear_character_group(table).relations.T)
    return table._memo["ghat_lattice"]


def _det_table(table: CharacterTable) -> tuple[int, ...]:
    if "dets" not in table._memo:
        table._memo["dets"] = tuple(det_character(table, i) for i in range(table.size))
    return table._memo["dets"]


def pi_matrix(table: CharacterTable) -> IntMatrix:
    """pi: Z^{l+1} -> Z^{|G^|}, e_i -> generator of det_{chi_i}."""
    gh = linear_character_group(table)
    dets = _det_table(table)
    cols = [[1 if gh.position(dets[i]) == a else 0 for i in range(table.size)] for a in range(len(gh.indices))]
    return IntMatrix.from_rows(cols, table.size)


def pi_is_trivial(table: CharacterTable, v: Sequence[int]) -> bool:
    return _ghat_lattice(table).contains(pi_matrix(table).apply(v))


def is_in_SL(data: McKayData) -> bool:
    """det_gamma = prod_i det_{chi_i}^{a_i} is the trivial character."""
    return pi_is_trivial(data.table, data.gamma.coeffs)


@dataclass(frozen=True)
class AbelianizationReport:
    pi: IntMatrix
    e0_trivial: bool
    kills_image: bool
    surjective: bool
    K: AbelianGroupInvariants
    Ghat: AbelianGroupInvariants
    isomorphism: bool

    @property
    def passed(self) -> bool:
        return self.e0_trivial and self.kills_image and self.surjective

    def to_json(self) -> dict:
        return {
            "pi": self.pi.tolist(),
            "e0_trivial": self.e0_trivial,
            "kills_image": self.kills_image,
            "surjective": self.surjective,
            "K": str(self.K),
            "Ghat": str(self.Ghat),
            "isomorphism": self.isomorphism,
            "passed": self.passed,
        }


def abelianization_map(data: McKayData) -> AbelianizationReport:
    """Check that pi induces a surjection K(gamma) -> G^ and whether it is bijective."""
    if not data.faithful:
        raise NotAvalancheFinite("gamma is not faithful")
    if not is_in_SL(data):
        raise NotInSL("det_gamma is not trivial")
    table = data.table
    P = pi_matrix(table)
    lat = _ghat_lattice(table)
    k = data.size
    e0_ok = lat.contains(P.apply([1] + [0] * (k - 1)))
    kills = all(lat.contains(P.apply(data.Ctilde.row(j))) for j in range(k))
    if not (e0_ok and kills):
        raise KernelCheckFailed("pi does not kill e0 and im(C~^t)")
    gh = linear_character_group(table)
    # image of pi is generated by the columns of P; surjective iff Z^L / (R + im P) = 0
    both = IntMatrix.from_rows(list(gh.relations.entries) + list(P.T.entries), len(gh.indices))
    surj = cokernel_invariants(both) == AbelianGroupInvariants()
    K = critical_group(data)
    iso = surj and K.order == gh.invariants.order
    return AbelianizationReport(P, e0_ok, kills, surj, K, gh.invariants, iso)


# ---- representation ring and the rng I(gamma) ----


def structure_constants(table: CharacterTable) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """N[i][j][k] with chi_i chi_j = sum_k N[i][j][k] chi_k."""
    if "structure" in table._memo:
        return table._memo["structure"]
    k = table.size
    rows = table.characters
    scale = [Fraction(cl.size, table.order) for cl in table.classes]
    N = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            pw = [rows[i][c] * rows[j][c] * scale[c] for c in range(len(scale))]
            out = []
            for kk, conj in enumerate(table.conjugates):
                acc = Cyclotomic.rational(0, table.exponent)
                for a, b in zip(pw, conj):
                    acc = acc + a * b
                out.append(_as_integer(acc, f"N[{i},{j},{kk}]"))
            N[i][j] = N[j][i] = tuple(out)
    res = tuple(tuple(r) for r in N)
    table._memo["structure"] = res
    return res


def ring_multiply(table: CharacterTable, x: Sequence[int], y: Sequence[int]) -> Vector:
    """Product in R(G) on the basis Irr(G)."""
    N = structure_constants(table)
    k = table.size
    out = [0] * k
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                if b:
                    ab = a * b
                    for kk, c in enumerate(N[i][j]):
                        if c:
                            out[kk] += ab * c
    return tuple(out)


@dataclass(frozen=True)
class RngElement:
    """A coset of im(C~^t), stored by its canonical representative."""

    rep: Vector

    def to_json(self) -> list[int]:
        return list(self.rep)


def rng_element(data: McKayData, x: Sequence[int]) -> RngElement:
    if len(x) != data.size:
        raise ValueError(f"expected {data.size} coordinates")
    if dot(x, data.delta_e):
        raise NotDegreeZero("element does not have degree 0")
    return RngElement(data.image_lattice.canonical(x))


def rng_multiply(data: McKayData, x, y) -> RngElement:
    xv = x.rep if isinstance(x, RngElement) else tuple(x)
    yv = y.rep if isinstance(y, RngElement) else tuple(y)
    for v in (xv, yv):
        if len(v) != data.size:
            raise ValueError(f"expected {data.size} coordinates")
        if dot(v, data.delta_e):
            raise NotDegreeZero("rng elements must have degree 0")
    return RngElement(data.image_lattice.canonical(ring_multiply(data.table, xv, yv)))


def rng_is_zero(data: McKayData, x) -> bool:
    v = x.rep if isinstance(x, RngElement) else tuple(x)
    return data.image_lattice.contains(v)


def rng_power(data: McKayData, x, k: int) -> RngElement:
    if k < 1:
        raise ValueError("the rng has no unit, so powers start at 1")
    out = x if isinstance(x, RngElement) else rng_element(data, x)
    for _ in range(k - 1):
        out = rng_multiply(data, out, x)
    return out


def u_element(data: McKayData, i: int = 1) -> Vector:
    """e_i - deg(chi_i) e_0, a generator of the degree-0 part."""
    v = [0] * data.size
    v[i] += 1
    v[0] -= data.delta_e[i]
    return tuple(v)


def binomial_relation_holds(data: McKayData, u: Sequence[int], m: int) -> bool:
    """u^m + sum_{k<m} binom(m, k) u^k = 0 in I(gamma)."""
    total = [0] * data.size
    p = tuple(u)
    for k in range(1, m + 1):
        coef = 1 if k == m else comb(m, k)
        total = [t + coef * a for t, a in zip(total, p)]
        p = ring_multiply(data.table, p, u)
    return rng_is_zero(data, total)


@dataclass(frozen=True)
class ProductsReport:
    pairs: int
    pi_kills_products: bool
    isomorphism: bool
    products_zero: bool | None

    @property
    def passed(self) -> bool:
        return self.pi_kills_products and (self.products_zero is not False)

    def to_json(self) -> dict:
        return {
            "pairs": self.pairs,
            "pi_kills_products": self.pi_kills_products,
            "isomorphism": self.isomorphism,
            "products_zero": self.products_zero,
            "passed": self.passed,
        }


def verify_products_annihilated(data: McKayData) -> ProductsReport:
    """pi kills every product of generators e_i - deg_i e_0; when K ~ G^ the products vanish."""
    rep = abelianization_map(data)
    gens = [u_element(data, i) for i in range(1, data.size)]
    kills, zero, pairs = True, True, 0
    for a in range(len(gens)):
        for b in range(a, len(gens)):
            pr = ring_multiply(data.table, gens[a], gens[b])
            pairs += 1
            kills &= pi_is_trivial(data.table, pr)
            if rep.isomorphism:
                zero &= rng_is_zero(data, pr)
    return ProductsReport(pairs, kills, rep.isomorphism, zero if rep.isomorphism else None)


# ---- symmetries ----


def symmetry_checks(data: McKayData) -> dict[str, bool]:
    """C~_ij = C~_{phi(i) phi(j)} for linear phi, and C~_ij = C~_{j* i*}."""
    t = data.table
    k = data.size
    Ct = data.Ctilde
    star = data.dual_involution
    dual_ok = all(Ct[i, j] == Ct[star[j], star[i]] for i in range(k) for j in range(k))
    lin_ok = True
    for phi in t.linear_indices:
        perm = []
        for i in range(k):
            hit = t.find_character([a * b for a, b in zip(t.characters[i], t.characters[phi])])
            if hit is None:
                raise CorruptTable("product with a linear character is not irreducible")
            perm.append(hit)
        lin_ok &= all(Ct[i, j] == Ct[perm[i], perm[j]] for i in range(k) for j in range(k))
    return {"dual_symmetry": dual_ok, "linear_symmetry": lin_ok}


# ---- abelian groups and Cayley digraphs ----


@dataclass(frozen=True)
class CayleyReport:
    invariants: tuple[int, ...]
    generators: tuple[tuple[int, ...], ...]
    order: int
    arborescences: int
    K: AbelianGroupInvariants
    A: AbelianGroupInvariants
    isomorphic: bool
    mckay_matches: bool | None

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def passed(self) -> bool:
        if self.mckay_matches is False or self.arborescences != self.K.order:
            return False
        if self.r >= 3:
            return self.arborescences > self.order
        return self.arborescences == self.order and self.isomorphic

    def to_json(self) -> dict:
        return {
            "invariants": list(self.invariants),
            "generators": [list(g) for g in self.generators],
            "order": self.order,
            "arborescences": self.arborescences,
            "K": str(self.K),
            "A": str(self.A),
            "isomorphic": self.isomorphic,
            "mckay_matches": self.mckay_matches,
            "passed": self.passed,
        }


def _normalize_generators(invariants: Sequence[int], generators) -> tuple[tuple[int, ...], ...]:
    out = []
    for g in generators:
        g = (g,) if isinstance(g, int) else tuple(g)
        if len(g) != len(invariants):
            raise GeneratorsInvalid(f"generator {g} has the wrong length")
        out.append(tuple(a % n for a, n in zip(g, invariants)))
    return tuple(out)


def cayley_laplacian(invariants: Sequence[int], generators) -> tuple[IntMatrix, list[tuple[int, ...]]]:
    """Laplacian rI - adjacency of the Cayley digraph with arcs x -> x + a_k (lexicographic order)."""
    inv = tuple(int(n) for n in invariants)
    gens = _normalize_generators(inv, generators)
    elems = list(product(*(range(n) for n in inv)))
    pos = {x: i for i, x in enumerate(elems)}
    size = len(elems)
    L = [[0] * size for _ in range(size)]
    for x in elems:
        i = pos[x]
        for g in gens:
            j = pos[tuple((a + b) % n for a, b, n in zip(x, g, inv))]
            L[i][i] += 1
            L[i][j] -= 1
    return IntMatrix.from_rows(L, size), elems


def _generated_subgroup_size(invariants: Sequence[int], gens) -> int:
    zero = tuple(0 for _ in invariants)
    seen = {zero}
    todo = [zero]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple((a + b) % n for a, b, n in zip(x, g, invariants))
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen)


def cayley_digraph_check(invariants: Sequence[int], generators, via_mckay: bool = False) -> CayleyReport:
    """Arborescences toward 0 in the Cayley digraph versus |A|.

    With via_mckay the McKay-Cartan matrix of the matching sum of characters
    is also built and compared with the Laplacian entry by entry.
    """
    inv = tuple(int(n) for n in invariants)
    if not inv or any(n < 1 for n in inv):
        raise GeneratorsInvalid("invariants must be positive integers")
    gens = _normalize_generators(inv, generators)
    order = 1
    for n in inv:
        order *= n
    zero = tuple(0 for _ in inv)
    if not gens or any(g == zero for g in gens):
        raise GeneratorsInvalid("generators must be nonzero")
    if tuple(sum(col) % n for col, n in zip(zip(*gens), inv)) != zero:
        raise GeneratorsInvalid("generators must sum to zero")
    if _generated_subgroup_size(inv, gens) != order:
        raise GeneratorsInvalid("generators do not generate the group")
    L, elems = cayley_laplacian(inv, gens)
    Lr = strike(L, 0)
    a = arborescence_count(Lr)
    K = cokernel_invariants(Lr)
    A = AbelianGroupInvariants.from_cyclic_orders(inv)
    match = None
    if via_mckay:
        table = abelian_character_table(inv)
        gamma = [0] * order
        for g in gens:
            gamma[elems.index(g)] += 1
        match = mckay_cartan(table, gamma).Ctilde == L
    return CayleyReport(inv, gens, order, a, K, A, K == A, match)
