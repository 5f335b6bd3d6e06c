"""Chip-firing on avalanche-finite matrices.

Nodes are numbered 1..ℓ; vectors are plain tuples whose
position i-1 holds node i.  Firing node i subtracts row i of C.
"""

from __future__ import annotations

import itertools
import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    InvalidToppling,
    NegativeInput,
    NotAvalancheFinite,
    NotCovering,
    NotInImage,
    NotNonnegative,
    NotZMatrix,
    RankDeficiencyNotOne,
    Singular,
    TooLarge,
)
from .intlinalg import (
    AbelianGroupInvariants,
    ImageLattice,
    IntMatrix,
    RationalMatrix,
    Vector,
    cokernel_invariants,
    exact_inverse,
    integer_kernel_basis,
    nullspace_primitive,
    strike,
)

DEFAULT_GUARD = 10**6


def enumeration_guard() -> int:
    """Upper bound on enumerated grid sizes; CRITLIB_GUARD overrides the default."""
    raw = os.environ.get("CRITLIB_GUARD")
    return int(raw) if raw else DEFAULT_GUARD


@dataclass(frozen=True)
class FiringRecord:
    sequence: tuple[int, ...]
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return len(self.sequence)

    def to_json(self) -> dict:
        return {"sequence": list(self.sequence), "counts": list(self.counts)}


@dataclass(frozen=True)
class AvalancheCertificate:
    witness_r: tuple[Fraction, ...]
    inverse_nonneg: bool


@dataclass(frozen=True)
class BurningCertificate:
    b: Vector
    z: Vector
    reached: frozenset[int]


@dataclass(frozen=True, eq=False)
class ChipSystem:
    C: IntMatrix
    inverse: RationalMatrix
    digraph: dict[int, tuple[int, ...]]
    diag: Vector
    vC: Vector
    certificate: AvalancheCertificate
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def size(self) -> int:
        return self.C.rows

    @property
    def lattice(self) -> ImageLattice:
        """im(C^t), the lattice of configurations equivalent to zero."""
        if "lattice" not in self._cache:
            self._cache["lattice"] = ImageLattice(self.C.T)
        return self._cache["lattice"]

    def equivalent(self, u: Sequence[int], v: Sequence[int]) -> bool:
        return self.lattice.contains(tuple(a - b for a, b in zip(u, v)))


def _check_square(C: IntMatrix) -> None:
    if not C.is_square or C.rows == 0:
        raise NotZMatrix("chip-firing needs a nonempty square matrix")


def certify(C: IntMatrix) -> ChipSystem:
    """Certify C as avalanche-finite via a nonnegative exact inverse."""
    _check_square(C)
    n = C.rows
    if any(C[i, j] > 0 for i in range(n) for j in range(n) if i != j):
        raise NotZMatrix("an off-diagonal entry is positive")
    try:
        inv = exact_inverse(C)
    except Singular as exc:
        raise NotAvalancheFinite("matrix is singular") from exc
    if any(x < 0 for r in inv.entries for x in r):
        raise NotAvalancheFinite("inverse has a negative entry")
    r = inv.apply((1,) * n)
    if any(x <= 0 for x in r) or any(
        sum((Fraction(a) * b for a, b in zip(row, r)), Fraction(0)) != 1 for row in C.entries
    ):
        raise NotAvalancheFinite("witness vector check failed")
    digraph = {i + 1: tuple(j + 1 for j in range(n) if j != i and C[i, j] < 0) for i in range(n)}
    diag = C.diag()
    return ChipSystem(
        C=C,
        inverse=inv,
        digraph=digraph,
        diag=diag,
        vC=tuple(d - 1 for d in diag),
        certificate=AvalancheCertificate(tuple(r), True),
    )


def _check_length(sys: ChipSystem, v: Sequence[int]) -> None:
    if len(v) != sys.size:
        raise ValueError(f"configuration has length {len(v)}, expected {sys.size}")


def is_stable(sys: ChipSystem, v: Sequence[int]) -> bool:
    return all(x < d for x, d in zip(v, sys.diag))


def topple(sys: ChipSystem, v: Sequence[int], i: int) -> Vector:
    """Fire node i (1-based): v' = v - row_i(C)."""
    _check_length(sys, v)
    if not 1 <= i <= sys.size:
        raise IndexError("node out of range")
    row = sys.C.row(i - 1)
    if v[i - 1] < row[i - 1]:
        raise InvalidToppling(f"node {i} holds {v[i - 1]} < {row[i - 1]} chips")
    return tuple(a - b for a, b in zip(v, row))


def stabilize(sys: ChipSystem, v: Sequence[int], strategy: str = "queue") -> tuple[Vector, FiringRecord]:
    """Topple until stable.

    strategy "queue" keeps a FIFO of unstable nodes and fires a dequeued
    node until it is stable; "max-surplus" fires one chip-move at a time at
    the node with the largest v_i - c_ii (lowest index on ties).  Both give
    the same output and counts by confluence.
    """
    _check_length(sys, v)
    if any(x < 0 for x in v):
        raise NegativeInput("stabilization needs a nonnegative configuration")
    n = sys.size
    cur = list(v)
    rows = sys.C.entries
    diag = sys.diag
    counts = [0] * n
    seq: list[int] = []
    if strategy == "queue":
        queue = deque(i for i in range(n) if cur[i] >= diag[i])
        queued = [cur[i] >= diag[i] for i in range(n)]
        while queue:
            i = queue.popleft()
            queued[i] = False
            k = cur[i] // diag[i]
            if k <= 0:
                continue
            row = rows[i]
            for j in range(n):
                if row[j]:
                    cur[j] -= k * row[j]
            counts[i] += k
            seq.extend([i + 1] * k)
            for j in sys.digraph[i + 1]:
                j -= 1
                if not queued[j] and cur[j] >= diag[j]:
                    queue.append(j)
                    queued[j] = True
    elif strategy == "max-surplus":
        while True:
            best, bi = -1, -1
            for i in range(n):
                s = cur[i] - diag[i]
                if s > best:
                    best, bi = s, i
            if best < 0:
                break
            row = rows[bi]
            for j in range(n):
                cur[j] -= row[j]
            counts[bi] += 1
            seq.append(bi + 1)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return tuple(cur), FiringRecord(tuple(seq), tuple(counts))


def avalanche_op(sys: ChipSystem, v: Sequence[int], i: int) -> Vector:
    """X_i(v) = stab(v + e_i)."""
    w = list(v)
    w[i - 1] += 1
    return stabilize(sys, w)[0]


def is_recurrent(sys: ChipSystem, v: Sequence[int]) -> bool:
    _check_length(sys, v)
    if any(x < 0 for x in v) or not is_stable(sys, v):
        return False
    out, _ = stabilize(sys, [a + d for a, d in zip(v, sys.diag)])
    return out == tuple(v)


def stable_grid_size(sys: ChipSystem) -> int:
    size = 1
    for d in sys.diag:
        size *= d
    return size


def stable_configs(sys: ChipSystem, guard: int | None = None) -> Iterator[Vector]:
    """All stable nonnegative configurations in lexicographic order."""
    guard = enumeration_guard() if guard is None else guard
    size = stable_grid_size(sys)
    if size > guard:
        raise TooLarge(f"{size} stable configurations exceed the guard {guard}")
    return itertools.product(*(range(d) for d in sys.diag))


def recurrent_representatives(sys: ChipSystem, guard: int | None = None) -> list[Vector]:
    """Recurrent configurations in lexicographic order (one per coset of im C^t)."""
    if "recurrents" not in sys._cache:
        sys._cache["recurrents"] = [v for v in stable_configs(sys, guard) if is_recurrent(sys, v)]
    return list(sys._cache["recurrents"])


def recurrents_by_forward_image(sys: ChipSystem, guard: int | None = None) -> list[Vector]:
    """Recurrents as {stab(u) : c_ii <= u_i < 2 c_ii}, an independent route."""
    guard = enumeration_guard() if guard is None else guard
    if stable_grid_size(sys) > guard:
        raise TooLarge("grid exceeds the guard")
    found = {stabilize(sys, u)[0] for u in itertools.product(*(range(d, 2 * d) for d in sys.diag))}
    return sorted(found)


def superstable_representatives(sys: ChipSystem, guard: int | None = None) -> list[Vector]:
    return sorted(tuple(c - a for c, a in zip(sys.vC, v)) for v in recurrent_representatives(sys, guard))


def is_superstable(sys: ChipSystem, u: Sequence[int]) -> bool:
    """u >= 0 and v^C - u recurrent."""
    _check_length(sys, u)
    if any(x < 0 for x in u):
        return False
    return is_recurrent(sys, tuple(c - a for c, a in zip(sys.vC, u)))


def superstable_box(sys: ChipSystem, u: Sequence[int]) -> Vector:
    """Entrywise bound on z >= 0 with u - C^t z >= 0.

    If w = u - C^t z >= 0 then z = C^{-t}u - C^{-t}w <= C^{-t}u, since
    C^{-1} is entrywise nonnegative.
    """
    bound = sys.inverse.T.apply(u)
    return tuple(max(0, int(b // 1)) for b in bound)


def is_superstable_direct(sys: ChipSystem, u: Sequence[int], guard: int | None = None) -> bool:
    """The definition checked literally over the finite box of candidate z."""
    _check_length(sys, u)
    if any(x < 0 for x in u):
        return False
    box = superstable_box(sys, u)
    guard = enumeration_guard() if guard is None else guard
    size = 1
    for b in box:
        size *= b + 1
    if size > guard:
        raise TooLarge("search box exceeds the guard")
    Ct = sys.C.T
    for z in itertools.product(*(range(b + 1) for b in box)):
        if any(z):
            w = Ct.apply(z)
            if all(a >= b for a, b in zip(u, w)):
                return False
    return True


def energy(sys: ChipSystem, u: Sequence[int]) -> Fraction:
    """E(u) = |C^{-1} u|^2, exactly."""
    x = sys.inverse.apply(u)
    return sum((a * a for a in x), Fraction(0))


def reachable(sys: ChipSystem, sources: Sequence[int]) -> frozenset[int]:
    seen = set(sources)
    todo = deque(sources)
    while todo:
        i = todo.popleft()
        for j in sys.digraph[i]:
            if j not in seen:
                seen.add(j)
                todo.append(j)
    return frozenset(seen)


def check_burning(sys: ChipSystem, b: Sequence[int]) -> BurningCertificate:
    _check_length(sys, b)
    b = tuple(int(x) for x in b)
    if any(x < 0 for x in b):
        raise NotNonnegative("burning configuration must be nonnegative")
    zq = sys.inverse.T.apply(b)
    if any(x.denominator != 1 for x in zq):
        raise NotInImage("b is not in im(C^t)")
    z = tuple(int(x) for x in zq)
    reached = reachable(sys, [i + 1 for i, x in enumerate(b) if x])
    if len(reached) != sys.size:
        missing = sorted(set(range(1, sys.size + 1)) - reached)
        raise NotCovering(f"nodes {missing} are not reachable from supp(b)")
    return BurningCertificate(b, z, reached)


def burn(sys: ChipSystem, cert: BurningCertificate, v: Sequence[int]) -> tuple[Vector, FiringRecord]:
    return stabilize(sys, [a + b for a, b in zip(v, cert.b)])


def recurrent_test_via_burning(sys: ChipSystem, b: Sequence[int] | BurningCertificate, v: Sequence[int]) -> bool:
    """A stable v is recurrent iff stab(v + b) = v.

    When v is recurrent the firing counts must equal the certificate's z;
    a mismatch raises AssertionError.
    """
    cert = b if isinstance(b, BurningCertificate) else check_burning(sys, b)
    if any(x < 0 for x in v) or not is_stable(sys, v):
        return False
    out, rec = burn(sys, cert, v)
    if out != tuple(v):
        return False
    if rec.counts != cert.z:
        raise AssertionError(f"firing counts {rec.counts} differ from z = {cert.z}")
    return True


def zero_coset_recurrent(sys: ChipSystem, guard: int | None = None) -> Vector:
    hits = [v for v in recurrent_representatives(sys, guard) if sys.lattice.contains(v)]
    if len(hits) != 1:
        raise AssertionError(f"expected one recurrent in the zero coset, found {len(hits)}")
    return hits[0]


def critical_group(sys: ChipSystem) -> AbelianGroupInvariants:
    """K(C) = coker(C^t)."""
    return cokernel_invariants(sys.C)


@dataclass(frozen=True)
class CokernelReport:
    delta: Vector
    gamma: Vector
    hypotheses_hold: bool
    coker_C: AbelianGroupInvariants
    coker_Ctilde: AbelianGroupInvariants
    perp_quotient: AbelianGroupInvariants
    relation_perp: bool
    relation_split: bool
    relation_perp_general: bool

    @property
    def passed(self) -> bool:
        """Both relations hold when the hypotheses do; the general one always."""
        if not self.relation_perp_general:
            return False
        return (self.relation_perp and self.relation_split) if self.hypotheses_hold else True

    def to_json(self) -> dict:
        return {
            "delta": list(self.delta),
            "gamma": list(self.gamma),
            "hypotheses_hold": self.hypotheses_hold,
            "coker_Ct": str(self.coker_C),
            "coker_Ctilde_t": str(self.coker_Ctilde),
            "delta_perp_mod_image": str(self.perp_quotient),
            "coker_Ct_is_perp_quotient": self.relation_perp,
            "coker_Ctilde_t_splits": self.relation_split,
            "coker_Ctilde_t_is_Z_plus_perp_quotient": self.relation_perp_general,
            "passed": self.passed,
        }


def perp_quotient(Ct: IntMatrix, delta: Sequence[int]) -> AbelianGroupInvariants:
    """(delta)^perp / im(Ct^t), where the rows of Ct span im(Ct^t) inside delta^perp."""
    basis = integer_kernel_basis(IntMatrix.from_rows([delta]))
    if not basis:
        return AbelianGroupInvariants()
    B = IntMatrix.from_rows(basis).T  # columns form a basis of delta^perp
    lat = ImageLattice(B)
    coords = []
    for r in Ct.entries:
        if not lat.contains(r):
            raise AssertionError("row of the extended matrix is not orthogonal to delta")
        coords.append(lat.solve(r))
    return cokernel_invariants(IntMatrix.from_rows(coords, len(basis)))


def extended_cokernel_relations(Ct: IntMatrix, strike_index: int = 0) -> CokernelReport:
    """Check the cokernel relations for an extended matrix."""
    if not Ct.is_square:
        raise ValueError("extended matrix must be square")
    delta = nullspace_primitive(Ct)
    gamma = nullspace_primitive(Ct.T)
    if delta is None or gamma is None:
        raise RankDeficiencyNotOne("extended matrix is nonsingular")
    C = strike(Ct, strike_index)
    kC = cokernel_invariants(C)
    kCt = cokernel_invariants(Ct)
    pq = perp_quotient(Ct, delta)
    hyp = delta[strike_index] == 1 and gamma[strike_index] == 1
    return CokernelReport(
        delta=delta,
        gamma=gamma,
        hypotheses_hold=hyp,
        coker_C=kC,
        coker_Ctilde=kCt,
        perp_quotient=pq,
        relation_perp=kC == pq,
        relation_split=kCt == AbelianGroupInvariants(kC.free_rank + 1, kC.torsion),
        relation_perp_general=kCt == AbelianGroupInvariants(pq.free_rank + 1, pq.torsion),
    )
