"""Exact integer and rational linear algebra.

Everything here works on Python ints and `fractions.Fraction`, so there is
no overflow and no rounding.  The Smith normal form is the workhorse: every
cokernel, image-membership test and coset normal form in the package goes
through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import ParseError, RankDeficiencyNotOne, Singular

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix stored row-major as a tuple of row tuples."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("entries do not match the declared shape")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], cols: int | None = None) -> IntMatrix:
        data = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> IntMatrix:
        n = len(values)
        return cls(n, n, tuple(tuple(values[i] if i == j else 0 for j in range(n)) for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def diag(self) -> Vector:
        return tuple(self.entries[i][i] for i in range(min(self.rows, self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = other.T.entries
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return IntMatrix(
            self.rows,
            self.cols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> IntMatrix:
        return self.scale(-1)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self + (-other)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(tuple(k * a for a in r) for r in self.entries))

    def apply(self, v: Sequence[int]) -> Vector:
        """Matrix-vector product A·v."""
        if len(v) != self.cols:
            raise ValueError("vector length does not match column count")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[str(x) for x in r] for r in self.entries],
        }

    @classmethod
    def from_json(cls, obj: dict) -> IntMatrix:
        try:
            rows, cols = int(obj["rows"]), int(obj["cols"])
            data = tuple(tuple(int(str(x)) for x in r) for r in obj["entries"])
            return cls(rows, cols, data)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed matrix JSON: {exc}") from exc

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in self.entries) + "]"


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    @property
    def T(self) -> RationalMatrix:
        return RationalMatrix(self.cols, self.rows, tuple(zip(*self.entries)))

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.entries)

    def times(self, other: IntMatrix) -> RationalMatrix:
        cols = other.T.entries
        return RationalMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.entries),
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.entries for x in r)

    def to_int(self) -> IntMatrix:
        if not self.is_integral():
            raise ValueError("matrix has non-integral entries")
        return IntMatrix(self.rows, self.cols, tuple(tuple(int(x) for x in r) for r in self.entries))

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class SmithDecomposition:
    """U·A·V = S with U, V unimodular and diag(S) a divisibility chain."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> Vector:
        return self.S.diag()

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Z^free_rank x Z/d1 x ... x Z/dk with d1 | d2 | ... and every di >= 2."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        t = tuple(int(d) for d in self.torsion)
        object.__setattr__(self, "torsion", t)
        if self.free_rank < 0 or any(d < 2 for d in t):
            raise ValueError("invariant factors must be >= 2")
        if any(t[i + 1] % t[i] for i in range(len(t) - 1)):
            raise ValueError("invariant factors must form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int], free_rank: int = 0) -> AbelianGroupInvariants:
        """Canonical form of Z^free_rank x prod Z/n_i for arbitrary orders n_i >= 1."""
        orders = [int(n) for n in orders if int(n) != 1]
        if any(n <= 0 for n in orders):
            raise ValueError("cyclic orders must be positive")
        if not orders:
            return cls(free_rank, ())
        d = smith_normal_form(IntMatrix.diagonal(orders)).diagonal
        return cls(free_rank, tuple(x for x in d if x > 1))

    @classmethod
    def parse(cls, text: str) -> AbelianGroupInvariants:
        text = text.strip()
        if text in ("0", ""):
            return cls()
        free, tors = 0, []
        for part in text.split(" x "):
            part = part.strip()
            if part == "Z":
                free += 1
            elif part.startswith("Z^"):
                free += int(part[2:])
            elif part.startswith("Z/"):
                tors.append(int(part[2:]))
            else:
                raise ParseError(f"cannot parse group factor {part!r}")
        return cls.from_cyclic_orders(tors, free)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def order(self) -> int:
        if self.free_rank:
            raise ValueError("group is infinite")
        return reduce(lambda a, b: a * b, self.torsion, 1)

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " x ".join(parts) if parts else "0"


def _as_lists(A: IntMatrix) -> list[list[int]]:
    return [list(r) for r in A.entries]


def _freeze(rows: list[list[int]], ncols: int) -> IntMatrix:
    return IntMatrix(len(rows), ncols, tuple(tuple(r) for r in rows))


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    """Deterministic Smith normal form with transforms.

    Pivots on the smallest nonzero absolute value, ties broken by lowest
    (row, col).  Diagonal entries come out nonnegative.
    """
    m, n = A.rows, A.cols
    S = _as_lists(A)
    U = _as_lists(IntMatrix.identity(m))
    V = _as_lists(IntMatrix.identity(n))

    def swap_rows(a: int, b: int) -> None:
        S[a], S[b] = S[b], S[a]
        U[a], U[b] = U[b], U[a]

    def swap_cols(a: int, b: int) -> None:
        for R in (S, V):
            for r in R:
                r[a], r[b] = r[b], r[a]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        for R in (S, U):
            rs, rd = R[src], R[dst]
            for k in range(len(rd)):
                rd[k] += q * rs[k]

    def add_col(dst: int, src: int, q: int) -> None:
        for R in (S, V):
            for r in R:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                Si = S[i]
                for j in range(t, n):
                    a = Si[j]
                    if a and (best is None or abs(a) < best[0]):
                        best = (abs(a), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            p = S[t][t]
            clean = True
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // p))
                    clean = clean and S[i][t] == 0
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // p))
                    clean = clean and S[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(S[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return SmithDecomposition(_freeze(U, m), _freeze(S, n), _freeze(V, n))


def cokernel_invariants(A: IntMatrix) -> AbelianGroupInvariants:
    """Invariants of Z^cols modulo the row lattice of A, i.e. coker(A^t)."""
    snf = smith_normal_form(A)
    d = snf.diagonal
    rank = sum(1 for x in d if x)
    return AbelianGroupInvariants(A.cols - rank, tuple(x for x in d if x > 1))


def determinant(A: IntMatrix) -> int:
    """Fraction-free (Bareiss) determinant; the 0x0 determinant is 1."""
    if not A.is_square:
        raise ValueError("determinant needs a square matrix")
    n = A.rows
    if n == 0:
        return 1
    M = _as_lists(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pk = M[k][k]
        Mk = M[k]
        for i in range(k + 1, n):
            Mi = M[i]
            a = Mi[k]
            for j in range(k + 1, n):
                Mi[j] = (Mi[j] * pk - a * Mk[j]) // prev
        prev = pk
    return sign * M[n - 1][n - 1]


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    R = [r[:] for r in rows]
    pivots: list[int] = []
    if not R:
        return R, pivots
    ncols = len(R[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = 1 / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return R, pivots


def rank(A: IntMatrix) -> int:
    return smith_normal_form(A).rank


def exact_inverse(A: IntMatrix) -> RationalMatrix:
    """Gauss-Jordan inverse over Q; raises Singular when det(A) = 0."""
    if not A.is_square:
        raise ValueError("inverse needs a square matrix")
    n = A.rows
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(A.entries)]
    R, pivots = _rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise Singular("matrix is singular")
    return RationalMatrix(n, n, tuple(tuple(r[n:]) for r in R))


def primitive(v: Sequence) -> Vector:
    """Scale a rational vector to a primitive integer vector, first nonzero positive."""
    v = [Fraction(x) for x in v]
    den = lcm(*(x.denominator for x in v)) if v else 1
    ints = [int(x * den) for x in v]
    g = reduce(gcd, ints, 0)
    if g == 0:
        return tuple(ints)
    ints = [x // g for x in ints]
    first = next(x for x in ints if x)
    if first < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def nullspace_primitive(A: IntMatrix) -> Vector | None:
    """Primitive right null vector when the nullity is exactly one.

    Returns None for nonsingular A and raises RankDeficiencyNotOne when the
    nullity is two or more.
    """
    R, pivots = _rref([[Fraction(x) for x in r] for r in A.entries])
    free = [c for c in range(A.cols) if c not in pivots]
    if not free:
        return None
    if len(free) > 1:
        raise RankDeficiencyNotOne(f"nullity is {len(free)}")
    f = free[0]
    x = [Fraction(0)] * A.cols
    x[f] = Fraction(1)
    for row, c in zip(R, pivots):
        x[c] = -row[f]
    return primitive(x)


def integer_kernel_basis(A: IntMatrix) -> list[Vector]:
    """A Z-basis of {x in Z^cols : A·x = 0}, read off the SNF column transform."""
    snf = smith_normal_form(A)
    r = snf.rank
    return [snf.V.col(j) for j in range(r, A.cols)]


def arborescence_count(L_reduced: IntMatrix) -> int:
    """Matrix-tree count: det of the reduced Laplacian (1 for the empty matrix)."""
    return determinant(L_reduced)


def strike(A: IntMatrix, index: int) -> IntMatrix:
    """Delete row and column `index`."""
    if not (0 <= index < A.rows and index < A.cols):
        raise IndexError("index out of range")
    keep_r = [i for i in range(A.rows) if i != index]
    keep_c = [j for j in range(A.cols) if j != index]
    return IntMatrix(
        len(keep_r),
        len(keep_c),
        tuple(tuple(A.entries[i][j] for j in keep_c) for i in keep_r),
    )


def is_unimodular(A: IntMatrix) -> bool:
    return A.is_square and determinant(A) in (1, -1)


class ImageLattice:
    """The lattice im(A) inside Z^rows, with membership and coset normal forms.

    With U·A·V = S, a vector x lies in im(A) iff (U·x)_i is divisible by s_i
    for every i (entries past the rank must vanish).  Reducing U·x modulo the
    diagonal gives a canonical key per coset.
    """

    def __init__(self, A: IntMatrix) -> None:
        self.A = A
        self.snf = smith_normal_form(A)
        self.diagonal = tuple(self.snf.diagonal) + (0,) * (A.rows - len(self.snf.diagonal))
        self._Uinv: IntMatrix | None = None

    def _coords(self, x: Sequence[int]) -> Vector:
        if len(x) != self.A.rows:
            raise ValueError("vector length does not match the ambient lattice")
        return self.snf.U.apply(x)

    def contains(self, x: Sequence[int]) -> bool:
        y = self._coords(x)
        return all((yi == 0) if d == 0 else (yi % d == 0) for yi, d in zip(y, self.diagonal))

    def key(self, x: Sequence[int]) -> Vector:
        """Canonical coset label in SNF coordinates."""
        y = self._coords(x)
        return tuple(yi if d == 0 else yi % d for yi, d in zip(y, self.diagonal))

    def canonical(self, x: Sequence[int]) -> Vector:
        """Canonical coset representative as a vector in the original coordinates."""
        if self._Uinv is None:
            self._Uinv = exact_inverse(self.snf.U).to_int()
        return self._Uinv.apply(self.key(x))

    def quotient_invariants(self) -> AbelianGroupInvariants:
        free = sum(1 for d in self.diagonal if d == 0)
        return AbelianGroupInvariants(free, tuple(d for d in self.diagonal if d > 1))

    def solve(self, x: Sequence[int]) -> Vector:
        """Some integer w with A·w = x; raises ValueError when x is not in im(A)."""
        y = self._coords(x)
        if not self.contains(x):
            raise ValueError("vector is not in the image")
        n = self.A.cols
        w = [0] * n
        for i, d in enumerate(self.snf.diagonal):
            if d:
                w[i] = y[i] // d
        return self.snf.V.apply(w)


def leading_principal_minors(A: IntMatrix) -> list[int]:
    return [determinant(IntMatrix.from_rows([r[:k] for r in A.entries[:k]], k)) for k in range(1, A.rows + 1)]


def vec_sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vec_add(a: Sequence[int], b: Sequence[int]) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))
