"""Exact arithmetic in the cyclotomic field Q(ζ_N).

An element is stored by its coefficients on ζ^0, ..., ζ^{φ(N)-1} after
reduction modulo the N-th cyclotomic polynomial, so equal numbers have
equal representations.  Elements of different levels are lifted to the
lcm level before combining.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Sequence


@lru_cache(maxsize=None)
def _phi(N: int) -> tuple[int, ...]:
    """Coefficients of Φ_N, lowest degree first."""
    from sympy import Poly, cyclotomic_poly, symbols  # deferred: sympy is slow to import

    x = symbols("x")
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(N, x), x).all_coeffs()))


@lru_cache(maxsize=None)
def _power_table(N: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reduced coordinates of ζ_N^k for k = 0..N-1."""
    phi = _phi(N)
    d = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * d
    cur[0] = Fraction(1)
    for _ in range(N):
        rows.append(tuple(cur))
        # multiply by ζ: shift up, then fold the ζ^d term using Φ_N (monic)
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(d):
                cur[i] -= top * phi[i]
    return tuple(rows)


class Cyclotomic:
    __slots__ = ("N", "coeffs")

    def __init__(self, N: int, coeffs: Sequence = ()) -> None:
        d = len(_phi(N)) - 1
        c = [Fraction(x) for x in coeffs]
        if len(c) > d:
            raise ValueError("use Cyclotomic.from_powers for unreduced input")
        self.N = N
        self.coeffs = tuple(c + [Fraction(0)] * (d - len(c)))

    @classmethod
    def from_powers(cls, N: int, powers: Sequence, den: int = 1) -> Cyclotomic:
        """The number (Σ_k powers[k] ζ_N^k) / den for any length of `powers`."""
        table = _power_table(N)
        d = len(table[0])
        acc = [Fraction(0)] * d
        for k, a in enumerate(powers):
            if a:
                row = table[k % N]
                for i in range(d):
                    acc[i] += Fraction(a) * row[i]
        return cls(N, [x / den for x in acc])

    @classmethod
    def rational(cls, q, N: int = 1) -> Cyclotomic:
        return cls.from_powers(N, [q])

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> Cyclotomic:
        p = [0] * N
        p[k % N] = 1
        return cls.from_powers(N, p)

    def lift(self, M: int) -> Cyclotomic:
        """The same number viewed in Q(ζ_M), where N divides M."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError("target level must be a multiple")
        step = M // self.N
        powers = [Fraction(0)] * M
        for k, a in enumerate(self.coeffs):
            powers[k * step] += a
        return Cyclotomic.from_powers(M, powers)

    def _pair(self, other) -> tuple[Cyclotomic, Cyclotomic]:
        if not isinstance(other, Cyclotomic):
            other = Cyclotomic.rational(other, self.N)
        M = lcm(self.N, other.N)
        return self.lift(M), other.lift(M)

    def __add__(self, other) -> Cyclotomic:
        a, b = self._pair(other)
        return Cyclotomic(a.N, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> Cyclotomic:
        return Cyclotomic(self.N, [-x for x in self.coeffs])

    def __sub__(self, other) -> Cyclotomic:
        a, b = self._pair(other)
        return Cyclotomic(a.N, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other) -> Cyclotomic:
        return (-self) + other

    def __mul__(self, other) -> Cyclotomic:
        if not isinstance(other, Cyclotomic):
            q = Fraction(other)
            return Cyclotomic(self.N, [q * x for x in self.coeffs])
        if other.is_rational():
            return self * other.to_rational()
        if self.is_rational():
            return other * self.to_rational()
        a, b = self._pair(other)
        prod = [Fraction(0)] * (2 * len(a.coeffs))
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyclotomic.from_powers(a.N, prod)

    __rmul__ = __mul__

    def __truediv__(self, q) -> Cyclotomic:
        q = Fraction(q)
        return Cyclotomic(self.N, [x / q for x in self.coeffs])

    def __pow__(self, k: int) -> Cyclotomic:
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = Cyclotomic.rational(1, self.N)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> Cyclotomic:
        """Complex conjugation ζ^k -> ζ^{N-k}."""
        return self.galois(-1)

    def galois(self, s: int) -> Cyclotomic:
        """The automorphism ζ -> ζ^s (s coprime to N)."""
        if gcd(s, self.N) != 1:
            raise ValueError("exponent must be coprime to the level")
        powers = [Fraction(0)] * self.N
        for k, a in enumerate(self.coeffs):
            powers[(k * s) % self.N] += a
        return Cyclotomic.from_powers(self.N, powers)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyclotomic):
            try:
                other = Cyclotomic.rational(other, self.N)
            except (TypeError, ValueError):
                return NotImplemented
        a, b = self._pair(other)
        return a.coeffs == b.coeffs

    __hash__ = None  # equality crosses levels, so no consistent hash

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def is_integer(self) -> bool:
        return self.is_rational() and self.to_rational().denominator == 1

    def __complex__(self) -> complex:
        import cmath

        return sum(
            (complex(a) * cmath.exp(2j * cmath.pi * k / self.N) for k, a in enumerate(self.coeffs)),
            0j,
        )

    def __repr__(self) -> str:
        terms = [f"{a}*z{self.N}^{k}" if k else f"{a}" for k, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        den = lcm(*(a.denominator for a in self.coeffs)) if self.coeffs else 1
        return {"num": [int(a * den) for a in self.coeffs], "den": den}
