"""Exact arithmetic over the R-th roots of unity.

A root ``exp(2j*pi*r/R)`` is stored by its integer exponent ``r``.  A sum of
such roots is stored as a length-``R`` vector of integer multiplicities, and
it vanishes exactly when the polynomial with those coefficients is divisible
by the ``R``-th cyclotomic polynomial.  Nothing here touches floating point
except the ``to_complex`` helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "UnitRoot",
    "RootSum",
    "root_mul",
    "prime_factors",
    "cyclotomic_polynomial",
    "poly_remainder",
    "sum_is_zero",
    "reduction_matrix",
    "vanishing_rows",
    "vanishing_set_contains",
]


@dataclass(frozen=True, order=True)
class UnitRoot:
    exponent: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"modulus must be > 1, got {self.modulus}")
        if not 0 <= self.exponent < self.modulus:
            object.__setattr__(self, "exponent", self.exponent % self.modulus)

    def __mul__(self, other: UnitRoot) -> UnitRoot:
        return root_mul(self, other)

    def conj(self) -> UnitRoot:
        return UnitRoot(-self.exponent % self.modulus, self.modulus)

    def to_complex(self) -> complex:
        return complex(np.exp(2j * np.pi * self.exponent / self.modulus))

    @classmethod
    def one(cls, modulus: int) -> UnitRoot:
        return cls(0, modulus)


def root_mul(a: UnitRoot, b: UnitRoot) -> UnitRoot:
    if a.modulus != b.modulus:
        raise ValueError(f"modulus mismatch: {a.modulus} vs {b.modulus}")
    return UnitRoot((a.exponent + b.exponent) % a.modulus, a.modulus)


@dataclass(frozen=True)
class RootSum:
    """Signed multiset of R-th roots; ``coefficients[r]`` counts ``exp(2j*pi*r/R)``."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise ValueError("a RootSum needs modulus > 1")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    @property
    def modulus(self) -> int:
        return len(self.coefficients)

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], modulus: int) -> RootSum:
        counts = [0] * modulus
        for e in exponents:
            counts[int(e) % modulus] += 1
        return cls(tuple(counts))

    @classmethod
    def from_roots(cls, roots: Iterable[UnitRoot], modulus: int) -> RootSum:
        counts = [0] * modulus
        for r in roots:
            if r.modulus != modulus:
                raise ValueError(f"modulus mismatch: {r.modulus} vs {modulus}")
            counts[r.exponent] += 1
        return cls(tuple(counts))

    def __add__(self, other: RootSum) -> RootSum:
        if self.modulus != other.modulus:
            raise ValueError(f"modulus mismatch: {self.modulus} vs {other.modulus}")
        return RootSum(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> RootSum:
        return RootSum(tuple(-c for c in self.coefficients))

    def __sub__(self, other: RootSum) -> RootSum:
        return self + (-other)

    def to_complex(self) -> complex:
        R = self.modulus
        roots = np.exp(2j * np.pi * np.arange(R) / R)
        return complex(np.dot(np.asarray(self.coefficients, dtype=float), roots))


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order."""
    if n < 1:
        raise ValueError(f"expected a positive integer, got {n}")
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_divmod(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    # coefficient lists are lowest degree first; den must be monic
    num = list(num)
    dn = len(den) - 1
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    if len(num) <= dn:
        return [0], num
    quot = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c:
            quot[i - dn] = c
            for j in range(dn + 1):
                num[i - dn + j] -= c * den[j]
    return quot, num[:dn]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ValueError(f"order must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod(poly, cyclotomic_polynomial(d))
            assert not any(rem)
    return tuple(poly)


def poly_remainder(coefficients: Sequence[int], n: int) -> list[int]:
    """Remainder of the integer polynomial modulo the n-th cyclotomic polynomial."""
    return _poly_divmod(coefficients, cyclotomic_polynomial(n))[1]


def sum_is_zero(s: RootSum) -> bool:
    return not any(poly_remainder(s.coefficients, s.modulus))


@lru_cache(maxsize=None)
def reduction_matrix(R: int) -> np.ndarray:
    """Row r holds the coefficients of ``x**r mod Phi_R``.

    A count vector ``c`` represents a vanishing sum iff ``c @ reduction_matrix(R)``
    is the zero vector; this is the batched form of :func:`sum_is_zero`.
    """
    phi = cyclotomic_polynomial(R)
    deg = len(phi) - 1
    rows = []
    for r in range(R):
        mono = [0] * r + [1]
        rem = poly_remainder(mono, R)
        rows.append(rem + [0] * (deg - len(rem)))
    red = np.array(rows, dtype=object)
    if max(abs(int(v)) for v in red.ravel()) < 2**20:
        red = red.astype(np.int64)
    red.setflags(write=False)
    return red


def vanishing_rows(counts: np.ndarray, R: int) -> np.ndarray:
    """Vectorised exact test over the last axis of an integer count array."""
    counts = np.asarray(counts)
    if counts.shape[-1] != R:
        raise ValueError(f"last axis must have length {R}")
    red = reduction_matrix(R)
    if red.dtype == object:
        counts = counts.astype(object)
    else:
        counts = counts.astype(np.int64)
    return ~np.any(counts @ red != 0, axis=-1)


def vanishing_set_contains(M: int, R: int) -> bool:
    """Whether some M roots of unity of order R sum to zero.

    True exactly when M is a non-negative integer combination of the
    distinct prime factors of R.
    """
    if M < 1 or R < 2:
        raise ValueError(f"need M >= 1 and R >= 2, got M={M}, R={R}")
    reach = [False] * (M + 1)
    reach[0] = True
    for p in prime_factors(R):
        for m in range(p, M + 1):
            if reach[m - p]:
                reach[m] = True
    return reach[M]
