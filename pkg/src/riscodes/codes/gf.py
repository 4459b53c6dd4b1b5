"""Small finite fields GF(p**m), enough for quadratic-residue constructions."""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from riscodes.cyclotomic import prime_factors


def prime_power(q: int) -> tuple[int, int] | None:
    """``(p, m)`` with ``q == p**m``, or None when q is not a prime power."""
    if q < 2:
        return None
    ps = prime_factors(q)
    if len(ps) != 1:
        return None
    p, m = ps[0], 0
    while q > 1:
        q //= p
        m += 1
    return p, m


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    # monic, lowest degree first; reducible iff some monic factor has degree <= m // 2
    m = len(poly) - 1
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            div = list(tail) + [1]
            rem = list(poly)
            for i in range(m, d - 1, -1):
                c = rem[i] % p
                if c:
                    for j in range(d + 1):
                        rem[i - d + j] = (rem[i - d + j] - c * div[j]) % p
            if not any(r % p for r in rem[:d]):
                return False
    return True


class GF:
    """GF(q) with elements encoded as integers 0..q-1 (base-p coefficient digits).

    Addition and multiplication are tabulated, so this is only meant for
    q in the low hundreds.
    """

    def __init__(self, q: int):
        pm = prime_power(q)
        if pm is None:
            raise ValueError(f"{q} is not a prime power")
        self.q = q
        self.p, self.m = pm
        p, m = pm
        if m == 1:
            self.modulus_poly = (0, 1)
        else:
            for tail in itertools.product(range(p), repeat=m):
                poly = tuple(tail) + (1,)
                if tail[0] != 0 and _is_irreducible(poly, p):
                    self.modulus_poly = poly
                    break
        digits = np.array([[(x // p**i) % p for i in range(m)] for x in range(q)], dtype=np.int64)
        weights = p ** np.arange(m)
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(a, q):
                c = self._poly_mul(digits[a], digits[b]) @ weights
                self.mul[a, b] = self.mul[b, a] = c

    def _poly_mul(self, a, b):
        p, m = self.p, self.m
        prod = np.zeros(2 * m - 1, dtype=np.int64)
        for i, ai in enumerate(a):
            if ai:
                prod[i : i + m] += ai * b
        prod %= p
        mod = self.modulus_poly
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i]
            if c:
                for j in range(m + 1):
                    prod[i - m + j] = (prod[i - m + j] - c * mod[j]) % p
        return prod[:m]

    def sub(self, a, b):
        return self.add[a, self.neg[b]]

    def quadratic_character(self) -> np.ndarray:
        """chi[x] = 0 for x = 0, +1 for a nonzero square, -1 otherwise."""
        chi = -np.ones(self.q, dtype=np.int64)
        chi[0] = 0
        squares = np.unique(self.mul[np.arange(1, self.q), np.arange(1, self.q)])
        chi[squares] = 1
        return chi


@lru_cache(maxsize=None)
def jacobsthal(q: int) -> np.ndarray:
    """Jacobsthal matrix ``Q[a, b] = chi(a - b)`` over GF(q)."""
    F = GF(q)
    chi = F.quadratic_character()
    idx = np.arange(q)
    Q = chi[F.sub(idx[:, None], idx[None, :])]
    Q.setflags(write=False)
    return Q
