"""Classical Butson-Hadamard constructions: DFT, Sylvester, Paley, Kronecker."""

from __future__ import annotations

from math import lcm

import numpy as np

from riscodes.codes.gf import jacobsthal, prime_power
from riscodes.codes.matrix import BHCatalogEntry, PhaseCodeMatrix, lift
from riscodes.errors import ConstructionUnsupported, ResolutionInfeasible

__all__ = [
    "dft_exponents",
    "dft_code",
    "dft_entry",
    "sylvester",
    "paley",
    "conference_bh4",
    "two_circulant_bh",
    "kronecker_compose",
    "kronecker_power",
    "identity_entry",
]


def dft_exponents(P: int, R: int | None = None) -> np.ndarray:
    # [F_P]_{k,p} = exp(-2j*pi*k*p/P), written over the R-th roots
    R = P if R is None else R
    if P < 1:
        raise ValueError(f"P must be positive, got {P}")
    if R % P:
        raise ResolutionInfeasible(f"DFT of order {P} needs {P} | R, got R={R}")
    k = np.arange(P)
    return (-np.outer(k, k) * (R // P)) % R


def dft_code(P: int, R: int | None = None) -> PhaseCodeMatrix:
    """The full P x P DFT matrix as a code with K = P - 1.

    Pass ``R=None`` (or ``R=P``) for the infinite-resolution case: the entries
    are then P-th roots stored with modulus P.
    """
    R = P if R is None else R
    if R < 2:
        # P = 1 with R unspecified
        R = 2
    return PhaseCodeMatrix(dft_exponents(P, R), R)._mark(True)


def dft_entry(P: int, R: int | None = None) -> BHCatalogEntry:
    R = P if R is None else R
    return BHCatalogEntry(dft_exponents(P, R), max(R, 2), source=f"DFT order {P}")


def identity_entry(modulus: int = 2) -> BHCatalogEntry:
    """The 1 x 1 matrix [1], the empty Kronecker product."""
    return BHCatalogEntry([[0]], modulus, source="unit")


def kronecker_compose(a: BHCatalogEntry, b: BHCatalogEntry) -> BHCatalogEntry:
    """Kronecker product; the result lives over the lcm of both moduli."""
    L = lcm(a.modulus, b.modulus)
    ea = lift(a.exponents, a.modulus, L)
    eb = lift(b.exponents, b.modulus, L)
    e = (ea[:, None, :, None] + eb[None, :, None, :]) % L
    e = e.reshape(a.order * b.order, a.order * b.order)
    return BHCatalogEntry(e, L, source=f"({a.source}) x ({b.source})")


def kronecker_power(a: BHCatalogEntry, n: int) -> BHCatalogEntry:
    if n < 0:
        raise ValueError(f"negative Kronecker power {n}")
    out = identity_entry(a.modulus)
    for _ in range(n):
        out = kronecker_compose(out, a) if out.order > 1 else a
    return out


def sylvester(n: int) -> BHCatalogEntry:
    """Real Hadamard matrix of order 2**n by repeated doubling of F_2."""
    if n < 0:
        raise ValueError(f"n must be non-negative, got {n}")
    e = np.zeros((1, 1), dtype=np.int64)
    for _ in range(n):
        e = np.block([[e, e], [e, (e + 1) % 2]])
    return BHCatalogEntry(e, 2, source=f"Sylvester n={n}")


def _check_paley_q(q: int) -> None:
    if q % 2 == 0 or prime_power(q) is None:
        raise ConstructionUnsupported(f"Paley construction needs an odd prime power, got q={q}")


def paley(q: int) -> BHCatalogEntry:
    """Real Hadamard matrix from the quadratic residues of GF(q).

    q = 3 (mod 4) gives order q + 1 (Paley I); q = 1 (mod 4) gives order
    2(q + 1) (Paley II).  Prime powers are supported, not only primes.
    """
    _check_paley_q(q)
    Q = jacobsthal(q)
    if q % 4 == 3:
        S = np.zeros((q + 1, q + 1), dtype=np.int64)
        S[0, 1:] = 1
        S[1:, 0] = -1
        S[1:, 1:] = Q
        H = np.eye(q + 1, dtype=np.int64) + S
        label = f"Paley I q={q}"
    else:
        C = np.zeros((q + 1, q + 1), dtype=np.int64)
        C[0, 1:] = 1
        C[1:, 0] = 1
        C[1:, 1:] = Q
        H = np.kron(C, [[1, 1], [1, -1]]) + np.kron(np.eye(q + 1, dtype=np.int64), [[1, -1], [-1, -1]])
        label = f"Paley II q={q}"
    return BHCatalogEntry((H < 0).astype(np.int64), 2, source=label)


def conference_bh4(q: int) -> BHCatalogEntry:
    """BH(q + 1, 4) as ``C + iI`` for the symmetric Paley conference matrix C.

    Needs q = 1 (mod 4); this covers the orders 2 (mod 4) that no real
    Hadamard matrix can reach.
    """
    _check_paley_q(q)
    if q % 4 != 1:
        raise ConstructionUnsupported(f"symmetric conference matrix needs q = 1 (mod 4), got q={q}")
    Q = jacobsthal(q)
    C = np.zeros((q + 1, q + 1), dtype=np.int64)
    C[0, 1:] = 1
    C[1:, 0] = 1
    C[1:, 1:] = Q
    e = np.where(C < 0, 2, 0)
    np.fill_diagonal(e, 1)
    return BHCatalogEntry(e, 4, source=f"conference q={q}")


def _circulant(row: np.ndarray) -> np.ndarray:
    n = len(row)
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return row[idx]


def two_circulant_bh(a, b, modulus: int) -> BHCatalogEntry:
    """BH(2n, R) from a periodic complementary pair of length n over the R-th roots.

    With circulants A, B the matrix ``[[A, B], [-B^H, A^H]]`` is Butson-Hadamard
    whenever the periodic autocorrelations of a and b sum to zero off-peak.
    Requires R even so that -1 is representable.
    """
    if modulus % 2:
        raise ValueError("two-circulant construction needs an even modulus")
    a = np.asarray(a, dtype=np.int64) % modulus
    b = np.asarray(b, dtype=np.int64) % modulus
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("sequences must be 1-D and of equal length")
    A, B = _circulant(a), _circulant(b)
    AH = (-A.T) % modulus
    mBH = (modulus // 2 - B.T) % modulus
    e = np.block([[A, B], [mBH, AH]])
    return BHCatalogEntry(e, modulus, source=f"two-circulant n={len(a)}")
