"""Exhaustive search for small partial Butson-Hadamard codes.

Used to confirm non-existence below the optimal length for tiny parameters.
Row 0 is fixed to all-ones, and every other row may be scaled so its first
entry is 1, so only ``R**(P-1)`` candidate rows need to be considered.
"""

from __future__ import annotations

import numpy as np

from riscodes.codes.matrix import PhaseCodeMatrix
from riscodes.cyclotomic import vanishing_rows
from riscodes.errors import SearchSpaceTooLarge

SEARCH_LIMIT = 10**8


def _candidate_rows(P: int, R: int, first_only: bool = False, chunk: int = 1 << 16) -> np.ndarray:
    # rows with leading 0 whose entries sum to zero, in lexicographic order
    total = R ** (P - 1)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = np.zeros((idx.size, P), dtype=np.int64)
        for j in range(1, P):
            rows[:, j] = (idx // R ** (P - 1 - j)) % R
        counts = np.zeros((idx.size, R), dtype=np.int64)
        for r in range(R):
            counts[:, r] = (rows == r).sum(axis=1)
        keep = rows[vanishing_rows(counts, R)]
        if keep.size:
            found.append(keep)
            if first_only:
                break
    return np.vstack(found) if found else np.zeros((0, P), dtype=np.int64)


def _orthogonal_to(rows: np.ndarray, i: int, R: int) -> np.ndarray:
    diff = (rows[i] - rows[i + 1 :]) % R
    counts = np.zeros((diff.shape[0], R), dtype=np.int64)
    for r in range(R):
        counts[:, r] = (diff == r).sum(axis=1)
    return vanishing_rows(counts, R)


def find_partial_code(K: int, P: int, R: int, limit: int | None = SEARCH_LIMIT) -> PhaseCodeMatrix | None:
    """Some (K+1) x P code with all-ones first row and orthogonal rows, or None.

    Deterministic: returns the lexicographically first solution in candidate order.
    """
    if K < 1 or P < 1 or R < 2:
        raise ValueError(f"need K >= 1, P >= 1, R >= 2; got K={K}, P={P}, R={R}")
    if limit is not None and R ** (K * (P - 1)) > limit:
        raise SearchSpaceTooLarge(f"R^(K(P-1)) = {R}^{K * (P - 1)} exceeds the search limit {limit}")
    if K + 1 > P:
        return None
    cands = _candidate_rows(P, R, first_only=K == 1)
    n = cands.shape[0]
    if n < K:
        return None
    if K == 1:
        return PhaseCodeMatrix(np.vstack([np.zeros(P, dtype=np.int64), cands[0]]), R)._mark(True)
    # adjacency as Python-int bitsets over later candidates
    adj = []
    for i in range(n):
        mask = 0
        ok = np.nonzero(_orthogonal_to(cands, i, R))[0]
        for j in ok.tolist():
            mask |= 1 << (i + 1 + j)
        adj.append(mask)

    def extend(chosen: list[int], allowed: int) -> list[int] | None:
        if len(chosen) == K:
            return chosen
        while allowed:
            low = allowed & -allowed
            i = low.bit_length() - 1
            allowed ^= low
            if bin(allowed).count("1") < K - len(chosen) - 1:
                return None
            found = extend(chosen + [i], allowed & adj[i])
            if found is not None:
                return found
        return None

    sol = extend([], (1 << n) - 1)
    if sol is None:
        return None
    rows = np.vstack([np.zeros(P, dtype=np.int64), cands[sol]])
    return PhaseCodeMatrix(rows, R)._mark(True)


def exhaustive_feasibility(K: int, P: int, R: int, limit: int | None = SEARCH_LIMIT) -> bool:
    """Whether any (K+1) x P matrix of R-th roots of unity has all-ones row 0 and B B^H = P I."""
    return find_partial_code(K, P, R, limit) is not None
