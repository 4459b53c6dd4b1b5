"""Shortest orthogonal fast-varying codes for K RISs at phase resolution R.

The engine knows a fixed set of Butson-Hadamard sources (DFT matrices,
Sylvester, Paley I/II, Paley conference matrices over the 4th roots, and the
embedded catalog) closed under Kronecker products.  ``design_code`` walks the
optimality cases in order and takes the first K + 1 rows of a dephased
matrix of the chosen order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from riscodes.codes.catalog import embedded_catalog
from riscodes.codes.constructions import (
    conference_bh4,
    dft_entry,
    identity_entry,
    kronecker_compose,
    paley,
    sylvester,
)
from riscodes.codes.gf import prime_power
from riscodes.codes.matrix import BHCatalogEntry, PhaseCodeMatrix, dephase, lift, verify_code
from riscodes.cyclotomic import prime_factors, vanishing_set_contains
from riscodes.errors import ConstructionUnsupported, InvalidCode, ResolutionInfeasible

__all__ = [
    "ConstructionCase",
    "Exactness",
    "DesignOutcome",
    "bh_recipe",
    "bh_matrix",
    "describe_recipe",
    "minimal_P",
    "design_code",
    "kronecker_dft_code",
    "smallest_v",
    "HADAMARD_MAX_K",
    "QUATERNARY_MAX_K",
]

# Ranges where the Hadamard / quaternary conjectures are known to hold.
HADAMARD_MAX_K = 663
QUATERNARY_MAX_K = 63


class ConstructionCase(enum.Enum):
    DFT_INF = "DFT_INF"
    DFT_PRIME = "DFT_PRIME"
    HADAMARD_R2 = "HADAMARD_R2"
    BH4_POW2 = "BH4_POW2"
    CATALOG_KP1 = "CATALOG_KP1"
    KRONECKER_GENERAL = "KRONECKER_GENERAL"


class Exactness(enum.Enum):
    EXACT = "EXACT"
    LOWER_BOUND = "LOWER_BOUND"


@dataclass(frozen=True)
class DesignOutcome:
    code: PhaseCodeMatrix
    construction_case: ConstructionCase
    theoretical_min_P: int
    exactness: Exactness
    source: str

    @property
    def achieved_P(self) -> int:
        return self.code.P

    @property
    def optimal(self) -> bool:
        return self.exactness is Exactness.EXACT and self.achieved_P == self.theoretical_min_P

    def summary(self) -> dict:
        return {
            "K": self.code.K,
            "R": self.code.R,
            "construction_case": self.construction_case.value,
            "source": self.source,
            "theoretical_min_P": self.theoretical_min_P,
            "exactness": self.exactness.value,
            "achieved_P": self.achieved_P,
            "optimal": self.optimal,
        }


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


@lru_cache(maxsize=None)
def _catalog_index(P: int, R: int) -> int | None:
    # lowest lexicographic exponent matrix among usable entries of order P
    best = None
    for i, entry in enumerate(embedded_catalog()):
        if entry.order != P or R % entry.modulus:
            continue
        key = tuple(lift(entry.exponents, entry.modulus, R).ravel().tolist())
        if best is None or key < best[0]:
            best = (key, i)
    return None if best is None else best[1]


@lru_cache(maxsize=None)
def bh_recipe(P: int, R: int) -> tuple | None:
    """How the engine builds some BH(P, R), or None if it cannot.

    A recipe is a nested tuple: ``("unit",)``, ``("dft", n)``,
    ``("sylvester", n)``, ``("paley", q)``, ``("conference", q)``,
    ``("catalog", index)`` or ``("kron", left, right)``.
    """
    if P < 1 or R < 2:
        raise ValueError(f"need P >= 1 and R >= 2, got P={P}, R={R}")
    if P == 1:
        return ("unit",)
    if not vanishing_set_contains(P, R):
        return None
    if R % P == 0:
        return ("dft", P)
    if R % 2 == 0:
        if _is_power_of_two(P):
            return ("sylvester", P.bit_length() - 1)
        q = P - 1
        if q % 4 == 3 and prime_power(q):
            return ("paley", q)
        if P % 4 == 0:
            q = P // 2 - 1
            if q % 4 == 1 and prime_power(q):
                return ("paley", q)
    if R % 4 == 0:
        q = P - 1
        if q % 4 == 1 and prime_power(q):
            return ("conference", q)
    idx = _catalog_index(P, R)
    if idx is not None:
        return ("catalog", idx)
    for a in range(2, int(P**0.5) + 1):
        if P % a:
            continue
        left, right = bh_recipe(a, R), bh_recipe(P // a, R)
        if left is not None and right is not None:
            return ("kron", left, right)
    return None


def _build(recipe: tuple) -> BHCatalogEntry:
    kind = recipe[0]
    if kind == "unit":
        return identity_entry()
    if kind == "dft":
        return dft_entry(recipe[1])
    if kind == "sylvester":
        return sylvester(recipe[1])
    if kind == "paley":
        return paley(recipe[1])
    if kind == "conference":
        return conference_bh4(recipe[1])
    if kind == "catalog":
        return embedded_catalog()[recipe[1]]
    if kind == "kron":
        return kronecker_compose(_build(recipe[1]), _build(recipe[2]))
    raise ValueError(f"unknown recipe {recipe!r}")


def describe_recipe(recipe: tuple) -> str:
    kind = recipe[0]
    if kind == "kron":
        return f"{describe_recipe(recipe[1])} x {describe_recipe(recipe[2])}"
    if kind == "catalog":
        e = embedded_catalog()[recipe[1]]
        return f"catalog[{e.source}]"
    if kind == "paley":
        return f"Paley {'I' if recipe[1] % 4 == 3 else 'II'} q={recipe[1]}"
    if kind == "unit":
        return "unit"
    if kind == "sylvester":
        return f"Sylvester order {2 ** recipe[1]}"
    if kind == "dft":
        return f"DFT order {recipe[1]}"
    return f"conference q={recipe[1]}"


def bh_matrix(P: int, R: int) -> BHCatalogEntry:
    """Build the engine's BH(P, R) over the R-th roots; raises if uncovered."""
    recipe = bh_recipe(P, R)
    if recipe is None:
        raise ConstructionUnsupported(f"no construction for BH({P}, {R}) in the registry", missing_order=P)
    entry = _build(recipe)
    return BHCatalogEntry(lift(entry.exponents, entry.modulus, R), R, source=describe_recipe(recipe))


def smallest_v(K: int, R: int) -> int:
    """Smallest product of prime factors of R (with repetition) that is >= K + 1."""
    ps = prime_factors(R)
    best = None
    frontier = {1}
    seen = set()
    while frontier:
        nxt = set()
        for v in frontier:
            if v >= K + 1:
                best = v if best is None else min(best, v)
                continue
            for p in ps:
                w = v * p
                if w not in seen and (best is None or w < best):
                    seen.add(w)
                    nxt.add(w)
        frontier = nxt
    return best


def kronecker_dft_code(K: int, R: int) -> PhaseCodeMatrix:
    """First K + 1 rows of the Kronecker product of DFT matrices of R's prime factors.

    Always feasible; its length is the smallest prime-factor product >= K + 1.
    """
    v = smallest_v(K, R)
    S = identity_entry(R)
    for p in prime_factors(R):
        while v % p == 0:
            S = kronecker_compose(S, dft_entry(p)) if S.order > 1 else dft_entry(p)
            v //= p
    S = BHCatalogEntry(lift(S.exponents, S.modulus, R), R, source=S.source)
    return dephase(S).head(K + 1)


def minimal_P(K: int, R: int | None) -> tuple[int, Exactness]:
    """Shortest feasible code length, or a lower bound when no closed form applies.

    ``R=None`` means unlimited phase resolution.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if R is None:
        return K + 1, Exactness.EXACT
    if R < 2:
        raise ValueError(f"R must be >= 2, got {R}")
    if bh_recipe(K + 1, R) is not None:
        return K + 1, Exactness.EXACT
    p1 = prime_factors(R)[0]
    if p1 >= K + 1:
        return p1, Exactness.EXACT
    if R == 2 and K <= HADAMARD_MAX_K:
        # K = 2 is outside the Hadamard range, but P >= 3 and P even
        # (row sums of +-1 must vanish) already force P = 4, which Sylvester attains.
        return 4 * -(-(K + 1) // 4), Exactness.EXACT
    if R > 2 and _is_power_of_two(R) and K <= QUATERNARY_MAX_K:
        return 2 * -(-(K + 1) // 2), Exactness.EXACT
    return K + 1, Exactness.LOWER_BOUND


def _outcome(entry: BHCatalogEntry, K: int, case: ConstructionCase, R: int) -> DesignOutcome:
    code = dephase(entry).head(K + 1)
    if not verify_code(code).passed:
        raise InvalidCode(f"internal error: {entry.source} does not verify")
    P_min, exact = minimal_P(K, R)
    return DesignOutcome(code, case, P_min, exact, entry.source)


def design_code(K: int, R: int | None, P: int | None = None) -> DesignOutcome:
    """Verified (K+1) x P code for K RISs with phase resolution R.

    With ``P`` given, a code of exactly that length is built.  Lengths that
    cannot exist raise ``ValueError`` (``ResolutionInfeasible`` when no R-th
    root sum of that length vanishes); lengths that may exist but have no
    registered construction raise :class:`ConstructionUnsupported`.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if R is None:
        n = K + 1 if P is None else P
        if n < K + 1:
            raise ValueError(f"P={n} < K+1={K + 1}: rows cannot be orthogonal")
        code = _dft_head(n, K)
        return DesignOutcome(code, ConstructionCase.DFT_INF, K + 1, Exactness.EXACT, f"DFT order {n}")
    if R < 2:
        raise ValueError(f"R must be >= 2, got {R}")

    if P is not None:
        if P < K + 1:
            raise ValueError(f"P={P} < K+1={K + 1}: rows cannot be orthogonal")
        if not vanishing_set_contains(P, R):
            raise ResolutionInfeasible(f"no {P} roots of unity of order {R} sum to zero")
        entry = bh_matrix(P, R)
        return _outcome(entry, K, _classify(K, R, P), R)

    if bh_recipe(K + 1, R) is not None:
        return _outcome(bh_matrix(K + 1, R), K, ConstructionCase.CATALOG_KP1, R)
    p1 = prime_factors(R)[0]
    if p1 >= K + 1:
        entry = BHCatalogEntry(lift(dft_entry(p1).exponents, p1, R), R, source=f"DFT order {p1}")
        return _outcome(entry, K, ConstructionCase.DFT_PRIME, R)
    if R == 2 and K <= HADAMARD_MAX_K:
        target = 4 * -(-(K + 1) // 4)
        return _outcome(_required(target, R), K, ConstructionCase.HADAMARD_R2, R)
    if _is_power_of_two(R) and K <= QUATERNARY_MAX_K:
        target = 2 * -(-(K + 1) // 2)
        return _outcome(_required(target, R), K, ConstructionCase.BH4_POW2, R)

    v = smallest_v(K, R)
    for n in range(K + 2, v + 1):
        if vanishing_set_contains(n, R) and bh_recipe(n, R) is not None:
            return _outcome(bh_matrix(n, R), K, ConstructionCase.KRONECKER_GENERAL, R)
    raise AssertionError("unreachable: the DFT Kronecker product always exists")


def _dft_head(n: int, K: int) -> PhaseCodeMatrix:
    return dephase(dft_entry(n)).head(K + 1)


def _required(order: int, R: int) -> BHCatalogEntry:
    if bh_recipe(order, R) is None:
        kind = "real Hadamard" if R == 2 else f"BH(., {R})"
        raise ConstructionUnsupported(
            f"optimal length is {order} but no {kind} matrix of order {order} is registered", missing_order=order
        )
    return bh_matrix(order, R)


def _classify(K: int, R: int, P: int) -> ConstructionCase:
    if P == K + 1:
        return ConstructionCase.CATALOG_KP1
    if prime_factors(R)[0] == P:
        return ConstructionCase.DFT_PRIME
    if R == 2:
        return ConstructionCase.HADAMARD_R2
    if _is_power_of_two(R):
        return ConstructionCase.BH4_POW2
    return ConstructionCase.KRONECKER_GENERAL
