"""Phase code matrices and their exact verification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from riscodes.cyclotomic import vanishing_rows
from riscodes.errors import InvalidCode

__all__ = [
    "PhaseCodeMatrix",
    "BHCatalogEntry",
    "VerificationReport",
    "correlation_counts",
    "verify_code",
    "dephase",
    "lift",
]


def _frozen_exponents(exponents, modulus: int) -> np.ndarray:
    arr = np.array(exponents, dtype=np.int64)
    if arr.ndim != 2 or arr.size == 0:
        raise ValueError(f"expected a non-empty 2-D exponent array, got shape {arr.shape}")
    if modulus < 2:
        raise ValueError(f"modulus must be > 1, got {modulus}")
    if arr.min() < 0 or arr.max() >= modulus:
        raise ValueError(f"exponents must lie in [0, {modulus})")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PhaseCodeMatrix:
    """(K+1) x P matrix of R-th roots of unity, stored as exponents.

    Row 0 is the code of the uncontrolled path; row k >= 1 is the fast-varying
    code applied to RIS k.
    """

    exponents: np.ndarray
    modulus: int
    verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "exponents", _frozen_exponents(self.exponents, self.modulus))
        if self.verified and not verify_code(self).passed:
            raise InvalidCode("matrix flagged as verified does not satisfy B B^H = P I")

    @property
    def K(self) -> int:
        return self.exponents.shape[0] - 1

    @property
    def P(self) -> int:
        return self.exponents.shape[1]

    @property
    def R(self) -> int:
        return self.modulus

    def to_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exponents / self.modulus)

    def head(self, rows: int) -> PhaseCodeMatrix:
        """The first ``rows`` rows; verification status carries over."""
        if not 1 <= rows <= self.exponents.shape[0]:
            raise ValueError(f"cannot take {rows} rows of a {self.exponents.shape[0]}-row matrix")
        return PhaseCodeMatrix(self.exponents[:rows], self.modulus, verified=False)._mark(self.verified)

    def _mark(self, verified: bool) -> PhaseCodeMatrix:
        object.__setattr__(self, "verified", verified)
        return self

    def __eq__(self, other):
        if not isinstance(other, PhaseCodeMatrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.exponents, other.exponents)

    def __hash__(self):
        return hash((self.modulus, self.exponents.shape, self.exponents.tobytes()))

    def __repr__(self):
        return f"PhaseCodeMatrix(K={self.K}, P={self.P}, R={self.R}, verified={self.verified})"


@dataclass(frozen=True, eq=False)
class BHCatalogEntry:
    """A square Butson-type Hadamard matrix BH(order, modulus) with a provenance label."""

    exponents: np.ndarray
    modulus: int
    source: str = ""
    order: int = field(init=False)

    def __post_init__(self):
        arr = _frozen_exponents(self.exponents, self.modulus)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError(f"BH matrix must be square, got shape {arr.shape}")
        object.__setattr__(self, "exponents", arr)
        object.__setattr__(self, "order", arr.shape[0])

    def as_code(self) -> PhaseCodeMatrix:
        return PhaseCodeMatrix(self.exponents, self.modulus)

    def __eq__(self, other):
        if not isinstance(other, BHCatalogEntry):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.exponents, other.exponents)

    def __hash__(self):
        return hash((self.modulus, self.exponents.tobytes()))

    def __repr__(self):
        return f"BHCatalogEntry(order={self.order}, modulus={self.modulus}, source={self.source!r})"


def lift(exponents: np.ndarray, modulus: int, new_modulus: int) -> np.ndarray:
    """Re-express R-th roots as roots of order ``new_modulus`` (a multiple of R)."""
    if new_modulus % modulus:
        raise ValueError(f"{new_modulus} is not a multiple of {modulus}")
    return (np.asarray(exponents, dtype=np.int64) * (new_modulus // modulus)) % new_modulus


def correlation_counts(exponents: np.ndarray, modulus: int) -> np.ndarray:
    """Integer root multiplicities of every row correlation.

    ``out[i, j, r]`` counts the positions p where ``e[i,p] - e[j,p] == r (mod R)``,
    so that ``sum_p b[i,p] * conj(b[j,p]) = sum_r out[i,j,r] * w**r``.
    """
    e = np.asarray(exponents, dtype=np.int64)
    n, _ = e.shape
    diff = (e[:, None, :] - e[None, :, :]) % modulus
    flat = (np.arange(n * n).reshape(n, n, 1) * modulus + diff).ravel()
    return np.bincount(flat, minlength=n * n * modulus).reshape(n, n, modulus)


@dataclass
class VerificationReport:
    K: int
    P: int
    R: int
    first_row_ones: bool
    pair_zero: np.ndarray  # (K+1, K+1) bool; diagonal True by convention
    row_sum_zero: np.ndarray  # (K+1,) bool; entry 0 is unused and True

    @property
    def failing_pairs(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(~self.pair_zero)
        return [(a, b) for a, b in zip(i.tolist(), j.tolist()) if a < b]

    @property
    def failing_row_sums(self) -> list[int]:
        return np.nonzero(~self.row_sum_zero)[0].tolist()

    @property
    def passed(self) -> bool:
        return self.first_row_ones and bool(self.pair_zero.all()) and bool(self.row_sum_zero.all())

    def lines(self) -> list[str]:
        out = [
            f"K={self.K} P={self.P} R={self.R}",
            f"first row all-ones: {'pass' if self.first_row_ones else 'FAIL'}",
        ]
        n = self.K + 1
        for i in range(n):
            for j in range(i + 1, n):
                out.append(f"rows {i},{j} orthogonal: {'pass' if self.pair_zero[i, j] else 'FAIL'}")
        for k in range(1, n):
            out.append(f"row {k} sums to zero: {'pass' if self.row_sum_zero[k] else 'FAIL'}")
        out.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return out


def verify_code(B: PhaseCodeMatrix) -> VerificationReport:
    """Exact check of ``[B]_0 = 1`` and ``B B^H = P I``."""
    e, R = B.exponents, B.modulus
    n, P = e.shape
    pair = vanishing_rows(correlation_counts(e, R), R)
    np.fill_diagonal(pair, True)
    sums = np.zeros((n, R), dtype=np.int64)
    for k in range(n):
        sums[k] = np.bincount(e[k], minlength=R)
    row_sum = vanishing_rows(sums, R)
    row_sum[0] = True
    return VerificationReport(
        K=n - 1,
        P=P,
        R=R,
        first_row_ones=bool(np.all(e[0] == 0)),
        pair_zero=pair,
        row_sum_zero=row_sum,
    )


def _rows_orthogonal(exponents: np.ndarray, modulus: int) -> bool:
    pair = vanishing_rows(correlation_counts(exponents, modulus), modulus)
    np.fill_diagonal(pair, True)
    return bool(pair.all())


def dephase(g, modulus: int | None = None, check: bool = True) -> PhaseCodeMatrix:
    """Multiply every column by the conjugate of its first entry.

    Orthogonality of the rows is preserved and the first row becomes all-ones.
    ``g`` may be a :class:`PhaseCodeMatrix`, a :class:`BHCatalogEntry` or an
    exponent array (then ``modulus`` is required).
    """
    if isinstance(g, (PhaseCodeMatrix, BHCatalogEntry)):
        e, R = g.exponents, g.modulus
    else:
        if modulus is None:
            raise ValueError("modulus is required for a raw exponent array")
        e, R = np.asarray(g, dtype=np.int64), modulus
    if check and not _rows_orthogonal(e, R):
        raise InvalidCode("input rows are not mutually orthogonal")
    out = (e - e[0][None, :]) % R
    return PhaseCodeMatrix(out, R)._mark(check)
