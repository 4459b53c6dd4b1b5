"""Construction, verification and length minimisation of orthogonal phase codes."""

from riscodes.codes.catalog import catalog_load, code_to_json, code_to_text, embedded_catalog, read_code, verify_bh
from riscodes.codes.constructions import (
    conference_bh4,
    dft_code,
    dft_entry,
    kronecker_compose,
    kronecker_power,
    paley,
    sylvester,
    two_circulant_bh,
)
from riscodes.codes.design import (
    ConstructionCase,
    DesignOutcome,
    Exactness,
    bh_matrix,
    bh_recipe,
    design_code,
    kronecker_dft_code,
    minimal_P,
)
from riscodes.codes.matrix import BHCatalogEntry, PhaseCodeMatrix, VerificationReport, dephase, verify_code
from riscodes.codes.search import exhaustive_feasibility, find_partial_code

__all__ = [
    "BHCatalogEntry",
    "ConstructionCase",
    "DesignOutcome",
    "Exactness",
    "PhaseCodeMatrix",
    "VerificationReport",
    "bh_matrix",
    "bh_recipe",
    "catalog_load",
    "code_to_json",
    "code_to_text",
    "conference_bh4",
    "dephase",
    "design_code",
    "dft_code",
    "dft_entry",
    "embedded_catalog",
    "exhaustive_feasibility",
    "find_partial_code",
    "kronecker_compose",
    "kronecker_dft_code",
    "kronecker_power",
    "minimal_P",
    "paley",
    "read_code",
    "sylvester",
    "two_circulant_bh",
    "verify_bh",
    "verify_code",
]
