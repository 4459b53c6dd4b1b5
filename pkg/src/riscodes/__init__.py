"""Orthogonal discrete-phase temporal codes for multi-RIS pilot transmission."""

__version__ = "0.1.0"

from riscodes.errors import (
    CatalogError,
    ConstructionUnsupported,
    InvalidCode,
    ResolutionInfeasible,
    RiscodesError,
    SearchSpaceTooLarge,
)

__all__ = [
    "__version__",
    "CatalogError",
    "ConstructionUnsupported",
    "InvalidCode",
    "ResolutionInfeasible",
    "RiscodesError",
    "SearchSpaceTooLarge",
]
