"""Text and JSON serialisation of code matrices, and the embedded BH catalog.

Text format, one block per matrix::

    # comment
    BH <P> <R> <source label...>
    <row of P exponents>
    ...

Blocks are separated by blank lines.  A catalog block holds P rows; an
exported code holds K + 1 <= P rows.
"""

from __future__ import annotations

import io
import json
from functools import lru_cache
from importlib import resources
from typing import Iterable

import numpy as np

from riscodes.codes.matrix import BHCatalogEntry, PhaseCodeMatrix, dephase, verify_code
from riscodes.errors import CatalogError

__all__ = [
    "parse_blocks",
    "catalog_load",
    "catalog_dumps",
    "code_to_text",
    "code_to_json",
    "read_code",
    "verify_bh",
    "embedded_catalog",
]


def _as_text(source) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def parse_blocks(source) -> list[tuple[int, int, str, np.ndarray, int]]:
    """Parse the text format into ``(P, R, label, exponents, header_line)`` tuples."""
    blocks = []
    cur = None

    def close(lineno):
        nonlocal cur
        if cur is None:
            return
        P, R, label, rows, start = cur
        if not rows:
            raise CatalogError(f"entry '{label}' has no rows", lineno)
        blocks.append((P, R, label, np.array(rows, dtype=np.int64), start))
        cur = None

    for lineno, raw in enumerate(_as_text(source).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            if raw.strip() == "":
                close(lineno)
            continue
        tokens = line.split()
        if tokens[0] == "BH":
            close(lineno)
            if len(tokens) < 3:
                raise CatalogError("header needs 'BH <P> <R> [label]'", lineno)
            try:
                P, R = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise CatalogError(f"non-integer order or modulus in header: {line!r}", lineno) from None
            if P < 1 or R < 2:
                raise CatalogError(f"invalid order {P} or modulus {R}", lineno)
            cur = (P, R, " ".join(tokens[3:]), [], lineno)
            continue
        if cur is None:
            raise CatalogError("matrix row outside of a 'BH' block", lineno)
        P, R, label, rows, _ = cur
        try:
            row = [int(t) for t in tokens]
        except ValueError:
            raise CatalogError(f"non-integer exponent in row: {line!r}", lineno) from None
        if len(row) != P:
            raise CatalogError(f"expected {P} exponents, got {len(row)}", lineno)
        if any(not 0 <= v < R for v in row):
            raise CatalogError(f"exponent outside [0, {R})", lineno)
        if len(rows) == P:
            raise CatalogError(f"more than {P} rows in entry '{label}'", lineno)
        rows.append(row)
    close(None)
    return blocks


def verify_bh(entry: BHCatalogEntry) -> bool:
    """Exact check of ``H H^H = n I`` (done on the dephased form)."""
    return verify_code(dephase(entry, check=False)).passed


def catalog_load(source) -> list[BHCatalogEntry]:
    """Load square BH entries from text, bytes or a file object; every entry is re-verified."""
    entries = []
    for P, R, label, rows, lineno in parse_blocks(source):
        if rows.shape[0] != P:
            raise CatalogError(f"entry '{label}' has {rows.shape[0]} rows, expected {P}", lineno)
        entry = BHCatalogEntry(rows, R, source=label or "file")
        if not verify_bh(entry):
            raise CatalogError(f"entry '{entry.source}' (BH {P} {R}) fails verification", lineno)
        entries.append(entry)
    return entries


def _block_text(exponents: np.ndarray, modulus: int, label: str) -> str:
    P = exponents.shape[1]
    lines = [f"BH {P} {modulus} {label}".rstrip()]
    lines += [" ".join(str(int(v)) for v in row) for row in exponents]
    return "\n".join(lines) + "\n"


def catalog_dumps(entries: Iterable[BHCatalogEntry]) -> str:
    return "\n".join(_block_text(e.exponents, e.modulus, e.source) for e in entries)


def code_to_text(code: PhaseCodeMatrix, label: str = "") -> str:
    return _block_text(code.exponents, code.modulus, label)


def code_to_json(code: PhaseCodeMatrix, **extra) -> str:
    """JSON object with K, P, R, any extra fields, and one matrix row per line."""
    head = {"K": code.K, "P": code.P, "R": code.R, **extra}
    fields = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items() if k != "rows"]
    rows = ",\n".join(f"    {json.dumps(r)}" for r in code.exponents.tolist())
    return "{\n" + ",\n".join(fields + [f'  "rows": [\n{rows}\n  ]']) + "\n}\n"


def read_code(source) -> PhaseCodeMatrix:
    """Read one code matrix in either the text or the JSON format."""
    text = _as_text(source)
    if text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
            rows = np.array(doc["rows"], dtype=np.int64)
            R = int(doc["R"])
        except (ValueError, KeyError, TypeError) as exc:
            raise CatalogError(f"malformed code JSON: {exc}") from None
        if "P" in doc and rows.ndim == 2 and rows.shape[1] != int(doc["P"]):
            raise CatalogError(f"rows have length {rows.shape[1]}, header says P={doc['P']}")
        if "K" in doc and rows.shape[0] != int(doc["K"]) + 1:
            raise CatalogError(f"{rows.shape[0]} rows, header says K={doc['K']}")
        try:
            return PhaseCodeMatrix(rows, R)
        except ValueError as exc:
            raise CatalogError(str(exc)) from None
    blocks = parse_blocks(text)
    if len(blocks) != 1:
        raise CatalogError(f"expected exactly one matrix, found {len(blocks)}")
    _, R, _, rows, _ = blocks[0]
    return PhaseCodeMatrix(rows, R)


@lru_cache(maxsize=1)
def embedded_catalog() -> tuple[BHCatalogEntry, ...]:
    """Entries shipped with the package, re-verified at first use."""
    text = resources.files("riscodes.data").joinpath("catalog.txt").read_text(encoding="utf-8")
    return tuple(catalog_load(io.StringIO(text)))
