"""Regenerate src/riscodes/data/catalog.txt.

The entries are orders that none of the built-in constructions reach:

* BH(6, 3): first solution of the exhaustive row search.
* BH(22, 4): two-circulant matrix from a quaternary periodic complementary
  pair of length 11, found by a meet-in-the-middle search over the periodic
  autocorrelations of all 4**10 sequences with leading 0.

Every entry is stored dephased (first row and column all zero exponents).
"""

from pathlib import Path

from riscodes.codes.catalog import catalog_dumps
from riscodes.codes.constructions import two_circulant_bh
from riscodes.codes.matrix import BHCatalogEntry, dephase
from riscodes.codes.search import find_partial_code

PAIRS_Z4 = {
    11: ([0, 2, 1, 2, 3, 0, 1, 0, 0, 0, 0], [0, 1, 3, 2, 2, 1, 3, 1, 0, 2, 2]),
}


def normalized(entry: BHCatalogEntry, label: str) -> BHCatalogEntry:
    e = dephase(entry).exponents
    e = (e - e[:, :1]) % entry.modulus  # rows scaled so the first column is 1 too
    return BHCatalogEntry(e, entry.modulus, source=label)


def main() -> None:
    entries = []
    bh63 = find_partial_code(5, 6, 3, limit=None)
    entries.append(normalized(BHCatalogEntry(bh63.exponents, 3), "exhaustive search BH(6,3)"))
    for n, (a, b) in sorted(PAIRS_Z4.items()):
        entries.append(normalized(two_circulant_bh(a, b, 4), f"two-circulant Z4 pair n={n}"))
    out = Path(__file__).resolve().parents[1] / "src" / "riscodes" / "data" / "catalog.txt"
    header = "# Butson-Hadamard matrices not reachable by the built-in constructions.\n"
    header += "# Regenerate with tools/build_catalog.py.\n\n"
    out.write_text(header + catalog_dumps(entries))
    print(f"wrote {len(entries)} entries to {out}")


if __name__ == "__main__":
    main()
