"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 construction unsupported,
4 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import hashlib
import io
import json
import sys
from importlib import resources
from pathlib import Path

from riscodes import __version__
from riscodes.codes import code_to_json, code_to_text, design_code, embedded_catalog, minimal_P, read_code, verify_code
from riscodes.codes.catalog import catalog_load, parse_blocks, verify_bh
from riscodes.codes.matrix import BHCatalogEntry
from riscodes.config import SCHEMA_VERSION, Scenario
from riscodes.errors import CatalogError, ConstructionUnsupported, InvalidCode, RiscodesError

EXIT_OK, EXIT_INVALID, EXIT_UNSUPPORTED, EXIT_VERIFY = 0, 2, 3, 4

LOCEXP_COLUMNS = ("realization", "ris", "error_m", "converged")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _resolution(text: str) -> int | None:
    if text.lower() in ("inf", "none", "unlimited"):
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="riscodes", description="Orthogonal discrete-phase codes for multi-RIS pilot separation.")
    p.add_argument("--version", action="version", version=f"riscodes {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("design", help="build a shortest verified code for K RISs at resolution R")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--r", type=_resolution, required=True, help="phase resolution, or 'inf'")
    d.add_argument("--p", type=int, help="force this code length")
    d.add_argument("--out", type=Path, help="write the matrix here instead of stdout")
    d.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="exactly verify a code matrix file")
    v.add_argument("path", type=Path)
    v.add_argument("--format", choices=("text", "json"), default="text")

    m = sub.add_parser("minp", help="print the shortest feasible code length")
    m.add_argument("--k", type=int, required=True)
    m.add_argument("--r", type=_resolution, required=True)
    m.add_argument("--format", choices=("text", "json"), default="text")

    for name, text in (("simulate", "link-level Monte Carlo"), ("locexp", "localization experiment")):
        s = sub.add_parser(name, help=text)
        s.add_argument("--config", type=Path, help="scenario JSON (defaults are used when omitted)")
        s.add_argument("--seed", type=int, help="override the scenario seed")
        s.add_argument("--out", type=Path, default=Path("."), help="output directory")

    c = sub.add_parser("catalog", help="inspect the embedded catalog")
    c.add_argument("action", choices=("list", "check"))
    c.add_argument("path", type=Path, nargs="?", help="catalog file to check instead of the embedded one")
    c.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _emit(text: str, out: Path | None = None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def cmd_design(args) -> int:
    outcome = design_code(args.k, args.r, args.p)
    info = outcome.summary()
    if args.format == "json":
        body = code_to_json(outcome.code, **{k: v for k, v in info.items() if k not in ("K", "R")})
    else:
        body = code_to_text(outcome.code, outcome.source)
    lines = [
        f"case: {info['construction_case']} ({info['source']})",
        f"minimal P: {info['theoretical_min_P']} ({info['exactness']})",
        f"achieved P: {info['achieved_P']}",
        f"optimal: {str(info['optimal']).lower()}",
    ]
    if args.out is None:
        if args.format == "json":
            _emit(body)
        else:
            _emit("\n".join(lines) + "\n" + body)
    else:
        _emit(body, args.out)
        _emit("\n".join(lines + [f"written: {args.out}"]))
    return EXIT_OK


def cmd_verify(args) -> int:
    code = read_code(args.path.read_bytes())
    report = verify_code(code)
    if args.format == "json":
        doc = {
            "K": report.K,
            "P": report.P,
            "R": report.R,
            "first_row_ones": report.first_row_ones,
            "failing_pairs": [list(p) for p in report.failing_pairs],
            "failing_row_sums": list(report.failing_row_sums),
            "passed": report.passed,
        }
        _emit(json.dumps(doc, indent=2))
    else:
        _emit("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_minp(args) -> int:
    P, exact = minimal_P(args.k, args.r)
    if args.format == "json":
        _emit(json.dumps({"K": args.k, "R": args.r, "P": P, "exactness": exact.value}))
    else:
        _emit(f"P* = {P} ({exact.value})")
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        entries = embedded_catalog() if args.path is None else catalog_load(args.path.read_bytes())
        if args.format == "json":
            _emit(json.dumps([{"order": e.order, "R": e.modulus, "source": e.source} for e in entries], indent=2))
        else:
            _emit("\n".join(f"BH({e.order},{e.modulus})  {e.source}" for e in entries))
        return EXIT_OK
    if args.path is None:
        text = resources.files("riscodes.data").joinpath("catalog.txt").read_text(encoding="utf-8")
    else:
        text = args.path.read_text(encoding="utf-8")
    failed = 0
    lines = []
    for P, R, label, rows, lineno in parse_blocks(text):
        ok = rows.shape[0] == P and verify_bh(BHCatalogEntry(rows, R, source=label))
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'}  BH({P},{R})  {label}  (line {lineno})")
    lines.append(f"{len(lines) - failed} of {len(lines)} entries verified")
    _emit("\n".join(lines))
    return EXIT_VERIFY if failed else EXIT_OK


def _load_scenario(args) -> Scenario:
    scenario = Scenario() if args.config is None else Scenario.load(args.config)
    if args.seed is not None:
        scenario = dataclasses.replace(scenario, seed=args.seed)
    return scenario


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def _write_outputs(out: Path, files: dict[str, str], command: str, scenario: Scenario, columns: dict) -> None:
    """Write output files plus a manifest of their digests; no timestamps, so reruns are byte-identical."""
    out.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name, text in files.items():
        data = text.encode("utf-8")
        (out / name).write_bytes(data)
        digests[name] = hashlib.sha256(data).hexdigest()
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "subcommand": command,
        "tool_version": __version__,
        "seed": scenario.seed,
        "config": scenario.to_dict(),
        "columns": columns,
        "outputs": digests,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def cmd_simulate(args) -> int:
    from riscodes.linksim import CSV_COLUMNS, run_link_trials, summarize

    scenario = _load_scenario(args)
    rows = run_link_trials(scenario)
    summary = summarize(rows)
    summary_cols = ("method", "R", "path", "trials", "leakage", "mse", "nmse")
    files = {"link_trials.csv": _csv_text(CSV_COLUMNS, rows), "link_summary.csv": _csv_text(summary_cols, summary)}
    _write_outputs(args.out, files, "simulate", scenario, {"link_trials.csv": list(CSV_COLUMNS), "link_summary.csv": list(summary_cols)})
    _emit(f"{len(rows)} rows written to {args.out}")
    return EXIT_OK


def cmd_locexp(args) -> int:
    from riscodes.locexp import run_experiment

    scenario = _load_scenario(args)
    result = run_experiment(scenario)
    files, columns = {}, {}
    for m in result.methods:
        err, conv = result.errors[m], result.converged[m]
        rows = [
            {"realization": n, "ris": k + 1, "error_m": float(err[n, k]), "converged": int(conv[n, k])}
            for n in range(err.shape[0])
            for k in range(err.shape[1])
        ]
        files[f"errors_{m}.csv"] = _csv_text(LOCEXP_COLUMNS, rows)
        columns[f"errors_{m}.csv"] = list(LOCEXP_COLUMNS)
    table = result.quantile_table()
    stats = [
        {"quantile": "median_se", **{m: result.median_se[m] for m in result.methods}},
    ]
    quant_cols = ("quantile", *result.methods)
    files["summary.csv"] = _csv_text(quant_cols, table + stats)
    columns["summary.csv"] = list(quant_cols)
    _write_outputs(args.out, files, "locexp", scenario, columns)
    lines = [f"{m:>10s}  median {result.medians[m]:.4g} m" for m in result.methods]
    _emit("\n".join(lines + [f"written: {args.out}"]))
    return EXIT_OK


COMMANDS = {
    "design": cmd_design,
    "verify": cmd_verify,
    "minp": cmd_minp,
    "simulate": cmd_simulate,
    "locexp": cmd_locexp,
    "catalog": cmd_catalog,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"riscodes: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except ConstructionUnsupported as exc:
        print(f"riscodes: unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InvalidCode as exc:
        print(f"riscodes: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except CatalogError as exc:
        print(f"riscodes: malformed input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (RiscodesError, ValueError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"riscodes: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
