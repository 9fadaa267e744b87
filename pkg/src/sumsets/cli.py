"""Command-line front end.

Every subcommand builds a JSON-serializable ``results`` object, which is then
wrapped in an envelope ``{command, params, artifact_version, results,
elapsed_ms}`` or flattened to CSV. Exit codes: 0 success, 1 bad input,
2 guard refusal, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from pathlib import Path
from typing import Callable, Optional

from . import __version__
from .construction import (
    DEFAULT_VERIFY_CAP,
    disjointness_threshold,
    layer_intersection_size,
    layer_intervals,
    layer_size_formula,
    popular_set,
    predicted_popular_size,
    verify_theorem,
)
from .core import (
    GuardExceededError,
    SumsetError,
    as_intset,
    h_fold_sumset,
)
from .explorer import (
    DEFAULT_GUARD,
    SearchSpace,
    enumerate_sizes,
    popularity_histogram,
    problem1_scan,
    problem2_scan,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_GUARD = 2
EXIT_VERIFY_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_set(text: str) -> tuple[int, ...]:
    """Parse a comma-separated integer list such as ``0,1,4``; duplicates are rejected."""
    try:
        values = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse set literal {text!r}; expected integers like 0,1,4")
    return as_intset(values)


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _join(values) -> str:
    return ";".join(str(v) for v in values)


# ---------------------------------------------------------------------------
# Commands. Each returns (params, compute) where compute() -> results.
# ---------------------------------------------------------------------------


def cmd_sumset(args):
    _require(args.set is not None, "sumset needs --set")
    _require(args.h is not None and args.h >= 1, "sumset needs --h >= 1")
    A = parse_set(args.set)
    params = {"set": list(A), "h": args.h}

    def compute():
        S = h_fold_sumset(A, args.h)
        return {"input": list(A), "h": args.h, "sumset": list(S), "size": len(S)}

    return params, compute


def cmd_verify(args):
    _require(args.h is not None and args.h >= 1, "verify needs --h >= 1")
    cap = args.guard if args.guard is not None else DEFAULT_VERIFY_CAP
    params = {"h": args.h, "cap": cap}

    def compute():
        report = verify_theorem(args.h, cap=cap)
        rows = [
            {
                "i0": r.i0,
                "set": list(r.elements),
                "computed_size": r.computed_size,
                "predicted_size": r.predicted_size,
                "pass": r.passed,
            }
            for r in report.rows
        ]
        n_pass = sum(r.passed for r in report.rows)
        return {
            "h": args.h,
            "rows": rows,
            "all_passed": report.passed,
            "summary": f"h={args.h}: {n_pass}/{len(rows)} rows pass",
        }

    return params, compute


def _space_from_args(args, k_default=None) -> SearchSpace:
    _require(args.h is not None and args.h >= 1, "--h must be >= 1")
    k = args.k if args.k is not None else k_default
    _require(k is not None and k >= 2, "--k must be >= 2")
    n = args.max_element if args.max_element is not None else (args.h + 1) ** 2
    _require(n >= 1, "--max-element must be >= 1")
    return SearchSpace.canonical_all(k, n)


def cmd_range(args):
    space = _space_from_args(args)
    guard = args.guard if args.guard is not None else DEFAULT_GUARD
    params = {"h": args.h, "space": space.describe(), "guard": guard}
    return params, lambda: enumerate_sizes(args.h, space, guard=guard, jobs=args.jobs).to_dict()


def cmd_histogram(args):
    space = _space_from_args(args, k_default=4)
    guard = args.guard if args.guard is not None else DEFAULT_GUARD
    params = {"h": args.h, "space": space.describe(), "guard": guard}
    return params, lambda: popularity_histogram(
        args.h, space, guard=guard, jobs=args.jobs
    ).to_dict()


def cmd_scan1(args):
    _require(args.h is not None and args.h >= 1, "scan1 needs --h >= 1")
    if args.p is not None:
        _require(0 <= args.p <= args.h**2 - 1, f"--p must lie in [0, {args.h**2 - 1}]")
    params = {"h": args.h, "p": args.p}

    def compute():
        entries = problem1_scan(args.h)
        ps = [args.p] if args.p is not None else sorted(entries)
        return {
            "h": args.h,
            "rows": [
                {
                    "p": p,
                    "set": list(entries[p].elements),
                    "size": entries[p].size,
                    "degenerate": entries[p].degenerate,
                }
                for p in ps
            ],
        }

    return params, compute


def cmd_scan2(args):
    _require(args.h is not None and args.h >= 2, "scan2 needs --h >= 2")
    guard = args.guard if args.guard is not None else DEFAULT_GUARD
    params = {"h": args.h, "guard": guard}
    return params, lambda: problem2_scan(args.h, guard=guard, jobs=args.jobs).to_dict()


def cmd_decompose(args):
    _require(args.h is not None and args.h >= 1, "decompose needs --h >= 1")
    _require(
        args.i0 is not None and 0 <= args.i0 <= args.h - 1,
        f"decompose needs --i0 in [0, {args.h - 1}]",
    )
    params = {"h": args.h, "i0": args.i0}

    def compute():
        h = args.h
        family = popular_set(h, args.i0)
        layers = [layer_intervals(family, i) for i in range(h + 1)]
        members = [set(layer.elements()) for layer in layers]
        return {
            "h": h,
            "i0": args.i0,
            "p": family.p,
            "c": family.c,
            "set": list(family.elements),
            "predicted_size": predicted_popular_size(h, args.i0),
            "union_size": len(set().union(*members)),
            "disjointness_threshold": disjointness_threshold(family),
            "layers": [
                {
                    "i": layer.i,
                    "runs": [{"q": r.q, "j": r.j, "start": r.start, "stop": r.stop} for r in layer.runs],
                    "size": layer.size,
                    "formula_size": layer_size_formula(h, layer.i),
                }
                for layer in layers
            ],
            "intersections": [
                {
                    "i": i,
                    "t": t,
                    "size": len(members[i] & members[i + t]),
                    "formula_size": layer_intersection_size(family, i, t),
                }
                for i in range(h + 1)
                for t in range(1, h - i + 1)
            ],
        }

    return params, compute


COMMANDS: dict[str, Callable] = {
    "sumset": cmd_sumset,
    "verify": cmd_verify,
    "range": cmd_range,
    "histogram": cmd_histogram,
    "scan1": cmd_scan1,
    "scan2": cmd_scan2,
    "decompose": cmd_decompose,
}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------


def _csv_rows(command: str, results: dict) -> list[list]:
    if command == "sumset":
        return [["h", "input", "size", "sumset"],
                [results["h"], _join(results["input"]), results["size"], _join(results["sumset"])]]
    if command == "verify":
        rows = [["i0", "set", "computed_size", "predicted_size", "pass"]]
        rows += [[r["i0"], _join(r["set"]), r["computed_size"], r["predicted_size"], r["pass"]]
                 for r in results["rows"]]
        return rows
    if command in ("range", "scan2"):
        rows = [["size", "count", "witness"]]
        rows += [[s["size"], s["count"], _join(s["witness"])] for s in results["sizes"]]
        return rows
    if command == "histogram":
        targets = {t["size"] for t in results["popular_targets"]}
        rows = [["rank", "size", "count", "popular_target"]]
        rows += [[e["rank"], e["size"], e["count"], e["size"] in targets] for e in results["entries"]]
        return rows
    if command == "scan1":
        rows = [["p", "set", "size", "degenerate"]]
        rows += [[r["p"], _join(r["set"]), "" if r["size"] is None else r["size"], r["degenerate"]]
                 for r in results["rows"]]
        return rows
    if command == "decompose":
        rows = [["kind", "i", "t", "size", "formula_size"]]
        rows += [["layer", l["i"], "", l["size"], l["formula_size"]] for l in results["layers"]]
        rows += [["intersection", x["i"], x["t"], x["size"], x["formula_size"]]
                 for x in results["intersections"]]
        return rows
    raise ValueError(command)


def render(command: str, params: dict, results: dict, fmt: str, elapsed_ms: float) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(_csv_rows(command, results))
        return buf.getvalue()
    envelope = {
        "command": command,
        "params": params,
        "artifact_version": __version__,
        "results": results,
        "elapsed_ms": round(elapsed_ms, 3),
    }
    return json.dumps(envelope, sort_keys=True, indent=2) + "\n"


def cache_key(command: str, params: dict) -> str:
    blob = json.dumps(
        {"version": __version__, "command": command, "params": params}, sort_keys=True
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _run_cached(command: str, params: dict, compute, cache_dir: Optional[str]) -> dict:
    if cache_dir is None:
        return compute()
    path = Path(cache_dir) / f"{command}-{cache_key(command, params)}.json"
    if path.exists():
        return json.loads(path.read_text())
    results = compute()
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(results, sort_keys=True))
    tmp.replace(path)
    return results


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--guard", type=int, help="size guard: set count for enumerations, max h for verify")
    common.add_argument("--cache-dir", metavar="PATH", help="reuse results stored in this directory")
    common.add_argument("--h", type=int)
    common.add_argument("--k", type=int)
    common.add_argument("--i0", type=int)
    common.add_argument("--set", help="comma-separated integers, e.g. 0,1,4")
    common.add_argument("--max-element", type=int, help="search bound N (default (h+1)^2)")
    common.add_argument("--p", type=int)

    parser = _Parser(prog="sumsets", description="Exact h-fold sumset sizes of integer sets.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "sumset": "compute hA for one set",
        "verify": "check the 4-element family against its size formula",
        "range": "enumerate achieved sizes over canonical k-sets",
        "histogram": "size frequencies and ranks of the popular sizes",
        "scan1": "sizes of {0,1,h+1,h^2+h+1-p} for p in [0,h^2-1]",
        "scan2": "sizes over {0,1,a,b}, 2<=a<=h, a+1<=b<=ha+1",
        "decompose": "layer runs and intersection counts of the family",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        print("sumsets: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if args.guard is not None and args.guard < 1:
        print("sumsets: error: --guard must be >= 1", file=sys.stderr)
        return EXIT_USAGE

    start = time.perf_counter()
    try:
        params, compute = COMMANDS[args.command](args)
        results = _run_cached(args.command, params, compute, args.cache_dir)
    except GuardExceededError as exc:
        print(f"sumsets: refused: {exc} (estimate {exc.estimate})", file=sys.stderr)
        return EXIT_GUARD
    except (UsageError, SumsetError) as exc:
        print(f"sumsets: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    elapsed_ms = (time.perf_counter() - start) * 1000

    text = render(args.command, params, results, args.format, elapsed_ms)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)

    if args.command == "verify":
        print(results["summary"], file=sys.stderr)
        if not results["all_passed"]:
            return EXIT_VERIFY_FAILED
    return EXIT_OK
