"""Command-line front end.

    fracext check fpm  --circulant 5:1
    fracext check ext  --t 2 --circulant 9:1,3
    fracext check ext  --t 1 --edges k4bridge.txt
    fracext verify f2e --orders 5..27 --parity odd
    fracext census --orders 5..27
    fracext export --family Main_x:3 --format dot

Exit status: 0 when the property holds / the scan found no discrepancy, 1 when
it fails (a counter-certificate is printed), 2 on usage errors.  Stdout is
always a single JSON document (or the requested export format).
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import json
import sys
import time
from pathlib import Path

from . import __version__, kernels
from .classification import (
    FamilyError,
    FamilyId,
    construct_family,
    default_workers,
    family_census,
    near_extendability_scan,
    verify_theorem,
)
from .extendability import (
    DEFAULT_T_CAP,
    is_fractional_t_extendable,
    is_t_extendable_classical,
    is_t_near_extendable,
)
from .graphs import Graph, GraphError, cayley_graph, circulant
from .groups import GroupError, parse_cayley_spec
from .isomorphism import IsoBudgetExceeded
from .matching import NotExtendable, fpm_no_witness, fpm_yes_witness, has_fpm, has_perfect_matching, maximum_matching

MAX_SCAN_ORDER = 48


class UsageError(Exception):
    pass


@dataclasses.dataclass
class RunConfig:
    command: str
    graph: str | None = None
    t: int | None = None
    mode: str | None = None
    orders: list[int] | None = None
    parity: str | None = None
    deg_cap: int | None = None
    workers: int = 1
    output: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.workers < 1:
            raise UsageError("worker count must be >= 1")

    def to_json(self) -> dict:
        return {k: v for k, v in dataclasses.asdict(self).items() if v is not None}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _emit({"error": message, "usage": self.format_usage().strip()})
        sys.exit(2)


def _emit(doc: dict, output: str | None = None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if output:
        Path(output).write_text(text)
    sys.stdout.write(text)


def _timestamp(start: float) -> dict:
    return {
        "utc": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "elapsed_s": round(time.perf_counter() - start, 3),
    }


def parse_orders(text: str) -> list[int]:
    """``"3..20"``, ``"5,7,9"`` or a mix such as ``"5..9,15"``."""
    out: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ".." in part:
                lo, hi = part.split("..", 1)
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
        except ValueError:
            raise UsageError(f"bad order range token {part!r}") from None
    if not out:
        raise UsageError(f"empty order range {text!r}")
    return sorted(out)


def parse_circulant(text: str) -> Graph:
    """``"n:a,b,c"`` with one residue per ± pair."""
    if ":" not in text:
        raise UsageError(f"circulant spec {text!r} must look like 'n:a,b,c'")
    n_text, res_text = text.split(":", 1)
    tokens = [n_text] + [r for r in res_text.split(",") if r.strip()]
    for tok in tokens:
        try:
            int(tok)
        except ValueError:
            raise UsageError(f"bad token {tok.strip()!r} in circulant spec {text!r}") from None
    n = int(n_text)
    residues = [int(r) for r in tokens[1:]]
    if n < 2:
        raise UsageError(f"circulant order must be >= 2 in {text!r}")
    try:
        return circulant(n, residues)
    except GroupError as exc:
        raise UsageError(f"circulant {text!r}: {exc}") from None


def parse_cayley(text: str) -> Graph:
    """``"Z3xZ3:{(1,0),(1,1)}"``; non-canonical products are converted to invariant-factor form."""
    try:
        A, S = parse_cayley_spec(text)
    except GroupError as exc:
        raise UsageError(f"cayley spec {text!r}: {exc}") from None
    return cayley_graph(A, S)


def load_graph(args) -> tuple[Graph, str]:
    given = [(k, getattr(args, k)) for k in ("circulant", "cayley", "family", "edges", "graph_json") if getattr(args, k, None)]
    if len(given) != 1:
        raise UsageError("give exactly one of --circulant, --cayley, --family, --edges, --graph-json")
    kind, value = given[0]
    label = f"{kind}:{value}"
    try:
        if kind == "circulant":
            return parse_circulant(value), label
        if kind == "cayley":
            return parse_cayley(value), label
        if kind == "family":
            return construct_family(FamilyId.parse(value)), label
        if kind == "edges":
            return Graph.from_edgelist(Path(value).read_text(), label=Path(value).name), label
        return Graph.from_json(Path(value).read_text()), label
    except (FamilyError, GraphError, GroupError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"{label}: {exc}") from None
    except OSError as exc:
        raise UsageError(f"cannot read {value!r}: {exc.strerror}") from None


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("graph")
    g.add_argument("--circulant", metavar="N:A,B,...", help="Circ(N; ±A, ±B, ...)")
    g.add_argument("--cayley", metavar="GROUP:{...}", help='e.g. "Z3xZ3:{(1,0),(1,1)}"')
    g.add_argument("--family", metavar="NAME:PARAM", help="e.g. Main_x:3")
    g.add_argument("--edges", metavar="FILE", help="edge list 'n m' then 'u v' per line")
    g.add_argument("--graph-json", metavar="FILE", help="graph JSON as written by 'export --format json'")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracext", description="Fractional matching extendability with certificates.")
    parser.add_argument("--version", action="version", version=f"fracext {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", help="decide a property of one graph")
    check.add_argument("property", choices=["fpm", "ext", "pm", "near"])
    check.add_argument("--t", type=int, default=1)
    check.add_argument("--classical", action="store_true", help="with 'ext': classical t-extendability")
    check.add_argument("--symmetry", choices=["auto", "none", "cayley"], default="auto")
    check.add_argument("--t-cap", type=int, default=DEFAULT_T_CAP)
    check.add_argument("--timing", action="store_true", help="include elapsed time in stats")
    check.add_argument("--output", metavar="FILE")
    _add_graph_args(check)

    verify = sub.add_parser("verify", help="exhaustive scan against the classification")
    verify.add_argument("mode", choices=["f1e", "f2e"])
    verify.add_argument("--orders", required=True)
    verify.add_argument("--parity", choices=["odd", "even", "all"], default="all")
    verify.add_argument("--deg-cap", type=int)
    verify.add_argument("--no-dedup", action="store_true")
    verify.add_argument("--workers", type=int)
    verify.add_argument("--order-cap", type=int, default=MAX_SCAN_ORDER)
    verify.add_argument("--output", metavar="FILE")
    verify.add_argument("--seed", type=int, default=0)

    census = sub.add_parser("census", help="family members and overlaps per order")
    census.add_argument("--orders", required=True)
    census.add_argument("--output", metavar="FILE")

    probe = sub.add_parser("probe", help="exploratory scans (near vs fractional extendability)")
    probe.add_argument("what", choices=["near"])
    probe.add_argument("--orders", required=True)
    probe.add_argument("--t", type=int, action="append")
    probe.add_argument("--order-cap", type=int, default=MAX_SCAN_ORDER)
    probe.add_argument("--output", metavar="FILE")

    export = sub.add_parser("export", help="write a graph as DOT, JSON or an edge list")
    export.add_argument("--format", required=True)
    export.add_argument("--output", metavar="FILE")
    _add_graph_args(export)
    return parser


# -- commands ----------------------------------------------------------------------


def cmd_check(args) -> int:
    start = time.perf_counter()
    G, label = load_graph(args)
    config = RunConfig("check", graph=label, t=args.t if args.property in ("ext", "near") else None, mode=args.property)
    doc: dict = {"command": "check", "property": args.property, "config": config.to_json(), "backend": kernels.backend_name()}
    if args.property == "fpm":
        try:
            cert = fpm_yes_witness(G)
            ok = True
            doc.update(verdict=True, graph=G.to_json(), certificate=cert.to_json())
        except NotExtendable as exc:
            ok = False
            doc.update(verdict=False, graph=G.to_json(), witness=exc.witness.to_json())
    elif args.property == "pm":
        M = has_perfect_matching(G)
        ok = M is not None
        doc.update(verdict=ok, graph=G.to_json())
        if ok:
            doc["perfect_matching"] = M.to_json()
        else:
            best = maximum_matching(G)
            doc["maximum_matching"] = best.to_json()
            doc["fractional_perfect_matching"] = has_fpm(G)
            if not doc["fractional_perfect_matching"]:
                doc["witness"] = fpm_no_witness(G).to_json()
    else:
        if args.property == "near":
            check_fn = is_t_near_extendable
        elif args.classical:
            check_fn = is_t_extendable_classical
        else:
            check_fn = is_fractional_t_extendable
        try:
            report = check_fn(G, args.t, symmetry=args.symmetry, t_cap=args.t_cap)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        ok = report.verdict
        doc.update(report.to_json(timing=args.timing))
        doc["property"] = args.property
    doc["timestamp"] = _timestamp(start)
    _emit(doc, args.output)
    return 0 if ok else 1


def cmd_verify(args) -> int:
    start = time.perf_counter()
    orders = parse_orders(args.orders)
    if max(orders) > args.order_cap:
        raise UsageError(f"order {max(orders)} exceeds the scan cap {args.order_cap}")
    workers = args.workers if args.workers is not None else default_workers()
    config = RunConfig("verify", mode=args.mode, orders=orders, parity=args.parity, deg_cap=args.deg_cap,
                       workers=workers, output=args.output, seed=args.seed)
    try:
        report = verify_theorem(args.mode, orders, args.parity, args.deg_cap, not args.no_dedup, workers)
    except IsoBudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    doc = {"command": "verify", "config": config.to_json(), "backend": kernels.backend_name()}
    doc.update(report.to_json())
    doc["timestamp"] = _timestamp(start)
    _emit(doc, args.output)
    _summary_table(report)
    return 0 if report.verified else 1


def _summary_table(report) -> None:
    lines = [f"{'order':>5} {'groups':>6} {'instances':>9} {'dedup':>7} {'non-ext':>7} {'discrepancies':>13}"]
    for o in report.per_order:
        lines.append(f"{o.order:>5} {o.groups:>6} {o.instances:>9} {o.dedup_factor:>7.2f} {o.non_extendable:>7} {o.discrepancies:>13}")
    lines.append(f"{report.mode}: {report.instances} instances, {len(report.discrepancies)} discrepancies")
    print("\n".join(lines), file=sys.stderr)


def cmd_census(args) -> int:
    start = time.perf_counter()
    orders = parse_orders(args.orders)
    rows = family_census(orders)
    doc = {"command": "census", "config": RunConfig("census", orders=orders).to_json(),
           "rows": [r.to_json() for r in rows], "timestamp": _timestamp(start)}
    _emit(doc, args.output)
    return 0


def cmd_probe(args) -> int:
    start = time.perf_counter()
    orders = parse_orders(args.orders)
    if max(orders) > args.order_cap:
        raise UsageError(f"order {max(orders)} exceeds the scan cap {args.order_cap}")
    t_values = args.t or [1, 2]
    rows = near_extendability_scan(orders, t_values)
    violations = [r for r in rows if not r.consistent]
    doc = {
        "command": "probe",
        "config": RunConfig("probe", orders=orders, mode="near").to_json(),
        "instances": len(rows),
        "violations": [dataclasses.asdict(r) for r in violations],
        "fractional_not_near": [dataclasses.asdict(r) for r in rows if r.fractional and not r.near_half],
        "timestamp": _timestamp(start),
    }
    _emit(doc, args.output)
    return 1 if violations else 0


def cmd_export(args) -> int:
    G, _ = load_graph(args)
    fmt = args.format.lower()
    if fmt == "dot":
        text = G.to_dot()
    elif fmt == "json":
        text = json.dumps(G.to_json(), indent=2) + "\n"
    elif fmt == "edgelist":
        text = G.to_edgelist()
    else:
        raise UsageError(f"unknown export format {args.format!r}; expected dot, json or edgelist")
    if args.output:
        Path(args.output).write_text(text)
    sys.stdout.write(text)
    return 0


COMMANDS = {"check": cmd_check, "verify": cmd_verify, "census": cmd_census, "probe": cmd_probe, "export": cmd_export}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        _emit({"error": str(exc)})
        print(f"fracext: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
