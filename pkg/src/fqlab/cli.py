"""Command line front end.

Subcommands
    sieve      member count of one sieved set at a single limit
    density    cumulative counts at ascending checkpoint limits
    fq         finite quotient orders of a presented group
    oq         the odd orders among those
    classify   density class of the quotient-order set, with witnesses
    smooth     quotients of a free product where every factor survives
    census     graph orders certified by a quotient search
    graphs     build a parametric graph, emit its edge list or report
    verify     run the verification sweeps and print a pass/fail table

The primary output is CSV (for ``graphs`` without ``--report``, the
edge-list text format), written to ``--csv``/``--out`` or stdout.
``--manifest PATH`` additionally records the run as key,value rows:
subcommand, every parameter, a digest of every input file, the tool
version, wall time and a completeness flag.  Runs with the same
parameters produce byte-identical primary output; only the manifest's
wall time varies.

Exit codes: 0 success; 2 usage errors and malformed input; 3 exhausted
search budgets, including partial results kept under ``--allow-partial``;
4 a violated internal invariant, or any failed ``verify`` row.  The
environment variable ``FQLAB_BUDGET`` overrides the default node budget
of the quotient searches.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .catalog import load_catalog
from .errors import (
    EnumerationUndecided,
    GroupTooLargeError,
    InputSyntaxError,
    InternalInvariantError,
    ResourceBudgetError,
    SearchBudgetError,
)
from .fpgroup import classify_density, fq_up_to, oq_up_to, parse_presentation, smooth_quotients
from .graphs import (
    GraphAction,
    amalgam_census,
    build_sw,
    build_w,
    cubic_census,
    graph_from_edges,
    graph_to_text,
    odd_edge_core,
    transitivity_report,
)
from .numtheory import SieveSet, density_series, factor, np_contains, parse_set_name
from .permgroup import (
    close,
    is_transitive,
    normal_sylow_quotient,
    verify_odd_quotient,
    verify_quasiprimitive_odd,
    verify_restricted_quotient,
)

BUDGET_ERRORS = (SearchBudgetError, EnumerationUndecided, ResourceBudgetError, GroupTooLargeError)

RESTRICTED_MODULI = (1, 2, 3, 4, 5, 6)


@dataclass
class CommandOutput:
    """What a subcommand produced, before any of it touches disk."""

    header: tuple[str, ...] | None
    rows: list[tuple]
    complete: bool = True
    text: str | None = None
    files: dict[str, str] = field(default_factory=dict)
    inputs: list[str] = field(default_factory=list)
    failures: int = 0


@dataclass(frozen=True)
class RunManifest:
    """Reproducibility record of one invocation."""

    subcommand: str
    parameters: tuple[tuple[str, str], ...]
    inputs: tuple[tuple[str, str], ...]
    version: str
    wall_ms: int
    complete: bool

    def rows(self) -> list[tuple[str, str]]:
        out = [("subcommand", self.subcommand)]
        out.extend((f"parameter:{k}", v) for k, v in self.parameters)
        out.extend((f"input:{path}", digest) for path, digest in self.inputs)
        out.append(("version", self.version))
        out.append(("wall_ms", str(self.wall_ms)))
        out.append(("complete", _bool_text(self.complete)))
        return out


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def _csv_text(header: tuple[str, ...] | None, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if header is not None:
        writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _table_csv(table) -> str:
    header = ["coset"]
    for name in table.pres.generator_names:
        header.extend((name, name + "^-1"))
    rows = [[i, *row] for i, row in enumerate(table.rows)]
    return _csv_text(tuple(header), rows)


def _digest(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as err:
        raise InputSyntaxError(f"cannot read {path}: {err.strerror}") from err


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"{flag} wants comma-separated integers, got {text!r}") from None
    if not values:
        raise ValueError(f"{flag} wants at least one integer")
    return values


def _resolve_set(args: argparse.Namespace) -> SieveSet:
    if args.set == "np":
        if args.p is None:
            raise ValueError("--set np needs --p")
        return SieveSet("np", args.p)
    if args.set == "sp":
        if args.a is None:
            raise ValueError("--set sp needs --a")
        return SieveSet("sp", args.a)
    return parse_set_name(args.set)


# --- subcommand handlers ---


def _run_sieve(args: argparse.Namespace) -> CommandOutput:
    series = density_series(_resolve_set(args), [args.limit], threads=args.threads)
    cp = series.checkpoints[0]
    return CommandOutput(("limit", "count", "density"), [(cp.limit, cp.count, cp.ratio)])


def _run_density(args: argparse.Namespace) -> CommandOutput:
    checkpoints = _parse_int_list(args.checkpoints, "--checkpoints")
    series = density_series(_resolve_set(args), checkpoints, threads=args.threads)
    rows = [(cp.limit, cp.count, cp.ratio) for cp in series.checkpoints]
    return CommandOutput(("limit", "count", "density"), rows)


def _quotient_output(args: argparse.Namespace, result) -> CommandOutput:
    files = {}
    if getattr(args, "emit_tables", None):
        for order in result.orders:
            path = os.path.join(args.emit_tables, f"table_{order}.csv")
            files[path] = _table_csv(result.certificates[order])
    rows = [(order,) for order in result.orders]
    return CommandOutput(("order",), rows, complete=result.complete, files=files)


def _run_fq(args: argparse.Namespace) -> CommandOutput:
    pres = parse_presentation(_read_text(args.presentation))
    search = oq_up_to if getattr(args, "odd_only", False) else fq_up_to
    result = search(pres, args.max_index, allow_partial=args.allow_partial)
    out = _quotient_output(args, result)
    out.inputs = [args.presentation]
    return out


def _run_oq(args: argparse.Namespace) -> CommandOutput:
    args.odd_only = True
    return _run_fq(args)


def _run_classify(args: argparse.Namespace) -> CommandOutput:
    pres = parse_presentation(_read_text(args.presentation))
    dc = classify_density(pres)
    density = {2: "1", 1: "1/2", 0: "0"}[dc.density_numerator]
    rows = [
        ("classification", dc.tag),
        ("density", density),
        ("abelian_invariants", " ".join(str(d) for d in dc.abelian_invariants)),
    ]
    if dc.cyclic_witness is not None:
        rows.append(("cyclic_witness", " ".join(str(c) for c in dc.cyclic_witness)))
    if dc.dihedral_generator is not None:
        rows.append(("dihedral_generator", pres.generator_names[dc.dihedral_generator]))
        rows.append(("dihedral_functional", " ".join(str(c) for c in dc.dihedral_functional)))
    if dc.index_two_checked is not None:
        rows.append(("index_two_checked", str(dc.index_two_checked)))
    return CommandOutput(("key", "value"), rows, inputs=[args.presentation])


def _run_smooth(args: argparse.Namespace) -> CommandOutput:
    orders = tuple(_parse_int_list(args.orders, "--orders"))
    result = smooth_quotients(orders, args.max_index, allow_partial=args.allow_partial)
    return _quotient_output(args, result)


def _run_census(args: argparse.Namespace) -> CommandOutput:
    if (args.presentation is None) != (args.stabilizer_order is None):
        raise ValueError("--presentation and --stabilizer-order go together")
    inputs = []
    if args.presentation is None:
        result = cubic_census(args.max_index, allow_partial=args.allow_partial)
    else:
        pres = parse_presentation(_read_text(args.presentation))
        inputs.append(args.presentation)
        result = amalgam_census(
            pres, args.stabilizer_order, args.max_index, allow_partial=args.allow_partial
        )
    rows = []
    files = {}
    for entry in result.entries:
        note = "possibly non-simple" if entry.flagged else ""
        rows.append((entry.order, entry.certificate_index, note))
        if args.emit_tables:
            path = os.path.join(args.emit_tables, f"table_{entry.certificate_index}.csv")
            files[path] = _table_csv(entry.table)
    header = ("order", "certificate_index", "flagged")
    return CommandOutput(header, rows, complete=result.complete, files=files, inputs=inputs)


def _run_graphs(args: argparse.Namespace) -> CommandOutput:
    build = build_w if args.family == "w" else build_sw
    action = build(args.k, args.r)
    if not args.report:
        return CommandOutput(None, [], text=graph_to_text(action.graph))
    rep = transitivity_report(action)
    shapes = ";".join(f"{v}:{s.tag}:{s.parameter}" for v, s in rep.local_shapes)
    rows = [
        ("vertex_transitive", _bool_text(rep.vertex_transitive)),
        ("edge_transitive", _bool_text(rep.edge_transitive)),
        ("arc_transitive", _bool_text(rep.arc_transitive)),
        ("locally_transitive", _bool_text(rep.locally_transitive)),
        ("vertex_orbit_count", str(rep.vertex_orbit_count)),
        ("edge_orbit_count", str(rep.edge_orbit_count)),
        ("local_shapes", shapes),
    ]
    return CommandOutput(("key", "value"), rows)


# --- verify sweeps ---


def _cycle_graph(n: int):
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def _graph_fixtures() -> list[tuple[str, GraphAction]]:
    star = graph_from_edges(4, [(0, 1), (0, 2), (0, 3)])
    k4 = graph_from_edges(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])
    k33 = graph_from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])
    rot5 = tuple((i + 1) % 5 for i in range(5))
    ref5 = tuple(-i % 5 for i in range(5))
    rot6 = tuple((i + 1) % 6 for i in range(6))
    return [
        ("cycle5_dihedral", GraphAction(_cycle_graph(5), close((rot5, ref5), 5))),
        ("cycle6_rotations", GraphAction(_cycle_graph(6), close((rot6,), 6))),
        ("star4_leaf_swaps", GraphAction(star, close(((0, 2, 1, 3), (0, 1, 3, 2)), 4))),
        ("k4_even", GraphAction(k4, close(((1, 2, 0, 3), (1, 0, 3, 2)), 4))),
        (
            "k33_two_sided",
            GraphAction(
                k33,
                close(((1, 2, 0, 3, 4, 5), (0, 1, 2, 4, 5, 3), (3, 4, 5, 0, 1, 2)), 6),
            ),
        ),
        ("w_1_5", build_w(1, 5)),
        ("w_2_3", build_w(2, 3)),
        ("w_2_4", build_w(2, 4)),
        ("sw_1_3", build_sw(1, 3)),
        ("sw_2_2", build_sw(2, 2)),
        ("sw_2_3", build_sw(2, 3)),
    ]


def _implications_hold(action: GraphAction) -> bool:
    """Re-check the transitivity implications from outside the report."""
    rep = transitivity_report(action)
    graph = action.graph
    ok = True
    if rep.arc_transitive:
        ok = ok and rep.edge_transitive
    if graph.is_connected and rep.locally_transitive:
        ok = ok and rep.edge_transitive
    if rep.edge_transitive and all(graph.adjacency):
        ok = ok and rep.vertex_orbit_count <= 2
    regular_even = graph.is_regular and graph.vertex_count > 0 and graph.degree(0) % 2 == 0
    if graph.is_connected and rep.edge_transitive and not regular_even:
        ok = ok and rep.locally_transitive
    return ok


ODD_CORE_FIXTURES = ("cycle5_dihedral", "k4_even", "k33_two_sided")


def _run_verify(args: argparse.Namespace) -> CommandOutput:
    groups = load_catalog(args.fixtures)
    rows: list[tuple[str, str, str]] = []
    failures = 0

    def add(check: str, subject: str, ok: bool) -> None:
        nonlocal failures
        rows.append((check, subject, "pass" if ok else "fail"))
        if not ok:
            failures += 1

    def attempt(fn) -> bool:
        try:
            return bool(fn())
        except InternalInvariantError:
            return False

    for name, group in groups.items():
        add("odd_quotient", name, attempt(lambda: verify_odd_quotient(group).passed))

    for name, group in groups.items():
        n = group.order
        for p, _ in factor(n).factors:
            if not np_contains(n, p):
                continue
            add(
                "sylow_quotient",
                f"{name}@{p}",
                attempt(lambda: normal_sylow_quotient(group, p) is not None),
            )

    for name, group in groups.items():
        add(
            "restricted_quotient",
            name,
            attempt(
                lambda: all(
                    verify_restricted_quotient(group, a).passed for a in RESTRICTED_MODULI
                )
            ),
        )

    for name, group in groups.items():
        if not is_transitive(group):
            continue
        add(
            "quasiprimitive_odd",
            name,
            attempt(lambda: verify_quasiprimitive_odd(group).passed),
        )

    fixtures = _graph_fixtures()
    for name, action in fixtures:
        add("graph_implications", name, attempt(lambda: _implications_hold(action)))

    for name, action in fixtures:
        if name not in ODD_CORE_FIXTURES:
            continue
        edge = action.graph.edges[0]
        add("odd_edge_core", name, attempt(lambda: odd_edge_core(action, edge).passed))

    inputs = [args.fixtures] if args.fixtures else []
    header = ("check", "subject", "result")
    return CommandOutput(header, rows, inputs=inputs, failures=failures)


# --- parser and dispatch ---


def _add_output_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--csv", metavar="PATH", help="write the primary table here instead of stdout")
    sp.add_argument("--manifest", metavar="PATH", help="write a key,value record of the run")
    sp.add_argument("--threads", type=int, default=1, help="worker threads for sieving")


def _add_search_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument(
        "--allow-partial",
        action="store_true",
        help="keep results found before the budget ran out and exit 3",
    )
    sp.add_argument(
        "--emit-tables", metavar="DIR", help="write one coset table CSV per certificate"
    )


def _add_set_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--set", required=True, help="all, np, sp, np:<p> or sp:<a>")
    sp.add_argument("--p", type=int, help="prime, with --set np")
    sp.add_argument("--a", type=int, help="modulus, with --set sp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fqlab",
        description="Quotient-order enumeration, divisor-class sieves and graph transitivity checks.",
    )
    parser.add_argument("--version", action="version", version=f"fqlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

    sp = sub.add_parser("sieve", help="count set members up to one limit")
    _add_set_options(sp)
    sp.add_argument("--limit", type=int, required=True)
    _add_output_options(sp)
    sp.set_defaults(handler=_run_sieve)

    sp = sub.add_parser("density", help="count set members at several limits")
    _add_set_options(sp)
    sp.add_argument("--checkpoints", required=True, help="comma-separated ascending limits")
    _add_output_options(sp)
    sp.set_defaults(handler=_run_density)

    sp = sub.add_parser("fq", help="finite quotient orders of a presented group")
    sp.add_argument("--presentation", required=True, metavar="PATH")
    sp.add_argument("--max-index", type=int, required=True)
    sp.add_argument("--odd-only", action="store_true", help="keep only odd orders")
    _add_search_options(sp)
    _add_output_options(sp)
    sp.set_defaults(handler=_run_fq)

    sp = sub.add_parser("oq", help="odd finite quotient orders")
    sp.add_argument("--presentation", required=True, metavar="PATH")
    sp.add_argument("--max-index", type=int, required=True)
    _add_search_options(sp)
    _add_output_options(sp)
    sp.set_defaults(handler=_run_oq)

    sp = sub.add_parser("classify", help="density class of the quotient-order set")
    sp.add_argument("--presentation", required=True, metavar="PATH")
    _add_output_options(sp)
    sp.set_defaults(handler=_run_classify)

    sp = sub.add_parser("smooth", help="free-product quotients where every factor survives")
    sp.add_argument("--orders", required=True, help="comma-separated cyclic factor orders")
    sp.add_argument("--max-index", type=int, required=True)
    _add_search_options(sp)
    _add_output_options(sp)
    sp.set_defaults(handler=_run_smooth)

    sp = sub.add_parser("census", help="graph orders certified by a quotient search")
    sp.add_argument("--max-index", type=int, required=True)
    sp.add_argument("--presentation", metavar="PATH", help="amalgam presentation to search")
    sp.add_argument("--stabilizer-order", type=int, help="vertex stabilizer order of the amalgam")
    _add_search_options(sp)
    _add_output_options(sp)
    sp.set_defaults(handler=_run_census)

    sp = sub.add_parser("graphs", help="build a parametric graph")
    sp.add_argument("--family", required=True, choices=("w", "sw"))
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--report", action="store_true", help="emit the transitivity report instead")
    sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    sp.add_argument("--manifest", metavar="PATH", help="write a key,value record of the run")
    sp.add_argument("--threads", type=int, default=1, help=argparse.SUPPRESS)
    sp.set_defaults(handler=_run_graphs)

    sp = sub.add_parser("verify", help="run the verification sweeps")
    sp.add_argument("--fixtures", metavar="PATH", help="group catalog file replacing the built-in")
    _add_output_options(sp)
    sp.set_defaults(handler=_run_verify)

    return parser


_INTERNAL_KEYS = ("handler", "subcommand")


def _manifest_parameters(args: argparse.Namespace) -> tuple[tuple[str, str], ...]:
    out = []
    for key in sorted(vars(args)):
        if key in _INTERNAL_KEYS:
            continue
        value = getattr(args, key)
        if value is None:
            text = ""
        elif isinstance(value, bool):
            text = _bool_text(value)
        else:
            text = str(value)
        out.append((key, text))
    return tuple(out)


def _write_files(out: CommandOutput, args: argparse.Namespace, wall_ms: int) -> None:
    payload = out.text if out.text is not None else _csv_text(out.header, out.rows)
    primary = getattr(args, "csv", None) or getattr(args, "out", None)
    if primary:
        with open(primary, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)
    for path, content in out.files.items():
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(content)
    if getattr(args, "manifest", None):
        manifest = RunManifest(
            subcommand=args.subcommand,
            parameters=_manifest_parameters(args),
            inputs=tuple((path, _digest(path)) for path in out.inputs),
            version=__version__,
            wall_ms=wall_ms,
            complete=out.complete and out.failures == 0,
        )
        with open(args.manifest, "w", encoding="utf-8") as fh:
            fh.write(_csv_text(("key", "value"), manifest.rows()))


def dispatch(argv=None) -> int:
    """Parse arguments, run one subcommand and map errors to exit codes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    start = time.monotonic()
    try:
        out = args.handler(args)
    except (InputSyntaxError, ValueError) as err:
        print(f"fqlab: error: {err}", file=sys.stderr)
        return 2
    except BUDGET_ERRORS as err:
        print(f"fqlab: budget exhausted: {err}", file=sys.stderr)
        return 3
    except InternalInvariantError as err:
        print(f"fqlab: internal invariant violated: {err}", file=sys.stderr)
        return 4
    wall_ms = int((time.monotonic() - start) * 1000)
    _write_files(out, args, wall_ms)
    if out.failures:
        print(f"fqlab: {out.failures} verification row(s) failed", file=sys.stderr)
        return 4
    if not out.complete:
        print("fqlab: partial result, budget ran out", file=sys.stderr)
        return 3
    return 0


def main() -> None:
    raise SystemExit(dispatch())
