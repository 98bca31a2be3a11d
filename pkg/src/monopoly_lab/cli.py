"""
Command-line entry point: `monopoly-lab <subcommand> ...`.

Exit codes: 0 success, 1 verification or check failure, 2 usage/parse/parameter/regime
error, 3 inconclusive solve.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Sequence

from rich.console import Console
from rich.table import Table

from .config import AppConfig, configure_logging, load_config
from .data import dao
from .data.db import get_engine, get_session
from .domain.engine import Kind, VertexSet, activate, is_dynamic_monopoly, is_static_monopoly
from .domain.errors import ConstructionError, InvalidParameterError, MonopolyLabError, ParseError
from .domain.graph import (
    Graph,
    GridCoord,
    cartesian_product,
    complete,
    complete_bipartite,
    cycle,
    line_graph,
    parse_graph_spec,
    star,
)
from .domain.thresholds import ThresholdAssignment, constant_threshold, simple_majority, strict_majority
from .services import bounds, constructions
from .services.checks import BUNDLES, CheckRunner, CheckSettings
from .services.documents import (
    CheckReportDoc,
    OutcomeDoc,
    bound_to_doc,
    construction_to_doc,
    dump_document,
    load_thresholds,
    load_vertex_set,
    render_graph,
    solve_to_doc,
    trace_to_doc,
)
from .services.solver import SearchBudget, SolveStatus, cached_solve, solve
from .ui.grid import render_grid, render_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

GENERATORS = {
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "star": (star, 1),
    "complete-bipartite": (complete_bipartite, 2),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="monopoly-lab", description="Threshold monopolies and dynamos on graphs.")
    parser.add_argument("--config", type=Path, help="TOML configuration file")
    parser.add_argument("--log-level", help="logging level (overrides configuration)")
    parser.add_argument("--db", help="SQLite database path, or :memory:")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a base graph")
    gen.add_argument("family", choices=sorted(GENERATORS))
    gen.add_argument("sizes", type=int, nargs="+")
    gen.add_argument("--line", action="store_true", help="emit the line graph instead")
    _add_output(gen)

    product = sub.add_parser("product", help="Cartesian product of two graphs")
    product.add_argument("left", help="graph spec for the row factor, e.g. C5")
    product.add_argument("right", help="graph spec for the column factor, e.g. K4")
    _add_output(product)

    construct = sub.add_parser("construct", help="build a named construction")
    construct.add_argument("--family", required=True, choices=sorted(constructions.FAMILIES))
    for name in ("m", "n", "k", "t"):
        construct.add_argument(f"--{name}", type=int)
    construct.add_argument("--grid", action="store_true", help="also print the ASCII grid")
    construct.add_argument("-o", "--output", type=Path)

    for name, summary in (("verify", "check a monopoly or dynamo"), ("trace", "run the activation process")):
        cmd = sub.add_parser(name, help=summary)
        _add_instance(cmd)
        _add_vertex_set(cmd)
        if name == "verify":
            cmd.add_argument("--kind", choices=[k.value for k in Kind], required=True)
        else:
            cmd.add_argument("--grid", action="store_true", help="print per-round grid snapshots")

    solve_cmd = sub.add_parser("solve", help="exact minimum monopoly or dynamo")
    _add_instance(solve_cmd)
    solve_cmd.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    solve_cmd.add_argument("--lb", type=int, help="start the search at this size")
    solve_cmd.add_argument("--threads", type=int)
    solve_cmd.add_argument("--max-candidates", type=int)
    solve_cmd.add_argument("--time-limit", type=float)
    solve_cmd.add_argument("--no-cache", action="store_true")
    solve_cmd.add_argument("--grid", action="store_true")

    bound = sub.add_parser("bound", help="evaluate closed-form bounds")
    bound.add_argument("--name", choices=sorted(bounds.BOUNDS), help="omit to list every bound the parameters fit")
    bound.add_argument("--params", nargs="*", default=[], metavar="KEY=VALUE")

    check = sub.add_parser("check-theorem", help="run an acceptance bundle")
    check.add_argument("bundle", choices=["all", *BUNDLES])
    check.add_argument("--seed", type=int)
    check.add_argument("--random-graphs", type=int)
    check.add_argument("--max-dimension", type=int)
    check.add_argument("--json", action="store_true", help="emit the reports as JSON")
    check.add_argument("--no-db", action="store_true", help="do not record the run")

    sub.add_parser("browse", help="open the interactive browser")
    return parser


def _add_output(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--json", action="store_true", help="JSON document instead of an edge list")
    cmd.add_argument("-o", "--output", type=Path)


def _add_instance(cmd: argparse.ArgumentParser) -> None:
    cmd.add_argument("--graph", required=True, help="graph spec (C5, K3xK3, L(K3,3)) or file")
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--t", type=int, help="constant threshold")
    group.add_argument("--majority", choices=["simple", "strict"])
    group.add_argument("--thresholds", type=Path, help="thresholds JSON file")
    cmd.add_argument("--allow-excess", action="store_true", help="let a constant threshold exceed low degrees")


def _add_vertex_set(cmd: argparse.ArgumentParser) -> None:
    group = cmd.add_mutually_exclusive_group(required=True)
    group.add_argument("--set", dest="set_file", type=Path, help="vertex-set JSON file")
    group.add_argument("--members", help="comma-separated vertex ids")
    group.add_argument("--cells", help="grid cells as 'i,j i,j ...' (1-based)")


def _thresholds(args: argparse.Namespace, g: Graph) -> ThresholdAssignment:
    if args.t is not None:
        return constant_threshold(g, args.t, allow_excess=args.allow_excess)
    if args.majority == "simple":
        return simple_majority(g)
    if args.majority == "strict":
        return strict_majority(g)
    return load_thresholds(args.thresholds, g)


def _vertex_set(args: argparse.Namespace, g: Graph) -> VertexSet:
    if args.set_file is not None:
        return load_vertex_set(args.set_file, g)
    try:
        if args.members is not None:
            members = [int(v) for v in args.members.replace(",", " ").split()]
            g.check_vertices(members)
            return VertexSet.of(members)
        cells = [GridCoord(*(int(x) for x in cell.split(","))) for cell in args.cells.split()]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"cannot read vertex set: {exc}") from exc
    return VertexSet.from_coords(g, cells)


class Cli:
    def __init__(self, args: argparse.Namespace, config: AppConfig) -> None:
        self.args = args
        self.config = config
        self.console = Console(highlight=False)

    def emit(self, text: str, output: Path | None = None) -> None:
        if output is not None:
            output.write_text(text, encoding="utf-8")
            logger.info("wrote %s", output)
        else:
            sys.stdout.write(text)

    def grid(self, g: Graph, s: VertexSet) -> str:
        return render_grid(g, s, member=self.config.grid_member_char, empty=self.config.grid_empty_char)

    def session(self):
        engine = get_engine(self.config.database_path)
        session = get_session(engine)
        dao.init_db(session)
        return session

    def gen(self) -> int:
        func, arity = GENERATORS[self.args.family]
        if len(self.args.sizes) != arity:
            raise InvalidParameterError(f"{self.args.family} takes {arity} size(s), got {len(self.args.sizes)}")
        g = func(*self.args.sizes)
        if self.args.line:
            g = line_graph(g)
        self.emit(render_graph(g, self.args.json), self.args.output)
        return EXIT_OK

    def product(self) -> int:
        g = cartesian_product(parse_graph_spec(self.args.left), parse_graph_spec(self.args.right))
        self.emit(render_graph(g, self.args.json), self.args.output)
        return EXIT_OK

    def construct(self) -> int:
        params = {name: getattr(self.args, name) for name in ("m", "n", "k", "t")}
        c = constructions.build(self.args.family, **params)
        self.emit(dump_document(construction_to_doc(c)), self.args.output)
        if self.args.grid:
            self.console.print(f"{c.graph.name}, {c.tau.describe()}: {c.kind.value} of size {c.size}")
            sys.stdout.write(self.grid(c.graph, c.vertex_set))
        return EXIT_OK

    def verify(self) -> int:
        g = parse_graph_spec(self.args.graph)
        tau = _thresholds(self.args, g)
        s = _vertex_set(self.args, g)
        if Kind(self.args.kind) is Kind.MONOPOLY:
            check = is_static_monopoly(g, tau, s)
            if check.ok:
                self.console.print(f"pass: {len(s)} vertices form a {tau.describe()} monopoly of {g.name}")
                return EXIT_OK
            where = f"{check.witness} {g.coord_of(check.witness)}" if g.is_labeled else str(check.witness)
            self.console.print(f"fail: vertex {where} has {check.have} of {check.need} required neighbors in the set")
            return EXIT_FAILED
        if is_dynamic_monopoly(g, tau, s):
            self.console.print(f"pass: {len(s)} vertices form a {tau.describe()} dynamo of {g.name}")
            return EXIT_OK
        trace = activate(g, tau, s)
        self.console.print(f"fail: activation stops after {trace.rounds} rounds with {len(trace.activated)} of {g.vertex_count} active")
        return EXIT_FAILED

    def trace(self) -> int:
        g = parse_graph_spec(self.args.graph)
        tau = _thresholds(self.args, g)
        trace = activate(g, tau, _vertex_set(self.args, g))
        self.emit(dump_document(trace_to_doc(trace)))
        if self.args.grid:
            sys.stdout.write(render_trace(g, trace))
        return EXIT_OK

    def solve(self) -> int:
        g = parse_graph_spec(self.args.graph)
        tau = _thresholds(self.args, g)
        kind = Kind(self.args.kind)
        budget = SearchBudget(
            self.args.max_candidates if self.args.max_candidates is not None else self.config.solver_max_candidates,
            self.args.time_limit if self.args.time_limit is not None else self.config.solver_time_limit_seconds,
        )
        threads = self.args.threads or self.config.solver_threads
        if self.args.lb is not None:
            result = solve(g, tau, kind, budget=budget, lb=self.args.lb, threads=threads)
        elif self.config.solver_cache_enabled and not self.args.no_cache:
            session = self.session()
            try:
                result = cached_solve(session, g, tau, kind, budget=budget, threads=threads)
            finally:
                session.close()
        else:
            result = solve(g, tau, kind, budget=budget, threads=threads)
        self.emit(dump_document(solve_to_doc(result, g, tau)))
        if self.args.grid and result.witness is not None and g.is_labeled:
            sys.stdout.write(self.grid(g, result.witness))
        return EXIT_OK if result.status is SolveStatus.SOLVED else EXIT_INCONCLUSIVE

    def bound(self) -> int:
        params: dict[str, int] = {}
        for item in self.args.params:
            key, sep, value = item.partition("=")
            if not sep:
                raise ParseError(f"expected KEY=VALUE, got {item!r}")
            try:
                params[key.strip()] = int(value)
            except ValueError:
                raise ParseError(f"parameter {key} is not an integer: {value!r}") from None
        if self.args.name:
            report = bounds.evaluate(self.args.name, **params)
            if not report.applicable:
                logger.warning("%s does not apply: %s", report.name, report.reason)
            self.emit(dump_document(bound_to_doc(report)))
            return EXIT_OK
        reports = bounds.applicable_bounds(**params)
        if not reports:
            raise InvalidParameterError("no bound takes exactly these parameters")
        table = Table("bound", "direction", "value", "certificate", "note")
        for r in reports:
            note = "" if r.applicable else (r.reason or "not applicable")
            value = "" if r.value is None else str(r.value)
            certificate = "" if r.certificate is None else str(r.certificate)
            table.add_row(r.name, r.direction.value, value, certificate, note)
        self.console.print(table)
        return EXIT_OK

    def check_theorem(self) -> int:
        base = CheckSettings.from_config(self.config)
        settings = dataclasses.replace(
            base,
            seed=self.args.seed if self.args.seed is not None else base.seed,
            random_graphs=self.args.random_graphs or base.random_graphs,
            max_dimension=self.args.max_dimension or base.max_dimension,
        )
        session = None if self.args.no_db else self.session()
        try:
            reports = CheckRunner(session, self.config, settings).run(self.args.bundle)
        finally:
            if session is not None:
                session.close()
        if self.args.json:
            for r in reports:
                doc = CheckReportDoc(
                    bundle=r.bundle,
                    seed=r.seed,
                    passed=r.passed,
                    failed=r.failed,
                    outcomes=[OutcomeDoc(instance=o.instance, passed=o.passed, detail=o.detail) for o in r.outcomes],
                )
                self.emit(dump_document(doc))
        else:
            table = Table("bundle", "passed", "failed", "run")
            for r in reports:
                style = "green" if r.ok else "red"
                table.add_row(r.bundle, str(r.passed), f"[{style}]{r.failed}[/]", str(r.run_id or "-"))
            self.console.print(table)
            for r in reports:
                for o in r.outcomes:
                    if not o.passed:
                        self.console.print(f"[red]FAIL[/] {r.bundle}: {o.instance}: {o.detail}")
        return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILED

    def browse(self) -> int:
        from .app import MonopolyLab

        MonopolyLab(self.config).run()
        return EXIT_OK


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    config = load_config(args.config)
    if args.db:
        config.database_path = Path(args.db)
    configure_logging(args.log_level or config.log_level)
    cli = Cli(args, config)
    handler = getattr(cli, args.command.replace("-", "_"))
    try:
        return handler()
    except ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except MonopolyLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
