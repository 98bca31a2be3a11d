"""
Acceptance bundles behind `check-theorem`.

Each bundle yields one Outcome per instance. CheckRunner runs bundles and records every
run, with its outcomes, through the DAO.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import networkx as nx
from sqlalchemy.orm import Session

from ..config import AppConfig
from ..data import dao
from ..domain.engine import (
    Kind,
    VertexSet,
    activate,
    activate_in_order,
    is_dynamic_monopoly,
    is_static_monopoly,
    verifies,
)
from ..domain.errors import ConstructionError, InvalidParameterError, MonopolyLabError, UnsupportedRegimeError
from ..domain.graph import Graph, cartesian_product, complete, complete_bipartite, cycle, line_graph
from ..domain.thresholds import ThresholdAssignment, constant_threshold, explicit_thresholds, simple_majority
from ..ui.grid import render_grid
from . import bounds, constructions
from .solver import SearchBudget, SolveResult, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Outcome:
    instance: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class CheckSettings:
    seed: int = 20240601
    random_graphs: int = 50
    max_dimension: int = 30
    budget: SearchBudget = field(default_factory=SearchBudget)

    @classmethod
    def from_config(cls, config: AppConfig) -> CheckSettings:
        return cls(
            seed=config.checks_seed,
            random_graphs=config.checks_random_graphs,
            max_dimension=config.checks_max_dimension,
            budget=SearchBudget(config.solver_max_candidates, config.solver_time_limit_seconds),
        )


@dataclass
class CheckReport:
    bundle: str
    seed: int
    outcomes: list[Outcome]
    run_id: int | None = None

    @property
    def passed(self) -> int:
        return sum(1 for o in self.outcomes if o.passed)

    @property
    def failed(self) -> int:
        return len(self.outcomes) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0


def random_connected_graph(rng: random.Random, low: int, high: int, min_degree: int = 1) -> Graph:
    while True:
        n = rng.randint(low, high)
        nx_graph = nx.gnp_random_graph(n, rng.uniform(0.3, 0.7), seed=rng.randrange(2**32))
        if not nx.is_connected(nx_graph):
            continue
        if min(d for _, d in nx_graph.degree()) < min_degree:
            continue
        return Graph.from_networkx(nx_graph, name=f"G{n}#{rng.randrange(10**6):06d}")


def _solved(
    g: Graph, tau: ThresholdAssignment, kind: Kind, settings: CheckSettings, label: str
) -> tuple[SolveResult | None, Outcome | None]:
    result = solve(g, tau, kind, budget=settings.budget)
    if not result.solved:
        detail = f"inconclusive within budget, optimum in [{result.lower_bound}, {result.upper_bound}]"
        return None, Outcome(label, False, detail)
    return result, None


# ---------------------------------------------------------------------------
# Bundles
# ---------------------------------------------------------------------------


def _sweep_parameters(dim: int) -> Iterator[tuple[str, dict[str, int]]]:
    for n in range(3, dim + 1):
        yield "mon2-torus", {"n": n}
        yield "dyn-cycle-complete-t2", {"n": n}
        yield "dyn-cycle-complete-t3", {"n": n}
    for n in range(2, dim + 1):
        yield "mon-diag", {"n": n}
    for n in range(3, dim + 1, 2):
        yield "mon-circulant", {"n": n}
    for t in (2, 4, 6):
        for k in range(2, 2 * dim // t + 1):
            yield "mon-block-diag", {"k": k, "t": t}
            yield "mon-block-complement", {"k": k, "t": t}
    for m in range(3, min(dim, 8) + 1):
        for t in range(2, min(dim, 10) + 1):
            for n in sorted({t - 1, 2 * t - 4, 2 * t - 3, 2 * t - 1, 2 * t, 2 * t + 1}):
                if 1 <= n <= dim:
                    yield "mon-cycle-complete", {"m": m, "n": n, "t": t}
            if t >= 4:
                for n in sorted({t - 1, t, 2 * t}):
                    if n <= dim:
                        yield "dyn-cycle-complete", {"m": m, "n": n, "t": t}
    for n in range(3, min(dim, 20) + 1):
        for t in sorted({3, (n + 3) // 2, n}):
            yield "dyn-star-star", {"n": n, "t": t}
    for m in range(1, min(dim, 12) + 1):
        for n in range(m, min(dim, 12) + 1):
            for t in range(1, m + n - 1):
                yield "dyn-complete-complete", {"m": m, "n": n, "t": t}
                yield "dyn-complete-complete-small-m", {"m": m, "n": n, "t": t}


def construction_sweep(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for tag, params in _sweep_parameters(settings.max_dimension):
        label = f"{tag}{params}"
        try:
            c = constructions.build(tag, **params)
        except UnsupportedRegimeError:
            continue
        except ConstructionError as exc:
            outcomes.append(Outcome(label, False, str(exc)))
            continue
        outcomes.append(Outcome(label, True, f"size {c.size}"))
    return outcomes


FIGURES = (
    ("mon-cycle-complete", {"m": 7, "n": 9, "t": 6}, 32),
    ("mon-cycle-complete", {"m": 8, "n": 8, "t": 7}, 40),
    ("dyn-cycle-complete", {"m": 8, "n": 10, "t": 5}, 24),
    ("dyn-cycle-complete", {"m": 9, "n": 8, "t": 5}, 27),
)


def figures(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for tag, params, expected in FIGURES:
        label = f"{tag}{params}"
        c = constructions.build(tag, **params)
        stars = render_grid(c.graph, c.vertex_set).count("*")
        ok = c.size == expected and stars == expected and verifies(c.graph, c.tau, c.vertex_set, c.kind)
        outcomes.append(Outcome(label, ok, f"size {c.size}, {stars} stars, expected {expected}"))
    return outcomes


def _cc(m: int, n: int) -> Graph:
    return cartesian_product(cycle(m), complete(n))


def _kk(m: int, n: int) -> Graph:
    return cartesian_product(complete(m), complete(n))


ORACLE_CASES: tuple[tuple[str, Callable[[], Graph], int, Kind, int], ...] = (
    ("mon_2(C3□C3)", lambda: cartesian_product(cycle(3), cycle(3)), 2, Kind.MONOPOLY, 3),
    ("mon_2(K2□K2)", lambda: _kk(2, 2), 2, Kind.MONOPOLY, 2),
    ("mon_2(K3□K3)", lambda: _kk(3, 3), 2, Kind.MONOPOLY, 3),
    ("dyn_2(C3□K3)", lambda: _cc(3, 3), 2, Kind.DYNAMO, 2),
    ("dyn_2(C4□K4)", lambda: _cc(4, 4), 2, Kind.DYNAMO, 3),
    ("dyn_2(C5□K5)", lambda: _cc(5, 5), 2, Kind.DYNAMO, 3),
    ("dyn_3(C3□K3)", lambda: _cc(3, 3), 3, Kind.DYNAMO, 4),
    ("dyn_4(C3□K3)", lambda: _cc(3, 3), 4, Kind.DYNAMO, 6),
    ("dyn_4(C4□K4)", lambda: _cc(4, 4), 4, Kind.DYNAMO, 8),
    ("dyn_2(K3□K3)", lambda: _kk(3, 3), 2, Kind.DYNAMO, 2),
    ("dyn_3(K3□K3)", lambda: _kk(3, 3), 3, Kind.DYNAMO, 4),
    ("dyn_4(K3□K3)", lambda: _kk(3, 3), 4, Kind.DYNAMO, 6),
    ("dyn_5(K2□K5)", lambda: _kk(2, 5), 5, Kind.DYNAMO, 8),
)


SMALL_RANGES = {"m": range(3, 6), "n": range(2, 6), "k": range(1, 4), "t": range(1, 7)}
SMALL_VERTEX_LIMIT = 16


def small_exact_constructions() -> Iterator[constructions.Construction]:
    """
    Every construction tagged exact whose graph has at most SMALL_VERTEX_LIMIT vertices,
    over SMALL_RANGES for each family's parameters.
    """
    for tag, family in constructions.FAMILIES.items():
        for values in itertools.product(*(SMALL_RANGES[p] for p in family.params)):
            try:
                c = constructions.build(tag, **dict(zip(family.params, values)))
            except (InvalidParameterError, UnsupportedRegimeError):
                continue
            if c.claim is constructions.Claim.EXACT and c.graph.vertex_count <= SMALL_VERTEX_LIMIT:
                yield c


def oracle_exactness(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for label, make, t, kind, expected in ORACLE_CASES:
        g = make()
        result, failure = _solved(g, constant_threshold(g, t), kind, settings, label)
        if failure:
            outcomes.append(failure)
            continue
        ok = result.optimum == expected
        outcomes.append(Outcome(label, ok, f"optimum {result.optimum}, expected {expected}"))
    for c in small_exact_constructions():
        label = f"{c.family}{c.params}"
        result, failure = _solved(c.graph, c.tau, c.kind, settings, label)
        if failure:
            outcomes.append(failure)
            continue
        ok = result.optimum == c.size
        outcomes.append(Outcome(label, ok, f"optimum {result.optimum}, built {c.size} ({c.claim.value})"))
    return outcomes


def _assess(label: str, report: bounds.BoundReport, optimum: int) -> Outcome:
    ok = report.admits(optimum)
    return Outcome(f"{label} {report.name}", ok, f"{report.direction.value} {report.certificate} vs optimum {optimum}")


def sandwich(settings: CheckSettings) -> list[Outcome]:
    """
    lower <= optimum <= upper for every applicable bound on solvable instances.
    """
    rng = random.Random(settings.seed)
    outcomes: list[Outcome] = []
    for _ in range(settings.random_graphs):
        g = random_connected_graph(rng, 6, 12)
        t = rng.choice([t for t in (1, 2, 3) if t <= g.min_degree])
        tau = constant_threshold(g, t)
        label = f"{g.name} t={t}"
        dyn, failure = _solved(g, tau, Kind.DYNAMO, settings, label)
        mon, failure_mon = _solved(g, tau, Kind.MONOPOLY, settings, label)
        if failure or failure_mon:
            outcomes.append(failure or failure_mon)
            continue
        ok = t <= dyn.optimum <= mon.optimum
        outcomes.append(Outcome(f"{label} dyn<=mon", ok, f"dyn {dyn.optimum}, mon {mon.optimum}"))
        outcomes.extend(_product_sandwich(rng, settings))
    outcomes.extend(_line_graph_sandwich(settings))
    return outcomes


def _product_sandwich(rng: random.Random, settings: CheckSettings) -> list[Outcome]:
    factor = random_connected_graph(rng, 4, 5, min_degree=2)
    t = rng.choice([t for t in (2, 3) if t <= factor.min_degree])
    d_result, failure = _solved(factor, constant_threshold(factor, t), Kind.DYNAMO, settings, factor.name)
    if failure:
        return [failure]
    d = d_result.optimum
    outcomes = []
    tails: list[tuple[Graph, list[bounds.BoundReport]]] = []
    c3 = cycle(3)
    cycle_reports = [bounds.evaluate("dyn_product_cycle_ub", d=d, n=3, t=t)]
    if t <= c3.min_degree:
        cycle_reports.append(bounds.evaluate("dyn_product_naive_ub", dg=d, dh=t))
    tails.append((cartesian_product(factor, c3), cycle_reports))
    n = 4 if factor.vertex_count == 4 else 3
    kn = complete(n)
    complete_reports = [bounds.evaluate("dyn_product_complete_ub", d=d, t=t)]
    if t <= kn.min_degree:
        complete_reports.append(bounds.evaluate("dyn_product_naive_ub", dg=d, dh=t))
    tails.append((cartesian_product(factor, kn), complete_reports))
    for product, reports in tails:
        label = f"{product.name} t={t}"
        result, failure = _solved(product, constant_threshold(product, t), Kind.DYNAMO, settings, label)
        if failure:
            outcomes.append(failure)
            continue
        outcomes.extend(_assess(label, r, result.optimum) for r in reports if r.applicable)
    return outcomes


def _line_graph_sandwich(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for m in range(1, 5):
        for n in range(m, 5):
            g = _kk(m, n)
            for t in range(1, m + n - 1):
                label = f"{g.name} t={t}"
                result, failure = _solved(g, constant_threshold(g, t), Kind.DYNAMO, settings, label)
                if failure:
                    outcomes.append(failure)
                    continue
                reports = [
                    bounds.evaluate("biregular_line_lb", m=m, n=n, r1=n, r2=m, t=t),
                    bounds.evaluate("small_m_exact", m=m, n=n, t=t),
                ]
                if m == n:
                    reports.append(bounds.evaluate("regular_bipartite_line_lb", n=2 * n, r=n, t=t))
                outcomes.extend(_assess(label, r, result.optimum) for r in reports if r.applicable)
    return outcomes


def threshold_decrement(settings: CheckSettings) -> list[Outcome]:
    """
    Dropping any seed from an optimal dynamo leaves a dynamo once every threshold drops by one.
    """
    rng = random.Random(settings.seed + 1)
    outcomes = []
    for _ in range(max(1, settings.random_graphs * 3 // 5)):
        g = random_connected_graph(rng, 5, 12, min_degree=2)
        tau = explicit_thresholds(g, [rng.randint(2, d) for d in g.degrees])
        label = f"{g.name} {tau.describe()}"
        result, failure = _solved(g, tau, Kind.DYNAMO, settings, label)
        if failure:
            outcomes.append(failure)
            continue
        lowered = tau.lowered()
        broken = [v for v in result.witness if not is_dynamic_monopoly(g, lowered, result.witness.without(v))]
        lowered_result, failure = _solved(g, lowered, Kind.DYNAMO, settings, label)
        if failure:
            outcomes.append(failure)
            continue
        ok = not broken and lowered_result.optimum <= result.optimum - 1
        detail = f"dyn {result.optimum} -> {lowered_result.optimum}" + (f", broken at {broken}" if broken else "")
        outcomes.append(Outcome(label, ok, detail))
    return outcomes


def line_graph_identities(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for n in range(1, 6):
        lg, kk = line_graph(complete_bipartite(n, n)), _kk(n, n)
        same = (
            lg.vertex_count == kk.vertex_count
            and lg.edge_count == kk.edge_count
            and sorted(lg.degrees) == sorted(kk.degrees)
        )
        if same and n <= 3:
            same = nx.is_isomorphic(lg.to_networkx(), kk.to_networkx())
        outcomes.append(Outcome(f"L(K{n},{n}) vs K{n}□K{n}", same, f"{lg.vertex_count} vertices, {lg.edge_count} edges"))
    lg, kk = line_graph(complete_bipartite(3, 3)), _kk(3, 3)
    optima = []
    for g in (lg, kk):
        result, failure = _solved(g, simple_majority(g), Kind.MONOPOLY, settings, g.name)
        if failure:
            outcomes.append(failure)
            return outcomes
        optima.append(result.optimum)
    lb = bounds.line_graph_majority_lb(6, 3)
    ok = optima[0] == optima[1] == 3 and lb.certificate == 3 and lb.admits(optima[0])
    outcomes.append(Outcome("majority monopoly of L(K3,3) and K3□K3", ok, f"optima {optima}, bound {lb.certificate}"))
    return outcomes


BOUND_REGRESSIONS: tuple[tuple[str, dict[str, int], str], ...] = (
    ("biregular_line_lb", {"m": 3, "n": 3, "r1": 3, "r2": 3, "t": 4}, "6"),
    ("biregular_line_lb", {"m": 3, "n": 3, "r1": 3, "r2": 3, "t": 3}, "4"),
    ("regular_bipartite_line_lb", {"n": 6, "r": 3, "t": 2}, "2"),
    ("line_graph_majority_lb", {"n": 6, "k": 3}, "3"),
    ("dyn_product_cycle_ub", {"d": 3, "n": 5, "t": 2}, "6"),
    ("dyn_product_cycle_ub", {"d": 3, "n": 5, "t": 3}, "9"),
    ("dyn_product_cycle_ub", {"d": 4, "n": 4, "t": 4}, "12"),
    ("dyn_product_complete_ub", {"d": 4, "t": 3}, "8"),
    ("dyn_product_complete_ub", {"d": 2, "t": 2}, "3"),
    ("dyn_product_naive_ub", {"dg": 3, "dh": 4}, "12"),
    ("dyn_product_improved_ub", {"dg": 4, "dh": 4, "t": 3}, "14"),
    ("dyn_product_improved_ub", {"dg": 2, "dh": 3, "t": 3}, "9/2"),
    ("dyn_product_star_corollary_ub", {"dg": 3, "dh": 4, "t": 3}, "8"),
    ("dyn_product_clique_corollary_ub", {"g": 4, "t": 3}, "8"),
    ("dyn_product_clique_corollary_ub", {"g": 5, "t": 4}, "13"),
    ("small_m_exact", {"m": 2, "n": 5, "t": 5}, "8"),
)


def bound_regression(settings: CheckSettings) -> list[Outcome]:
    outcomes = []
    for name, params, expected in BOUND_REGRESSIONS:
        report = bounds.evaluate(name, **params)
        ok = report.applicable and report.value == Fraction(expected)
        outcomes.append(Outcome(f"{name}{params}", ok, f"value {report.value}, expected {expected}"))
    staircase = constructions.dyn_complete_complete(3, 3, 4).claimed_size
    outcomes.append(Outcome("biregular t=4 matches staircase", staircase == 6, f"staircase {staircase}"))
    lg = line_graph(complete_bipartite(3, 3))
    result, failure = _solved(lg, constant_threshold(lg, 2), Kind.DYNAMO, settings, "dyn_2(L(K3,3))")
    if failure:
        outcomes.append(failure)
    else:
        report = bounds.regular_bipartite_line_lb(6, 3, 2)
        outcomes.append(Outcome("regular bipartite bound vs dyn_2(L(K3,3))", report.admits(result.optimum), f"optimum {result.optimum}"))
    star = bounds.dyn_product_star_corollary_ub(3, 4, 3)
    improved = bounds.dyn_product_improved_ub(3, 4, 3)
    naive = bounds.dyn_product_naive_ub(3, 4)
    ordered = star.value <= improved.value <= naive.value
    outcomes.append(Outcome("star <= improved <= naive", ordered, f"{star.value} <= {improved.value} <= {naive.value}"))
    return outcomes


def engine_properties(settings: CheckSettings) -> list[Outcome]:
    rng = random.Random(settings.seed + 2)
    outcomes = []
    for i in range(settings.random_graphs * 2):
        g = random_connected_graph(rng, 5, 10)
        tau = explicit_thresholds(g, [rng.randint(1, d) for d in g.degrees])
        seed = VertexSet.of(v for v in range(g.vertex_count) if rng.random() < 0.3)
        trace = activate(g, tau, seed)
        order = list(range(g.vertex_count))
        rng.shuffle(order)
        problems = []
        if activate_in_order(g, tau, seed, order) != trace.activated:
            problems.append("schedule changes the fixed point")
        bigger = VertexSet(seed.members | {rng.randrange(g.vertex_count)})
        if not trace.activated <= activate(g, tau, bigger).activated:
            problems.append("not monotone in the seed")
        replay = trace.replay(g, tau)
        if replay:
            problems.append(replay)
        if is_static_monopoly(g, tau, seed).ok:
            rest = frozenset(range(g.vertex_count)) - seed.members
            if trace.layers != ((seed.members, rest) if rest else (seed.members,)):
                problems.append("static monopoly did not finish in one round")
        outcomes.append(Outcome(f"triple {i} {g.name}", not problems, "; ".join(problems)))
    return outcomes


BUNDLES: dict[str, Callable[[CheckSettings], list[Outcome]]] = {
    "construction-sweep": construction_sweep,
    "figures": figures,
    "oracle-exactness": oracle_exactness,
    "sandwich": sandwich,
    "threshold-decrement": threshold_decrement,
    "line-graph": line_graph_identities,
    "bound-regression": bound_regression,
    "engine-properties": engine_properties,
}


class CheckRunner:
    """
    Runs acceptance bundles and records each run.
    """

    def __init__(self, session: Session | None, config: AppConfig, settings: CheckSettings | None = None) -> None:
        self.session = session
        self.config = config
        self.settings = settings or CheckSettings.from_config(config)

    def run(self, bundle: str) -> list[CheckReport]:
        names = list(BUNDLES) if bundle == "all" else [bundle]
        unknown = [name for name in names if name not in BUNDLES]
        if unknown:
            raise MonopolyLabError(f"unknown bundle {unknown[0]!r}; choose from all, {', '.join(BUNDLES)}")
        return [self._run_one(name) for name in names]

    def _run_one(self, name: str) -> CheckReport:
        logger.info("running bundle %s (seed %d)", name, self.settings.seed)
        outcomes = BUNDLES[name](self.settings)
        report = CheckReport(bundle=name, seed=self.settings.seed, outcomes=outcomes)
        for outcome in outcomes:
            if not outcome.passed:
                logger.warning("%s: %s failed: %s", name, outcome.instance, outcome.detail)
        if self.session is not None:
            run = dao.record_check_run(
                self.session, name, self.settings.seed, [(o.instance, o.passed, o.detail) for o in outcomes]
            )
            report.run_id = run.id
        logger.info("bundle %s: %d passed, %d failed", name, report.passed, report.failed)
        return report
