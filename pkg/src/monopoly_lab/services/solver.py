from __future__ import annotations

import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable

from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from ..data import dao
from ..domain.engine import Kind, VertexSet, closure, full_mask, static_mask_ok, verifies
from ..domain.errors import InvalidParameterError
from ..domain.graph import Graph
from ..domain.thresholds import ThresholdAssignment

logger = logging.getLogger(__name__)

# How often (in candidates) the wall clock is consulted.
_CLOCK_STRIDE = 1024


class SolveStatus(str, Enum):
    SOLVED = "solved"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: int | None = None
    time_limit_seconds: float | None = None


@dataclass(frozen=True)
class SolveResult:
    """
    Outcome of a cardinality-ordered search. When solved, `optimum` is exact and
    `lower_bound == upper_bound == optimum`.
    """

    kind: Kind
    status: SolveStatus
    optimum: int | None
    witness: VertexSet | None
    explored: int
    elapsed: float
    lower_bound: int
    upper_bound: int
    graph_name: str = field(default="", compare=False)

    @property
    def solved(self) -> bool:
        return self.status is SolveStatus.SOLVED


def instance_fingerprint(g: Graph, tau: ThresholdAssignment) -> str:
    digest = hashlib.sha256()
    digest.update(f"{g.vertex_count}|".encode())
    digest.update(";".join(f"{u},{v}" for u, v in g.edges()).encode())
    digest.update(f"|{','.join(map(str, tau.values))}|{int(tau.allow_excess)}".encode())
    return digest.hexdigest()


def min_monopoly(
    g: Graph,
    tau: ThresholdAssignment,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> SolveResult:
    return solve(g, tau, Kind.MONOPOLY, budget=budget, threads=threads)


def min_dynamo(
    g: Graph,
    tau: ThresholdAssignment,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> SolveResult:
    return solve(g, tau, Kind.DYNAMO, budget=budget, threads=threads)


def min_dynamo_lb_pruned(
    g: Graph,
    tau: ThresholdAssignment,
    lb: int,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> SolveResult:
    """
    Like min_dynamo but starts at `lb`. A lower bound above the true optimum gives a wrong answer.
    """
    return solve(g, tau, Kind.DYNAMO, budget=budget, lb=lb, threads=threads)


def solve(
    g: Graph,
    tau: ThresholdAssignment,
    kind: Kind,
    budget: SearchBudget | None = None,
    lb: int | None = None,
    threads: int = 1,
    upper_hint: VertexSet | None = None,
) -> SolveResult:
    """
    Enumerate k-subsets in lexicographic order, k ascending, and stop at the first set that verifies.

    Vertices with τ(v) > deg(v) belong to every solution and are always included.
    """
    if len(tau) != g.vertex_count:
        raise InvalidParameterError(f"{len(tau)} thresholds for {g.vertex_count} vertices")
    n = g.vertex_count
    budget = budget or SearchBudget()
    forced = tau.forced(g)
    forced_mask = VertexSet(forced).mask
    free = [v for v in range(n) if v not in forced]
    start = (1 if n else 0) if lb is None else lb
    if start > n:
        raise InvalidParameterError(f"lower bound {start} exceeds the {n} vertices of {g.name or 'the graph'}")
    start = max(start, len(forced))
    accept = _acceptor(g, tau, kind)
    upper = _verified_upper(g, tau, kind, upper_hint)

    began = time.perf_counter()
    explored = 0
    for k in range(start, n + 1):
        r = k - len(forced)
        logger.debug("%s %s: scanning size %d (%d free vertices)", g.name, kind.value, k, len(free))
        if threads > 1 and r >= 2:
            remaining = None if budget.max_candidates is None else budget.max_candidates - explored
            deadline = _wall_deadline(budget, began)
            count, hit, truncated = _scan_level_parallel(
                g, tau, kind, forced_mask, free, r, remaining, deadline, threads
            )
            explored += count
            if hit is not None:
                return _solved(g, kind, k, hit, explored, began)
            if truncated or _over_budget(budget, explored, began):
                return _inconclusive(g, kind, k if truncated else k + 1, upper, explored, began)
            continue
        for combo in combinations(free, r):
            explored += 1
            mask = forced_mask
            for v in combo:
                mask |= 1 << v
            if accept(mask):
                return _solved(g, kind, k, mask, explored, began)
            if _over_budget(budget, explored, began, check_clock=explored % _CLOCK_STRIDE == 0):
                return _inconclusive(g, kind, k, upper, explored, began)
    raise AssertionError(f"no {kind.value} found for {g.name}; the full vertex set always qualifies")


def _acceptor(g: Graph, tau: ThresholdAssignment, kind: Kind) -> Callable[[int], bool]:
    if kind is Kind.DYNAMO:
        everything = full_mask(g)
        return lambda mask: closure(g, tau, mask) == everything

    # A vertex whose threshold equals its degree is either chosen or fully surrounded.
    tight = [(v, g.neighbor_masks[v]) for v in range(g.vertex_count) if tau[v] == g.degree(v)]

    def accept(mask: int) -> bool:
        for v, nbrs in tight:
            if not mask >> v & 1 and nbrs & mask != nbrs:
                return False
        return static_mask_ok(g, tau, mask)

    return accept


def _verified_upper(g: Graph, tau: ThresholdAssignment, kind: Kind, hint: VertexSet | None) -> int:
    if hint is not None and verifies(g, tau, hint, kind):
        return len(hint)
    return g.vertex_count


def _over_budget(budget: SearchBudget, explored: int, began: float, check_clock: bool = True) -> bool:
    if budget.max_candidates is not None and explored >= budget.max_candidates:
        return True
    if check_clock and budget.time_limit_seconds is not None:
        return time.perf_counter() - began >= budget.time_limit_seconds
    return False


def _wall_deadline(budget: SearchBudget, began: float) -> float | None:
    """
    The time limit as a wall-clock instant, comparable across worker processes.
    """
    if budget.time_limit_seconds is None:
        return None
    return time.time() + budget.time_limit_seconds - (time.perf_counter() - began)


def _solved(g: Graph, kind: Kind, k: int, mask: int, explored: int, began: float) -> SolveResult:
    elapsed = time.perf_counter() - began
    logger.info("%s: minimum %s has size %d (%d candidates, %.3fs)", g.name, kind.value, k, explored, elapsed)
    return SolveResult(
        kind=kind,
        status=SolveStatus.SOLVED,
        optimum=k,
        witness=VertexSet.from_mask(mask),
        explored=explored,
        elapsed=elapsed,
        lower_bound=k,
        upper_bound=k,
        graph_name=g.name,
    )


def _inconclusive(g: Graph, kind: Kind, refuted_below: int, upper: int, explored: int, began: float) -> SolveResult:
    elapsed = time.perf_counter() - began
    logger.warning(
        "%s: %s search stopped by budget after %d candidates; optimum in [%d, %d]",
        g.name,
        kind.value,
        explored,
        refuted_below,
        upper,
    )
    return SolveResult(
        kind=kind,
        status=SolveStatus.INCONCLUSIVE,
        optimum=None,
        witness=None,
        explored=explored,
        elapsed=elapsed,
        lower_bound=refuted_below,
        upper_bound=upper,
        graph_name=g.name,
    )


def _scan_partition(
    g: Graph,
    tau: ThresholdAssignment,
    kind: Kind,
    base_mask: int,
    rest: list[int],
    r: int,
    cap: int | None,
    deadline: float | None = None,
) -> tuple[int, int | None, bool]:
    accept = _acceptor(g, tau, kind)
    explored = 0
    for combo in combinations(rest, r):
        if deadline is not None and explored % _CLOCK_STRIDE == 0 and time.time() >= deadline:
            return explored, None, True
        explored += 1
        mask = base_mask
        for v in combo:
            mask |= 1 << v
        if accept(mask):
            return explored, mask, False
        if cap is not None and explored >= cap:
            return explored, None, True
    return explored, None, False


def _scan_level_parallel(
    g: Graph,
    tau: ThresholdAssignment,
    kind: Kind,
    forced_mask: int,
    free: list[int],
    r: int,
    remaining: int | None,
    deadline: float | None,
    threads: int,
) -> tuple[int, int | None, bool]:
    """
    Split the k-subsets by their first free vertex. The level completes before a witness is
    reported, and the partition with the smallest first vertex wins, so the witness matches
    the sequential search. Workers stop at `deadline` (wall clock) and report the cut.
    """
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [
            pool.submit(
                _scan_partition, g, tau, kind, forced_mask | 1 << first, free[i + 1 :], r - 1, remaining, deadline
            )
            for i, first in enumerate(free)
        ]
        results = [future.result() for future in futures]
    explored = sum(count for count, _, _ in results)
    hit = next((mask for _, mask, _ in results if mask is not None), None)
    truncated = any(cut for _, _, cut in results)
    return explored, hit, truncated


def cached_solve(
    session: Session | None,
    g: Graph,
    tau: ThresholdAssignment,
    kind: Kind,
    budget: SearchBudget | None = None,
    threads: int = 1,
) -> SolveResult:
    """
    `solve`, consulting and filling the solve cache when a session is given. Cache
    failures are logged and never change the result.
    """
    fingerprint = instance_fingerprint(g, tau)
    if session is not None:
        try:
            record = dao.find_solve(session, fingerprint, kind.value)
        except SQLAlchemyError as exc:
            logger.warning("solve cache unavailable: %s", exc)
            record, session = None, None
        if record is not None and record.optimum is not None:
            logger.debug("%s %s: cache hit %s", g.name, kind.value, fingerprint[:12])
            return SolveResult(
                kind=kind,
                status=SolveStatus.SOLVED,
                optimum=record.optimum,
                witness=VertexSet.of(record.witness_ids),
                explored=record.explored,
                elapsed=record.elapsed,
                lower_bound=record.optimum,
                upper_bound=record.optimum,
                graph_name=g.name,
            )
        logger.debug("%s %s: cache miss %s", g.name, kind.value, fingerprint[:12])
    result = solve(g, tau, kind, budget=budget, threads=threads)
    if session is not None and result.solved and result.witness is not None and result.optimum is not None:
        try:
            dao.save_solve(
                session,
                fingerprint=fingerprint,
                kind=kind.value,
                optimum=result.optimum,
                witness=result.witness.sorted(),
                explored=result.explored,
                elapsed=result.elapsed,
                vertex_count=g.vertex_count,
                graph_name=g.name,
            )
        except SQLAlchemyError as exc:
            session.rollback()
            logger.warning("could not cache solve of %s: %s", g.name, exc)
    return result
