"""
Closed-form bounds on monopoly and dynamo numbers.

Values are exact Fractions. Since the bounded quantities are integers, each report also
carries an integer certificate: the ceiling of a lower bound or the floor of an upper bound.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable

from ..domain.engine import Kind
from ..domain.errors import InvalidParameterError, MonopolyLabError, UnsupportedRegimeError
from ..domain.graph import Graph
from ..domain.thresholds import constant_threshold
from .solver import SearchBudget, min_dynamo

logger = logging.getLogger(__name__)


class Direction(str, Enum):
    LOWER = "lower"
    UPPER = "upper"
    EXACT = "exact"


@dataclass(frozen=True)
class BoundReport:
    name: str
    direction: Direction
    target: Kind
    parameters: dict[str, int]
    value: Fraction | None = None
    applicable: bool = True
    reason: str | None = None
    hypotheses: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()
    floor_at: int | None = field(default=None, repr=False)

    @property
    def certificate(self) -> int | None:
        if self.value is None:
            return None
        if self.direction is Direction.LOWER:
            bound = math.ceil(self.value)
        else:
            bound = math.floor(self.value)
        if self.floor_at is not None:
            bound = max(bound, self.floor_at)
        return bound

    def admits(self, optimum: int) -> bool:
        """
        True if `optimum` is consistent with this bound (vacuously true when not applicable).
        """
        cert = self.certificate
        if not self.applicable or cert is None:
            return True
        if self.direction is Direction.LOWER:
            return optimum >= cert
        if self.direction is Direction.UPPER:
            return optimum <= cert
        return optimum == cert


def _positive(**values: int) -> None:
    for name, value in values.items():
        if value < 1:
            raise InvalidParameterError(f"{name} must be >= 1, got {value}")


def _parity_quarter(term: int) -> Fraction:
    return Fraction(1, 4) if term % 2 else Fraction(0)


def line_graph_majority_lb(n: int, k: int) -> BoundReport:
    """
    Simple-majority monopolies of the line graph of a k-regular graph on n vertices have size >= n(k-1)/4.
    """
    _positive(n=n, k=k)
    if n * k % 2:
        raise InvalidParameterError(f"no {k}-regular graph on {n} vertices: n*k is odd")
    return BoundReport(
        name="line_graph_majority_lb",
        direction=Direction.LOWER,
        target=Kind.MONOPOLY,
        parameters={"n": n, "k": k},
        value=Fraction(n * (k - 1), 4),
    )


def dyn_product_cycle_ub(d: int, n: int, t: int) -> BoundReport:
    _positive(d=d)
    if n < 3:
        raise InvalidParameterError(f"cycle length n must be >= 3, got {n}")
    if t < 2:
        raise UnsupportedRegimeError(f"the G□C_n bound needs t >= 2, got {t}")
    if t == 2:
        value = n + d - 2
    elif t == 3:
        value = n * d - (n + d) + 2
    else:
        value = d + (n - 2) * (d - 1) + d - 2
    return BoundReport(
        name="dyn_product_cycle_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"d": d, "n": n, "t": t},
        value=Fraction(value),
        hypotheses=("G is connected", "t <= min degree of G", "d = dyn_t(G)"),
    )


def dyn_product_complete_ub(d: int, t: int) -> BoundReport:
    if t < 2:
        raise UnsupportedRegimeError(f"the G□K_n bound needs t >= 2, got {t}")
    if d < t - 1:
        raise UnsupportedRegimeError(f"the G□K_n bound needs d >= t-1, got d={d}, t={t}")
    return BoundReport(
        name="dyn_product_complete_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"d": d, "t": t},
        value=t * d - Fraction(t * t - 3 * t, 2) - d,
        hypotheses=("d = dyn_t(G)", "n >= t"),
    )


def dyn_product_naive_ub(dg: int, dh: int) -> BoundReport:
    _positive(dg=dg, dh=dh)
    return BoundReport(
        name="dyn_product_naive_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"dg": dg, "dh": dh},
        value=Fraction(dg * dh),
        hypotheses=("dg = dyn_t(G)", "dh = dyn_t(H)"),
    )


def _product_gate(t: int, label: str) -> None:
    if t < 3:
        raise UnsupportedRegimeError(f"the {label} needs t >= 3, got {t}", nearest="dyn_product_naive_ub")


def dyn_product_improved_ub(dg: int, dh: int, t: int) -> BoundReport:
    _positive(dg=dg, dh=dh)
    _product_gate(t, "improved product bound")
    if dg > dh:
        raise UnsupportedRegimeError(f"the improved product bound needs dg <= dh, got {dg} > {dh}")
    return BoundReport(
        name="dyn_product_improved_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"dg": dg, "dh": dh, "t": t},
        value=dg * dh - Fraction(dh, 2),
        hypotheses=("some minimum dynamo D_H of H has no isolated vertex in H[D_H] (unverified)",),
    )


def dyn_product_star_corollary_ub(dg: int, dh: int, t: int) -> BoundReport:
    _positive(dg=dg, dh=dh)
    _product_gate(t, "star corollary")
    return BoundReport(
        name="dyn_product_star_corollary_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"dg": dg, "dh": dh, "t": t},
        value=Fraction(dg * dh - dh),
        hypotheses=(f"H[D_H] is a star K_1,{dh - 1} for a minimum dynamo D_H (unverified)",),
        floor_at=1,
    )


def dyn_product_clique_corollary_ub(g: int, t: int) -> BoundReport:
    _product_gate(t, "clique corollary")
    if g < t - 1:
        raise UnsupportedRegimeError(f"the clique corollary needs g >= t-1, got g={g}, t={t}")
    return BoundReport(
        name="dyn_product_clique_corollary_ub",
        direction=Direction.UPPER,
        target=Kind.DYNAMO,
        parameters={"g": g, "t": t},
        value=g * t - Fraction(t * t - 3 * t + 2 * g, 2),
        hypotheses=(f"H[D_H] is a clique K_{g} for a minimum dynamo D_H (unverified)",),
    )


def regular_bipartite_line_lb(n: int, r: int, t: int) -> BoundReport:
    _positive(n=n, r=r, t=t)
    if n % 2 or r > n // 2:
        raise InvalidParameterError(f"no {r}-regular bipartite graph on {n} vertices")
    if t > 2 * r - 2:
        raise UnsupportedRegimeError(f"needs t <= 2r-2, got t={t}, r={r}")
    if (n + 1 + t - 2 * r) // 2 > n // 2:
        raise UnsupportedRegimeError(f"the edge-removal count falls outside a side of size {n // 2}")
    epsilon = Fraction(1, 4) if (n - 2 * r + t + 1) % 2 == 0 else Fraction(0)
    value = Fraction(n * (2 * t - 2 * r + 2) + (2 * r - t) ** 2 - 4 * r + 2 * t, 4) + epsilon
    return BoundReport(
        name="regular_bipartite_line_lb",
        direction=Direction.LOWER,
        target=Kind.DYNAMO,
        parameters={"n": n, "r": r, "t": t},
        value=value,
        hypotheses=("bounds dyn_t(L(G)) for an r-regular bipartite G on n vertices",),
    )


def biregular_line_lb(m: int, n: int, r1: int, r2: int, t: int) -> BoundReport:
    _positive(m=m, n=n, r1=r1, r2=r2, t=t)
    if m * r1 != n * r2:
        raise InvalidParameterError(f"degree sums disagree: m*r1={m * r1}, n*r2={n * r2}")
    if r1 > n or r2 > m:
        raise InvalidParameterError(f"degrees r1={r1}, r2={r2} do not fit sides of size {m}, {n}")
    if t > r1 + r2 - 2:
        raise UnsupportedRegimeError(f"needs t <= r1+r2-2, got t={t}")
    term = m + n + 1 + t - r1 - r2
    if term // 2 > min(m, n):
        raise UnsupportedRegimeError(
            f"the edge-removal count {term // 2} exceeds min(m, n)={min(m, n)}", nearest="small_m_exact"
        )
    value = Fraction(m * r1 + n * r2, 2) - m * n + Fraction(term, 2) ** 2 - _parity_quarter(term)
    return BoundReport(
        name="biregular_line_lb",
        direction=Direction.LOWER,
        target=Kind.DYNAMO,
        parameters={"m": m, "n": n, "r1": r1, "r2": r2, "t": t},
        value=value,
        notes=("leading term (m*r1 + n*r2)/2 = |E(G)|, not the displayed m*r1 + n*r1",),
    )


def small_m_exact(m: int, n: int, t: int) -> BoundReport:
    _positive(m=m, n=n, t=t)
    if not (2 * m < t and n > t - m + 1 and t <= m + n - 2):
        raise UnsupportedRegimeError(
            f"needs m < t/2, n > t-m+1 and t <= m+n-2; got m={m}, n={n}, t={t}", nearest="biregular_line_lb"
        )
    return BoundReport(
        name="small_m_exact",
        direction=Direction.EXACT,
        target=Kind.DYNAMO,
        parameters={"m": m, "n": n, "t": t},
        value=Fraction(m * (t - m + 1)),
    )


@dataclass(frozen=True)
class BoundSpec:
    func: Callable[..., BoundReport]
    params: tuple[str, ...]
    direction: Direction


BOUNDS: dict[str, BoundSpec] = {
    "line_graph_majority_lb": BoundSpec(line_graph_majority_lb, ("n", "k"), Direction.LOWER),
    "dyn_product_cycle_ub": BoundSpec(dyn_product_cycle_ub, ("d", "n", "t"), Direction.UPPER),
    "dyn_product_complete_ub": BoundSpec(dyn_product_complete_ub, ("d", "t"), Direction.UPPER),
    "dyn_product_naive_ub": BoundSpec(dyn_product_naive_ub, ("dg", "dh"), Direction.UPPER),
    "dyn_product_improved_ub": BoundSpec(dyn_product_improved_ub, ("dg", "dh", "t"), Direction.UPPER),
    "dyn_product_star_corollary_ub": BoundSpec(dyn_product_star_corollary_ub, ("dg", "dh", "t"), Direction.UPPER),
    "dyn_product_clique_corollary_ub": BoundSpec(dyn_product_clique_corollary_ub, ("g", "t"), Direction.UPPER),
    "regular_bipartite_line_lb": BoundSpec(regular_bipartite_line_lb, ("n", "r", "t"), Direction.LOWER),
    "biregular_line_lb": BoundSpec(biregular_line_lb, ("m", "n", "r1", "r2", "t"), Direction.LOWER),
    "small_m_exact": BoundSpec(small_m_exact, ("m", "n", "t"), Direction.EXACT),
}


def evaluate(name: str, **params: int) -> BoundReport:
    """
    Like calling the bound directly, but out-of-regime parameters give applicable=False with a reason.
    """
    spec = BOUNDS.get(name)
    if spec is None:
        raise InvalidParameterError(f"unknown bound {name!r}; choose from {', '.join(sorted(BOUNDS))}")
    missing = [p for p in spec.params if params.get(p) is None]
    if missing:
        raise InvalidParameterError(f"bound {name} needs parameters: {', '.join(missing)}")
    args = {p: int(params[p]) for p in spec.params}
    try:
        return spec.func(**args)
    except MonopolyLabError as exc:
        logger.debug("%s%s not applicable: %s", name, args, exc)
        return BoundReport(
            name=name,
            direction=spec.direction,
            target=Kind.MONOPOLY if name == "line_graph_majority_lb" else Kind.DYNAMO,
            parameters=args,
            applicable=False,
            reason=str(exc),
        )


def applicable_bounds(**params: int) -> list[BoundReport]:
    """
    Every bound whose parameters are all supplied, in registry order, applicable or not.
    """
    supplied = {k for k, v in params.items() if v is not None}
    return [evaluate(name, **params) for name, spec in BOUNDS.items() if set(spec.params) <= supplied]


def factor_dynamo_number(g: Graph, t: int, budget: SearchBudget | None = None) -> int:
    """
    dyn_t of a small factor graph, by exhaustive search.
    """
    result = min_dynamo(g, constant_threshold(g, t), budget=budget)
    if not result.solved or result.optimum is None:
        raise InvalidParameterError(
            f"dyn_{t}({g.name}) not settled within the budget; known range [{result.lower_bound}, {result.upper_bound}]"
        )
    return result.optimum
