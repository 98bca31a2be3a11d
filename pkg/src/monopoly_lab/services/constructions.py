"""
Explicit monopoly and dynamo constructions on product graphs.

Every builder returns a Construction whose set has already been checked by the engine;
a set that fails its own check raises ConstructionError instead of being returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from ..domain.engine import Kind, VertexSet, verifies
from ..domain.errors import ConstructionError, InvalidParameterError, UnsupportedRegimeError
from ..domain.graph import Graph, GridCoord, cartesian_product, complete, cycle, star
from ..domain.thresholds import ThresholdAssignment, constant_threshold

logger = logging.getLogger(__name__)

Cells = Iterable[tuple[int, int]]


class Claim(str, Enum):
    EXACT = "exact"
    UPPER = "upper"


@dataclass(frozen=True)
class Construction:
    family: str
    theorem_tag: str
    graph: Graph
    tau: ThresholdAssignment
    vertex_set: VertexSet
    claimed_size: int
    kind: Kind
    claim: Claim
    params: dict[str, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.vertex_set)

    def cells(self) -> list[GridCoord]:
        return self.vertex_set.cells(self.graph)


def _finish(
    family: str,
    tag: str,
    g: Graph,
    tau: ThresholdAssignment,
    cells: Cells,
    claimed: int,
    kind: Kind,
    claim: Claim,
    params: dict[str, int],
) -> Construction:
    chosen = VertexSet.from_coords(g, cells)
    if len(chosen) != claimed:
        raise ConstructionError(f"{family}{params}: built {len(chosen)} vertices, claimed {claimed}")
    if not verifies(g, tau, chosen, kind):
        raise ConstructionError(f"{family}{params}: set of size {claimed} is not a {kind.value} of {g.name}")
    logger.info("%s%s: %s of size %d verified on %s", family, params, kind.value, claimed, g.name)
    return Construction(
        family=family,
        theorem_tag=tag,
        graph=g,
        tau=tau,
        vertex_set=chosen,
        claimed_size=claimed,
        kind=kind,
        claim=claim,
        params=params,
    )


def _at_least(name: str, value: int, low: int) -> None:
    if value < low:
        raise InvalidParameterError(f"{name} must be >= {low}, got {value}")


# ---------------------------------------------------------------------------
# Static monopolies
# ---------------------------------------------------------------------------


def mon2_torus(n: int) -> Construction:
    """
    2-monopoly of C_n□C_n from diagonal stripes i+j ≡ 1 (mod 3), patched along the
    last one or two rows and columns when 3 does not divide n.
    """
    _at_least("n", n, 3)
    g = cartesian_product(cycle(n), cycle(n))
    tau = constant_threshold(g, 2)
    r = n % 3
    core = n - r
    cells = {(i, j) for i in range(1, core + 1) for j in range(1, core + 1) if (i + j) % 3 == 1}
    if r == 0:
        claimed, claim = n * n // 3, Claim.EXACT
    elif r == 1:
        for x in range(1, core + 1):
            if x % 3 in (0, 1):
                cells |= {(n, x), (x, n)}
        claimed, claim = (n - 1) * (n + 3) // 3, Claim.UPPER
    else:
        for x in range(1, core + 1):
            if x % 3 in (0, 2):
                cells |= {(n - 1, x), (x, n - 1)}
            else:
                cells |= {(n, x), (x, n)}
        cells |= {(n - 1, n - 1), (n, n)}
        claimed, claim = (n + 1) ** 2 // 3 - 1, Claim.UPPER
    return _finish("mon2-torus", "mon2-torus", g, tau, cells, claimed, Kind.MONOPOLY, claim, {"n": n})


def cycle_complete_regime(n: int, t: int) -> str:
    if n < t - 1:
        raise UnsupportedRegimeError(f"n={n} is below t-1={t - 1}; no regime covers it", nearest="a")
    if n <= 2 * (t - 2):
        return "a"
    if n <= 2 * t:
        return "b"
    return "c"


def mon_cycle_complete(m: int, n: int, t: int) -> Construction:
    _at_least("m", m, 3)
    _at_least("n", n, 1)
    _at_least("t", t, 1)
    if t > n + 1:
        raise UnsupportedRegimeError(f"t={t} exceeds the degree n+1={n + 1} of C{m}□K{n}", nearest="a")
    regime = cycle_complete_regime(n, t)
    g = cartesian_product(cycle(m), complete(n))
    tau = constant_threshold(g, t)
    cells: set[tuple[int, int]] = set()
    params = {"m": m, "n": n, "t": t}

    if regime == "a":
        left, right = range(1, t - 1), range(n - t + 3, n + 1)
        paired = m if m % 2 == 0 else m - 1
        for i in range(1, paired + 1):
            cells |= {(i, j) for j in (left if i % 2 else right)}
        if m % 2 == 0:
            claimed, claim = m * (t - 2), Claim.EXACT
        else:
            if 2 * n < 3 * t - 6:
                raise UnsupportedRegimeError(
                    f"odd m in regime (a) needs 2n >= 3t-6; got n={n}, t={t}", nearest="a"
                )
            cells |= {(m, j) for j in range(1, n - t + 3)}
            cells |= {(m, j) for j in range(t - 1, n + 1)}
            claimed, claim = (m - 3) * (t - 2) + 2 * n, Claim.UPPER
    elif regime == "b":
        up, down = -(-n // 2), n // 2
        paired = m if m % 2 == 0 else m - 1
        for i in range(1, paired + 1):
            cols = range(1, up + 1) if i % 2 else range(up + 1, n + 1)
            cells |= {(i, j) for j in cols}
        if m % 2 == 0:
            claimed = m * n // 2
        else:
            if up > down and up == t:
                cells |= {(m, j) for j in range(n - t + 2, n + 1)}
            else:
                cells |= {(m, j) for j in range(1, t)}
            claimed = (m - 1) * n // 2 + t - 1
        # Below t = 4 rows need not hold t-2 or n-t+2 seeds, and smaller monopolies exist.
        claim = Claim.EXACT if t >= 4 else Claim.UPPER
    else:
        cells = {(i, j) for i in range(1, m + 1) for j in range(1, t + 1)}
        claimed, claim = m * t, Claim.UPPER
    return _finish(
        "mon-cycle-complete", f"mon-cycle-complete/{regime}", g, tau, cells, claimed, Kind.MONOPOLY, claim, params
    )


def mon_diag(n: int) -> Construction:
    _at_least("n", n, 2)
    g = cartesian_product(complete(n), complete(n))
    tau = constant_threshold(g, 2)
    cells = [(i, i) for i in range(1, n + 1)]
    return _finish("mon-diag", "mon2-complete", g, tau, cells, n, Kind.MONOPOLY, Claim.EXACT, {"n": n})


def _blocks(k: int, t: int) -> tuple[int, int, set[tuple[int, int]]]:
    _at_least("k", k, 1)
    if t < 2 or t % 2:
        raise InvalidParameterError(f"t must be an even integer >= 2, got {t}")
    side = t // 2
    n = k * side
    diagonal = {
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if (i - 1) // side == (j - 1) // side
    }
    return n, side, diagonal


def mon_block_diag(k: int, t: int) -> Construction:
    """
    The k diagonal (t/2)×(t/2) blocks of K_n□K_n, n = kt/2, as a t-monopoly.
    """
    n, _, diagonal = _blocks(k, t)
    g = cartesian_product(complete(n), complete(n))
    tau = constant_threshold(g, t)
    return _finish(
        "mon-block-diag", "mont-complete", g, tau, diagonal, k * t * t // 4, Kind.MONOPOLY, Claim.EXACT, {"k": k, "t": t}
    )


def mon_block_complement(k: int, t: int) -> Construction:
    n, _, diagonal = _blocks(k, t)
    g = cartesian_product(complete(n), complete(n))
    tau = constant_threshold(g, 2 * n - t)
    cells = {(i, j) for i in range(1, n + 1) for j in range(1, n + 1)} - diagonal
    return _finish(
        "mon-block-complement",
        "mon2n-t-complete",
        g,
        tau,
        cells,
        k * (k - 1) * t * t // 4,
        Kind.MONOPOLY,
        Claim.EXACT,
        {"k": k, "t": t},
    )


def mon_circulant(n: int) -> Construction:
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError(f"n must be an odd integer >= 3, got {n}")
    g = cartesian_product(complete(n), complete(n))
    tau = constant_threshold(g, n - 1)
    half = (n - 1) // 2
    cells = [(i, (i - 1 + d) % n + 1) for i in range(1, n + 1) for d in range(1, half + 1)]
    return _finish(
        "mon-circulant", "monn-1-complete", g, tau, cells, n * half, Kind.MONOPOLY, Claim.EXACT, {"n": n}
    )


# ---------------------------------------------------------------------------
# Dynamic monopolies
# ---------------------------------------------------------------------------


def dyn_cycle_complete_t2(n: int) -> Construction:
    _at_least("n", n, 3)
    g = cartesian_product(cycle(n), complete(n))
    tau = constant_threshold(g, 2)
    last = n if n % 2 else n - 1
    cells = {(i, i) for i in range(1, last + 1, 2)} | {(n, n)}
    return _finish(
        "dyn-cycle-complete-t2", "dyn2-cycle-complete", g, tau, cells, n // 2 + 1, Kind.DYNAMO, Claim.EXACT, {"n": n}
    )


def dyn_cycle_complete_t3(n: int) -> Construction:
    _at_least("n", n, 3)
    g = cartesian_product(cycle(n), complete(n))
    tau = constant_threshold(g, 3)
    cells = [(i, i) for i in range(1, n + 1)] + [(2, n)]
    return _finish(
        "dyn-cycle-complete-t3", "dyn3-cycle-complete", g, tau, cells, n + 1, Kind.DYNAMO, Claim.EXACT, {"n": n}
    )


def dyn_cycle_complete_t(m: int, n: int, t: int) -> Construction:
    """
    Blocks of t-2 per row, alternating left and right; for odd m the last row is split
    ⌈(t-2)/2⌉ left and ⌊(t-2)/2⌋ right.
    """
    _at_least("m", m, 3)
    if t < 4:
        nearest = "dyn-cycle-complete-t2" if t == 2 else "dyn-cycle-complete-t3" if t == 3 else None
        raise UnsupportedRegimeError(f"t must be >= 4 for the alternating block dynamo, got {t}", nearest=nearest)
    if n < t - 1:
        raise UnsupportedRegimeError(f"n={n} is below t-1={t - 1}", nearest="dyn-cycle-complete")
    g = cartesian_product(cycle(m), complete(n))
    tau = constant_threshold(g, t)
    width = t - 2
    paired = m if m % 2 == 0 else m - 1
    cells: set[tuple[int, int]] = set()
    for i in range(1, paired + 1):
        cols = range(1, width + 1) if i % 2 else range(n - width + 1, n + 1)
        cells |= {(i, j) for j in cols}
    if m % 2:
        lead, tail = -(-width // 2), width // 2
        cells |= {(m, j) for j in range(1, lead + 1)}
        cells |= {(m, j) for j in range(n - tail + 1, n + 1)}
    return _finish(
        "dyn-cycle-complete",
        "dynt-cycle-complete",
        g,
        tau,
        cells,
        m * width,
        Kind.DYNAMO,
        Claim.EXACT,
        {"m": m, "n": n, "t": t},
    )


def dyn_star_star(n: int, t: int) -> Construction:
    """
    All leaf-leaf vertices of K_{1,n}□K_{1,n}. Their degree 2 is below t, so each must be seeded.
    """
    _at_least("n", n, 3)
    if not 3 <= t <= n:
        raise UnsupportedRegimeError(f"t must lie in [3, {n}], got {t}", nearest="dyn-star-star")
    g = cartesian_product(star(n), star(n))
    tau = constant_threshold(g, t, allow_excess=True)
    cells = [(i, j) for i in range(2, n + 2) for j in range(2, n + 2)]
    return _finish("dyn-star-star", "dynt-star-star", g, tau, cells, n * n, Kind.DYNAMO, Claim.EXACT, {"n": n, "t": t})


def small_m_regime_holds(m: int, n: int, t: int) -> bool:
    return 2 * m < t and n > t - m + 1 and t <= m + n - 2


def _staircase(m: int, n: int, t: int) -> set[tuple[int, int]] | None:
    h = t // 2
    if t % 2:
        rows = [(i, j) for i in range(1, h + 2) for j in range(n - h + i - 1, n + 1)]
    else:
        rows = [(i, j) for i in range(1, h + 1) for j in range(n - h + i, n + 1)]
    cols = [(i, j) for j in range(1, h + 1) for i in range(m - h + j, m + 1)]
    cells = set(rows) | set(cols)
    if len(cells) != len(rows) + len(cols):
        return None
    if any(not (1 <= i <= m and 1 <= j <= n) for i, j in cells):
        return None
    return cells


def dyn_complete_complete(m: int, n: int, t: int) -> Construction:
    """
    Staircase dynamo of K_m□K_n: a descending run of rows on the right and of columns at the bottom.
    """
    _at_least("m", m, 1)
    _at_least("n", n, 1)
    _at_least("t", t, 1)
    nearest = "dyn-complete-complete-small-m" if small_m_regime_holds(m, n, t) else None
    if t > m + n - 2:
        raise UnsupportedRegimeError(f"t={t} exceeds m+n-2={m + n - 2}", nearest=nearest)
    if 2 * m < t:
        raise UnsupportedRegimeError(f"m={m} is below t/2 for t={t}", nearest=nearest)
    cells = _staircase(m, n, t)
    if cells is None:
        raise UnsupportedRegimeError(f"the staircase for t={t} does not fit in a {m}x{n} grid", nearest=nearest)
    g = cartesian_product(complete(m), complete(n))
    tau = constant_threshold(g, t)
    h = t // 2
    claimed = (h + 1) ** 2 if t % 2 else h * (h + 1)
    return _finish(
        "dyn-complete-complete",
        "dynt-complete-complete",
        g,
        tau,
        cells,
        claimed,
        Kind.DYNAMO,
        Claim.EXACT,
        {"m": m, "n": n, "t": t},
    )


def dyn_complete_complete_small_m(m: int, n: int, t: int) -> Construction:
    _at_least("m", m, 1)
    if not small_m_regime_holds(m, n, t):
        nearest = "dyn-complete-complete" if 2 * m >= t else None
        raise UnsupportedRegimeError(
            f"needs m < t/2, n > t-m+1 and t <= m+n-2; got m={m}, n={n}, t={t}", nearest=nearest
        )
    g = cartesian_product(complete(m), complete(n))
    tau = constant_threshold(g, t)
    cells: set[tuple[int, int]] = set()
    for j in range(1, m):
        cells |= {(i, j) for i in range(j + 1, m + 1)}
    for i in range(1, m):
        width = t - m - i + 2
        cells |= {(i, j) for j in range(n - width + 1, n + 1)}
    width = t - 2 * (m - 1)
    cells |= {(m, j) for j in range(n - width + 1, n + 1)}
    return _finish(
        "dyn-complete-complete-small-m",
        "dynt-complete-complete-small-m",
        g,
        tau,
        cells,
        m * (t - m + 1),
        Kind.DYNAMO,
        Claim.EXACT,
        {"m": m, "n": n, "t": t},
    )


@dataclass(frozen=True)
class Family:
    builder: Callable[..., Construction]
    params: tuple[str, ...]
    summary: str


FAMILIES: dict[str, Family] = {
    "mon2-torus": Family(mon2_torus, ("n",), "2-monopoly of C_n□C_n"),
    "mon-cycle-complete": Family(mon_cycle_complete, ("m", "n", "t"), "t-monopoly of C_m□K_n"),
    "mon-diag": Family(mon_diag, ("n",), "diagonal 2-monopoly of K_n□K_n"),
    "mon-block-diag": Family(mon_block_diag, ("k", "t"), "diagonal-block t-monopoly of K_n□K_n, n = kt/2"),
    "mon-block-complement": Family(
        mon_block_complement, ("k", "t"), "off-block (2n-t)-monopoly of K_n□K_n, n = kt/2"
    ),
    "mon-circulant": Family(mon_circulant, ("n",), "circulant (n-1)-monopoly of K_n□K_n, n odd"),
    "dyn-cycle-complete-t2": Family(dyn_cycle_complete_t2, ("n",), "2-dynamo of C_n□K_n"),
    "dyn-cycle-complete-t3": Family(dyn_cycle_complete_t3, ("n",), "3-dynamo of C_n□K_n"),
    "dyn-cycle-complete": Family(dyn_cycle_complete_t, ("m", "n", "t"), "t-dynamo of C_m□K_n, t >= 4"),
    "dyn-star-star": Family(dyn_star_star, ("n", "t"), "t-dynamo of K_{1,n}□K_{1,n}"),
    "dyn-complete-complete": Family(dyn_complete_complete, ("m", "n", "t"), "staircase t-dynamo of K_m□K_n"),
    "dyn-complete-complete-small-m": Family(
        dyn_complete_complete_small_m, ("m", "n", "t"), "t-dynamo of K_m□K_n with m < t/2"
    ),
}


def build(tag: str, **params: int) -> Construction:
    family = FAMILIES.get(tag)
    if family is None:
        raise InvalidParameterError(f"unknown family {tag!r}; choose from {', '.join(sorted(FAMILIES))}")
    missing = [name for name in family.params if params.get(name) is None]
    if missing:
        raise InvalidParameterError(f"family {tag} needs parameters: {', '.join(missing)}")
    return family.builder(**{name: int(params[name]) for name in family.params})
