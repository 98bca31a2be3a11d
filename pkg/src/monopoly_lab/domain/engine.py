"""
The threshold activation process.

`activate` runs synchronous rounds and records the layers D_0, D_1, ..., D_k.
`closure` computes only the fixed point, by counting active neighbors along a queue;
it is the hot path for the exhaustive search.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph, GridCoord
from .thresholds import ThresholdAssignment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexSet:
    members: frozenset[int]

    @classmethod
    def of(cls, vertices: Iterable[int]) -> VertexSet:
        return cls(frozenset(int(v) for v in vertices))

    @classmethod
    def from_mask(cls, mask: int) -> VertexSet:
        return cls(frozenset(v for v in range(mask.bit_length()) if mask >> v & 1))

    @classmethod
    def from_coords(cls, g: Graph, coords: Iterable[GridCoord | tuple[int, int]]) -> VertexSet:
        return cls(frozenset(g.vertex_at(c if isinstance(c, GridCoord) else GridCoord(*c)) for c in coords))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))

    def __contains__(self, v: object) -> bool:
        return v in self.members

    @property
    def mask(self) -> int:
        mask = 0
        for v in self.members:
            mask |= 1 << v
        return mask

    def sorted(self) -> list[int]:
        return sorted(self.members)

    def cells(self, g: Graph) -> list[GridCoord]:
        return sorted(g.coord_of(v) for v in self.members)

    def without(self, v: int) -> VertexSet:
        return VertexSet(self.members - {v})


@dataclass(frozen=True)
class ActivationTrace:
    layers: tuple[frozenset[int], ...]
    vertex_count: int

    @property
    def activated(self) -> frozenset[int]:
        return frozenset().union(*self.layers)

    @property
    def complete(self) -> bool:
        return len(self.activated) == self.vertex_count

    @property
    def rounds(self) -> int:
        return len(self.layers) - 1

    def active_after(self, round_index: int) -> frozenset[int]:
        return frozenset().union(*self.layers[: round_index + 1])

    def replay(self, g: Graph, tau: ThresholdAssignment) -> str | None:
        """
        Re-check the trace layer by layer. Returns a description of the first problem, or None.
        """
        seen: set[int] = set()
        for i, layer in enumerate(self.layers):
            if seen & layer:
                return f"layer {i} repeats vertices {sorted(seen & layer)}"
            if i > 0:
                if not layer:
                    return f"layer {i} is empty"
                for v in sorted(layer):
                    if len(g.neighbors(v) & seen) < tau[v]:
                        return f"vertex {v} in layer {i} has fewer than {tau[v]} earlier neighbors"
            seen |= layer
        for v in range(g.vertex_count):
            if v not in seen and len(g.neighbors(v) & seen) >= tau[v]:
                return f"vertex {v} meets its threshold but was never activated"
        return None


@dataclass(frozen=True)
class MonopolyCheck:
    ok: bool
    witness: int | None = None
    have: int | None = None
    need: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def activate(g: Graph, tau: ThresholdAssignment, seed: VertexSet | Iterable[int]) -> ActivationTrace:
    """
    Synchronous rounds: D_{i+1} is every inactive vertex with at least τ(v) active neighbors.
    """
    seed_set = seed.members if isinstance(seed, VertexSet) else frozenset(seed)
    g.check_vertices(seed_set)
    active = np.zeros(g.vertex_count, dtype=bool)
    active[list(seed_set)] = True
    thresholds = tau.array
    layers = [frozenset(seed_set)]
    while True:
        counts = g.matrix @ active.astype(np.int32)
        newly = ~active & (counts >= thresholds)
        if not newly.any():
            break
        layers.append(frozenset(np.flatnonzero(newly).tolist()))
        active |= newly
        logger.debug("%s round %d: +%d active", g.name, len(layers) - 1, len(layers[-1]))
    return ActivationTrace(tuple(layers), g.vertex_count)


def closure(g: Graph, tau: ThresholdAssignment, seed_mask: int) -> int:
    active = seed_mask
    counts = [0] * g.vertex_count
    thresholds = tau.values
    adjacency = g.adjacency
    queue = [v for v in range(g.vertex_count) if seed_mask >> v & 1]
    while queue:
        v = queue.pop()
        for u in adjacency[v]:
            if active >> u & 1:
                continue
            counts[u] += 1
            if counts[u] >= thresholds[u]:
                active |= 1 << u
                queue.append(u)
    return active


def activate_in_order(g: Graph, tau: ThresholdAssignment, seed: VertexSet, order: Sequence[int]) -> frozenset[int]:
    """
    Asynchronous sweeps in a fixed vertex order; a vertex sees activations made earlier in the same sweep.
    """
    active = set(seed.members)
    changed = True
    while changed:
        changed = False
        for v in order:
            if v not in active and len(g.neighbors(v) & active) >= tau[v]:
                active.add(v)
                changed = True
    return frozenset(active)


def is_static_monopoly(g: Graph, tau: ThresholdAssignment, m: VertexSet) -> MonopolyCheck:
    g.check_vertices(m.members)
    for v in range(g.vertex_count):
        if v in m.members:
            continue
        have = len(g.neighbors(v) & m.members)
        if have < tau[v]:
            return MonopolyCheck(False, witness=v, have=have, need=tau[v])
    return MonopolyCheck(True)


def is_dynamic_monopoly(g: Graph, tau: ThresholdAssignment, d: VertexSet) -> bool:
    g.check_vertices(d.members)
    return closure(g, tau, d.mask) == full_mask(g)


def full_mask(g: Graph) -> int:
    return (1 << g.vertex_count) - 1


def static_mask_ok(g: Graph, tau: ThresholdAssignment, mask: int) -> bool:
    masks = g.neighbor_masks
    thresholds = tau.values
    for v in range(g.vertex_count):
        if mask >> v & 1:
            continue
        if (masks[v] & mask).bit_count() < thresholds[v]:
            return False
    return True


class Kind(str, Enum):
    MONOPOLY = "monopoly"
    DYNAMO = "dynamo"


def verifies(g: Graph, tau: ThresholdAssignment, s: VertexSet, kind: Kind) -> bool:
    if kind is Kind.MONOPOLY:
        return is_static_monopoly(g, tau, s).ok
    return is_dynamic_monopoly(g, tau, s)
