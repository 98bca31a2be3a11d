from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ThresholdExceedsDegreeError, UnsupportedMajorityError
from .graph import Graph


@dataclass(frozen=True)
class ThresholdAssignment:
    """
    Per-vertex thresholds τ(v) >= 1.

    Strict assignments (the default) also satisfy τ(v) <= deg(v). Assignments built with
    allow_excess=True may exceed a vertex's degree; such vertices can only be seeded.
    """

    values: tuple[int, ...]
    allow_excess: bool = False

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    @property
    def constant(self) -> int | None:
        distinct = set(self.values)
        return distinct.pop() if len(distinct) == 1 else None

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int32)

    def forced(self, g: Graph) -> frozenset[int]:
        return frozenset(v for v, t in enumerate(self.values) if t > g.degree(v))

    def lowered(self) -> ThresholdAssignment:
        return ThresholdAssignment(tuple(max(1, t - 1) for t in self.values), self.allow_excess)

    def dominates(self, other: ThresholdAssignment) -> bool:
        return len(self.values) == len(other.values) and all(a >= b for a, b in zip(self.values, other.values))

    def describe(self) -> str:
        t = self.constant
        return f"τ≡{t}" if t is not None else f"τ=({', '.join(map(str, self.values))})"


def validate(g: Graph, values: Sequence[int], allow_excess: bool = False) -> ThresholdAssignment:
    if len(values) != g.vertex_count:
        raise ThresholdExceedsDegreeError(
            f"{len(values)} thresholds given for {g.vertex_count} vertices"
        )
    for v, t in enumerate(values):
        deg = g.degree(v)
        if t < 1:
            raise ThresholdExceedsDegreeError(
                f"threshold {t} at vertex {_where(g, v)} is below 1", vertex=v, threshold=t, degree=deg
            )
        if t > deg and not allow_excess:
            raise ThresholdExceedsDegreeError(
                f"threshold {t} exceeds degree {deg} at vertex {_where(g, v)}", vertex=v, threshold=t, degree=deg
            )
    return ThresholdAssignment(tuple(int(t) for t in values), allow_excess)


def constant_threshold(g: Graph, t: int, allow_excess: bool = False) -> ThresholdAssignment:
    return validate(g, [t] * g.vertex_count, allow_excess=allow_excess)


def simple_majority(g: Graph) -> ThresholdAssignment:
    """
    τ(v) = deg(v)/2; odd degrees are rejected rather than rounded.
    """
    for v, deg in enumerate(g.degrees):
        if deg % 2 or deg == 0:
            raise UnsupportedMajorityError(
                f"simple majority needs even positive degree; vertex {_where(g, v)} has degree {deg}",
                vertex=v,
                degree=deg,
            )
    return validate(g, [deg // 2 for deg in g.degrees])


def strict_majority(g: Graph) -> ThresholdAssignment:
    """
    τ(v) = (deg(v)+1)/2; even degrees are rejected rather than rounded.
    """
    for v, deg in enumerate(g.degrees):
        if deg % 2 == 0:
            raise UnsupportedMajorityError(
                f"strict majority needs odd degree; vertex {_where(g, v)} has degree {deg}",
                vertex=v,
                degree=deg,
            )
    return validate(g, [(deg + 1) // 2 for deg in g.degrees])


def explicit_thresholds(g: Graph, values: Sequence[int], allow_excess: bool = False) -> ThresholdAssignment:
    return validate(g, list(values), allow_excess=allow_excess)


def _where(g: Graph, v: int) -> str:
    return f"{v} {g.coord_of(v)}" if g.is_labeled else str(v)
