from __future__ import annotations

from typing import Iterable, Iterator

from rich.text import Text

from ..domain.engine import ActivationTrace, VertexSet
from ..domain.errors import InvalidParameterError
from ..domain.graph import Graph, GridCoord

LAYER_STYLES = ("bold red", "yellow", "green", "cyan", "blue", "magenta")


def _grid_rows(g: Graph) -> Iterator[list[int]]:
    """
    Vertex ids row by row, read from the graph's own grid labels.
    """
    if g.shape is None:
        raise InvalidParameterError(f"{g.name or 'graph'} has no grid labels to render")
    rows, cols = g.shape
    for i in range(1, rows + 1):
        yield [g.vertex_at(GridCoord(i, j)) for j in range(1, cols + 1)]


def _members(s: VertexSet | Iterable[int]) -> frozenset[int]:
    return s.members if isinstance(s, VertexSet) else frozenset(s)


def render_grid(g: Graph, s: VertexSet | Iterable[int], member: str = "*", empty: str = ".") -> str:
    """
    rows x cols characters, row-major, newline-terminated.
    """
    chosen = _members(s)
    lines = ["".join(member if v in chosen else empty for v in row) for row in _grid_rows(g)]
    return "\n".join(lines) + "\n"


def render_grid_rich(g: Graph, s: VertexSet | Iterable[int], member: str = "*", empty: str = ".") -> Text:
    chosen = _members(s)
    text = Text()
    for row in _grid_rows(g):
        for v in row:
            if v in chosen:
                text.append(member, style="bold red")
            else:
                text.append(empty, style="dim")
        text.append("\n")
    return text


def render_round(g: Graph, trace: ActivationTrace, round_index: int, empty: str = ".") -> Text:
    """
    Snapshot after `round_index` rounds; each active cell shows the round it joined in.
    """
    joined = {v: r for r, layer in enumerate(trace.layers[: round_index + 1]) for v in layer}
    text = Text()
    for row in _grid_rows(g):
        for v in row:
            r = joined.get(v)
            if r is None:
                text.append(empty, style="dim")
            else:
                text.append(_round_glyph(r), style=LAYER_STYLES[min(r, len(LAYER_STYLES) - 1)])
        text.append("\n")
    return text


def render_trace(g: Graph, trace: ActivationTrace) -> str:
    blocks = [f"round {r}:\n{render_round(g, trace, r).plain}" for r in range(len(trace.layers))]
    return "\n".join(blocks)


def _round_glyph(r: int) -> str:
    return str(r) if r < 10 else chr(ord("a") + min(r - 10, 25))
