from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import networkx as nx
import numpy as np

from .errors import InvalidParameterError, ParseError


@dataclass(frozen=True, order=True)
class GridCoord:
    """
    1-based (row, col) position of a product-graph vertex: v_ij.
    """

    row: int
    col: int

    def __str__(self) -> str:
        return f"({self.row},{self.col})"


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple undirected graph on vertices 0..vertex_count-1.

    Product graphs carry `shape` = (rows, cols) and one GridCoord per vertex; rows are
    indexed by the first factor, columns by the second.
    """

    vertex_count: int
    adjacency: tuple[frozenset[int], ...]
    labels: tuple[GridCoord, ...] | None = None
    shape: tuple[int, int] | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise InvalidParameterError("vertex_count must be non-negative")
        if len(self.adjacency) != self.vertex_count:
            raise InvalidParameterError(
                f"adjacency has {len(self.adjacency)} rows for {self.vertex_count} vertices"
            )
        for v, nbrs in enumerate(self.adjacency):
            if v in nbrs:
                raise InvalidParameterError(f"self-loop at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.vertex_count:
                    raise InvalidParameterError(f"vertex {v} has out-of-range neighbor {u}")
                if v not in self.adjacency[u]:
                    raise InvalidParameterError(f"edge {v}-{u} is not symmetric")
        if (self.labels is None) != (self.shape is None):
            raise InvalidParameterError("labels and shape must be given together")
        if self.labels is not None and self.shape is not None:
            rows, cols = self.shape
            if rows * cols != self.vertex_count or len(self.labels) != self.vertex_count:
                raise InvalidParameterError(f"grid {rows}x{cols} does not cover {self.vertex_count} vertices")
            seen = set(self.labels)
            if len(seen) != self.vertex_count or any(
                not (1 <= c.row <= rows and 1 <= c.col <= cols) for c in seen
            ):
                raise InvalidParameterError("grid labels are not a bijection onto the grid")

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        name: str = "",
        labels: tuple[GridCoord, ...] | None = None,
        shape: tuple[int, int] | None = None,
    ) -> Graph:
        adjacency: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise InvalidParameterError(f"edge {u}-{v} out of range for {vertex_count} vertices")
            if u == v:
                raise InvalidParameterError(f"self-loop at vertex {u}")
            if v in adjacency[u]:
                raise InvalidParameterError(f"duplicate edge {u}-{v}")
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(
            vertex_count=vertex_count,
            adjacency=tuple(frozenset(nbrs) for nbrs in adjacency),
            labels=labels,
            shape=shape,
            name=name,
        )

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, name: str = "") -> Graph:
        """
        Node iteration order of `nx_graph` defines the vertex ids.
        """
        index = {node: i for i, node in enumerate(nx_graph.nodes())}
        edges = [(index[a], index[b]) for a, b in nx_graph.edges()]
        return cls.from_edges(len(index), edges, name=name)

    def to_networkx(self) -> nx.Graph:
        nx_graph = nx.Graph()
        nx_graph.add_nodes_from(range(self.vertex_count))
        nx_graph.add_edges_from(self.edges())
        return nx_graph

    def neighbors(self, v: int) -> frozenset[int]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(nbrs) for nbrs in self.adjacency)

    @property
    def min_degree(self) -> int:
        return min(self.degrees, default=0)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v)

    @property
    def edge_count(self) -> int:
        return sum(self.degrees) // 2

    @cached_property
    def neighbor_masks(self) -> tuple[int, ...]:
        masks = []
        for nbrs in self.adjacency:
            mask = 0
            for u in nbrs:
                mask |= 1 << u
            masks.append(mask)
        return tuple(masks)

    @cached_property
    def matrix(self) -> np.ndarray:
        adj = np.zeros((self.vertex_count, self.vertex_count), dtype=np.int32)
        for u, v in self.edges():
            adj[u, v] = 1
            adj[v, u] = 1
        adj.setflags(write=False)
        return adj

    @property
    def is_labeled(self) -> bool:
        return self.labels is not None

    @cached_property
    def _coord_index(self) -> dict[GridCoord, int]:
        return {coord: v for v, coord in enumerate(self.labels or ())}

    def vertex_at(self, coord: GridCoord) -> int:
        if self.labels is None:
            raise InvalidParameterError(f"graph {self.name or '<unnamed>'} has no grid labels")
        try:
            return self._coord_index[coord]
        except KeyError:
            rows, cols = self.shape or (0, 0)
            raise InvalidParameterError(f"coordinate {coord} outside the {rows}x{cols} grid") from None

    def coord_of(self, v: int) -> GridCoord:
        if self.labels is None:
            raise InvalidParameterError(f"graph {self.name or '<unnamed>'} has no grid labels")
        if not 0 <= v < self.vertex_count:
            raise InvalidParameterError(f"vertex {v} out of range")
        return self.labels[v]

    def check_vertices(self, vertices: Iterable[int]) -> None:
        for v in vertices:
            if not 0 <= v < self.vertex_count:
                raise InvalidParameterError(
                    f"vertex {v} out of range for {self.name or 'graph'} with {self.vertex_count} vertices"
                )


def vertex_at(g: Graph, coord: GridCoord) -> int:
    return g.vertex_at(coord)


def coord_of(g: Graph, v: int) -> GridCoord:
    return g.coord_of(v)


def cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParameterError(f"cycle needs n >= 3, got {n}")
    return Graph.from_networkx(nx.cycle_graph(n), name=f"C{n}")


def complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParameterError(f"complete graph needs n >= 1, got {n}")
    return Graph.from_networkx(nx.complete_graph(n), name=f"K{n}")


def star(n: int) -> Graph:
    """
    K_{1,n}; vertex 0 is the center.
    """
    if n < 1:
        raise InvalidParameterError(f"star needs n >= 1, got {n}")
    return Graph.from_networkx(nx.star_graph(n), name=f"S{n}")


def complete_bipartite(m: int, n: int) -> Graph:
    if m < 1 or n < 1:
        raise InvalidParameterError(f"complete bipartite graph needs m, n >= 1, got {m}, {n}")
    return Graph.from_networkx(nx.complete_bipartite_graph(m, n), name=f"K{m},{n}")


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """
    G□H with vertex (u, v) at id u*|V(h)| + v and label v_(u+1)(v+1).
    """
    if g.vertex_count == 0 or h.vertex_count == 0:
        raise InvalidParameterError("cartesian product of an empty graph")
    rows, cols = g.vertex_count, h.vertex_count
    product = nx.cartesian_product(g.to_networkx(), h.to_networkx())
    edges = [(a[0] * cols + a[1], b[0] * cols + b[1]) for a, b in product.edges()]
    labels = tuple(GridCoord(u + 1, v + 1) for u in range(rows) for v in range(cols))
    return Graph.from_edges(
        rows * cols,
        edges,
        name=f"{_operand_name(g)}□{_operand_name(h)}",
        labels=labels,
        shape=(rows, cols),
    )


def line_graph(g: Graph) -> Graph:
    """
    L(g); vertex i is the i-th edge of g in lexicographic (u < v) order.
    """
    ordered = g.edges()
    if not ordered:
        raise InvalidParameterError("line graph of an edgeless graph")
    index = {edge: i for i, edge in enumerate(ordered)}
    lg = nx.line_graph(g.to_networkx())
    edges = [(index[_ordered(a)], index[_ordered(b)]) for a, b in lg.edges()]
    return Graph.from_edges(len(ordered), edges, name=f"L({g.name})")


def _ordered(edge: tuple[int, int]) -> tuple[int, int]:
    u, v = edge
    return (u, v) if u < v else (v, u)


def _operand_name(g: Graph) -> str:
    return f"({g.name})" if "□" in g.name else g.name


def to_edge_list(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"]
    lines.extend(f"{u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def parse_edge_list(text: str, name: str = "") -> Graph:
    """
    Parse "n m" followed by m lines "u v" (0-based ids). Blank lines and '#' comments are skipped.
    """
    rows = [
        (number, line.split("#", 1)[0].split())
        for number, line in enumerate(text.splitlines(), start=1)
    ]
    rows = [(number, parts) for number, parts in rows if parts]
    if not rows:
        raise ParseError("empty edge list", line=1)
    header_line, header = rows[0]
    vertex_count, edge_count = _parse_pair(header, header_line)
    body = rows[1:]
    if len(body) != edge_count:
        last = body[-1][0] if body else header_line
        raise ParseError(f"header declares {edge_count} edges, found {len(body)}", line=last)
    edges: list[tuple[int, int]] = []
    for number, parts in body:
        u, v = _parse_pair(parts, number)
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise ParseError(f"edge {u} {v} out of range for {vertex_count} vertices", line=number)
        edges.append((u, v))
    try:
        return Graph.from_edges(vertex_count, edges, name=name)
    except InvalidParameterError as exc:
        raise ParseError(str(exc)) from exc


def _parse_pair(parts: list[str], line: int) -> tuple[int, int]:
    if len(parts) != 2:
        raise ParseError(f"expected two integers, got {' '.join(parts)!r}", line=line)
    try:
        a, b = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(f"expected two integers, got {' '.join(parts)!r}", line=line) from None
    if a < 0 or b < 0:
        raise ParseError("negative value", line=line)
    return a, b


_ATOM = re.compile(r"^(?P<family>[CKS])(?P<a>\d+)(?:,(?P<b>\d+))?$")


def parse_graph_spec(spec: str) -> Graph:
    """
    Build a graph from CLI shorthand: C5, K4, S3 (star), K2,3, L(<spec>), <spec>x<spec>,
    or a path to an edge-list / graph JSON file.
    """
    text = spec.strip()
    if not text:
        raise ParseError("empty graph spec")
    path = Path(text)
    if not _is_shorthand(text) and path.exists():
        from ..services.documents import load_graph

        return load_graph(path)
    parts = _split_product(text)
    if len(parts) > 1:
        result = parse_graph_spec(parts[0])
        for part in parts[1:]:
            result = cartesian_product(result, parse_graph_spec(part))
        return result
    if text.startswith("L(") and text.endswith(")"):
        return line_graph(parse_graph_spec(text[2:-1]))
    if text.startswith("(") and text.endswith(")"):
        return parse_graph_spec(text[1:-1])
    match = _ATOM.match(text)
    if not match:
        raise ParseError(f"unrecognised graph spec {spec!r}")
    family, a, b = match["family"], int(match["a"]), match["b"]
    if b is not None:
        if family != "K":
            raise ParseError(f"only K accepts two sizes: {spec!r}")
        return complete_bipartite(a, int(b))
    if family == "C":
        return cycle(a)
    if family == "K":
        return complete(a)
    return star(a)


def _is_shorthand(text: str) -> bool:
    if _ATOM.match(text):
        return True
    if text.startswith("L(") and text.endswith(")"):
        return _is_shorthand(text[2:-1].strip())
    if text.startswith("(") and text.endswith(")"):
        return _is_shorthand(text[1:-1].strip())
    parts = _split_product(text)
    return len(parts) > 1 and all(_is_shorthand(p) for p in parts)


def _split_product(text: str) -> list[str]:
    parts: list[str] = []
    depth = 0
    current = ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "x□*":
            parts.append(current)
            current = ""
            continue
        current += ch
    parts.append(current)
    return [p.strip() for p in parts]
