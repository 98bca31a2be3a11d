"""
JSON documents for graphs, thresholds, vertex sets, traces and results.

Every document carries a versioned `format` tag so stored fixtures stay readable.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Literal, TypeVar

from pydantic import BaseModel, ValidationError, model_validator

from ..domain.engine import ActivationTrace, VertexSet
from ..domain.errors import InvalidParameterError, ParseError
from ..domain.graph import Graph, GridCoord, parse_edge_list, to_edge_list
from ..domain.thresholds import ThresholdAssignment, constant_threshold, explicit_thresholds
from .bounds import BoundReport
from .constructions import Construction
from .solver import SolveResult, instance_fingerprint

Model = TypeVar("Model", bound=BaseModel)


class GraphDoc(BaseModel):
    format: Literal["monopoly-lab/graph/1"] = "monopoly-lab/graph/1"
    name: str = ""
    vertex_count: int
    edges: list[tuple[int, int]]
    shape: tuple[int, int] | None = None
    labels: list[tuple[int, int]] | None = None


class ThresholdsDoc(BaseModel):
    format: Literal["monopoly-lab/thresholds/1"] = "monopoly-lab/thresholds/1"
    constant: int | None = None
    values: list[int] | None = None
    allow_excess: bool = False

    @model_validator(mode="after")
    def _one_form(self) -> ThresholdsDoc:
        if (self.constant is None) == (self.values is None):
            raise ValueError("give exactly one of 'constant' or 'values'")
        return self


class VertexSetDoc(BaseModel):
    format: Literal["monopoly-lab/vertex-set/1"] = "monopoly-lab/vertex-set/1"
    members: list[int] | None = None
    cells: list[tuple[int, int]] | None = None

    @model_validator(mode="after")
    def _one_form(self) -> VertexSetDoc:
        if self.members is None and self.cells is None:
            raise ValueError("give 'members' or 'cells'")
        return self


class TraceDoc(BaseModel):
    format: Literal["monopoly-lab/trace/1"] = "monopoly-lab/trace/1"
    layers: list[list[int]]
    complete: bool
    rounds: int


class SolveDoc(BaseModel):
    format: Literal["monopoly-lab/solve/1"] = "monopoly-lab/solve/1"
    graph: str
    fingerprint: str
    kind: Literal["monopoly", "dynamo"]
    status: Literal["solved", "inconclusive"]
    optimum: int | None
    witness: list[int] | None
    explored: int
    elapsed: float
    lower_bound: int
    upper_bound: int


class BoundDoc(BaseModel):
    format: Literal["monopoly-lab/bound/1"] = "monopoly-lab/bound/1"
    name: str
    direction: Literal["lower", "upper", "exact"]
    target: Literal["monopoly", "dynamo"]
    parameters: dict[str, int]
    applicable: bool
    value: str | None = None
    certificate: int | None = None
    reason: str | None = None
    hypotheses: list[str] = []
    notes: list[str] = []


class ConstructionDoc(BaseModel):
    format: Literal["monopoly-lab/construction/1"] = "monopoly-lab/construction/1"
    family: str
    theorem_tag: str
    params: dict[str, int]
    graph: str
    shape: tuple[int, int] | None
    kind: Literal["monopoly", "dynamo"]
    claim: Literal["exact", "upper"]
    claimed_size: int
    thresholds: ThresholdsDoc
    members: list[int]
    cells: list[tuple[int, int]]


class OutcomeDoc(BaseModel):
    instance: str
    passed: bool
    detail: str = ""


class CheckReportDoc(BaseModel):
    format: Literal["monopoly-lab/check-report/1"] = "monopoly-lab/check-report/1"
    bundle: str
    seed: int
    passed: int
    failed: int
    outcomes: list[OutcomeDoc]


def parse_document(text: str, model: type[Model]) -> Model:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from exc
    try:
        return model.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise ParseError(f"{model.__name__}: {where}: {first['msg']}") from exc


def dump_document(doc: BaseModel) -> str:
    return doc.model_dump_json(indent=2) + "\n"


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc


# Graphs


def graph_to_doc(g: Graph) -> GraphDoc:
    return GraphDoc(
        name=g.name,
        vertex_count=g.vertex_count,
        edges=g.edges(),
        shape=g.shape,
        labels=[(c.row, c.col) for c in g.labels] if g.labels else None,
    )


def doc_to_graph(doc: GraphDoc) -> Graph:
    labels = tuple(GridCoord(i, j) for i, j in doc.labels) if doc.labels is not None else None
    try:
        return Graph.from_edges(doc.vertex_count, doc.edges, name=doc.name, labels=labels, shape=doc.shape)
    except InvalidParameterError as exc:
        raise ParseError(f"graph document: {exc}") from exc


def load_graph(path: Path) -> Graph:
    """
    Read a graph document or a plain edge list, told apart by a leading '{'.
    """
    text = _read(path)
    if text.lstrip().startswith("{"):
        return doc_to_graph(parse_document(text, GraphDoc))
    return parse_edge_list(text, name=path.stem)


def save_graph(g: Graph, path: Path, as_json: bool | None = None) -> None:
    if as_json is None:
        as_json = path.suffix == ".json"
    path.write_text(render_graph(g, as_json), encoding="utf-8")


def render_graph(g: Graph, as_json: bool) -> str:
    return dump_document(graph_to_doc(g)) if as_json else to_edge_list(g)


# Thresholds and vertex sets


def thresholds_to_doc(tau: ThresholdAssignment) -> ThresholdsDoc:
    t = tau.constant
    if t is not None:
        return ThresholdsDoc(constant=t, allow_excess=tau.allow_excess)
    return ThresholdsDoc(values=list(tau.values), allow_excess=tau.allow_excess)


def doc_to_thresholds(doc: ThresholdsDoc, g: Graph) -> ThresholdAssignment:
    if doc.constant is not None:
        return constant_threshold(g, doc.constant, allow_excess=doc.allow_excess)
    return explicit_thresholds(g, doc.values or [], allow_excess=doc.allow_excess)


def load_thresholds(path: Path, g: Graph) -> ThresholdAssignment:
    return doc_to_thresholds(parse_document(_read(path), ThresholdsDoc), g)


def vertex_set_to_doc(s: VertexSet, g: Graph | None = None) -> VertexSetDoc:
    cells = [(c.row, c.col) for c in s.cells(g)] if g is not None and g.is_labeled else None
    return VertexSetDoc(members=s.sorted(), cells=cells)


def doc_to_vertex_set(doc: VertexSetDoc, g: Graph) -> VertexSet:
    if doc.members is not None:
        g.check_vertices(doc.members)
        return VertexSet.of(doc.members)
    return VertexSet.from_coords(g, doc.cells or [])


def load_vertex_set(path: Path, g: Graph) -> VertexSet:
    return doc_to_vertex_set(parse_document(_read(path), VertexSetDoc), g)


# Results


def trace_to_doc(trace: ActivationTrace) -> TraceDoc:
    return TraceDoc(layers=[sorted(layer) for layer in trace.layers], complete=trace.complete, rounds=trace.rounds)


def doc_to_trace(doc: TraceDoc, vertex_count: int) -> ActivationTrace:
    return ActivationTrace(tuple(frozenset(layer) for layer in doc.layers), vertex_count)


def solve_to_doc(result: SolveResult, g: Graph, tau: ThresholdAssignment) -> SolveDoc:
    return SolveDoc(
        graph=g.name,
        fingerprint=instance_fingerprint(g, tau),
        kind=result.kind.value,
        status=result.status.value,
        optimum=result.optimum,
        witness=result.witness.sorted() if result.witness is not None else None,
        explored=result.explored,
        elapsed=result.elapsed,
        lower_bound=result.lower_bound,
        upper_bound=result.upper_bound,
    )


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def bound_to_doc(report: BoundReport) -> BoundDoc:
    return BoundDoc(
        name=report.name,
        direction=report.direction.value,
        target=report.target.value,
        parameters=dict(report.parameters),
        applicable=report.applicable,
        value=format_fraction(report.value) if report.value is not None else None,
        certificate=report.certificate,
        reason=report.reason,
        hypotheses=list(report.hypotheses),
        notes=list(report.notes),
    )


def construction_to_doc(c: Construction) -> ConstructionDoc:
    return ConstructionDoc(
        family=c.family,
        theorem_tag=c.theorem_tag,
        params=dict(c.params),
        graph=c.graph.name,
        shape=c.graph.shape,
        kind=c.kind.value,
        claim=c.claim.value,
        claimed_size=c.claimed_size,
        thresholds=thresholds_to_doc(c.tau),
        members=c.vertex_set.sorted(),
        cells=[(cell.row, cell.col) for cell in c.cells()],
    )
