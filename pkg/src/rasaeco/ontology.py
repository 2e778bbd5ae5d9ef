"""Corpus discovery, cross-scenario resolution and the ontology graph."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from rasaeco.diagnostics import Diagnostic
from rasaeco.document import IDENTIFIER_RE, ScenarioDocument

DEFAULT_NATURE_VOCABULARY = ("uses", "refines", "is-step-of", "bundles")


@dataclass
class Corpus:
    """Documents keyed by identifier, iterated in lexicographic order."""

    documents: dict[str, ScenarioDocument] = field(default_factory=dict)

    def ordered(self) -> list[ScenarioDocument]:
        return [self.documents[key] for key in sorted(self.documents)]


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    nature: str


@dataclass(frozen=True)
class OntologyGraph:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...]


@dataclass(frozen=True)
class DegreeStats:
    in_degree: dict[str, int]
    out_degree: dict[str, int]


def discover(scenarios_dir: Path) -> tuple[list[tuple[str, Path]], list[Diagnostic]]:
    """Find every scenario.md below the directory, keyed by its parent
    directory name.  Output order is lexicographic and independent of the
    filesystem enumeration order."""
    by_identifier: dict[str, list[Path]] = {}
    for path in sorted(scenarios_dir.rglob("scenario.md")):
        by_identifier.setdefault(path.parent.name, []).append(path)

    entries: list[tuple[str, Path]] = []
    diagnostics: list[Diagnostic] = []
    for identifier in sorted(by_identifier):
        paths = sorted(by_identifier[identifier])
        if len(paths) > 1:
            listing = ", ".join(str(p) for p in paths)
            diagnostics.append(
                Diagnostic(
                    "E010",
                    f"duplicate scenario identifier '{identifier}': {listing}",
                    str(paths[1]),
                )
            )
            continue
        if not IDENTIFIER_RE.fullmatch(identifier):
            diagnostics.append(
                Diagnostic(
                    "E010",
                    f"invalid scenario identifier '{identifier}' "
                    "(expected [a-z0-9_]+)",
                    str(paths[0]),
                )
            )
            continue
        entries.append((identifier, paths[0]))
    return entries, diagnostics


def build_graph(
    corpus: Corpus, nature_vocabulary: tuple[str, ...] = DEFAULT_NATURE_VOCABULARY
) -> tuple[OntologyGraph, list[Diagnostic]]:
    """One edge per meta relation, in meta order per source, sources
    lexicographic.  Relations to unknown scenarios are dropped with E008."""
    diagnostics: list[Diagnostic] = []
    nodes = tuple(sorted(corpus.documents))
    edges: list[Edge] = []
    for doc in corpus.ordered():
        for relation in doc.meta.relations:
            if relation.target not in corpus.documents:
                diagnostics.append(
                    Diagnostic(
                        "E008",
                        f"relation target '{relation.target}' is not a known "
                        "scenario",
                        doc.path,
                        doc.meta_line,
                        doc.meta_col,
                    )
                )
                continue
            if relation.nature not in nature_vocabulary:
                diagnostics.append(
                    Diagnostic(
                        "W102",
                        f"relation nature '{relation.nature}' is not in the "
                        "nature vocabulary",
                        doc.path,
                        doc.meta_line,
                        doc.meta_col,
                    )
                )
            edges.append(Edge(doc.identifier, relation.target, relation.nature))
    return OntologyGraph(nodes=nodes, edges=tuple(edges)), diagnostics


def resolve_cross(corpus: Corpus) -> list[Diagnostic]:
    """Resolve qualified ref/modelref targets and scenariorefs corpus-wide."""
    diagnostics: list[Diagnostic] = []
    for doc in corpus.ordered():
        for reference in doc.references:
            if reference.target_scenario == "local":
                continue
            target = corpus.documents.get(reference.target_scenario)
            if target is None:
                diagnostics.append(
                    Diagnostic(
                        "E007",
                        f"unresolved scenario '{reference.target_scenario}'",
                        doc.path,
                        reference.span.start_line,
                        reference.span.start_col,
                    )
                )
                continue
            if reference.kind == "scenarioref":
                continue
            table = (
                target.definitions if reference.kind == "ref" else target.models
            )
            if reference.target_name not in table:
                diagnostics.append(
                    Diagnostic(
                        "E006",
                        f"unresolved reference '{reference.raw_name}'",
                        doc.path,
                        reference.span.start_line,
                        reference.span.start_col,
                    )
                )
    return diagnostics


def degree_stats(graph: OntologyGraph) -> DegreeStats:
    in_degree = {node: 0 for node in graph.nodes}
    out_degree = {node: 0 for node in graph.nodes}
    for edge in graph.edges:
        out_degree[edge.source] += 1
        in_degree[edge.target] += 1
    return DegreeStats(in_degree=in_degree, out_degree=out_degree)
