"""Assembly of a parsed file into a scenario document.

Walks the tag forest once, in document order, collecting model/definition
symbol tables, phase/level markings and references, and attaches the
volumetric built from the meta header.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from rasaeco.diagnostics import Diagnostic
from rasaeco.markup import (
    BodySegment,
    MetaHeader,
    SourceSpan,
    TagNode,
    TextSegment,
)
from rasaeco.space import (
    Level,
    Phase,
    UnknownAxisValue,
    Volumetric,
    parse_axis_value,
    validate_volumetric,
)

IDENTIFIER_RE = re.compile(r"[a-z0-9_]+")

#: Maximal alphanumeric runs starting with "Ifc" and not glued to a
#: preceding word, e.g. the IfcCostItem in "an IfcCostItem's relations".
IFC_TOKEN_RE = re.compile(r"(?<![A-Za-z0-9])Ifc[A-Za-z0-9]+")

#: Entity names the tool knows out of the box.  Deliberately small: the point
#: is catching typos in the names a project actually uses, so most projects
#: ship their own vocabulary file.
DEFAULT_IFC_VOCABULARY = frozenset(
    {
        "IfcActor",
        "IfcBuilding",
        "IfcBuildingElement",
        "IfcBuildingStorey",
        "IfcControl",
        "IfcCostItem",
        "IfcCostSchedule",
        "IfcElement",
        "IfcGroup",
        "IfcLaborResource",
        "IfcPerformanceHistory",
        "IfcProcess",
        "IfcProduct",
        "IfcProject",
        "IfcRelAssignsToControl",
        "IfcRelAssignsToProcess",
        "IfcRelNests",
        "IfcRelSequence",
        "IfcResource",
        "IfcSite",
        "IfcSpace",
        "IfcTask",
        "IfcTaskTime",
        "IfcWorkPlan",
        "IfcWorkSchedule",
        "IfcZone",
    }
)


def load_vocabulary(path: Path) -> frozenset[str]:
    """One entity name per line; blank lines and '#' comment lines ignored."""
    tokens = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        entry = line.strip()
        if entry and not entry.startswith("#"):
            tokens.add(entry)
    return frozenset(tokens)


@dataclass(frozen=True)
class Definition:
    name: str
    body_text: str
    span: SourceSpan
    ifc_tokens: tuple[str, ...]


@dataclass(frozen=True)
class ModelDecl:
    name: str
    body_text: str
    span: SourceSpan


@dataclass(frozen=True)
class Marking:
    dimension: str  # "phase" | "level"
    value: Phase | Level
    text: str
    span: SourceSpan
    anchor_id: str
    node_key: tuple[int, int]


@dataclass(frozen=True)
class Reference:
    kind: str  # "ref" | "modelref" | "scenarioref"
    raw_name: str
    target_scenario: str  # scenario identifier or "local"
    target_name: str
    span: SourceSpan


@dataclass
class ScenarioDocument:
    identifier: str
    path: str
    meta: MetaHeader
    meta_line: int
    meta_col: int
    volumetric: Volumetric
    segments: tuple[BodySegment, ...]
    models: dict[str, ModelDecl] = field(default_factory=dict)
    definitions: dict[str, Definition] = field(default_factory=dict)
    markings: list[Marking] = field(default_factory=list)
    references: list[Reference] = field(default_factory=list)


def _dedup(tokens: list[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for token in tokens:
        seen.setdefault(token)
    return tuple(seen)


def _split_reference(kind: str, raw_name: str) -> tuple[str, str]:
    if kind == "scenarioref":
        return raw_name, ""
    if "#" in raw_name:
        scenario, name = raw_name.split("#", 1)
        return scenario, name
    return "local", raw_name


def build_document(
    identifier: str,
    path: str,
    meta: MetaHeader,
    meta_line: int,
    meta_col: int,
    segments: tuple[BodySegment, ...],
) -> tuple[ScenarioDocument, list[Diagnostic]]:
    """Collect symbols, markings and references from the tag forest."""
    doc = ScenarioDocument(
        identifier=identifier,
        path=path,
        meta=meta,
        meta_line=meta_line,
        meta_col=meta_col,
        volumetric=meta.volumetric,
        segments=segments,
    )
    diagnostics: list[Diagnostic] = list(
        validate_volumetric(meta.volumetric, path, meta_line, meta_col)
    )
    pending_markings: list[tuple[str, Phase | Level, TagNode]] = []

    def walk(nodes: list[BodySegment] | tuple[BodySegment, ...]) -> None:
        for node in nodes:
            if isinstance(node, TextSegment):
                continue
            if node.kind in ("phase", "level"):
                try:
                    value = parse_axis_value(node.kind, node.name)
                except UnknownAxisValue as error:
                    assert node.span is not None
                    diagnostics.append(
                        Diagnostic(
                            "E003", str(error), path,
                            node.span.start_line, node.span.start_col,
                        )
                    )
                else:
                    pending_markings.append((node.kind, value, node))
                walk(node.children)
            elif node.kind in ("def", "model"):
                assert node.span is not None
                table = doc.definitions if node.kind == "def" else doc.models
                if node.name in table:
                    diagnostics.append(
                        Diagnostic(
                            "E005",
                            f"duplicate {node.kind} '{node.name}'",
                            path,
                            node.span.start_line,
                            node.span.start_col,
                        )
                    )
                else:
                    body_text = node.inner_text()
                    if node.kind == "def":
                        doc.definitions[node.name] = Definition(
                            name=node.name,
                            body_text=body_text,
                            span=node.span,
                            ifc_tokens=_dedup(IFC_TOKEN_RE.findall(body_text)),
                        )
                    else:
                        doc.models[node.name] = ModelDecl(
                            name=node.name, body_text=body_text, span=node.span
                        )
                walk(node.children)
            else:  # void reference kinds
                assert node.span is not None
                scenario, name = _split_reference(node.kind, node.name)
                doc.references.append(
                    Reference(
                        kind=node.kind,
                        raw_name=node.name,
                        target_scenario=scenario,
                        target_name=name,
                        span=node.span,
                    )
                )

    walk(list(segments))

    occurrences: dict[tuple[str, int], int] = {}
    for dimension, value, node in pending_markings:
        key = (dimension, value.ordinal)
        occurrences[key] = occurrences.get(key, 0) + 1
        assert node.span is not None
        doc.markings.append(
            Marking(
                dimension=dimension,
                value=value,
                text=node.inner_text(),
                span=node.span,
                anchor_id=f"m-{dimension}-{value.ordinal}-{occurrences[key]}",
                node_key=(node.start, node.end),
            )
        )

    return doc, diagnostics


def resolve_local(doc: ScenarioDocument) -> list[Diagnostic]:
    """Check that local ref/modelref targets exist; qualified ones are
    resolved later, against the whole corpus."""
    diagnostics: list[Diagnostic] = []
    for reference in doc.references:
        if reference.kind == "scenarioref" or reference.target_scenario != "local":
            continue
        table = doc.definitions if reference.kind == "ref" else doc.models
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


def lint_ifc(doc: ScenarioDocument, vocabulary: frozenset[str]) -> list[Diagnostic]:
    diagnostics: list[Diagnostic] = []
    for definition in doc.definitions.values():
        for token in definition.ifc_tokens:
            if token not in vocabulary:
                diagnostics.append(
                    Diagnostic(
                        "W101",
                        f"unknown IFC token '{token}' in definition "
                        f"'{definition.name}'",
                        doc.path,
                        definition.span.start_line,
                        definition.span.start_col,
                    )
                )
    return diagnostics


def strip_tags(doc: ScenarioDocument) -> str:
    """The body with every known tag removed and its inner text kept."""
    return "".join(
        seg.raw if isinstance(seg, TextSegment) else seg.inner_text()
        for seg in doc.segments
    )


_HEADING_MARKER_RE = re.compile(r"^\s*#{1,6}(?:\s+|$)")
_BULLET_MARKER_RE = re.compile(r"^\s*(?:[-*]|\d+\.)\s+")


def word_count(doc: ScenarioDocument) -> int:
    """Whitespace-separated tokens of the stripped body.

    Heading markers, list bullets and fence delimiter lines do not count;
    fenced contents do.  The marker rules apply uniformly to every line.
    """
    total = 0
    for line in strip_tags(doc).split("\n"):
        if line.lstrip().startswith("```"):
            continue
        stripped = _HEADING_MARKER_RE.sub("", line, count=1)
        if stripped == line:
            stripped = _BULLET_MARKER_RE.sub("", line, count=1)
        total += len(stripped.split())
    return total
