"""The analysis pipeline shared by the check/render/stats subcommands.

Per-file work may run on a small thread pool; results are merged in
identifier order, so output never depends on scheduling.  Setting
``RASAECO_NO_PARALLEL=1`` forces single-worker execution.
"""

from __future__ import annotations

import os
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence, TypeVar

from rasaeco.diagnostics import Diagnostic, Report
from rasaeco.document import (
    DEFAULT_IFC_VOCABULARY,
    ScenarioDocument,
    build_document,
    lint_ifc,
    resolve_local,
)
from rasaeco.markup import parse_scenario_source
from rasaeco.ontology import (
    DEFAULT_NATURE_VOCABULARY,
    Corpus,
    OntologyGraph,
    build_graph,
    discover,
    resolve_cross,
)
from rasaeco.render_html import render_corpus_index, render_page
from rasaeco.visual import layout_graph, render_graph_svg, render_volumetric_svg

T = TypeVar("T")
U = TypeVar("U")


def _worker_count(jobs: int) -> int:
    if os.environ.get("RASAECO_NO_PARALLEL"):
        return 1
    return max(1, min(8, jobs, os.cpu_count() or 1))


def _parallel_map(fn: Callable[[T], U], items: Sequence[T]) -> list[U]:
    workers = _worker_count(len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class AnalysisResult:
    corpus: Corpus
    graph: OntologyGraph
    report: Report


def _load_one(
    entry: tuple[str, Path], vocabulary: frozenset[str]
) -> tuple[ScenarioDocument | None, list[Diagnostic]]:
    identifier, path = entry
    path_text = str(path)
    try:
        source = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as error:
        return None, [
            Diagnostic("E002", f"file is not valid UTF-8: {error.reason}", path_text)
        ]
    parsed = parse_scenario_source(source, path_text)
    diagnostics = list(parsed.diagnostics)
    if parsed.meta is None:
        return None, diagnostics
    doc, build_diags = build_document(
        identifier,
        path_text,
        parsed.meta,
        parsed.meta_line,
        parsed.meta_col,
        parsed.segments,
    )
    diagnostics.extend(build_diags)
    diagnostics.extend(resolve_local(doc))
    diagnostics.extend(lint_ifc(doc, vocabulary))
    return doc, diagnostics


def analyze(
    scenarios_dir: Path,
    ifc_vocabulary: frozenset[str] = DEFAULT_IFC_VOCABULARY,
    nature_vocabulary: tuple[str, ...] = DEFAULT_NATURE_VOCABULARY,
) -> AnalysisResult:
    """Discover, parse, build, resolve and lint the whole corpus."""
    entries, diagnostics = discover(scenarios_dir)
    loaded = _parallel_map(lambda entry: _load_one(entry, ifc_vocabulary), entries)

    corpus = Corpus()
    for (identifier, _), (doc, doc_diags) in zip(entries, loaded):
        diagnostics.extend(doc_diags)
        if doc is not None:
            corpus.documents[identifier] = doc

    graph, graph_diags = build_graph(corpus, nature_vocabulary)
    diagnostics.extend(graph_diags)
    diagnostics.extend(resolve_cross(corpus))
    return AnalysisResult(
        corpus=corpus, graph=graph, report=Report.from_iterable(diagnostics)
    )


def render_tree(result: AnalysisResult, out_dir: Path) -> None:
    """Write the full output tree atomically.

    Everything is staged into a temporary sibling directory and moved over
    the target in one final step, so an interrupted run never leaves a
    partial tree behind.
    """
    out_dir = out_dir.absolute()
    out_dir.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(
        tempfile.mkdtemp(prefix=f".{out_dir.name}.staging-", dir=out_dir.parent)
    )
    try:
        layout = layout_graph(result.graph)
        titles = {
            identifier: doc.meta.title
            for identifier, doc in result.corpus.documents.items()
        }
        (staging / "ontology.svg").write_text(
            render_graph_svg(layout, result.graph, titles), encoding="utf-8"
        )

        def render_one(doc: ScenarioDocument) -> None:
            page = render_page(doc, result.corpus)
            target = staging / page.relpath
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(page.html, encoding="utf-8")
            (target.parent / "volumetric.svg").write_text(
                render_volumetric_svg(doc.volumetric, thumbnail=True),
                encoding="utf-8",
            )

        _parallel_map(render_one, result.corpus.ordered())

        index = render_corpus_index(result.corpus, result.graph)
        (staging / index.relpath).write_text(index.html, encoding="utf-8")

        if out_dir.exists():
            shutil.rmtree(out_dir)
        os.replace(staging, out_dir)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
