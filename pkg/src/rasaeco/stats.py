"""Corpus metrics: per-scenario counts and corpus-wide aggregates as JSON."""

from __future__ import annotations

import json
from dataclasses import dataclass

from rasaeco.document import DEFAULT_IFC_VOCABULARY, word_count
from rasaeco.ontology import Corpus, OntologyGraph, degree_stats

#: Word buckets; 500 belongs to the middle bucket, 1000 does too.
BUCKET_UNDER_500 = "under_500"
BUCKET_500_TO_1000 = "500_to_1000"
BUCKET_OVER_1000 = "over_1000"


def word_bucket(words: int) -> str:
    if words < 500:
        return BUCKET_UNDER_500
    if words <= 1000:
        return BUCKET_500_TO_1000
    return BUCKET_OVER_1000


@dataclass(frozen=True)
class ScenarioStats:
    identifier: str
    word_count: int
    phase_markings: int
    level_markings: int
    definitions: int
    ifc_matched: int
    in_degree: int
    out_degree: int


@dataclass(frozen=True)
class CorpusStats:
    scenarios: tuple[ScenarioStats, ...]
    word_buckets: dict[str, int]
    phase_marking_histogram: dict[int, int]
    level_marking_histogram: dict[int, int]
    in_degree_histogram: dict[int, int]
    out_degree_histogram: dict[int, int]
    definitions: int
    ifc_matched: int
    ifc_match_ratio: float


def corpus_stats(
    corpus: Corpus,
    graph: OntologyGraph,
    vocabulary: frozenset[str] = DEFAULT_IFC_VOCABULARY,
) -> CorpusStats:
    degrees = degree_stats(graph)
    per_scenario: list[ScenarioStats] = []
    for doc in corpus.ordered():
        matched = sum(
            1
            for definition in doc.definitions.values()
            if any(token in vocabulary for token in definition.ifc_tokens)
        )
        per_scenario.append(
            ScenarioStats(
                identifier=doc.identifier,
                word_count=word_count(doc),
                phase_markings=sum(
                    1 for m in doc.markings if m.dimension == "phase"
                ),
                level_markings=sum(
                    1 for m in doc.markings if m.dimension == "level"
                ),
                definitions=len(doc.definitions),
                ifc_matched=matched,
                in_degree=degrees.in_degree.get(doc.identifier, 0),
                out_degree=degrees.out_degree.get(doc.identifier, 0),
            )
        )

    buckets = {BUCKET_UNDER_500: 0, BUCKET_500_TO_1000: 0, BUCKET_OVER_1000: 0}
    histograms: dict[str, dict[int, int]] = {
        "phase": {}, "level": {}, "in": {}, "out": {},
    }
    for entry in per_scenario:
        buckets[word_bucket(entry.word_count)] += 1
        for key, value in (
            ("phase", entry.phase_markings),
            ("level", entry.level_markings),
            ("in", entry.in_degree),
            ("out", entry.out_degree),
        ):
            histograms[key][value] = histograms[key].get(value, 0) + 1

    total_definitions = sum(entry.definitions for entry in per_scenario)
    total_matched = sum(entry.ifc_matched for entry in per_scenario)
    ratio = total_matched / total_definitions if total_definitions else 0.0

    def ordered(histogram: dict[int, int]) -> dict[int, int]:
        return {key: histogram[key] for key in sorted(histogram)}

    return CorpusStats(
        scenarios=tuple(per_scenario),
        word_buckets=buckets,
        phase_marking_histogram=ordered(histograms["phase"]),
        level_marking_histogram=ordered(histograms["level"]),
        in_degree_histogram=ordered(histograms["in"]),
        out_degree_histogram=ordered(histograms["out"]),
        definitions=total_definitions,
        ifc_matched=total_matched,
        ifc_match_ratio=ratio,
    )


def emit_stats_json(stats: CorpusStats) -> str:
    """Stable JSON: scenarios sorted by identifier, fixed key order."""
    payload = {
        "scenarios": [
            {
                "identifier": entry.identifier,
                "word_count": entry.word_count,
                "phase_markings": entry.phase_markings,
                "level_markings": entry.level_markings,
                "definitions": entry.definitions,
                "ifc_matched": entry.ifc_matched,
                "in_degree": entry.in_degree,
                "out_degree": entry.out_degree,
            }
            for entry in stats.scenarios
        ],
        "totals": {
            "scenario_count": len(stats.scenarios),
            "word_buckets": stats.word_buckets,
            "phase_marking_histogram": {
                str(k): v for k, v in stats.phase_marking_histogram.items()
            },
            "level_marking_histogram": {
                str(k): v for k, v in stats.level_marking_histogram.items()
            },
            "in_degree_histogram": {
                str(k): v for k, v in stats.in_degree_histogram.items()
            },
            "out_degree_histogram": {
                str(k): v for k, v in stats.out_degree_histogram.items()
            },
            "definitions": stats.definitions,
            "ifc_matched": stats.ifc_matched,
            "ifc_match_ratio": stats.ifc_match_ratio,
        },
    }
    return json.dumps(payload, indent=2) + "\n"
