#!/usr/bin/env python3
"""Independent recount oracle for the bundled fixture corpus.

Deliberately implemented as a plain regex/text pipeline with no imports from
the rasaeco package, so it can cross-check the `stats` subcommand.  Assumes a
clean corpus (every relation target exists).  Prints one JSON object per run:

    {"scenarios": [{"identifier": ..., "word_count": ..., ...}, ...]}

Usage: recount.py <scenarios-dir>
"""

import json
import re
import sys
from pathlib import Path

META_RE = re.compile(r"<rasaeco-meta>(.*?)</rasaeco-meta>", re.DOTALL)
DEF_RE = re.compile(r'<def name="[^"]*">(.*?)</def>', re.DOTALL)
OPEN_TAG_RE = re.compile(r'<(?:phase|level|model|def) name="[^"]*">')
CLOSE_TAG_RE = re.compile(r"</(?:phase|level|model|def)>")
VOID_TAG_RE = re.compile(r'<(?:ref|modelref|scenarioref) name="[^"]*"\s*/>')
IFC_RE = re.compile(r"(?<![A-Za-z0-9])Ifc[A-Za-z0-9]+")
HEADING_RE = re.compile(r"^\s*#{1,6}(?:\s+|$)")
BULLET_RE = re.compile(r"^\s*(?:[-*]|\d+\.)\s+")

KNOWN_IFC = {
    "IfcZone",
    "IfcTask",
    "IfcActor",
    "IfcCostItem",
    "IfcRelAssignsToControl",
    "IfcPerformanceHistory",
}


def count_words(body):
    total = 0
    for line in body.split("\n"):
        if line.lstrip().startswith("```"):
            continue
        without_marker = HEADING_RE.sub("", line, count=1)
        if without_marker == line:
            without_marker = BULLET_RE.sub("", line, count=1)
        total += len(without_marker.split())
    return total


def recount(scenarios_dir):
    scenarios = {}
    relations = {}
    for path in sorted(Path(scenarios_dir).rglob("scenario.md")):
        identifier = path.parent.name
        text = path.read_text(encoding="utf-8").replace("\r\n", "\n")
        meta = json.loads(META_RE.search(text).group(1))
        body = text[META_RE.search(text).end():]

        stripped = VOID_TAG_RE.sub("", body)
        stripped = OPEN_TAG_RE.sub("", stripped)
        stripped = CLOSE_TAG_RE.sub("", stripped)

        def_bodies = DEF_RE.findall(body)
        ifc_matched = sum(
            1
            for def_body in def_bodies
            if any(token in KNOWN_IFC for token in IFC_RE.findall(def_body))
        )

        relations[identifier] = [rel["target"] for rel in meta.get("relations", [])]
        scenarios[identifier] = {
            "identifier": identifier,
            "word_count": count_words(stripped),
            "phase_markings": len(re.findall(r'<phase name="', body)),
            "level_markings": len(re.findall(r'<level name="', body)),
            "definitions": len(def_bodies),
            "ifc_matched": ifc_matched,
        }

    for identifier, entry in scenarios.items():
        entry["in_degree"] = sum(
            targets.count(identifier) for targets in relations.values()
        )
        entry["out_degree"] = len(relations[identifier])

    return {"scenarios": [scenarios[key] for key in sorted(scenarios)]}


def main(argv):
    if len(argv) != 2:
        print(__doc__, file=sys.stderr)
        return 2
    print(json.dumps(recount(argv[1]), indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
