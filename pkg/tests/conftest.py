from __future__ import annotations

import subprocess
import sys
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_SCENARIOS = REPO_ROOT / "fixtures" / "scenarios"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

MINIMAL_META = (
    "<rasaeco-meta>\n"
    '{"title": "Minimal", "volumetric": [\n'
    '{"aspect_from": "as-planned", "aspect_to": "as-planned",\n'
    '"phase_from": "planning", "phase_to": "planning",\n'
    '"level_from": "site", "level_to": "site"}\n'
    "]}\n"
    "</rasaeco-meta>\n"
)


def run_cli(
    args: list[str], env: dict[str, str] | None = None, cwd: Path | None = None
) -> subprocess.CompletedProcess:
    import os

    merged = dict(os.environ)
    if env:
        merged.update(env)
    return subprocess.run(
        [sys.executable, "-m", "rasaeco.cli", *args],
        capture_output=True,
        text=True,
        env=merged,
        cwd=cwd or REPO_ROOT,
    )


def write_scenario(base: Path, identifier: str, content: str) -> Path:
    directory = base / identifier
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / "scenario.md"
    path.write_text(content, encoding="utf-8")
    return path


@pytest.fixture()
def fixture_corpus() -> Path:
    return FIXTURE_SCENARIOS


@pytest.fixture()
def analyzed_fixture():
    from rasaeco.pipeline import analyze

    return analyze(FIXTURE_SCENARIOS)
