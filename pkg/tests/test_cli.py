from __future__ import annotations

import json
from pathlib import Path

from conftest import FIXTURE_SCENARIOS, MINIMAL_META, run_cli, write_scenario


def test_check_fixture_corpus(fixture_corpus):
    result = run_cli(["check", "--scenarios-dir", str(fixture_corpus)])
    assert result.returncode == 0
    assert result.stdout.rstrip().endswith("0 error(s), 1 warning(s)")
    assert "W101" in result.stdout


def test_check_strict_turns_warnings_into_failure(fixture_corpus):
    result = run_cli(["check", "--scenarios-dir", str(fixture_corpus), "--strict"])
    assert result.returncode == 1


def test_check_reports_unresolved_ref(tmp_path: Path):
    write_scenario(tmp_path, "one", MINIMAL_META + '\n<ref name="ghost"/>\n')
    result = run_cli(["check", "--scenarios-dir", str(tmp_path)])
    assert result.returncode == 2
    lines = result.stdout.strip().splitlines()
    assert len(lines) == 2
    assert "E006" in lines[0] and "ghost" in lines[0]


def test_check_json_format(tmp_path: Path):
    write_scenario(tmp_path, "one", MINIMAL_META + '\n<ref name="ghost"/>\n')
    result = run_cli(["check", "--scenarios-dir", str(tmp_path), "--format", "json"])
    payload = json.loads(result.stdout)
    assert payload["errors"] == 1
    assert payload["diagnostics"][0]["code"] == "E006"


def test_usage_errors_exit_64():
    assert run_cli(["frobnicate"]).returncode == 64
    assert run_cli(["check"]).returncode == 64
    assert run_cli(["check", "--scenarios-dir", "x", "--format", "yaml"]).returncode == 64


def test_missing_scenarios_dir_exits_66(tmp_path: Path):
    result = run_cli(["check", "--scenarios-dir", str(tmp_path / "nope")])
    assert result.returncode == 66
    assert "not found" in result.stderr


def test_render_refuses_output_on_errors(tmp_path: Path):
    write_scenario(tmp_path / "src", "one", MINIMAL_META + '\n<ref name="ghost"/>\n')
    out = tmp_path / "out"
    result = run_cli(
        ["render", "--scenarios-dir", str(tmp_path / "src"), "--out", str(out)]
    )
    assert result.returncode == 2
    assert not out.exists()


def test_render_writes_expected_tree(fixture_corpus, tmp_path: Path):
    out = tmp_path / "out"
    result = run_cli(
        ["render", "--scenarios-dir", str(fixture_corpus), "--out", str(out)]
    )
    assert result.returncode == 0
    expected = {"index.html", "ontology.svg"}
    for identifier in (
        "cost_tracking",
        "crane_guidance",
        "logistics",
        "risk_management",
        "risk_planning",
        "risk_tracking",
        "truck_guidance",
    ):
        expected.add(f"{identifier}/scenario.html")
        expected.add(f"{identifier}/volumetric.svg")
    actual = {
        str(p.relative_to(out)) for p in out.rglob("*") if p.is_file()
    }
    assert actual == expected


def test_check_and_render_report_identically(fixture_corpus, tmp_path: Path):
    check = run_cli(["check", "--scenarios-dir", str(fixture_corpus)])
    render = run_cli(
        [
            "render",
            "--scenarios-dir",
            str(fixture_corpus),
            "--out",
            str(tmp_path / "out"),
        ]
    )
    assert check.stdout == render.stdout


def test_stats_subcommand_outputs_json(fixture_corpus):
    result = run_cli(["stats", "--scenarios-dir", str(fixture_corpus)])
    assert result.returncode == 0
    payload = json.loads(result.stdout)
    assert payload["totals"]["scenario_count"] == 7


def test_config_file_natures(tmp_path: Path):
    meta = MINIMAL_META.replace(
        '"volumetric"',
        '"relations": [{"target": "two", "nature": "refines"}], "volumetric"',
    )
    write_scenario(tmp_path, "one", meta)
    write_scenario(tmp_path, "two", MINIMAL_META)
    (tmp_path / "rasaeco.config.json").write_text(
        '{"nature_vocabulary": ["uses"]}', encoding="utf-8"
    )
    result = run_cli(["check", "--scenarios-dir", str(tmp_path)])
    assert "W102" in result.stdout

    # The command-line flag overrides the file value.
    result = run_cli(
        [
            "check",
            "--scenarios-dir",
            str(tmp_path),
            "--nature-vocabulary",
            "refines,uses",
        ]
    )
    assert "W102" not in result.stdout
    assert result.returncode == 0


def test_malformed_config_exits_78(tmp_path: Path):
    write_scenario(tmp_path, "one", MINIMAL_META)
    (tmp_path / "rasaeco.config.json").write_text("{not json", encoding="utf-8")
    result = run_cli(["check", "--scenarios-dir", str(tmp_path)])
    assert result.returncode == 78
    assert "malformed config" in result.stderr


def test_custom_ifc_vocabulary_silences_w101(tmp_path: Path):
    vocab = tmp_path / "vocab.txt"
    vocab.write_text(
        "# project vocabulary\n"
        "IfcZone\nIfcTask\nIfcActor\nIfcCostItem\nIfcRelAssignsToControl\n"
        "IfcPerfromanceHistory\n",
        encoding="utf-8",
    )
    result = run_cli(
        [
            "check",
            "--scenarios-dir",
            str(FIXTURE_SCENARIOS),
            "--ifc-vocabulary-path",
            str(vocab),
        ]
    )
    assert result.returncode == 0
    assert result.stdout.strip() == "0 error(s), 0 warning(s)"


def test_render_is_idempotent_over_existing_output(fixture_corpus, tmp_path: Path):
    out = tmp_path / "out"
    first = run_cli(
        ["render", "--scenarios-dir", str(fixture_corpus), "--out", str(out)]
    )
    marker = out / "stale.txt"
    marker.write_text("stale", encoding="utf-8")
    second = run_cli(
        ["render", "--scenarios-dir", str(fixture_corpus), "--out", str(out)]
    )
    assert first.returncode == second.returncode == 0
    assert not marker.exists()  # the tree is replaced wholesale
