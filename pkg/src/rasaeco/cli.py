"""Command-line entry point: the render, check and stats subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from rasaeco import diagnostics
from rasaeco.document import DEFAULT_IFC_VOCABULARY, load_vocabulary
from rasaeco.ontology import DEFAULT_NATURE_VOCABULARY
from rasaeco.pipeline import analyze, render_tree
from rasaeco.stats import corpus_stats, emit_stats_json

EXIT_USAGE = 64
EXIT_NO_INPUT = 66
EXIT_CONFIG = 78

CONFIG_FILE_NAME = "rasaeco.config.json"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> "argparse.NoReturn":  # type: ignore[name-defined]
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    scenarios_dir: Path
    out_dir: Path | None
    ifc_vocabulary: frozenset[str]
    nature_vocabulary: tuple[str, ...]
    strict: bool
    format: str


def load_config(args: argparse.Namespace) -> Config:
    """Merge defaults, the optional config file and command-line flags;
    flags win over file values."""
    scenarios_dir = Path(args.scenarios_dir)
    ifc_path: Path | None = None
    natures = DEFAULT_NATURE_VOCABULARY

    config_file = scenarios_dir / CONFIG_FILE_NAME
    if config_file.is_file():
        try:
            data = json.loads(config_file.read_text(encoding="utf-8"))
        except (json.JSONDecodeError, UnicodeDecodeError) as error:
            raise ConfigError(f"{config_file}: malformed config: {error}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{config_file}: config must be a JSON object")
        raw_path = data.get("ifc_vocabulary_path")
        if raw_path is not None:
            if not isinstance(raw_path, str):
                raise ConfigError(
                    f"{config_file}: 'ifc_vocabulary_path' must be a string"
                )
            ifc_path = scenarios_dir / raw_path
        raw_natures = data.get("nature_vocabulary")
        if raw_natures is not None:
            if not isinstance(raw_natures, list) or not all(
                isinstance(item, str) for item in raw_natures
            ):
                raise ConfigError(
                    f"{config_file}: 'nature_vocabulary' must be an array of strings"
                )
            natures = tuple(raw_natures)

    if args.ifc_vocabulary_path:
        ifc_path = Path(args.ifc_vocabulary_path)
    if args.nature_vocabulary:
        natures = tuple(
            entry.strip() for entry in args.nature_vocabulary.split(",") if entry.strip()
        )

    if ifc_path is not None:
        try:
            vocabulary = load_vocabulary(ifc_path)
        except OSError as error:
            raise ConfigError(f"cannot read IFC vocabulary: {error}") from None
    else:
        vocabulary = DEFAULT_IFC_VOCABULARY

    return Config(
        scenarios_dir=scenarios_dir,
        out_dir=Path(args.out) if getattr(args, "out", None) else None,
        ifc_vocabulary=vocabulary,
        nature_vocabulary=natures,
        strict=getattr(args, "strict", False),
        format=getattr(args, "format", "text"),
    )


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--scenarios-dir", required=True, help="directory tree holding the scenarios"
    )
    parser.add_argument(
        "--ifc-vocabulary-path",
        help="IFC entity names, one per line (overrides the config file)",
    )
    parser.add_argument(
        "--nature-vocabulary",
        help="comma-separated relation natures (overrides the config file)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="rasaeco", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    render = commands.add_parser("render", help="render the corpus to HTML/SVG")
    _add_common_flags(render)
    render.add_argument("--out", required=True, help="output directory")
    render.add_argument("--strict", action="store_true", help="warnings fail the run")

    check = commands.add_parser("check", help="lint the corpus")
    _add_common_flags(check)
    check.add_argument("--format", choices=["text", "json"], default="text")
    check.add_argument("--strict", action="store_true", help="warnings fail the run")

    stats = commands.add_parser("stats", help="print corpus statistics")
    _add_common_flags(stats)
    stats.add_argument("--format", choices=["json"], default="json")

    return parser


def _print_report(report: diagnostics.Report, fmt: str) -> None:
    if fmt == "json":
        print(diagnostics.format_json(report))
    else:
        for line in diagnostics.format_text(report):
            print(line)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
    except ConfigError as error:
        print(f"rasaeco: {error}", file=sys.stderr)
        return EXIT_CONFIG

    if not config.scenarios_dir.is_dir():
        print(
            f"rasaeco: scenarios directory not found: {config.scenarios_dir}",
            file=sys.stderr,
        )
        return EXIT_NO_INPUT

    result = analyze(
        config.scenarios_dir,
        ifc_vocabulary=config.ifc_vocabulary,
        nature_vocabulary=config.nature_vocabulary,
    )
    code = diagnostics.exit_code(result.report, strict=config.strict)

    if args.command == "check":
        _print_report(result.report, config.format)
        return code

    if args.command == "stats":
        print(emit_stats_json(corpus_stats(
            result.corpus, result.graph, config.ifc_vocabulary
        )), end="")
        return code

    # render: refuse to touch the output tree when any error exists.
    _print_report(result.report, "text")
    if result.report.errors:
        return 2
    assert config.out_dir is not None
    render_tree(result, config.out_dir)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
