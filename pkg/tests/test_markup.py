from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rasaeco.markup import (
    LineIndex,
    MetaExtract,
    TagNode,
    TextSegment,
    extract_meta,
    normalize_newlines,
    parse_meta,
    parse_scenario_source,
    parse_tags,
    segments_source,
    tokenize_body,
)

PATH = "scenarios/x/scenario.md"


def parse_all(source: str):
    return parse_scenario_source(source, PATH)


def tokenize(body: str, base: int = 0):
    index = LineIndex(body)
    return tokenize_body(body, PATH, base, index)


# --- extract_meta -----------------------------------------------------------


def test_extract_happy_path():
    source = '<rasaeco-meta>{"title": "T"}</rasaeco-meta>\n# Summary\n'
    index = LineIndex(source)
    extract, diags = extract_meta(source, PATH, index)
    assert diags == []
    assert extract is not None
    assert extract.raw == '{"title": "T"}'
    assert extract.body == "\n# Summary\n"


def test_extract_meta_must_be_first():
    source = 'body text\n<rasaeco-meta>{"title": "T"}</rasaeco-meta>'
    extract, diags = extract_meta(source, PATH, LineIndex(source))
    assert extract is None
    assert [d.code for d in diags] == ["E002"]
    assert (diags[0].line, diags[0].col) == (1, 1)


def test_extract_meta_missing_header():
    source = "# Summary\nNo header at all.\n"
    extract, diags = extract_meta(source, PATH, LineIndex(source))
    assert extract is None
    assert [d.code for d in diags] == ["E001"]


def test_extract_meta_missing_close():
    source = '<rasaeco-meta>{"title": "T"}'
    extract, diags = extract_meta(source, PATH, LineIndex(source))
    assert extract is None
    assert [d.code for d in diags] == ["E002"]


def test_leading_whitespace_before_header_is_fine():
    source = '\n\n<rasaeco-meta>{"title": "T"}</rasaeco-meta>rest'
    extract, diags = extract_meta(source, PATH, LineIndex(source))
    assert diags == []
    assert extract is not None and extract.body == "rest"


# --- parse_meta -------------------------------------------------------------


def meta_from(raw: str):
    source = f"<rasaeco-meta>{raw}</rasaeco-meta>"
    index = LineIndex(source)
    extract = MetaExtract(
        open_offset=0, raw=raw, raw_offset=14, body="", body_offset=len(source)
    )
    return parse_meta(extract, PATH, index)


def test_parse_meta_full_header():
    raw = json.dumps(
        {
            "title": "Truck Guidance",
            "relations": [{"target": "scheduling", "nature": "uses"}],
            "volumetric": [
                {
                    "aspect_from": "as-planned",
                    "aspect_to": "divergence",
                    "phase_from": "construction",
                    "phase_to": "construction",
                    "level_from": "machine/crew",
                    "level_to": "site",
                }
            ],
        }
    )
    meta, diags = meta_from(raw)
    assert diags == []
    assert meta is not None
    assert meta.title == "Truck Guidance"
    assert len(meta.relations) == 1
    assert meta.relations[0].target == "scheduling"
    assert len(meta.volumetric.cuboids) == 1
    cuboid = meta.volumetric.cuboids[0]
    assert cuboid.aspect_to.token == "divergence"
    assert cuboid.level_from.token == "machine/crew"


def test_parse_meta_empty_title():
    meta, diags = meta_from('{"title": ""}')
    assert meta is None
    assert [d.code for d in diags] == ["E002"]


def test_parse_meta_unknown_axis_token():
    raw = json.dumps(
        {
            "title": "X",
            "volumetric": [
                {
                    "aspect_from": "as-planned",
                    "aspect_to": "as-planned",
                    "phase_from": "konstruction",
                    "phase_to": "construction",
                    "level_from": "site",
                    "level_to": "site",
                }
            ],
        }
    )
    meta, diags = meta_from(raw)
    assert [d.code for d in diags] == ["E003"]
    assert "konstruction" in diags[0].message
    assert meta is not None and meta.volumetric.cuboids == ()


def test_parse_meta_json_error_position():
    source = '<rasaeco-meta>{"title": }</rasaeco-meta>'
    parsed = parse_all(source)
    assert [d.code for d in parsed.diagnostics] == ["E002"]
    diag = parsed.diagnostics[0]
    # Column 25: offset of the '}' within line 1 (header opens at column 1).
    assert (diag.line, diag.col) == (1, 25)


def test_parse_meta_relation_without_nature():
    meta, diags = meta_from('{"title": "X", "relations": [{"target": "y"}]}')
    assert [d.code for d in diags] == ["E002"]
    assert meta is not None and meta.relations == ()


# --- tokenize_body ----------------------------------------------------------


def test_tokenize_open_text_close():
    body = 'The driver arrives. <phase name="construction">Deliveries.</phase>'
    tokens, diags = tokenize(body)
    assert diags == []
    assert [t.form for t in tokens] == ["text", "open", "text", "close"]
    assert tokens[1].kind == "phase"
    assert tokens[1].name == "construction"


def test_tokenize_void():
    tokens, diags = tokenize('<ref name="cost"/> overruns')
    assert diags == []
    assert [t.form for t in tokens] == ["void", "text"]


def test_tokenize_missing_name_is_e009_and_text():
    tokens, diags = tokenize("<phase>unnamed</phase>")
    assert [d.code for d in diags] == ["E009"]
    assert [t.form for t in tokens] == ["text", "text", "close"]
    assert tokens[0].raw == "<phase>"


def test_tokenize_decodes_attribute_entities():
    tokens, _ = tokenize('<ref name="a&amp;b&lt;c&quot;d"/>')
    assert tokens[0].name == 'a&b<c"d'


def test_tokenize_spans_are_one_based_and_absolute():
    source = '<rasaeco-meta>{"title": "T"}</rasaeco-meta>\nx\n<ref name="c"/>'
    parsed = parse_all(source)
    ref = parsed.segments[-1]
    assert isinstance(ref, TagNode)
    assert (ref.span.start_line, ref.span.start_col) == (3, 1)


def test_crlf_normalization_keeps_spans_stable():
    lf = '<rasaeco-meta>{"title": "T"}</rasaeco-meta>\nx\n<ref name="c"/>'
    crlf = lf.replace("\n", "\r\n")
    assert normalize_newlines(crlf) == lf
    span_lf = parse_all(lf).segments[-1].span
    span_crlf = parse_all(crlf).segments[-1].span
    assert span_lf == span_crlf


# --- parse_tags -------------------------------------------------------------


def test_nested_containers():
    body = '<phase name="planning">a <level name="site">b</level> c</phase>'
    tokens, _ = tokenize(body)
    segments, diags = parse_tags(tokens, PATH, LineIndex(body))
    assert diags == []
    assert len(segments) == 1
    phase = segments[0]
    assert isinstance(phase, TagNode) and phase.kind == "phase"
    kinds = [c.kind for c in phase.children if isinstance(c, TagNode)]
    assert kinds == ["level"]


def test_mismatched_close_is_e009():
    body = '<phase name="planning">a</level>'
    tokens, _ = tokenize(body)
    _, diags = parse_tags(tokens, PATH, LineIndex(body))
    assert "E009" in [d.code for d in diags]


def test_unclosed_container_is_e009():
    body = '<phase name="planning">hanging'
    tokens, _ = tokenize(body)
    segments, diags = parse_tags(tokens, PATH, LineIndex(body))
    assert [d.code for d in diags] == ["E009"]
    assert isinstance(segments[0], TagNode)


def test_def_inside_def_is_e009():
    body = '<def name="cost">a <def name="expenditure">b</def> c</def>'
    tokens, _ = tokenize(body)
    _, diags = parse_tags(tokens, PATH, LineIndex(body))
    assert [d.code for d in diags] == ["E009"]


def test_def_inside_model_is_allowed():
    body = '<model name="m"><def name="d">x</def></model>'
    tokens, _ = tokenize(body)
    _, diags = parse_tags(tokens, PATH, LineIndex(body))
    assert diags == []


def test_unknown_tags_pass_through_verbatim():
    body = "a <b>bold</b> c"
    tokens, diags = tokenize(body)
    assert diags == []
    assert len(tokens) == 1 and tokens[0].form == "text"
    assert tokens[0].raw == body


# --- round-trip properties --------------------------------------------------


def assert_roundtrip(body: str) -> None:
    tokens, _ = tokenize(body)
    assert "".join(t.raw for t in tokens) == body
    segments, _ = parse_tags(tokens, PATH, LineIndex(body))
    assert segments_source(list(segments)) == body


@settings(max_examples=300, deadline=None)
@given(st.text(max_size=120))
def test_tokenizer_total_and_lossless(body):
    tokens, _ = tokenize(body)
    assert "".join(t.raw for t in tokens) == body
    offsets = [(t.start, t.end) for t in tokens]
    cursor = 0
    for start, end in offsets:
        assert start == cursor and end > start
        cursor = end
    assert cursor == len(body)


FUZZ_ATOMS = [
    "word ",
    "two words\n",
    "# Heading\n",
    "- bullet item\n",
    "*emphasis* and **strong** ",
    "`code span` ",
    "[link](http://example.com) ",
    "&amp; &lt; ",
    "< lone bracket ",
    "<b>html</b> ",
    "```\nraw < block\n```\n",
    '<phase name="planning">',
    "</phase>",
    '<level name="machine/crew">',
    "</level>",
    '<def name="cost">',
    "</def>",
    '<model name="m">',
    "</model>",
    '<ref name="cost"/>',
    '<modelref name="m"/>',
    '<scenarioref name="other"/>',
    '<ref name="x#y"/>',
    "<phase>",
    '<def name="">',
    "</nothing>",
    "ümläut téxt ",
    "\n\n",
]


def build_fuzz_body(rng: random.Random) -> str:
    return "".join(rng.choice(FUZZ_ATOMS) for _ in range(rng.randrange(0, 30)))


def test_fuzzed_bodies_roundtrip():
    rng = random.Random(20240817)
    for _ in range(500):
        assert_roundtrip(build_fuzz_body(rng))


from conftest import FIXTURE_SCENARIOS


@pytest.mark.parametrize(
    "identifier", sorted(p.name for p in FIXTURE_SCENARIOS.iterdir())
)
def test_fixture_bodies_roundtrip(identifier):
    source = (FIXTURE_SCENARIOS / identifier / "scenario.md").read_text(
        encoding="utf-8"
    )
    parsed = parse_all(source)
    close = source.index("</rasaeco-meta>") + len("</rasaeco-meta>")
    assert segments_source(list(parsed.segments)) == source[close:]
