"""Parsing of scenario sources: meta header, body tokens and the tag forest.

A scenario file is a ``<rasaeco-meta>`` JSON header followed by a markdown
body.  The body carries seven semantic tag kinds; four are containers
(``phase``, ``level``, ``model``, ``def``) and three are void, self-closing
references (``ref``, ``modelref``, ``scenarioref``).  Everything else,
including raw HTML, is inert text.

All positions are 1-based line/column pairs computed on the newline-normalized
source, so diagnostics and spans agree across CRLF and LF inputs.
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field

from rasaeco import scan
from rasaeco.diagnostics import Diagnostic
from rasaeco.space import Cuboid, UnknownAxisValue, Volumetric, parse_axis_value

META_OPEN = "<rasaeco-meta>"
META_CLOSE = "</rasaeco-meta>"

CONTAINER_KINDS = frozenset({"phase", "level", "model", "def"})
VOID_KINDS = frozenset({"ref", "modelref", "scenarioref"})

CUBOID_KEYS = (
    "aspect_from",
    "aspect_to",
    "phase_from",
    "phase_to",
    "level_from",
    "level_to",
)


def normalize_newlines(source: str) -> str:
    return source.replace("\r\n", "\n")


@dataclass(frozen=True)
class SourceSpan:
    path: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int


class LineIndex:
    """Maps character offsets in a normalized text to 1-based line/column."""

    def __init__(self, text: str) -> None:
        starts = [0]
        pos = text.find("\n")
        while pos != -1:
            starts.append(pos + 1)
            pos = text.find("\n", pos + 1)
        self._starts = starts

    def location(self, offset: int) -> tuple[int, int]:
        line = bisect_right(self._starts, offset)
        return line, offset - self._starts[line - 1] + 1

    def span(self, path: str, start: int, end: int) -> SourceSpan:
        start_line, start_col = self.location(start)
        end_line, end_col = self.location(end)
        return SourceSpan(path, start_line, start_col, end_line, end_col)


@dataclass(frozen=True)
class MetaRelation:
    target: str
    nature: str


@dataclass(frozen=True)
class MetaHeader:
    title: str
    contact: str | None
    relations: tuple[MetaRelation, ...]
    volumetric: Volumetric


@dataclass(frozen=True)
class MetaExtract:
    """Raw header content and the body, with their offsets in the source."""

    open_offset: int
    raw: str
    raw_offset: int
    body: str
    body_offset: int


def extract_meta(
    source: str, path: str, index: LineIndex
) -> tuple[MetaExtract | None, list[Diagnostic]]:
    open_at = source.find(META_OPEN)
    if open_at == -1:
        return None, [
            Diagnostic("E001", f"no {META_OPEN} header found", path, 1, 1)
        ]
    head = source[:open_at]
    if head.strip():
        line, col = index.location(len(head) - len(head.lstrip()))
        return None, [
            Diagnostic(
                "E002",
                f"{META_OPEN} must be the first construct in the file",
                path,
                line,
                col,
            )
        ]
    close_at = source.find(META_CLOSE, open_at)
    if close_at == -1:
        line, col = index.location(open_at)
        return None, [
            Diagnostic("E002", f"missing {META_CLOSE} closing tag", path, line, col)
        ]
    raw_offset = open_at + len(META_OPEN)
    body_offset = close_at + len(META_CLOSE)
    return (
        MetaExtract(
            open_offset=open_at,
            raw=source[raw_offset:close_at],
            raw_offset=raw_offset,
            body=source[body_offset:],
            body_offset=body_offset,
        ),
        [],
    )


def _json_error_location(
    error: json.JSONDecodeError, raw_offset: int, index: LineIndex
) -> tuple[int, int]:
    base_line, base_col = index.location(raw_offset)
    if error.lineno == 1:
        return base_line, base_col + error.colno - 1
    return base_line + error.lineno - 1, error.colno


def parse_meta(
    extract: MetaExtract, path: str, index: LineIndex
) -> tuple[MetaHeader | None, list[Diagnostic]]:
    """Parse the header JSON into a MetaHeader, resolving axis tokens.

    Structural problems are E002; unknown axis tokens are E003 (one per
    token) and drop only the cuboid they appear in.
    """
    line, col = index.location(extract.open_offset)
    try:
        data = json.loads(extract.raw)
    except json.JSONDecodeError as error:
        err_line, err_col = _json_error_location(error, extract.raw_offset, index)
        return None, [
            Diagnostic(
                "E002", f"meta header is not valid JSON: {error.msg}", path,
                err_line, err_col,
            )
        ]
    if not isinstance(data, dict):
        return None, [
            Diagnostic("E002", "meta header must be a JSON object", path, line, col)
        ]

    diagnostics: list[Diagnostic] = []

    title = data.get("title")
    if not isinstance(title, str) or not title.strip():
        return None, [
            Diagnostic(
                "E002", "meta header requires a non-empty string 'title'", path,
                line, col,
            )
        ]

    contact = data.get("contact")
    if contact is not None and not isinstance(contact, str):
        diagnostics.append(
            Diagnostic("E002", "'contact' must be a string", path, line, col)
        )
        contact = None

    relations: list[MetaRelation] = []
    raw_relations = data.get("relations", [])
    if not isinstance(raw_relations, list):
        diagnostics.append(
            Diagnostic("E002", "'relations' must be an array", path, line, col)
        )
        raw_relations = []
    for position, entry in enumerate(raw_relations, start=1):
        target = entry.get("target") if isinstance(entry, dict) else None
        nature = entry.get("nature") if isinstance(entry, dict) else None
        if not isinstance(target, str) or not target or not isinstance(nature, str) or not nature:
            diagnostics.append(
                Diagnostic(
                    "E002",
                    f"relation {position} requires non-empty string "
                    "'target' and 'nature'",
                    path,
                    line,
                    col,
                )
            )
            continue
        relations.append(MetaRelation(target=target, nature=nature))

    cuboids: list[Cuboid] = []
    raw_volumetric = data.get("volumetric", [])
    if not isinstance(raw_volumetric, list):
        diagnostics.append(
            Diagnostic("E002", "'volumetric' must be an array", path, line, col)
        )
        raw_volumetric = []
    for position, record in enumerate(raw_volumetric, start=1):
        if not isinstance(record, dict) or not all(
            isinstance(record.get(key), str) for key in CUBOID_KEYS
        ):
            diagnostics.append(
                Diagnostic(
                    "E002",
                    f"volumetric record {position} requires the six string keys "
                    + ", ".join(CUBOID_KEYS),
                    path,
                    line,
                    col,
                )
            )
            continue
        resolved = {}
        complete = True
        for key in CUBOID_KEYS:
            axis = key.split("_", 1)[0]
            try:
                resolved[key] = parse_axis_value(axis, record[key])
            except UnknownAxisValue as error:
                diagnostics.append(
                    Diagnostic("E003", str(error), path, line, col)
                )
                complete = False
        if complete:
            cuboids.append(Cuboid(**resolved))

    header = MetaHeader(
        title=title.strip(),
        contact=contact,
        relations=tuple(relations),
        volumetric=Volumetric(tuple(cuboids)),
    )
    return header, diagnostics


_ENTITY_DECODE = (("&lt;", "<"), ("&gt;", ">"), ("&quot;", '"'), ("&amp;", "&"))


def decode_entities(value: str) -> str:
    for entity, char in _ENTITY_DECODE:
        value = value.replace(entity, char)
    return value


@dataclass(frozen=True)
class RawToken:
    form: str  # "text" | "open" | "close" | "void"
    kind: str | None
    name: str | None
    raw: str
    start: int
    end: int


_FORM_NAMES = {scan.OPEN: "open", scan.CLOSE: "close", scan.VOID: "void"}


def tokenize_body(
    body: str, path: str, base_offset: int, index: LineIndex
) -> tuple[list[RawToken], list[Diagnostic]]:
    """Split the body into text runs and tag tokens.

    Offsets are absolute in the normalized source.  Malformed constructs of a
    known kind are reported as E009 and kept as text so that concatenating the
    raw token sources always reproduces the body byte for byte.
    """
    tokens: list[RawToken] = []
    diagnostics: list[Diagnostic] = []
    cursor = 0

    def push_text(start: int, end: int) -> None:
        if end > start:
            tokens.append(
                RawToken(
                    "text", None, None, body[start:end],
                    base_offset + start, base_offset + end,
                )
            )

    for start, end, form, kind, value in scan.scan_tags(body):
        push_text(cursor, start)
        cursor = end
        if form == scan.MALFORMED:
            line, col = index.location(base_offset + start)
            diagnostics.append(
                Diagnostic(
                    "E009",
                    f"malformed <{kind}> tag: missing or invalid name attribute",
                    path,
                    line,
                    col,
                )
            )
            tokens.append(
                RawToken(
                    "text", None, None, body[start:end],
                    base_offset + start, base_offset + end,
                )
            )
            continue
        name = decode_entities(value) if value is not None else None
        tokens.append(
            RawToken(
                _FORM_NAMES[form], kind, name, body[start:end],
                base_offset + start, base_offset + end,
            )
        )
    push_text(cursor, len(body))
    return tokens, diagnostics


@dataclass(frozen=True)
class TextSegment:
    raw: str
    start: int
    end: int
    span: SourceSpan


@dataclass
class TagNode:
    kind: str
    name: str
    children: list["TagNode | TextSegment"] = field(default_factory=list)
    start: int = 0
    end: int = 0
    span: SourceSpan | None = None
    open_raw: str = ""
    close_raw: str = ""

    def source(self) -> str:
        inner = "".join(
            child.raw if isinstance(child, TextSegment) else child.source()
            for child in self.children
        )
        return self.open_raw + inner + self.close_raw

    def inner_text(self) -> str:
        return "".join(
            child.raw if isinstance(child, TextSegment) else child.inner_text()
            for child in self.children
        )


BodySegment = TagNode | TextSegment


def parse_tags(
    tokens: list[RawToken], path: str, index: LineIndex
) -> tuple[list[BodySegment], list[Diagnostic]]:
    """Build the properly nested tag forest out of the token stream.

    Recovery keeps parsing total: a mismatched close tag degrades to text, an
    unclosed container is closed at the end of the body; both are E009.
    ``def``/``model`` must not nest within their own kind (E009), but the node
    is still built so later stages see a complete tree.
    """
    diagnostics: list[Diagnostic] = []
    root: list[BodySegment] = []
    stack: list[tuple[RawToken, list[BodySegment]]] = []

    def sink() -> list[BodySegment]:
        return stack[-1][1] if stack else root

    def close_node(open_token: RawToken, children: list[BodySegment], close_raw: str, end: int) -> TagNode:
        return TagNode(
            kind=open_token.kind or "",
            name=open_token.name or "",
            children=children,
            start=open_token.start,
            end=end,
            span=index.span(path, open_token.start, end),
            open_raw=open_token.raw,
            close_raw=close_raw,
        )

    for token in tokens:
        if token.form == "text":
            sink().append(
                TextSegment(
                    token.raw, token.start, token.end,
                    index.span(path, token.start, token.end),
                )
            )
        elif token.form == "void":
            sink().append(
                TagNode(
                    kind=token.kind or "",
                    name=token.name or "",
                    children=[],
                    start=token.start,
                    end=token.end,
                    span=index.span(path, token.start, token.end),
                    open_raw=token.raw,
                    close_raw="",
                )
            )
        elif token.form == "open":
            if token.kind in ("def", "model") and any(
                frame[0].kind == token.kind for frame in stack
            ):
                line, col = index.location(token.start)
                diagnostics.append(
                    Diagnostic(
                        "E009",
                        f"<{token.kind}> must not be nested inside another "
                        f"<{token.kind}>",
                        path,
                        line,
                        col,
                    )
                )
            stack.append((token, []))
        else:  # close
            if stack and stack[-1][0].kind == token.kind:
                open_token, children = stack.pop()
                sink().append(close_node(open_token, children, token.raw, token.end))
            else:
                line, col = index.location(token.start)
                expected = (
                    f"; expected </{stack[-1][0].kind}>" if stack else ""
                )
                diagnostics.append(
                    Diagnostic(
                        "E009",
                        f"unexpected closing tag </{token.kind}>{expected}",
                        path,
                        line,
                        col,
                    )
                )
                sink().append(
                    TextSegment(
                        token.raw, token.start, token.end,
                        index.span(path, token.start, token.end),
                    )
                )

    while stack:
        open_token, children = stack.pop()
        line, col = index.location(open_token.start)
        diagnostics.append(
            Diagnostic(
                "E009", f"unclosed <{open_token.kind}> tag", path, line, col
            )
        )
        end = children[-1].end if children else open_token.end
        sink().append(close_node(open_token, children, "", end))

    return root, diagnostics


def segments_source(segments: list[BodySegment]) -> str:
    return "".join(
        seg.raw if isinstance(seg, TextSegment) else seg.source()
        for seg in segments
    )


@dataclass(frozen=True)
class ParsedScenario:
    meta: MetaHeader | None
    meta_line: int
    meta_col: int
    segments: tuple[BodySegment, ...]
    diagnostics: tuple[Diagnostic, ...]
    index: LineIndex


def parse_scenario_source(source: str, path: str) -> ParsedScenario:
    """Run the full front end over one file's content."""
    normalized = normalize_newlines(source)
    index = LineIndex(normalized)
    extract, diagnostics = extract_meta(normalized, path, index)
    if extract is None:
        return ParsedScenario(None, 1, 1, (), tuple(diagnostics), index)
    meta_line, meta_col = index.location(extract.open_offset)
    meta, meta_diags = parse_meta(extract, path, index)
    diagnostics.extend(meta_diags)
    tokens, token_diags = tokenize_body(
        extract.body, path, extract.body_offset, index
    )
    diagnostics.extend(token_diags)
    segments, tree_diags = parse_tags(tokens, path, index)
    diagnostics.extend(tree_diags)
    return ParsedScenario(
        meta, meta_line, meta_col, tuple(segments), tuple(diagnostics), index
    )
