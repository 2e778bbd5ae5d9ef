"""HTML rendering: scenario pages, the corpus index and the marking index.

The markdown subset is deliberately small: ATX headings, paragraphs,
unordered/ordered lists with one nesting level, fenced code blocks, inline
code, ``*`` emphasis, ``**`` strong and ``[text](url)`` links.  Semantic tags
render per their kind; everything else is escaped text.

Blocks exist only at the top level of the body; the interior of a semantic
tag is inline content.  An unclosed fence runs to the end of the body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html import escape

from rasaeco.document import Marking, ScenarioDocument, word_count
from rasaeco.markup import BodySegment, TagNode, TextSegment
from rasaeco.ontology import Corpus, OntologyGraph
from rasaeco.space import Level, Phase
from rasaeco.visual import render_volumetric_svg

STYLESHEET = """\
body { font-family: sans-serif; max-width: 50em; margin: 1em auto; padding: 0 1em; }
header { border-bottom: 1px solid #ccc; margin-bottom: 1em; }
p.identifier { color: #666; font-family: monospace; }
span.phase { background: #e4f2e4; }
span.level { background: #fbe9e7; }
span.phase sup, span.level sup { color: #777; font-size: 70%; }
span.broken { background: #fdd; }
div.def, div.model { border: 1px solid #ddd; border-left: 4px solid #8fb4d4; margin: 0.6em 0; padding: 0.4em 0.8em; }
table.markings { border-collapse: collapse; margin: 0.5em 0; }
table.markings td { border: 1px solid #ccc; padding: 0.2em 0.6em; }
table.index { border-collapse: collapse; }
table.index td, table.index th { border: 1px solid #ccc; padding: 0.3em 0.7em; }
img.thumb { vertical-align: middle; }
pre { background: #f6f6f6; padding: 0.6em; overflow-x: auto; }
footer { border-top: 1px solid #ccc; margin-top: 2em; color: #888; }
"""

_CODE_RE = re.compile(r"`([^`\n]+)`")
_LINK_RE = re.compile(r"\[([^\]\n]*)\]\(([^)\n]*)\)")
_STRONG_RE = re.compile(r"\*\*(.+?)\*\*")
_EM_RE = re.compile(r"\*([^*\n]+?)\*")
_HEADING_RE = re.compile(r"^(#{1,6})\s+")
_BULLET_RE = re.compile(r"^(\s*)([-*]|\d+\.)\s+")


@dataclass(frozen=True)
class RenderedPage:
    identifier: str
    html: str
    relpath: str


@dataclass
class RenderContext:
    doc: ScenarioDocument
    corpus: Corpus
    markings_by_key: dict[tuple[int, int], Marking]
    emitted_anchors: list[Marking] = field(default_factory=list)

    @classmethod
    def for_document(cls, doc: ScenarioDocument, corpus: Corpus) -> "RenderContext":
        return cls(
            doc=doc,
            corpus=corpus,
            markings_by_key={m.node_key: m for m in doc.markings},
        )


def _attr(value: str) -> str:
    return escape(value, quote=True)


def _inline_markdown(text: str) -> str:
    escaped = escape(text, quote=False)
    parts = _CODE_RE.split(escaped)
    rendered: list[str] = []
    for position, part in enumerate(parts):
        if position % 2:
            rendered.append(f"<code>{part}</code>")
            continue
        part = _LINK_RE.sub(
            lambda m: f'<a href="{m.group(2).replace(chr(34), "&quot;")}">'
            f"{m.group(1)}</a>",
            part,
        )
        part = _STRONG_RE.sub(r"<strong>\1</strong>", part)
        part = _EM_RE.sub(r"<em>\1</em>", part)
        rendered.append(part)
    return "".join(rendered)


def _render_inline_pieces(pieces: list[str | TagNode], ctx: RenderContext) -> str:
    return "".join(
        _inline_markdown(piece) if isinstance(piece, str) else render_tag(piece, ctx)
        for piece in pieces
    )


def _children_pieces(node: TagNode) -> list[str | TagNode]:
    return [
        child.raw if isinstance(child, TextSegment) else child
        for child in node.children
    ]


def render_tag(tag: TagNode, ctx: RenderContext) -> str:
    """Transform one semantic tag to HTML per its kind."""
    if tag.kind in ("phase", "level"):
        inner = _render_inline_pieces(_children_pieces(tag), ctx)
        marking = ctx.markings_by_key.get((tag.start, tag.end))
        if marking is None:
            return f'<span class="broken">{inner}</span>'
        ctx.emitted_anchors.append(marking)
        token = escape(marking.value.token)
        return (
            f'<span class="{tag.kind}" data-value="{_attr(marking.value.token)}" '
            f'id="{_attr(marking.anchor_id)}">{inner}<sup>{token}</sup></span>'
        )
    if tag.kind in ("def", "model"):
        inner = _render_inline_pieces(_children_pieces(tag), ctx)
        return (
            f'<div class="{tag.kind}" id="{_attr(tag.kind + "-" + tag.name)}">'
            f"<strong>{escape(tag.name)}</strong>: {inner}</div>"
        )
    if tag.kind in ("ref", "modelref"):
        anchor_prefix = "def" if tag.kind == "ref" else "model"
        if "#" in tag.name:
            scenario_id, symbol = tag.name.split("#", 1)
            target = ctx.corpus.documents.get(scenario_id)
            table = None
            if target is not None:
                table = target.definitions if tag.kind == "ref" else target.models
            if table is None or symbol not in table:
                return f'<span class="broken">{escape(tag.name)}</span>'
            href = f"../{scenario_id}/scenario.html#{anchor_prefix}-{symbol}"
        else:
            table = (
                ctx.doc.definitions if tag.kind == "ref" else ctx.doc.models
            )
            if tag.name not in table:
                return f'<span class="broken">{escape(tag.name)}</span>'
            href = f"#{anchor_prefix}-{tag.name}"
        return f'<a href="{_attr(href)}">{escape(tag.name)}</a>'
    # scenarioref
    target = ctx.corpus.documents.get(tag.name)
    if target is None:
        return f'<span class="broken">{escape(tag.name)}</span>'
    return (
        f'<a href="{_attr(f"../{tag.name}/scenario.html")}">'
        f"{escape(target.meta.title)}</a>"
    )


def _split_lines(segments: tuple[BodySegment, ...]) -> list[list[str | TagNode]]:
    lines: list[list[str | TagNode]] = [[]]
    for segment in segments:
        if isinstance(segment, TextSegment):
            parts = segment.raw.split("\n")
            lines[-1].append(parts[0])
            for part in parts[1:]:
                lines.append([part])
        else:
            lines[-1].append(segment)
    return lines


def _line_text(line: list[str | TagNode]) -> str | None:
    """The joined text of a tag-free line, or None when the line has tags."""
    if any(not isinstance(piece, str) for piece in line):
        return None
    return "".join(line)  # type: ignore[arg-type]


class _BlockRenderer:
    """Streaming block-level renderer over split lines."""

    def __init__(self, ctx: RenderContext) -> None:
        self.ctx = ctx
        self.out: list[str] = []
        self.paragraph: list[str] = []
        self.lists: list[dict] = []  # {"tag": "ul"|"ol", "item_open": bool}

    def flush_paragraph(self) -> None:
        text = "".join(self.paragraph).strip()
        if text:
            self.out.append(f"<p>{text}</p>")
        self.paragraph.clear()

    def close_list(self) -> None:
        entry = self.lists.pop()
        if entry["item_open"]:
            self.out.append("</li>")
        self.out.append(f"</{entry['tag']}>")

    def close_all_lists(self) -> None:
        while self.lists:
            self.close_list()

    def open_list(self, tag: str) -> None:
        if self.lists and not self.lists[-1]["item_open"]:
            self.out.append("<li>")
            self.lists[-1]["item_open"] = True
        self.out.append(f"<{tag}>")
        self.lists.append({"tag": tag, "item_open": False})

    def add_item(self, content: str) -> None:
        top = self.lists[-1]
        if top["item_open"]:
            self.out.append("</li>")
        self.out.append(f"<li>{content}")
        top["item_open"] = True

    def handle_list_line(
        self, indent: str, marker: str, pieces: list[str | TagNode]
    ) -> None:
        self.flush_paragraph()
        tag = "ol" if marker[0].isdigit() else "ul"
        depth = 2 if indent else 1
        while len(self.lists) > depth:
            self.close_list()
        if len(self.lists) == depth and self.lists[-1]["tag"] != tag:
            self.close_list()
        while len(self.lists) < depth:
            self.open_list(tag)
        self.add_item(_render_inline_pieces(pieces, self.ctx).strip())

    def handle_content_line(self, pieces: list[str | TagNode]) -> None:
        inline: list[str | TagNode] = []
        for piece in pieces:
            if isinstance(piece, TagNode) and piece.kind in ("def", "model"):
                self._append_inline(inline)
                inline = []
                self.flush_paragraph()
                self.close_all_lists()
                self.out.append(render_tag(piece, self.ctx))
            else:
                inline.append(piece)
        self._append_inline(inline)

    def _append_inline(self, pieces: list[str | TagNode]) -> None:
        rendered = _render_inline_pieces(pieces, self.ctx)
        if not rendered.strip():
            return
        self.close_all_lists()
        if self.paragraph:
            self.paragraph.append("\n")
        self.paragraph.append(rendered)


def render_markdown(segments: tuple[BodySegment, ...], ctx: RenderContext) -> str:
    renderer = _BlockRenderer(ctx)
    fence_lines: list[str] | None = None

    for line in _split_lines(segments):
        text = _line_text(line)

        if fence_lines is not None:
            if text is not None and text.lstrip().startswith("```"):
                body = escape("\n".join(fence_lines), quote=False)
                renderer.out.append(f"<pre><code>{body}\n</code></pre>")
                fence_lines = None
            else:
                raw = "".join(
                    piece if isinstance(piece, str) else piece.source()
                    for piece in line
                )
                fence_lines.append(raw)
            continue

        if text is not None and not text.strip():
            renderer.flush_paragraph()
            renderer.close_all_lists()
            continue

        if text is not None and text.lstrip().startswith("```"):
            renderer.flush_paragraph()
            renderer.close_all_lists()
            fence_lines = []
            continue

        first = line[0] if line else ""
        if isinstance(first, str):
            heading = _HEADING_RE.match(first)
            if heading:
                renderer.flush_paragraph()
                renderer.close_all_lists()
                depth = len(heading.group(1))
                rest: list[str | TagNode] = [first[heading.end():], *line[1:]]
                content = _render_inline_pieces(rest, ctx).strip()
                renderer.out.append(f"<h{depth}>{content}</h{depth}>")
                continue
            bullet = _BULLET_RE.match(first)
            if bullet:
                rest = [first[bullet.end():], *line[1:]]
                renderer.handle_list_line(bullet.group(1), bullet.group(2), rest)
                continue

        renderer.handle_content_line(line)

    if fence_lines is not None:
        body = escape("\n".join(fence_lines), quote=False)
        renderer.out.append(f"<pre><code>{body}\n</code></pre>")
    renderer.flush_paragraph()
    renderer.close_all_lists()
    return "\n".join(renderer.out)


def _marking_index_table(
    dimension: str, anchors: list[Marking], axis: type[Phase] | type[Level]
) -> str:
    rows: list[str] = []
    by_value: dict[int, list[Marking]] = {}
    for marking in anchors:
        if marking.dimension == dimension:
            by_value.setdefault(marking.value.ordinal, []).append(marking)
    for member in axis:
        markings = by_value.get(member.ordinal)
        if not markings:
            continue
        links = " ".join(
            f'<a href="#{_attr(m.anchor_id)}">{number}</a>'
            for number, m in enumerate(markings, start=1)
        )
        rows.append(
            f"<tr><td>{escape(member.token)}</td><td>{links}</td></tr>"
        )
    if not rows:
        return '<table class="markings"></table>'
    return '<table class="markings">\n' + "\n".join(rows) + "\n</table>"


def _page_shell(title: str, body: str) -> str:
    return (
        "<!DOCTYPE html>\n"
        '<html lang="en">\n'
        "<head>\n"
        '<meta charset="utf-8"/>\n'
        f"<title>{escape(title)}</title>\n"
        f"<style>\n{STYLESHEET}</style>\n"
        "</head>\n"
        "<body>\n"
        f"{body}\n"
        "<footer>Generated by rasaeco</footer>\n"
        "</body>\n"
        "</html>\n"
    )


def render_page(doc: ScenarioDocument, corpus: Corpus) -> RenderedPage:
    """One standalone scenario page with header, body and marking index."""
    ctx = RenderContext.for_document(doc, corpus)
    body_html = render_markdown(doc.segments, ctx)

    relations: list[str] = []
    for relation in doc.meta.relations:
        target = corpus.documents.get(relation.target)
        label = target.meta.title if target else relation.target
        relations.append(
            f'<li><a href="{_attr(f"../{relation.target}/scenario.html")}">'
            f"{escape(label)}</a> "
            f'<span class="nature">({escape(relation.nature)})</span></li>'
        )
    relations_html = (
        "<ul>\n" + "\n".join(relations) + "\n</ul>"
        if relations
        else '<p class="none">none</p>'
    )

    header = (
        "<header>\n"
        f"<h1>{escape(doc.meta.title)}</h1>\n"
        f'<p class="identifier">{escape(doc.identifier)}</p>\n'
        f'<div class="volumetric">\n'
        f"{render_volumetric_svg(doc.volumetric)}"
        "</div>\n"
        '<section class="relations">\n<h2>Relations</h2>\n'
        f"{relations_html}\n</section>\n"
        "</header>"
    )

    index_section = (
        '<section class="marking-index">\n'
        "<h2>Marking index</h2>\n"
        "<h3>Phases</h3>\n"
        f"{_marking_index_table('phase', ctx.emitted_anchors, Phase)}\n"
        "<h3>Levels</h3>\n"
        f"{_marking_index_table('level', ctx.emitted_anchors, Level)}\n"
        "</section>"
    )

    page_body = f"{header}\n<main>\n{body_html}\n</main>\n{index_section}"
    return RenderedPage(
        identifier=doc.identifier,
        html=_page_shell(doc.meta.title, page_body),
        relpath=f"{doc.identifier}/scenario.html",
    )


def render_corpus_index(corpus: Corpus, graph: OntologyGraph) -> RenderedPage:
    """The corpus overview: scenario table plus the ontology graph."""
    rows: list[str] = []
    for doc in corpus.ordered():
        rows.append(
            "<tr>"
            f'<td><a href="{_attr(f"{doc.identifier}/scenario.html")}">'
            f"{escape(doc.identifier)}</a></td>"
            f"<td>{escape(doc.meta.title)}</td>"
            f"<td>{word_count(doc)}</td>"
            f'<td><img class="thumb" '
            f'src="{_attr(f"{doc.identifier}/volumetric.svg")}" '
            'alt="volumetric"/></td>'
            "</tr>"
        )
    table = (
        '<table class="index">\n'
        "<tr><th>Scenario</th><th>Title</th><th>Words</th>"
        "<th>Volumetric</th></tr>\n" + "\n".join(rows) + ("\n" if rows else "")
        + "</table>"
    )
    body = (
        "<header>\n<h1>Scenarios</h1>\n</header>\n"
        "<main>\n"
        f"{table}\n"
        '<section class="ontology">\n<h2>Ontology</h2>\n'
        f'<img class="ontology" src="ontology.svg" alt="ontology graph"/>\n'
        "</section>\n"
        "</main>"
    )
    return RenderedPage(identifier="", html=_page_shell("Scenarios", body), relpath="index.html")
