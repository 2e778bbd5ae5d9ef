"""Deterministic SVG renderers: the layered ontology graph and the isometric
volumetric plots.

Every pixel constant here is part of the golden-file contract; outputs must
be byte-identical across runs and must not contain timestamps, random ids or
environment-dependent text.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from html import escape

from rasaeco.ontology import OntologyGraph
from rasaeco.space import Aspect, Level, Phase, Volumetric, volumetric_cells

NODE_WIDTH = 180
NODE_HEIGHT = 46
H_SPACING = 40
V_SPACING = 60
MARGIN = 20
TITLE_LIMIT = 24

ISO_SCALE = 18
THUMB_SCALE = 6
_COS30 = math.sqrt(3.0) / 2.0
_SIN30 = 0.5

FACE_TOP = "#dfeaf4"
FACE_LEFT = "#b5cfe4"
FACE_RIGHT = "#8fb4d4"
FACE_STROKE = "#4a6b8a"
AXIS_STROKE = "#8a8a8a"


@dataclass(frozen=True)
class NodePlacement:
    layer: int
    slot: int
    x: int
    y: int


@dataclass(frozen=True)
class GraphLayout:
    placements: dict[str, NodePlacement]
    back_edges: frozenset[int]


def _find_back_edges(graph: OntologyGraph) -> frozenset[int]:
    """Depth-first traversal entering roots in lexicographic order; an edge
    into a node on the active stack (including self-loops) is a back-edge."""
    outgoing: dict[str, list[tuple[int, str]]] = {node: [] for node in graph.nodes}
    for idx, edge in enumerate(graph.edges):
        outgoing[edge.source].append((idx, edge.target))

    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in graph.nodes}
    back: set[int] = set()

    for root in graph.nodes:
        if color[root] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(root, 0)]
        color[root] = GRAY
        while stack:
            node, cursor = stack[-1]
            if cursor >= len(outgoing[node]):
                stack.pop()
                color[node] = BLACK
                continue
            stack[-1] = (node, cursor + 1)
            edge_idx, target = outgoing[node][cursor]
            if color[target] == GRAY:
                back.add(edge_idx)
            elif color[target] == WHITE:
                color[target] = GRAY
                stack.append((target, 0))
    return frozenset(back)


def layout_graph(graph: OntologyGraph) -> GraphLayout:
    """Layer the graph by longest forward path to a sink (targets low), then
    assign slots lexicographically within each layer."""
    back = _find_back_edges(graph)
    forward: dict[str, list[str]] = {node: [] for node in graph.nodes}
    for idx, edge in enumerate(graph.edges):
        if idx not in back:
            forward[edge.source].append(edge.target)

    # Kahn topological order over the forward DAG, then longest path to a
    # sink computed sinks-first.
    pending = {node: 0 for node in graph.nodes}
    for targets in forward.values():
        for target in targets:
            pending[target] += 1
    queue = [node for node in graph.nodes if pending[node] == 0]
    topo: list[str] = []
    while queue:
        node = queue.pop()
        topo.append(node)
        for target in forward[node]:
            pending[target] -= 1
            if pending[target] == 0:
                queue.append(target)

    layer = {node: 0 for node in graph.nodes}
    for node in reversed(topo):
        for target in forward[node]:
            layer[node] = max(layer[node], layer[target] + 1)

    by_layer: dict[int, list[str]] = {}
    for node in graph.nodes:
        by_layer.setdefault(layer[node], []).append(node)

    placements: dict[str, NodePlacement] = {}
    for depth, members in by_layer.items():
        for slot, node in enumerate(sorted(members)):
            placements[node] = NodePlacement(
                layer=depth,
                slot=slot,
                x=slot * (NODE_WIDTH + H_SPACING) + MARGIN,
                y=depth * (NODE_HEIGHT + V_SPACING) + MARGIN,
            )
    return GraphLayout(placements=placements, back_edges=back)


def _truncate_title(title: str) -> str:
    if len(title) > TITLE_LIMIT:
        return title[:TITLE_LIMIT] + "…"
    return title


def render_graph_svg(
    layout: GraphLayout, graph: OntologyGraph, titles: dict[str, str]
) -> str:
    """Rounded rectangles for nodes, arrowed polylines for edges, with the
    nature text at each polyline midpoint; back-edges dashed."""
    body: list[str] = []
    points: list[tuple[float, float]] = []

    half_w = NODE_WIDTH // 2
    half_h = NODE_HEIGHT // 2

    for node in graph.nodes:
        place = layout.placements[node]
        points.append((place.x - half_w, place.y - half_h))
        points.append((place.x + half_w, place.y + half_h))
        label = escape(_truncate_title(titles.get(node, node)))
        body.append(
            f'<rect class="node" x="{place.x - half_w}" y="{place.y - half_h}" '
            f'width="{NODE_WIDTH}" height="{NODE_HEIGHT}" rx="6" '
            'fill="#f4f6f8" stroke="#3a3f44"/>'
        )
        body.append(
            f'<text class="title" x="{place.x}" y="{place.y + 5}" '
            f'text-anchor="middle" font-size="13">{label}</text>'
        )

    for idx, edge in enumerate(graph.edges):
        src = layout.placements[edge.source]
        dst = layout.placements[edge.target]
        dashed = idx in layout.back_edges
        if edge.source == edge.target:
            pts = [
                (src.x + half_w, src.y - 8),
                (src.x + half_w + 40, src.y - 8),
                (src.x + half_w + 40, src.y + 8),
                (src.x + half_w, src.y + 8),
            ]
            label_x, label_y = src.x + half_w + 40, src.y - 14
        elif dashed:
            pts = [(src.x, src.y + half_h), (dst.x, dst.y - half_h)]
            label_x = (pts[0][0] + pts[1][0]) / 2
            label_y = (pts[0][1] + pts[1][1]) / 2 - 6
        else:
            pts = [(src.x, src.y - half_h), (dst.x, dst.y + half_h)]
            label_x = (pts[0][0] + pts[1][0]) / 2
            label_y = (pts[0][1] + pts[1][1]) / 2 - 6
        points.extend(pts)
        points.append((label_x, label_y))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        pts_attr = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in pts)
        body.append(
            f'<polyline class="edge" points="{pts_attr}" fill="none" '
            f'stroke="#3a3f44"{dash} marker-end="url(#arrow)"/>'
        )
        body.append(
            f'<text class="nature" x="{_fmt(label_x)}" y="{_fmt(label_y)}" '
            f'text-anchor="middle" font-size="11">{escape(edge.nature)}</text>'
        )

    if points:
        min_x = min(x for x, _ in points) - MARGIN
        min_y = min(y for _, y in points) - MARGIN
        max_x = max(x for x, _ in points) + MARGIN
        max_y = max(y for _, y in points) + MARGIN
    else:
        min_x, min_y, max_x, max_y = 0, 0, 40, 40

    width = _fmt(max_x - min_x)
    height = _fmt(max_y - min_y)
    view = f"{_fmt(min_x)} {_fmt(min_y)} {width} {height}"
    defs = (
        "<defs>"
        '<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" '
        'markerWidth="7" markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z" fill="#3a3f44"/>'
        "</marker>"
        "</defs>"
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{view}" '
        f'width="{width}" height="{height}" font-family="sans-serif">\n'
        + defs
        + "\n"
        + "\n".join(body)
        + ("\n" if body else "")
        + "</svg>\n"
    )


def _fmt(value: float) -> str:
    """Fixed two-decimal format; integers print without a fraction."""
    if float(value).is_integer():
        return str(int(value))
    return f"{value:.2f}"


def project(a: float, p: float, l: float, scale: int) -> tuple[float, float]:
    """Isometric projection: aspect to the right, level to the left, phase up.
    Offsets are applied by the renderer."""
    px = (a - l) * _COS30 * scale
    py = (a + l) * _SIN30 * scale - p * scale
    return px, py


def render_volumetric_svg(volumetric: Volumetric, thumbnail: bool = False) -> str:
    """The 7x5x7 grid frame plus one unit cube per covered cell.

    Cubes are painted far-to-near: ascending (a+p+l), ties in (a, p, l)
    lexicographic order; each cube is its three visible faces (top, left,
    right).  Thumbnail mode shrinks the scale and drops the labels.
    """
    scale = THUMB_SCALE if thumbnail else ISO_SCALE
    pad_left = 8 if thumbnail else 76
    pad_right = 8 if thumbnail else 76
    pad_top = 8 if thumbnail else 16
    pad_bottom = 8 if thumbnail else 28

    n_a, n_p, n_l = len(Aspect), len(Phase), len(Level)
    # Grid corner extremes: px in [-(n_l)*c*s, n_a*c*s], py in [-n_p*s, (n_a+n_l)*s/2].
    ox = n_l * _COS30 * scale + pad_left
    oy = n_p * scale + pad_top

    def point(a: float, p: float, l: float) -> tuple[float, float]:
        px, py = project(a, p, l, scale)
        return px + ox, py + oy

    def polygon(corners: list[tuple[float, float, float]], fill: str) -> str:
        pts = " ".join(
            f"{_fmt(x)},{_fmt(y)}" for x, y in (point(*c) for c in corners)
        )
        return (
            f'<polygon class="face" points="{pts}" fill="{fill}" '
            f'stroke="{FACE_STROKE}" stroke-width="0.5"/>'
        )

    body: list[str] = []
    for start, stop in (
        ((0, 0, 0), (n_a, 0, 0)),
        ((0, 0, 0), (0, n_p, 0)),
        ((0, 0, 0), (0, 0, n_l)),
    ):
        x1, y1 = point(*start)
        x2, y2 = point(*stop)
        body.append(
            f'<line class="axis" x1="{_fmt(x1)}" y1="{_fmt(y1)}" '
            f'x2="{_fmt(x2)}" y2="{_fmt(y2)}" stroke="{AXIS_STROKE}"/>'
        )

    cells = sorted(
        volumetric_cells(volumetric),
        key=lambda c: (c.aspect + c.phase + c.level, c.aspect, c.phase, c.level),
    )
    for cell in cells:
        a, p, l = cell.aspect, cell.phase, cell.level
        body.append(
            polygon(
                [(a, p + 1, l), (a + 1, p + 1, l), (a + 1, p + 1, l + 1), (a, p + 1, l + 1)],
                FACE_TOP,
            )
        )
        body.append(
            polygon(
                [(a, p, l + 1), (a + 1, p, l + 1), (a + 1, p + 1, l + 1), (a, p + 1, l + 1)],
                FACE_LEFT,
            )
        )
        body.append(
            polygon(
                [(a + 1, p, l), (a + 1, p, l + 1), (a + 1, p + 1, l + 1), (a + 1, p + 1, l)],
                FACE_RIGHT,
            )
        )

    if not thumbnail:
        for aspect in Aspect:
            x, y = point(aspect.ordinal + 0.5, 0, 0)
            body.append(
                f'<text class="axis-label" x="{_fmt(x + 4)}" y="{_fmt(y + 12)}" '
                f'font-size="9" text-anchor="start">{escape(aspect.token)}</text>'
            )
        for level in Level:
            x, y = point(0, 0, level.ordinal + 0.5)
            body.append(
                f'<text class="axis-label" x="{_fmt(x - 4)}" y="{_fmt(y + 12)}" '
                f'font-size="9" text-anchor="end">{escape(level.token)}</text>'
            )
        for phase in Phase:
            x, y = point(0, phase.ordinal + 0.5, 0)
            body.append(
                f'<text class="axis-label" x="{_fmt(x - 6)}" y="{_fmt(y + 3)}" '
                f'font-size="9" text-anchor="end">{escape(phase.token)}</text>'
            )

    width = (n_a + n_l) * _COS30 * scale + pad_left + pad_right
    height = (n_p + (n_a + n_l) * _SIN30) * scale + pad_top + pad_bottom
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        'font-family="sans-serif">\n'
        + "\n".join(body)
        + ("\n" if body else "")
        + "</svg>\n"
    )
