from __future__ import annotations

import itertools
import re

from rasaeco.ontology import Edge, OntologyGraph
from rasaeco.space import Aspect, Cell, Level, Phase, Volumetric, volumetric_cells
from rasaeco.visual import (
    ISO_SCALE,
    layout_graph,
    project,
    render_graph_svg,
    render_volumetric_svg,
)
from test_space import make_cuboid

RISK_MANAGEMENT_VOLUMETRIC = Volumetric(
    (make_cuboid(0, 3, 0, 1, 3, 3), make_cuboid(5, 6, 0, 1, 3, 3))
)


def test_single_node_layout():
    graph = OntologyGraph(nodes=("only",), edges=())
    layout = layout_graph(graph)
    place = layout.placements["only"]
    assert (place.layer, place.slot) == (0, 0)
    assert (place.x, place.y) == (20, 20)


def test_refinement_pair_layout():
    graph = OntologyGraph(
        nodes=("risk_management", "risk_planning", "risk_tracking"),
        edges=(
            Edge("risk_planning", "risk_management", "refines"),
            Edge("risk_tracking", "risk_management", "refines"),
        ),
    )
    layout = layout_graph(graph)
    assert layout.back_edges == frozenset()
    management = layout.placements["risk_management"]
    planning = layout.placements["risk_planning"]
    tracking = layout.placements["risk_tracking"]
    assert (management.layer, management.slot) == (0, 0)
    assert (planning.layer, planning.slot) == (1, 0)
    assert (tracking.layer, tracking.slot) == (1, 1)
    assert (planning.x, planning.y) == (20, 126)
    assert (tracking.x, tracking.y) == (240, 126)


def test_two_cycle_gets_one_back_edge():
    graph = OntologyGraph(
        nodes=("a", "b"),
        edges=(Edge("a", "b", "uses"), Edge("b", "a", "uses")),
    )
    layout = layout_graph(graph)
    # DFS enters 'a' first, descends into 'b'; the b->a edge closes the cycle.
    assert layout.back_edges == frozenset({1})
    layers = {node: place.layer for node, place in layout.placements.items()}
    assert layers == {"a": 1, "b": 0}


def test_self_loop_is_back_edge():
    graph = OntologyGraph(nodes=("a",), edges=(Edge("a", "a", "uses"),))
    assert layout_graph(graph).back_edges == frozenset({0})


def test_empty_graph_svg_has_only_defs():
    svg = render_graph_svg(layout_graph(OntologyGraph((), ())), OntologyGraph((), ()), {})
    assert svg.count("<polyline") == 0
    assert svg.count("<rect") == 0
    assert "<defs>" in svg


def test_edge_and_marker_counts():
    graph = OntologyGraph(
        nodes=("risk_management", "risk_planning", "risk_tracking"),
        edges=(
            Edge("risk_planning", "risk_management", "refines"),
            Edge("risk_tracking", "risk_management", "refines"),
        ),
    )
    svg = render_graph_svg(layout_graph(graph), graph, {})
    assert svg.count("<polyline") == 2
    assert svg.count('marker-end="url(#arrow)"') == 2
    assert svg.count(">refines</text>") == 2


def test_graph_svg_is_deterministic():
    graph = OntologyGraph(
        nodes=("a", "b"), edges=(Edge("a", "b", "uses"), Edge("b", "a", "uses"))
    )
    layout = layout_graph(graph)
    titles = {"a": "A scenario", "b": "B scenario"}
    assert render_graph_svg(layout, graph, titles) == render_graph_svg(
        layout, graph, titles
    )


def test_title_truncation():
    graph = OntologyGraph(nodes=("n",), edges=())
    long_title = "An extremely verbose scenario title"
    svg = render_graph_svg(layout_graph(graph), graph, {"n": long_title})
    assert long_title[:24] + "…" in svg
    assert long_title not in svg


def test_projection_collisions_are_exactly_the_view_diagonal():
    """The view ray is the (1,1,1) diagonal: two cells project to the same
    point iff one is a diagonal shift of the other (those are the occluded
    cube positions); any other pair separates."""
    cells = [
        Cell(a, p, l) for a in range(7) for p in range(5) for l in range(7)
    ]
    seen: dict[tuple[float, float], Cell] = {}
    for cell in cells:
        key = project(cell.aspect, cell.phase, cell.level, ISO_SCALE)
        key = (round(key[0], 6), round(key[1], 6))
        if key in seen:
            other = seen[key]
            delta = (
                cell.aspect - other.aspect,
                cell.phase - other.phase,
                cell.level - other.level,
            )
            assert delta[0] == delta[1] == delta[2] != 0
        else:
            seen[key] = cell
    # Distinct (aspect - level, aspect + level - 2 * phase) pairs.
    assert len(seen) == len({(c.aspect - c.level, c.aspect + c.level - 2 * c.phase) for c in cells})


def test_painter_order_respects_dominance():
    cells = sorted(
        (Cell(a, p, l) for a in range(7) for p in range(5) for l in range(7)),
        key=lambda c: (c.aspect + c.phase + c.level, c.aspect, c.phase, c.level),
    )
    position = {cell: i for i, cell in enumerate(cells)}
    for c1, c2 in itertools.combinations(cells, 2):
        dominates = (
            c1.aspect >= c2.aspect and c1.phase >= c2.phase and c1.level >= c2.level
        )
        if dominates and c1 != c2:
            assert position[c2] < position[c1]


def test_face_counts():
    empty = render_volumetric_svg(Volumetric())
    assert empty.count("<polygon") == 0
    assert empty.count("<line") == 3  # the axis frame is always drawn

    single = render_volumetric_svg(Volumetric((make_cuboid(0, 0, 0, 0, 0, 0),)))
    assert single.count("<polygon") == 3

    fig3 = render_volumetric_svg(RISK_MANAGEMENT_VOLUMETRIC)
    assert len(volumetric_cells(RISK_MANAGEMENT_VOLUMETRIC)) == 12
    assert fig3.count("<polygon") == 36


def test_face_count_matches_cells_for_arbitrary_volumetrics():
    for cuboids in (
        (make_cuboid(0, 6, 0, 4, 0, 6),),
        (make_cuboid(0, 2, 1, 1, 1, 3), make_cuboid(0, 2, 1, 1, 3, 5)),
    ):
        volumetric = Volumetric(cuboids)
        svg = render_volumetric_svg(volumetric)
        assert svg.count("<polygon") == 3 * len(volumetric_cells(volumetric))


def test_thumbnail_mode_drops_labels_and_shrinks():
    full = render_volumetric_svg(RISK_MANAGEMENT_VOLUMETRIC)
    thumb = render_volumetric_svg(RISK_MANAGEMENT_VOLUMETRIC, thumbnail=True)
    assert "<text" in full
    assert "<text" not in thumb
    assert thumb.count("<polygon") == full.count("<polygon")
    for token in ("as-planned", "network", "demolition"):
        assert token in full and token not in thumb


def test_volumetric_svg_deterministic_and_environment_free():
    first = render_volumetric_svg(RISK_MANAGEMENT_VOLUMETRIC)
    second = render_volumetric_svg(RISK_MANAGEMENT_VOLUMETRIC)
    assert first == second
    assert not re.search(r"\d{4}-\d{2}-\d{2}", first)  # no dates
    assert "id=" not in first  # no generated ids


def test_axis_labels_cover_all_values():
    svg = render_volumetric_svg(Volumetric())
    for axis in (Aspect, Phase, Level):
        for member in axis:
            assert f">{member.token}</text>" in svg
