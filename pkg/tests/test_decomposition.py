import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cubesc.builders import LabeledGraph, artin_presentation, cycle_relator, from_corner_cubes, wedge_of_circles
from cubesc.cube_core import Subcomplex, is_locally_convex
from cubesc.decomposition import (
    DecompositionError,
    Nerve,
    StructureGraph,
    admissible_ordering,
    all_orderings,
    collapse,
    convex_hull,
    decompose,
    develop_model,
    graph_from_nerve,
    helly_check,
    intersection_profile,
    model_from_cones,
    nerve,
    structure_graph,
)
from cubesc.presentation import CubicalPresentation, enumerate_pieces

from helpers import grid
from oracles import random_cyclic_word

TIE_BREAKS = ("lowest-id", "highest-id", "seeded-random")


def _edges(sub):
    return sorted(sub.cells.get(1, ()))


def _box(X, w, x0, y0, x1, y1):
    """Full subcomplex of the grid X (row width w) on the vertices of a box."""
    verts = {j * (w + 1) + i for i in range(x0, x1 + 1) for j in range(y0, y1 + 1)}
    cells = [(n, k) for n in range(X.dimension + 1) for k in range(X.count(n)) if set(X.corners(n, k)) <= verts]
    return Subcomplex.closure(X, cells)


def _path_graph_nerve(n):
    # intervals [i, i+1] on a line: consecutive ones share a point
    return Nerve.from_cover([{i, i + 1} for i in range(n + 1)])


# ----------------------------------------------------------------------
# decompositions


def test_free_tree_model_is_one_untethered_component():
    T = from_corner_cubes(5, [(0, 1), (1, 2), (1, 3), (3, 4)])
    pres = CubicalPresentation(T, [])
    dec = decompose(pres, develop_model(pres, 0, 3))
    assert dec.to_json()["counts"] == {"cone": 0, "carrier": 0, "untethered": 1}
    (m,) = dec.members
    assert _edges(m.sub) == [0, 1, 2, 3]
    assert dec.covers


def test_cycle_cone_with_pendant_edges():
    # 4-cycle 0-1-2-3 with pendant edges 0-4, 2-5 and 4-6
    X = from_corner_cubes(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5), (4, 6)])
    cyc = Subcomplex.closure(X, [(1, e) for e in range(4)])
    dec = decompose(CubicalPresentation(X, []), model_from_cones(X, [(0, cyc)]))
    # oracle: an edge meeting the cone shares a vertex with a (vertex) wall-piece,
    # so its carrier supports; the rest splits into untethered components
    g = nx.Graph()
    for e in range(4, 7):
        g.add_edge(*X.edge_ends(e), id=e)
    cone_verts = cyc.vertices()
    touching = {d["id"] for u, v, d in g.edges(data=True) if {u, v} & cone_verts}
    rest = g.edge_subgraph([(u, v) for u, v, d in g.edges(data=True) if d["id"] not in touching])
    expected_untethered = sorted(sorted(rest[u][v]["id"] for u, v in c.edges) for c in
                                 (rest.subgraph(cc) for cc in nx.connected_components(rest)))
    kinds = {k: [_edges(dec.members[i].sub) for i in dec.of_kind(k)] for k in ("cone", "carrier", "untethered")}
    assert kinds["cone"] == [[0, 1, 2, 3]]
    assert sorted(kinds["carrier"]) == [[e] for e in sorted(touching)]
    assert sorted(kinds["untethered"]) == expected_untethered == [[6]]


def test_artin_model_covers_and_has_simplicial_structure_graph():
    pres = artin_presentation(LabeledGraph(2, {(0, 1): 5}), "compact-cycles").presentation
    model = develop_model(pres, 0, 2)
    dec = decompose(pres, model, enumerate_pieces(pres, 2))
    assert dec.covers and dec.piece_mismatches == []
    # exhaustive scan: every interior edge lies in some member
    in_member = set().union(*(m.sub.cells.get(1, set()) for m in dec.members))
    M = model.complex
    assert all(e in in_member for e in range(M.count(1)) if set(M.edge_ends(e)) <= model.interior)
    assert dec.of_kind("cone")
    g = structure_graph(dec)
    assert g.loops == [] and g.multi_edges == []
    assert nerve(dec).one_skeleton() == g.edges


def test_two_cones_sharing_an_edge_are_adjacent():
    Y = from_corner_cubes(6, [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4), (4, 5), (5, 2)])
    a = Subcomplex.closure(Y, [(1, e) for e in range(4)])
    b = Subcomplex.closure(Y, [(1, e) for e in (1, 4, 5, 6)])
    dec = decompose(CubicalPresentation(Y, []), model_from_cones(Y, [(0, a), (0, b)]))
    g = structure_graph(dec)
    assert (0, 1) in g.edges
    assert intersection_profile(a, b) == "connected-and-simply-connected-proven"


def test_single_member_structure_graph():
    X = from_corner_cubes(2, [(0, 1)])
    dec = decompose(CubicalPresentation(X, []), model_from_cones(X, []))
    g = structure_graph(dec)
    assert g.n == 1 and not g.edges


def test_model_radius_must_cover_piece_radius():
    pres = artin_presentation(LabeledGraph(2, {(0, 1): 5}), "compact-cycles").presentation
    with pytest.raises(DecompositionError, match="radius"):
        decompose(pres, develop_model(pres, 0, 1), enumerate_pieces(pres, 2))
    with pytest.raises(DecompositionError):
        develop_model(pres, 0, -1)


# ----------------------------------------------------------------------
# nerves and orderings


def test_intervals_with_common_point_span_a_triangle():
    N = Nerve.from_cover([{0, 1, 2}, {2, 3}, {1, 2}])
    assert N.contains((0, 1, 2))


def test_pairwise_meeting_without_common_point_gives_hollow_triangle():
    N = Nerve.from_cover([{0, 1}, {1, 2}, {2, 0}])
    assert N.one_skeleton() == {(0, 1), (0, 2), (1, 2)}
    assert not N.contains((0, 1, 2))


def test_path_ordering_is_forced():
    N = _path_graph_nerve(2)
    o = admissible_ordering(graph_from_nerve(N), N, 0)
    assert [o.phi[v] for v in range(3)] == [0, 1, 2]
    assert all_orderings(graph_from_nerve(N), N, 0) == [{0: 0, 1: 1, 2: 2}]


def test_star_orderings_all_monotone():
    star = Nerve(4, [frozenset({0, 1}), frozenset({0, 2}), frozenset({0, 3})])
    sg = graph_from_nerve(star)
    o = admissible_ordering(sg, star, 0)
    assert o.order() == [0, 1, 2, 3]
    assert admissible_ordering(sg, star, 0, "highest-id").order() == [0, 3, 2, 1]
    orders = all_orderings(sg, star, 0)
    assert len(orders) == 6
    d = sg.distances(0)
    for phi in orders:
        seq = sorted(phi, key=phi.get)
        assert all(d[a] <= d[b] for a, b in itertools.combinations(seq, 2))


def test_triangle_trace_uses_the_edge_simplex():
    N = Nerve(3, [frozenset({0, 1, 2})])
    o = admissible_ordering(graph_from_nerve(N), N, 0)
    assert o.order() == [0, 1, 2]
    assert o.trace[0].simplex == (0,)
    assert o.trace[1].simplex == (0, 1)


def test_ordering_errors():
    N = Nerve(3, [frozenset({0, 1}), frozenset({2})])
    g = graph_from_nerve(N)
    with pytest.raises(DecompositionError, match="disconnected"):
        admissible_ordering(g, N, 0)
    N2 = _path_graph_nerve(2)
    with pytest.raises(DecompositionError, match="tie-break"):
        admissible_ordering(graph_from_nerve(N2), N2, 0, "coin")
    with pytest.raises(DecompositionError, match="not a cone"):
        admissible_ordering(graph_from_nerve(N2, ["cone", "carrier", "cone"]), N2, 1)
    with pytest.raises(DecompositionError, match="nerve"):
        admissible_ordering(StructureGraph(["cone"] * 3, frozenset({(0, 1), (1, 2)})), Nerve(3, [frozenset({0, 1, 2})]), 0)


# ----------------------------------------------------------------------
# intersections and Helly


def _segment(n):
    return from_corner_cubes(n + 1, [(i, i + 1) for i in range(n)])


def _subpath(X, a, b):
    return Subcomplex.closure(X, [(0, a)] + [(1, e) for e in range(a, b)])


def test_helly_on_a_segment():
    X = _segment(6)
    res = helly_check([_subpath(X, 0, 3), _subpath(X, 2, 5), _subpath(X, 1, 4)])
    assert res.applicable and res.total_nonempty and res.holds
    assert res.total_vertices == [2, 3]
    assert res.simply_connected == "proven"


def test_helly_on_grid_rectangles():
    X = grid(5, 5)

    def rect(x0, y0, x1, y1):
        return _box(X, 5, x0, y0, x1, y1)

    members = [rect(0, 0, 3, 2), rect(2, 1, 5, 4), rect(1, 2, 3, 5)]
    res = helly_check(members)
    # exhaustive vertex scan
    common = set.intersection(*(set(m.vertices()) for m in members))
    assert res.holds and res.total_vertices == sorted(common) and common


def test_helly_not_applicable_without_pairwise_meeting():
    X = _segment(6)
    res = helly_check([_subpath(X, 0, 1), _subpath(X, 4, 6), _subpath(X, 0, 6)])
    assert not res.applicable and res.holds is None


def test_helly_rejects_non_convex_members():
    X = grid(1, 1)
    corner = Subcomplex.closure(X, [(1, e) for e in range(X.count(1)) if 0 in X.edge_ends(e)])
    with pytest.raises(DecompositionError, match="locally convex"):
        helly_check([corner])


def test_intersection_profiles():
    Z = from_corner_cubes(6, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (4, 2), (2, 5), (5, 0)])
    c1 = Subcomplex.closure(Z, [(1, e) for e in range(4)])
    c2 = Subcomplex.closure(Z, [(1, e) for e in range(4, 8)])
    # two cycles of a theta-like graph meeting in two antipodal vertices
    assert intersection_profile(c1, c2) == "disconnected"
    assert intersection_profile(c1, Subcomplex(Z, {0: [4]})) == "empty"
    assert intersection_profile(c1, c1) == "connected-only"
    with pytest.raises(DecompositionError):
        intersection_profile(c1, Subcomplex(_segment(2), {0: [0]}))


def test_collapse_of_a_square_and_a_cycle():
    X = grid(1, 1)
    assert collapse(Subcomplex.whole(X))[0]
    C = wedge_of_circles(1)
    assert not collapse(Subcomplex.whole(C))[0]


# ----------------------------------------------------------------------
# properties


@st.composite
def set_families(draw, max_sets=12, points=10):
    k = draw(st.integers(1, max_sets))
    fam = [draw(st.sets(st.integers(0, points - 1), min_size=1, max_size=4)) for _ in range(k)]
    return fam


@settings(max_examples=80, deadline=None)
@given(set_families(), st.sampled_from(TIE_BREAKS), st.integers(0, 1000))
def test_ordering_monotonicity(fam, tie, seed):
    N = Nerve.from_cover(fam)
    g = graph_from_nerve(N)
    comp = nx.node_connected_component(g.graph(), 0)
    if len(comp) < g.n:
        return
    o = admissible_ordering(g, N, 0, tie, seed)
    assert sorted(o.phi.values()) == list(range(g.n))
    assert o.monotonicity_violations(g) == []


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(4, 10))
def test_decomposition_covers_wedge_models(seed, n):
    W = wedge_of_circles(2)
    w = random_cyclic_word(random.Random(seed), 2, n)
    pres = CubicalPresentation(W, [cycle_relator(W, w)])
    dec = decompose(pres, develop_model(pres, 0, 1))
    assert dec.covers
    assert nerve(dec).one_skeleton() == structure_graph(dec).edges


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)),
                min_size=3, max_size=3))
def test_helly_for_grid_hulls(boxes):
    X = grid(4, 4)
    members = []
    for a, b, c, d in boxes:
        x0, x1 = sorted((a, c))
        y0, y1 = sorted((b, d))
        members.append(convex_hull(_box(X, 4, x0, y0, x1, y1)))
    for m in members:
        assert is_locally_convex(m)[0]
    res = helly_check(members)
    if res.applicable:
        assert res.holds and res.components == 1
