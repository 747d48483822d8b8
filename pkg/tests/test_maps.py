import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from cubesc.builders import cycle_relator, parse_word, wedge_of_circles
from cubesc.cube_core import Subcomplex, is_connected, link, make_complex
from cubesc.maps import (
    CoverError,
    CubicalMap,
    CubicalMapError,
    develop_ball,
    elevations,
    fiber_product,
    finite_cover,
    identity_map,
    inclusion_map,
    is_local_isometry,
    one_skeleton,
)

from helpers import torus, torus3
from oracles import classical_pieces, grid_ball, overlap_components, random_cyclic_word


def _euler(X):
    return sum((-1) ** n * c for n, c in enumerate(X.counts()))


def test_identity_is_local_isometry():
    for X in (torus(), torus3(), wedge_of_circles(3)):
        assert is_local_isometry(identity_map(X)).ok


def test_folding_figure_eight_is_not_local_isometry():
    W, C = wedge_of_circles(2), wedge_of_circles(1)
    f = CubicalMap(W, C, {0: [0], 1: [(0, (0,), (0,)), (0, (0,), (0,))]})
    rep = is_local_isometry(f)
    assert not rep.ok
    assert {x["kind"] for x in rep.failures} == {"link map not injective"}


def test_coordinate_circle_in_torus_is_local_isometry():
    # the two antipodal link points span no edge of the 4-cycle, so the image is full
    T = torus()
    f = CubicalMap(wedge_of_circles(1), T, {0: [0], 1: [(0, (0,), (0,))]})
    assert is_local_isometry(f).ok
    image = {f.link_image(lv) for lv in link(f.source, 0).vertices}
    assert image == {(0, 0), (0, 1)}
    assert not link(T, 0).graph().has_edge((0, 0), (0, 1))


def test_invalid_map_is_rejected():
    W = wedge_of_circles(1)
    T = torus()
    bad = CubicalMap(T, W, {0: [0], 1: [(0, (0,), (0,)), (0, (0,), (0,))], 2: []})
    with pytest.raises(CubicalMapError):
        is_local_isometry(bad)


def test_map_json_round_trip():
    W = wedge_of_circles(2)
    r = cycle_relator(W, parse_word("abAB"))
    back = CubicalMap.from_json(r.cone, W, r.map.to_json())
    assert back.images == r.map.images


def test_fiber_product_of_point_inclusion():
    T = torus()
    P, f = inclusion_map(Subcomplex(T, {0: [0]}))
    fp = fiber_product(f, f)
    assert len(fp.components) == 1
    comp = fp.components[0]
    assert comp.diagonal and comp.complex.counts() == (1,)


def test_mismatched_targets_are_rejected():
    f = identity_map(torus())
    g = identity_map(wedge_of_circles(1))
    with pytest.raises(CubicalMapError):
        fiber_product(f, g)


def _component_shapes(fp):
    return sorted((c.complex.n_vertices, c.complex.count(1)) for c in fp.components if c.complex.count(1))


def _oracle_shapes(w1, w2):
    return sorted((len(v), len(p)) for v, p in overlap_components(w1, w2))


def test_two_cycles_sharing_one_letter():
    W = wedge_of_circles(2)
    w1, w2 = parse_word("aab"), parse_word("abb")
    fp = fiber_product(cycle_relator(W, w1).map, cycle_relator(W, w2).map)
    assert _component_shapes(fp) == _oracle_shapes(w1, w2)
    # brute force over all vertex pairs: every pair maps to the single vertex
    assert fp.complex.n_vertices == 9


def test_length_ten_relator_self_overlaps():
    W = wedge_of_circles(2)
    w = parse_word("abaBAbbaBa")
    r = cycle_relator(W, w)
    fp = fiber_product(r.map, r.map)
    diag = [c for c in fp.components if c.diagonal]
    assert len(diag) == 1 and diag[0].complex.counts() == (10, 10)
    assert _component_shapes(fp) == _oracle_shapes(w, w)
    off = {frozenset(t for t, _, _ in c.proj_right.images[1]) for c in fp.components if not c.trivial and c.complex.count(1)}
    assert {(0, s) for s in off} == classical_pieces([w])


def test_trivial_permutations_give_disjoint_copies():
    X, p = finite_cover(wedge_of_circles(2), {}, 3)
    assert X.counts() == (3, 6)
    assert len(Subcomplex.whole(X).components()) == 3


def test_cycle_permutation_gives_connected_cover_of_circle():
    X, p = finite_cover(wedge_of_circles(1), {0: [1, 2, 3, 0]})
    assert X.counts() == (4, 4) and is_connected(X)


def test_double_cover_of_torus():
    X, p = finite_cover(torus(), {0: [1, 0], 1: [0, 1]})
    assert X.counts() == (2, 4, 2) and is_connected(X)
    assert not p.validate()


def test_non_liftable_square_is_reported():
    with pytest.raises(CoverError, match="square 0"):
        finite_cover(torus(), {0: [1, 0, 2], 1: [0, 2, 1]})


def test_elevation_to_trivial_cover_is_the_map():
    W = wedge_of_circles(2)
    r = cycle_relator(W, parse_word("abAB"))
    cover, pc = finite_cover(W, {})
    (e,) = elevations(r.map, pc)
    assert e.complex.counts() == r.cone.counts()


def test_loop_elevates_to_double_cycle():
    C = wedge_of_circles(1)
    r = cycle_relator(C, parse_word("a"))
    cover, pc = finite_cover(C, {0: [1, 0]})
    (e,) = elevations(r.map, pc)
    assert e.complex.counts() == (2, 2)


def _check_composition(e, f, pc):
    for v in range(e.complex.n_vertices):
        assert pc.vertex(e.proj_left.vertex(v)) == f.vertex(e.proj_right.vertex(v))
    for k in range(e.complex.count(1)):
        assert pc.cube_target(1, e.proj_left.cube_target(1, k)) == f.cube_target(1, e.proj_right.cube_target(1, k))


def test_relator_elevations_in_degree_three_cover():
    W = wedge_of_circles(2)
    r = cycle_relator(W, parse_word("abaBAbbaBa"))
    cover, pc = finite_cover(W, {0: [1, 2, 0], 1: [0, 2, 1]})
    els = elevations(r.map, pc)
    assert sum(e.complex.count(1) for e in els) == 30
    for e in els:
        _check_composition(e, r.map, pc)
        assert is_local_isometry(e.proj_left).ok


def test_elevations_need_connected_source():
    W = wedge_of_circles(1)
    Y = make_complex(2, {1: [[0, 0], [1, 1]]})
    f = CubicalMap(Y, W, {0: [0, 0], 1: [(0, (0,), (0,)), (0, (0,), (0,))]})
    with pytest.raises(CubicalMapError):
        elevations(f, identity_map(W))


def test_ball_radius_zero_is_a_point():
    B = develop_ball(torus(), 0, 0)
    assert B.complex.counts() == (1,)


def test_ball_in_circle_is_a_path():
    B = develop_ball(wedge_of_circles(1), 0, 3)
    assert B.complex.counts() == (7, 6)
    g = nx.Graph(one_skeleton(B.complex))
    assert nx.is_isomorphic(g, nx.path_graph(7))


def _grid_counts(d, R):
    pts = set(grid_ball(d, R))
    units = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    edges = sum(1 for p in pts for u in units if tuple(a + b for a, b in zip(p, u)) in pts)
    squares = 0
    for p in pts:
        for u, w in itertools.combinations(units, 2):
            corners = [tuple(a + x * b + y * c for a, b, c in zip(p, u, w)) for x in (0, 1) for y in (0, 1)]
            squares += all(c in pts for c in corners)
    return len(pts), edges, squares


@pytest.mark.parametrize("X,d", [(torus(), 2), (torus3(), 3)])
def test_ball_in_torus_matches_grid(X, d):
    B = develop_ball(X, 0, 2)
    assert B.complex.counts()[:3] == _grid_counts(d, 2)


def test_torus_ball_has_thirteen_vertices():
    assert develop_ball(torus(), 0, 2).complex.n_vertices == 13


def test_ball_interior_links_match_base_links():
    X = torus()
    B = develop_ball(X, 0, 3)
    base = link(X, 0)
    for v in range(B.complex.n_vertices):
        if v in B.boundary:
            continue
        assert nx.is_isomorphic(link(B.complex, v).graph(), base.graph())


def test_ball_has_no_doubled_germs():
    for X in (torus(), torus3(), wedge_of_circles(2)):
        B = develop_ball(X, 0, 2)
        for v in range(B.complex.n_vertices):
            germs = [B.projection.link_image(lv) for lv in link(B.complex, v).vertices]
            assert len(germs) == len(set(germs))


# ----------------------------------------------------------------------
# properties


words = st.builds(
    lambda seed, rank, n: random_cyclic_word(random.Random(seed), rank, n),
    st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 8),
)


@settings(max_examples=50, deadline=None)
@given(words, words)
def test_fiber_product_symmetry(w1, w2):
    W = wedge_of_circles(2)
    f, g = cycle_relator(W, w1).map, cycle_relator(W, w2).map
    assert _component_shapes(fiber_product(f, g)) == _component_shapes(fiber_product(g, f))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4))
def test_cover_degree_conservation(seed, d):
    rng = random.Random(seed)
    W = wedge_of_circles(2)
    perms = {e: rng.sample(range(d), d) for e in range(2)}
    X, p = finite_cover(W, perms, d)
    fibres = [sum(1 for v in range(X.n_vertices) if p.vertex(v) == u) for u in range(W.n_vertices)]
    assert fibres == [d] * W.n_vertices
    assert _euler(X) == d * _euler(W)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), words)
def test_elevations_partition_fiber_product(seed, d, w):
    rng = random.Random(seed)
    W = wedge_of_circles(2)
    perms = {e: rng.sample(range(d), d) for e in range(2)}
    cover, pc = finite_cover(W, perms, d)
    r = cycle_relator(W, w)
    els = elevations(r.map, pc)
    assert sum(e.complex.n_vertices for e in els) == d * r.cone.n_vertices
    for e in els:
        _check_composition(e, r.map, pc)
        assert is_local_isometry(e.proj_left).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_torus_covers_from_commuting_permutations(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 4)
    a = rng.sample(range(d), d)
    k = rng.randint(0, 3)
    b = list(range(d))
    for _ in range(k):
        b = [a[i] for i in b]
    X, p = finite_cover(torus(), {0: a, 1: b}, d)
    assert X.counts() == (d, 2 * d, d)
    assert _euler(X) == 0
