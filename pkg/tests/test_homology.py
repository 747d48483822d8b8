import itertools
import math
import random

import networkx as nx
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cubesc.builders import (
    LabeledGraph,
    artin_presentation,
    cycle_relator,
    salvetti,
    wedge_of_circles,
)
from cubesc.homology import (
    HomologyError,
    cd_bounds,
    chain_complex,
    coned_homology,
    determinant,
    from_coned,
    homology,
    invariant_factors,
    matmul,
    smith_normal_form,
    verify_direct_sum,
)
from cubesc.presentation import CubicalPresentation, PresentationError, cone_off

from helpers import grid, torus, torus3
from oracles import random_cyclic_word


def determinantal_factors(M):
    """Invariant factors from gcds of k x k minors (d_k = D_k / D_{k-1})."""
    rows, cols = len(M), len(M[0]) if M else 0
    out, prev = [], 1
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for r in itertools.combinations(range(rows), k):
            for c in itertools.combinations(range(cols), k):
                g = math.gcd(g, int(sympy.Matrix([[M[i][j] for j in c] for i in r]).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def _is_zero(M):
    return all(x == 0 for row in M for x in row)


def test_snf_of_zero_matrix():
    D, U, V = smith_normal_form([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]


def test_snf_of_diag_two_three():
    D, U, V = smith_normal_form([[2, 0], [0, 3]])
    assert D == [[1, 0], [0, 6]]
    assert determinantal_factors([[2, 0], [0, 3]]) == [1, 6]


def test_snf_of_identity():
    D, U, V = smith_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert D == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_circle_and_torus_boundaries_vanish():
    assert _is_zero(chain_complex(wedge_of_circles(1)).matrix(1))
    C = chain_complex(torus())
    assert _is_zero(C.matrix(1)) and _is_zero(C.matrix(2))


def test_three_clique_salvetti_boundaries_vanish():
    C = chain_complex(torus3())
    assert all(_is_zero(C.matrix(n)) for n in (1, 2, 3))


def test_torus_homology():
    h = homology(chain_complex(torus()))
    assert h.betti == [1, 2, 1] and h.torsion == [[], [], []]


def test_three_torus_homology():
    assert homology(chain_complex(torus3())).betti == [1, 3, 3, 1]


def test_coned_dihedral_relator():
    pres = artin_presentation(LabeledGraph(2, {(0, 1): 5}), "compact-cycles").presentation
    h = coned_homology(pres)
    # abelianizing (ab)^5 = (ba)^5 gives the zero row, so H1 = Z and chi = 0 forces H2 = 0
    assert h.degree(1) == (1, [])
    assert h.degree(2) == (0, [])
    both = coned_homology(pres, both=True)
    assert both.agree


def test_coned_free_presentation_is_base_homology():
    pres = CubicalPresentation(torus(), [])
    assert coned_homology(pres).betti == [1, 2, 1]


def test_coned_circle_by_loop_is_a_disc():
    C = wedge_of_circles(1)
    h = coned_homology(CubicalPresentation(C, [cycle_relator(C, [(0, 1)])]))
    assert h.betti[:3] == [1, 0, 0] and not any(h.torsion)


def test_coned_homology_detects_torsion():
    C = wedge_of_circles(1)
    h = coned_homology(CubicalPresentation(C, [cycle_relator(C, [(0, 1)] * 3)]))
    assert h.degree(1) == (0, [3])


def test_coned_homology_rejects_truncated_cones():
    pres = artin_presentation(LabeledGraph(2, {(0, 1): 5})).presentation
    with pytest.raises(HomologyError, match="compact"):
        coned_homology(pres)


def test_direct_sum_edge_and_isolated_vertex():
    rep = verify_direct_sum(LabeledGraph(3, {(0, 1): 5}), 5)
    assert rep.ok
    for row in rep.to_json()["rows"]:
        if row["n"] >= 3:
            assert row["lhs"]["betti"] == row["rhs"]["betti"] == 0


def test_direct_sum_three_torus_factor():
    rep = verify_direct_sum(LabeledGraph(5, {(0, 1): 2, (0, 2): 2, (1, 2): 2, (3, 4): 5}), 5)
    assert rep.ok
    row3 = next(r for r in rep.to_json()["rows"] if r["n"] == 3)
    assert row3["lhs"]["betti"] == row3["rhs"]["betti"] == 1


def test_direct_sum_all_labels_large():
    rep = verify_direct_sum(LabeledGraph(3, {(0, 1): 5, (1, 2): 6, (0, 2): 7}), 5)
    assert rep.ok
    assert all(r["equal"] for r in rep.to_json()["rows"] if r["n"] >= 3)


def test_direct_sum_rejects_labels_three_and_four():
    for m in (3, 4):
        with pytest.raises(HomologyError, match="outside"):
            verify_direct_sum(LabeledGraph(2, {(0, 1): m}), 5)


def test_cd_bounds_examples():
    pres = artin_presentation(LabeledGraph(2, {(0, 1): 5}), "compact-cycles").presentation
    rep = cd_bounds(pres, True)
    assert (rep.lower, rep.upper) == (0, 2)
    free = cd_bounds(CubicalPresentation(torus(), []), True)
    assert (free.lower, free.upper) == (2, 2)
    X = torus3()
    rep3 = cd_bounds(CubicalPresentation(X, [cycle_relator(X, [(0, 1)])]), True)
    assert (rep3.lower, rep3.upper) == (2, 3)
    with pytest.raises(PresentationError):
        cd_bounds(pres, False)


# ----------------------------------------------------------------------
# properties


matrices = st.integers(1, 8).flatmap(
    lambda r: st.integers(1, 8).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_certificate(M):
    D, U, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=3))
def test_invariant_factors_match_minors(M):
    assert invariant_factors(M) == determinantal_factors(M)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.data())
def test_salvetti_homology_has_binomial_ranks_and_euler(n, data):
    edges = data.draw(st.sets(st.sampled_from([(i, j) for i in range(n) for j in range(i + 1, n)] or [(0, 0)])))
    edges = {e: 2 for e in edges if e[0] != e[1]}
    X = salvetti(LabeledGraph(n, edges))
    C = chain_complex(X)
    h = homology(C)
    g = nx.Graph(list(edges))
    g.add_nodes_from(range(n))
    cliques = [c for c in nx.enumerate_all_cliques(g)]
    for k in range(1, X.dimension + 1):
        assert X.count(k) == sum(1 for c in cliques if len(c) == k)
    # all differentials vanish, so the Betti numbers are the cube counts
    assert h.betti == list(X.counts())
    assert h.euler_characteristic() == C.euler_characteristic()


squares_3x3 = st.sets(st.tuples(st.integers(0, 2), st.integers(0, 2)))


@settings(max_examples=40, deadline=None)
@given(squares_3x3)
def test_grid_subcomplex_chains(squares):
    X = grid(3, 3, squares)
    C = chain_complex(X)
    C.check()
    h = homology(C)
    assert h.euler_characteristic() == C.euler_characteristic()
    assert h.betti[0] == 1


words = st.builds(
    lambda seed, n: random_cyclic_word(random.Random(seed), 2, n),
    st.integers(0, 10**6), st.integers(1, 8),
)


@settings(max_examples=40, deadline=None)
@given(st.lists(words, min_size=0, max_size=3))
def test_coned_routes_agree(ws):
    W = wedge_of_circles(2)
    pres = CubicalPresentation(W, [cycle_relator(W, w) for w in ws])
    both = coned_homology(pres, both=True)
    assert both.agree
    K = cone_off(pres)
    assert homology(from_coned(K)).euler_characteristic() == K.euler_characteristic()
