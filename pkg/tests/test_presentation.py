import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from cubesc.builders import (
    LabeledGraph,
    artin_presentation,
    counterexample_c8,
    cycle_relator,
    from_corner_cubes,
    parse_word,
    wedge_of_circles,
)
from cubesc.presentation import (
    CubicalPresentation,
    EdgePath,
    PresentationError,
    certify_Cp,
    cone_off,
    decompose_path,
    enumerate_pieces,
    presentation_from_json,
    presentation_to_json,
    systole,
)

from helpers import torus
from oracles import classical_pieces, random_cyclic_word


def _artin(m, variant="truncated-cayley", R=1):
    return artin_presentation(LabeledGraph(2, {(0, 1): m}), variant, R).presentation


def test_cone_off_circle_by_loop_is_a_disc():
    C = wedge_of_circles(1)
    K = cone_off(CubicalPresentation(C, [cycle_relator(C, parse_word("a"))]))
    assert K.counts() == (2, 2, 1)
    assert K.euler_characteristic() == 1


def test_cone_off_wedge_by_ten_cycle_has_euler_zero():
    W = wedge_of_circles(2)
    K = cone_off(CubicalPresentation(W, [cycle_relator(W, parse_word("abaBAbbaBa"))]))
    # base (1, 2), cone vertex, a cone edge per cycle vertex, a triangle per cycle edge
    assert K.counts() == (2, 12, 10)
    assert K.euler_characteristic() == 0


def test_cone_off_free_presentation_is_the_base():
    assert cone_off(CubicalPresentation(torus(), [])).counts() == (1, 2, 1)


def test_cone_off_rejects_truncated_cones():
    with pytest.raises(PresentationError, match="compact relators"):
        cone_off(_artin(5))


def test_reduced_cone_off_merges_repeated_cones():
    W = wedge_of_circles(2)
    w = parse_word("abAB")
    pres = CubicalPresentation(W, [cycle_relator(W, w), cycle_relator(W, w)])
    full, reduced = cone_off(pres), cone_off(pres, reduced=True)
    assert full.counts()[0] == 3 and reduced.counts()[0] == 2


def test_presentation_json_round_trip():
    pres = _artin(5)
    data = json.loads(json.dumps(presentation_to_json(pres)))
    back = presentation_from_json(data)
    assert presentation_to_json(back) == presentation_to_json(pres)
    assert not back.validate()


def test_presentation_json_errors_name_the_path():
    data = presentation_to_json(_artin(5))
    data["relators"][0]["map"] = {"0": []}
    with pytest.raises(PresentationError, match=r"\$\.relators\[0\]"):
        presentation_from_json(data)
    with pytest.raises(PresentationError, match=r"\$"):
        presentation_from_json({"relators": []})


def test_free_presentation_has_no_pieces():
    assert enumerate_pieces(CubicalPresentation(wedge_of_circles(2), [])).pieces == []


def test_ten_cycle_pieces_match_word_overlaps():
    W = wedge_of_circles(2)
    w = parse_word("abaBAbbaBa")
    rep = enumerate_pieces(CubicalPresentation(W, [cycle_relator(W, w)]))
    got = {(p.cone_index, p.edges) for p in rep.pieces}
    assert got == classical_pieces([w])
    assert got


def test_wall_pieces_along_coordinate_circle_are_flagged():
    T = torus()
    pres = CubicalPresentation(T, [cycle_relator(T, [(0, 1)])])
    for R in (1, 2):
        pieces = enumerate_pieces(pres, R).pieces
        assert pieces and all(p.kind == "wall" and p.truncated for p in pieces)
        # the carrier meets the whole axis, so no finite diameter bounds it
        assert all(p.diameter is None for p in pieces)


def test_systole_examples():
    for n in (1, 4, 7):
        C = wedge_of_circles(1)
        word = [(0, 1)] * n
        assert systole(cycle_relator(C, word).cone).length == n
    assert systole(torus()).length == 1
    W = wedge_of_circles(2)
    assert systole(cycle_relator(W, parse_word("abaBAbbaBa")).cone).length == 10


def test_systole_of_tree_reports_no_essential_cycle():
    res = systole(from_corner_cubes(3, [(0, 1), (1, 2)]))
    assert res.kind == "no-essential-cycle" and res.length is None


@pytest.mark.parametrize("m", [5, 6, 7])
def test_artin_certified_c9(m):
    cert = certify_Cp(_artin(m), 9)
    assert cert.verdict == "CERTIFIED"
    assert all(c["bound"] >= 9 for c in cert.per_cone)


def test_artin_m4_refuted_with_replayable_decomposition():
    pres = _artin(4)
    cert = certify_Cp(pres, 9)
    assert cert.verdict == "REFUTED"
    ref = cert.refutation
    loop = EdgePath(ref["loop"]["start"], tuple(tuple(d) for d in ref["loop"]["darts"]))
    assert len(loop) == 8
    again = decompose_path(pres, loop, cone=ref["cone"], cyclic=True)
    assert again.count == ref["decomposition"]["pieces"] == 8


def test_free_presentation_certified_for_all_p():
    pres = CubicalPresentation(wedge_of_circles(2), [])
    assert all(certify_Cp(pres, p).verdict == "CERTIFIED" for p in (1, 6, 50))


def test_certify_rejects_bad_p():
    with pytest.raises(PresentationError):
        certify_Cp(CubicalPresentation(wedge_of_circles(1), []), 0)


def test_decompose_empty_path():
    pres = _artin(5)
    assert decompose_path(pres, EdgePath(0, ()), cone=0).count == 0


def test_decompose_artin_m5_relator_cycle():
    pres = _artin(5)
    loop = pres.relators[0].witnesses[0]
    assert len(loop) == 10
    assert decompose_path(pres, loop, cone=0, cyclic=True).count == 10


def test_decompose_rejects_paths_outside_the_complex():
    pres = _artin(5)
    with pytest.raises(PresentationError):
        decompose_path(pres, EdgePath(0, ((10**6, 0),)), cone=0)


@pytest.mark.xfail(strict=True, reason="wall-pieces in the octagon cones have length 3, giving 4 pieces")
def test_decompose_octagon_into_eight_pieces():
    ex = counterexample_c8()
    pres = ex.bundle.presentation
    loop = pres.relators[0].witnesses[0]
    assert decompose_path(pres, loop, cone=0, cyclic=True).count == 8


# ----------------------------------------------------------------------
# properties


def test_verdict_monotone_in_p():
    for m in (3, 4, 5):
        pres = _artin(m)
        pieces = enumerate_pieces(pres, 2)
        verdicts = [certify_Cp(pres, p, pieces=pieces).verdict for p in range(1, 13)]
        certified = [p for p, v in zip(range(1, 13), verdicts) if v == "CERTIFIED"]
        refuted = [p for p, v in zip(range(1, 13), verdicts) if v == "REFUTED"]
        if certified:
            assert certified == list(range(1, max(certified) + 1))
        if refuted:
            assert refuted == list(range(min(refuted), 13))


def test_radius_does_not_flip_verdicts():
    for m in (4, 5):
        pres = _artin(m)
        verdicts = {certify_Cp(pres, 9, R=R).verdict for R in (1, 2, 3)}
        verdicts.discard("INCONCLUSIVE")
        assert len(verdicts) <= 1


words = st.builds(
    lambda seed, rank, n: random_cyclic_word(random.Random(seed), rank, n),
    st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 9),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(words, min_size=1, max_size=3))
def test_pieces_match_classical_oracle(ws):
    W = wedge_of_circles(3)
    pres = CubicalPresentation(W, [cycle_relator(W, w) for w in ws])
    got = {(p.cone_index, p.edges) for p in enumerate_pieces(pres, 1).pieces}
    assert got == classical_pieces(ws)


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_piece_symmetry(w1, w2):
    W = wedge_of_circles(3)
    a = enumerate_pieces(CubicalPresentation(W, [cycle_relator(W, w1), cycle_relator(W, w2)]), 1)
    b = enumerate_pieces(CubicalPresentation(W, [cycle_relator(W, w2), cycle_relator(W, w1)]), 1)
    swap = {0: 1, 1: 0}
    pa = sorted((p.cone_index, sorted(p.edges)) for p in a.pieces if p.cones[0] != p.cones[1])
    pb = sorted((swap[p.cone_index], sorted(p.edges)) for p in b.pieces if p.cones[0] != p.cones[1])
    assert pa == pb


@settings(max_examples=40, deadline=None)
@given(st.lists(words, min_size=1, max_size=2), st.integers(2, 8))
def test_refutations_replay(ws, p):
    W = wedge_of_circles(3)
    pres = CubicalPresentation(W, [cycle_relator(W, w) for w in ws])
    pieces = enumerate_pieces(pres, 1)
    cert = certify_Cp(pres, p, pieces=pieces)
    if cert.verdict == "REFUTED":
        ref = cert.refutation
        loop = EdgePath(ref["loop"]["start"], tuple(tuple(d) for d in ref["loop"]["darts"]))
        again = decompose_path(pres, loop, pieces, cone=ref["cone"], cyclic=True)
        assert again.count == ref["decomposition"]["pieces"] < p
