"""Small complexes shared by the test modules."""

from cubesc.builders import LabeledGraph, from_corner_cubes, salvetti
from cubesc.cube_core import make_complex
from cubesc.maps import finite_cover
from cubesc.presentation import CubicalPresentation, EdgePath, Relator


def torus():
    """One vertex, loop edges a and b, one square reading a b a^-1 b^-1."""
    return make_complex(1, {1: [[0, 0], [0, 0]], 2: [[1, 1, 0, 0]]}, name="torus")


def torus3():
    return salvetti(LabeledGraph(3, {(0, 1): 2, (0, 2): 2, (1, 2): 2}))


def grid(w, h, squares=None):
    """The (w+1) x (h+1) square grid; ``squares`` keeps only the listed (i, j) squares."""
    def vid(i, j):
        return j * (w + 1) + i

    cubes = []
    for j in range(h):
        for i in range(w):
            if squares is None or (i, j) in squares:
                cubes.append((vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)))
    edges = []
    for j in range(h + 1):
        for i in range(w + 1):
            if i < w:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j < h:
                edges.append((vid(i, j), vid(i, j + 1)))
    return from_corner_cubes((w + 1) * (h + 1), edges + cubes)


def cover_presentation():
    """Base torus with one cone: the 6-sheeted cover unwrapping a three times and b twice."""
    X = salvetti(LabeledGraph(2, {(0, 1): 2}))
    pa = [2 * ((s // 2 + 1) % 3) + s % 2 for s in range(6)]
    pb = [2 * (s // 2) + (s % 2 + 1) % 2 for s in range(6)]
    Y, f = finite_cover(X, {0: pa, 1: pb})

    def loop(edge, n):
        darts, v = [], 0
        for _ in range(n):
            e = next(e for e in range(Y.count(1)) if f.images[1][e][0] == edge and Y.edge_ends(e)[0] == v)
            darts.append((e, 0))
            v = Y.edge_ends(e)[1]
        return EdgePath(0, tuple(darts))

    return CubicalPresentation(X, [Relator(Y, f, name="cover", witnesses=[loop(0, 3), loop(1, 2)])])
