"""Generators for Salvetti complexes, Artin and Dyer presentations, and a C(8) example."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .cube_core import CubeComplex, FaceRef, make_complex, product
from .maps import CubicalMap, develop_ball
from .presentation import CubicalPresentation, EdgePath, Relator


class BuilderError(ValueError):
    """Raised when a construction's hypotheses fail."""


# ----------------------------------------------------------------------
# labelled graphs


@dataclass
class LabeledGraph:
    """A simplicial graph with edge labels (None for infinity) and optional vertex labels."""

    n: int
    edges: Dict[Tuple[int, int], Optional[int]] = field(default_factory=dict)
    vertex_labels: Optional[List[Optional[int]]] = None
    names: Optional[List[str]] = None

    def __post_init__(self) -> None:
        clean: Dict[Tuple[int, int], Optional[int]] = {}
        for (i, j), m in self.edges.items():
            if i == j:
                raise BuilderError("graph must be simplicial (no loops)")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise BuilderError(f"edge ({i}, {j}) uses an unknown vertex")
            key = (min(i, j), max(i, j))
            if key in clean:
                raise BuilderError("graph must be simplicial (no multi-edges)")
            if m is not None and (not isinstance(m, int) or m < 2):
                raise BuilderError(f"edge label {m} must be an integer >= 2 or infinity")
            clean[key] = m
        self.edges = clean
        if self.vertex_labels is not None:
            if len(self.vertex_labels) != self.n:
                raise BuilderError("one vertex label per vertex is required")
            for m in self.vertex_labels:
                if m is not None and (not isinstance(m, int) or m < 2):
                    raise BuilderError(f"vertex label {m} must be an integer >= 2 or infinity")

    def label(self, i: int, j: int) -> Optional[int]:
        return self.edges.get((min(i, j), max(i, j)), None)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def commuting(self, i: int, j: int) -> bool:
        return self.has_edge(i, j) and self.label(i, j) == 2

    def right_angled_part(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(e for e, m in self.edges.items() if m == 2)
        return g

    def to_json(self) -> dict:
        out: dict = {
            "vertices": list(self.names) if self.names else list(range(self.n)),
            "edges": [[i, j, m] for (i, j), m in sorted(self.edges.items())],
        }
        if self.vertex_labels is not None:
            out["vertex_labels"] = list(self.vertex_labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LabeledGraph":
        verts = data.get("vertices", [])
        n = verts if isinstance(verts, int) else len(verts)
        names = None if isinstance(verts, int) else [str(v) for v in verts]
        edges: Dict[Tuple[int, int], Optional[int]] = {}
        for row in data.get("edges", []):
            i, j = int(row[0]), int(row[1])
            m = row[2] if len(row) > 2 else 2
            if isinstance(m, str) and m.lower() in ("inf", "infinity", "oo"):
                m = None
            edges[(i, j)] = m
        vl = data.get("vertex_labels")
        if vl is not None:
            vl = [None if (isinstance(m, str) or m is None) else int(m) for m in vl]
        return cls(n, edges, vl, names)


def cliques(g: nx.Graph) -> List[Tuple[int, ...]]:
    """All nonempty cliques of g as sorted tuples, by size then lexicographically."""
    out = [tuple(sorted(c)) for c in nx.enumerate_all_cliques(g)]
    return sorted(out, key=lambda c: (len(c), c))


# ----------------------------------------------------------------------
# Salvetti complexes


@dataclass
class Salvetti:
    complex: CubeComplex
    # clique (sorted generator tuple) -> (dimension, id)
    cube_of: Dict[Tuple[int, ...], Tuple[int, int]]


def salvetti_of(g: nx.Graph, generators: Optional[Sequence[int]] = None, name: str = "") -> Salvetti:
    """One vertex, one loop per generator and one n-cube per n-clique of g.

    The coordinates of the cube of a clique follow the generator order.
    """
    gens = sorted(g.nodes) if generators is None else list(generators)
    sub = g.subgraph(gens)
    cl = cliques(sub) if gens else []
    cube_of: Dict[Tuple[int, ...], Tuple[int, int]] = {(): (0, 0)}
    per_dim: Dict[int, List[Tuple[int, ...]]] = {}
    for c in cl:
        lst = per_dim.setdefault(len(c), [])
        cube_of[c] = (len(c), len(lst))
        lst.append(c)
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    for n, lst in per_dim.items():
        rows = []
        for c in lst:
            faces = []
            for d in range(n):
                face = c[:d] + c[d + 1 :]
                fid = cube_of[face][1]
                for _ in (0, 1):
                    faces.append((fid, tuple(range(n - 1)), (0,) * (n - 1)))
            rows.append(tuple(faces))
        cubes[n] = rows
    return Salvetti(CubeComplex(1, cubes, name=name), cube_of)


def salvetti(G: LabeledGraph) -> CubeComplex:
    """The Salvetti complex of the right-angled Artin group on the 2-labelled subgraph."""
    return salvetti_of(G.right_angled_part(), name="salvetti").complex


def _salvetti_full(G: LabeledGraph) -> Salvetti:
    return salvetti_of(G.right_angled_part(), name="salvetti")


def wedge_of_circles(k: int) -> CubeComplex:
    return make_complex(1, {1: [[0, 0] for _ in range(k)]}, name=f"rose{k}")


def cycle_relator(X: CubeComplex, word: Sequence[Tuple[int, int]], name: str = "") -> Relator:
    """A cycle reading a word of (loop edge, +1 or -1) letters in a one-vertex complex."""
    n = len(word)
    if n == 0:
        raise BuilderError("empty relator word")
    Y = make_complex(n, {1: [[i, (i + 1) % n] for i in range(n)]}, name=name)
    for e, _ in word:
        if X.edge_ends(e)[0] != X.edge_ends(e)[1]:
            raise BuilderError("cycle relators need loop edges in the base")
    base_v = X.edge_ends(word[0][0])[0]
    images = {0: [base_v] * n, 1: [(e, (0,), (0 if s > 0 else 1,)) for e, s in word]}
    loop = EdgePath(0, tuple((i, 0) for i in range(n)))
    return Relator(Y, CubicalMap(Y, X, images), name=name, witnesses=[loop])


def parse_word(word: str, alphabet: str = "abcdefghij") -> List[Tuple[int, int]]:
    """Lower-case letters are generators, upper-case their inverses."""
    out = []
    for ch in word:
        idx = alphabet.index(ch.lower())
        out.append((idx, 1 if ch.islower() else -1))
    return out


def from_corner_cubes(n_vertices: int, cubes: Iterable[Sequence[int]], name: str = "") -> CubeComplex:
    """Complex whose cubes are embedded and given by corner vertices in bit order.

    Corner x of an n-cube is listed at position x, with bit i of x the i-th
    coordinate.  Faces with the same vertex set are identified.
    """
    canon: Dict[int, Dict[FrozenSet[int], Tuple[int, Tuple[int, ...]]]] = {}
    rows: Dict[int, List[Optional[Tuple[FaceRef, ...]]]] = {}

    def register(corners: Tuple[int, ...]) -> Tuple[int, Tuple[int, ...], Tuple[int, ...]]:
        n = (len(corners) - 1).bit_length()
        if len(set(corners)) != len(corners):
            raise BuilderError("corner cubes must have distinct vertices")
        if n == 0:
            return corners[0], (), ()
        key = frozenset(corners)
        table = canon.setdefault(n, {})
        if key not in table:
            cid = len(table)
            table[key] = (cid, corners)
            rows.setdefault(n, []).append(None)
            faces = []
            for d in range(n):
                for s in (0, 1):
                    sub = []
                    for y in range(1 << (n - 1)):
                        low = y & ((1 << d) - 1)
                        high = (y >> d) << (d + 1)
                        sub.append(corners[low | (s << d) | high])
                    faces.append(register(tuple(sub)))
            rows[n][cid] = tuple(faces)
        cid, ref = table[key]
        pos = {v: x for x, v in enumerate(ref)}
        z = pos[corners[0]]
        perm, flips = [], []
        for j in range(n):
            w = pos[corners[1 << j]] ^ z
            if w == 0 or w & (w - 1):
                raise BuilderError("corner lists are not compatible cubes")
            perm.append(w.bit_length() - 1)
            flips.append((z >> (w.bit_length() - 1)) & 1)
        # check the full corner correspondence
        for x in range(1 << n):
            y = 0
            for j in range(n):
                y |= (((x >> j) & 1) ^ flips[j]) << perm[j]
            if ref[y] != corners[x]:
                raise BuilderError("corner lists are not compatible cubes")
        return cid, tuple(perm), tuple(flips)

    for c in cubes:
        register(tuple(c))
    out: Dict[int, List[Tuple[FaceRef, ...]]] = {n: [r for r in lst] for n, lst in rows.items()}  # type: ignore[misc]
    return CubeComplex(n_vertices, out, name=name)


# ----------------------------------------------------------------------
# dihedral Artin groups: Garside normal form


class DihedralArtin:
    """Elements of <a, b | (a,b)^m = (b,a)^m> in left-greedy Garside normal form.

    An element is (k, factors): Delta^k times proper simple elements, each
    an alternating positive word recorded as (first letter, length) with
    1 <= length < m.  Consecutive factors (s, t) satisfy first(t) == last(s).
    Letters are 0 and 1.
    """

    def __init__(self, m: int):
        if m < 2:
            raise BuilderError("dihedral Artin groups need m >= 2")
        self.m = m

    identity = (0, ())

    def _last(self, s: Tuple[int, int]) -> int:
        first, length = s
        return first if length % 2 == 1 else 1 - first

    def _tau(self, s: Tuple[int, int]) -> Tuple[int, int]:
        if self.m % 2 == 1:
            return (1 - s[0], s[1])
        return s

    def mul_letter(self, g, letter: int, sign: int):
        k, fac = g
        fac = list(fac)
        if sign > 0:
            return self._mul_pos(k, fac, letter)
        # x^-1 = Delta^-1 s' with s' x = Delta
        k -= 1
        fac = [self._tau(s) for s in fac]
        # s' is alternating of length m-1 ending in the letter other than x
        last_wanted = 1 - letter
        first = last_wanted if (self.m - 1) % 2 == 1 else 1 - last_wanted
        g2 = (k, tuple(fac))
        cur = first
        for _ in range(self.m - 1):
            g2 = self._mul_pos(g2[0], list(g2[1]), cur)
            cur = 1 - cur
        return g2

    def _mul_pos(self, k: int, fac: List[Tuple[int, int]], x: int):
        if not fac:
            if self.m == 1:
                return (k + 1, ())
            return (k, ((x, 1),))
        s = fac[-1]
        if self._last(s) == x:
            fac.append((x, 1))
            return (k, tuple(fac))
        s2 = (s[0], s[1] + 1)
        if s2[1] < self.m:
            fac[-1] = s2
            return (k, tuple(fac))
        # s2 is Delta: move it to the front
        rest = [self._tau(t) for t in fac[:-1]]
        return (k + 1, tuple(rest))

    def word(self, letters: Iterable[Tuple[int, int]], g=None):
        g = self.identity if g is None else g
        for x, sgn in letters:
            g = self.mul_letter(g, x, sgn)
        return g

    def relator(self) -> List[Tuple[int, int]]:
        """(a,b)^m followed by the inverse of (b,a)^m as (letter, sign) pairs."""
        left = [(i % 2, 1) for i in range(self.m)]
        right = [((i + 1) % 2, 1) for i in range(self.m)]
        return left + [(x, -1) for x, _ in reversed(right)]


def relator_neighbourhood(m: int, layers: int = 1) -> Tuple[CubeComplex, List[Tuple[int, int]], List, EdgePath]:
    """Finite subgraph of the dihedral Artin Cayley graph made of relator loops.

    Layer 0 is the relator loop at the identity; each further layer adds
    every relator loop through a vertex added by the previous layer.  Returns the
    graph (edges oriented g -> g*x), the generator of each edge, the group
    element of each vertex, and the relator loop at the identity.
    """
    G = DihedralArtin(m)
    rel = G.relator()
    L = len(rel)
    index: Dict[tuple, int] = {G.identity: 0}
    elems: List = [G.identity]
    edges: Dict[Tuple[int, int], int] = {}
    edge_list: List[Tuple[int, int, int]] = []

    def vid(g) -> int:
        if g not in index:
            index[g] = len(elems)
            elems.append(g)
        return index[g]

    def trace(v: int, rot: int) -> List[int]:
        g = elems[v]
        new = []
        for t in range(L):
            x, sgn = rel[(rot + t) % L]
            h = G.mul_letter(g, x, sgn)
            a, b = (vid(g), vid(h)) if sgn > 0 else (vid(h), vid(g))
            key = (a, x)
            if key not in edges:
                edges[key] = len(edge_list)
                edge_list.append((a, b, x))
                new.extend([a, b])
            g = h
        return new

    frontier = list(dict.fromkeys(trace(0, 0)))
    done: set = set()
    for _ in range(layers):
        nxt = []
        for v in frontier:
            if v in done:
                continue
            done.add(v)
            for rot in range(L):
                nxt.extend(trace(v, rot))
        frontier = [v for v in dict.fromkeys(nxt) if v not in done]
    Y = make_complex(len(elems), {1: [[a, b] for a, b, _ in edge_list]}, name=f"cay(A{m})")
    gens = [(x, 0) for _, _, x in edge_list]
    # the relator loop at the identity
    darts = []
    g = G.identity
    for x, sgn in rel:
        h = G.mul_letter(g, x, sgn)
        if sgn > 0:
            e = edges[(index[g], x)]
            darts.append((e, 0))
        else:
            e = edges[(index[h], x)]
            darts.append((e, 1))
        g = h
    return Y, gens, elems, EdgePath(0, tuple(darts))


def cayley_girth(m: int, radius: Optional[int] = None) -> int:
    """Girth of the dihedral Artin Cayley graph found by BFS from the identity."""
    G = DihedralArtin(m)
    radius = m if radius is None else radius
    dist = {G.identity: 0}
    parent_edge = {G.identity: None}
    frontier = [G.identity]
    best = None
    for depth in range(radius):
        nxt = []
        for g in frontier:
            for x in (0, 1):
                for sgn in (1, -1):
                    if parent_edge[g] == (x, -sgn):
                        continue
                    h = G.mul_letter(g, x, sgn)
                    if h in dist:
                        length = dist[g] + dist[h] + 1
                        if best is None or length < best:
                            best = length
                    else:
                        dist[h] = depth + 1
                        parent_edge[h] = (x, sgn)
                        nxt.append(h)
        frontier = nxt
    return best if best is not None else -1


# ----------------------------------------------------------------------
# presentation bundles


@dataclass
class PresentationBundle:
    presentation: CubicalPresentation
    provenance: dict
    expected: dict = field(default_factory=dict)
    graph: Optional[LabeledGraph] = None


def _graph_map_relator(
    Y: CubeComplex, X: CubeComplex, gen_edges: Sequence[int], name: str, **flags
) -> Relator:
    images = {0: [0] * Y.n_vertices, 1: [(e, (0,), (0,)) for e in gen_edges]}
    return Relator(Y, CubicalMap(Y, X, images), name=name, **flags)


def _boundary_by_degree(Y: CubeComplex, full_degree: int) -> FrozenSet[int]:
    deg = [0] * Y.n_vertices
    for e in range(Y.count(1)):
        a, b = Y.edge_ends(e)
        deg[a] += 1
        deg[b] += 1
    return frozenset(v for v in range(Y.n_vertices) if deg[v] < full_degree)


def artin_presentation(G: LabeledGraph, variant: str = "truncated-cayley", R: int = 1) -> PresentationBundle:
    """Cubical presentations of the Artin group of G over its Salvetti complex.

    ``truncated-cayley`` cones are relator neighbourhoods in dihedral Cayley
    graphs with R layers; ``compact-cycles`` cones are the relator cycles;
    ``maximal-join`` cones are products of factor Cayley graphs over the
    maximal 2-joins.
    """
    S = _salvetti_full(G)
    X = S.complex
    loop = {i: S.cube_of[(i,)][1] for i in range(G.n)}
    relators: List[Relator] = []
    dihedral = [(i, j, m) for (i, j), m in sorted(G.edges.items()) if m is not None and m >= 3]
    if variant == "compact-cycles":
        for i, j, m in dihedral:
            D = DihedralArtin(m)
            word = [((i, j)[x], s) for x, s in D.relator()]
            relators.append(cycle_relator(X, [(loop[g], s) for g, s in word], name=f"c_{i}{j}"))
    elif variant == "truncated-cayley":
        if R < 1:
            raise BuilderError("truncated cones need R >= 1 so that the systole loop is interior")
        for i, j, m in dihedral:
            Y, gens, _, witness = relator_neighbourhood(m, R)
            gen_edges = [loop[(i, j)[x]] for x, _ in gens]
            rel = _graph_map_relator(
                Y, X, gen_edges, f"Y_{i}{j}", truncated=True, radius=R, homogeneous=True, axes=True,
                witnesses=[witness], boundary_vertices=_boundary_by_degree(Y, 4),
            )
            relators.append(rel)
    elif variant == "maximal-join":
        if R < 1:
            raise BuilderError("truncated cones need R >= 1 so that the systole loop is interior")
        joins = maximal_joins(G)
        if dihedral and not joins:
            raise BuilderError("no maximal 2-join contains a non-commuting edge")
        for K in joins:
            relators.append(_join_cone(G, S, K, R))
    else:
        raise BuilderError(f"unknown Artin variant {variant!r}")
    pres = CubicalPresentation(X, relators, name=f"artin-{variant}")
    labels = [m for _, _, m in dihedral]
    expected = {"C9": all(m > 4 for m in labels), "criterion": "labels are 2 or greater than 4"}
    prov = {"construction": "artin", "variant": variant, "R": R, "graph": G.to_json()}
    if variant == "maximal-join":
        prov["approximation"] = "join cores are balls of radius R in products of factor Cayley graphs"
    return PresentationBundle(pres, prov, expected, G)


def maximal_joins(G: LabeledGraph) -> List[Tuple[Tuple[int, ...], ...]]:
    """Maximal vertex sets splitting as a 2-join of supported factors.

    A set S splits into join factors: the components of the graph on S
    whose edges are the pairs not joined by a 2-labelled edge.  Supported
    factors are single vertices, sets with no edges of G, and single edges
    with a finite label >= 3.  Returned sets contain at least one such edge
    factor; each is reported as its tuple of factors.
    """
    for (i, j), m in G.edges.items():
        if m is None or m < 3:
            continue
        for (k, l), m2 in G.edges.items():
            if (k, l) != (i, j) and m2 is not None and m2 >= 3 and {i, j} & {k, l}:
                raise BuilderError("maximal-join cones support only isolated non-commuting edges")
    accepted: List[Tuple[FrozenSet[int], Tuple[Tuple[int, ...], ...]]] = []
    for size in range(2, G.n + 1):
        for S in itertools.combinations(range(G.n), size):
            h = nx.Graph()
            h.add_nodes_from(S)
            for a, b in itertools.combinations(S, 2):
                if not G.commuting(a, b):
                    h.add_edge(a, b)
            factors = [tuple(sorted(c)) for c in nx.connected_components(h)]
            ok = True
            has_edge = False
            for f in factors:
                if len(f) == 1:
                    continue
                inner = [(a, b) for a, b in itertools.combinations(f, 2) if G.has_edge(a, b)]
                if not inner:
                    continue
                if len(f) == 2 and len(inner) == 1 and (G.label(*f) or 0) >= 3:
                    has_edge = True
                    continue
                ok = False
            if ok and has_edge:
                accepted.append((frozenset(S), tuple(sorted(factors))))
    out = []
    for S, factors in accepted:
        if not any(S < T for T, _ in accepted):
            out.append(factors)
    return sorted(out)


def _join_cone(G: LabeledGraph, S: Salvetti, factors: Tuple[Tuple[int, ...], ...], R: int) -> Relator:
    """Product of factor Cayley graphs mapped into the Salvetti complex."""
    X = S.complex
    graphs: List[Tuple[CubeComplex, List[int], frozenset, Optional[EdgePath]]] = []
    for f in factors:
        if len(f) == 2 and G.has_edge(*f):
            m = G.label(*f)
            Y, gens, _, witness = relator_neighbourhood(m, R)  # type: ignore[arg-type]
            graphs.append((Y, [f[x] for x, _ in gens], _boundary_by_degree(Y, 4), witness))
        else:
            # free group on the factor: a ball in its Cayley tree
            rose = wedge_of_circles(len(f))
            ball = develop_ball(rose, 0, max(R, 1) * 2)
            gens = [f[ball.projection.images[1][e][0]] for e in range(ball.complex.count(1))]
            graphs.append((ball.complex, gens, ball.boundary, None))
    # iterated product, remembering the factor cells of each product cube
    P = graphs[0][0]
    parts: Dict[int, List[Tuple[Tuple[int, int], ...]]] = {
        n: [((n, k),) for k in range(P.count(n))] for n in range(P.dimension + 1)
    }
    for Yk, _, _, _ in graphs[1:]:
        P2, index = product(P, Yk)
        new_parts: Dict[int, List] = {}
        for (p, a, q, b), (n, idx) in sorted(index.items(), key=lambda t: t[1]):
            new_parts.setdefault(n, [None] * P2.count(n))
            new_parts[n][idx] = parts[p][a] + ((q, b),)
        P, parts = P2, new_parts
    images: Dict[int, list] = {0: [0] * P.n_vertices}
    for n in range(1, P.dimension + 1):
        row = []
        for cells in parts[n]:
            gens_here = [graphs[t][1][k] for t, (d, k) in enumerate(cells) if d == 1]
            clique = tuple(sorted(gens_here))
            if clique not in S.cube_of:
                raise BuilderError(f"generators {clique} do not span a cube of the Salvetti complex")
            perm = tuple(clique.index(gx) for gx in gens_here)
            row.append((S.cube_of[clique][1], perm, (0,) * n))
        images[n] = row
    boundary = set()
    for v, cells in enumerate(parts[0]):
        if any(cells[t][1] in graphs[t][2] for t in range(len(graphs))):
            boundary.add(v)
    witnesses = []
    # the dihedral relator loop at the base vertex of the product
    for t, (Yk, _, _, w) in enumerate(graphs):
        if w is None:
            continue
        base_cells = tuple((0, 0) for _ in graphs)
        v0 = parts[0].index(base_cells)
        lookup = {c: i for i, c in enumerate(parts[1])}
        darts = []
        for e, s in w.darts:
            cells = tuple((1, e) if u == t else (0, 0) for u in range(len(graphs)))
            darts.append((lookup[cells], s))
        witnesses.append(EdgePath(v0, tuple(darts)))
        break
    name = "Y_K" + "".join(str(v) for f in factors for v in f)
    return Relator(
        P, CubicalMap(P, X, images), name=name, truncated=True, radius=R, homogeneous=True, axes=True,
        witnesses=witnesses, boundary_vertices=frozenset(boundary),
    )


def dyer_presentation(G: LabeledGraph, variant: str = "cycle", R: int = 2) -> PresentationBundle:
    """Right-angled Dyer presentations: cycles a_i^{m_i} or truncated cylinders."""
    if G.vertex_labels is None:
        raise BuilderError("Dyer presentations need vertex labels")
    for (i, j), m in G.edges.items():
        for v in (i, j):
            mv = G.vertex_labels[v]
            if mv is not None and mv >= 3 and m != 2:
                raise BuilderError("Dyer restriction fails: a vertex with label >= 3 has an edge not labelled 2")
        if m is not None and m != 2:
            raise BuilderError("only right-angled Dyer groups are built (edge labels 2 or infinity)")
    S = _salvetti_full(G)
    X = S.complex
    finite = [i for i in range(G.n) if G.vertex_labels[i] is not None]
    relators: List[Relator] = []
    if variant == "cycle":
        for i in finite:
            m = G.vertex_labels[i]
            relators.append(cycle_relator(X, [(S.cube_of[(i,)][1], 1)] * m, name=f"Y_{i}"))  # type: ignore[operator]
    elif variant == "cylinder":
        for (i, j) in G.edges:
            if G.vertex_labels[i] is not None and G.vertex_labels[j] is not None:
                raise BuilderError("cylinder variant needs every edge to have at most one finitely labelled vertex")
        if R < 1:
            raise BuilderError("cylinder truncation radius must be at least 1")
        for i in finite:
            relators.append(_cylinder(G, S, i, G.vertex_labels[i], R))  # type: ignore[arg-type]
    else:
        raise BuilderError(f"unknown Dyer variant {variant!r}")
    pres = CubicalPresentation(X, relators, name=f"dyer-{variant}")
    labels = [G.vertex_labels[i] for i in finite]
    expected = {"C9": all(m >= 9 for m in labels), "criterion": "every finite vertex label is at least 9"}
    if variant == "cycle":
        expected["C9"] = expected["C9"] and not G.edges
    prov = {"construction": "dyer", "variant": variant, "R": R, "graph": G.to_json()}
    return PresentationBundle(pres, prov, expected, G)


def _cylinder(G: LabeledGraph, S: Salvetti, i: int, m: int, R: int) -> Relator:
    """The m-cycle times a ball in the universal cover of the link's Salvetti complex."""
    X = S.complex
    rag = G.right_angled_part()
    link = sorted(rag.neighbors(i))
    C = make_complex(m, {1: [[k, (k + 1) % m] for k in range(m)]}, name=f"C{m}")
    if link:
        L = salvetti_of(rag, link)
        ball = develop_ball(L.complex, 0, R)
        B, bproj, bbound = ball.complex, ball.projection, ball.boundary
        # generator of each link cube: the clique of link generators
        inv = {v: k for k, v in L.cube_of.items()}
    else:
        B = CubeComplex(1, {})
        bproj = None
        bbound = frozenset()
        inv = {}
    P, index = product(C, B)
    images: Dict[int, list] = {0: [0] * P.n_vertices}
    rev = {v: k for k, v in index.items()}
    for n in range(1, P.dimension + 1):
        row = []
        for k in range(P.count(n)):
            p, a, q, b = rev[(n, k)]
            if q > 0:
                t, perm, flips = bproj.images[q][b]  # type: ignore[union-attr]
                link_clique = inv[(q, t)]
                # coordinates of the link cube in terms of generators
                gens_b = [None] * q
                for c in range(q):
                    gens_b[c] = link_clique[perm[c]]
                flips_b = list(flips)
            else:
                gens_b, flips_b = [], []
            gens_here = ([i] if p == 1 else []) + gens_b
            flips_here = ([0] if p == 1 else []) + flips_b
            clique = tuple(sorted(gens_here))
            row.append((S.cube_of[clique][1], tuple(clique.index(gx) for gx in gens_here), tuple(flips_here)))
        images[n] = row
    boundary = frozenset(index[(0, a, 0, b)][1] for a in range(C.n_vertices) for b in bbound)
    witness = EdgePath(index[(0, 0, 0, 0)][1], tuple((index[(1, k, 0, 0)][1], 0) for k in range(m)))
    return Relator(
        # every self-overlap of the full cylinder is a translate by its own
        # stabilizer, which the truncated ball cannot recognise as diagonal
        P, CubicalMap(P, X, images), name=f"Z_{i}", truncated=bool(link), radius=R, witnesses=[witness],
        homogeneous=True,
        boundary_vertices=boundary,
    )


# ----------------------------------------------------------------------
# the truncated cuboctahedron example


def _b3_elements() -> List[Tuple[int, int, int]]:
    out = []
    for perm in itertools.permutations((1, 2, 3)):
        for signs in itertools.product((1, -1), repeat=3):
            out.append(tuple(p * s for p, s in zip(perm, signs)))
    return sorted(out)


def _b3_act(w: Tuple[int, int, int], s: int) -> Tuple[int, int, int]:
    a, b, c = w
    if s == 0:
        return (-a, b, c)
    if s == 1:
        return (b, a, c)
    return (a, c, b)


@dataclass
class C8Example:
    bundle: PresentationBundle
    diagram: object
    hexagon_cubes: List[Tuple[int, ...]]
    octagons: List[List[int]]
    squares: List[Tuple[int, ...]]


def truncated_cuboctahedron() -> Tuple[List[Tuple[int, int, int]], Dict[int, List[Tuple[int, int]]]]:
    """Vertices as signed permutations; edge lists by generator (0: SO, 1: HO, 2: SH)."""
    elems = _b3_elements()
    idx = {w: i for i, w in enumerate(elems)}
    by_gen: Dict[int, List[Tuple[int, int]]] = {0: [], 1: [], 2: []}
    for w in elems:
        for s in (0, 1, 2):
            u = _b3_act(w, s)
            if idx[w] < idx[u]:
                by_gen[s].append((idx[w], idx[u]))
    return elems, by_gen


def _coset_cycle(w, gens: Tuple[int, int], idx) -> List[int]:
    cyc = [idx[w]]
    cur = w
    t = 0
    while True:
        cur = _b3_act(cur, gens[t % 2])
        t += 1
        if cur == w:
            break
        cyc.append(idx[cur])
    return cyc


def counterexample_c8():
    """The truncated cuboctahedron complex with octagon cones and its disc diagram."""
    from .diagrams import c8_diagram

    elems = _b3_elements()
    idx = {w: i for i, w in enumerate(elems)}
    nP = len(elems)
    squares: List[Tuple[int, ...]] = []
    hexagons: List[List[int]] = []
    octagons: List[List[int]] = []
    seen_sq, seen_hex, seen_oct = set(), set(), set()
    for w in elems:
        sq = frozenset(idx[u] for u in (w, _b3_act(w, 0), _b3_act(w, 2), _b3_act(_b3_act(w, 0), 2)))
        if sq not in seen_sq:
            seen_sq.add(sq)
            squares.append((idx[w], idx[_b3_act(w, 0)], idx[_b3_act(w, 2)], idx[_b3_act(_b3_act(w, 0), 2)]))
        hx = _coset_cycle(w, (1, 2), idx)
        if frozenset(hx) not in seen_hex:
            seen_hex.add(frozenset(hx))
            hexagons.append(hx)
        oc = _coset_cycle(w, (0, 1), idx)
        if frozenset(oc) not in seen_oct:
            seen_oct.add(frozenset(oc))
            octagons.append(oc)
    cubes_corners: List[Tuple[int, ...]] = []
    order = [1, 3, 2, 6, 4, 5]  # cube corners around the hexagonal equator
    nv = nP
    for hx in hexagons:
        corners: List[Optional[int]] = [None] * 8
        for c, v in zip(order, hx):
            corners[c] = v
        corners[0] = nv
        corners[7] = nv + 1
        nv += 2
        cubes_corners.append(tuple(corners))  # type: ignore[arg-type]
    X = from_corner_cubes(nv, squares + cubes_corners, name="c8")
    # edge lookup by vertex pair
    edge_of: Dict[FrozenSet[int], int] = {}
    for e in range(X.count(1)):
        edge_of[frozenset(X.edge_ends(e))] = e
    relators = []
    for k, oc in enumerate(octagons):
        n = len(oc)
        Y = make_complex(n, {1: [[i, (i + 1) % n] for i in range(n)]}, name=f"O{k}")
        vimg = list(oc)
        eimg = []
        for i in range(n):
            a, b = oc[i], oc[(i + 1) % n]
            e = edge_of[frozenset((a, b))]
            flip = 0 if X.edge_ends(e) == (a, b) else 1
            eimg.append((e, (0,), (flip,)))
        loop = EdgePath(0, tuple((i, 0) for i in range(n)))
        relators.append(Relator(Y, CubicalMap(Y, X, {0: vimg, 1: eimg}), name=f"octagon{k}", witnesses=[loop]))
    pres = CubicalPresentation(X, relators, name="truncated-cuboctahedron")
    expected = {"C8": True, "C9": False, "greendlinger": "VIOLATION"}
    prov = {"construction": "c8-example"}
    bundle = PresentationBundle(pres, prov, expected)
    diagram = c8_diagram(X, relators, squares, cubes_corners, octagons, edge_of)
    return C8Example(bundle, diagram, cubes_corners, octagons, squares)
