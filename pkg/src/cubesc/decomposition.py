"""Three-way decompositions of finite models of the cubical part, their
structure graphs and nerves, admissible orderings and intersection checks."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from .cube_core import (
    CubeComplex,
    Subcomplex,
    extract,
    hyperplanes,
    is_locally_convex,
    require_valid,
)
from .maps import CubicalMap, _assemble, _bfs, _Developer
from .presentation import CubicalPresentation, PieceReport

KINDS = ("cone", "carrier", "untethered")
TIE_BREAKS = ("lowest-id", "highest-id", "seeded-random")


class DecompositionError(ValueError):
    """Raised for inputs outside the preconditions of a decomposition operation."""


# ----------------------------------------------------------------------
# finite models of the cubical part


@dataclass
class CoverModel:
    """A finite region of the cover of X in which every cone closes up.

    ``interior`` holds the vertices at which every cube and every cone
    translate has been developed; properties are only asserted there.
    ``cones`` lists (relator index, subcomplex) for each cone translate.
    """

    complex: CubeComplex
    base: int
    radius: int
    interior: FrozenSet[int]
    projection: Optional[CubicalMap]
    cones: List[Tuple[int, Subcomplex]]
    embedded: List[bool] = field(default_factory=list)

    def is_interior(self, sub: Subcomplex) -> bool:
        return sub.vertices() <= self.interior


def model_from_cones(X: CubeComplex, cones: Sequence[Tuple[int, Subcomplex]], radius: int = 0,
                     interior: Optional[Iterable[int]] = None) -> CoverModel:
    """Wrap a hand-built finite complex and cone subcomplexes as a model."""
    require_valid(X)
    verts = frozenset(range(X.n_vertices)) if interior is None else frozenset(interior)
    for _, sub in cones:
        if sub.parent is not X:
            raise DecompositionError("cone subcomplex belongs to a different complex")
    return CoverModel(X, 0, radius, verts, None, list(cones), [True] * len(cones))


def _corner_in_target(x: int, perm: Sequence[int], flips: Sequence[int]) -> int:
    y = 0
    for i in range(len(perm)):
        y |= (((x >> i) & 1) ^ flips[i]) << perm[i]
    return y


def _develop_cone(dev: _Developer, Y: CubeComplex, f: CubicalMap, y0: int, u: int) -> Dict[int, int]:
    """Develop a translate of Y through ``u`` with ``y0`` sitting at ``u``."""
    at: Dict[int, List[Tuple[int, int, int]]] = {w: [] for w in range(Y.n_vertices)}
    for n in range(1, Y.dimension + 1):
        for k in range(Y.count(n)):
            for x, w in enumerate(Y.corners(n, k)):
                at[w].append((n, k, x))
    phi = {y0: dev.find(u)}
    done = set()
    queue = deque([y0])
    while queue:
        y = queue.popleft()
        for n, k, x in at[y]:
            if (n, k) in done:
                continue
            done.add((n, k))
            t, perm, flips = f.images[n][k]
            dev.develop_cube(n, t, _corner_in_target(x, perm, flips), dev.find(phi[y]))
            verts = dev.cubes[-1][2]
            for xx, w in enumerate(Y.corners(n, k)):
                got = verts[_corner_in_target(xx, perm, flips)]
                if w in phi:
                    if dev.find(phi[w]) != dev.find(got):
                        dev.pending.append((phi[w], got))
                        dev._drain()
                else:
                    phi[w] = got
                    queue.append(w)
    for n in range(Y.dimension + 1):
        if n == 0:
            continue
        for k in range(Y.count(n)):
            if (n, k) not in done:
                raise DecompositionError("cone is not connected")
    return phi


def _develop_faces(dev: _Developer, X: CubeComplex) -> None:
    seen = set()
    i = 0
    while i < len(dev.cubes):
        n, k, verts = dev.cubes[i]
        i += 1
        key = (n, k, dev.find(verts[0]))
        if key in seen or n < 2:
            seen.add(key)
            continue
        seen.add(key)
        for d in range(n):
            for s in (0, 1):
                fid, _, fflips = X.cubes[n][k][2 * d + s]
                x = s << d
                for c in range(n):
                    if c != d:
                        x |= fflips[c if c < d else c - 1] << c
                w0 = dev.find(verts[x])
                if (n - 1, fid, w0) not in seen:
                    dev.develop_cube(n - 1, fid, 0, w0)


def develop_model(pres: CubicalPresentation, v: int, R: int, max_cells: Optional[int] = None) -> CoverModel:
    """Develop the cubical part of the coned-off universal cover around a lift of ``v``.

    Cubes of X are developed at every vertex within distance R of the base,
    and so is every cone translate through such a vertex; closing the cones
    identifies vertices as in the cover of X with the cone subgroups killed.
    Identifications forced only from outside the developed region are not seen.
    """
    X = pres.base
    require_valid(X)
    if R < 0:
        raise DecompositionError("radius must be non-negative")
    at_vertex: Dict[int, List[Tuple[int, int, int]]] = {w: [] for w in range(X.n_vertices)}
    for n in range(1, X.dimension + 1):
        for k in range(X.count(n)):
            for x, w in enumerate(X.corners(n, k)):
                at_vertex[w].append((n, k, x))
    over: List[Dict[int, List[int]]] = []
    for rel in pres.relators:
        pre: Dict[int, List[int]] = {}
        for y, w in enumerate(rel.map.images[0]):
            pre.setdefault(w, []).append(y)
        over.append(pre)
    dev = _Developer(X)
    base = dev.new(v)
    processed: set = set()
    copies: List[Tuple[int, Dict[int, int], int, int]] = []  # (relator, phi, first cube, end cube)
    covered: Dict[Tuple[int, int], List[int]] = {}
    while True:
        dist = _bfs(dev, dev.find(base), R)
        todo = [u for u, d in sorted(dist.items(), key=lambda t: (t[1], t[0])) if d <= R and u not in processed]
        if not todo:
            break
        for u in todo:
            u = dev.find(u)
            if u in processed:
                continue
            for n, k, x in at_vertex[dev.image[u]]:
                dev.develop_cube(n, k, x, dev.find(u))
            for i, rel in enumerate(pres.relators):
                for y in over[i].get(dev.image[u], []):
                    if any(dev.find(w) == dev.find(u) for w in covered.get((i, y), [])):
                        continue
                    first = len(dev.cubes)
                    phi = _develop_cone(dev, rel.cone, rel.map, y, u)
                    copies.append((i, phi, first, len(dev.cubes)))
                    for yy, w in phi.items():
                        covered.setdefault((i, yy), []).append(w)
            processed = {dev.find(p) for p in processed}
            processed.add(dev.find(u))
            if max_cells is not None and len(dev.cubes) > max_cells:
                raise DecompositionError(f"development exceeds {max_cells} cells")
    _develop_faces(dev, X)
    base = dev.find(base)
    dist = _bfs(dev, base, 10 ** 9)
    roots = sorted({dev.find(u) for u in range(len(dev.parent))}, key=lambda u: (dist.get(u, 10 ** 9), u))
    vid = {u: i for i, u in enumerate(roots)}
    M, proj, cid = _assemble(dev, X, vid, f"model({pres.name or 'X*'},{v},{R})")
    interior = frozenset(vid[dev.find(p)] for p in processed)
    cones: List[Tuple[int, Subcomplex]] = []
    embedded: List[bool] = []
    seen = set()
    for i, phi, first, end in copies:
        cells: Dict[int, set] = {0: {vid[dev.find(w)] for w in phi.values()}}
        for n, k, verts in dev.cubes[first:end]:
            cells.setdefault(n, set()).add(cid[n][(n, k, dev.find(verts[0]))])
        key = (i, tuple(sorted((n, tuple(sorted(c))) for n, c in cells.items())))
        if key in seen:
            continue
        seen.add(key)
        sub = Subcomplex(M, cells)
        cones.append((i, sub))
        Y = pres.relators[i].cone
        embedded.append(len(sub.vertices()) == Y.n_vertices and all(
            len(sub.cells.get(n, ())) == Y.count(n) for n in range(1, Y.dimension + 1)))
    return CoverModel(M, vid[base], R, interior, proj, cones, embedded)


# ----------------------------------------------------------------------
# the three-way decomposition


@dataclass
class Member:
    kind: str  # one of KINDS
    sub: Subcomplex
    label: tuple  # ("cone", relator, translate) / ("carrier", hyperplane id) / ("untethered", index)
    interior: bool
    embedded: bool = True

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "label": list(self.label),
            "interior": self.interior,
            "embedded": self.embedded,
            "cells": self.sub.to_json(),
        }


@dataclass
class ThreeWayDecomposition:
    model: CoverModel
    members: List[Member]
    pieces: List[Subcomplex]
    tethered: FrozenSet[int]  # hyperplane ids of the model whose carriers meet a piece
    uncovered: List[Tuple[int, int]]  # interior cubes of dimension >= 1 in no member
    piece_mismatches: List[dict]

    def of_kind(self, kind: str) -> List[int]:
        return [i for i, m in enumerate(self.members) if m.kind == kind]

    @property
    def covers(self) -> bool:
        return not self.uncovered

    def to_json(self) -> dict:
        return {
            "model": {
                "cells": list(self.model.complex.counts()),
                "radius": self.model.radius,
                "interior_vertices": len(self.model.interior),
            },
            "members": [m.to_json() for m in self.members],
            "counts": {k: len(self.of_kind(k)) for k in KINDS},
            "pieces": len(self.pieces),
            "tethered_hyperplanes": sorted(self.tethered),
            "uncovered": [list(c) for c in self.uncovered],
            "piece_mismatches": self.piece_mismatches,
        }


def _crosses(H_edges: FrozenSet[int], sub: Subcomplex) -> bool:
    return bool(H_edges & sub.cells.get(1, frozenset()))


def _by_vertex(subs: Sequence[Subcomplex]) -> Dict[int, List[int]]:
    at: Dict[int, List[int]] = {}
    for j, s in enumerate(subs):
        for v in s.vertices():
            at.setdefault(v, []).append(j)
    return at


def _meeting_pairs(left: Sequence[Subcomplex], right: Sequence[Subcomplex]) -> List[Tuple[int, int]]:
    at = _by_vertex(right)
    pairs = set()
    for a, s in enumerate(left):
        for v in s.vertices():
            for b in at.get(v, ()):
                pairs.add((a, b))
    return sorted(pairs)


def _model_pieces(model: CoverModel, hs) -> List[Tuple[str, int, Subcomplex]]:
    """Cone-cone and wall-cone intersections inside the model, including single vertices."""
    out: List[Tuple[str, int, Subcomplex]] = []
    subs = [sub for _, sub in model.cones]
    for a, b in _meeting_pairs(subs, subs):
        if a < b:
            for comp in subs[a].intersection(subs[b]).components():
                out.append(("cone", a, comp))
    for h, a in _meeting_pairs([H.carrier for H in hs], subs):
        H = hs[h]
        if _crosses(H.edge_class, subs[a]):
            continue
        for comp in H.carrier.intersection(subs[a]).components():
            out.append(("wall", a, comp))
    return out


def _check_against_report(pres: CubicalPresentation, model: CoverModel, found, report: PieceReport) -> List[dict]:
    """Each model piece with an edge must read edges of an enumerated piece of its cone."""
    if model.projection is None:
        return []
    bad = []
    for kind, a, comp in found:
        edges = comp.cells.get(1, frozenset())
        if not edges:
            continue
        i = model.cones[a][0]
        rel = pres.relators[i]
        allowed = {rel.map.images[1][e][0] for p in report.for_cone(i) for e in p.edges}
        seen = {model.projection.images[1][e][0] for e in edges}
        if not seen <= allowed:
            bad.append({"kind": kind, "cone": a, "edges": sorted(edges)})
    return bad


def decompose(pres: CubicalPresentation, model: CoverModel, pieces: Optional[PieceReport] = None) -> ThreeWayDecomposition:
    """Cones, supporting hyperplane carriers and untethered components of a model.

    A cube is tethered when it lies in the carrier of a hyperplane whose
    carrier meets a piece of the model; pieces are intersections of distinct
    cone translates and intersections of carriers with cones they do not cross.
    """
    if pieces is not None and model.radius < pieces.radius:
        raise DecompositionError(
            f"model radius {model.radius} is smaller than the piece enumeration radius {pieces.radius}")
    M = model.complex
    hs = hyperplanes(M)
    found = _model_pieces(model, hs)
    piece_subs = [comp for _, _, comp in found]
    touched = frozenset().union(*(p.vertices() for p in piece_subs))
    tethered = {H.id for H in hs if H.carrier.vertices() & touched}
    hull_cells: List[Tuple[int, int]] = []
    cube_classes: Dict[Tuple[int, int], List[int]] = {}
    edge_h = {}
    for H in hs:
        for e in H.edge_class:
            edge_h[e] = H.id
    for n in range(1, M.dimension + 1):
        for k in range(M.count(n)):
            ids = sorted({edge_h[M.corner_edge(n, k, 0, d)[0]] for d in range(n)})
            cube_classes[(n, k)] = ids
            if not any(h in tethered for h in ids):
                hull_cells.append((n, k))
    hull = Subcomplex.closure(M, hull_cells)
    untethered = [c for c in hull.components() if c.cells.get(1)]
    hull_edges = hull.cells.get(1, frozenset())

    members: List[Member] = []
    for t, (i, sub) in enumerate(model.cones):
        emb = model.embedded[t] if t < len(model.embedded) else True
        members.append(Member("cone", sub, ("cone", i, t), model.is_interior(sub), emb))
    for H in hs:
        if any(H.edge_class <= sub.cells.get(1, frozenset()) for _, sub in model.cones):
            continue
        if H.edge_class <= hull_edges:
            continue
        emb = not (H.self_crossing or H.one_sided or H.self_osculating)
        members.append(Member("carrier", H.carrier, ("carrier", H.id), model.is_interior(H.carrier), emb))
    for j, comp in enumerate(untethered):
        members.append(Member("untethered", comp, ("untethered", j), model.is_interior(comp)))

    covered = {(n, k) for m in members for n, ids in m.sub.cells.items() for k in ids}
    uncovered = []
    for n in range(1, M.dimension + 1):
        for k in range(M.count(n)):
            if (n, k) not in covered and set(M.corners(n, k)) <= model.interior:
                uncovered.append((n, k))
    mismatches = _check_against_report(pres, model, found, pieces) if pieces is not None else []
    return ThreeWayDecomposition(model, members, piece_subs, frozenset(tethered), uncovered, mismatches)


def decomposition_from_members(X: CubeComplex, members: Sequence[Tuple[str, Subcomplex]]) -> ThreeWayDecomposition:
    """A decomposition given directly by tagged subcomplexes of one complex."""
    out = []
    for j, (kind, sub) in enumerate(members):
        if kind not in KINDS:
            raise DecompositionError(f"unknown member kind {kind!r}")
        if sub.parent is not X:
            raise DecompositionError("member belongs to a different complex")
        out.append(Member(kind, sub, (kind, j), True))
    model = model_from_cones(X, [(0, m.sub) for m in out if m.kind == "cone"])
    return ThreeWayDecomposition(model, out, [], frozenset(), [], [])


# ----------------------------------------------------------------------
# structure graph and nerve


@dataclass
class StructureGraph:
    kinds: List[str]
    edges: FrozenSet[Tuple[int, int]]
    loops: List[int] = field(default_factory=list)  # members that fail to embed
    multi_edges: List[Tuple[int, int, int]] = field(default_factory=list)  # (u, v, components)
    caveats: List[str] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.kinds)

    @property
    def simplicial(self) -> bool:
        return not self.loops and not self.multi_edges

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def distances(self, v0: int) -> Dict[int, int]:
        return dict(nx.single_source_shortest_path_length(self.graph(), v0))

    def to_json(self) -> dict:
        return {
            "vertices": [[v, k] for v, k in enumerate(self.kinds)],
            "edges": sorted([list(e) for e in self.edges]),
            "loops": self.loops,
            "multi_edges": [list(t) for t in self.multi_edges],
            "simplicial": self.simplicial,
            "caveats": self.caveats,
        }


def structure_graph(dec: ThreeWayDecomposition) -> StructureGraph:
    """One vertex per member and one edge per nonempty pairwise intersection.

    Loops record members that fail to embed, multi-edges record disconnected
    intersections; both are counted only among interior members.
    """
    ms = dec.members
    edges = set()
    multi = []
    skipped = 0
    for a, b in _meeting_pairs([m.sub for m in ms], [m.sub for m in ms]):
        if a >= b:
            continue
        inter = ms[a].sub.intersection(ms[b].sub)
        edges.add((a, b))
        if not (ms[a].interior and ms[b].interior):
            skipped += 1
            continue
        comps = len(inter.components())
        if comps > 1:
            multi.append((a, b, comps))
    loops = [a for a, m in enumerate(ms) if m.interior and not m.embedded]
    caveats = []
    boundary = sum(1 for m in ms if not m.interior)
    if boundary:
        caveats.append(f"{boundary} members reach the model boundary; {skipped} of their intersections were not checked")
    return StructureGraph([m.kind for m in ms], frozenset(edges), loops, multi, caveats)


@dataclass
class Nerve:
    """Simplices are the subsets, of size at most ``max_card``, of some facet."""

    n: int
    facets: List[FrozenSet[int]]
    max_card: int = 6

    def __post_init__(self) -> None:
        self._of: Dict[int, List[int]] = {v: [] for v in range(self.n)}
        for i, F in enumerate(self.facets):
            for v in F:
                self._of[v].append(i)

    def contains(self, simplex: Iterable[int]) -> bool:
        s = frozenset(simplex)
        if not s or len(s) > self.max_card:
            return False
        first = min(s)
        return any(s <= self.facets[i] for i in self._of.get(first, []))

    def link_vertices(self, simplex: Iterable[int]) -> FrozenSet[int]:
        """Vertices u outside the simplex with simplex + {u} in the nerve."""
        s = frozenset(simplex)
        if len(s) + 1 > self.max_card:
            return frozenset()
        out: set = set()
        for i in self._of.get(min(s), []):
            if s <= self.facets[i]:
                out |= self.facets[i]
        return frozenset(out - s)

    def simplices(self, k: Optional[int] = None) -> List[Tuple[int, ...]]:
        """All simplices (or those with k vertices) as sorted tuples."""
        sizes = range(1, self.max_card + 1) if k is None else [k]
        out = set()
        for F in self.facets:
            for m in sizes:
                if m <= len(F):
                    out.update(itertools.combinations(sorted(F), m))
        return sorted(out, key=lambda t: (len(t), t))

    def one_skeleton(self) -> FrozenSet[Tuple[int, int]]:
        return frozenset(self.simplices(2)) if self.max_card >= 2 else frozenset()

    def to_json(self) -> dict:
        return {
            "vertices": self.n,
            "max_card": self.max_card,
            "facets": sorted(sorted(F) for F in self.facets),
        }

    @classmethod
    def from_cover(cls, sets: Sequence[Iterable], max_card: int = 6) -> "Nerve":
        """Nerve of a family of finite sets: one facet per point of the union."""
        at: Dict[object, set] = {}
        for i, s in enumerate(sets):
            for p in s:
                at.setdefault(p, set()).add(i)
        facets = _maximal([frozenset(v) for v in at.values()])
        for i in range(len(sets)):
            if not any(i in F for F in facets):
                facets.append(frozenset([i]))
        return cls(len(sets), facets, max_card)


def _maximal(sets: List[FrozenSet[int]]) -> List[FrozenSet[int]]:
    uniq = sorted(set(sets), key=lambda s: (-len(s), sorted(s)))
    out: List[FrozenSet[int]] = []
    for s in uniq:
        if not any(s <= t for t in out):
            out.append(s)
    return out


def nerve(dec: ThreeWayDecomposition, max_card: int = 6) -> Nerve:
    """Subsets of members with a common vertex."""
    return Nerve.from_cover([m.sub.vertices() for m in dec.members], max_card)


def graph_from_nerve(N: Nerve, kinds: Optional[Sequence[str]] = None) -> StructureGraph:
    kinds = list(kinds) if kinds is not None else ["cone"] * N.n
    return StructureGraph(kinds, N.one_skeleton())


# ----------------------------------------------------------------------
# admissible orderings


@dataclass
class OrderingStep:
    rank: int
    simplex: Tuple[int, ...]  # the least simplex, listed in increasing rank
    candidates: Tuple[int, ...]  # unranked vertices it admits
    chosen: int

    def to_json(self) -> dict:
        return {"rank": self.rank, "simplex": list(self.simplex), "candidates": list(self.candidates), "chosen": self.chosen}


@dataclass
class AdmissibleOrdering:
    v0: int
    phi: Dict[int, int]
    trace: List[OrderingStep]
    tie_break: str
    seed: Optional[int] = None

    def order(self) -> List[int]:
        return sorted(self.phi, key=self.phi.get)

    def monotonicity_violations(self, graph: StructureGraph) -> List[Tuple[int, int]]:
        """Pairs with phi(v) < phi(w) but d(v, v0) > d(w, v0)."""
        d = graph.distances(self.v0)
        seq = self.order()
        return [(v, w) for i, v in enumerate(seq) for w in seq[i + 1:] if d[v] > d[w]]

    def to_json(self) -> dict:
        return {
            "v0": self.v0,
            "tie_break": self.tie_break,
            "seed": self.seed,
            "ordering": [[v, self.phi[v]] for v in self.order()],
            "trace": [s.to_json() for s in self.trace],
        }


def _least_simplex(N: Nerve, ranked: List[int], phi: Dict[int, int],
                   adj: Dict[int, set], start: int = 0) -> Tuple[Optional[Tuple[Tuple[int, ...], FrozenSet[int]]], int]:
    """Least ranked simplex, in the Lusin-Sierpinski order, admitting an unranked vertex.

    Extensions of a simplex precede it and siblings compare by rank, so the
    least candidate is found by descending into the first admitting extension.
    A simplex that admits nothing has no admitting extension either.  Ranked
    vertices before ``start`` are known to admit nothing; the returned index
    is the new such bound.
    """

    def free(s: Tuple[int, ...]) -> FrozenSet[int]:
        return frozenset(u for u in N.link_vertices(s) if u not in phi)

    for pos in range(start, len(ranked)):
        a = ranked[pos]
        if all(u in phi for u in adj[a]):
            continue
        cur = (a,)
        here = free(cur)
        while True:
            nxt = None
            for b in ranked[phi[cur[-1]] + 1:]:
                if any(b not in adj[c] for c in cur):
                    continue
                cand = cur + (b,)
                got = free(cand)
                if got:
                    nxt = (cand, got)
                    break
            if nxt is None:
                return (cur, here), pos
            cur, here = nxt
    return None, len(ranked)


def _adjacency(graph: StructureGraph) -> Dict[int, set]:
    adj: Dict[int, set] = {v: set() for v in range(graph.n)}
    for a, b in graph.edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def admissible_ordering(graph: StructureGraph, N: Nerve, v0: int, tie_break: str = "lowest-id",
                        seed: Optional[int] = None) -> AdmissibleOrdering:
    """Rank vertices by repeatedly extending the least simplex that still admits an unranked vertex."""
    if tie_break not in TIE_BREAKS:
        raise DecompositionError(f"unknown tie-break {tie_break!r}; expected one of {TIE_BREAKS}")
    if not (0 <= v0 < graph.n):
        raise DecompositionError(f"unknown base vertex {v0}")
    if graph.kinds[v0] != "cone":
        raise DecompositionError(f"base vertex {v0} is a {graph.kinds[v0]} vertex, not a cone")
    d = graph.distances(v0)
    unreachable = sorted(set(range(graph.n)) - set(d))
    if unreachable:
        raise DecompositionError(f"structure graph is disconnected; unreachable vertices: {unreachable}")
    if graph.edges != N.one_skeleton():
        raise DecompositionError("nerve 1-skeleton differs from the structure graph")
    rng = random.Random(seed)
    adj = _adjacency(graph)
    phi = {v0: 0}
    ranked = [v0]
    trace: List[OrderingStep] = []
    start = 0
    while len(phi) < graph.n:
        got, start = _least_simplex(N, ranked, phi, adj, start)
        if got is None:
            raise DecompositionError("no simplex admits an unranked vertex")
        simplex, cands = got
        pool = sorted(cands)
        if tie_break == "lowest-id":
            u = pool[0]
        elif tie_break == "highest-id":
            u = pool[-1]
        else:
            u = rng.choice(pool)
        phi[u] = len(ranked)
        ranked.append(u)
        trace.append(OrderingStep(phi[u], simplex, tuple(pool), u))
    return AdmissibleOrdering(v0, phi, trace, tie_break, seed if tie_break == "seeded-random" else None)


def all_orderings(graph: StructureGraph, N: Nerve, v0: int, limit: int = 100000) -> List[Dict[int, int]]:
    """Every ordering the procedure can produce, over all choices of vertex."""
    out: List[Dict[int, int]] = []
    adj = _adjacency(graph)

    def rec(phi: Dict[int, int], ranked: List[int]) -> None:
        if len(out) >= limit:
            return
        if len(phi) == graph.n:
            out.append(dict(phi))
            return
        got, _ = _least_simplex(N, ranked, phi, adj)
        if got is None:
            return
        for u in sorted(got[1]):
            phi[u] = len(ranked)
            ranked.append(u)
            rec(phi, ranked)
            ranked.pop()
            del phi[u]

    rec({v0: 0}, [v0])
    return out


# ----------------------------------------------------------------------
# intersections


def collapse(sub: Subcomplex, budget: int = 100000) -> Tuple[bool, int]:
    """Greedy elementary collapses; True when a single vertex remains.

    A codimension-one face of exactly one cube (counted with multiplicity)
    is free and is removed together with that cube.
    """
    X = sub.parent
    live = {n: set(ids) for n, ids in sub.cells.items()}
    cofaces: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    for n, ids in live.items():
        if n == 0:
            continue
        for k in ids:
            for fid, _, _ in X.cubes[n][k]:
                cofaces.setdefault((n - 1, fid), []).append((n, k))
    count = {c: len(v) for c, v in cofaces.items()}
    stack = [c for c, m in count.items() if m == 1]
    steps = 0
    while stack and steps < budget:
        f = stack.pop()
        if count.get(f) != 1 or f[1] not in live.get(f[0], ()):
            continue
        c = next(cc for cc in cofaces[f] if cc[1] in live.get(cc[0], ()))
        live[f[0]].discard(f[1])
        live[c[0]].discard(c[1])
        steps += 1
        n, k = c
        for fid, _, _ in X.cubes[n][k]:
            g = (n - 1, fid)
            count[g] -= 1
            if count[g] == 1 and fid in live.get(n - 1, ()):
                stack.append(g)
        count[f] = 0
        # the free face is gone too, so its own faces lose a coface
        if f[0] >= 1:
            for fid, _, _ in X.cubes[f[0]][f[1]]:
                g = (f[0] - 1, fid)
                count[g] -= 1
                if count[g] == 1 and fid in live.get(f[0] - 1, ()):
                    stack.append(g)
    remaining = sum(len(v) for v in live.values())
    return remaining == 1 and len(live.get(0, ())) == 1, steps


def _first_betti_positive(sub: Subcomplex) -> bool:
    from .homology import chain_complex, homology

    C, _ = extract(sub)
    return homology(chain_complex(C)).degree(1)[0] > 0 if C.dimension >= 1 else False


def simple_connectivity(sub: Subcomplex, budget: int = 100000) -> str:
    """``proven`` by collapsing, ``refuted`` when H1 has positive rank, else ``inconclusive``."""
    if collapse(sub, budget)[0]:
        return "proven"
    if _first_betti_positive(sub):
        return "refuted"
    return "inconclusive"


PROFILES = ("empty", "connected-and-simply-connected-proven", "connected-only", "disconnected")


def intersection_profile(a: Subcomplex, b: Subcomplex, budget: int = 100000) -> str:
    if a.parent is not b.parent:
        raise DecompositionError("subcomplexes belong to different complexes")
    inter = a.intersection(b)
    if inter.is_empty():
        return "empty"
    if len(inter.components()) > 1:
        return "disconnected"
    if collapse(inter, budget)[0]:
        return "connected-and-simply-connected-proven"
    return "connected-only"


@dataclass
class HellyResult:
    pairwise: List[List[bool]]
    applicable: bool
    total_nonempty: Optional[bool]
    holds: Optional[bool]
    components: Optional[int]
    simply_connected: Optional[str]
    total_vertices: List[int]

    def to_json(self) -> dict:
        return {
            "pairwise": self.pairwise,
            "applicable": self.applicable,
            "total_nonempty": self.total_nonempty,
            "holds": self.holds,
            "components": self.components,
            "simply_connected": self.simply_connected,
            "total_vertices": self.total_vertices,
        }


def helly_check(members: Sequence[Subcomplex], budget: int = 100000) -> HellyResult:
    """Pairwise intersections, the total intersection and its connectivity."""
    if not members:
        raise DecompositionError("no members given")
    parent = members[0].parent
    for j, m in enumerate(members):
        if m.parent is not parent:
            raise DecompositionError("members belong to different complexes")
        ok, witness = is_locally_convex(m)
        if not ok:
            raise DecompositionError(f"member {j} is not locally convex: {witness}")
    k = len(members)
    pair = [[not members[a].intersection(members[b]).is_empty() for b in range(k)] for a in range(k)]
    if not all(all(row) for row in pair):
        return HellyResult(pair, False, None, None, None, None, [])
    total = members[0]
    for m in members[1:]:
        total = total.intersection(m)
    if total.is_empty():
        return HellyResult(pair, True, False, False, 0, None, [])
    comps = len(total.components())
    sc = simple_connectivity(total, budget) if comps == 1 else None
    return HellyResult(pair, True, True, True, comps, sc, sorted(total.vertices()))


def convex_hull(sub: Subcomplex) -> Subcomplex:
    """Smallest locally convex subcomplex containing ``sub`` (add cubes spanned by corners)."""
    X = sub.parent
    cells = {n: set(ids) for n, ids in sub.cells.items()}
    changed = True
    while changed:
        changed = False
        edges = cells.setdefault(1, set())
        for n in range(2, X.dimension + 1):
            have = cells.setdefault(n, set())
            for k in range(X.count(n)):
                if k in have:
                    continue
                for spokes in X.corner_edge_sets(n, k):
                    if spokes <= edges:
                        closed = Subcomplex.closure(X, [(n, k)])
                        for m, ids in closed.cells.items():
                            cells.setdefault(m, set()).update(ids)
                        changed = True
                        break
    return Subcomplex(X, cells, check=False)


def geodesic(X: CubeComplex, a: int, b: int) -> Subcomplex:
    """A shortest edge path from a to b as a subcomplex (lowest-id tie-breaks)."""
    g = nx.Graph()
    g.add_nodes_from(range(X.n_vertices))
    for e in range(X.count(1)):
        u, v = X.edge_ends(e)
        if not g.has_edge(u, v) or e < g[u][v]["id"]:
            g.add_edge(u, v, id=e)
    path = nx.shortest_path(g, a, b)
    cells = [(0, a)] + [(1, g[u][v]["id"]) for u, v in zip(path, path[1:])]
    return Subcomplex.closure(X, cells)
