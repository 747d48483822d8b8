"""Cubical presentations, the coned-off complex, pieces and the C(p) certifier."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from .cube_core import (
    CubeComplex,
    CubeComplexError,
    FaceRef,
    Subcomplex,
    cube_boundary,
    extract,
    hyperplanes,
    is_connected,
    orientation_sign,
    require_valid,
)
from .maps import (
    CubicalMap,
    FiberComponent,
    compose,
    develop_ball,
    fiber_product,
    is_local_isometry,
)

# A dart traverses edge e starting from its end s.
Dart = Tuple[int, int]


class PresentationError(ValueError):
    """Raised for invalid presentations or unsupported requests."""


@dataclass
class EdgePath:
    """An edge path: a start vertex and a sequence of darts."""

    start: int
    darts: Tuple[Dart, ...]

    def __len__(self) -> int:
        return len(self.darts)

    def vertices(self, X: CubeComplex) -> List[int]:
        out = [self.start]
        cur = self.start
        for e, s in self.darts:
            ends = X.edge_ends(e)
            if ends[s] != cur:
                raise PresentationError(f"path leaves vertex {cur} along edge {e} from the wrong end")
            cur = ends[1 - s]
            out.append(cur)
        return out

    def is_closed(self, X: CubeComplex) -> bool:
        return self.vertices(X)[-1] == self.start

    def rotate(self, X: CubeComplex, i: int) -> "EdgePath":
        vs = self.vertices(X)
        return EdgePath(vs[i], self.darts[i:] + self.darts[:i])

    def to_json(self) -> dict:
        return {"start": self.start, "darts": [list(d) for d in self.darts]}


def path_from_word(X: CubeComplex, start: int, word: Sequence[Tuple[int, int]]) -> EdgePath:
    """Build a path from (edge, sign) letters; sign +1 runs end 0 to end 1."""
    return EdgePath(start, tuple((e, 0 if sgn > 0 else 1) for e, sgn in word))


@dataclass
class Relator:
    cone: CubeComplex
    map: CubicalMap
    name: str = ""
    truncated: bool = False
    radius: Optional[int] = None
    # self-overlaps induced by deck transformations are excluded
    homogeneous: bool = False
    # edges reading a single generator loop form extra pieces
    axes: bool = False
    # closed paths known to realize the systole
    witnesses: List[EdgePath] = field(default_factory=list)
    boundary_vertices: FrozenSet[int] = frozenset()


@dataclass
class CubicalPresentation:
    base: CubeComplex
    relators: List[Relator] = field(default_factory=list)
    name: str = ""

    def validate(self) -> List[dict]:
        problems: List[dict] = []
        require_valid(self.base)
        for i, r in enumerate(self.relators):
            if r.map.target is not self.base:
                problems.append({"relator": i, "kind": "map does not land in the base"})
                continue
            if not is_connected(r.cone):
                problems.append({"relator": i, "kind": "cone is not connected"})
            bad = r.map.validate()
            if bad:
                problems.append({"relator": i, "kind": "not a cubical map", "detail": bad[0]})
                continue
            rep = is_local_isometry(r.map)
            if not rep.ok and not r.truncated:
                problems.append({"relator": i, "kind": "not a local isometry", "detail": rep.failures[0]})
            elif not rep.ok:
                # truncation may only remove link simplices at boundary vertices
                inner = [w for w in rep.failures if w["vertex"] not in r.boundary_vertices]
                if inner:
                    problems.append({"relator": i, "kind": "not a local isometry", "detail": inner[0]})
        return problems

    def require_valid(self) -> None:
        problems = self.validate()
        if problems:
            raise PresentationError(f"invalid presentation: {problems[0]}")


def relator_to_json(r: Relator) -> dict:
    return {
        "name": r.name,
        "cone": r.cone.to_json(),
        "map": r.map.to_json(),
        "truncated": r.truncated,
        "radius": r.radius,
        "homogeneous": r.homogeneous,
        "axes": r.axes,
        "witnesses": [w.to_json() for w in r.witnesses],
        "boundary_vertices": sorted(r.boundary_vertices),
    }


def presentation_to_json(pres: CubicalPresentation) -> dict:
    return {
        "name": pres.name,
        "base": pres.base.to_json(),
        "relators": [relator_to_json(r) for r in pres.relators],
    }


def presentation_from_json(data: dict) -> CubicalPresentation:
    """Parse presentation JSON; errors name the failing path."""
    if not isinstance(data, dict) or "base" not in data:
        raise PresentationError("$: presentation JSON needs a 'base' field")
    try:
        X = CubeComplex.from_json(data["base"])
    except (CubeComplexError, TypeError, ValueError, KeyError, IndexError) as exc:
        raise PresentationError(f"$.base: {exc}") from exc
    rels = []
    for i, r in enumerate(data.get("relators", [])):
        where = f"$.relators[{i}]"
        try:
            Y = CubeComplex.from_json(r["cone"])
            f = CubicalMap.from_json(Y, X, r["map"])
            witnesses = [EdgePath(int(w["start"]), tuple((int(e), int(s)) for e, s in w["darts"]))
                         for w in r.get("witnesses", [])]
            rels.append(Relator(
                Y, f, name=str(r.get("name", "")), truncated=bool(r.get("truncated", False)),
                radius=r.get("radius"), homogeneous=bool(r.get("homogeneous", False)),
                axes=bool(r.get("axes", False)), witnesses=witnesses,
                boundary_vertices=frozenset(int(v) for v in r.get("boundary_vertices", [])),
            ))
        except (CubeComplexError, TypeError, ValueError, KeyError, IndexError) as exc:
            raise PresentationError(f"{where}: {exc}") from exc
    return CubicalPresentation(X, rels, name=str(data.get("name", "")))


# ----------------------------------------------------------------------
# coning off


@dataclass
class ConedOffComplex:
    """A CW complex given by cells per dimension and integral boundary vectors."""

    labels: Dict[int, List[tuple]]
    boundary: Dict[int, List[Dict[int, int]]]
    n_cones: int

    def counts(self) -> Tuple[int, ...]:
        top = max(self.labels) if self.labels else -1
        return tuple(len(self.labels.get(n, [])) for n in range(top + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * c for n, c in enumerate(self.counts()))

    @property
    def dimension(self) -> int:
        dims = [n for n, v in self.labels.items() if v]
        return max(dims) if dims else -1


def _image_key(r: Relator) -> tuple:
    f = r.map
    key = [tuple(sorted(set(f.images[0])))]
    for n in range(1, r.cone.dimension + 1):
        key.append(tuple(sorted(set(t for t, _, _ in f.images[n]))))
    return tuple(key)


def cone_off(pres: CubicalPresentation, reduced: bool = False) -> ConedOffComplex:
    """Cells of X together with a cone vertex and pyramids over each relator.

    The pyramid P(c) over a cube c of Y has boundary f(c) - P(dc), and the
    pyramid over a vertex y is an edge from the cone vertex to f(y).  With
    ``reduced`` set, relators whose maps have the same image are coned once.
    """
    X = pres.base
    for r in pres.relators:
        if r.truncated:
            raise PresentationError("cone_off requires compact relators")
    relators = list(pres.relators)
    if reduced:
        seen = set()
        kept = []
        for r in relators:
            key = _image_key(r)
            if key not in seen:
                seen.add(key)
                kept.append(r)
        relators = kept
    labels: Dict[int, List[tuple]] = {}
    boundary: Dict[int, List[Dict[int, int]]] = {}

    def add(n: int, label: tuple, bd: Dict[int, int]) -> int:
        labels.setdefault(n, []).append(label)
        boundary.setdefault(n, []).append({k: v for k, v in bd.items() if v})
        return len(labels[n]) - 1

    for n in range(X.dimension + 1):
        for k in range(X.count(n)):
            add(n, ("X", n, k), cube_boundary(X, n, k))
    for i, r in enumerate(relators):
        Y, f = r.cone, r.map
        apex = add(0, ("apex", i), {})
        pyr: Dict[Tuple[int, int], int] = {}
        for n in range(Y.dimension + 1):
            for k in range(Y.count(n)):
                bd: Dict[int, int] = {}
                if n == 0:
                    bd[f.images[0][k]] = bd.get(f.images[0][k], 0) + 1
                    bd[apex] = bd.get(apex, 0) - 1
                else:
                    t, perm, flips = f.images[n][k]
                    # the X-cells come first in dimension n, so ids coincide
                    bd[t] = bd.get(t, 0) + orientation_sign(perm, flips)
                    for fid, c in cube_boundary(Y, n, k).items():
                        j = pyr[(n - 1, fid)]
                        bd[j] = bd.get(j, 0) - c
                pyr[(n, k)] = add(n + 1, ("pyramid", i, n, k), bd)
    return ConedOffComplex(labels, boundary, len(relators))


# ----------------------------------------------------------------------
# pieces


@dataclass
class Piece:
    kind: str  # "cone", "wall" or "axis"
    cones: Tuple[int, int]  # (i, j) for cone-pieces, (i, hyperplane id) otherwise, (i, X-edge) for axes
    cone_index: int  # the cone Y_i the piece sits in
    complex: CubeComplex  # the component
    proj: CubicalMap  # component -> Y_i
    diameter: Optional[int]  # None when the piece is unbounded
    truncated: bool
    simply_connected: bool

    @property
    def edges(self) -> FrozenSet[int]:
        return frozenset(t for t, _, _ in self.proj.images.get(1, []))

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "cones": list(self.cones),
            "cone": self.cone_index,
            "cells": list(self.complex.counts()),
            "edges_in_cone": sorted(self.edges),
            "diameter": self.diameter,
            "truncated": self.truncated,
            "simply_connected": self.simply_connected,
        }


@dataclass
class PieceReport:
    pieces: List[Piece]
    skipped: List[dict]
    radius: int

    def for_cone(self, i: int) -> List[Piece]:
        return [p for p in self.pieces if p.cone_index == i]


def _graph_diameter(C: CubeComplex) -> int:
    g = nx.Graph()
    g.add_nodes_from(range(C.n_vertices))
    for e in range(C.count(1)):
        g.add_edge(*C.edge_ends(e))
    if C.n_vertices <= 1:
        return 0
    return max(max(d.values()) for _, d in nx.all_pairs_shortest_path_length(g))


def is_simply_connected(C: CubeComplex) -> bool:
    """True when the universal cover of the connected NPC complex C is C itself.

    A nontrivial loop based at v is a product of loops of length at most
    2*ecc(v)+1, so two lifts of one vertex appear within radius ecc(v)+1.
    """
    if C.n_vertices == 0:
        return True
    if C.dimension <= 1:
        return C.count(1) == C.n_vertices - 1
    g = nx.Graph()
    g.add_nodes_from(range(C.n_vertices))
    for e in range(C.count(1)):
        a, b = C.edge_ends(e)
        if a == b:
            return False
        g.add_edge(a, b)
    if C.count(1) >= C.n_vertices and C.dimension == 1:
        return False
    ecc = max(nx.single_source_shortest_path_length(g, 0).values())
    ball = develop_ball(C, 0, ecc + 1)
    imgs = ball.projection.images[0]
    return len(set(imgs)) == len(imgs)


def _piece_from_component(
    kind: str, cones: Tuple[int, int], i: int, comp: FiberComponent, proj: CubicalMap, rel: Relator, R: int
) -> Piece:
    C = comp.complex
    sc = is_simply_connected(C)
    truncated = False
    if rel.truncated:
        truncated = any(v in rel.boundary_vertices for v in proj.images[0])
    if sc:
        diameter: Optional[int] = _graph_diameter(C)
    else:
        diameter = None
        truncated = True
    return Piece(kind, cones, i, C, proj, diameter, truncated, sc)


def abstract_carrier(X: CubeComplex, H) -> Tuple[CubeComplex, CubicalMap, set]:
    """The carrier of a hyperplane as an I-bundle over it, immersed in X.

    Cells are full cells (c, d), one per cube c and direction d dual to H,
    and side cells ((c, d), s).  Returns the complex, its map to X and the
    set of edge ids of full cells (the edges crossing H).
    """
    cls = H.edge_class
    full: Dict[int, List[Tuple[int, int]]] = {}
    for n in range(1, X.dimension + 1):
        for k in range(X.count(n)):
            for d in range(n):
                e, _ = X.corner_edge(n, k, 0, d)
                if e in cls:
                    full.setdefault(n, []).append((k, d))
    # side cells have dimension n-1; merge them with full cells of that dimension
    side: Dict[int, List[Tuple[int, int, int]]] = {}
    for n, lst in full.items():
        for k, d in lst:
            for s in (0, 1):
                side.setdefault(n - 1, []).append((k, d, s))
    cell_id: Dict[int, Dict[tuple, int]] = {}
    order: Dict[int, List[tuple]] = {}
    top = max(full) if full else 0
    for n in range(top + 1):
        order[n] = [("full", k, d) for k, d in full.get(n, [])] + [("side", k, d, s) for k, d, s in side.get(n, [])]
        cell_id[n] = {lab: i for i, lab in enumerate(order[n])}

    def full_face(n: int, k: int, d: int, dd: int, ss: int):
        """Face of full cell (k, d) in direction dd != d, side ss."""
        fid, fperm, fflips = X.cubes[n][k][2 * dd + ss]
        j = d if d < dd else d - 1
        return fid, fperm[j], fflips[j], fperm, fflips

    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    images: Dict[int, list] = {}
    for n in range(top + 1):
        rows, imgs = [], []
        for lab in order[n]:
            if lab[0] == "full":
                _, k, d = lab
                faces = []
                for dd in range(n):
                    for ss in (0, 1):
                        if dd == d:
                            ref = (cell_id[n - 1][("side", k, d, ss)], tuple(range(n - 1)), (0,) * (n - 1))
                        else:
                            fid, nd, _, fperm, fflips = full_face(n, k, d, dd, ss)
                            ref = (cell_id[n - 1][("full", fid, nd)], tuple(fperm), tuple(fflips))
                        faces.append(ref)
                rows.append(tuple(faces))
                imgs.append((k, tuple(range(n)), (0,) * n))
            else:
                _, k, d, s = lab
                m = n + 1  # dimension of the cube c
                fid0, fperm0, fflips0 = X.cubes[m][k][2 * d + s]
                if n == 0:
                    imgs.append(fid0)
                    rows.append(())
                    continue
                imgs.append((fid0, tuple(fperm0), tuple(fflips0)))
                # coordinates of this side cell: coords of c other than d (ascending)
                coords = [c for c in range(m) if c != d]
                faces = []
                for a, dd in enumerate(coords):
                    for ss in (0, 1):
                        fid, nd, ndflip, fperm, fflips = full_face(m, k, d, dd, ss)
                        tgt = cell_id[n - 1][("side", fid, nd, s ^ ndflip)]
                        # local coords of the face: coords minus {d, dd}; in F they are
                        # fperm images minus nd, re-indexed below nd
                        rest = [c for c in range(m) if c not in (d, dd)]
                        perm, flips = [], []
                        for c in rest:
                            j = c if c < dd else c - 1
                            q = fperm[j]
                            perm.append(q if q < nd else q - 1)
                            flips.append(fflips[j])
                        faces.append((tgt, tuple(perm), tuple(flips)))
                rows.append(tuple(faces))
        if n == 0:
            images[0] = imgs
        else:
            cubes[n] = rows
            images[n] = imgs
    N = CubeComplex(len(order.get(0, [])), cubes, name=f"N(H{H.id})")
    crossing_edges = {cell_id[1][("full", k, 0)] for k, _ in full.get(1, [])}
    return N, CubicalMap(N, X, images), crossing_edges


def _axis_pieces(i: int, rel: Relator, X: CubeComplex) -> List[Piece]:
    Y, f = rel.cone, rel.map
    out = []
    loops = [e for e in range(X.count(1)) if X.edge_ends(e)[0] == X.edge_ends(e)[1]]
    for a in loops:
        edges = [e for e in range(Y.count(1)) if f.images[1][e][0] == a]
        if not edges:
            continue
        sub = Subcomplex.closure(Y, [(1, e) for e in edges])
        for comp in sub.components():
            C, ids = extract(comp)
            back = {n: {new: old for old, new in m.items()} for n, m in ids.items()}
            images: Dict[int, list] = {0: [back[0][j] for j in range(C.n_vertices)]}
            images[1] = [(back[1][j], (0,), (0,)) for j in range(C.count(1))]
            proj = CubicalMap(C, Y, images)
            out.append(Piece("axis", (i, a), i, C, proj, None, True, is_simply_connected(C)))
    return out


def enumerate_pieces(pres: CubicalPresentation, R: int = 2, max_cells: Optional[int] = None) -> PieceReport:
    """Cone-pieces, wall-pieces and (for cones that ask for them) axis pieces."""
    X = pres.base
    pieces: List[Piece] = []
    skipped: List[dict] = []
    rels = pres.relators
    for i in range(len(rels)):
        for j in range(i, len(rels)):
            if i == j and rels[i].homogeneous:
                skipped.append({"cones": [i, i], "reason": "self-overlaps are deck translates (homogeneous cone)"})
                continue
            fp = fiber_product(rels[j].map, rels[i].map, max_cells=max_cells, min_edges=1)
            for comp in fp.components:
                if i == j and comp.trivial:
                    continue
                if comp.complex.count(1) == 0:
                    continue
                pieces.append(_piece_from_component("cone", (i, j), i, comp, comp.proj_right, rels[i], R))
                if i != j:
                    # the same overlap seen from Y_j
                    pieces.append(_piece_from_component("cone", (j, i), j, comp, comp.proj_left, rels[j], R))
    hs = hyperplanes(X)
    for H in hs:
        N, nmap, crossing = abstract_carrier(X, H)
        for i, rel in enumerate(rels):
            fp = fiber_product(nmap, rel.map, max_cells=max_cells, min_edges=1)
            for comp in fp.components:
                if comp.complex.count(1) == 0:
                    continue
                crossed = any(comp.proj_left.images[1][e][0] in crossing for e in range(comp.complex.count(1)))
                if crossed:
                    continue
                pieces.append(_piece_from_component("wall", (i, H.id), i, comp, comp.proj_right, rel, R))
    for i, rel in enumerate(rels):
        if rel.axes:
            pieces.extend(_axis_pieces(i, rel, X))
    return PieceReport(pieces, skipped, R)


# ----------------------------------------------------------------------
# paths inside pieces


def _lift_states(piece: Piece, dart: Dart, states: FrozenSet[int]) -> FrozenSet[int]:
    """Piece vertices reached by lifting one dart from the given piece vertices."""
    C, proj = piece.complex, piece.proj
    e, s = dart
    out = set()
    for k in range(C.count(1)):
        t, _, fl = proj.images[1][k]
        if t != e:
            continue
        ks = s ^ fl[0]
        a = C.edge_ends(k)
        if a[ks] in states:
            out.add(a[1 - ks])
    return frozenset(out)


def _piece_runs(piece: Piece, Y: CubeComplex, path: EdgePath) -> List[Tuple[int, int]]:
    """All intervals [a, b) of the path (b > a) that lift into the piece."""
    vs = path.vertices(Y)
    proj = piece.proj
    fibers: Dict[int, FrozenSet[int]] = {}
    for w, y in enumerate(proj.images[0]):
        fibers.setdefault(y, set()).add(w)  # type: ignore[union-attr]
    out = []
    n = len(path.darts)
    for a in range(n):
        states = frozenset(fibers.get(vs[a], ()))
        for b in range(a, n):
            states = _lift_states(piece, path.darts[b], states)
            if not states:
                break
            out.append((a, b + 1))
    return out


@dataclass
class Decomposition:
    count: Optional[int]  # None when the path is not covered by pieces
    intervals: List[Tuple[int, int, int]]  # (start, end, piece index)
    rotation: int = 0

    def to_json(self) -> dict:
        return {
            "pieces": self.count,
            "rotation": self.rotation,
            "intervals": [list(t) for t in self.intervals],
        }


def _interval_dp(n: int, runs: Dict[Tuple[int, int], int]) -> Decomposition:
    INF = math.inf
    best = [INF] * (n + 1)
    back: List[Optional[Tuple[int, int]]] = [None] * (n + 1)
    best[0] = 0
    ends_at: Dict[int, List[Tuple[int, int]]] = {}
    for (a, b), p in runs.items():
        ends_at.setdefault(b, []).append((a, p))
    for b in range(1, n + 1):
        for a, p in ends_at.get(b, []):
            if best[a] + 1 < best[b]:
                best[b] = best[a] + 1
                back[b] = (a, p)
    if n == 0:
        return Decomposition(0, [])
    if best[n] == INF:
        return Decomposition(None, [])
    out = []
    b = n
    while b > 0:
        a, p = back[b]  # type: ignore[misc]
        out.append((a, b, p))
        b = a
    return Decomposition(int(best[n]), out[::-1])


def decompose_path(
    pres: CubicalPresentation,
    path: EdgePath,
    pieces: Optional[PieceReport] = None,
    cone: Optional[int] = None,
    cyclic: bool = False,
    R: int = 2,
) -> Decomposition:
    """Fewest pieces whose paths concatenate to ``path``.

    With ``cone`` set the path lives in that cone, otherwise in the base
    complex.  For closed paths, ``cyclic`` minimizes over all rotations.
    """
    if pieces is None:
        pieces = enumerate_pieces(pres, R)
    if cone is None:
        T = pres.base
        cand = []
        for p in pieces.pieces:
            rel = pres.relators[p.cone_index]
            cand.append(Piece(p.kind, p.cones, p.cone_index, p.complex, compose(rel.map, p.proj), p.diameter, p.truncated, p.simply_connected))
    else:
        if not (0 <= cone < len(pres.relators)):
            raise PresentationError(f"unknown cone {cone}")
        T = pres.relators[cone].cone
        cand = [p for p in pieces.pieces if p.cone_index == cone]
    for e, s in path.darts:
        if not (0 <= e < T.count(1)) or s not in (0, 1):
            raise PresentationError(f"path uses an edge {e} that is not in the complex")
    if not (0 <= path.start < max(T.n_vertices, 1)):
        raise PresentationError("path starts outside the complex")
    try:
        path.vertices(T)
    except PresentationError:
        raise
    if cyclic and not path.is_closed(T):
        raise PresentationError("cyclic decomposition needs a closed path")
    n = len(path.darts)
    if n == 0:
        return Decomposition(0, [])
    rotations = range(n) if cyclic else [0]
    best: Optional[Decomposition] = None
    for r in rotations:
        p = path.rotate(T, r) if r else path
        runs: Dict[Tuple[int, int], int] = {}
        for idx, piece in enumerate(cand):
            for iv in _piece_runs(piece, T, p):
                runs.setdefault(iv, idx)
        dec = _interval_dp(n, runs)
        dec.rotation = r
        if dec.count is not None and (best is None or best.count is None or dec.count < best.count):
            best = dec
        if best is None:
            best = dec
    assert best is not None
    return best


# ----------------------------------------------------------------------
# systole


@dataclass
class SystoleResult:
    kind: str  # "exact", "lower-bound" or "no-essential-cycle"
    length: Optional[int]
    witness: Optional[EdgePath]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "length": self.length,
            "witness": self.witness.to_json() if self.witness else None,
        }


def _graph_girth(Y: CubeComplex) -> Tuple[Optional[int], Optional[EdgePath]]:
    best: Optional[int] = None
    witness = None
    adj: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(Y.n_vertices)}
    for e in range(Y.count(1)):
        a, b = Y.edge_ends(e)
        if a == b:
            return 1, EdgePath(a, ((e, 0),))
        adj[a].append((b, e, 0))
        adj[b].append((a, e, 1))
    for root in range(Y.n_vertices):
        dist = {root: 0}
        par: Dict[int, Tuple[int, Dart]] = {}
        q = deque([root])
        while q:
            u = q.popleft()
            if best is not None and 2 * dist[u] + 1 >= best:
                break
            for w, e, s in adj[u]:
                if u in par and par[u][1][0] == e:
                    continue
                if w not in dist:
                    dist[w] = dist[u] + 1
                    par[w] = (u, (e, s))
                    q.append(w)
                else:
                    length = dist[u] + dist[w] + 1
                    if best is None or length < best:
                        # walk both branches back to the root
                        left: List[Dart] = []
                        x = u
                        while x != root:
                            px, d = par[x]
                            left.append(d)
                            x = px
                        right: List[Dart] = []
                        x = w
                        while x != root:
                            px, d = par[x]
                            right.append(d)
                            x = px
                        path = left[::-1] + [(e, s)] + [(de, 1 - ds) for de, ds in right]
                        # a genuine cycle needs the branches to split at the root
                        if left and right and left[-1] == right[-1]:
                            continue
                        best = length
                        witness = EdgePath(root, tuple(path))
    return best, witness


def systole(Y: CubeComplex, A: int = 8) -> SystoleResult:
    """Length of a shortest essential closed edge path in Y.

    For graphs this is the girth.  In higher dimension a closed path is
    essential exactly when its lift to the universal cover is not closed,
    so the search develops balls of radius up to ``A`` and looks for a
    second lift of the base vertex.
    """
    require_valid(Y)
    if not is_connected(Y):
        raise PresentationError("systole needs a connected complex")
    if Y.dimension <= 1:
        g, w = _graph_girth(Y)
        if g is None:
            return SystoleResult("no-essential-cycle", None, None)
        return SystoleResult("exact", g, w)
    best: Optional[int] = None
    witness = None
    complete = True
    for y in range(Y.n_vertices):
        ball = develop_ball(Y, y, A)
        if ball.boundary:
            complete = False
        imgs = ball.projection.images[0]
        cands = [u for u in range(ball.complex.n_vertices) if imgs[u] == y and u != ball.base]
        if not cands:
            continue
        u = min(cands, key=lambda t: (ball.distance[t], t))
        d = ball.distance[u]
        if best is None or d < best:
            best = d
            witness = _ball_path(ball, u)
    if best is not None:
        return SystoleResult("exact", best, witness)
    if complete:
        return SystoleResult("no-essential-cycle", None, None)
    return SystoleResult("lower-bound", A + 1, None)


def _ball_path(ball, target: int) -> EdgePath:
    B = ball.complex
    adj: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(B.n_vertices)}
    for e in range(B.count(1)):
        a, b = B.edge_ends(e)
        adj[a].append((b, e, 0))
        adj[b].append((a, e, 1))
    par: Dict[int, Tuple[int, Dart]] = {}
    seen = {ball.base}
    q = deque([ball.base])
    while q:
        u = q.popleft()
        for w, e, s in adj[u]:
            if w not in seen:
                seen.add(w)
                par[w] = (u, (e, s))
                q.append(w)
    darts: List[Dart] = []
    x = target
    while x != ball.base:
        px, d = par[x]
        darts.append(d)
        x = px
    darts.reverse()
    proj = ball.projection
    out = []
    for e, s in darts:
        t, _, fl = proj.images[1][e]
        out.append((t, s ^ fl[0]))
    return EdgePath(proj.images[0][ball.base], tuple(out))


# ----------------------------------------------------------------------
# the C(p) certifier


@dataclass
class CpCertificate:
    p: int
    verdict: str  # "CERTIFIED", "REFUTED" or "INCONCLUSIVE"
    per_cone: List[dict]
    refutation: Optional[dict]
    reason: str
    radius: int

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "verdict": self.verdict,
            "per_cone": self.per_cone,
            "refutation": self.refutation,
            "reason": self.reason,
            "radius": self.radius,
        }


def _longest_run(piece: Piece, Y: CubeComplex, loop: EdgePath) -> int:
    """Longest subpath of a closed loop (read cyclically) lifting into the piece."""
    doubled = EdgePath(loop.start, loop.darts + loop.darts)
    best = 0
    n = len(loop.darts)
    for a, b in _piece_runs(piece, Y, doubled):
        if a < n:
            best = max(best, min(b - a, n))
    return best


def certify_Cp(
    pres: CubicalPresentation,
    p: int,
    R: int = 2,
    A: int = 8,
    pieces: Optional[PieceReport] = None,
) -> CpCertificate:
    """Certify or refute C(p) via systoles against piece sizes in each cone.

    A cone is certified when ceil(systole / L) >= p, where L bounds the
    length of a piece-path: the diameter for cone and wall pieces and, for
    generator-axis pieces, the longest run of a systolic loop inside them.
    A refutation is a systolic loop covered by fewer than p pieces.
    """
    if not isinstance(p, int) or p < 1:
        raise PresentationError("p must be a positive integer")
    pres.require_valid()
    if pieces is None:
        pieces = enumerate_pieces(pres, R)
    per_cone: List[dict] = []
    all_ok = True
    reasons: List[str] = []
    refutation = None
    for i, rel in enumerate(pres.relators):
        Y = rel.cone
        sys_res = systole(Y, A)
        loops = list(rel.witnesses) or ([sys_res.witness] if sys_res.witness else [])
        mine = pieces.for_cone(i)
        entry: dict = {"cone": i, "name": rel.name, "systole": sys_res.length, "systole_kind": sys_res.kind, "pieces": len(mine)}
        if sys_res.kind == "no-essential-cycle":
            entry.update({"max_piece_length": None, "bound": None, "status": "no essential loop"})
            per_cone.append(entry)
            continue
        L = 0
        unbounded = []
        for idx, pc in enumerate(mine):
            if pc.kind == "axis":
                for loop in loops:
                    L = max(L, _longest_run(pc, Y, loop))
            elif pc.diameter is None:
                unbounded.append(idx)
            else:
                if pc.truncated and rel.truncated:
                    unbounded.append(idx)
                else:
                    L = max(L, pc.diameter)
        entry["max_piece_length"] = L
        if unbounded:
            entry["bound"] = None
            entry["status"] = "unbounded or truncated pieces"
            all_ok = False
            reasons.append(f"cone {i}: {len(unbounded)} unbounded or truncated pieces")
        elif sys_res.kind != "exact":
            bound = math.ceil(sys_res.length / L) if L else None
            entry["bound"] = bound
            entry["status"] = "systole is only a lower bound"
            if L and bound is not None and bound >= p:
                entry["status"] = "ok"
            elif not L:
                entry["status"] = "ok"
            else:
                all_ok = False
                reasons.append(f"cone {i}: systole lower bound too small")
        else:
            bound = math.ceil(sys_res.length / L) if L else None
            entry["bound"] = bound
            if bound is None or bound >= p:
                entry["status"] = "ok"
            else:
                entry["status"] = "bound below p"
                all_ok = False
                reasons.append(f"cone {i}: ceil({sys_res.length}/{L}) = {bound} < {p}")
        # look for a refutation among the systolic loops.  A truncated cone
        # piece lies inside a piece of the full cones, but a truncated wall
        # piece may come from a hyperplane that crosses the full cone, so
        # those never refute
        if refutation is None:
            sound = PieceReport(
                [pc for pc in pieces.pieces
                 if not (pc.kind == "wall" and pc.truncated and pres.relators[pc.cone_index].truncated)],
                pieces.skipped, pieces.radius,
            )
            for loop in loops:
                dec = decompose_path(pres, loop, sound, cone=i, cyclic=True)
                if dec.count is not None and dec.count < p:
                    refutation = {"cone": i, "loop": loop.to_json(), "decomposition": dec.to_json()}
                    break
        per_cone.append(entry)
    if refutation is not None:
        return CpCertificate(p, "REFUTED", per_cone, refutation, "essential loop splits into fewer than p pieces", R)
    if all_ok:
        return CpCertificate(p, "CERTIFIED", per_cone, None, "every cone satisfies the systole bound", R)
    return CpCertificate(p, "INCONCLUSIVE", per_cone, None, "; ".join(reasons), R)
