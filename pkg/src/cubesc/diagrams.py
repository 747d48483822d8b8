"""Disc diagrams over cubical presentations: features, reduction and the trichotomy."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .cube_core import CubeComplex
from .maps import develop_ball
from .presentation import CubicalPresentation, EdgePath, PieceReport, decompose_path, enumerate_pieces

# A dart (e, s) runs along diagram edge e starting from its end s.
Dart = Tuple[int, int]
OUTER = -1

SCHEMA_VERSION = 1


class DiagramError(ValueError):
    """Raised for malformed diagrams and for operations whose hypotheses fail."""


def rev(d: Dart) -> Dart:
    return (d[0], 1 - d[1])


@dataclass
class Cell:
    kind: str  # "square" or "cone"
    darts: Tuple[Dart, ...]
    cone: Optional[int] = None  # relator index of a cone-cell
    lift: Optional[int] = None  # cone vertex under the tail of darts[0]
    square: Optional[int] = None  # square of the base complex, when labelled

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "darts": [list(d) for d in self.darts]}
        if self.kind == "cone":
            out["cone"] = self.cone
            out["lift"] = self.lift
        elif self.square is not None:
            out["square"] = self.square
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Cell":
        return cls(
            data["kind"],
            tuple((int(e), int(s)) for e, s in data["darts"]),
            data.get("cone"),
            data.get("lift"),
            data.get("square"),
        )


@dataclass
class DiscDiagram:
    """A disc diagram stored as face cycles on the sphere.

    Every dart is used by exactly one inner cell or by the boundary cycle,
    which plays the role of the face at infinity.  ``labels[e]`` is the dart
    of the base complex read along edge ``e`` from its end 0 to its end 1.
    """

    n_vertices: int
    edges: List[Tuple[int, int]]
    cells: List[Cell]
    boundary: Tuple[Dart, ...]
    base: int = 0
    labels: Optional[List[Dart]] = None

    # -- incidence -------------------------------------------------------
    def tail(self, d: Dart) -> int:
        return self.edges[d[0]][d[1]]

    def head(self, d: Dart) -> int:
        return self.edges[d[0]][1 - d[1]]

    def label(self, d: Dart) -> Dart:
        if self.labels is None:
            raise DiagramError("diagram is unlabelled")
        e, s = self.labels[d[0]]
        return (e, s ^ d[1])

    def face_of(self) -> Dict[Dart, int]:
        out: Dict[Dart, int] = {}
        for i, c in enumerate(self.cells):
            for j, d in enumerate(c.darts):
                out[d] = i
        for d in self.boundary:
            out[d] = OUTER
        return out

    def face_darts(self, f: int) -> Tuple[Dart, ...]:
        return self.boundary if f == OUTER else self.cells[f].darts

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def rotation(self) -> Dict[int, List[Dart]]:
        """Cyclic order of outgoing darts at every vertex, read off the faces."""
        nxt: Dict[Dart, Dart] = {}
        for f in [OUTER] + list(range(len(self.cells))):
            ds = self.face_darts(f)
            for j, d in enumerate(ds):
                nxt[ds[(j + 1) % len(ds)]] = rev(d)
        out: Dict[int, List[Dart]] = {v: [] for v in range(self.n_vertices)}
        seen = set()
        for e in range(len(self.edges)):
            for s in (0, 1):
                d = (e, s)
                if d in seen or d not in nxt:
                    continue
                cyc = [d]
                seen.add(d)
                x = nxt[d]
                while x != d and x not in seen:
                    cyc.append(x)
                    seen.add(x)
                    x = nxt.get(x, d)
                out[self.tail(d)].append(cyc)  # type: ignore[arg-type]
        return out  # type: ignore[return-value]

    # -- validation ------------------------------------------------------
    def validate(self, pres: Optional[CubicalPresentation] = None) -> List[str]:
        problems: List[str] = []
        V, E = self.n_vertices, len(self.edges)
        if V < 1:
            return ["a diagram needs at least one vertex"]
        for e, (a, b) in enumerate(self.edges):
            if not (0 <= a < V and 0 <= b < V):
                problems.append(f"edge {e} has an unknown endpoint")
        if problems:
            return problems
        if not (0 <= self.base < V):
            problems.append("base vertex is unknown")
        used: Dict[Dart, str] = {}
        for f in [OUTER] + list(range(len(self.cells))):
            ds = self.face_darts(f)
            name = "boundary" if f == OUTER else f"cell {f}"
            if f != OUTER:
                c = self.cells[f]
                if c.kind not in ("square", "cone"):
                    problems.append(f"{name} has unknown kind {c.kind!r}")
                if not ds:
                    problems.append(f"{name} is empty")
                    continue
                if c.kind == "square" and len(ds) != 4:
                    problems.append(f"{name} is a square with {len(ds)} sides")
            for d in ds:
                if not (0 <= d[0] < E) or d[1] not in (0, 1):
                    problems.append(f"{name} uses an unknown dart {d}")
                    return problems
                if d in used:
                    problems.append(f"dart {d} is used by {used[d]} and {name}")
                used[d] = name
            for j, d in enumerate(ds):
                if self.head(d) != self.tail(ds[(j + 1) % len(ds)]):
                    problems.append(f"{name} is not a closed path at position {j}")
        if self.boundary and self.tail(self.boundary[0]) != self.base:
            problems.append("boundary path does not start at the base vertex")
        if len(used) != 2 * E:
            problems.append("some dart lies on no face")
        if problems:
            return problems
        if E == 0 and V != 1:
            problems.append("an edgeless diagram must be a single vertex")
        rot = self.rotation()
        for v in range(V):
            cycles = rot[v]
            if len(cycles) > 1:
                problems.append(f"vertex {v} is pinched (its link is not a circle)")
            if not cycles and E > 0:
                problems.append(f"vertex {v} is isolated")
        g = nx.Graph()
        g.add_nodes_from(range(V))
        g.add_edges_from(self.edges)
        if not nx.is_connected(g):
            problems.append("diagram is not connected")
        chi = V - E + len(self.cells) + 1
        if chi != 2:
            problems.append(f"V - E + F = {chi - 1} over the diagram cells, so it is not a disc")
        if problems or pres is None or self.labels is None:
            return problems
        return problems + _label_problems(self, pres)

    def require_valid(self, pres: Optional[CubicalPresentation] = None) -> None:
        problems = self.validate(pres)
        if problems:
            raise DiagramError(f"invalid diagram: {problems[0]}")

    # -- reading ---------------------------------------------------------
    def boundary_word(self) -> str:
        """Canonical serialization of the boundary path as read in the base complex."""
        if self.labels is None:
            data = {"length": len(self.boundary)}
        else:
            data = {"labels": [list(self.label(d)) for d in self.boundary]}
        return json.dumps(data, sort_keys=True, separators=(",", ":"))

    def to_json(self) -> dict:
        rot = self.rotation()
        return {
            "schema_version": SCHEMA_VERSION,
            "vertices": self.n_vertices,
            "edges": [list(e) for e in self.edges],
            "cells": [c.to_json() for c in self.cells],
            "boundary": {"start": self.base, "darts": [list(d) for d in self.boundary]},
            "rotation": {str(v): [list(d) for cyc in rot[v] for d in cyc] for v in range(self.n_vertices)},
            "labels": None if self.labels is None else [list(x) for x in self.labels],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiscDiagram":
        labels = data.get("labels")
        return cls(
            int(data["vertices"]),
            [(int(a), int(b)) for a, b in data["edges"]],
            [Cell.from_json(c) for c in data["cells"]],
            tuple((int(e), int(s)) for e, s in data["boundary"]["darts"]),
            int(data["boundary"].get("start", 0)),
            None if labels is None else [(int(e), int(s)) for e, s in labels],
        )


@dataclass(frozen=True, order=True)
class Complexity:
    cone_cells: int
    squares: int

    def as_tuple(self) -> Tuple[int, int]:
        return (self.cone_cells, self.squares)


def complexity(D: DiscDiagram) -> Complexity:
    cones = sum(1 for c in D.cells if c.kind == "cone")
    return Complexity(cones, len(D.cells) - cones)


# ----------------------------------------------------------------------
# labels


_READINGS: Dict[int, Tuple[CubeComplex, Dict[Tuple[Dart, ...], int]]] = {}


def square_cycle(X: CubeComplex, k: int) -> Tuple[Dart, ...]:
    """Boundary darts of square k read from corner 0 through corners 1, 3, 2."""
    out = []
    for x, d in ((0, 0), (1, 1), (3, 0), (2, 1)):
        e, end = X.corner_edge(2, k, x, d)
        out.append((e, end))
    return tuple(out)


def square_readings(X: CubeComplex) -> Dict[Tuple[Dart, ...], int]:
    """Every rotation and reversal of every square boundary, mapped to the square."""
    hit = _READINGS.get(id(X))
    if hit is not None and hit[0] is X:
        return hit[1]
    out: Dict[Tuple[Dart, ...], int] = {}
    for k in range(X.count(2)):
        cyc = square_cycle(X, k)
        back = tuple(rev(d) for d in reversed(cyc))
        for c in (cyc, back):
            for r in range(4):
                out.setdefault(c[r:] + c[:r], k)
    _READINGS[id(X)] = (X, out)
    return out


def _cone_steps(pres: CubicalPresentation, i: int) -> Dict[Tuple[int, Dart], Tuple[Dart, int]]:
    """(cone vertex, base dart) -> (cone dart, cone vertex at its head)."""
    rel = pres.relators[i]
    Y = rel.cone
    out: Dict[Tuple[int, Dart], Tuple[Dart, int]] = {}
    for ye in range(Y.count(1)):
        t, _, fl = rel.map.images[1][ye]
        ends = Y.edge_ends(ye)
        for ys in (0, 1):
            out.setdefault((ends[ys], (t, ys ^ fl[0])), ((ye, ys), ends[1 - ys]))
    return out


def cone_lift(D: DiscDiagram, pres: CubicalPresentation, f: int, start: int = 0) -> Optional[List[Tuple[Dart, int]]]:
    """Lift of cone-cell f's boundary (rotated to ``start``) into its cone.

    Returns (cone dart, cone vertex at its tail) per step, or None when the
    labels do not lift from the recorded cone vertex.
    """
    c = D.cells[f]
    steps = _cone_steps(pres, c.cone)  # type: ignore[arg-type]
    y = c.lift
    out: List[Tuple[Dart, int]] = []
    for d in c.darts:
        hit = steps.get((y, D.label(d)))  # type: ignore[arg-type]
        if hit is None:
            return None
        out.append((hit[0], y))  # type: ignore[arg-type]
        y = hit[1]
    if y != c.lift:
        return None
    return out[start:] + out[:start]


def _relift(D: DiscDiagram, pres: CubicalPresentation, f: int, start: int, y: int) -> Optional[List[Tuple[Dart, int]]]:
    """Lift of cone-cell f's boundary, rotated to ``start``, beginning at cone vertex y.

    Returns None unless the lift exists and closes up at y.
    """
    c = D.cells[f]
    steps = _cone_steps(pres, c.cone)  # type: ignore[arg-type]
    darts = c.darts[start:] + c.darts[:start]
    out: List[Tuple[Dart, int]] = []
    cur = y
    for d in darts:
        hit = steps.get((cur, D.label(d)))
        if hit is None:
            return None
        out.append((hit[0], cur))
        cur = hit[1]
    return out if cur == y else None


def _label_problems(D: DiscDiagram, pres: CubicalPresentation) -> List[str]:
    X = pres.base
    problems: List[str] = []
    image: Dict[int, int] = {}
    for e, (xe, xs) in enumerate(D.labels or []):
        if not (0 <= xe < X.count(1)):
            return [f"edge {e} is labelled by an unknown edge"]
        ends = X.edge_ends(xe)
        for v, w in ((D.edges[e][0], ends[xs]), (D.edges[e][1], ends[1 - xs])):
            if image.setdefault(v, w) != w:
                problems.append(f"vertex {v} has two images")
    if len(D.labels or []) != len(D.edges):
        problems.append("one label per edge is required")
    if problems:
        return problems
    readings = square_readings(X)
    for f, c in enumerate(D.cells):
        word = tuple(D.label(d) for d in c.darts)
        if c.kind == "square":
            k = readings.get(word)
            if k is None or (c.square is not None and c.square != k):
                problems.append(f"cell {f} does not read the boundary of its square")
        else:
            if c.cone is None or not (0 <= c.cone < len(pres.relators)):
                problems.append(f"cell {f} names an unknown cone")
                continue
            if c.lift is None or not (0 <= c.lift < pres.relators[c.cone].cone.n_vertices):
                problems.append(f"cell {f} has no valid lift vertex")
                continue
            if cone_lift(D, pres, f) is None:
                problems.append(f"cell {f} does not lift to a closed path in cone {c.cone}")
    return problems


def _square_id(D: DiscDiagram, pres: CubicalPresentation, f: int) -> Optional[int]:
    c = D.cells[f]
    if c.square is not None:
        return c.square
    return square_readings(pres.base).get(tuple(D.label(d) for d in c.darts))


# ----------------------------------------------------------------------
# dual curves


@dataclass
class DualCurve:
    edges: List[int]  # dual edges in order
    squares: List[Tuple[int, int]]  # (square cell, 0 or 1 for the midcube)
    closed: bool
    ends: Tuple[Optional[int], Optional[int]]  # face beyond each end (OUTER or a cone-cell)


def dual_curves(D: DiscDiagram) -> List[DualCurve]:
    """Maximal concatenations of square midcubes, in a deterministic order."""
    inc: Dict[int, List[Tuple[int, int]]] = {}
    for f, c in enumerate(D.cells):
        if c.kind != "square":
            continue
        for q in (0, 1):
            for j in (q, q + 2):
                inc.setdefault(c.darts[j][0], []).append((f, q))
    used: set = set()
    curves: List[DualCurve] = []
    face = D.face_of()

    def walk(e0: int) -> Tuple[List[int], List[Tuple[int, int]]]:
        es, ms = [e0], []
        e = e0
        while True:
            nxt = [m for m in inc.get(e, []) if m not in used]
            if not nxt:
                return es, ms
            m = nxt[0]
            used.add(m)
            f, q = m
            a, b = D.cells[f].darts[q][0], D.cells[f].darts[q + 2][0]
            e = b if a == e else a
            ms.append(m)
            es.append(e)

    def end_face(e: int, m: Optional[Tuple[int, int]]) -> Optional[int]:
        for s in (0, 1):
            g = face[(e, s)]
            if m is None or g != m[0]:
                if g == OUTER or D.cells[g].kind == "cone":
                    return g
        return None

    order = sorted(inc)
    for e in order:
        if len(inc[e]) == 1 and not all(m in used for m in inc[e]):
            es, ms = walk(e)
            curves.append(DualCurve(es, ms, False, (end_face(es[0], ms[0]), end_face(es[-1], ms[-1]))))
    for e in order:
        if any(m not in used for m in inc[e]):
            es, ms = walk(e)
            curves.append(DualCurve(es, ms, True, (None, None)))
    return curves


# ----------------------------------------------------------------------
# features


FEATURE_KINDS = (
    "bigon",
    "monogon",
    "nonogon",
    "spur",
    "corner",
    "cornsquare",
    "shell",
    "candidate_shell",
    "wide_cell",
    "cancellable_pair",
    "combinable_pair",
    "absorbable_square",
    "inessential_cone_cell",
)

# features that witness a failure of one of the reducedness conditions
REDUCIBILITY = ("bigon", "cancellable_pair", "combinable_pair", "absorbable_square", "inessential_cone_cell")


@dataclass
class Feature:
    kind: str
    cells: Tuple[int, ...] = ()
    data: dict = field(default_factory=dict)

    def key(self) -> tuple:
        return (FEATURE_KINDS.index(self.kind), self.cells, json.dumps(self.data, sort_keys=True))

    def to_json(self) -> dict:
        return {"kind": self.kind, "cells": list(self.cells), **self.data}

    @property
    def blocks_reduction(self) -> bool:
        if self.kind == "cornsquare":
            return self.data.get("on") != "boundary"
        return self.kind in REDUCIBILITY


def revalidate(D: DiscDiagram, feat: Feature, pres: Optional[CubicalPresentation] = None, pieces: Optional[PieceReport] = None) -> bool:
    """Recheck a feature against its definition on the given diagram."""
    return any(f.key() == feat.key() for f in detect_features(D, pres, pieces))


def _exit(D: DiscDiagram, face: Dict[Dart, int], f: int, j: int, limit: int) -> Optional[Tuple[int, int, int]]:
    """Follow the dual curve leaving square f through its side j.

    Returns (face where it stops, position of the crossed dart there, steps)
    or None when the curve never leaves the squares.
    """
    d = D.cells[f].darts[j]
    steps = 0
    while steps <= limit:
        o = rev(d)
        g = face[o]
        if g == OUTER or D.cells[g].kind == "cone":
            return g, D.face_darts(g).index(o), steps
        ds = D.cells[g].darts
        d = ds[(ds.index(o) + 2) % 4]
        steps += 1
    return None


def _essential(pres: CubicalPresentation, i: int, ydarts: Sequence[Tuple[Dart, int]]) -> bool:
    """Whether a closed cone path is essential: its lift to the universal cover is open."""
    rel = pres.relators[i]
    if not ydarts:
        return False
    start = ydarts[0][1]
    R = (len(ydarts) + 1) // 2 + 1
    ball = develop_ball(rel.cone, start, R)
    B = ball.complex
    step: Dict[Tuple[int, Dart], int] = {}
    for e in range(B.count(1)):
        t, _, fl = ball.projection.images[1][e]
        a = B.edge_ends(e)
        for s in (0, 1):
            step[(a[s], (t, s ^ fl[0]))] = a[1 - s]
    # walk halfway forward and halfway backward, then compare endpoints
    n = len(ydarts)
    half = n // 2
    u = ball.base
    for d, _ in ydarts[:half]:
        u = step[(u, d)]
    w = ball.base
    for d, _ in reversed(ydarts[half:]):
        w = step[(w, rev(d))]
    return u != w


def detect_features(
    D: DiscDiagram,
    pres: Optional[CubicalPresentation] = None,
    pieces: Optional[PieceReport] = None,
) -> List[Feature]:
    """All boundary features and square or cone pathologies of the diagram.

    Label-dependent features (cancellable, combinable and absorbable cells,
    inessential cone-cells, shell innerpaths) need ``pres`` and labels.
    """
    D.require_valid(pres)
    face = D.face_of()
    feats: List[Feature] = []
    labelled = pres is not None and D.labels is not None

    # dual curve pathologies
    curves = dual_curves(D)
    owner: Dict[Tuple[int, int], int] = {}
    for ci, cv in enumerate(curves):
        for m in cv.squares:
            owner[m] = ci
        if cv.closed:
            feats.append(Feature("nonogon", tuple(sorted({m[0] for m in cv.squares})), {"curve": ci, "edges": cv.edges}))
    crossings: Dict[Tuple[int, int], List[int]] = {}
    for f, c in enumerate(D.cells):
        if c.kind != "square":
            continue
        a, b = owner[(f, 0)], owner[(f, 1)]
        if a == b:
            feats.append(Feature("monogon", (f,), {"curve": a}))
        else:
            crossings.setdefault((min(a, b), max(a, b)), []).append(f)
    for (a, b), sq in sorted(crossings.items()):
        if len(sq) >= 2:
            feats.append(Feature("bigon", tuple(sorted(sq)), {"curves": [a, b]}))

    # spurs
    for v in range(D.n_vertices):
        if D.degree(v) == 1:
            feats.append(Feature("spur", (), {"vertex": v}))

    # corners and cornsquares
    limit = len(D.cells) + 1
    for f, c in enumerate(D.cells):
        if c.kind != "square":
            continue
        for j in range(4):
            p = _exit(D, face, f, j, limit)
            q = _exit(D, face, f, (j + 1) % 4, limit)
            if p is None or q is None or p[0] != q[0]:
                continue
            g = p[0]
            L = len(D.face_darts(g))
            if p[1] == q[1] or (p[1] - q[1]) % L not in (1, L - 1):
                continue
            on = "boundary" if g == OUTER else g
            kind = "corner" if (g == OUTER and p[2] == 0 and q[2] == 0) else "cornsquare"
            outer = [list(D.face_darts(g)[p[1]]), list(D.face_darts(g)[q[1]])]
            feats.append(Feature(kind, (f,), {"corner": j, "on": on, "outerpath": outer}))

    # shells
    for f, c in enumerate(D.cells):
        if c.kind != "cone":
            continue
        n = len(c.darts)
        out = [face[rev(d)] == OUTER for d in c.darts]
        if not any(out):
            continue
        if all(out):
            feats.append(Feature("shell", (f,), {"outer": [0, n], "inner_pieces": 0}))
            continue
        starts = [j for j in range(n) if out[j] and not out[j - 1]]
        if len(starts) != 1:
            continue
        a = starts[0]
        k = 0
        while out[(a + k) % n]:
            k += 1
        inner_start = (a + k) % n
        span = {"outer": [a, k], "inner": [inner_start, n - k]}
        if not labelled:
            feats.append(Feature("candidate_shell", (f,), span))
            continue
        lift = cone_lift(D, pres, f, inner_start)  # type: ignore[arg-type]
        assert lift is not None
        inner = lift[: n - k]
        path = EdgePath(inner[0][1], tuple(d for d, _ in inner))
        if pieces is None:
            feats.append(Feature("candidate_shell", (f,), span))
            continue
        dec = decompose_path(pres, path, pieces, cone=c.cone)  # type: ignore[arg-type]
        span["inner_pieces"] = dec.count
        if dec.count is not None and dec.count <= 4:
            feats.append(Feature("shell", (f,), span))
        else:
            feats.append(Feature("wide_cell", (f,), span))

    if labelled:
        feats.extend(_label_features(D, pres, face))  # type: ignore[arg-type]
    feats.sort(key=Feature.key)
    return feats


def _label_features(D: DiscDiagram, pres: CubicalPresentation, face: Dict[Dart, int]) -> List[Feature]:
    feats: List[Feature] = []
    # cancellable pairs of squares across an edge
    for e in range(len(D.edges)):
        f1, f2 = face[(e, 0)], face[(e, 1)]
        if OUTER in (f1, f2) or f1 == f2:
            continue
        if D.cells[f1].kind != "square" or D.cells[f2].kind != "square":
            continue
        if _cancellable(D, pres, f1, f2, e):
            feats.append(Feature("cancellable_pair", (min(f1, f2), max(f1, f2)), {"edge": e}))
    # combinable cone-cells at a shared vertex
    corners: Dict[Tuple[int, int], List[Tuple[int, int]]] = {}
    lifts = {}
    for f, c in enumerate(D.cells):
        if c.kind != "cone":
            continue
        lifts[f] = cone_lift(D, pres, f)
        for j, (yd, y) in enumerate(lifts[f]):  # type: ignore[arg-type]
            corners.setdefault((D.tail(c.darts[j]), c.cone), []).append((f, j))  # type: ignore[arg-type]
    seen = set()
    for (v, i), lst in sorted(corners.items()):
        for x in range(len(lst)):
            for z in range(x + 1, len(lst)):
                (f, j), (g, h) = lst[x], lst[z]
                if f == g or (f, g) in seen:
                    continue
                same = lifts[f][j][1] == lifts[g][h][1]  # type: ignore[index]
                if not same and pres.relators[i].homogeneous:
                    # lifts differing by a deck translation count as the same lift
                    same = _relift(D, pres, g, h, lifts[f][j][1]) is not None  # type: ignore[index]
                if same:
                    seen.add((f, g))
                    feats.append(Feature("combinable_pair", (f, g), {"vertex": v, "positions": [j, h]}))
    # squares absorbed into an adjacent cone-cell
    for f, c in enumerate(D.cells):
        if c.kind != "square":
            continue
        for j, d in enumerate(c.darts):
            g = face[rev(d)]
            if g == OUTER or D.cells[g].kind != "cone":
                continue
            if _absorbable(D, pres, f, j, g, lifts[g]):  # type: ignore[arg-type]
                feats.append(Feature("absorbable_square", (f, g), {"edge": d[0]}))
                break
    # internal cone-cells with null-homotopic boundary
    for f, c in enumerate(D.cells):
        if c.kind != "cone":
            continue
        if any(face[rev(d)] == OUTER for d in c.darts):
            continue
        if not _essential(pres, c.cone, lifts[f]):  # type: ignore[arg-type]
            feats.append(Feature("inessential_cone_cell", (f,), {}))
    return feats


def _cancellable(D: DiscDiagram, pres: CubicalPresentation, f1: int, f2: int, e: int) -> bool:
    if _square_id(D, pres, f1) != _square_id(D, pres, f2):
        return False
    d1 = D.cells[f1].darts
    d2 = D.cells[f2].darts
    i = [d[0] for d in d1].index(e)
    j = [d[0] for d in d2].index(e)
    w1 = [D.label(d1[(i + t) % 4]) for t in range(1, 4)]
    w2 = [D.label(rev(d2[(j - t) % 4])) for t in range(1, 4)]
    return w1 == w2


def _absorbable(D: DiscDiagram, pres: CubicalPresentation, f: int, j: int, g: int, glift) -> bool:
    """Whether square f, glued to cone-cell g along its side j, maps into g's cone."""
    sq = D.cells[f].darts
    cone = D.cells[g]
    steps = _cone_steps(pres, cone.cone)  # type: ignore[arg-type]
    pos = cone.darts.index(rev(sq[j]))
    # the tail of sq[j] is the head of the cone dart
    y = glift[(pos + 1) % len(cone.darts)][1]
    ys: List[Dart] = []
    vert: Dict[int, int] = {}
    for t in range(4):
        d = sq[(j + t) % 4]
        vert[D.tail(d)] = y
        hit = steps.get((y, D.label(d)))
        if hit is None:
            return False
        ys.append(hit[0])
        y = hit[1]
    if y != vert[D.tail(sq[j])]:
        return False
    Y = pres.relators[cone.cone].cone  # type: ignore[index]
    if tuple(ys) not in square_readings(Y):
        return False
    # the other shared vertices must agree with the cone-cell's lift
    for p, d in enumerate(cone.darts):
        v = D.tail(d)
        if v in vert and vert[v] != glift[p][1]:
            return False
    return True


# ----------------------------------------------------------------------
# rewriting


def _compact(D: DiscDiagram, edge_alive: List[bool]) -> DiscDiagram:
    """Drop dead edges and vertices without edges, renumbering the rest."""
    emap: Dict[int, int] = {}
    for e, ok in enumerate(edge_alive):
        if ok:
            emap[e] = len(emap)
    verts = sorted({v for e in emap for v in D.edges[e]} | {D.base})
    vmap = {v: i for i, v in enumerate(verts)}

    def md(d: Dart) -> Dart:
        return (emap[d[0]], d[1])

    edges = [(vmap[D.edges[e][0]], vmap[D.edges[e][1]]) for e in emap]
    cells = [Cell(c.kind, tuple(md(d) for d in c.darts), c.cone, c.lift, c.square) for c in D.cells]
    labels = None if D.labels is None else [D.labels[e] for e in emap]
    return DiscDiagram(len(verts), edges, cells, tuple(md(d) for d in D.boundary), vmap[D.base], labels)


def _excise_pair(D: DiscDiagram, f1: int, f2: int, e: int) -> Optional[DiscDiagram]:
    """Cut out two cancellable squares and zip the remaining hole shut."""
    d1 = D.cells[f1].darts
    d2 = D.cells[f2].darts
    i = [d[0] for d in d1].index(e)
    x = d1[i]
    j = d2.index(rev(x))
    alpha = [d1[(i + t) % 4] for t in range(1, 4)]
    beta = [d2[(j + t) % 4] for t in range(1, 4)]
    E = len(D.edges)
    # union-find on edges with an orientation parity, and on vertices
    par = list(range(E))
    flip = [0] * E

    def find(a: int) -> Tuple[int, int]:
        p = 0
        while par[a] != a:
            p ^= flip[a]
            a = par[a]
        return a, p

    vpar = list(range(D.n_vertices))

    def vfind(a: int) -> int:
        while vpar[a] != a:
            vpar[a] = vpar[vpar[a]]
            a = vpar[a]
        return a

    for t in range(3):
        a = alpha[t]
        b = rev(beta[2 - t])  # dart identified with a
        ra, pa = find(a[0])
        rb, pb = find(b[0])
        o = (a[1] ^ pa) ^ (b[1] ^ pb)
        if ra != rb:
            par[rb] = ra
            flip[rb] = o
        elif o:
            return None
        for u, w in ((D.tail(a), D.tail(b)), (D.head(a), D.head(b))):
            ru, rw = vfind(u), vfind(w)
            if ru != rw:
                vpar[max(ru, rw)] = min(ru, rw)
    def md(d: Dart) -> Dart:
        r, p = find(d[0])
        return (r, d[1] ^ p)

    cells = [Cell(c.kind, tuple(md(d) for d in c.darts), c.cone, c.lift, c.square) for k, c in enumerate(D.cells) if k not in (f1, f2)]
    boundary = tuple(md(d) for d in D.boundary)
    count: Dict[Dart, int] = {}
    for c in cells:
        for d in c.darts:
            count[d] = count.get(d, 0) + 1
    for d in boundary:
        count[d] = count.get(d, 0) + 1
    alive = [False] * E
    for r in range(E):
        if find(r)[0] != r:
            continue
        a, b = count.get((r, 0), 0), count.get((r, 1), 0)
        if (a, b) == (1, 1):
            alive[r] = True
        elif (a, b) != (0, 0):
            return None
    edges = []
    for r in range(E):
        s, t = D.edges[r]
        edges.append((vfind(s), vfind(t)))
    new = DiscDiagram(D.n_vertices, edges, cells, boundary, vfind(D.base), D.labels)
    new = _compact(new, alive)
    return None if new.validate() else new


def _combine(D: DiscDiagram, pres: CubicalPresentation, f: int, g: int, j: int, h: int) -> Optional[DiscDiagram]:
    """Merge cone-cells f and g at a common vertex into one cone-cell."""
    cf, cg = D.cells[f], D.cells[g]
    lift_f = cone_lift(D, pres, f, j)
    if lift_f is None:
        return None
    lift_g = _relift(D, pres, g, h, lift_f[0][1])
    if lift_g is None:
        return None
    v = D.tail(cf.darts[j])
    steps = list(zip(cf.darts[j:] + cf.darts[:j], [y for _, y in lift_f]))
    steps += list(zip(cg.darts[h:] + cg.darts[:h], [y for _, y in lift_g]))
    # edges the two cells share appear as backtracks; cancel them cyclically
    kept: List[Tuple[Dart, int]] = []
    for st in steps:
        if kept and kept[-1][0] == rev(st[0]):
            kept.pop()
        else:
            kept.append(st)
    while len(kept) >= 2 and kept[0][0] == rev(kept[-1][0]):
        kept = kept[1:-1]
    if not kept:
        return None
    dead = {d[0] for d in cf.darts + cg.darts} - {d[0] for d, _ in kept}
    merged = Cell("cone", tuple(d for d, _ in kept), cf.cone, kept[0][1])
    cells = [c for k, c in enumerate(D.cells) if k not in (f, g)]
    cells.insert(min(f, g), merged)
    tmp = DiscDiagram(D.n_vertices, list(D.edges), cells, D.boundary, D.base, D.labels)
    if dead:
        tmp = _compact(tmp, [e not in dead for e in range(len(D.edges))])
        return tmp if not tmp.validate() else None
    rot = tmp.rotation()
    cycles = rot[v]
    if len(cycles) == 1:
        return tmp if not tmp.validate() else None
    if len(cycles) != 2:
        return None
    # split the vertex along the second cycle of its rotation
    nv = D.n_vertices
    second = set(cycles[1])  # type: ignore[arg-type]
    edges = [list(e) for e in D.edges]
    for d in second:
        edges[d[0]][d[1]] = nv
    base = D.base
    if D.boundary and D.boundary[0] in second:
        base = nv
    out = DiscDiagram(nv + 1, [tuple(e) for e in edges], cells, D.boundary, base, D.labels)  # type: ignore[misc]
    return out if not out.validate() else None


def _absorb(D: DiscDiagram, pres: CubicalPresentation, f: int, g: int) -> Optional[DiscDiagram]:
    """Merge square f into the adjacent cone-cell g along their common arc."""
    sq = D.cells[f].darts
    cone = D.cells[g]
    cd = cone.darts
    n = len(cd)
    shared = [p for p, d in enumerate(cd) if rev(d) in sq]
    if not shared or len(shared) >= 4:
        return None
    # rotate the cone-cell so the shared darts form its final arc
    start = None
    for p in shared:
        if (p - 1) % n not in shared:
            if start is not None:
                return None
            start = p
    if start is None:
        return None
    k = len(shared)
    if any((start + t) % n not in shared for t in range(k)):
        return None
    lift = cone_lift(D, pres, g)
    rot0 = (start + k) % n
    head = [cd[(rot0 + t) % n] for t in range(n - k)]
    arc = [cd[(start + t) % n] for t in range(k)]
    # the square runs along the arc in reverse, then around its other sides
    q = sq.index(rev(arc[-1]))
    if any(sq[(q + t) % 4] != rev(arc[k - 1 - t]) for t in range(k)):
        return None
    rest = [sq[(q + k + t) % 4] for t in range(4 - k)]
    merged = Cell("cone", tuple(head + rest), cone.cone, lift[rot0][1])  # type: ignore[index]
    cells = []
    for idx, c in enumerate(D.cells):
        if idx == g:
            cells.append(merged)
        elif idx != f:
            cells.append(c)
    alive = [True] * len(D.edges)
    for d in arc:
        alive[d[0]] = False
    tmp = DiscDiagram(D.n_vertices, list(D.edges), cells, D.boundary, D.base, D.labels)
    out = _compact(tmp, alive)
    return out if not out.validate() else None


@dataclass
class Move:
    kind: str
    cells: Tuple[int, ...]
    before: Complexity
    after: Complexity

    def to_json(self) -> dict:
        return {"kind": self.kind, "cells": list(self.cells), "before": list(self.before.as_tuple()), "after": list(self.after.as_tuple())}


def reduce_with_log(D: DiscDiagram, pres: CubicalPresentation, max_moves: int = 10_000) -> Tuple[DiscDiagram, List[Move]]:
    """Apply complexity-lowering moves until none applies; return the log as well."""
    D.require_valid(pres)
    log: List[Move] = []
    while len(log) < max_moves:
        feats = detect_features(D, pres) if D.labels is not None else detect_features(D)
        wanted = [f for f in feats if f.kind in ("combinable_pair", "cancellable_pair", "absorbable_square")]
        if D.labels is None:
            names = {"combinable_pair": "cone-cell combination", "cancellable_pair": "cancellable-pair excision", "absorbable_square": "square absorption"}
            for f in feats:
                if f.kind in names:
                    raise DiagramError(f"{names[f.kind]} needs an edge labelling")
            if any(c.kind == "square" for c in D.cells) and len(D.cells) >= 2:
                raise DiagramError("cancellable-pair excision needs an edge labelling")
            return D, log
        order = {"combinable_pair": 0, "cancellable_pair": 1, "absorbable_square": 2}
        wanted.sort(key=lambda f: (order[f.kind], f.key()))
        new = None
        for feat in wanted:
            if feat.kind == "combinable_pair":
                f, g = feat.cells
                j, h = feat.data["positions"]
                new = _combine(D, pres, f, g, j, h)
            elif feat.kind == "cancellable_pair":
                new = _excise_pair(D, feat.cells[0], feat.cells[1], feat.data["edge"])
            else:
                new = _absorb(D, pres, feat.cells[0], feat.cells[1])
            if new is not None and not new.validate(pres):
                before, after = complexity(D), complexity(new)
                if not after < before or new.boundary_word() != D.boundary_word():
                    raise DiagramError(f"{feat.kind} move failed to lower complexity or changed the boundary")
                log.append(Move(feat.kind, feat.cells, before, after))
                D = new
                break
            new = None
        if new is None:
            return D, log
    raise DiagramError("reduction did not terminate within the move budget")


def reduce(D: DiscDiagram, pres: Optional[CubicalPresentation] = None) -> DiscDiagram:
    """Remove cancellable square pairs, combinable cone-cells and absorbable squares."""
    if D.labels is None or pres is None:
        if len(D.cells) <= 1:
            return D
        raise DiagramError("cancellable-pair excision needs an edge labelling and a presentation")
    return reduce_with_log(D, pres)[0]


def is_reduced(D: DiscDiagram, pres: CubicalPresentation, feats: Optional[List[Feature]] = None) -> bool:
    if feats is None:
        feats = detect_features(D, pres)
    return not any(f.blocks_reduction for f in feats)


# ----------------------------------------------------------------------
# the trichotomy


@dataclass
class Classification:
    kind: str  # SINGLE_CELL, LADDER, FEATURES or VIOLATION
    features: List[Feature]
    ladder: Optional[dict] = None

    def to_json(self) -> dict:
        return {"kind": self.kind, "features": [f.to_json() for f in self.features], "ladder": self.ladder}


def _incidence_graph(D: DiscDiagram) -> nx.Graph:
    g = nx.Graph()
    for v in range(D.n_vertices):
        g.add_node(("v", v))
    for e, (a, b) in enumerate(D.edges):
        g.add_edge(("e", e), ("v", a))
        g.add_edge(("e", e), ("v", b))
    for f, c in enumerate(D.cells):
        for d in c.darts:
            g.add_edge(("c", f), ("e", d[0]))
    return g


def _closure(D: DiscDiagram, f: int) -> set:
    out = {("c", f)}
    for d in D.cells[f].darts:
        out.add(("e", d[0]))
        out.add(("v", D.tail(d)))
    return out


def find_ladder(D: DiscDiagram) -> Optional[dict]:
    """Recognize a chain of cone-cells joined by pseudo-grids, or None."""
    cones = [f for f, c in enumerate(D.cells) if c.kind == "cone"]
    G = _incidence_graph(D)
    if not cones:
        if D.cells:
            return None
        # a tree: a ladder exactly when it is a path
        g = nx.Graph()
        g.add_nodes_from(range(D.n_vertices))
        g.add_edges_from(D.edges)
        if max((d for _, d in g.degree()), default=0) <= 2:
            ends = [v for v in g if g.degree(v) <= 1]
            return {"order": [["vertex", v] for v in ends[:2]], "grids": []}
        return None
    closures = {f: _closure(D, f) for f in cones}
    allc = set().union(*closures.values())
    rest = G.subgraph([x for x in G if x not in allc])
    comps = []
    for comp in nx.connected_components(rest):
        touch = set()
        for x in comp:
            for y in G[x]:
                for f in cones:
                    if y in closures[f]:
                        touch.add(f)
        comps.append((comp, touch))
    A = nx.Graph()
    A.add_nodes_from(cones)
    for a in cones:
        for b in cones:
            if a < b and closures[a] & closures[b]:
                A.add_edge(a, b)
    tails: Dict[int, int] = {}
    for comp, touch in comps:
        if len(touch) > 2 or not touch:
            return None
        if len(touch) == 2:
            a, b = sorted(touch)
            A.add_edge(a, b)
            continue
        # a hanging component is allowed only as a cell-free path ending in a vertex
        (a,) = touch
        if any(x[0] == "c" for x in comp):
            return None
        tails[a] = tails.get(a, 0) + 1
    if not nx.is_connected(A) or any(d > 2 for _, d in A.degree()) or A.number_of_edges() != len(cones) - 1:
        return None
    ends = [f for f in cones if A.degree(f) <= 1]
    order = [ends[0]] if len(cones) > 1 else [cones[0]]
    while len(order) < len(cones):
        order.append(next(x for x in A[order[-1]] if x not in order))
    for f, t in tails.items():
        if t > 1 or (len(cones) > 1 and f not in (order[0], order[-1])):
            return None
    if len(cones) == 1 and tails.get(cones[0], 0) == 0:
        return None
    # separation: removing the closure of C_i separates its neighbours
    for i in range(1, len(order) - 1):
        H = G.subgraph([x for x in G if x not in closures[order[i]]])
        a, b = ("c", order[i - 1]), ("c", order[i + 1])
        if nx.has_path(H, a, b):
            return None
    # pseudo-grids: dual curves leaving one cone-cell end on the next
    curves = dual_curves(D)
    grids = []
    for comp, touch in comps:
        sq = sorted(x[1] for x in comp if x[0] == "c")
        if not sq:
            continue
        sset = set(sq)
        mine = [cv for cv in curves if cv.squares and cv.squares[0][0] in sset]
        a, b = sorted(touch)
        for cv in mine:
            ends_ = set(cv.ends)
            if (a in ends_ or b in ends_) and ends_ != {a, b}:
                return None
        from_a = [i for i, cv in enumerate(mine) if set(cv.ends) == {a, b}]
        for x in from_a:
            for y in from_a:
                if x < y and {m[0] for m in mine[x].squares} & {m[0] for m in mine[y].squares}:
                    return None
        grids.append({"between": [a, b], "squares": sq})
    order_out = [["cone", f] for f in order]
    if tails.get(order[0]):
        order_out.insert(0, ["vertex", None])
    if tails.get(order[-1]) and (len(order) > 1 or not tails.get(order[0]) or tails[order[0]] > 0):
        if len(order) > 1:
            order_out.append(["vertex", None])
    return {"order": order_out, "grids": grids}


def greendlinger_classify(D: DiscDiagram, pres: CubicalPresentation, pieces: Optional[PieceReport] = None) -> Classification:
    """Sort a reduced diagram into single cone-cell, ladder, enough features, or neither."""
    if D.labels is None:
        raise DiagramError("reducedness cannot be verified without an edge labelling")
    if pieces is None:
        pieces = enumerate_pieces(pres)
    feats = detect_features(D, pres, pieces)
    bad = [f for f in feats if f.blocks_reduction]
    if bad:
        raise DiagramError(f"diagram is not reduced: {bad[0].kind} at cells {list(bad[0].cells)}")
    if len(D.cells) == 1 and D.cells[0].kind == "cone" and len(D.edges) == len(D.cells[0].darts):
        return Classification("SINGLE_CELL", feats)
    shells = [f for f in feats if f.kind == "shell"]
    corners = [f for f in feats if f.kind in ("corner", "cornsquare") and f.data.get("on") == "boundary"]
    spurs = [f for f in feats if f.kind == "spur"]
    found = shells + corners + spurs
    if len(found) >= 3 and (shells or spurs or len(corners) >= 4):
        return Classification("FEATURES", found)
    lad = find_ladder(D)
    if lad is not None:
        return Classification("LADDER", found, lad)
    return Classification("VIOLATION", found)


# ----------------------------------------------------------------------
# builders for diagrams


@dataclass
class Template:
    """A cell shape: the base darts around its boundary and, for cones, the lift."""

    kind: str
    word: Tuple[Dart, ...]
    cone: Optional[int] = None
    lift: Optional[int] = None
    square: Optional[int] = None


def cell_templates(pres: CubicalPresentation, loops: Optional[Dict[int, List[EdgePath]]] = None) -> List[Template]:
    """All square readings and every rotation and reversal of the given cone loops.

    Cone loops default to each relator's recorded witnesses.
    """
    out = []
    for word, k in sorted(square_readings(pres.base).items()):
        out.append(Template("square", word, square=k))
    for i, rel in enumerate(pres.relators):
        Y = rel.cone
        for loop in (loops or {}).get(i, rel.witnesses):
            vs = loop.vertices(Y)
            n = len(loop.darts)
            xs = []
            for e, s in loop.darts:
                t, _, fl = rel.map.images[1][e]
                xs.append((t, s ^ fl[0]))
            for r in range(n):
                out.append(Template("cone", tuple(xs[r:] + xs[:r]), i, vs[r]))
                back = [rev(d) for d in reversed(xs[r:] + xs[:r])]
                out.append(Template("cone", tuple(back), i, vs[r]))
    return out


def single_cell(t: Template) -> DiscDiagram:
    m = len(t.word)
    edges = [(j, (j + 1) % m) for j in range(m)]
    darts = tuple((j, 0) for j in range(m))
    cell = Cell(t.kind, darts, t.cone, t.lift, t.square)
    boundary = tuple(rev(d) for d in reversed(darts))
    D = DiscDiagram(m, edges, [cell], boundary, 0, list(t.word))
    D.base = D.tail(boundary[0])
    return D


def attach(D: DiscDiagram, t: Template, i: int, k: int) -> Optional[DiscDiagram]:
    """Glue a new cell along boundary darts i .. i+k-1 (k = 0 glues at a vertex).

    The cell's boundary starts with those darts and continues along new
    edges; returns None when the labels disagree.
    """
    B = list(D.boundary)
    L = len(B)
    m = len(t.word)
    if L == 0 or not (0 <= k < m) or k >= L:
        return None
    arc = [B[(i + j) % L] for j in range(k)]
    if D.labels is not None and [D.label(d) for d in arc] != list(t.word[:k]):
        return None
    u = D.tail(B[i % L])
    w = D.head(arc[-1]) if arc else u
    edges = list(D.edges)
    labels = list(D.labels) if D.labels is not None else None
    nv = D.n_vertices
    r = m - k
    chain = [w] + [nv + j for j in range(r - 1)] + [u]
    new = []
    for j in range(r):
        e = len(edges)
        edges.append((chain[j], chain[j + 1]))
        if labels is not None:
            labels.append(t.word[k + j])
        new.append((e, 0))
    cell = Cell(t.kind, tuple(arc + new), t.cone, t.lift, t.square)
    # rotate so the arc starts the boundary list, then replace it
    Bs = B[i % L:] + B[: i % L]
    nb = [rev(d) for d in reversed(new)] + Bs[k:]
    base_dart = D.boundary[0]
    out = DiscDiagram(nv + r - 1, edges, D.cells + [cell], tuple(nb), 0, labels)
    # keep the original base if its dart survives, else use the new first dart
    if base_dart in nb:
        p = nb.index(base_dart)
        nb = nb[p:] + nb[:p]
    out.boundary = tuple(nb)
    out.base = out.tail(nb[0])
    return out if not out.validate() else None


def grow_diagram(pres: CubicalPresentation, rng: random.Random, cells: int, templates: Optional[List[Template]] = None, tries: int = 200) -> DiscDiagram:
    """A random labelled disc diagram built by gluing cells along boundary arcs."""
    if templates is None:
        templates = cell_templates(pres)
    if not templates:
        raise DiagramError("no cell templates available")
    D = single_cell(rng.choice(templates))
    for _ in range(cells - 1):
        for _ in range(tries):
            t = rng.choice(templates)
            L = len(D.boundary)
            k = rng.randrange(0, min(len(t.word), L))
            new = attach(D, t, rng.randrange(L), k)
            if new is not None:
                D = new
                break
    return D


def c8_diagram(X, relators, squares, cubes_corners, octagons, edge_of) -> DiscDiagram:
    """All faces of the polyhedron, hexagons filled by three cube faces, one square removed.

    Faces are oriented by the outward normal of the signed-permutation
    embedding; each hexagon is filled by the three cube squares at the cube
    corner 0, and the first square face is left open as the boundary.
    """
    from .builders import _b3_elements

    # the graph uses the action on positions, the polytope the action on
    # values, so a vertex sits at the inverse signed permutation
    coords = []
    for w in _b3_elements():
        u = [0, 0, 0]
        for i, x in enumerate(w):
            u[abs(x) - 1] = (i + 1) * (1 if x > 0 else -1)
        coords.append(tuple(u))

    def oriented(cyc: List[int]) -> List[int]:
        p = [coords[v] for v in cyc]
        a = [p[1][t] - p[0][t] for t in range(3)]
        b = [p[2][t] - p[1][t] for t in range(3)]
        nrm = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        cen = [sum(q[t] for q in p) for t in range(3)]
        if sum(nrm[t] * cen[t] for t in range(3)) < 0:
            return list(reversed(cyc))
        return list(cyc)

    def darts_of(cyc: List[int]) -> List[Dart]:
        out = []
        for j, a in enumerate(cyc):
            b = cyc[(j + 1) % len(cyc)]
            e = edge_of[frozenset((a, b))]
            out.append((e, 0 if X.edge_ends(e)[0] == a else 1))
        return out

    faces: List[Tuple[str, List[Dart], Optional[int], Optional[int]]] = []
    for sq in squares:
        faces.append(("square", darts_of(oriented([sq[0], sq[1], sq[3], sq[2]])), None, None))
    for corners in cubes_corners:
        hexagon = oriented([corners[c] for c in (1, 3, 2, 6, 4, 5)])
        nbrs = {corners[1], corners[2], corners[4]}
        r = next(j for j, v in enumerate(hexagon) if v in nbrs)
        h = hexagon[r:] + hexagon[:r]
        pole = corners[0]
        for a in (0, 2, 4):
            faces.append(("square", darts_of([pole, h[a], h[a + 1], h[(a + 2) % 6]]), None, None))
    for k, oc in enumerate(octagons):
        cyc = oriented(list(oc))
        faces.append(("cone", darts_of(cyc), k, list(oc).index(cyc[0])))
    used_edges = sorted({d[0] for _, ds, _, _ in faces for d in ds})
    emap = {e: i for i, e in enumerate(used_edges)}
    verts = sorted({v for e in used_edges for v in X.edge_ends(e)})
    vmap = {v: i for i, v in enumerate(verts)}
    edges = [(vmap[X.edge_ends(e)[0]], vmap[X.edge_ends(e)[1]]) for e in used_edges]
    labels = [(e, 0) for e in used_edges]
    readings = square_readings(X)
    cells = []
    boundary: Tuple[Dart, ...] = ()
    for idx, (kind, ds, cone, lift) in enumerate(faces):
        dd = tuple((emap[e], s) for e, s in ds)
        if idx == 0:
            boundary = dd
            continue
        sqid = readings.get(tuple(ds)) if kind == "square" else None
        cells.append(Cell(kind, dd, cone, lift, sqid))
    D = DiscDiagram(len(verts), edges, cells, boundary, edges[boundary[0][0]][boundary[0][1]], labels)
    D.require_valid()
    return D
