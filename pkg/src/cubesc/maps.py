"""Cubical maps, fiber products, finite covers and developed balls."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .cube_core import (
    CubeComplex,
    CubeComplexError,
    FaceRef,
    Subcomplex,
    extract,
    is_connected,
    link,
    require_valid,
)

# image of one n-cube: (target id, perm, flips); source coord i -> target coord perm[i] ^ flips[i]
CubeImage = Tuple[int, Tuple[int, ...], Tuple[int, ...]]


class CubicalMapError(ValueError):
    """Raised when data does not describe a combinatorial cubical map."""


@dataclass
class CubicalMap:
    source: CubeComplex
    target: CubeComplex
    # images[0][v] is a vertex id; images[n][k] is a CubeImage for n >= 1
    images: Dict[int, list]
    name: str = ""

    def image(self, n: int, k: int):
        return self.images[n][k]

    def vertex(self, v: int) -> int:
        return self.images[0][v]

    def cube_target(self, n: int, k: int) -> int:
        if n == 0:
            return self.images[0][k]
        return self.images[n][k][0]

    def link_image(self, lv: Tuple[int, int]) -> Tuple[int, int]:
        """Image of an edge end under the induced map of links."""
        e, end = lv
        t, _, flips = self.images[1][e]
        return (t, end ^ flips[0])

    def validate(self) -> List[dict]:
        """Return a list of commutation failures (empty when the map is cubical)."""
        X, Y = self.source, self.target
        bad: List[dict] = []
        if len(self.images.get(0, [])) != X.n_vertices:
            return [{"kind": "vertex map has wrong length"}]
        for v, w in enumerate(self.images[0]):
            if not (0 <= w < Y.n_vertices):
                bad.append({"kind": "vertex out of range", "vertex": v})
        for n in range(1, X.dimension + 1):
            imgs = self.images.get(n, [])
            if len(imgs) != X.count(n):
                bad.append({"kind": "cube map has wrong length", "dim": n})
                continue
            for k, (t, perm, flips) in enumerate(imgs):
                if not (0 <= t < Y.count(n)) or sorted(perm) != list(range(n)) or len(flips) != n:
                    bad.append({"kind": "bad cube image", "cube": [n, k]})
        if bad:
            return bad
        for n in range(1, X.dimension + 1):
            for k, (t, perm, flips) in enumerate(self.images[n]):
                for d in range(n):
                    for s in (0, 1):
                        if not self._face_commutes(n, k, d, s):
                            bad.append({"kind": "face does not commute", "cube": [n, k], "slot": [d, s]})
        return bad

    def _face_commutes(self, n: int, k: int, d: int, s: int) -> bool:
        X, Y = self.source, self.target
        t, perm, flips = self.images[n][k]
        fid, fperm, fflips = X.cubes[n][k][2 * d + s]
        td, ts = perm[d], s ^ flips[d]
        tfid, tperm, tflips = Y.cubes[n][t][2 * td + ts]
        if n == 1:
            return self.images[0][fid] == tfid
        fimg, fp, ff = self.images[n - 1][fid]
        if fimg != tfid:
            return False
        for c in range(n):
            if c == d:
                continue
            j = c if c < d else c - 1
            via_face = (fp[fperm[j]], fflips[j] ^ ff[fperm[j]])
            tc = perm[c]
            jj = tc if tc < td else tc - 1
            via_target = (tperm[jj], flips[c] ^ tflips[jj])
            if via_face != via_target:
                return False
        return True

    def require_valid(self) -> None:
        bad = self.validate()
        if bad:
            raise CubicalMapError(f"not a cubical map: {bad[0]}")

    def to_json(self) -> dict:
        out = {"vertices": list(self.images.get(0, []))}
        for n in range(1, self.source.dimension + 1):
            out[str(n)] = [[t, list(p), list(f)] for t, p, f in self.images.get(n, [])]
        return out

    @classmethod
    def from_json(cls, source: CubeComplex, target: CubeComplex, data: dict) -> "CubicalMap":
        images: Dict[int, list] = {0: [int(v) for v in data["vertices"]]}
        for n in range(1, source.dimension + 1):
            rows = []
            for row in data.get(str(n), []):
                if isinstance(row, int):
                    rows.append((row, tuple(range(n)), (0,) * n))
                elif len(row) == 1:
                    rows.append((int(row[0]), tuple(range(n)), (0,) * n))
                else:
                    rows.append((int(row[0]), tuple(row[1]), tuple(row[2])))
            images[n] = rows
        return cls(source, target, images)


def identity_map(X: CubeComplex) -> CubicalMap:
    images: Dict[int, list] = {0: list(range(X.n_vertices))}
    for n in range(1, X.dimension + 1):
        images[n] = [(k, tuple(range(n)), (0,) * n) for k in range(X.count(n))]
    return CubicalMap(X, X, images)


def compose(g: CubicalMap, f: CubicalMap) -> CubicalMap:
    """The composite g after f."""
    if f.target is not g.source:
        raise CubicalMapError("maps are not composable")
    images: Dict[int, list] = {0: [g.images[0][w] for w in f.images[0]]}
    for n in range(1, f.source.dimension + 1):
        rows = []
        for t, perm, flips in f.images[n]:
            t2, perm2, flips2 = g.images[n][t]
            rows.append((t2, tuple(perm2[perm[i]] for i in range(n)), tuple(flips[i] ^ flips2[perm[i]] for i in range(n))))
        images[n] = rows
    return CubicalMap(f.source, g.target, images)


def inclusion_map(sub: Subcomplex) -> Tuple[CubeComplex, CubicalMap]:
    """Extract a subcomplex and return it with its inclusion into the parent."""
    Y, ids = extract(sub)
    images: Dict[int, list] = {0: [0] * Y.n_vertices}
    for old, new in ids[0].items():
        images[0][new] = old
    for n in range(1, Y.dimension + 1):
        row = [None] * Y.count(n)
        for old, new in ids[n].items():
            row[new] = (old, tuple(range(n)), (0,) * n)
        images[n] = row
    return Y, CubicalMap(Y, sub.parent, images)


def image_subcomplex(f: CubicalMap) -> Subcomplex:
    cells: Dict[int, set] = {0: set(f.images[0])}
    for n in range(1, f.source.dimension + 1):
        cells[n] = {t for t, _, _ in f.images[n]}
    return Subcomplex(f.target, cells, check=False)


# ----------------------------------------------------------------------
# local isometries


@dataclass
class LocalIsometryReport:
    ok: bool
    failures: List[dict]


def is_local_isometry(f: CubicalMap) -> LocalIsometryReport:
    """Injective on links, with the image of each link full in the target link."""
    f.require_valid()
    X, Y = f.source, f.target
    failures: List[dict] = []
    for v in range(X.n_vertices):
        Lx = link(X, v)
        Ly = link(Y, f.vertex(v))
        img = {}
        for lv in Lx.vertices:
            w = f.link_image(lv)
            if w in img:
                failures.append({"vertex": v, "kind": "link map not injective", "edge_ends": [list(img[w]), list(lv)]})
            img[w] = lv
        image_sets = set()
        for verts, cube, corner in Lx.simplices:
            image_sets.add(frozenset(f.link_image(lv) for lv in verts))
        for verts, cube, corner in Ly.simplices:
            if len(verts) < 2:
                continue
            vs = frozenset(verts)
            if all(w in img for w in vs) and vs not in image_sets:
                failures.append(
                    {"vertex": v, "kind": "image not full", "missing_cube": list(cube), "corner": corner}
                )
    return LocalIsometryReport(not failures, failures)


# ----------------------------------------------------------------------
# fiber products


@dataclass
class FiberComponent:
    index: int
    complex: CubeComplex
    cells: Subcomplex
    proj_left: CubicalMap
    proj_right: CubicalMap
    diagonal: bool
    automorphism: bool

    @property
    def trivial(self) -> bool:
        return self.diagonal or self.automorphism


@dataclass
class FiberProduct:
    complex: CubeComplex
    pairs: Dict[int, List[Tuple[int, int]]]
    proj_left: CubicalMap
    proj_right: CubicalMap
    components: List[FiberComponent] = field(default_factory=list)


def _cube_pairs(f: CubicalMap, g: CubicalMap, n: int) -> List[Tuple[int, int]]:
    if n == 0:
        by_target: Dict[int, List[int]] = {}
        for w, t in enumerate(g.images[0]):
            by_target.setdefault(t, []).append(w)
        return [(v, w) for v, t in enumerate(f.images[0]) for w in by_target.get(t, [])]
    by_target = {}
    for w, (t, _, _) in enumerate(g.images.get(n, [])):
        by_target.setdefault(t, []).append(w)
    return [(a, b) for a, (t, _, _) in enumerate(f.images.get(n, [])) for b in by_target.get(t, [])]


def fiber_product(f: CubicalMap, g: CubicalMap, max_cells: Optional[int] = None, min_edges: int = 0) -> FiberProduct:
    """Fiber product of f: A -> Z and g: B -> Z, with cubes in the B-coordinates.

    Components are tagged as diagonal (f is g and the component contains a
    pair (y, y)) or automorphism (both projections are bijective onto
    compact factors), so that callers can discard them.  Components with
    fewer than ``min_edges`` edges are not extracted.
    """
    if f.target is not g.target:
        raise CubicalMapError("fiber product needs maps with a common target")
    A, B = f.source, g.source
    top = min(A.dimension, B.dimension)
    pairs: Dict[int, List[Tuple[int, int]]] = {}
    index: Dict[int, Dict[Tuple[int, int], int]] = {}
    total = 0
    for n in range(top + 1):
        pairs[n] = _cube_pairs(f, g, n)
        index[n] = {p: i for i, p in enumerate(pairs[n])}
        total += len(pairs[n])
        if max_cells is not None and total > max_cells:
            raise CubeComplexError(f"fiber product exceeds {max_cells} cells")
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    left: Dict[int, list] = {0: [a for a, _ in pairs[0]]}
    right: Dict[int, list] = {0: [b for _, b in pairs[0]]}
    for n in range(1, top + 1):
        rows = []
        limg, rimg = [], []
        for a, b in pairs[n]:
            _, pa, fa = f.images[n][a]
            _, pb, fb = g.images[n][b]
            inv_pa = {pa[j]: j for j in range(n)}
            # B-coordinate i corresponds to A-coordinate amap[i] with flip aflip[i]
            amap = [inv_pa[pb[i]] for i in range(n)]
            aflip = [fa[amap[i]] ^ fb[i] for i in range(n)]
            faces = []
            for d in range(n):
                for s in (0, 1):
                    fb_id, fbperm, fbflips = B.cubes[n][b][2 * d + s]
                    fa_id, _, _ = A.cubes[n][a][2 * amap[d] + (s ^ aflip[d])]
                    key = (fa_id, fb_id)
                    if key not in index[n - 1]:
                        raise CubicalMapError("fiber product face missing; maps are not cubical")
                    faces.append((index[n - 1][key], fbperm, fbflips))
            rows.append(tuple(faces))
            # projection to A: B-coordinate i -> A coordinate amap[i], flip aflip[i]
            limg.append((a, tuple(amap), tuple(aflip)))
            rimg.append((b, tuple(range(n)), (0,) * n))
        cubes[n] = rows
        left[n] = limg
        right[n] = rimg
    P = CubeComplex(len(pairs[0]), cubes)
    pl = CubicalMap(P, A, left)
    pr = CubicalMap(P, B, right)
    fp = FiberProduct(P, pairs, pl, pr)
    fp.components = _fiber_components(fp, same=f is g, min_edges=min_edges)
    return fp


def _fiber_components(fp: FiberProduct, same: bool, min_edges: int = 0) -> List[FiberComponent]:
    P = fp.complex
    A, B = fp.proj_left.target, fp.proj_right.target
    out = []
    for i, comp in enumerate(Subcomplex.whole(P).components()):
        if len(comp.cells.get(1, ())) < min_edges:
            continue
        C, ids = extract(comp)
        back = {n: {new: old for old, new in m.items()} for n, m in ids.items()}

        def restrict(proj: CubicalMap) -> CubicalMap:
            images: Dict[int, list] = {0: [proj.images[0][back[0][j]] for j in range(C.n_vertices)]}
            for n in range(1, C.dimension + 1):
                images[n] = [proj.images[n][back[n][j]] for j in range(C.count(n))]
            return CubicalMap(C, proj.target, images)

        pl, pr = restrict(fp.proj_left), restrict(fp.proj_right)
        diagonal = same and any(fp.pairs[0][back[0][j]][0] == fp.pairs[0][back[0][j]][1] for j in range(C.n_vertices))
        automorphism = _bijective(pl, A) and _bijective(pr, B)
        out.append(FiberComponent(i, C, comp, pl, pr, diagonal, automorphism))
    return out


def _bijective(f: CubicalMap, T: CubeComplex) -> bool:
    S = f.source
    if S.counts() != T.counts():
        return False
    if sorted(f.images[0]) != list(range(T.n_vertices)):
        return False
    for n in range(1, S.dimension + 1):
        if sorted(t for t, _, _ in f.images[n]) != list(range(T.count(n))):
            return False
    return True


# ----------------------------------------------------------------------
# finite covers


class CoverError(ValueError):
    """Raised when edge permutations do not extend over the squares."""


def _sheet_transport(X: CubeComplex, n: int, k: int, sheet0: int, sigma, inv) -> Dict[int, int]:
    sheets = {0: sheet0}
    order = sorted(range(1 << n), key=lambda x: bin(x).count("1"))
    for x in order:
        if x == 0:
            continue
        d = (x & -x).bit_length() - 1
        p = x ^ (1 << d)
        e, end = X.corner_edge(n, k, p, d)
        sheets[x] = sigma[e][sheets[p]] if end == 0 else inv[e][sheets[p]]
    return sheets


def finite_cover(X: CubeComplex, perms: Dict[int, Sequence[int]], degree: Optional[int] = None) -> Tuple[CubeComplex, CubicalMap]:
    """Cover built from a permutation of sheets for every edge.

    ``perms[e][i]`` is the sheet at the end-1 vertex of edge ``e`` reached from
    sheet ``i`` at its end-0 vertex.  Edges missing from ``perms`` get the
    identity.  Raises CoverError, naming a square, if the permutations do
    not compose trivially around it.
    """
    require_valid(X)
    if degree is None:
        degree = max([len(p) for p in perms.values()] + [1])
    sigma, inv = {}, {}
    for e in range(X.count(1)):
        p = list(perms.get(e, range(degree)))
        if sorted(p) != list(range(degree)):
            raise CoverError(f"edge {e} carries a non-permutation {p}")
        sigma[e] = p
        inv[e] = [0] * degree
        for i, j in enumerate(p):
            inv[e][j] = i
    # consistency around every square (higher cubes follow)
    for k in range(X.count(2)):
        for i in range(degree):
            sheets = _sheet_transport(X, 2, k, i, sigma, inv)
            e, end = X.corner_edge(2, k, 1, 1)
            alt = sigma[e][sheets[1]] if end == 0 else inv[e][sheets[1]]
            if alt != sheets[3]:
                raise CoverError(f"permutations are inconsistent around square {k} (sheet {i})")
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    images: Dict[int, list] = {0: [v for v in range(X.n_vertices) for _ in range(degree)]}
    for n in range(1, X.dimension + 1):
        rows, imgs = [], []
        for k in range(X.count(n)):
            for i in range(degree):
                sheets = _sheet_transport(X, n, k, i, sigma, inv)
                faces = []
                for d in range(n):
                    for s in (0, 1):
                        fid, fperm, fflips = X.cubes[n][k][2 * d + s]
                        # corner of the cube sitting at corner 0 of the face
                        x = s << d
                        for c in range(n):
                            if c == d:
                                continue
                            j = c if c < d else c - 1
                            x |= fflips[j] << c
                        faces.append((fid * degree + sheets[x], fperm, fflips))
                rows.append(tuple(faces))
                imgs.append((k, tuple(range(n)), (0,) * n))
        cubes[n] = rows
        images[n] = imgs
    # vertex ids are v*degree + sheet, and edges/cubes (k, sheet of corner 0) likewise
    Xt = CubeComplex(X.n_vertices * degree, cubes, name=f"{X.name}~{degree}" if X.name else "")
    return Xt, CubicalMap(Xt, X, images)


def elevations(f: CubicalMap, cover: CubicalMap) -> List[FiberComponent]:
    """Components of the fiber product of ``f`` with a covering map."""
    if not is_connected(f.source):
        raise CubicalMapError("elevations need a connected source")
    fp = fiber_product(cover, f)
    return fp.components


# ----------------------------------------------------------------------
# developing balls in the universal cover


@dataclass
class Ball:
    complex: CubeComplex
    base: int
    radius: int
    boundary: frozenset
    projection: CubicalMap
    distance: Dict[int, int]


class _Developer:
    def __init__(self, X: CubeComplex):
        self.X = X
        self.parent: List[int] = []
        self.image: List[int] = []
        self.nbr: List[Dict[Tuple[int, int], int]] = []
        self.cubes: List[Tuple[int, int, List[int]]] = []
        self.pending: deque = deque()

    def new(self, v: int) -> int:
        self.parent.append(len(self.parent))
        self.image.append(v)
        self.nbr.append({})
        return len(self.parent) - 1

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def connect(self, u: int, lv: Tuple[int, int], w: int) -> None:
        self._set(u, lv, w)
        self._set(w, (lv[0], 1 - lv[1]), u)
        self._drain()

    def _set(self, u: int, lv: Tuple[int, int], w: int) -> None:
        u, w = self.find(u), self.find(w)
        cur = self.nbr[u].get(lv)
        if cur is None:
            self.nbr[u][lv] = w
        elif self.find(cur) != w:
            self.pending.append((cur, w))

    def _drain(self) -> None:
        while self.pending:
            a, b = self.pending.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if self.image[a] != self.image[b]:
                raise CubeComplexError("development identified vertices with different images")
            if b < a:
                a, b = b, a
            self.parent[b] = a
            for lv, w in self.nbr[b].items():
                self._set(a, lv, w)
            self.nbr[b] = {}

    def develop_cube(self, n: int, k: int, x: int, u: int) -> None:
        X = self.X
        corners = X.corners(n, k)
        vert = {x: self.find(u)}
        order = sorted(range(1 << n), key=lambda y: bin(y ^ x).count("1"))
        for y in order:
            if y == x:
                continue
            diff = y ^ x
            preds = [(y ^ (1 << d), d) for d in range(n) if (diff >> d) & 1]
            target = None
            for p, d in preds:
                lv = X.corner_edge(n, k, p, d)
                t = self.nbr[self.find(vert[p])].get(lv)
                if t is not None:
                    target = self.find(t)
                    break
            if target is None:
                target = self.new(corners[y])
            for p, d in preds:
                lv = X.corner_edge(n, k, p, d)
                self.connect(vert[p], lv, target)
            vert[y] = self.find(target)
            for z in vert:
                vert[z] = self.find(vert[z])
        self.cubes.append((n, k, [vert[z] for z in range(1 << n)]))


def _assemble(dev: _Developer, X: CubeComplex, vid: Dict[int, int], name: str):
    """Build the complex spanned by developed cubes whose vertices are all in ``vid``.

    Returns the complex, its projection to X and the cube-id lookup keyed by
    (dimension, X-cube, vertex at corner 0).
    """
    # canonical developed cubes keyed by (dim, X-cube, vertex at corner 0)
    found: Dict[Tuple[int, int, int], List[int]] = {}
    for n, k, verts in dev.cubes:
        verts = [dev.find(w) for w in verts]
        if all(w in vid for w in verts):
            found.setdefault((n, k, verts[0]), verts)
    # also register faces of developed cubes (they are developed cubes too)
    per_dim: Dict[int, List[Tuple[int, int, int]]] = {}
    for key in sorted(found, key=lambda t: (t[0], vid[t[2]], t[1])):
        per_dim.setdefault(key[0], []).append(key)
    cid = {n: {key: i for i, key in enumerate(lst)} for n, lst in per_dim.items()}
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    images: Dict[int, list] = {0: [0] * len(vid)}
    for u, i in vid.items():
        images[0][i] = dev.image[u]
    for n in sorted(per_dim):
        if n == 0:
            continue
        rows, imgs = [], []
        for key in per_dim[n]:
            _, k, _ = key
            verts = found[key]
            faces = []
            for d in range(n):
                for s in (0, 1):
                    fid, fperm, fflips = X.cubes[n][k][2 * d + s]
                    x = s << d
                    for c in range(n):
                        if c == d:
                            continue
                        j = c if c < d else c - 1
                        x |= fflips[j] << c
                    w0 = verts[x]
                    if n - 1 == 0:
                        faces.append((vid[w0], fperm, fflips))
                    else:
                        fkey = (n - 1, fid, w0)
                        if fkey not in cid.get(n - 1, {}):
                            raise CubeComplexError("developed ball is missing a face")
                        faces.append((cid[n - 1][fkey], fperm, fflips))
            rows.append(tuple(faces))
            imgs.append((k, tuple(range(n)), (0,) * n))
        cubes[n] = rows
        images[n] = imgs
    B = CubeComplex(len(vid), cubes, name=name)
    return B, CubicalMap(B, X, images), cid


def develop_ball(X: CubeComplex, v: int, R: int, max_cells: Optional[int] = None) -> Ball:
    """Combinatorial ball of radius R about a lift of ``v`` in the universal cover."""
    require_valid(X)
    if R < 0:
        raise CubeComplexError("radius must be non-negative")
    if not (0 <= v < X.n_vertices):
        raise CubeComplexError(f"unknown vertex {v}")
    at_vertex: Dict[int, List[Tuple[int, int, int]]] = {w: [] for w in range(X.n_vertices)}
    for n in range(1, X.dimension + 1):
        for k in range(X.count(n)):
            for x, w in enumerate(X.corners(n, k)):
                at_vertex[w].append((n, k, x))
    dev = _Developer(X)
    base = dev.new(v)
    processed: set = set()
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
            processed = {dev.find(p) for p in processed}
            processed.add(dev.find(u))
            if max_cells is not None and len(dev.cubes) > max_cells:
                raise CubeComplexError(f"development exceeds {max_cells} cells")
    base = dev.find(base)
    dist = _bfs(dev, base, R)
    keep = sorted(u for u, d in dist.items() if d <= R)
    vid = {u: i for i, u in enumerate(sorted(keep, key=lambda u: (dist[u], u)))}
    B, proj, _ = _assemble(dev, X, vid, f"ball({X.name or 'X'},{v},{R})")
    # boundary: vertices whose cube-corner count falls short of the image vertex
    count_b: Dict[int, int] = {i: 0 for i in range(B.n_vertices)}
    for n in range(1, B.dimension + 1):
        for k in range(B.count(n)):
            for w in B.corners(n, k):
                count_b[w] += 1
    boundary = frozenset(i for i in range(B.n_vertices) if count_b[i] != len(at_vertex[proj.images[0][i]]))
    distance = {vid[u]: dist[u] for u in keep}
    return Ball(B, vid[base], R, boundary, proj, distance)


def _bfs(dev: _Developer, start: int, R: int) -> Dict[int, int]:
    dist = {start: 0}
    q = deque([start])
    while q:
        u = q.popleft()
        if dist[u] >= R + 1:
            continue
        for w in dev.nbr[dev.find(u)].values():
            w = dev.find(w)
            if w not in dist:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def one_skeleton(X: CubeComplex) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(X.n_vertices))
    for e in range(X.count(1)):
        a, b = X.edge_ends(e)
        g.add_edge(a, b, key=e)
    return g
