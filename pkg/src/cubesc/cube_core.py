"""Finite combinatorial cube complexes.

A cube complex is stored by facet references: every n-cube lists its 2n
codimension-one faces, each given as a reference to an (n-1)-cube together
with the coordinate direction and side it occupies.  This encoding allows
self-glued cubes, so one-vertex complexes such as tori and wedges of circles
are first-class values.

A face reference may carry an orientation ``(perm, flips)``.  The local
coordinates of the face at ``(d, s)`` are the coordinates of the cube other
than ``d``, listed in ascending order; local coordinate ``j`` is sent to
coordinate ``perm[j]`` of the face cube, reversed when ``flips[j]`` is set.
The identity orientation is the default and is omitted from JSON.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

MAX_DIMENSION = 8

# (cube id, perm, flips) as stored for one facet.
FaceRef = Tuple[int, Tuple[int, ...], Tuple[int, ...]]
# A coordinate map: for each free coordinate of the source, (target coord, flip).
CoordMap = Tuple[Tuple[int, int], ...]


class CubeComplexError(ValueError):
    """Raised for malformed complexes or invalid operations on them."""


def _identity(n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    return tuple(range(n)), (0,) * n


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation given as a sequence of images."""
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass
class CubeComplex:
    """A finite cube complex given by vertex count and facet references.

    ``cubes[n]`` (for n >= 1) is a list whose k-th entry is the tuple of the
    2n facets of the k-th n-cube, stored at position ``2*d + s``.
    """

    n_vertices: int
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = field(default_factory=dict)
    name: str = ""

    def __post_init__(self) -> None:
        self._sub_cache: Dict[Tuple[int, int, Tuple[Tuple[int, int], ...]], Tuple[int, CoordMap]] = {}
        self._corner_cache: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        self._corner_edge_cache: Dict[Tuple[int, int], Tuple[frozenset, ...]] = {}
        self._incidence: Optional[Dict[int, List[Tuple[int, int, int]]]] = None

    # ------------------------------------------------------------------
    # basic accessors
    @property
    def dimension(self) -> int:
        dims = [n for n, cs in self.cubes.items() if cs]
        if dims:
            return max(dims)
        return 0 if self.n_vertices > 0 else -1

    def count(self, n: int) -> int:
        if n == 0:
            return self.n_vertices
        return len(self.cubes.get(n, []))

    def counts(self) -> Tuple[int, ...]:
        return tuple(self.count(n) for n in range(self.dimension + 1))

    def cells(self) -> Iterable[Tuple[int, int]]:
        """All cubes as (dimension, id) pairs, ordered by dimension then id."""
        for n in range(self.dimension + 1):
            for k in range(self.count(n)):
                yield (n, k)

    def face(self, n: int, k: int, d: int, s: int) -> FaceRef:
        return self.cubes[n][k][2 * d + s]

    def edge_ends(self, e: int) -> Tuple[int, int]:
        f = self.cubes[1][e]
        return f[0][0], f[1][0]

    # ------------------------------------------------------------------
    # subface resolution
    def subface(self, n: int, k: int, fixed: Dict[int, int]) -> Tuple[int, CoordMap]:
        """Resolve the face of cube (n, k) obtained by fixing coordinates.

        Returns the id of the resulting (n - len(fixed))-cube and, for each
        free coordinate of the original cube in ascending order, the pair
        (coordinate of the resulting cube, flip bit).
        """
        key = (n, k, tuple(sorted(fixed.items())))
        hit = self._sub_cache.get(key)
        if hit is not None:
            return hit
        if not fixed:
            result = (k, tuple((i, 0) for i in range(n)))
        else:
            d = min(fixed)
            s = fixed[d]
            fid, perm, flips = self.cubes[n][k][2 * d + s]
            rest = {}
            free_in_face: Dict[int, Tuple[int, int]] = {}
            for c in range(n):
                if c == d:
                    continue
                j = c if c < d else c - 1
                if c in fixed:
                    rest[perm[j]] = fixed[c] ^ flips[j]
                else:
                    free_in_face[c] = (perm[j], flips[j])
            sub_id, sub_map = self.subface(n - 1, fid, rest)
            # sub_map is indexed by the free coordinates of the face cube in
            # ascending order; translate back to the original free coords.
            face_free = [c for c in range(n - 1) if c not in rest]
            pos = {c: i for i, c in enumerate(face_free)}
            out = []
            for c in range(n):
                if c in fixed:
                    continue
                fc, fl = free_in_face[c]
                tc, tfl = sub_map[pos[fc]]
                out.append((tc, fl ^ tfl))
            result = (sub_id, tuple(out))
        self._sub_cache[key] = result
        return result

    def corners(self, n: int, k: int) -> Tuple[int, ...]:
        """Vertex ids at the 2^n corners, indexed by the corner's bit pattern.

        Corner ``x`` has bit ``i`` equal to coordinate ``i``.
        """
        key = (n, k)
        hit = self._corner_cache.get(key)
        if hit is not None:
            return hit
        if n == 0:
            out = (k,)
        else:
            out = tuple(
                self.subface(n, k, {i: (x >> i) & 1 for i in range(n)})[0]
                for x in range(1 << n)
            )
        self._corner_cache[key] = out
        return out

    def corner_edge(self, n: int, k: int, x: int, d: int) -> Tuple[int, int]:
        """Edge of cube (n, k) leaving corner ``x`` in direction ``d``.

        Returns (edge id, end of that edge sitting at the corner).
        """
        fixed = {i: (x >> i) & 1 for i in range(n) if i != d}
        eid, cmap = self.subface(n, k, fixed)
        flip = cmap[0][1]
        return eid, ((x >> d) & 1) ^ flip

    def corner_edge_sets(self, n: int, k: int) -> Tuple[frozenset, ...]:
        """For each corner of cube (n, k), the set of edge ids leaving it inside the cube."""
        key = (n, k)
        hit = self._corner_edge_cache.get(key)
        if hit is None:
            hit = tuple(
                frozenset(self.corner_edge(n, k, x, d)[0] for d in range(n))
                for x in range(1 << n)
            )
            self._corner_edge_cache[key] = hit
        return hit

    def vertex_cubes(self) -> Dict[int, List[Tuple[int, int, int]]]:
        """For each vertex, the (dim, id, corner) triples of cubes at it (dim >= 1)."""
        out: Dict[int, List[Tuple[int, int, int]]] = {v: [] for v in range(self.n_vertices)}
        for n in range(1, self.dimension + 1):
            for k in range(self.count(n)):
                for x, v in enumerate(self.corners(n, k)):
                    out[v].append((n, k, x))
        return out

    # ------------------------------------------------------------------
    def to_json(self) -> dict:
        cubes = {}
        for n in range(1, self.dimension + 1):
            rows = []
            for faces in self.cubes.get(n, []):
                row = []
                for pos, (fid, perm, flips) in enumerate(faces):
                    d, s = divmod(pos, 2)
                    if perm == tuple(range(n - 1)) and not any(flips):
                        row.append([d, s, fid])
                    else:
                        row.append([d, s, fid, list(perm), list(flips)])
                rows.append(row)
            cubes[str(n)] = rows
        out = {"vertices": self.n_vertices, "cubes": cubes}
        if self.name:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> "CubeComplex":
        if not isinstance(data, dict) or "vertices" not in data:
            raise CubeComplexError("cube complex JSON needs a 'vertices' field")
        nv = data["vertices"]
        if isinstance(nv, list):
            nv = len(nv)
        if not isinstance(nv, int) or nv < 0:
            raise CubeComplexError("'vertices' must be a non-negative integer")
        cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
        for key, rows in (data.get("cubes") or {}).items():
            n = int(key)
            if n < 1 or n > MAX_DIMENSION:
                raise CubeComplexError(f"unsupported cube dimension {n}")
            parsed = []
            for row in rows:
                if len(row) != 2 * n:
                    raise CubeComplexError(f"{n}-cube must list {2 * n} faces, got {len(row)}")
                faces: List[Optional[FaceRef]] = [None] * (2 * n)
                for entry in row:
                    d, s, fid = int(entry[0]), int(entry[1]), int(entry[2])
                    if len(entry) > 3:
                        perm, flips = tuple(int(a) for a in entry[3]), tuple(int(a) for a in entry[4])
                    else:
                        perm, flips = _identity(n - 1)
                    if not (0 <= d < n and s in (0, 1)):
                        raise CubeComplexError(f"bad face slot ({d}, {s}) on a {n}-cube")
                    faces[2 * d + s] = (fid, perm, flips)
                if any(f is None for f in faces):
                    raise CubeComplexError(f"{n}-cube has a repeated or missing face slot")
                parsed.append(tuple(faces))  # type: ignore[arg-type]
            cubes[n] = parsed
        return cls(nv, cubes, name=str(data.get("name", "")))


def make_complex(n_vertices: int, cubes: Dict[int, List[Sequence]], name: str = "") -> CubeComplex:
    """Build a complex from lists of faces in the compact JSON-like form.

    Each n-cube is a list of 2n entries; an entry is either a bare cube id
    (faces listed in canonical order, identity orientation) or a tuple
    ``(id, perm, flips)``.
    """
    out: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    for n, rows in cubes.items():
        lst = []
        for row in rows:
            faces = []
            for entry in row:
                if isinstance(entry, int):
                    perm, flips = _identity(n - 1)
                    faces.append((entry, perm, flips))
                else:
                    fid, perm, flips = entry
                    faces.append((int(fid), tuple(perm), tuple(flips)))
            lst.append(tuple(faces))
        out[n] = lst
    return CubeComplex(n_vertices, out, name=name)


# ----------------------------------------------------------------------
# validation


@dataclass
class ValidationReport:
    counts: Tuple[int, ...]
    violations: List[dict]

    @property
    def valid(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"valid": self.valid, "counts": list(self.counts), "violations": self.violations}


def _face_chain(X: CubeComplex, n: int, k: int, steps: Sequence[Tuple[int, int]]) -> Tuple[int, CoordMap]:
    """Follow facets in the given order (coordinates named in the original cube)."""
    cur_n, cur_k = n, k
    # coord_map: original coordinate -> (current coordinate, accumulated flip)
    coord_map = {c: (c, 0) for c in range(n)}
    for d_orig, s_orig in steps:
        d, fl = coord_map.pop(d_orig)
        s = s_orig ^ fl
        fid, perm, flips = X.cubes[cur_n][cur_k][2 * d + s]
        new_map = {}
        for c, (cc, cf) in coord_map.items():
            j = cc if cc < d else cc - 1
            new_map[c] = (perm[j], cf ^ flips[j])
        coord_map = new_map
        cur_n, cur_k = cur_n - 1, fid
    return cur_k, tuple(coord_map[c] for c in sorted(coord_map))


def validate(X: CubeComplex) -> ValidationReport:
    """Check references, orientation data and commutation of face maps."""
    violations: List[dict] = []
    dims = sorted(X.cubes)
    for n in dims:
        if n < 1 or n > MAX_DIMENSION:
            violations.append({"kind": "bad dimension", "dim": n})
    counts = tuple(X.count(n) for n in range(max([0] + dims) + 1))
    dangling = False
    for n in dims:
        for k, faces in enumerate(X.cubes[n]):
            if len(faces) != 2 * n:
                violations.append({"kind": "wrong facet count", "cube": [n, k]})
                dangling = True
                continue
            for pos, (fid, perm, flips) in enumerate(faces):
                if not (0 <= fid < X.count(n - 1)):
                    violations.append({"kind": "dangling face", "cube": [n, k], "slot": list(divmod(pos, 2)), "ref": fid})
                    dangling = True
                if sorted(perm) != list(range(n - 1)) or len(flips) != n - 1 or any(f not in (0, 1) for f in flips):
                    violations.append({"kind": "bad orientation", "cube": [n, k], "slot": list(divmod(pos, 2))})
                    dangling = True
    if dangling:
        return ValidationReport(counts, violations)
    for n in dims:
        if n < 2:
            continue
        for k in range(X.count(n)):
            for d1, d2 in itertools.combinations(range(n), 2):
                for s1 in (0, 1):
                    for s2 in (0, 1):
                        a = _face_chain(X, n, k, [(d1, s1), (d2, s2)])
                        b = _face_chain(X, n, k, [(d2, s2), (d1, s1)])
                        if a != b:
                            violations.append(
                                {
                                    "kind": "face maps do not commute",
                                    "cube": [n, k],
                                    "directions": [d1, d2],
                                    "sides": [s1, s2],
                                }
                            )
    return ValidationReport(counts, violations)


def require_valid(X: CubeComplex) -> None:
    rep = validate(X)
    if not rep.valid:
        raise CubeComplexError(f"invalid cube complex: {rep.violations[0]}")


# ----------------------------------------------------------------------
# links and the flag condition

LinkVertex = Tuple[int, int]  # (edge id, end at the base vertex)


@dataclass
class VertexLink:
    base_vertex: int
    vertices: List[LinkVertex]
    # each simplex: (sorted tuple of link vertices as listed, cube (dim, id), corner)
    simplices: List[Tuple[Tuple[LinkVertex, ...], Tuple[int, int], int]]

    def simplex_sets(self) -> List[Tuple[LinkVertex, ...]]:
        return [s for s, _, _ in self.simplices]

    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for verts, _, _ in self.simplices:
            if len(verts) == 2 and verts[0] != verts[1]:
                g.add_edge(*verts)
        return g


def incidence(X: CubeComplex) -> Dict[int, List[Tuple[int, int, int]]]:
    """Cached map from each vertex to the (dim, id, corner) triples of cubes at it."""
    if X._incidence is None:
        X._incidence = X.vertex_cubes()
    return X._incidence


def link(X: CubeComplex, v: int) -> VertexLink:
    """Simplicial complex of cube corners at ``v`` (one simplex per corner)."""
    if not (0 <= v < X.n_vertices):
        raise CubeComplexError(f"unknown vertex {v}")
    verts: List[LinkVertex] = []
    simplices = []
    for n, k, x in incidence(X)[v]:
        if n == 1:
            verts.append((k, x))
        else:
            sim = tuple(X.corner_edge(n, k, x, d) for d in range(n))
            simplices.append((tuple(sorted(sim)), (n, k), x))
    verts.sort()
    simplices.sort()
    # zero-dimensional simplices are the edge ends themselves
    full = [((lv,), (1, lv[0]), lv[1]) for lv in verts] + simplices
    return VertexLink(v, verts, full)


@dataclass
class NpcReport:
    npc: bool
    violations: List[dict]

    def to_json(self) -> dict:
        return {"npc": self.npc, "violations": self.violations}


def _link_violations(L: VertexLink) -> List[dict]:
    out: List[dict] = []
    seen: Dict[frozenset, Tuple[Tuple[int, int], int]] = {}
    simplex_sets = set()
    for verts, cube, corner in L.simplices:
        if len(set(verts)) != len(verts):
            out.append({"vertex": L.base_vertex, "kind": "loop in link", "cube": list(cube), "corner": corner})
            continue
        key = frozenset(verts)
        if key in seen:
            out.append(
                {
                    "vertex": L.base_vertex,
                    "kind": "doubled simplex",
                    "simplex": [list(a) for a in verts],
                    "cubes": [list(seen[key][0]), list(cube)],
                }
            )
        else:
            seen[key] = (cube, corner)
            simplex_sets.add(key)
    g = L.graph()
    for clique in nx.find_cliques(g):
        if len(clique) >= 3 and frozenset(clique) not in simplex_sets:
            out.append(
                {"vertex": L.base_vertex, "kind": "empty simplex", "simplex": sorted(list(a) for a in clique)}
            )
    return out


def is_npc(X: CubeComplex) -> NpcReport:
    """Gromov's link condition: every vertex link is simplicial and flag."""
    require_valid(X)
    violations: List[dict] = []
    for v in range(X.n_vertices):
        violations.extend(_link_violations(link(X, v)))
    return NpcReport(not violations, violations)


# ----------------------------------------------------------------------
# subcomplexes


class Subcomplex:
    """A face-closed set of cubes of a parent complex."""

    def __init__(self, parent: CubeComplex, cells: Dict[int, Iterable[int]], check: bool = True):
        self.parent = parent
        self.cells: Dict[int, frozenset] = {n: frozenset(ids) for n, ids in cells.items() if ids}
        if check:
            missing = self.missing_faces()
            if missing:
                raise CubeComplexError(f"subcomplex is not face-closed: missing {missing[0]}")

    @classmethod
    def closure(cls, parent: CubeComplex, cells: Iterable[Tuple[int, int]]) -> "Subcomplex":
        acc: Dict[int, set] = {}
        stack = list(cells)
        while stack:
            n, k = stack.pop()
            bucket = acc.setdefault(n, set())
            if k in bucket:
                continue
            bucket.add(k)
            if n >= 1:
                for fid, _, _ in parent.cubes[n][k]:
                    stack.append((n - 1, fid))
        return cls(parent, acc, check=False)

    @classmethod
    def whole(cls, parent: CubeComplex) -> "Subcomplex":
        return cls(parent, {n: range(parent.count(n)) for n in range(parent.dimension + 1)}, check=False)

    def __contains__(self, cell: Tuple[int, int]) -> bool:
        n, k = cell
        return k in self.cells.get(n, ())

    def vertices(self) -> frozenset:
        return self.cells.get(0, frozenset())

    def is_empty(self) -> bool:
        return not self.cells.get(0)

    def size(self) -> int:
        return sum(len(v) for v in self.cells.values())

    def missing_faces(self) -> List[Tuple[int, int]]:
        out = []
        for n, ids in self.cells.items():
            if n == 0:
                continue
            for k in ids:
                for fid, _, _ in self.parent.cubes[n][k]:
                    if fid not in self.cells.get(n - 1, ()):
                        out.append((n - 1, fid))
        return out

    def intersection(self, other: "Subcomplex") -> "Subcomplex":
        if other.parent is not self.parent:
            raise CubeComplexError("subcomplexes of different parents")
        keys = set(self.cells) & set(other.cells)
        return Subcomplex(self.parent, {n: self.cells[n] & other.cells[n] for n in keys}, check=False)

    def union(self, other: "Subcomplex") -> "Subcomplex":
        if other.parent is not self.parent:
            raise CubeComplexError("subcomplexes of different parents")
        keys = set(self.cells) | set(other.cells)
        return Subcomplex(
            self.parent,
            {n: self.cells.get(n, frozenset()) | other.cells.get(n, frozenset()) for n in keys},
            check=False,
        )

    def components(self) -> List["Subcomplex"]:
        """Connected components, ordered by their smallest vertex."""
        uf = _UnionFind(self.parent.n_vertices)
        for e in self.cells.get(1, ()):
            a, b = self.parent.edge_ends(e)
            uf.union(a, b)
        buckets: Dict[int, Dict[int, set]] = {}
        for v in sorted(self.vertices()):
            buckets.setdefault(uf.find(v), {0: set()})[0].add(v)
        for n, ids in self.cells.items():
            if n == 0:
                continue
            for k in ids:
                root = uf.find(self.parent.corners(n, k)[0])
                buckets[root].setdefault(n, set()).add(k)
        order = sorted(buckets.values(), key=lambda c: min(c[0]))
        return [Subcomplex(self.parent, cells, check=False) for cells in order]

    def to_json(self) -> dict:
        return {str(n): sorted(ids) for n, ids in sorted(self.cells.items())}

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subcomplex):
            return NotImplemented
        a = {n: v for n, v in self.cells.items() if v}
        b = {n: v for n, v in other.cells.items() if v}
        return self.parent is other.parent and a == b

    def __repr__(self) -> str:
        sizes = {n: len(v) for n, v in sorted(self.cells.items())}
        return f"Subcomplex({sizes})"


def is_locally_convex(sub: Subcomplex) -> Tuple[bool, Optional[dict]]:
    """Check that no cube of dimension >= 2 has a corner in ``sub`` unless it lies in ``sub``."""
    missing = sub.missing_faces()
    if missing:
        raise CubeComplexError(f"subcomplex is not face-closed: missing {missing[0]}")
    X = sub.parent
    edges = sub.cells.get(1, frozenset())
    for n in range(2, X.dimension + 1):
        inside = sub.cells.get(n, frozenset())
        for k in range(X.count(n)):
            if k in inside:
                continue
            for x, spokes in enumerate(X.corner_edge_sets(n, k)):
                if spokes <= edges:
                    return False, {"cube": [n, k], "corner": x}
    return True, None


# ----------------------------------------------------------------------
# hyperplanes


@dataclass
class Hyperplane:
    id: int
    edge_class: frozenset
    carrier: Subcomplex
    self_crossing: bool
    one_sided: bool
    self_osculating: bool
    # orientation of each dual edge: which end lies on the "0" side; None if one-sided
    orientation: Optional[Dict[int, int]] = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "edges": sorted(self.edge_class),
            "carrier": self.carrier.to_json(),
            "self_crossing": self.self_crossing,
            "one_sided": self.one_sided,
            "self_osculating": self.self_osculating,
        }


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def edge_classes(X: CubeComplex) -> List[int]:
    """Representative hyperplane label for each edge (union-find over squares)."""
    uf = _UnionFind(X.count(1))
    for k, faces in enumerate(X.cubes.get(2, [])):
        uf.union(faces[0][0], faces[1][0])
        uf.union(faces[2][0], faces[3][0])
    return [uf.find(e) for e in range(X.count(1))]


def cube_direction_class(X: CubeComplex, n: int, k: int, d: int, classes: Sequence[int]) -> int:
    """Hyperplane label of the edges of cube (n, k) in direction ``d``."""
    eid, _ = X.corner_edge(n, k, 0, d)
    return classes[eid]


def hyperplanes(X: CubeComplex) -> List[Hyperplane]:
    """Hyperplanes as parallelism classes of edges, with carriers and pathology flags."""
    require_valid(X)
    classes = edge_classes(X)
    reps = sorted(set(classes))
    index = {r: i for i, r in enumerate(reps)}
    members: Dict[int, set] = {r: set() for r in reps}
    for e, r in enumerate(classes):
        members[r].add(e)

    crossing = {r: False for r in reps}
    carrier_cells: Dict[int, List[Tuple[int, int]]] = {r: [] for r in reps}
    for n in range(1, X.dimension + 1):
        for k in range(X.count(n)):
            labels = [cube_direction_class(X, n, k, d, classes) for d in range(n)]
            for r in set(labels):
                carrier_cells[r].append((n, k))
            if len(set(labels)) < len(labels):
                for r in labels:
                    if labels.count(r) > 1:
                        crossing[r] = True

    # two-sidedness: orient each dual edge consistently across squares
    orient: Dict[int, int] = {}
    one_sided = {r: False for r in reps}
    adjacency: Dict[int, List[Tuple[int, int]]] = {e: [] for e in range(X.count(1))}
    for k, faces in enumerate(X.cubes.get(2, [])):
        for d in (0, 1):
            # the two edges parallel to coordinate 1-d sit at (d, 0) and (d, 1)
            (ea, _, fa), (eb, _, fb) = faces[2 * d], faces[2 * d + 1]
            rel = fa[0] ^ fb[0]
            adjacency[ea].append((eb, rel))
            adjacency[eb].append((ea, rel))
    for r in reps:
        start = min(members[r])
        orient[start] = 0
        stack = [start]
        while stack:
            e = stack.pop()
            for f, rel in adjacency[e]:
                want = orient[e] ^ rel
                if f not in orient:
                    orient[f] = want
                    stack.append(f)
                elif orient[f] != want:
                    one_sided[r] = True

    osc = {r: False for r in reps}
    for v in range(X.n_vertices):
        L = link(X, v)
        g = L.graph()
        by_class: Dict[int, List[LinkVertex]] = {}
        for lv in L.vertices:
            by_class.setdefault(classes[lv[0]], []).append(lv)
        for r, lvs in by_class.items():
            for a, b in itertools.combinations(lvs, 2):
                if a[0] == b[0]:
                    continue
                if g.has_edge(a, b):
                    continue
                if one_sided[r]:
                    osc[r] = True
                elif (a[1] == orient[a[0]]) == (b[1] == orient[b[0]]):
                    osc[r] = True

    out = []
    for r in reps:
        carrier = Subcomplex.closure(X, carrier_cells[r])
        out.append(
            Hyperplane(
                id=index[r],
                edge_class=frozenset(members[r]),
                carrier=carrier,
                self_crossing=crossing[r],
                one_sided=one_sided[r],
                self_osculating=osc[r],
                orientation=None if one_sided[r] else {e: orient[e] for e in members[r]},
            )
        )
    return out


def edge_graph(X: CubeComplex) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(range(X.n_vertices))
    for e in range(X.count(1)):
        a, b = X.edge_ends(e)
        g.add_edge(a, b, key=e)
    return g


def is_connected(X: CubeComplex) -> bool:
    if X.n_vertices == 0:
        return False
    return nx.is_connected(edge_graph(X))


def extract(sub: Subcomplex, name: str = "") -> Tuple[CubeComplex, Dict[int, Dict[int, int]]]:
    """Copy a subcomplex out as a standalone complex.

    Returns the new complex and, per dimension, a map from parent ids to new ids.
    """
    X = sub.parent
    top = max([n for n, v in sub.cells.items() if v] + [0])
    ids: Dict[int, Dict[int, int]] = {}
    for n in range(top + 1):
        ids[n] = {k: i for i, k in enumerate(sorted(sub.cells.get(n, ())))}
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    for n in range(1, top + 1):
        rows = []
        for k in sorted(sub.cells.get(n, ())):
            rows.append(tuple((ids[n - 1][fid], perm, flips) for fid, perm, flips in X.cubes[n][k]))
        cubes[n] = rows
    return CubeComplex(len(ids[0]), cubes, name=name), ids


def product(A: CubeComplex, B: CubeComplex, name: str = "") -> Tuple[CubeComplex, Dict[Tuple[int, int, int, int], Tuple[int, int]]]:
    """Cartesian product; coordinates of the A-factor come first.

    Returns the product and a dictionary sending (p, a, q, b) to the
    (dimension, id) of the product cube of the p-cube a and q-cube b.
    """
    index: Dict[Tuple[int, int, int, int], Tuple[int, int]] = {}
    per_dim: Dict[int, List[Tuple[int, int, int, int]]] = {}
    for p in range(A.dimension + 1):
        for q in range(B.dimension + 1):
            for a in range(A.count(p)):
                for b in range(B.count(q)):
                    lst = per_dim.setdefault(p + q, [])
                    index[(p, a, q, b)] = (p + q, len(lst))
                    lst.append((p, a, q, b))
    cubes: Dict[int, List[Tuple[FaceRef, ...]]] = {}
    for n, lst in per_dim.items():
        if n == 0:
            continue
        rows = []
        for p, a, q, b in lst:
            faces: List[FaceRef] = []
            for d in range(n):
                for s in (0, 1):
                    if d < p:
                        fid, perm, flips = A.cubes[p][a][2 * d + s]
                        key = (p - 1, fid, q, b)
                        perm2 = tuple(perm) + tuple(p - 1 + i for i in range(q))
                        flips2 = tuple(flips) + (0,) * q
                    else:
                        fid, perm, flips = B.cubes[q][b][2 * (d - p) + s]
                        key = (p, a, q - 1, fid)
                        perm2 = tuple(range(p)) + tuple(p + i for i in perm)
                        flips2 = (0,) * p + tuple(flips)
                    faces.append((index[key][1], perm2, flips2))
            rows.append(tuple(faces))
        cubes[n] = rows
    return CubeComplex(len(per_dim.get(0, [])), cubes, name=name), index


def orientation_sign(perm: Sequence[int], flips: Sequence[int]) -> int:
    """+1 when a coordinate correspondence preserves orientation, else -1."""
    sign = perm_sign(perm)
    if sum(flips) % 2:
        sign = -sign
    return sign


def cube_boundary(X: CubeComplex, n: int, k: int) -> Dict[int, int]:
    """Cellular boundary of the n-cube k as a sparse vector over (n-1)-cubes."""
    out: Dict[int, int] = {}
    if n == 0:
        return out
    for d in range(n):
        for s in (0, 1):
            fid, perm, flips = X.cubes[n][k][2 * d + s]
            if n == 1:
                coeff = 1 if s == 1 else -1
            else:
                coeff = (-1) ** d * (1 if s == 1 else -1) * orientation_sign(perm, flips)
            out[fid] = out.get(fid, 0) + coeff
    return {key: v for key, v in out.items() if v}
