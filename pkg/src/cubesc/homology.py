"""Integral chain complexes, Smith normal form and homology of cube complexes and coned-off spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from .builders import DihedralArtin, LabeledGraph, maximal_joins, salvetti_of
from .cube_core import CubeComplex, cube_boundary, orientation_sign
from .presentation import ConedOffComplex, CubicalPresentation, PresentationError, cone_off

Matrix = List[List[int]]
Column = Dict[int, int]


class HomologyError(ValueError):
    """Raised for inputs outside the supported hypotheses."""


# ----------------------------------------------------------------------
# Smith normal form


def _identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], track: bool = True) -> Tuple[Matrix, Optional[Matrix], Optional[Matrix]]:
    """Return (D, U, V) with U·M·V = D diagonal, d1 | d2 | ..., U and V unimodular.

    With ``track`` off only D is computed (U and V are None).
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if track else None
    V = _identity(n) if track else None

    def swap_rows(i: int, j: int) -> None:
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, q: int) -> None:
        # row dst += q * row src
        if q == 0:
            return
        rs, rd = A[src], A[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        if U is not None:
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(src: int, dst: int, q: int) -> None:
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]

    for t in range(min(m, n)):
        # smallest nonzero entry of the remaining block becomes the pivot
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # a smaller remainder exists in row or column t; make it the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
    return A, U, V


def invariant_factors(M: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    D, _, _ = smith_normal_form(M, track=False)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i]:
            out.append(D[i][i])
    return out


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    A = [list(map(int, r)) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


# ----------------------------------------------------------------------
# chain complexes


@dataclass
class ChainComplex:
    """Free chain complex: ``boundary[n][k]`` is the boundary of the k-th n-cell."""

    ranks: List[int]
    boundary: List[List[Column]]
    names: List[List[tuple]] = field(default_factory=list)

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def matrix(self, n: int) -> Matrix:
        """Matrix of the boundary from degree n to degree n - 1."""
        if n <= 0 or n > self.top:
            rows = self.ranks[n - 1] if 0 < n <= self.top + 1 and n - 1 <= self.top else 0
            cols = self.ranks[n] if 0 <= n <= self.top else 0
            return [[0] * cols for _ in range(rows)]
        M = [[0] * self.ranks[n] for _ in range(self.ranks[n - 1])]
        for k, col in enumerate(self.boundary[n]):
            for i, c in col.items():
                M[i][k] += c
        return M

    def check(self) -> None:
        """Raise if the boundary of a boundary is nonzero."""
        for n in range(2, self.top + 1):
            for k, col in enumerate(self.boundary[n]):
                acc: Dict[int, int] = {}
                for i, c in col.items():
                    for j, c2 in self.boundary[n - 1][i].items():
                        acc[j] = acc.get(j, 0) + c * c2
                if any(acc.values()):
                    raise HomologyError(f"boundary of boundary is nonzero on cell {k} of degree {n}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * r for n, r in enumerate(self.ranks))


@dataclass
class HomologyResult:
    betti: List[int]
    torsion: List[List[int]]

    def to_json(self) -> dict:
        return {"H": [{"betti": b, "torsion": t} for b, t in zip(self.betti, self.torsion)]}

    def degree(self, n: int) -> Tuple[int, List[int]]:
        if 0 <= n < len(self.betti):
            return self.betti[n], self.torsion[n]
        return 0, []

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * b for n, b in enumerate(self.betti))


def homology(C: ChainComplex) -> HomologyResult:
    C.check()
    rank: Dict[int, int] = {}
    factors: Dict[int, List[int]] = {}
    for n in range(1, C.top + 1):
        f = invariant_factors(C.matrix(n)) if C.ranks[n] and C.ranks[n - 1] else []
        rank[n] = len(f)
        factors[n] = [x for x in f if x > 1]
    betti, tors = [], []
    for n in range(C.top + 1):
        b = C.ranks[n] - rank.get(n, 0) - rank.get(n + 1, 0)
        betti.append(b)
        tors.append(factors.get(n + 1, []))
    return HomologyResult(betti, tors)


def chain_complex(X: CubeComplex) -> ChainComplex:
    """Cellular chains of a cube complex; cubes carry their coordinate orientation."""
    top = X.dimension
    ranks = [X.count(n) for n in range(top + 1)]
    bd: List[List[Column]] = [[{} for _ in range(ranks[0])]]
    for n in range(1, top + 1):
        bd.append([cube_boundary(X, n, k) for k in range(ranks[n])])
    C = ChainComplex(ranks, bd, [[("X", n, k) for k in range(r)] for n, r in enumerate(ranks)])
    C.check()
    return C


def from_coned(K: ConedOffComplex) -> ChainComplex:
    top = K.dimension
    ranks = [len(K.labels.get(n, [])) for n in range(top + 1)]
    bd: List[List[Column]] = []
    for n in range(top + 1):
        if n == 0:
            bd.append([{} for _ in range(ranks[0])])
        else:
            bd.append([dict(c) for c in K.boundary.get(n, [])])
    return ChainComplex(ranks, bd, [list(K.labels.get(n, [])) for n in range(top + 1)])


def chain_map_matrix(pres: CubicalPresentation, i: int) -> Dict[int, List[Column]]:
    """Degree-wise images of the cells of cone i in the chains of the base complex."""
    rel = pres.relators[i]
    Y, f = rel.cone, rel.map
    out: Dict[int, List[Column]] = {0: [{v: 1} for v in f.images[0]]}
    for n in range(1, Y.dimension + 1):
        out[n] = [{t: orientation_sign(perm, flips)} for t, perm, flips in f.images[n]]
    return out


def mapping_cone(C_X: ChainComplex, sources: Sequence[ChainComplex], maps: Sequence[Dict[int, List[Column]]]) -> ChainComplex:
    """Cone of the augmented chain map from the sources into C_X.

    Degree n holds C_n(X) followed by C_{n-1} of every source, where each
    source gets an extra generator in degree -1 (its cone point).  The
    differential is d(x, y) = (dx + f(y), -dy).
    """
    top = max([C_X.top] + [S.top + 1 for S in sources])
    ranks = []
    offsets: List[List[int]] = []
    for n in range(top + 1):
        r = C_X.ranks[n] if n <= C_X.top else 0
        offs = []
        for S in sources:
            offs.append(r)
            if n == 0:
                r += 1
            elif n - 1 <= S.top:
                r += S.ranks[n - 1]
        offsets.append(offs)
        ranks.append(r)
    bd: List[List[Column]] = []
    for n in range(top + 1):
        cols: List[Column] = []
        if n <= C_X.top:
            for k in range(C_X.ranks[n]):
                cols.append(dict(C_X.boundary[n][k]) if n else {})
        for s, S in enumerate(sources):
            if n == 0:
                cols.append({})
                continue
            if n - 1 > S.top:
                continue
            for k in range(S.ranks[n - 1]):
                col: Column = {}
                for t, c in maps[s][n - 1][k].items():
                    col[t] = col.get(t, 0) + c
                if n - 1 == 0:
                    apex = offsets[0][s]
                    col[apex] = col.get(apex, 0) - 1
                else:
                    for j, c in S.boundary[n - 1][k].items():
                        key = offsets[n - 1][s] + j
                        col[key] = col.get(key, 0) - c
                cols.append({a: b for a, b in col.items() if b})
        bd.append(cols)
    C = ChainComplex(ranks, bd)
    C.check()
    return C


@dataclass
class ConedHomology:
    cw: HomologyResult
    mapping_cone: HomologyResult

    @property
    def agree(self) -> bool:
        return self.cw.betti == self.mapping_cone.betti and self.cw.torsion == self.mapping_cone.torsion

    def to_json(self) -> dict:
        return {"cw": self.cw.to_json(), "mapping_cone": self.mapping_cone.to_json(), "agree": self.agree}


def coned_homology(pres: CubicalPresentation, both: bool = False):
    """Homology of the coned-off space, by the mapping cone of the relator maps.

    With ``both`` set the explicit CW model is computed too and the pair is
    returned, so callers can compare the two routes.
    """
    for r in pres.relators:
        if r.truncated:
            raise HomologyError("coned homology needs compact relators")
    CX = chain_complex(pres.base)
    sources = [chain_complex(r.cone) for r in pres.relators]
    maps = [chain_map_matrix(pres, i) for i in range(len(pres.relators))]
    mc = homology(mapping_cone(CX, sources, maps))
    if not both:
        return mc
    cw = homology(from_coned(cone_off(pres)))
    return ConedHomology(_pad(cw, mc), _pad(mc, cw))


def _pad(a: HomologyResult, b: HomologyResult) -> HomologyResult:
    n = max(len(a.betti), len(b.betti))
    betti = a.betti + [0] * (n - len(a.betti))
    tors = a.torsion + [[] for _ in range(n - len(a.torsion))]
    # drop trailing zero groups so equal spaces compare equal
    while len(betti) > 1 and betti[-1] == 0 and not tors[-1]:
        betti.pop()
        tors.pop()
    return HomologyResult(betti, tors)


def normalized(h: HomologyResult) -> HomologyResult:
    return _pad(h, h)


# ----------------------------------------------------------------------
# CW models for Artin groups


@dataclass
class CWModel:
    """A CW complex with one vertex-free description: chains plus generator loops."""

    chains: ChainComplex
    loops: Dict[int, int]  # generator -> 1-cell


def _product(A: ChainComplex, B: ChainComplex) -> Tuple[ChainComplex, Dict[Tuple[int, int, int, int], Tuple[int, int]]]:
    """Cellular chains of a product of CW complexes with the Koszul sign."""
    top = A.top + B.top
    index: Dict[Tuple[int, int, int, int], Tuple[int, int]] = {}
    ranks = [0] * (top + 1)
    for p in range(A.top + 1):
        for q in range(B.top + 1):
            for a in range(A.ranks[p]):
                for b in range(B.ranks[q]):
                    index[(p, a, q, b)] = (p + q, ranks[p + q])
                    ranks[p + q] += 1
    bd: List[List[Column]] = [[{} for _ in range(r)] for r in ranks]
    for (p, a, q, b), (n, k) in index.items():
        col: Column = {}
        if p > 0:
            for a2, c in A.boundary[p][a].items():
                t = index[(p - 1, a2, q, b)][1]
                col[t] = col.get(t, 0) + c
        if q > 0:
            sgn = -1 if p % 2 else 1
            for b2, c in B.boundary[q][b].items():
                t = index[(p, a, q - 1, b2)][1]
                col[t] = col.get(t, 0) + sgn * c
        bd[n][k] = {x: y for x, y in col.items() if y}
    C = ChainComplex(ranks, bd)
    C.check()
    return C, index


def _word_column(word: Sequence[Tuple[int, int]], loops: Dict[int, int]) -> Column:
    col: Column = {}
    for g, s in word:
        col[loops[g]] = col.get(loops[g], 0) + s
    return {a: b for a, b in col.items() if b}


def factor_model(G: LabeledGraph, factor: Tuple[int, ...]) -> CWModel:
    """One-vertex presentation complex of a join factor.

    A single vertex gives a circle, an edge labelled m the dihedral Artin
    presentation complex, and an edgeless set a wedge of circles.
    """
    loops = {g: i for i, g in enumerate(factor)}
    ranks = [1, len(factor)]
    bd: List[List[Column]] = [[{}], [{} for _ in factor]]
    if len(factor) == 2 and G.has_edge(*factor):
        m = G.label(*factor)
        word = [(factor[x], s) for x, s in DihedralArtin(m).relator()]  # type: ignore[arg-type]
        ranks.append(1)
        bd.append([_word_column(word, loops)])
    return CWModel(ChainComplex(ranks, bd), loops)


def join_model(G: LabeledGraph, factors: Sequence[Tuple[int, ...]]) -> CWModel:
    """Product of factor models: a classifying space for the join's Artin group."""
    model = factor_model(G, factors[0])
    C, loops = model.chains, dict(model.loops)
    for f in factors[1:]:
        other = factor_model(G, f)
        C, index = _product(C, other.chains)
        new = {}
        for g, e in loops.items():
            new[g] = index[(1, e, 0, 0)][1]
        for g, e in other.loops.items():
            new[g] = index[(0, 0, 1, e)][1]
        loops = new
    return CWModel(C, loops)


def _salvetti_chains(g: nx.Graph, generators: Sequence[int]):
    S = salvetti_of(g, generators)
    return S, chain_complex(S.complex)


def w_star_model(G: LabeledGraph) -> ChainComplex:
    """Salvetti complex of the commuting subgraph with a disc on each relator cycle.

    The relator of an edge labelled m >= 3 is the cycle reading the two
    alternating words of length m against each other.
    """
    g = G.right_angled_part()
    S, CX = _salvetti_chains(g, range(G.n))
    loops = {i: S.cube_of[(i,)][1] for i in range(G.n)}
    discs = []
    for (i, j), m in sorted(G.edges.items()):
        if m is None or m == 2:
            continue
        word = [((i, j)[x], s) for x, s in DihedralArtin(m).relator()]
        discs.append(_word_column(word, loops))
    ranks = list(CX.ranks) + [0] * max(0, 3 - len(CX.ranks))
    bd = [list(c) for c in CX.boundary] + [[] for _ in range(len(ranks) - len(CX.boundary))]
    if len(bd) < 2:
        bd.append([])
    while len(bd) < 3:
        bd.append([])
    ranks[2] += len(discs)
    bd[2] = bd[2] + discs
    C = ChainComplex(ranks, bd)
    C.check()
    return C


def glued_model(G: LabeledGraph, joins: Sequence[Tuple[Tuple[int, ...], ...]]) -> ChainComplex:
    """Double mapping cylinder gluing the join models to the Salvetti complex.

    Each join model is attached along the Salvetti complex of the
    commuting part of the join, which sits in both pieces.
    """
    g = G.right_angled_part()
    S, CX = _salvetti_chains(g, range(G.n))
    sources = []
    maps_x = []
    maps_j = []
    for factors in joins:
        verts = sorted(v for f in factors for v in f)
        sub = g.subgraph(verts)
        Sk, Ck = _salvetti_chains(sub, verts)
        J = join_model(G, factors)
        # a Salvetti cube of the join is a clique taking at most one vertex per factor
        fx: Dict[int, List[Column]] = {n: [] for n in range(Ck.top + 1)}
        fj: Dict[int, List[Column]] = {n: [] for n in range(Ck.top + 1)}
        by_id = {v: k for k, v in Sk.cube_of.items()}
        for n in range(Ck.top + 1):
            for k in range(Ck.ranks[n]):
                clique = by_id[(n, k)]
                fx[n].append({S.cube_of[clique][1]: 1})
                fj[n].append({_join_cell(G, factors, J, clique): 1})
        sources.append(Ck)
        maps_x.append(fx)
        maps_j.append((J, fj))
    # chains of the target: Salvetti complex followed by every join model
    pieces = [CX] + [J.chains for J, _ in maps_j]
    top = max(P.top for P in pieces)
    offs: List[List[int]] = []
    ranks = []
    for n in range(top + 1):
        r, o = 0, []
        for P in pieces:
            o.append(r)
            r += P.ranks[n] if n <= P.top else 0
        offs.append(o)
        ranks.append(r)
    bd: List[List[Column]] = []
    for n in range(top + 1):
        cols = []
        for p, P in enumerate(pieces):
            if n > P.top:
                continue
            for col in P.boundary[n]:
                cols.append({offs[n - 1][p] + a: b for a, b in col.items()} if n else {})
        bd.append(cols)
    T = ChainComplex(ranks, bd)
    T.check()
    # the gluing map: x -> (inclusion into Salvetti) - (inclusion into join)
    glue = []
    for s, (fx, (J, fj)) in enumerate(zip(maps_x, maps_j)):
        m: Dict[int, List[Column]] = {}
        for n in fx:
            m[n] = []
            for k in range(len(fx[n])):
                col: Column = {}
                for a, b in fx[n][k].items():
                    col[offs[n][0] + a] = col.get(offs[n][0] + a, 0) + b
                for a, b in fj[n][k].items():
                    col[offs[n][s + 1] + a] = col.get(offs[n][s + 1] + a, 0) - b
                m[n].append(col)
        glue.append(m)
    return _unreduced_cone(T, sources, glue)


def _join_cell(G: LabeledGraph, factors, J: CWModel, clique: Tuple[int, ...]) -> int:
    """Cell of the join model that is the product of the clique's generator loops."""
    if not clique:
        return 0
    # rebuild the product index to find the cell; factors contribute a loop or the vertex
    model = factor_model(G, factors[0])
    C = model.chains
    cur = (1, model.loops[clique_member(clique, factors[0])]) if clique_member(clique, factors[0]) is not None else (0, 0)
    for f in factors[1:]:
        other = factor_model(G, f)
        C2, index = _product(C, other.chains)
        g = clique_member(clique, f)
        o = (1, other.loops[g]) if g is not None else (0, 0)
        cur = index[(cur[0], cur[1], o[0], o[1])]
        C = C2
    return cur[1]


def clique_member(clique: Tuple[int, ...], factor: Tuple[int, ...]) -> Optional[int]:
    hit = [v for v in clique if v in factor]
    if len(hit) > 1:
        raise HomologyError("a commuting clique meets a join factor twice")
    return hit[0] if hit else None


def _unreduced_cone(T: ChainComplex, sources: Sequence[ChainComplex], maps: Sequence[Dict[int, List[Column]]]) -> ChainComplex:
    """Chains of T with a cylinder on each source glued along the given map.

    Degree n gets T_n plus one copy of every source's (n-1)-cells, with
    d(y) = f(y) - (dy shifted).  Unlike the cone, no cone point is added.
    """
    top = max([T.top] + [S.top + 1 for S in sources])
    ranks, offs = [], []
    for n in range(top + 1):
        r = T.ranks[n] if n <= T.top else 0
        o = []
        for S in sources:
            o.append(r)
            if 1 <= n and n - 1 <= S.top:
                r += S.ranks[n - 1]
        offs.append(o)
        ranks.append(r)
    bd: List[List[Column]] = []
    for n in range(top + 1):
        cols: List[Column] = []
        if n <= T.top:
            cols.extend(dict(c) if n else {} for c in T.boundary[n])
        for s, S in enumerate(sources):
            if n == 0 or n - 1 > S.top:
                continue
            for k in range(S.ranks[n - 1]):
                col = dict(maps[s][n - 1][k])
                if n - 1 > 0:
                    for j, c in S.boundary[n - 1][k].items():
                        key = offs[n - 1][s] + j
                        col[key] = col.get(key, 0) - c
                cols.append({a: b for a, b in col.items() if b})
        bd.append(cols)
    C = ChainComplex(ranks, bd)
    C.check()
    return C


@dataclass
class DirectSumReport:
    graph: dict
    case: str  # "commuting-free" or "joins"
    threshold: int
    rows: List[dict]
    joins: List[List[List[int]]]

    @property
    def ok(self) -> bool:
        return all(r["equal"] for r in self.rows if r["n"] >= self.threshold)

    def to_json(self) -> dict:
        return {"graph": self.graph, "case": self.case, "threshold": self.threshold, "rows": self.rows, "joins": self.joins, "ok": self.ok}


def _group(h: HomologyResult, n: int) -> dict:
    b, t = h.degree(n)
    return {"betti": b, "torsion": list(t)}


def _direct_sum(parts: Sequence[dict]) -> dict:
    b = sum(p["betti"] for p in parts)
    t = sorted(x for p in parts for x in p["torsion"])
    return {"betti": b, "torsion": _normal_torsion(t)}


def _normal_torsion(ts: Sequence[int]) -> List[int]:
    """Invariant factors of a direct sum of cyclic groups."""
    if not ts:
        return []
    D = [[0] * len(ts) for _ in ts]
    for i, x in enumerate(ts):
        D[i][i] = x
    return [x for x in invariant_factors(D) if x > 1]


def verify_direct_sum(G: LabeledGraph, nmax: int = 5) -> DirectSumReport:
    """Compare integral homology of the Artin group with the predicted direct sum."""
    for (i, j), m in G.edges.items():
        if m in (3, 4):
            raise HomologyError(f"edge ({i}, {j}) has label {m}; labels 3 and 4 are outside the supported hypotheses")
    g = G.right_angled_part()
    nonc = [(i, j) for (i, j), m in G.edges.items() if m is not None and m != 2]
    commuting_free = True
    for i, j in nonc:
        for k in range(G.n):
            if k not in (i, j) and g.has_edge(k, i) and g.has_edge(k, j):
                commuting_free = False
    S, CX = _salvetti_chains(g, range(G.n))
    H_bar = homology(CX)
    rows = []
    if commuting_free:
        H_lhs = homology(w_star_model(G))
        threshold = 3
        joins: List = []
        for n in range(nmax + 1):
            lhs, rhs = _group(H_lhs, n), _group(H_bar, n)
            rows.append({"n": n, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
        return DirectSumReport(G.to_json(), "commuting-free", threshold, rows, joins)
    joins = maximal_joins(G)
    N = 0
    for factors in joins:
        verts = [v for f in factors for v in f]
        sub = g.subgraph(verts)
        N = max(N, max((len(c) for c in nx.find_cliques(sub)), default=0))
    threshold = N + 2
    H_lhs = homology(glued_model(G, joins))
    H_joins = [homology(join_model(G, f).chains) for f in joins]
    for n in range(nmax + 1):
        lhs = _group(H_lhs, n)
        rhs = _direct_sum([_group(H_bar, n)] + [_group(h, n) for h in H_joins])
        rows.append({"n": n, "lhs": lhs, "rhs": rhs, "equal": lhs == rhs})
    return DirectSumReport(G.to_json(), "joins", threshold, rows, [[list(f) for f in fs] for fs in joins])


# ----------------------------------------------------------------------
# dimension bounds


@dataclass
class CdBoundsReport:
    dim_base: int
    max_cone: int
    lower: int
    upper: int
    note: str = "dimensions of the base and of the cones stand in for cohomological dimensions"

    def to_json(self) -> dict:
        return {"dim_base": self.dim_base, "max_cone": self.max_cone, "lower": self.lower, "upper": self.upper, "note": self.note}


def cd_bounds(pres: CubicalPresentation, certified: bool) -> CdBoundsReport:
    """Interval [dim X - max dim Y_i, max(dim X, max dim Y_i + 1)] using dimension proxies.

    ``certified`` must state that the presentation passed the C(9) check.
    With no relators the maximum over cones is taken to be 0.
    """
    if not certified:
        raise PresentationError("dimension bounds need a presentation certified C(9)")
    dX = pres.base.dimension
    dims = [max(1, r.cone.dimension) for r in pres.relators]
    my = max(dims) if dims else 0
    lower = max(0, dX - my)
    upper = max(dX, my + 1) if dims else dX
    return CdBoundsReport(dX, my, lower, upper)
