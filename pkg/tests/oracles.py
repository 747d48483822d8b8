"""Brute-force oracles written without reference to the package internals."""

import random


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


def overlap_components(w1, w2):
    """Components of the pairing of two cyclic words over a wedge of circles.

    Position pairs (x, y) are vertices.  Letter i of ``w1`` (from x = i to
    i + 1) matches letter j of ``w2`` when both read the same generator: with
    the same sign it joins (i, j) to (i + 1, j + 1), with opposite signs it
    joins (i, j + 1) to (i + 1, j).  Returns a list of (vertex pairs, matched
    letter pairs) with at least one letter pair.
    """
    n1, n2 = len(w1), len(w2)
    parent = {(x, y): (x, y) for x in range(n1) for y in range(n2)}
    letters = []
    for i, (g1, s1) in enumerate(w1):
        for j, (g2, s2) in enumerate(w2):
            if g1 != g2:
                continue
            if s1 == s2:
                a, b = (i, j), ((i + 1) % n1, (j + 1) % n2)
            else:
                a, b = (i, (j + 1) % n2), ((i + 1) % n1, j)
            letters.append((i, j, a))
            ra, rb = _find(parent, a), _find(parent, b)
            if ra != rb:
                parent[ra] = rb
    comps = {}
    for i, j, a in letters:
        comps.setdefault(_find(parent, a), set()).add((i, j))
    out = []
    for root, pairs in comps.items():
        verts = {v for v in parent if _find(parent, v) == root}
        out.append((verts, pairs))
    return out


def classical_pieces(words):
    """Set of (relator index, frozenset of its letter positions) over all pieces.

    Self-overlaps that contain a diagonal pair (x, x) or that close up into a
    full cycle are the trivial alignments and are discarded.
    """
    out = set()
    for i in range(len(words)):
        for j in range(i, len(words)):
            for verts, pairs in overlap_components(words[j], words[i]):
                if i == j:
                    closed = len(pairs) == len(verts)
                    if closed or any(x == y for x, y in verts):
                        continue
                out.add((i, frozenset(p[1] for p in pairs)))
                if i != j:
                    out.add((j, frozenset(p[0] for p in pairs)))
    return out


def random_cyclic_word(rng: random.Random, rank: int, length: int):
    """A cyclically reduced word of the given length, as (generator, sign) letters."""
    while True:
        w = []
        for _ in range(length):
            while True:
                letter = (rng.randrange(rank), rng.choice((1, -1)))
                if not w or letter != (w[-1][0], -w[-1][1]):
                    break
            w.append(letter)
        if length == 1 or w[0] != (w[-1][0], -w[-1][1]):
            return w


def grid_ball(d: int, R: int):
    """Lattice points of Z^d at l1 distance <= R from the origin."""
    pts = [()]
    for _ in range(d):
        pts = [p + (x,) for p in pts for x in range(-R, R + 1)]
    return [p for p in pts if sum(abs(x) for x in p) <= R]
