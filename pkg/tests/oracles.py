"""Brute-force reference implementations used to check the library.

Nothing here calls the canonical-labeling code: isomorphisms are found by
backtracking over edge bijections, and ranks by rational elimination.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import gcd

from clovercalc.diagrams import OrientedTrivalentGraph


def matchings(items):
    items = list(items)
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in matchings(rest):
            yield [(first, items[i])] + m


def slot_graph(n: int, pairs) -> OrientedTrivalentGraph:
    """Graph whose vertex ``v`` owns slots ``3v, 3v+1, 3v+2`` in that cyclic order."""
    ends, hid = [], {}
    for e, (p, q) in enumerate(pairs):
        ends += [p // 3, q // 3]
        hid[p], hid[q] = 2 * e, 2 * e + 1
    orders = tuple(tuple(hid[3 * v + i] for i in range(3)) for v in range(n))
    return OrientedTrivalentGraph(n, tuple(ends), orders)


def all_slot_graphs(k: int):
    for pairs in matchings(range(6 * k)):
        yield slot_graph(2 * k, pairs)


def underlying_key(g: OrientedTrivalentGraph) -> tuple:
    """Isomorphism invariant of the unoriented multigraph (exhaustive over vertex perms)."""
    return min(
        tuple(sorted(tuple(sorted((p[u], p[v]))) for u, v in g.edges))
        for p in permutations(range(g.vertex_count))
    )


def _is_rotation(a, b):
    a, b = tuple(a), tuple(b)
    return b in (a, a[1:] + a[:1], a[2:] + a[:2])


def isomorphism_signs(g: OrientedTrivalentGraph, h: OrientedTrivalentGraph) -> set[int]:
    """Orientation signs of the isomorphisms ``g -> h`` of underlying graphs.

    An isomorphism maps edges to edges (with a direction) and vertices to
    vertices; its sign is the product over vertices of +1 when it carries the
    cyclic order of ``g`` onto that of ``h`` and -1 otherwise. Stops early
    once both signs have been seen.
    """
    if g.vertex_count != h.vertex_count or g.edge_count != h.edge_count:
        return set()
    if g.vertex_count == 0:
        return {1}
    m = g.edge_count
    sigma = [0] * (2 * m)
    phi: dict[int, int] = {}
    used = [False] * m
    results: set[int] = set()

    order, touched, pending = [], set(), list(range(m))
    while pending:
        pick = next((e for e in pending if {g.ends[2 * e], g.ends[2 * e + 1]} & touched), pending[0])
        pending.remove(pick)
        order.append(pick)
        touched.update((g.ends[2 * pick], g.ends[2 * pick + 1]))

    def place(x, y, undo):
        vx, vy = g.ends[x], h.ends[y]
        if vx in phi:
            return phi[vx] == vy
        if vy in phi.values():
            return False
        phi[vx] = vy
        undo.append(vx)
        return True

    def rec(t):
        if t == m:
            s = 1
            for v, w in phi.items():
                if not _is_rotation(h.orders[w], [sigma[x] for x in g.orders[v]]):
                    s = -s
            results.add(s)
            return len(results) == 2
        e = order[t]
        g_loop = g.ends[2 * e] == g.ends[2 * e + 1]
        for f in range(m):
            if used[f] or g_loop != (h.ends[2 * f] == h.ends[2 * f + 1]):
                continue
            for y0, y1 in ((2 * f, 2 * f + 1), (2 * f + 1, 2 * f)):
                undo: list[int] = []
                if place(2 * e, y0, undo) and place(2 * e + 1, y1, undo):
                    sigma[2 * e], sigma[2 * e + 1] = y0, y1
                    used[f] = True
                    if rec(t + 1):
                        return True
                    used[f] = False
                for v in undo:
                    del phi[v]
        return False

    rec(0)
    return results


def has_odd_automorphism(g: OrientedTrivalentGraph) -> bool:
    return -1 in isomorphism_signs(g, g)


# ---------------------------------------------------------------------------
# IHX and the brute-force quotient


def jacobi_triple(g: OrientedTrivalentGraph, e: int, anchor: int):
    """I, H, X at edge ``e`` from the four legs around it.

    ``anchor`` picks which half-edge of ``e`` marks the first vertex. The
    legs are the half-edges following ``e`` cyclically at each end; H and X
    swap the second leg at the first vertex with one of the legs at the other.
    """
    h0 = 2 * e + anchor
    h1 = h0 ^ 1
    u, v = g.ends[h0], g.ends[h1]
    ou, ov = list(g.orders[u]), list(g.orders[v])
    iu, iv = ou.index(h0), ov.index(h1)
    a, b = ou[(iu + 1) % 3], ou[(iu + 2) % 3]
    c, d = ov[(iv + 1) % 3], ov[(iv + 2) % 3]
    out = []
    for at_u, at_v in (((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))):
        ends = list(g.ends)
        for x in at_u:
            ends[x] = u
        for x in at_v:
            ends[x] = v
        orders = list(g.orders)
        orders[u] = (h0,) + at_u
        orders[v] = (h1,) + at_v
        out.append(OrientedTrivalentGraph(g.vertex_count, tuple(ends), tuple(orders)))
    return out


def rational_rank(rows) -> int:
    m = [[Fraction(x) for x in r] for r in rows]
    rank, col = 0, 0
    width = len(m[0]) if m else 0
    while rank < len(m) and col < width:
        piv = next((i for i in range(rank, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][col]:
                f = m[i][col] / m[rank][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


class BruteQuotient:
    """Diagram space presented over brute-force isomorphism classes.

    ``generators`` are representatives of the loopless oriented graphs, one
    per underlying isomorphism class; a graph is expressed as
    ``sign * [rep]`` through :func:`isomorphism_signs`.
    """

    def __init__(self, graphs):
        self.reps: list[OrientedTrivalentGraph] = []
        self.index: dict[tuple, int] = {}
        for g in graphs:
            if g.has_loops:
                continue
            key = underlying_key(g)
            if key not in self.index:
                self.index[key] = len(self.reps)
                self.reps.append(g)
        self.torsion = [has_odd_automorphism(r) for r in self.reps]

    def express(self, g):
        i = self.index[underlying_key(g)]
        signs = isomorphism_signs(g, self.reps[i])
        return i, min(signs) if len(signs) == 2 else signs.pop()

    def relations(self):
        width = len(self.reps)
        rows = []
        for i, t in enumerate(self.torsion):
            if t:
                rows.append([2 if j == i else 0 for j in range(width)])
        for g in self.reps:
            for e in range(g.edge_count):
                for anchor in (0, 1):
                    triple = jacobi_triple(g, e, anchor)
                    if any(x.has_loops for x in triple):
                        continue
                    row = [0] * width
                    for coeff, x in zip((1, -1, 1), triple):
                        i, s = self.express(x)
                        row[i] += coeff * s
                    rows.append(row)
        return rows

    def free_rank(self) -> int:
        rows = self.relations()
        return len(self.reps) - (rational_rank(rows) if rows else 0)


# ---------------------------------------------------------------------------
# integer matrices


def minors_gcd(a, k: int) -> int:
    rows, cols = len(a), len(a[0])
    g = 0
    for rs in combinations(range(rows), k):
        for cs in combinations(range(cols), k):
            g = gcd(g, _det([[a[i][j] for j in cs] for i in rs]))
    return g


def _det(m):
    if len(m) == 1:
        return m[0][0]
    return sum((-1) ** j * m[0][j] * _det([r[:j] + r[j + 1:] for r in m[1:]]) for j in range(len(m)))


def invariant_factors_by_minors(a) -> list[int]:
    """Invariant factors as ratios of determinantal divisors."""
    out, prev = [], 1
    for k in range(1, min(len(a), len(a[0])) + 1):
        dk = minors_gcd(a, k)
        if dk == 0:
            break
        out.append(dk // prev)
        prev = dk
    return out


def leibniz_det(m):
    return _det(m) if m else 1
