"""Vertex-oriented trivalent graphs.

Half-edge conventions: edge ``e`` owns half-edges ``2e`` and ``2e + 1``.
``ends[h]`` is the vertex carrying half-edge ``h`` and ``orders[v]`` is the
cyclic triple of half-edges at ``v``, read up to rotation.

Canonical form. A labeled graph is encoded by its sorted list of edges as
vertex pairs ``(u, v)`` with ``u <= v``. The canonical representative of a
class is the labeling minimizing that list; its edges are numbered in sorted
order, half-edge ``2e`` sits at the smaller endpoint, and every vertex carries
the increasing triple of its half-edges. Since each vertex has exactly two
cyclic orders, the increasing triple is always the minimal rotation, so the
representative is fixed by the underlying multigraph alone and the AS relation
becomes a sign.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence

DEFAULT_MAX_DEGREE = 5


class ResourceLimitError(RuntimeError):
    """Raised when a requested computation exceeds a configured bound."""


class InvalidGraphError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class Violation(NamedTuple):
    kind: str
    index: int | None
    detail: str

    def __str__(self):
        where = "" if self.index is None else f" at {self.index}"
        return f"{self.kind}{where}: {self.detail}"


@dataclass(frozen=True)
class OrientedTrivalentGraph:
    vertex_count: int
    ends: tuple[int, ...]
    orders: tuple[tuple[int, int, int], ...]
    _encoding: tuple = field(default=None, init=False, repr=False, compare=False, hash=False)

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Sequence[int]],
                   orders: Iterable[Sequence[int]]) -> "OrientedTrivalentGraph":
        ends = []
        for u, v in edges:
            ends.extend((u, v))
        return cls(vertex_count, tuple(ends), tuple(tuple(o) for o in orders))

    @property
    def edge_count(self) -> int:
        return len(self.ends) // 2

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple((self.ends[2 * e], self.ends[2 * e + 1]) for e in range(self.edge_count))

    @property
    def degree(self) -> int:
        return self.vertex_count // 2

    def loops(self) -> list[int]:
        return [e for e, (u, v) in enumerate(self.edges) if u == v]

    @property
    def has_loops(self) -> bool:
        return bool(self.loops())

    def encoding(self) -> tuple:
        """Sorted edge list; equals the class key when ``self`` is canonical."""
        if self._encoding is None:
            enc = tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges))
            object.__setattr__(self, "_encoding", enc)
        return self._encoding

    def key(self) -> tuple:
        return (self.vertex_count, self.encoding())

    def __lt__(self, other):
        return self.key() < other.key()


@dataclass(frozen=True)
class SignedClass:
    canonical: OrientedTrivalentGraph
    sign: int
    torsion_flag: bool


def theta(reversed_vertex: bool = False) -> OrientedTrivalentGraph:
    """Two vertices joined by three edges; aligned orders unless asked otherwise."""
    second = (5, 3, 1) if reversed_vertex else (1, 3, 5)
    return OrientedTrivalentGraph.from_edges(2, [(0, 1)] * 3, [(0, 2, 4), second])


def validate_graph(g: OrientedTrivalentGraph) -> list[Violation]:
    out = []
    n = g.vertex_count
    if n < 0:
        return [Violation("vertex-count", None, f"negative vertex count {n}")]
    if len(g.ends) % 2:
        out.append(Violation("pairing", None, "odd number of half-edges; pairing is not perfect"))
    if len(g.orders) != n:
        out.append(Violation("order-count", None, f"{len(g.orders)} cyclic orders for {n} vertices"))
    incident: dict[int, list[int]] = {v: [] for v in range(n)}
    for h, v in enumerate(g.ends):
        if not 0 <= v < n:
            out.append(Violation("incidence", h // 2, f"half-edge {h} attached to missing vertex {v}"))
        else:
            incident[v].append(h)
    for v in range(n):
        if len(incident[v]) != 3:
            out.append(Violation("valence", v, f"vertex {v} has {len(incident[v])} half-edges"))
    for v, order in enumerate(g.orders[:n]):
        if len(order) != 3 or len(set(order)) != 3:
            out.append(Violation("order", v, f"cyclic order {tuple(order)} is not a triple of distinct half-edges"))
        elif sorted(order) != sorted(incident.get(v, [])):
            out.append(Violation("order", v, f"cyclic order {tuple(order)} does not match incident half-edges {incident.get(v)}"))
    return out


def _require_valid(g):
    violations = validate_graph(g)
    if violations:
        raise InvalidGraphError(violations)


def reverse_vertex_order(g: OrientedTrivalentGraph, v: int) -> OrientedTrivalentGraph:
    if not 0 <= v < g.vertex_count:
        raise IndexError(f"vertex {v} out of range")
    a, b, c = g.orders[v]
    orders = list(g.orders)
    orders[v] = (a, c, b)
    return OrientedTrivalentGraph(g.vertex_count, g.ends, tuple(orders))


def relabel(g: OrientedTrivalentGraph, vertex_perm: Sequence[int],
            edge_perm: Sequence[int], flips: Sequence[bool]) -> OrientedTrivalentGraph:
    """Apply an explicit relabeling: vertex ``v`` becomes ``vertex_perm[v]``,
    edge ``e`` becomes ``edge_perm[e]`` with its half-edges swapped if ``flips[e]``.
    Cyclic orders are carried along unchanged, so the result is isomorphic to ``g``
    as an oriented graph."""
    m = g.edge_count
    hmap = [0] * (2 * m)
    for e in range(m):
        t = edge_perm[e]
        lo, hi = (2 * t + 1, 2 * t) if flips[e] else (2 * t, 2 * t + 1)
        hmap[2 * e], hmap[2 * e + 1] = lo, hi
    ends = [0] * (2 * m)
    for h, v in enumerate(g.ends):
        ends[hmap[h]] = vertex_perm[v]
    orders = [None] * g.vertex_count
    for v, order in enumerate(g.orders):
        orders[vertex_perm[v]] = tuple(hmap[h] for h in order)
    return OrientedTrivalentGraph(g.vertex_count, tuple(ends), tuple(orders))


# ---------------------------------------------------------------------------
# canonical labeling


def _multiplicities(g: OrientedTrivalentGraph) -> list[Counter]:
    mult = [Counter() for _ in range(g.vertex_count)]
    for u, v in g.edges:
        mult[u][v] += 1
        if u != v:
            mult[v][u] += 1
    return mult


def _optimal_labelings(n: int, mult: list[Counter]) -> tuple[tuple, list[list[int]]]:
    """All vertex labelings minimizing the sorted edge list.

    In an optimal labeling the unlabeled neighbours of the vertex whose row is
    being written always take the next free labels, so the search only branches
    over the order of those neighbours and over the start of each component.
    """
    best: list = [None]
    found: list[list[int]] = []
    lab = [-1] * n
    inv = [-1] * n

    def row_for(i, w, fresh_order, next_free):
        row = [(i, i)] * mult[w][w]
        labeled = sorted(lab[x] for x in mult[w] if x != w and lab[x] > i for _ in range(mult[w][x]))
        row.extend((i, j) for j in labeled)
        for off, x in enumerate(fresh_order):
            row.extend([(i, next_free + off)] * mult[w][x])
        return row

    def search(i, next_free, prefix):
        if best[0] is not None:
            cut = best[0][: len(prefix)]
            if tuple(prefix) > cut:
                return
        if i == n:
            enc = tuple(prefix)
            if best[0] is None or enc < best[0]:
                best[0] = enc
                found.clear()
            if enc == best[0]:
                found.append(list(lab))
            return
        if i == next_free:
            for w in range(n):
                if lab[w] < 0:
                    lab[w], inv[i] = i, w
                    step(i, next_free + 1, prefix)
                    lab[w], inv[i] = -1, -1
            return
        step(i, next_free, prefix)

    def step(i, next_free, prefix):
        w = inv[i]
        fresh = [x for x in mult[w] if x != w and lab[x] < 0]
        for order in itertools.permutations(fresh):
            row = row_for(i, w, order, next_free)
            for off, x in enumerate(order):
                lab[x], inv[next_free + off] = next_free + off, x
            search(i + 1, next_free + len(order), prefix + row)
            for off, x in enumerate(order):
                lab[x], inv[next_free + off] = -1, -1

    search(0, 0, [])
    return best[0], found


def _labeling_sign(g: OrientedTrivalentGraph, lab: Sequence[int], encoding: tuple) -> int:
    """AS sign of the isomorphism ``g -> canonical`` induced by a vertex labeling."""
    slots: dict[tuple[int, int], list[int]] = {}
    for t, pair in enumerate(encoding):
        slots.setdefault(pair, []).append(t)
    used: Counter = Counter()
    hmap = [0] * len(g.ends)
    for e, (u, v) in enumerate(g.edges):
        a, b = lab[u], lab[v]
        pair = (min(a, b), max(a, b))
        t = slots[pair][used[pair]]
        used[pair] += 1
        if a <= b:
            hmap[2 * e], hmap[2 * e + 1] = 2 * t, 2 * t + 1
        else:
            hmap[2 * e], hmap[2 * e + 1] = 2 * t + 1, 2 * t
    sign = 1
    for order in g.orders:
        x, y, z = (hmap[h] for h in order)
        if not (x < y < z or y < z < x or z < x < y):
            sign = -sign
    return sign


def canonical_graph(n: int, encoding: tuple) -> OrientedTrivalentGraph:
    ends = []
    for u, v in encoding:
        ends.extend((u, v))
    at: list[list[int]] = [[] for _ in range(n)]
    for h, v in enumerate(ends):
        at[v].append(h)
    return OrientedTrivalentGraph(n, tuple(ends), tuple(tuple(sorted(hs)) for hs in at))


def canonicalize(g: OrientedTrivalentGraph) -> SignedClass:
    """Signed canonical form modulo AS.

    ``sign`` relates ``g`` to the canonical representative. ``torsion_flag`` is
    set when some automorphism reverses an odd number of vertex orders, i.e.
    the class is its own negative; the sign is then reported as +1.
    """
    _require_valid(g)
    return _canonicalize_cached(g)


@lru_cache(maxsize=1 << 16)
def _canonicalize_cached(g: OrientedTrivalentGraph) -> SignedClass:
    n = g.vertex_count
    encoding, labelings = _optimal_labelings(n, _multiplicities(g))
    canon = canonical_graph(n, encoding if encoding is not None else ())
    if n == 0:
        return SignedClass(canon, 1, False)
    if any(u == v for u, v in encoding):
        # swapping the two half-edges of a loop is an odd automorphism
        return SignedClass(canon, 1, True)
    signs = {_labeling_sign(g, lab, encoding) for lab in labelings}
    if len(signs) > 1:
        return SignedClass(canon, 1, True)
    return SignedClass(canon, signs.pop(), False)


# ---------------------------------------------------------------------------
# enumeration


def _bfs_encodings(n: int, connected_only: bool) -> Iterator[tuple]:
    """Every sorted edge list with the breadth-first shape of a canonical encoding.

    Loopless only. Each canonical encoding appears among these exactly once.
    """
    left = [3] * n

    def rows(i, next_free, prefix):
        if i == n:
            if next_free == n and not any(left):
                yield tuple(prefix)
            return
        if i == next_free:
            if connected_only and i > 0:
                return
            next_free += 1
        r = left[i]
        older = [j for j in range(i + 1, next_free) if left[j] > 0]
        for sub_r in range(r + 1):
            for picks in _multisets(older, sub_r, left):
                for fresh in _compositions_desc(r - sub_r, n - next_free):
                    if any(m > 3 for m in fresh):
                        continue
                    row = [(i, j) for j in picks]
                    for off, m in enumerate(fresh):
                        row.extend([(i, next_free + off)] * m)
                    for j in picks:
                        left[j] -= 1
                    for off, m in enumerate(fresh):
                        left[next_free + off] = 3 - m
                    saved = left[i]
                    left[i] = 0
                    yield from rows(i + 1, next_free + len(fresh), prefix + row)
                    left[i] = saved
                    for off in range(len(fresh)):
                        left[next_free + off] = 3
                    for j in picks:
                        left[j] += 1

    yield from rows(0, 0, [])


def _multisets(items, size, cap):
    """Sorted multisets of ``items`` of the given size respecting ``cap``."""
    def rec(start, size, acc):
        if size == 0:
            yield list(acc)
            return
        for idx in range(start, len(items)):
            j = items[idx]
            if acc.count(j) < cap[j]:
                acc.append(j)
                yield from rec(idx, size - 1, acc)
                acc.pop()
    yield from rec(0, size, [])


def _compositions_desc(total, max_parts):
    """Non-increasing sequences of positive integers summing to ``total``."""
    def rec(total, bound, acc):
        if total == 0:
            yield tuple(acc)
            return
        if len(acc) >= max_parts:
            return
        for m in range(min(total, bound), 0, -1):
            acc.append(m)
            yield from rec(total - m, m, acc)
            acc.pop()
    yield from rec(total, 3, [])


def enumerate_diagrams(k: int, connected_only: bool = False,
                       max_degree: int = DEFAULT_MAX_DEGREE) -> list[OrientedTrivalentGraph]:
    """Canonical loopless trivalent graphs with ``2k`` vertices, one per class."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k > max_degree:
        raise ResourceLimitError(f"degree {k} exceeds enumeration bound {max_degree}")
    return list(_enumerate_cached(k, connected_only))


_ENUM_CACHE: dict = {}


def _enumerate_cached(k, connected_only):
    key = (k, connected_only)
    if key not in _ENUM_CACHE:
        n = 2 * k
        out = []
        for enc in _bfs_encodings(n, connected_only):
            g = canonical_graph(n, enc)
            best, _ = _optimal_labelings(n, _multiplicities(g))
            if best == enc:
                out.append(g)
        out.sort(key=OrientedTrivalentGraph.key)
        _ENUM_CACHE[key] = tuple(out)
    return _ENUM_CACHE[key]


# ---------------------------------------------------------------------------
# connectivity


def component_count(node_count: int, ends: Sequence[int], skip_edge: int | None = None) -> int:
    parent = list(range(node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = node_count
    for e in range(len(ends) // 2):
        if e == skip_edge:
            continue
        a, b = find(ends[2 * e]), find(ends[2 * e + 1])
        if a != b:
            parent[a] = b
            comps -= 1
    return comps


def edge_is_separating(g, e: int) -> bool:
    """True iff deleting edge ``e`` increases the number of components.

    Works for any object with ``ends`` and ``node_count``/``vertex_count``.
    """
    if not 0 <= e < len(g.ends) // 2:
        raise IndexError(f"edge {e} out of range")
    nodes = getattr(g, "node_count", None)
    if nodes is None:
        nodes = g.vertex_count
    return component_count(nodes, g.ends, skip_edge=e) > component_count(nodes, g.ends)


# ---------------------------------------------------------------------------
# IHX


def ihx_fragment(ends: Sequence[int], orders: Sequence[Sequence[int]], e: int,
                 choice: int = 0) -> tuple[tuple, tuple, tuple]:
    """Rewire the two-vertex fragment around edge ``e``.

    Returns ``(ends, orders)`` pairs for I, H and X. With ``u`` the vertex of
    half-edge ``2e`` (``choice=1`` uses ``2e + 1``) and the orders read as
    ``(e, a, b)`` at ``u`` and ``(e, c, d)`` at ``v``::

        I = (a b | c d),  H = (a c | b d),  X = (a d | b c)

    where ``(x y | z w)`` puts orders ``(e, x, y)`` at ``u`` and ``(e, z, w)``
    at ``v``. These satisfy I = H - X modulo AS (the Jacobi identity).
    """
    if choice not in (0, 1):
        raise ValueError("attachment choice must be 0 or 1")
    hu, hv = (2 * e, 2 * e + 1) if choice == 0 else (2 * e + 1, 2 * e)
    u, v = ends[hu], ends[hv]
    if u == v:
        raise ValueError(f"edge {e} is a loop")
    a, b = _after(orders[u], hu)
    c, d = _after(orders[v], hv)

    def build(x, y, z, w):
        new_ends = list(ends)
        new_ends[x] = new_ends[y] = u
        new_ends[z] = new_ends[w] = v
        new_orders = list(tuple(o) for o in orders)
        new_orders[u] = (hu, x, y)
        new_orders[v] = (hv, z, w)
        return tuple(new_ends), tuple(new_orders)

    # I is the input itself, with its cyclic orders as given
    return (tuple(ends), tuple(tuple(o) for o in orders)), build(a, c, b, d), build(a, d, b, c)


def _after(order, h):
    i = list(order).index(h)
    return order[(i + 1) % 3], order[(i + 2) % 3]


def apply_ihx_at(g: OrientedTrivalentGraph, e: int, choice: int = 0):
    """The IHX triple ``(G_I, G_H, G_X)`` at internal edge ``e``; ``G_I == g``.

    Outputs may contain loops; check ``has_loops`` before using them as
    generators.
    """
    _require_valid(g)
    if not 0 <= e < g.edge_count:
        raise IndexError(f"edge {e} out of range")
    triple = ihx_fragment(g.ends, g.orders, e, choice)
    out = tuple(OrientedTrivalentGraph(g.vertex_count, ends, orders) for ends, orders in triple)
    return out
