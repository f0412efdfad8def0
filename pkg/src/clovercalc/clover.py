"""Abstract clovers and their graded reduction over Z[1/2].

A clover is stored with the same half-edge conventions as
:class:`~clovercalc.diagrams.OrientedTrivalentGraph`. Nodes ``0 .. V-1`` are the
internal (trivalent) vertices and node ``V + j`` is leaf ``j``. The ambient
embedding is represented only through

* the cyclic order at each internal vertex,
* the half-twist parity of each edge,
* the leaf linking matrix, whose diagonal holds the leaf framings.

Modulo the next term of the filtration, edge slides are invisible, leaves are
multilinear in their homology classes and framings only matter through the
special-leaf rule, so this data determines the graded class over Z[1/2].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from clovercalc.diagrams import (
    InvalidGraphError,
    OrientedTrivalentGraph,
    Violation,
    canonicalize,
    component_count,
    ihx_fragment,
)
from clovercalc.dyadic import DyadicRational


class InvalidCloverError(InvalidGraphError):
    pass


@dataclass(frozen=True)
class CloverExpression:
    internal_count: int
    leaf_count: int
    ends: tuple[int, ...]
    orders: tuple[tuple[int, int, int], ...]
    twists: tuple[int, ...]
    linking: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, internal_count, leaf_count, edges, orders, twists=None, linking=None):
        """Convenience constructor; ``edges`` are node pairs, leaves written as ``("L", j)``."""
        ends = []
        for pair in edges:
            for node in pair:
                if isinstance(node, tuple):
                    node = internal_count + node[1]
                ends.append(node)
        m = len(ends) // 2
        twists = tuple(t % 2 for t in twists) if twists is not None else (0,) * m
        if linking is None:
            linking = [[0] * leaf_count for _ in range(leaf_count)]
        return cls(internal_count, leaf_count, tuple(ends), tuple(tuple(o) for o in orders),
                   twists, tuple(tuple(r) for r in linking))

    @property
    def node_count(self) -> int:
        return self.internal_count + self.leaf_count

    @property
    def edge_count(self) -> int:
        return len(self.ends) // 2

    def leaf_node(self, leaf: int) -> int:
        return self.internal_count + leaf

    def is_leaf_node(self, node: int) -> bool:
        return node >= self.internal_count

    def leaf_half_edge(self, leaf: int) -> int:
        """The half-edge sitting at the leaf (the stem's outer end)."""
        node = self.leaf_node(leaf)
        return self.ends.index(node)

    def stem(self, leaf: int) -> tuple[int, int]:
        """``(edge, half-edge at the internal end)`` of the leaf's edge."""
        h = self.leaf_half_edge(leaf)
        return h // 2, h ^ 1

    def is_internal_edge(self, e: int) -> bool:
        u, v = self.ends[2 * e], self.ends[2 * e + 1]
        return not (self.is_leaf_node(u) or self.is_leaf_node(v))

    def framing(self, leaf: int) -> int:
        return self.linking[leaf][leaf]

    def components(self) -> int:
        return component_count(self.node_count, self.ends)

    def with_(self, **changes) -> "CloverExpression":
        fields = dict(internal_count=self.internal_count, leaf_count=self.leaf_count,
                      ends=self.ends, orders=self.orders, twists=self.twists,
                      linking=self.linking)
        fields.update(changes)
        return CloverExpression(**fields)


def degree(c: CloverExpression) -> int:
    return c.internal_count


def validate_clover(c: CloverExpression) -> list[Violation]:
    out = []
    nodes = c.node_count
    if len(c.ends) % 2:
        out.append(Violation("pairing", None, "odd number of half-edges"))
    if len(c.twists) != c.edge_count:
        out.append(Violation("twist", None, f"{len(c.twists)} twist entries for {c.edge_count} edges"))
    elif any(t not in (0, 1) for t in c.twists):
        out.append(Violation("twist", None, "twist parities must be 0 or 1"))
    if len(c.orders) != c.internal_count:
        out.append(Violation("order-count", None, f"{len(c.orders)} cyclic orders for {c.internal_count} internal vertices"))
    incident: dict[int, list[int]] = {v: [] for v in range(nodes)}
    for h, v in enumerate(c.ends):
        if not 0 <= v < nodes:
            out.append(Violation("incidence", h // 2, f"half-edge {h} attached to missing node {v}"))
        else:
            incident[v].append(h)
    for v in range(c.internal_count):
        if len(incident[v]) != 3:
            out.append(Violation("valence", v, f"internal vertex {v} has {len(incident[v])} half-edges"))
        elif v < len(c.orders) and sorted(c.orders[v]) != sorted(incident[v]):
            out.append(Violation("order", v, f"cyclic order {c.orders[v]} does not match incident half-edges {incident[v]}"))
    for j in range(c.leaf_count):
        hs = incident.get(c.leaf_node(j), [])
        if len(hs) != 1:
            out.append(Violation("leaf-valence", j, f"leaf L{j} has {len(hs)} half-edges"))
    if not out:
        # components without internal vertices
        parent = list(range(nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in range(c.edge_count):
            a, b = find(c.ends[2 * e]), find(c.ends[2 * e + 1])
            parent[a] = b
        has_internal = {find(v) for v in range(c.internal_count)}
        reported = set()
        for j in range(c.leaf_count):
            root = find(c.leaf_node(j))
            if root not in has_internal and root not in reported:
                reported.add(root)
                out.append(Violation("degree-0-component", j, f"leaf L{j} lies in a component without internal vertices"))
    lk = c.linking
    if len(lk) != c.leaf_count or any(len(r) != c.leaf_count for r in lk):
        out.append(Violation("linking-shape", None, f"linking matrix is not {c.leaf_count}x{c.leaf_count}"))
    else:
        for i in range(c.leaf_count):
            for j in range(i + 1, c.leaf_count):
                if lk[i][j] != lk[j][i]:
                    out.append(Violation("asymmetry", i, f"lk(L{i},L{j})={lk[i][j]} but lk(L{j},L{i})={lk[j][i]}"))
    return out


def _require_valid(c):
    violations = validate_clover(c)
    if violations:
        raise InvalidCloverError(violations)


# ---------------------------------------------------------------------------
# local moves


def twist_edge(c: CloverExpression, e: int, half_twists: int) -> CloverExpression:
    if not 0 <= e < c.edge_count:
        raise IndexError(f"edge {e} out of range")
    twists = list(c.twists)
    twists[e] = (twists[e] + half_twists) % 2
    return c.with_(twists=tuple(twists))


def reverse_vertex(c: CloverExpression, v: int) -> CloverExpression:
    if not 0 <= v < c.internal_count:
        raise IndexError(f"internal vertex {v} out of range")
    a, b, x = c.orders[v]
    orders = list(c.orders)
    orders[v] = (a, x, b)
    return c.with_(orders=tuple(orders))


def _edge_separates(c: CloverExpression, e: int) -> bool:
    return component_count(c.node_count, c.ends, skip_edge=e) > c.components()


def cut_edge(c: CloverExpression, e: int) -> tuple[CloverExpression, int]:
    """Replace internal edge ``e`` by two Hopf-linked leaves.

    Half-edge ``2e`` keeps its vertex and now ends in a new leaf ``L``; a new
    last edge joins the other endpoint to a second new leaf ``L + 1``. The
    sign is -1 exactly when ``e`` separates its component.
    """
    _require_valid(c)
    if not 0 <= e < c.edge_count:
        raise IndexError(f"edge {e} out of range")
    if not c.is_internal_edge(e):
        raise ValueError(f"edge {e} is incident to a leaf")
    if c.twists[e]:
        raise ValueError(f"edge {e} is twisted; push the twist off before cutting")
    sign = -1 if _edge_separates(c, e) else 1
    V, L, m = c.internal_count, c.leaf_count, c.edge_count
    # leaf nodes shift by nothing: new leaves get indices L and L+1
    far = c.ends[2 * e + 1]
    ends = list(c.ends)
    ends[2 * e + 1] = V + L
    ends.extend((far, V + L + 1))
    orders = [tuple(2 * m if h == 2 * e + 1 else h for h in o) for o in c.orders]
    lk = [list(r) + [0, 0] for r in c.linking] + [[0] * (L + 2), [0] * (L + 2)]
    lk[L][L + 1] = lk[L + 1][L] = 1
    out = CloverExpression(V, L + 2, tuple(ends), tuple(orders), c.twists + (0,),
                           tuple(tuple(r) for r in lk))
    return out, sign


def _is_hopf_pair(c, l1, l2):
    if l1 == l2 or abs(c.linking[l1][l2]) != 1:
        return False
    for other in range(c.leaf_count):
        if other in (l1, l2):
            continue
        if c.linking[l1][other] or c.linking[l2][other]:
            return False
    return c.linking[l1][l1] == 0 and c.linking[l2][l2] == 0


def _drop_edge(ends, orders, twists, e):
    """Remove edge ``e`` (its half-edges must be unreferenced) and renumber."""
    def rename(h):
        return h - 2 if h // 2 > e else h
    new_ends = ends[: 2 * e] + ends[2 * e + 2:]
    new_orders = tuple(tuple(rename(h) for h in o) for o in orders)
    new_twists = twists[:e] + twists[e + 1:]
    return new_ends, new_orders, new_twists


def _drop_leaves(c_ends, internal, leaf_count, linking, dropped):
    keep = [j for j in range(leaf_count) if j not in dropped]
    remap = {internal + j: internal + i for i, j in enumerate(keep)}
    ends = tuple(remap.get(v, v) for v in c_ends)
    lk = tuple(tuple(linking[a][b] for b in keep) for a in keep)
    return ends, lk, len(keep)


def glue_leaves(c: CloverExpression, l1: int, l2: int) -> tuple[CloverExpression, int]:
    """Merge a Hopf pair of leaves and their stems into one internal edge.

    The sign is -1 if the leaves lay in different components, times the sign
    of their linking number (a negative clasp counts as a half twist). The
    merged edge carries the sum of the stem twist parities. Inverse of
    :func:`cut_edge`.
    """
    _require_valid(c)
    if not (0 <= l1 < c.leaf_count and 0 <= l2 < c.leaf_count):
        raise IndexError("leaf out of range")
    if not _is_hopf_pair(c, l1, l2):
        raise ValueError(f"L{l1}, L{l2} are not a Hopf pair")
    n1, n2 = c.leaf_node(l1), c.leaf_node(l2)
    bridged = component_count(c.node_count, c.ends + (n1, n2))
    sign = c.linking[l1][l2]
    if bridged < c.components():
        sign = -sign
    e1, inner1 = c.stem(l1)
    e2, inner2 = c.stem(l2)
    keep, drop = min(e1, e2), max(e1, e2)
    inner_keep = inner1 if keep == e1 else inner2
    inner_drop = inner2 if keep == e1 else inner1
    # the kept edge runs inner_keep -> (vertex of inner_drop); its free half-edge
    # replaces inner_drop at that vertex
    free_half = (2 * keep + 1) if inner_keep == 2 * keep else 2 * keep
    ends = list(c.ends)
    ends[free_half] = c.ends[inner_drop]
    ends[2 * drop] = ends[2 * drop + 1] = -1
    orders = tuple(tuple(free_half if h == inner_drop else h for h in o) for o in c.orders)
    twists = list(c.twists)
    twists[keep] = (c.twists[e1] + c.twists[e2]) % 2
    ends, orders, twists = _drop_edge(tuple(ends), orders, tuple(twists), drop)
    ends, lk, L = _drop_leaves(ends, c.internal_count, c.leaf_count, c.linking, {l1, l2})
    return CloverExpression(c.internal_count, L, ends, orders, twists, lk), sign


def split_leaf(c: CloverExpression, leaf: int, row1: Sequence[int], row2: Sequence[int],
               framing1: int, framing2: int, mutual: int = 0) -> tuple[CloverExpression, CloverExpression]:
    """Split a leaf into two arcs, one per output clover.

    ``row1`` and ``row2`` are the daughters' linking rows toward the other
    leaves (entries at ``leaf`` itself ignored); they must sum to the
    original row. Framings satisfy ``f = framing1 + framing2 + 2 * mutual``.
    """
    _require_valid(c)
    if not 0 <= leaf < c.leaf_count:
        raise IndexError(f"leaf {leaf} out of range")
    if len(row1) != c.leaf_count or len(row2) != c.leaf_count:
        raise ValueError("rows must have one entry per leaf")
    for j in range(c.leaf_count):
        if j != leaf and row1[j] + row2[j] != c.linking[leaf][j]:
            raise ValueError(f"rows do not sum to the linking row at L{j}")
    if any(not isinstance(x, int) for x in (framing1, framing2, mutual)):
        raise ValueError("framing split must be integral")
    if framing1 + framing2 + 2 * mutual != c.framing(leaf):
        raise ValueError("framings do not add up")

    def daughter(row, framing):
        lk = [list(r) for r in c.linking]
        for j in range(c.leaf_count):
            if j != leaf:
                lk[leaf][j] = lk[j][leaf] = row[j]
        lk[leaf][leaf] = framing
        return c.with_(linking=tuple(tuple(r) for r in lk))

    return daughter(row1, framing1), daughter(row2, framing2)


def ihx_triple(c: CloverExpression, e: int, choice: int = 0) -> tuple[CloverExpression, ...]:
    """The three clovers differing by the IHX fragment at internal edge ``e``."""
    _require_valid(c)
    if not c.is_internal_edge(e):
        raise ValueError(f"edge {e} is not internal")
    triple = ihx_fragment(c.ends, c.orders, e, choice)
    return tuple(c.with_(ends=ends, orders=orders) for ends, orders in triple)


# ---------------------------------------------------------------------------
# reduction


class DiagramVector(Mapping):
    """Finitely supported map from canonical diagrams to Z[1/2].

    Keys are canonical, non-torsion diagram classes; zero coefficients are not
    stored. Adding a non-canonical diagram folds in its AS sign.
    """

    def __init__(self, terms=None):
        self._terms: dict[OrientedTrivalentGraph, DyadicRational] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for g, coeff in items:
                self._add(g, coeff)

    def _add(self, g, coeff):
        cls = canonicalize(g)
        if cls.torsion_flag or g.has_loops:
            return
        key = cls.canonical
        value = self._terms.get(key, DyadicRational(0)) + DyadicRational.coerce(coeff) * cls.sign
        if value:
            self._terms[key] = value
        else:
            self._terms.pop(key, None)

    def __getitem__(self, g):
        return self._terms[g]

    def __iter__(self):
        return iter(sorted(self._terms, key=OrientedTrivalentGraph.key))

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, DiagramVector):
            return self._terms == other._terms
        return NotImplemented

    def __add__(self, other):
        out = DiagramVector()
        out._terms = dict(self._terms)
        for g, coeff in other._terms.items():
            value = out._terms.get(g, DyadicRational(0)) + coeff
            if value:
                out._terms[g] = value
            else:
                out._terms.pop(g)
        return out

    def __neg__(self):
        out = DiagramVector()
        out._terms = {g: -c for g, c in self._terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other)

    def scale(self, factor) -> "DiagramVector":
        factor = DyadicRational.coerce(factor)
        out = DiagramVector()
        if factor:
            out._terms = {g: c * factor for g, c in self._terms.items()}
        return out

    def degrees(self) -> set[int]:
        return {g.vertex_count // 2 for g in self._terms}

    def __repr__(self):
        inner = ", ".join(f"{c}*{g.encoding()}" for g, c in self.items())
        return f"DiagramVector({inner})"


def perfect_matchings(leaf_count: int, linking) -> Iterator[tuple[list[tuple[int, int]], int]]:
    """Perfect matchings of the leaves with nonzero weight ``prod lk(l, m)``."""
    if leaf_count % 2:
        return
    unmatched = list(range(leaf_count))

    def rec(pool, acc, weight):
        if not pool:
            yield list(acc), weight
            return
        first, rest = pool[0], pool[1:]
        for idx, other in enumerate(rest):
            w = linking[first][other]
            if w:
                acc.append((first, other))
                yield from rec(rest[:idx] + rest[idx + 1:], acc, weight * w)
                acc.pop()

    yield from rec(unmatched, [], 1)


def glue_matching(c: CloverExpression, pairs: Sequence[tuple[int, int]]) -> OrientedTrivalentGraph:
    """The trivalent graph obtained by joining each matched pair of leaf stems.

    Internal edges keep their half-edge numbers; each pair adds one edge,
    numbered after them in matching order.
    """
    V = c.internal_count
    ends: list[int] = []
    hmap: dict[int, int] = {}
    for e in range(c.edge_count):
        if c.is_internal_edge(e):
            t = len(ends) // 2
            hmap[2 * e], hmap[2 * e + 1] = 2 * t, 2 * t + 1
            ends.extend((c.ends[2 * e], c.ends[2 * e + 1]))
    for a, b in pairs:
        _, ha = c.stem(a)
        _, hb = c.stem(b)
        t = len(ends) // 2
        hmap[ha], hmap[hb] = 2 * t, 2 * t + 1
        ends.extend((c.ends[ha], c.ends[hb]))
    orders = tuple(tuple(hmap[h] for h in o) for o in c.orders)
    return OrientedTrivalentGraph(V, tuple(ends), orders)


def matching_terms(c: CloverExpression):
    """Yield ``(pairs, graph, coefficient)`` for every nonzero matching term.

    The coefficient folds the linking weights, the separation sign
    ``(-1)^(components before - components after)`` and the twist sign; the
    AS sign of the graph is left to canonicalization.
    """
    twist_sign = -1 if sum(c.twists) % 2 else 1
    before = c.components()
    for pairs, weight in perfect_matchings(c.leaf_count, c.linking):
        g = glue_matching(c, pairs)
        after = component_count(g.vertex_count, g.ends)
        sep = -1 if (before - after) % 2 else 1
        yield pairs, g, weight * sep * twist_sign


def reduce(c: CloverExpression) -> DiagramVector:
    """Graded class of the clover in the diagram spaces tensored with Z[1/2].

    Single multilinear expansion over perfect matchings of the leaves; terms
    whose diagram has a loop or an odd automorphism vanish. Leaves relying
    only on their framing cannot be matched, so they kill the term as the
    trivial/special leaf rules require.
    """
    _require_valid(c)
    out = DiagramVector()
    for _, g, coeff in matching_terms(c):
        if g.has_loops:
            continue
        out._add(g, coeff)
    return out


def from_diagram(g: OrientedTrivalentGraph) -> CloverExpression:
    """View a trivalent graph as a leafless, untwisted clover."""
    return CloverExpression(g.vertex_count, 0, g.ends, g.orders, (0,) * g.edge_count, ())


def to_diagram(c: CloverExpression) -> OrientedTrivalentGraph:
    if c.leaf_count:
        raise ValueError("clover still has leaves")
    return OrientedTrivalentGraph(c.internal_count, c.ends, c.orders)
