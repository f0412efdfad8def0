"""Relation matrices for the diagram spaces and their abelian-group structure."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from clovercalc.diagrams import (
    DEFAULT_MAX_DEGREE,
    OrientedTrivalentGraph,
    ResourceLimitError,
    apply_ihx_at,
    canonicalize,
    enumerate_diagrams,
)
from clovercalc.dyadic import DyadicRational

Matrix = list[list[int]]

AS_TORSION = "AS-torsion"
IHX = "IHX"


@dataclass(frozen=True)
class RelationMatrix:
    degree: int
    columns: tuple[OrientedTrivalentGraph, ...]
    rows: tuple[tuple[int, ...], ...]
    provenance: tuple[str, ...]

    def as_lists(self) -> Matrix:
        return [list(r) for r in self.rows]

    def column_index(self) -> dict:
        return {g.key(): i for i, g in enumerate(self.columns)}


@dataclass(frozen=True)
class AbelianGroupStructure:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " (+) ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Smith normal form


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(a))]


def determinant(a: Matrix) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(D, U, V)`` with ``U @ A @ V == D``.

    ``D`` is diagonal with non-negative entries ``d1 | d2 | ...`` and ``U``,
    ``V`` are unimodular. Pivots are chosen by smallest absolute value.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [list(map(int, r)) for r in a]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if d[i][j] and (pivot is None or abs(d[i][j]) < abs(d[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // d[t][t]))
                    if d[i][t]:
                        dirty = True
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // d[t][t]))
                    if d[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, rows):
                    if d[i][t] and (best is None or abs(d[i][t]) < abs(best[2])):
                        best = (i, "r", d[i][t])
                for j in range(t, cols):
                    if d[t][j] and (best is None or abs(d[t][j]) < abs(best[2])):
                        best = (j, "c", d[t][j])
                if best[1] == "r":
                    swap_rows(t, best[0])
                else:
                    swap_cols(t, best[0])
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return d, u, v


def invariant_factors(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def odd_part(x: int) -> int:
    while x and x % 2 == 0:
        x //= 2
    return x


# ---------------------------------------------------------------------------
# relations


def _check_bound(k, max_degree):
    if k < 0:
        raise ValueError("degree must be non-negative")
    if k > max_degree:
        raise ResourceLimitError(f"degree {k} exceeds bound {max_degree}")


def ihx_row(triple, index: dict, width: int) -> tuple[int, ...] | None:
    """Row ``+[I] - [H] + [X]`` over the canonical columns, or None if any
    member of the triple has a loop."""
    if any(g.has_loops for g in triple):
        return None
    row = [0] * width
    for coeff, g in zip((1, -1, 1), triple):
        cls = canonicalize(g)
        row[index[cls.canonical.key()]] += coeff * cls.sign
    return tuple(row)


def _normalize(row):
    lead = next((x for x in row if x), 0)
    return tuple(-x for x in row) if lead < 0 else tuple(row)


def build_relation_matrix(k: int, max_degree: int = DEFAULT_MAX_DEGREE) -> RelationMatrix:
    _check_bound(k, max_degree)
    return _build_cached(k)


@lru_cache(maxsize=None)
def _build_cached(k: int) -> RelationMatrix:
    columns = tuple(enumerate_diagrams(k, connected_only=False, max_degree=max(k, 0)))
    index = {g.key(): i for i, g in enumerate(columns)}
    width = len(columns)
    rows, tags, seen = [], [], set()
    for i, g in enumerate(columns):
        if canonicalize(g).torsion_flag:
            row = tuple(2 if j == i else 0 for j in range(width))
            seen.add(row)
            rows.append(row)
            tags.append(AS_TORSION)
    for g in columns:
        for e in range(g.edge_count):
            for choice in (0, 1):
                row = ihx_row(apply_ihx_at(g, e, choice), index, width)
                if row is None or not any(row):
                    continue
                row = _normalize(row)
                if row not in seen:
                    seen.add(row)
                    rows.append(row)
                    tags.append(IHX)
    return RelationMatrix(k, columns, tuple(rows), tuple(tags))


@dataclass(frozen=True)
class Quotient:
    """Presentation ``Z^columns / rowspace`` diagonalized by Smith normal form."""

    relations: RelationMatrix
    d: tuple
    u: tuple
    v: tuple
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)

    def structure(self, ring: str = "z") -> AbelianGroupStructure:
        cols = len(self.relations.columns)
        free = cols - self.rank
        if ring in ("z", "Z"):
            tors = tuple(f for f in self.factors if f > 1)
        elif ring in ("z2inv", "Z_half", "z_half"):
            tors = tuple(o for o in (odd_part(f) for f in self.factors) if o > 1)
        else:
            raise ValueError(f"unknown ring {ring!r}")
        return AbelianGroupStructure(free, tors)

    def coordinates(self, x: Sequence) -> tuple[DyadicRational, ...]:
        """Free coordinates of a column-indexed vector over Z[1/2]."""
        cols = len(self.relations.columns)
        x = [DyadicRational.coerce(c) for c in x]
        if len(x) != cols:
            raise ValueError(f"expected {cols} coordinates, got {len(x)}")
        out = []
        for j in range(self.rank, cols):
            acc = DyadicRational(0)
            for i in range(cols):
                if x[i] and self.v[i][j]:
                    acc = acc + x[i] * self.v[i][j]
            out.append(acc)
        return tuple(out)


def quotient(k: int, max_degree: int = DEFAULT_MAX_DEGREE) -> Quotient:
    _check_bound(k, max_degree)
    return _quotient_cached(k)


@lru_cache(maxsize=None)
def _quotient_cached(k: int) -> Quotient:
    rel = _build_cached(k)
    cols = len(rel.columns)
    if rel.rows:
        d, u, v = smith_normal_form(rel.as_lists())
    else:
        d, u, v = [], [], identity(cols)
    factors = tuple(invariant_factors(d))
    freeze = lambda m: tuple(tuple(r) for r in m)
    return Quotient(rel, freeze(d), freeze(u), freeze(v), factors)


def group_structure(k: int, ring: str = "z", max_degree: int = DEFAULT_MAX_DEGREE) -> AbelianGroupStructure:
    """Structure of the degree-``k`` diagram space over Z or Z[1/2] (``"z2inv"``)."""
    return quotient(k, max_degree).structure(ring)


def reduce_to_basis(vector, k: int, max_degree: int = DEFAULT_MAX_DEGREE) -> tuple[DyadicRational, ...]:
    """Coordinates of a diagram vector in the free part of the Z[1/2] quotient.

    ``vector`` is a :class:`~clovercalc.clover.DiagramVector` (or any mapping
    from canonical diagrams to coefficients) supported in degree ``k``.
    """
    q = quotient(k, max_degree)
    index = q.relations.column_index()
    x = [DyadicRational(0)] * len(q.relations.columns)
    for g, coeff in vector.items():
        if g.vertex_count != 2 * k:
            raise ValueError(f"diagram with {g.vertex_count} vertices in a degree-{k} reduction")
        cls = canonicalize(g)
        if cls.torsion_flag:
            continue
        x[index[cls.canonical.key()]] += DyadicRational.coerce(coeff) * cls.sign
    return q.coordinates(x)
