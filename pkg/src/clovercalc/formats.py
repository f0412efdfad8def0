"""Text formats: ``.dg`` diagrams, ``.clv`` clovers, ``.pd`` framed links,
diagram-vector output and the sparse matrix dump.

All formats are line oriented UTF-8; ``#`` starts a comment.
"""

from __future__ import annotations

import hashlib
from typing import Iterable

from clovercalc.clover import CloverExpression, DiagramVector
from clovercalc.diagrams import OrientedTrivalentGraph
from clovercalc.dyadic import DyadicRational
from clovercalc.surgery import FramedLinkDiagram


class FormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _ints(tokens, no):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(f"expected integers, got {' '.join(tokens)!r}", no) from None


def _split_colon(line, no):
    if ":" not in line:
        raise FormatError(f"missing ':' in {line!r}", no)
    head, tail = line.split(":", 1)
    return head.split(), tail.split()


# ---------------------------------------------------------------------------
# .dg


def dump_dg(g: OrientedTrivalentGraph) -> str:
    out = ["diagram", f"vertices {g.vertex_count}", f"edges {g.edge_count}"]
    out += [f"edge {e} : {u} {v}" for e, (u, v) in enumerate(g.edges)]
    out += [f"order {v} : {' '.join(map(str, o))}" for v, o in enumerate(g.orders)]
    out.append("end")
    return "\n".join(out) + "\n"


def dump_dg_catalog(graphs: Iterable[OrientedTrivalentGraph]) -> str:
    return "\n".join(dump_dg(g) for g in graphs)


def parse_dg(text: str) -> list[OrientedTrivalentGraph]:
    """Parse one or more ``diagram ... end`` blocks."""
    graphs = []
    block = None
    for no, line in _lines(text):
        word = line.split()[0]
        if block is None:
            if word != "diagram":
                raise FormatError(f"expected 'diagram', got {line!r}", no)
            block = {"n": None, "m": None, "edges": {}, "orders": {}, "start": no}
            continue
        if word == "vertices":
            block["n"] = _ints(line.split()[1:2], no)[0]
        elif word == "edges":
            block["m"] = _ints(line.split()[1:2], no)[0]
        elif word == "edge":
            head, tail = _split_colon(line, no)
            (e,) = _ints(head[1:], no)
            if len(tail) != 2:
                raise FormatError("edge needs two endpoints", no)
            block["edges"][e] = tuple(_ints(tail, no))
        elif word == "order":
            head, tail = _split_colon(line, no)
            (v,) = _ints(head[1:], no)
            block["orders"][v] = tuple(_ints(tail, no))
        elif word == "end":
            graphs.append(_finish_dg(block, no))
            block = None
        else:
            raise FormatError(f"unknown keyword {word!r}", no)
    if block is not None:
        raise FormatError("missing 'end'", block["start"])
    return graphs


def _finish_dg(block, no):
    n, m = block["n"], block["m"]
    if n is None or m is None:
        raise FormatError("diagram needs 'vertices' and 'edges' lines", no)
    if sorted(block["edges"]) != list(range(m)):
        raise FormatError(f"edges must be numbered 0..{m - 1}", no)
    ends = []
    for e in range(m):
        ends.extend(block["edges"][e])
    orders = tuple(block["orders"].get(v, ()) for v in range(n))
    return OrientedTrivalentGraph(n, tuple(ends), orders)


def diagram_hash(g: OrientedTrivalentGraph) -> str:
    text = f"{g.vertex_count}:" + ",".join(f"{u}-{v}" for u, v in g.encoding())
    return hashlib.sha256(text.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# .clv


def _node_token(c: CloverExpression, node: int) -> str:
    return f"L{node - c.internal_count}" if c.is_leaf_node(node) else str(node)


def _leaf_id(token, no):
    if not token.startswith("L"):
        raise FormatError(f"expected a leaf name like L0, got {token!r}", no)
    return _ints([token[1:]], no)[0]


def dump_clv(c: CloverExpression) -> str:
    out = ["clover", f"vertices {c.internal_count}", f"leaves {c.leaf_count}", f"edges {c.edge_count}"]
    for e in range(c.edge_count):
        out.append(f"edge {e} : {_node_token(c, c.ends[2 * e])} {_node_token(c, c.ends[2 * e + 1])}")
    for j in range(c.leaf_count):
        out.append(f"leaf L{j} : {c.leaf_half_edge(j)}")
    out += [f"order {v} : {' '.join(map(str, o))}" for v, o in enumerate(c.orders)]
    out += [f"twist {e} : {t}" for e, t in enumerate(c.twists) if t]
    for i in range(c.leaf_count):
        for j in range(i + 1, c.leaf_count):
            if c.linking[i][j] or c.linking[j][i]:
                out.append(f"lk L{i} L{j} : {c.linking[i][j]}")
                if c.linking[j][i] != c.linking[i][j]:
                    out.append(f"lk L{j} L{i} : {c.linking[j][i]}")
    out += [f"frame L{j} : {c.linking[j][j]}" for j in range(c.leaf_count) if c.linking[j][j]]
    out.append("end")
    return "\n".join(out) + "\n"


def parse_clv(text: str) -> CloverExpression:
    lines = list(_lines(text))
    if not lines or lines[0][1].split()[0] not in ("clover", "diagram"):
        raise FormatError("expected 'clover' header", lines[0][0] if lines else None)
    V = L = M = None
    edges, leaves, orders, twists, lk, frames = {}, {}, {}, {}, {}, {}
    ended = False
    for no, line in lines[1:]:
        word = line.split()[0]
        if ended:
            raise FormatError("content after 'end'", no)
        if word == "vertices":
            V = _ints(line.split()[1:2], no)[0]
        elif word == "leaves":
            L = _ints(line.split()[1:2], no)[0]
        elif word == "edges":
            M = _ints(line.split()[1:2], no)[0]
        elif word == "edge":
            head, tail = _split_colon(line, no)
            (e,) = _ints(head[1:], no)
            if len(tail) != 2:
                raise FormatError("edge needs two endpoints", no)
            edges[e] = (tail, no)
        elif word == "leaf":
            head, tail = _split_colon(line, no)
            leaves[_leaf_id(head[1], no)] = (_ints(tail, no)[0], no)
        elif word == "order":
            head, tail = _split_colon(line, no)
            orders[_ints(head[1:], no)[0]] = tuple(_ints(tail, no))
        elif word == "twist":
            head, tail = _split_colon(line, no)
            twists[_ints(head[1:], no)[0]] = _ints(tail, no)[0] % 2
        elif word == "lk":
            head, tail = _split_colon(line, no)
            if len(head) != 3:
                raise FormatError("lk needs two leaves", no)
            lk[(_leaf_id(head[1], no), _leaf_id(head[2], no))] = _ints(tail, no)[0]
        elif word == "frame":
            head, tail = _split_colon(line, no)
            frames[_leaf_id(head[1], no)] = _ints(tail, no)[0]
        elif word == "end":
            ended = True
        else:
            raise FormatError(f"unknown keyword {word!r}", no)
    if not ended:
        raise FormatError("missing 'end'")
    if V is None or M is None:
        raise FormatError("clover needs 'vertices' and 'edges' lines")
    if L is None:
        named = [int(t[1:]) for tokens, _ in edges.values() for t in tokens
                 if t.startswith("L") and t[1:].isdigit()]
        L = max(named + list(leaves), default=-1) + 1
    if sorted(edges) != list(range(M)):
        raise FormatError(f"edges must be numbered 0..{M - 1}")
    ends = []
    for e in range(M):
        tokens, no = edges[e]
        for t in tokens:
            ends.append(V + _leaf_id(t, no) if t.startswith("L") else _ints([t], no)[0])
    for j, (h, no) in leaves.items():
        if not 0 <= h < len(ends) or ends[h] != V + j:
            raise FormatError(f"leaf L{j} declared at half-edge {h}, which the edge lines do not attach to it", no)
    matrix = [[0] * L for _ in range(L)]
    for (i, j), value in lk.items():
        if not (0 <= i < L and 0 <= j < L):
            raise FormatError(f"lk refers to missing leaf L{max(i, j)}")
        matrix[i][j] = value
        if (j, i) not in lk:
            matrix[j][i] = value
    for j, f in frames.items():
        if not 0 <= j < L:
            raise FormatError(f"frame refers to missing leaf L{j}")
        matrix[j][j] = f
    return CloverExpression(
        V, L, tuple(ends), tuple(orders.get(v, ()) for v in range(V)),
        tuple(twists.get(e, 0) for e in range(M)), tuple(tuple(r) for r in matrix),
    )


# ---------------------------------------------------------------------------
# .pd


def dump_pd(d: FramedLinkDiagram) -> str:
    out = [f"components {d.component_count}"]
    out += ["X " + " ".join(map(str, cr)) for cr in d.crossings]
    for i, comp in enumerate(d.components):
        out.append(f"comp {i} : {' '.join(map(str, comp))}" if comp else f"unknot {i}")
    out += [f"framing {i} {f}" for i, f in enumerate(d.framings) if f is not None]
    return "\n".join(out) + "\n"


def parse_pd(text: str) -> FramedLinkDiagram:
    n = None
    crossings, comps, framings = [], {}, {}
    for no, line in _lines(text):
        tokens = line.split()
        word = tokens[0]
        if word == "components":
            n = _ints(tokens[1:2], no)[0]
        elif word == "X":
            crossings.append(tuple(_ints(tokens[1:], no)))
        elif word == "comp":
            head, tail = _split_colon(line, no)
            comps[_ints(head[1:], no)[0]] = tuple(_ints(tail, no))
        elif word == "unknot":
            comps[_ints(tokens[1:2], no)[0]] = ()
        elif word == "framing":
            i, f = _ints(tokens[1:3], no)
            framings[i] = f
        else:
            raise FormatError(f"unknown keyword {word!r}", no)
    if n is None:
        raise FormatError("missing 'components' line")
    if sorted(comps) != list(range(n)):
        raise FormatError(f"components must be numbered 0..{n - 1}")
    return FramedLinkDiagram(
        tuple(crossings), tuple(comps[i] for i in range(n)),
        tuple(framings.get(i) for i in range(n)),
    )


# ---------------------------------------------------------------------------
# outputs


def dump_vector(v: DiagramVector, basis: dict | None = None) -> str:
    """Coefficient lines, optional ``basis k : ...`` lines, then the catalog."""
    if not v:
        out = ["0"]
    else:
        out = [f"{coeff.wire()} {diagram_hash(g)}" for g, coeff in v.items()]
    for k, coords in sorted((basis or {}).items()):
        out.append(f"basis {k} : " + " ".join(c.wire() for c in coords))
    if v:
        out.append("catalog")
        for i, g in enumerate(v):
            out.append(f"ref {i} {diagram_hash(g)}")
            out.append(dump_dg(g).rstrip("\n"))
    return "\n".join(out) + "\n"


def parse_vector(text: str) -> DiagramVector:
    """Inverse of :func:`dump_vector` (the basis line is ignored)."""
    coeffs, refs, body = [], {}, []
    state = "terms"
    current = None
    for no, line in _lines(text):
        tokens = line.split()
        if state == "terms":
            if tokens[0] == "0" and len(tokens) == 1:
                continue
            if tokens[0] == "basis":
                continue
            if tokens[0] == "catalog":
                state = "catalog"
                continue
            coeffs.append((DyadicRational.parse(tokens[0]), tokens[1]))
        else:
            if tokens[0] == "ref":
                current = tokens[2]
                body = []
                continue
            body.append(line)
            if tokens[0] == "end":
                refs[current] = parse_dg("\n".join(body))[0]
    return DiagramVector((refs[h], c) for c, h in coeffs)


def dump_matrix(rows) -> str:
    rows = [list(r) for r in rows]
    cols = len(rows[0]) if rows else 0
    out = [f"rows {len(rows)} cols {cols}"]
    for i, r in enumerate(rows):
        out += [f"{i} {j} {x}" for j, x in enumerate(r) if x]
    return "\n".join(out) + "\n"


def parse_matrix(text: str) -> list[list[int]]:
    lines = list(_lines(text))
    header = lines[0][1].split()
    if header[0] != "rows" or header[2] != "cols":
        raise FormatError("expected 'rows R cols C' header", lines[0][0])
    r, c = int(header[1]), int(header[3])
    m = [[0] * c for _ in range(r)]
    for no, line in lines[1:]:
        i, j, x = _ints(line.split(), no)
        m[i][j] = x
    return m


def dump_linking(matrix, det: int, unimodular: bool) -> str:
    out = [" ".join(f"{x:>3}" for x in row) for row in matrix]
    out.append(f"det {det}")
    out.append("unimodular" if unimodular else "not unimodular")
    return "\n".join(out) + "\n"
