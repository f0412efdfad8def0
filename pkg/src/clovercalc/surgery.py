"""Surgery links of clovers as planar-diagram codes.

``compile_surgery_link`` realizes L(G) as the closure of a pure braid, which
gives a planar diagram by construction:

* strands ``3v, 3v+1, 3v+2`` are the three circles at internal vertex ``v``
  (one per half-edge, in cyclic order), tied by the Borromean word
  ``(s1 s2^-1)^3``;
* the remaining strands are the leaf circles, in leaf order;
* every edge clasps the two circles at its ends once (the clasp is negative
  when the edge carries a half twist), and each leaf pair ``(i, j)`` gets
  ``|lk|`` clasps of sign ``sign(lk)``.

A clasp between strands ``i < j`` is the pure braid generator
``s_{j-1} .. s_{i+1} s_i^{+-2} s_{i+1}^-1 .. s_{j-1}^-1``. Framings are recorded
as integers (vertex circles 0, leaf circles their leaf framing) rather than
as blackboard writhe.

PD conventions: strands run downward, ``s_k`` is the crossing where the
right strand passes over (a positive crossing), and ``X a b c d`` lists the
four arcs counterclockwise starting from the incoming under-arc.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from clovercalc.clover import CloverExpression, InvalidCloverError, validate_clover
from clovercalc.diagrams import Violation
from clovercalc.lattice import determinant


class InvalidDiagramError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


@dataclass(frozen=True)
class FramedLinkDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    components: tuple[tuple[int, ...], ...]
    framings: tuple

    @property
    def component_count(self) -> int:
        return len(self.components)


class LinkingMatrix(NamedTuple):
    matrix: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self.matrix[i][j]
        return tuple.__getitem__(self, ij)

    def rows(self):
        return [list(r) for r in self.matrix]


# ---------------------------------------------------------------------------
# braids


def borromean_word(p: int) -> list[int]:
    """Pure braid on strands ``p, p+1, p+2`` closing to the Borromean rings.

    Generators are 1-based signed integers: ``k`` is ``s_k`` acting on
    0-based positions ``k - 1, k``.
    """
    return [p + 1, -(p + 2)] * 3


def clasp_word(i: int, j: int, sign: int) -> list[int]:
    if i == j:
        raise ValueError("a clasp needs two distinct strands")
    i, j = min(i, j), max(i, j)
    down = list(range(j, i + 1, -1))
    return down + [sign * (i + 1)] * 2 + [-g for g in reversed(down)]


def braid_closure(strands: int, word: Sequence[int]) -> tuple[list, list]:
    """PD crossings and component arc sequences of a pure braid closure.

    Component ``p`` is the strand starting at position ``p``.
    """
    label = iter(range(10 ** 9))
    top = [next(label) for _ in range(strands)]
    cur = list(top)
    who = list(range(strands))
    comps = [[a] for a in top]
    crossings = []
    for g in word:
        k = abs(g) - 1
        a_in, b_in = cur[k], cur[k + 1]
        x, y = next(label), next(label)  # x continues the left strand, y the right one
        if g > 0:
            crossings.append([a_in, y, x, b_in])
        else:
            crossings.append([b_in, a_in, y, x])
        comps[who[k]].append(x)
        comps[who[k + 1]].append(y)
        cur[k], cur[k + 1] = y, x
        who[k], who[k + 1] = who[k + 1], who[k]
    if who != list(range(strands)):
        raise ValueError("braid is not pure")
    rename = {}
    for p in range(strands):
        if cur[p] != top[p]:
            rename[cur[p]] = top[p]
            comps[p].pop()
    crossings = [[rename.get(a, a) for a in c] for c in crossings]
    # consecutive labels in traversal order, starting at 1
    relabel = {}
    out_comps = []
    for p in range(strands):
        if len(comps[p]) == 1 and comps[p][0] == top[p] and not any(top[p] in c for c in crossings):
            out_comps.append(())
            continue
        for a in comps[p]:
            relabel[a] = len(relabel) + 1
        out_comps.append(tuple(relabel[a] for a in comps[p]))
    out_cross = [tuple(relabel[a] for a in c) for c in crossings]
    return out_cross, out_comps


def strand_layout(c: CloverExpression) -> dict[int, int]:
    """Half-edge at an internal vertex -> strand of its vertex circle."""
    layout = {}
    for v, order in enumerate(c.orders):
        for slot, h in enumerate(order):
            layout[h] = 3 * v + slot
    return layout


def compile_surgery_link(c: CloverExpression) -> FramedLinkDiagram:
    violations = validate_clover(c)
    if violations:
        raise InvalidCloverError(violations)
    V, L = c.internal_count, c.leaf_count
    strands = 3 * V + L
    layout = strand_layout(c)

    def strand(h):
        node = c.ends[h]
        return layout[h] if node < V else 3 * V + (node - V)

    word: list[int] = []
    for v in range(V):
        word.extend(borromean_word(3 * v))
    for e in range(c.edge_count):
        sign = -1 if c.twists[e] else 1
        word.extend(clasp_word(strand(2 * e), strand(2 * e + 1), sign))
    for i in range(L):
        for j in range(i + 1, L):
            lk = c.linking[i][j]
            for _ in range(abs(lk)):
                word.extend(clasp_word(3 * V + i, 3 * V + j, 1 if lk > 0 else -1))
    crossings, comps = braid_closure(strands, word)
    framings = [0] * (3 * V) + [c.linking[j][j] for j in range(L)]
    return FramedLinkDiagram(tuple(crossings), tuple(comps), tuple(framings))


# ---------------------------------------------------------------------------
# checks and invariants


def validate_pd(d: FramedLinkDiagram) -> list[Violation]:
    out = []
    seen: dict[int, list[tuple[int, int]]] = {}
    for x, cr in enumerate(d.crossings):
        if len(cr) != 4:
            out.append(Violation("crossing", x, f"crossing {x} has {len(cr)} arcs"))
            continue
        for slot, a in enumerate(cr):
            seen.setdefault(a, []).append((x, slot))
    for a, occ in sorted(seen.items()):
        if len(occ) != 2:
            out.append(Violation("arc", a, f"arc {a} appears {len(occ)} times"))
    owner: dict[int, int] = {}
    for i, comp in enumerate(d.components):
        for a in comp:
            if a in owner:
                out.append(Violation("component", i, f"arc {a} listed in components {owner[a]} and {i}"))
            owner[a] = i
            if a not in seen:
                out.append(Violation("component", i, f"arc {a} of component {i} is in no crossing"))
    for a in seen:
        if a not in owner:
            out.append(Violation("component", None, f"arc {a} belongs to no component"))
    if not out:
        for i, comp in enumerate(d.components):
            for t, a in enumerate(comp):
                b = comp[(t + 1) % len(comp)]
                if len(comp) > 1 and not _continues(d.crossings, seen, a, b):
                    out.append(Violation("component", i, f"arcs {a} -> {b} do not meet at a crossing"))
    if len(d.framings) != len(d.components) or any(f is None for f in d.framings):
        missing = [i for i in range(len(d.components))
                   if i >= len(d.framings) or d.framings[i] is None]
        for i in missing:
            out.append(Violation("framing", i, f"component {i} has no framing"))
    return out


def _continues(crossings, seen, a, b):
    for x, slot in seen[a]:
        cr = crossings[x]
        if slot == 0 and cr[2] == b:
            return True
        if slot in (1, 3) and cr[4 - slot] == b:
            return True
    return False


def _require_valid(d):
    violations = validate_pd(d)
    if violations:
        raise InvalidDiagramError(violations)


def crossing_signs(d: FramedLinkDiagram) -> list[tuple[int, int, int]]:
    """``(under component, over component, sign)`` for each crossing."""
    owner, succ = {}, {}
    for i, comp in enumerate(d.components):
        for t, a in enumerate(comp):
            owner[a] = i
            succ[a] = comp[(t + 1) % len(comp)]
    occ: dict[int, list[tuple[int, int]]] = {}
    for x, cr in enumerate(d.crossings):
        for slot, a in enumerate(cr):
            occ.setdefault(a, []).append((x, slot))
    out = []
    for x, (a, b, c, dd) in enumerate(d.crossings):
        b_in = succ[b] == dd
        d_in = succ[dd] == b
        if b_in == d_in:
            # two-arc component: find where b is an under-arc elsewhere
            other = [s for y, s in occ[b] if (y, s) != (x, 1)]
            if other and other[0] == 2:
                b_in = True
            elif other and other[0] == 0:
                b_in = False
            else:
                raise ValueError(f"orientation of the over-strand at crossing {x} is ambiguous")
        # over strand from b to d is negative, from d to b positive
        out.append((owner[a], owner[b], -1 if b_in else 1))
    return out


def linking_matrix(d: FramedLinkDiagram) -> LinkingMatrix:
    _require_valid(d)
    n = d.component_count
    sums = [[0] * n for _ in range(n)]
    for i, j, s in crossing_signs(d):
        if i != j:
            sums[i][j] += s
            sums[j][i] += s
    m = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                m[i][j] = int(d.framings[i])
            elif sums[i][j] % 2:
                raise ValueError(f"odd crossing-sign sum between components {i} and {j}")
            else:
                m[i][j] = sums[i][j] // 2
    return LinkingMatrix(tuple(tuple(r) for r in m))


def unimodularity_certificate(d: FramedLinkDiagram) -> tuple[int, bool]:
    det = determinant(linking_matrix(d).rows())
    return det, abs(det) == 1


def face_count(d: FramedLinkDiagram) -> int:
    """Number of faces of the 4-valent diagram graph (crossing-free circles excluded).

    Used to check planarity: each connected piece must satisfy
    ``V - E + F = 2``.
    """
    occ: dict[int, list[tuple[int, int]]] = {}
    for x, cr in enumerate(d.crossings):
        for slot, a in enumerate(cr):
            occ.setdefault(a, []).append((x, slot))
    seen = set()
    faces = 0
    for x in range(len(d.crossings)):
        for slot in range(4):
            if (x, slot) in seen:
                continue
            faces += 1
            cur = (x, slot)
            while cur not in seen:
                seen.add(cur)
                y, s = cur
                a = d.crossings[y][s]
                p, q = occ[a]
                nxt = q if p == cur else p
                cur = (nxt[0], (nxt[1] - 1) % 4)
    return faces


def diagram_pieces(d: FramedLinkDiagram) -> int:
    parent = list(range(len(d.crossings)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    occ: dict[int, list[int]] = {}
    for x, cr in enumerate(d.crossings):
        for a in cr:
            occ.setdefault(a, []).append(x)
    for xs in occ.values():
        a, b = find(xs[0]), find(xs[-1])
        parent[a] = b
    return len({find(x) for x in range(len(d.crossings))})
