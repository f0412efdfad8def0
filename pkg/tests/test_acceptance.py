"""Acceptance gate: one test per criterion, each timed against its budget.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import io
import random
import subprocess
import sys

from acceptance_log import criterion
from corpus import corpus, h_clover, random_clover, y_graph
from oracles import (
    BruteQuotient,
    all_slot_graphs,
    invariant_factors_by_minors,
    isomorphism_signs,
    rational_rank,
    underlying_key,
)

from clovercalc.cli import run
from clovercalc.clover import (
    CloverExpression,
    DiagramVector,
    cut_edge,
    degree,
    glue_leaves,
    ihx_triple,
    reduce,
    split_leaf,
    to_diagram,
    twist_edge,
)
from clovercalc.diagrams import canonicalize, enumerate_diagrams, reverse_vertex_order, theta
from clovercalc.lattice import (
    build_relation_matrix,
    determinant,
    group_structure,
    matmul,
    reduce_to_basis,
    smith_normal_form,
)
from clovercalc.surgery import compile_surgery_link, linking_matrix, unimodularity_certificate, validate_pd

CORPUS = corpus(2026, 80, degrees=(1, 2, 3, 4))
PRODUCED_MATRICES: list = []


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    return run(list(argv), out, err), out.getvalue()


def quotient_coords(v: DiagramVector):
    coords = []
    for k in sorted(v.degrees()):
        coords += reduce_to_basis({g: c for g, c in v.items() if g.vertex_count == 2 * k}, k)
    return coords


def cuttable(c):
    return [e for e in range(c.edge_count)
            if c.is_internal_edge(e) and not c.twists[e] and c.ends[2 * e] != c.ends[2 * e + 1]]


@criterion(1, "degree-1 structure is Z^1 (exhaustive pairing + theta automorphisms)", 1.0)
def test_c01_degree_one_structure():
    code, out = cli("structure", "--degree", "1", "--ring", "z")
    assert (code, out) == (0, "Z^1\n")
    graphs = list(all_slot_graphs(1))
    assert len(graphs) == 15
    loopless = [g for g in graphs if not g.has_loops]
    assert len({underlying_key(g) for g in loopless}) == 1
    assert isomorphism_signs(theta(), theta()) == {1}
    assert BruteQuotient(graphs).free_rank() == 1


@criterion(2, "dual-path rank at degree 2 (SNF vs rational elimination)", 10.0)
def test_c02_dual_path_rank():
    rel = build_relation_matrix(2)
    PRODUCED_MATRICES.append(rel.as_lists())
    snf_free = group_structure(2, "z").free_rank
    assert snf_free == len(rel.columns) - rational_rank(rel.as_lists())
    assert snf_free == BruteQuotient(all_slot_graphs(2)).free_rank() == 2


@criterion(3, "AS: reversing a vertex gives sign -1 or torsion (k <= 3)", 60.0)
def test_c03_as_suite():
    checked = 0
    for k in range(4):
        for g in enumerate_diagrams(k):
            base = canonicalize(g)
            for v in range(g.vertex_count):
                cls = canonicalize(reverse_vertex_order(g, v))
                assert cls.canonical == base.canonical
                assert cls.torsion_flag or cls.sign == -1
                checked += 1
    assert checked > 0


@criterion(4, "IHX rows and clover IHX triples vanish in the quotient", 60.0)
def test_c04_ihx_suite():
    for k in range(1, 4):
        rel = build_relation_matrix(k)
        PRODUCED_MATRICES.append(rel.as_lists())
        for row, tag in zip(rel.rows, rel.provenance):
            if tag == "IHX":
                assert all(x == 0 for x in reduce_to_basis(dict(zip(rel.columns, row)), k))
    rng = random.Random(4)
    done = nontrivial = 0
    while done < 10:
        k = rng.choice((2, 4))
        try:
            c = random_clover(rng, k, rng.choice(range(2, min(3 * k, 8) + 1, 2)), density=0.9)
        except RuntimeError:
            continue
        edges = [e for e in range(c.edge_count) if c.is_internal_edge(e) and c.ends[2 * e] != c.ends[2 * e + 1]]
        if not edges:
            continue
        gi, gh, gx = ihx_triple(c, rng.choice(edges), rng.randint(0, 1))
        combo = reduce(gi) - reduce(gh) + reduce(gx)
        assert all(x == 0 for x in quotient_coords(combo))
        nontrivial += bool(reduce(gi))
        done += 1
    assert nontrivial >= 3


@criterion(5, "cut/glue roundtrip with separating sign on 50 clovers", 30.0)
def test_c05_cut_glue():
    rng = random.Random(5)
    clovers, edges_checked = [], 0
    while len(clovers) < 50:
        k = rng.choice((2, 3, 4))
        try:
            c = random_clover(rng, k, rng.choice(range(k % 2, min(3 * k, 6) + 1, 2)))
        except RuntimeError:
            continue
        if cuttable(c):
            clovers.append(c)
    for c in clovers:
        base = reduce(c)
        for e in cuttable(c):
            cut, sign = cut_edge(c, e)
            assert reduce(cut) == base.scale(sign)
            back, s2 = glue_leaves(cut, c.leaf_count, c.leaf_count + 1)
            assert back == c and sign * s2 == 1
            edges_checked += 1
    assert edges_checked >= 50


@criterion(6, "odd-degree clovers reduce to 0", 10.0)
def test_c06_odd_degree():
    odd = [c for c in CORPUS if degree(c) % 2] + corpus(6, 30, degrees=(1, 3, 5))
    assert len(odd) >= 30
    for c in odd:
        assert reduce(c) == DiagramVector()


@criterion(7, "half twist negates, full kink preserves", 10.0)
def test_c07_twists():
    for c in CORPUS:
        r = reduce(c)
        for e in range(c.edge_count):
            assert reduce(twist_edge(c, e, 1)) == -r
            assert reduce(twist_edge(c, e, 2)) == r


@criterion(8, "split_leaf additivity on 20 clovers", 30.0)
def test_c08_multilinearity():
    rng = random.Random(8)
    done = 0
    for c in corpus(88, 60, degrees=(2, 3, 4)):
        if not c.leaf_count or done == 20:
            continue
        leaf = rng.randrange(c.leaf_count)
        row1 = [rng.randint(-3, 3) for _ in range(c.leaf_count)]
        row2 = [c.linking[leaf][j] - row1[j] for j in range(c.leaf_count)]
        mutual = rng.randint(-1, 1)
        f1 = rng.randint(-2, 2)
        d1, d2 = split_leaf(c, leaf, row1, row2, f1, c.framing(leaf) - f1 - 2 * mutual, mutual)
        assert reduce(c) == reduce(d1) + reduce(d2)
        done += 1
    assert done == 20


@criterion(9, "surgery link: Y has 6 components, count law, |det| = 1", 30.0)
def test_c09_surgery():
    y = compile_surgery_link(y_graph())
    assert y.component_count == 6 and validate_pd(y) == []
    assert abs(unimodularity_certificate(y)[0]) == 1
    for c in CORPUS:
        assert compile_surgery_link(c).component_count == c.leaf_count + 3 * degree(c)
    small = corpus(9, 100, degrees=(1, 2, 3), lk_range=2, frame_range=1)
    for c in small:
        d = compile_surgery_link(c)
        det, ok = unimodularity_certificate(d)
        assert ok and abs(det) == 1
        PRODUCED_MATRICES.append(linking_matrix(d).rows())


@criterion(10, "SNF certificates on suite matrices and 100 random matrices", 30.0)
def test_c10_snf():
    rng = random.Random(10)
    mats = [build_relation_matrix(k).as_lists() for k in range(1, 5)] + PRODUCED_MATRICES
    mats = [a for a in mats if a]  # degree 1 has no relations at all
    for _ in range(100):
        r, c = rng.randint(1, 12), rng.randint(1, 12)
        mats.append([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)])
    for i, a in enumerate(mats):
        d, u, v = smith_normal_form(a)
        assert matmul(matmul(u, a), v) == d
        assert abs(determinant(u)) == 1 and abs(determinant(v)) == 1
        diag = [d[t][t] for t in range(min(len(d), len(d[0])))]
        nz = [x for x in diag if x]
        assert diag[: len(nz)] == nz and all(x > 0 for x in nz)
        assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
        assert all(d[p][q] == 0 for p in range(len(d)) for q in range(len(d[0])) if p != q)
        if len(a) <= 4 and len(a[0]) <= 4:
            assert nz == invariant_factors_by_minors(a)


@criterion(11, "H clover with unit pairings reduces to +1 theta", 1.0)
def test_c11_h_clover():
    theta_class = canonicalize(theta()).canonical
    assert reduce(h_clover()) == DiagramVector({theta_class: 1})
    # hand expansion: the only matching joins L0-L2 and L1-L3, giving theta with aligned orders
    glued = to_diagram(CloverExpression.build(2, 0, [(0, 1)] * 3, [(0, 2, 4), (1, 3, 5)]))
    assert isomorphism_signs(glued, theta_class) == {1}
    code = ("from clovercalc.clover import reduce; from corpus import h_clover; "
            "print(sorted((g.encoding(), str(c)) for g, c in reduce(h_clover()).items()))")
    runs = {subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True,
                           cwd=__file__.rsplit("/", 1)[0]).stdout for _ in range(2)}
    assert len(runs) == 1
