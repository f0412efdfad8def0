"""Graded diagram spaces, clover reduction and surgery-link compilation."""

from clovercalc.dyadic import DyadicRational
from clovercalc.diagrams import (
    OrientedTrivalentGraph,
    SignedClass,
    Violation,
    apply_ihx_at,
    canonicalize,
    edge_is_separating,
    enumerate_diagrams,
    reverse_vertex_order,
    validate_graph,
)
from clovercalc.lattice import (
    AbelianGroupStructure,
    RelationMatrix,
    build_relation_matrix,
    group_structure,
    reduce_to_basis,
    smith_normal_form,
)
from clovercalc.clover import (
    CloverExpression,
    DiagramVector,
    cut_edge,
    degree,
    glue_leaves,
    reduce,
    split_leaf,
    twist_edge,
    validate_clover,
)
from clovercalc.surgery import (
    FramedLinkDiagram,
    compile_surgery_link,
    linking_matrix,
    unimodularity_certificate,
    validate_pd,
)

__all__ = [
    "AbelianGroupStructure",
    "CloverExpression",
    "DiagramVector",
    "DyadicRational",
    "FramedLinkDiagram",
    "OrientedTrivalentGraph",
    "RelationMatrix",
    "SignedClass",
    "Violation",
    "apply_ihx_at",
    "build_relation_matrix",
    "canonicalize",
    "compile_surgery_link",
    "cut_edge",
    "degree",
    "edge_is_separating",
    "enumerate_diagrams",
    "glue_leaves",
    "group_structure",
    "linking_matrix",
    "reduce",
    "reduce_to_basis",
    "reverse_vertex_order",
    "smith_normal_form",
    "split_leaf",
    "twist_edge",
    "unimodularity_certificate",
    "validate_clover",
    "validate_graph",
    "validate_pd",
]
