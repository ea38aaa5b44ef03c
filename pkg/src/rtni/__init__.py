"""Symbolic Weingarten calculus for tensor networks with Haar-random unitaries."""
from .integrator import (
    RandomMatrixSpec,
    UnitVectorDecl,
    build_tn_from_graph,
    collect_unitary_boxes,
    eliminate_unit_vector_pairs,
    graph_partition_functions,
    integrate_all,
    integrate_haar_unitary,
    remove_and_reconnect,
)
from .moments import MomentExpression, build_word_tn, multinomial_expectation, reconstruct_expression
from .symbolic import Polynomial, RationalFunction, expr_parse, limit_at_infinity, log_degree
from .symgroup import character, character_table, cycle_type, partitions, relative_cycle_type
from .tn import TensorNetwork, TNSum, VertexRef, load_tnsum, save_tnsum, to_dot
from .weingarten import weingarten, wg_table

__version__ = "0.1.0"

__all__ = [
    "MomentExpression",
    "Polynomial",
    "RandomMatrixSpec",
    "RationalFunction",
    "TNSum",
    "TensorNetwork",
    "UnitVectorDecl",
    "VertexRef",
    "build_tn_from_graph",
    "build_word_tn",
    "character",
    "character_table",
    "collect_unitary_boxes",
    "cycle_type",
    "eliminate_unit_vector_pairs",
    "expr_parse",
    "graph_partition_functions",
    "integrate_all",
    "integrate_haar_unitary",
    "limit_at_infinity",
    "load_tnsum",
    "log_degree",
    "multinomial_expectation",
    "partitions",
    "reconstruct_expression",
    "relative_cycle_type",
    "remove_and_reconnect",
    "save_tnsum",
    "to_dot",
    "weingarten",
    "wg_table",
]
