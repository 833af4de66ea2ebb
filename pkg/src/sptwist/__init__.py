"""Exact verification of jordanian and extended jordanian twist chains on sp(N)."""

from .exactkernel import ExactMatrix, identity, kron
from .spalgebra import fundamental_rep, structure_table, symmetric_square_rep
from .twistchain import ChainSpec, ChainStep, build_chain, chain_matrix
from .verify import check_classical_limit, check_qybe, check_triangularity, check_twist_equation, r_matrix

__all__ = [
    "ExactMatrix",
    "identity",
    "kron",
    "fundamental_rep",
    "structure_table",
    "symmetric_square_rep",
    "ChainSpec",
    "ChainStep",
    "build_chain",
    "chain_matrix",
    "check_twist_equation",
    "check_triangularity",
    "check_qybe",
    "check_classical_limit",
    "r_matrix",
]
