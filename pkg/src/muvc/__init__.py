"""Exact solvers for deleting vertices until the minimum vertex cover is unique."""

from .cliquewidth import parse_cw_expression, solve_muvc_cw, solve_muvc_cw_fpt
from .graph import Graph, induced_delete, is_unique_min_vc, is_vertex_cover, min_vc_size, parse_graph
from .oracle import enumerate_min_vcs, solve_muvc_bruteforce, solve_pauvc_bruteforce
from .tree import solve_muvc_tree
from .treewidth import solve_muvc_tw

__all__ = [
    "Graph",
    "enumerate_min_vcs",
    "induced_delete",
    "is_unique_min_vc",
    "is_vertex_cover",
    "min_vc_size",
    "parse_cw_expression",
    "parse_graph",
    "solve_muvc_bruteforce",
    "solve_muvc_cw",
    "solve_muvc_cw_fpt",
    "solve_muvc_tree",
    "solve_muvc_tw",
    "solve_pauvc_bruteforce",
]
