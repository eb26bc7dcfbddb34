"""Convex orders on path corteges of acyclic digraphs, their flips, and cubillages
of cyclic zonotopes."""

from .bridge import MaximalChain, compatibility_check, descend, lift_chain, route_cubillage
from .corteges import Cortege, enumerate_corteges, subcortege_sequence
from .cubillage import (
    Cube,
    Cubillage,
    capsid_flip,
    cubillage_flip_graph,
    extreme_cubillage,
    inversions,
    validate_cubillage,
    ziegler_sets,
)
from .digraph import Digraph, enumerate_paths, enumerate_routes, parse_digraph, path_graph, two_route_graph
from .errors import CflError
from .orders import (
    ConvexOrder,
    TypeAssignment,
    apply_flip,
    brute_force_orders,
    check_convex,
    flip_graph,
    is_dense,
    verify_poset,
)
from .zonotope import CyclicConfiguration, default_configuration, veronese_configuration

__all__ = [
    "CflError",
    "ConvexOrder",
    "Cortege",
    "Cube",
    "Cubillage",
    "CyclicConfiguration",
    "Digraph",
    "MaximalChain",
    "TypeAssignment",
    "apply_flip",
    "brute_force_orders",
    "capsid_flip",
    "check_convex",
    "compatibility_check",
    "cubillage_flip_graph",
    "default_configuration",
    "descend",
    "enumerate_corteges",
    "enumerate_paths",
    "enumerate_routes",
    "extreme_cubillage",
    "flip_graph",
    "inversions",
    "is_dense",
    "lift_chain",
    "parse_digraph",
    "path_graph",
    "route_cubillage",
    "subcortege_sequence",
    "two_route_graph",
    "validate_cubillage",
    "veronese_configuration",
    "verify_poset",
    "ziegler_sets",
]
