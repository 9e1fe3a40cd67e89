"""Vertex Descent for k-fixed graph colouring, with baselines and experiment suites."""

from .coloring import Coloring, GammaTable, Move, apply_move, build_table, conflict_count_direct, move_delta
from .descent import RunResult, SolverConfig, run
from .graph import Graph, from_edges, parse_dimacs, write_dimacs
from .instances import InstanceSpec, build_instance

__all__ = [
    "Coloring", "GammaTable", "Graph", "InstanceSpec", "Move", "RunResult", "SolverConfig",
    "apply_move", "build_instance", "build_table", "conflict_count_direct", "from_edges",
    "move_delta", "parse_dimacs", "run", "write_dimacs",
]

__version__ = "0.1.0"
