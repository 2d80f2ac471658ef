# Copyright (c) 2025 takotime808

"""isingbench: MAX-CUT / Ising heuristic solvers and a time-to-target benchmark harness."""

__all__ = [
    "IsingInstance",
    "SpinState",
    "gen_complete_pm1",
    "parse_edge_list",
    "write_edge_list",
    "cut_value",
    "ising_energy",
    "delta_energy",
    "delta_energy_packed",
    "get_solver",
    "run_bench",
    "auto_target",
    "emit_csv",
    "SUPPORTED_SOLVERS",
    "version",
    "__version__",
]

from isingbench.kernels.energy import cut_value, delta_energy, ising_energy
from isingbench.kernels.packed import delta_energy_packed
from isingbench.pipeline import SUPPORTED_SOLVERS, auto_target, get_solver, run_bench
from isingbench.problems.instance import IsingInstance, gen_complete_pm1, parse_edge_list, write_edge_list
from isingbench.problems.state import SpinState
from isingbench.processing.export import emit_csv

__version__ = "0.1.0"


def version() -> str:
    return __version__
