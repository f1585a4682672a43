"""Budgeted polyhedral enclosure of labeled point clouds.

Find at most K hyperplanes that keep every positive point on their
nonnegative side while leaving as few negative points as possible inside
the intersection.  The package bundles compact mixed-integer models, a
column-generation scheme with exact and heuristic pricing, a greedy
matheuristic, synthetic instance generators, and an evaluation harness.
"""

from .core import (
    Dataset,
    Hyperplane,
    PcabSolution,
    is_valid,
    read_dataset_csv,
    read_solution_json,
    separation_error,
    shift_to_positives,
    write_dataset_csv,
    write_solution_json,
)
from .models import BudgetParams, Column, ColumnPool, DualPrices
from .solver import ModelSpec, SolveOptions, SolveResult, solve_lp, solve_milp
from .colgen import ColgenConfig, ColgenTelemetry, run_colgen
from .greedy import run_greedy
from .datagen import GenConfig, generate_corner_family, generate_uniform_family
from .bench import RunConfig, hull_greedy_2d, mc_volume, run_method

__all__ = [
    "BudgetParams",
    "ColgenConfig",
    "ColgenTelemetry",
    "Column",
    "ColumnPool",
    "Dataset",
    "DualPrices",
    "GenConfig",
    "Hyperplane",
    "ModelSpec",
    "PcabSolution",
    "RunConfig",
    "SolveOptions",
    "SolveResult",
    "generate_corner_family",
    "generate_uniform_family",
    "hull_greedy_2d",
    "is_valid",
    "mc_volume",
    "read_dataset_csv",
    "read_solution_json",
    "run_colgen",
    "run_greedy",
    "run_method",
    "separation_error",
    "shift_to_positives",
    "solve_lp",
    "solve_milp",
    "write_dataset_csv",
    "write_solution_json",
]

__version__ = "0.1.0"
