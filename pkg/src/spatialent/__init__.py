"""Spatial entanglement of an average pair of thermal bosons in a 1D harmonic trap.

The line is split into two regions; the grand canonical pair state is
partially transposed over one region and its coherent-bunching block gives
a lower bound on the negativity.
"""
from ._kernels import BACKEND
from .entanglement import (
    NegativityReport,
    TwoBosonMixture,
    chi_norm_squared,
    chi_norm_squared_exact,
    lambda_lower_bound,
    mixture_weights,
    pure_pair_entropy,
    split_scan_entropy,
)
from .hermite import EigenMode, eval_eigenfunction
from .oracle import build_rho2_matrix, exact_negativity, rank2_part_eigenvalue
from .regions import OverlapTable, RegionSplit, bunching_probabilities, overlap, overlap_table, region_probability
from .thermo import ThermalState, bose_occupation, choose_truncation, solve_chemical_potential, thermal_state

__all__ = [
    "BACKEND", "EigenMode", "eval_eigenfunction", "RegionSplit", "OverlapTable",
    "region_probability", "overlap", "bunching_probabilities", "overlap_table",
    "ThermalState", "bose_occupation", "solve_chemical_potential", "choose_truncation",
    "thermal_state", "TwoBosonMixture", "NegativityReport", "mixture_weights",
    "chi_norm_squared", "chi_norm_squared_exact", "lambda_lower_bound",
    "pure_pair_entropy", "split_scan_entropy", "build_rho2_matrix", "exact_negativity",
    "rank2_part_eigenvalue",
]
