"""Exact equilibria for one-sided matching markets with dichotomous utilities."""
from .adhz import budget_update, iteration_bound, solve_eps_adhz
from .graph import BACKEND, CoverPartition, LikeGraph, max_matching, min_vertex_cover_min_agents
from .hz import allocation_from_prices, reprice_warm_start, solve_hz
from .lottery import bvn_decompose, sample_matching
from .model import (
    ADHZInstance,
    EquilibriumReport,
    HZInstance,
    NBInstance,
    PriceSystem,
    UtilityMatrix,
    Verdict,
    bivalued_normalize,
    counterexample_instance,
    hz_to_adhz,
    scale_prices,
    utilities_of_allocation,
    validate_instance,
)
from .nb import agent_money, solve_1dlad
from .verify import (
    optimal_bundle,
    verify_1dlad_kkt,
    verify_envy_free_equal_type,
    verify_eps_adhz,
    verify_hz,
    verify_hz_equilibrium,
    verify_individual_rationality_approx,
    verify_weak_core_small,
)

__version__ = "0.1.0"
