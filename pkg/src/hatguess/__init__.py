"""Strategies and exhaustive verification for the two-color simultaneous
hat-guessing game."""

from .core import (
    CapacityError,
    Color,
    ContractError,
    EncodingError,
    GuessRecord,
    HatDistribution,
    HatGameError,
    StrategyProfile,
    VisibleView,
    evaluate,
    full_mask,
    make_distribution,
    majority_target,
    mask_of,
    player_bit,
    verify_no_peek,
)
from .strategies import (
    GuaranteeBound,
    Pairing,
    PartialStrategyParams,
    PartitionPlan,
    canonical_pairing,
    composite_strategy,
    compute_thresholds,
    guarantee_bound,
    lemma_table_bound,
    majority_strategy,
    make_partition,
    pairing_strategy,
    partial_profile,
    partial_strategy,
)
from .analysis import (
    IdentityResult,
    OptimalReport,
    WorstCaseReport,
    exhaustive_worst_case,
    identity_check,
    lower_bound_loss,
    monte_carlo,
    robbins_check,
    search_optimal,
    total_correct_over_omega,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "Color",
    "ContractError",
    "EncodingError",
    "GuaranteeBound",
    "GuessRecord",
    "HatDistribution",
    "HatGameError",
    "IdentityResult",
    "OptimalReport",
    "Pairing",
    "PartialStrategyParams",
    "PartitionPlan",
    "StrategyProfile",
    "VisibleView",
    "WorstCaseReport",
    "canonical_pairing",
    "composite_strategy",
    "compute_thresholds",
    "evaluate",
    "exhaustive_worst_case",
    "full_mask",
    "guarantee_bound",
    "identity_check",
    "lemma_table_bound",
    "lower_bound_loss",
    "majority_strategy",
    "majority_target",
    "make_distribution",
    "make_partition",
    "mask_of",
    "monte_carlo",
    "pairing_strategy",
    "partial_profile",
    "partial_strategy",
    "player_bit",
    "robbins_check",
    "search_optimal",
    "total_correct_over_omega",
    "verify_no_peek",
]
