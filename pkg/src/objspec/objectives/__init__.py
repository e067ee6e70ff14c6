"""Objective-specification formalisms, their evaluators and embeddings."""

from .constructions import (
    build_delta_reward_basis,
    build_injective_return,
    decode_lasso,
    decode_return,
    interval_gap,
)
from .embeddings import CORE_EDGES, SUPPORTED_EDGES, embed, embed_chain, embedding_path
from .evaluators import (
    Exact,
    MonteCarlo,
    MonteCarloEstimate,
    OccupancyMeasure,
    compare,
    eval_fomr,
    eval_lar,
    eval_mr,
    eval_omorl,
    eval_onmr,
    eval_rrl,
    eval_trajectory_formalism,
    evaluate,
    gomorl_compare,
    monte_carlo_estimate,
    occupancy_measure,
    ordering_matrix,
    policy_eval_vector,
)
from .ltl import DeterministicMonitor, compile_ltl, eval_ltl, parse_formula
from .preorders import (
    InducedPreorder,
    LexicographicPreorder,
    Ordering,
    Preorder,
    ThresholdPreorder,
)
from .reward_machine import RewardMachine, compile_rm_product, eval_rm
from .specs import (
    FOMR,
    FPR,
    FTLR,
    FTR,
    GOMORL,
    IMORL,
    INMR,
    LAR,
    LTL,
    MR,
    OMO,
    OMORL,
    ONMR,
    PO,
    RM,
    RRL,
    TLO,
    Formalism,
    ObjectiveSpec,
)
