"""Exact evaluation and expressivity analysis of objective-specification formalisms on finite MDPs."""

from . import objectives, separations
from .errors import (
    DimensionMismatch,
    ExplosionGuard,
    InconsistentTable,
    LPSolverFailure,
    NotDecodable,
    NotLassoEnumerable,
    ObjspecError,
    SingularSystem,
    UnknownFixture,
    UnsupportedEdge,
    UnsupportedFragment,
    ValidationError,
)
from .hasse import HasseGraph, RelationTable, VerificationReport, derive_hasse, emit_dot, relation_table, verify_all
from .mdp_core import (
    ChainDecomposition,
    Environment,
    Policy,
    chain_decomposition,
    deterministic_environment,
    discounted_visitation,
    induced_chain,
    occupancy_table,
    random_environment,
    random_policy,
    reward_from_mapping,
    validate_environment,
    validate_policy,
)
from .objectives import Formalism, compare, embed, evaluate, occupancy_measure, policy_eval_vector
from .separations import get_fixture, run_separation
from .trajectory import Lasso, TrajectoryLottery, enumerate_lassos, lassos, lottery_equal, prefix_distribution

__version__ = "0.1.0"
