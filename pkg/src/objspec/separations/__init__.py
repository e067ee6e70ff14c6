"""Counterexample fixtures and the checkers that replay their claims."""

from .checks import Check, SeparationReport, run_separation
from .fixtures import (
    FIXTURE_NAMES,
    Claim,
    Expected,
    OrderingConstraint,
    PolicyFamily,
    Relation,
    SeparationFixture,
    Target,
    fixtures,
    get_fixture,
)
from .lp import (
    FeasibilityResult,
    cesaro_frequencies,
    lar_lp_check,
    max_margin,
    mr_lp_check,
    rrl_lp_check,
    trajectory_lp_check,
)
from .probes import Collision, CollisionSearch, ContinuityReport, continuity_probe, find_mr_collision
