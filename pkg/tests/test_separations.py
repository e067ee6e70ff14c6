import dataclasses
import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from objspec.errors import UnknownFixture, ValidationError
from objspec.mdp_core import Policy, random_environment, random_policy
from objspec.objectives import specs as S
from objspec.objectives.evaluators import eval_mr
from objspec.separations import (
    CollisionSearch,
    OrderingConstraint,
    continuity_probe,
    get_fixture,
    mr_lp_check,
    rrl_lp_check,
    run_separation,
)
from objspec.separations.fixtures import FIXTURE_NAMES, Relation
from objspec.separations.lp import lar_lp_check, max_margin

seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_replays_cleanly(name):
    report = run_separation(name)
    assert report.checks
    assert report.passed, [c.claim for c in report.failures]
    doc = json.loads(report.dumps())
    assert doc["fixture"] == name and doc["pass"] is True


def test_twelve_fixtures():
    assert len(FIXTURE_NAMES) == 12


def test_unknown_fixture():
    with pytest.raises(UnknownFixture):
        get_fixture("ex_nowhere")
    with pytest.raises(UnknownFixture):
        run_separation("ex_nowhere")


def test_corrupted_witness_is_detected():
    fx = get_fixture("ex_xor")
    policies = dict(fx.policies)
    policies["pi_AB"] = policies["pi_AA"]
    report = run_separation(dataclasses.replace(fx, policies=policies))
    assert not report.passed
    assert any("induces the target ordering" in c.claim for c in report.failures)


def test_weakened_target_breaks_negative_claims():
    fx = get_fixture("ex_xor")
    target = dataclasses.replace(fx.targets[0], policies=("pi_AB", "pi_AA"),
                                 constraint=OrderingConstraint.from_ranks([1, 0]))
    report = run_separation(dataclasses.replace(fx, targets=(target,)))
    failed = {c.claim for c in report.failures}
    assert failed == {"xor: MR-LP over the discount grid", "xor: RRL-LP over the discount grid"}


# --- constraints and LPs -----------------------------------------------------------


def test_ordering_constraint():
    c = OrderingConstraint.from_ranks([2, 1, 1])
    assert c.satisfied_by([3.0, 1.0, 1.0])
    assert c.violations([3.0, 1.0, 2.0]) == [(1, 2, Relation.EQUAL)]
    with pytest.raises(ValidationError):
        OrderingConstraint(((0, 1, Relation.STRICTLY_GREATER), (1, 0, Relation.STRICTLY_GREATER)))
    with pytest.raises(ValidationError):
        c.check_indices(2)


def test_max_margin_is_bounded_and_witnessed():
    features = np.array([[1.0, 0.0], [0.0, 1.0]])
    t, x = max_margin(features, OrderingConstraint.from_ranks([1, 0]))
    # The margin variable is capped at 1, so any witness with x0 - x1 >= 1 is optimal.
    assert abs(t - 1.0) <= 1e-9
    assert x[0] - x[1] >= 1.0 - 1e-9 and np.all(np.abs(x) <= 1.0 + 1e-12)
    t, _ = max_margin(np.ones((2, 2)), OrderingConstraint.from_ranks([1, 0]))
    assert abs(t) <= 1e-9


@given(seeds)
def test_mr_lp_recovers_orderings_of_random_rewards(seed):
    rng = np.random.default_rng(seed)
    env = random_environment(rng, int(rng.integers(2, 4)), 2)
    policies = [random_policy(rng, env) for _ in range(3)]
    reward = rng.uniform(-1, 1, env.transition.shape)
    values = [eval_mr(env, p, reward, 0.5) for p in policies]
    if min(abs(a - b) for i, a in enumerate(values) for b in values[i + 1:]) < 1e-3:
        return
    res = mr_lp_check(env, policies, OrderingConstraint.from_ranks(values), gamma_grid=[0.5])
    assert res.feasible and res.margin >= 5e-7
    found = [eval_mr(env, p, res.witness.reshape(env.transition.shape), res.gamma) for p in policies]
    assert OrderingConstraint.from_ranks(values).satisfied_by(found)


def test_lp_grid_validation():
    fx = get_fixture("ex_two_paths")
    pols = [fx.policy("pi_u"), fx.policy("pi_l")]
    with pytest.raises(ValidationError):
        mr_lp_check(fx.env, pols, OrderingConstraint.from_ranks([1, 0]), gamma_grid=[1.0])
    with pytest.raises(ValidationError):
        mr_lp_check(fx.env, pols, OrderingConstraint.from_ranks([1, 0]), epsilon=0.0)


def test_identical_policies_are_never_separated():
    fx = get_fixture("ex_two_paths")
    p = fx.policy("pi_u")
    c = OrderingConstraint.from_ranks([1, 0])
    assert not mr_lp_check(fx.env, [p, p], c).feasible
    assert not rrl_lp_check(fx.env, [p, p], c).feasible
    assert not lar_lp_check(fx.env, [p, p], c).feasible


def test_feasibility_json():
    fx = get_fixture("ex_two_paths")
    res = mr_lp_check(fx.env, [fx.policy("pi_u"), fx.policy("pi_l")], OrderingConstraint.from_ranks([1, 0]))
    doc = res.to_json()
    assert doc["status"] == "Feasible" and len(doc["witness"]) == fx.env.n_triples


# --- probes ----------------------------------------------------------------------


def test_continuity_probe_reports_values():
    fx = get_fixture("ex_loop")
    family = fx.families["pi_alpha"]
    spec = fx.objective("mr_at_s0")
    rep = continuity_probe(fx.env, family.build, spec, family.grid, family.build(family.limit))
    assert rep.match
    assert len(rep.values) == len(family.grid)
    assert abs(rep.extrapolated - rep.limit_value) <= rep.tolerance
    lar = continuity_probe(fx.env, family.build, fx.objective("lar_at_s0"), family.grid,
                           family.build(family.limit))
    assert not lar.match and abs(lar.limit_value - 1.0) <= 1e-9


def test_collision_search_between_crossing_curves():
    fx = get_fixture("ex_two_paths")
    pu, pl = fx.policy("pi_u"), fx.policy("pi_l")
    reward = np.random.default_rng(0).uniform(-1, 1, fx.env.transition.shape)
    curves = {"up": (lambda t: pu.mix(pl, t), "A"), "down": (lambda t: pl.mix(pu, t), "B")}
    hit = CollisionSearch(fx.env, 0.9, {}, curves).find(reward)
    assert hit is not None and hit.first_class != hit.second_class
    assert hit.gap <= 1e-9 * max(1.0, abs(hit.first_value))


def test_collision_search_respects_classes():
    fx = get_fixture("ex_two_paths")
    pu = fx.policy("pi_u")
    points = {"a": (pu, "A"), "b": (Policy(pu.action_probs.copy()), "A")}
    reward = np.ones(fx.env.transition.shape)
    assert CollisionSearch(fx.env, 0.9, points, {}).find(reward) is None
    points["b"] = (points["b"][0], "B")
    assert CollisionSearch(fx.env, 0.9, points, {}).find(reward) is not None


def test_fixture_accessors():
    fx = get_fixture("ex_single_state")
    assert set(fx.policies) == {"pi_A", "pi_B", "pi_C"}
    with pytest.raises(ValidationError):
        fx.policy("pi_Z")
    assert isinstance(fx.objective("mr_graded"), S.MR)
