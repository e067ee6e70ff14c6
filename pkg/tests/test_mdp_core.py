import numpy as np
import pytest
from hypothesis import given, strategies as st

from objspec.errors import DimensionMismatch, ValidationError
from objspec.mdp_core import (
    Environment,
    Policy,
    chain_decomposition,
    deterministic_environment,
    discounted_visitation,
    induced_chain,
    occupancy_table,
    random_environment,
    random_policy,
    reachable_states,
    reward_from_mapping,
    validate_environment,
    validate_policy,
)

seeds = st.integers(0, 2**32 - 1)


def _instance(seed, max_states=4, max_actions=3):
    rng = np.random.default_rng(seed)
    env = random_environment(rng, int(rng.integers(1, max_states + 1)), int(rng.integers(1, max_actions + 1)))
    return rng, env, random_policy(rng, env, deterministic_frac=0.3)


@given(seeds, st.floats(0.0, 0.99))
def test_visitation_solves_bellman_identity(seed, gamma):
    _, env, policy = _instance(seed)
    d = discounted_visitation(env, policy, gamma)
    p = induced_chain(env, policy)
    assert np.allclose(d, env.initial + gamma * p.T @ d, atol=1e-10)
    assert abs(d.sum() - 1 / (1 - gamma)) <= 1e-8


@given(seeds, st.floats(0.0, 0.95))
def test_occupancy_table_factorises(seed, gamma):
    _, env, policy = _instance(seed)
    m = occupancy_table(env, policy, gamma)
    d = discounted_visitation(env, policy, gamma)
    assert np.allclose(m, d[:, None, None] * policy.action_probs[:, :, None] * env.transition)
    assert np.all(m >= 0)


@given(seeds)
def test_cesaro_limit_properties(seed):
    _, env, policy = _instance(seed, max_states=5)
    p = induced_chain(env, policy)
    dec = chain_decomposition(p)
    c = dec.cesaro
    assert np.allclose(c.sum(axis=1), 1.0)
    assert np.allclose(c @ p, c, atol=1e-10)
    assert np.allclose(p @ c, c, atol=1e-10)
    assert np.allclose(c @ c, c, atol=1e-10)
    assert np.allclose(dec.absorption.sum(axis=1), 1.0)
    members = sorted(s for cls in dec.classes for s in cls)
    assert sorted(members + list(dec.transient)) == list(range(len(p)))
    for s in dec.transient:
        assert np.allclose(c[:, s], 0.0)


def test_cesaro_periodic_chain():
    p = np.array([[0.0, 1.0], [1.0, 0.0]])
    dec = chain_decomposition(p)
    assert dec.classes == [(0, 1)]
    assert np.allclose(dec.cesaro, 0.5)


def test_cesaro_two_absorbing_classes():
    p = np.array([[0.0, 0.25, 0.75], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    dec = chain_decomposition(p)
    assert dec.classes == [(1,), (2,)]
    assert dec.transient == (0,)
    assert np.allclose(dec.cesaro[0], [0.0, 0.25, 0.75])
    assert dec.class_of(2) == 1 and dec.class_of(0) is None


def test_reachable_states_ignores_orphan():
    env = deterministic_environment(["s0", "s1", "s2"], ["a"], {("s0", "a"): "s1", ("s2", "a"): "s0"}, "s0")
    assert list(reachable_states(env, Policy.uniform(env))) == [True, True, False]


def test_environment_validation():
    with pytest.raises(DimensionMismatch):
        Environment(("s",), ("a",), np.ones((1, 1, 2)), np.ones(1))
    with pytest.raises(ValidationError):
        Environment(("s", "s"), ("a",), np.ones((2, 1, 2)) / 2, np.ones(2) / 2)
    with pytest.raises(ValidationError):
        validate_environment(Environment(("s",), ("a",), np.full((1, 1, 1), 0.5), np.ones(1)))
    with pytest.raises(ValidationError):
        validate_environment(Environment(("s",), ("a",), np.ones((1, 1, 1)), np.array([2.0])))
    with pytest.raises(ValidationError):
        validate_environment(Environment(("s",), ("a",), -np.ones((1, 1, 1)), np.ones(1)))


def test_policy_validation_and_mapping():
    env = deterministic_environment(["s0", "s1"], ["a", "b"], {("s0", "a"): "s1"}, "s0")
    with pytest.raises(ValidationError):
        validate_policy(env, Policy(np.array([[0.5, 0.6], [1.0, 0.0]])))
    with pytest.raises(DimensionMismatch):
        validate_policy(env, Policy(np.ones((3, 2)) / 2))
    p = Policy.from_mapping(env, {"s0": {"a": 0.25, "b": 0.75}}, default="b")
    assert np.allclose(p.action_probs, [[0.25, 0.75], [0.0, 1.0]])
    assert Policy.from_mapping(env, p.to_mapping(env)) == p
    assert np.allclose(p.mix(Policy.uniform(env), 0.5).action_probs, [[0.375, 0.625], [0.25, 0.75]])


def test_reward_from_mapping_wildcards():
    env = deterministic_environment(["s0", "s1"], ["a", "b"], {("s0", "a"): "s1"}, "s0")
    r = reward_from_mapping(env, {"s0,a,s1": 2.0, "*,b,*": -1.0})
    assert r[0, 0, 1] == 2.0
    assert np.all(r[:, 1, :] == -1.0)
    assert r[1, 0, 1] == 0.0


def test_gamma_bounds():
    _, env, policy = _instance(0)
    with pytest.raises(ValidationError):
        discounted_visitation(env, policy, 1.0)
    with pytest.raises(ValidationError):
        discounted_visitation(env, policy, -0.1)
