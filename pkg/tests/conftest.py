import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from objspec.hasse import verify_all
from objspec.mdp_core import Environment, Policy, random_environment, random_policy, validate_environment

settings.register_profile("objspec", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("objspec")


def with_orphan(env: Environment) -> Environment:
    """Append a state that no transition enters and the initial distribution misses."""
    n, a = env.n_states, env.n_actions
    transition = np.zeros((n + 1, a, n + 1))
    transition[:n, :, :n] = env.transition
    transition[n, :, 0] = 1.0
    initial = np.append(env.initial, 0.0)
    return validate_environment(Environment(env.states + (f"s{n}",), env.actions, transition, initial))


def orphan_instance(rng, max_states=3, max_actions=3):
    """Random environment with one unvisited state, plus a random policy on it."""
    env = with_orphan(random_environment(rng, int(rng.integers(1, max_states + 1)),
                                         int(rng.integers(1, max_actions + 1))))
    return env, random_policy(rng, env, deterministic_frac=0.3)


def perturb_rows(rng, env: Environment, policy: Policy, states) -> Policy:
    probs = policy.action_probs.copy()
    for s in states:
        row = rng.random(env.n_actions) + 0.1
        probs[s] = row / row.sum()
    return Policy(probs)


@pytest.fixture(scope="session")
def verification():
    return verify_all()
