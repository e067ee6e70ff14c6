import numpy as np
import pytest
from hypothesis import given, strategies as st

from objspec.errors import NotDecodable, UnsupportedFragment, ValidationError
from objspec.io import environment_from_json, environment_to_json, objective_from_json, policy_from_json, with_gamma
from objspec.mdp_core import Policy, discounted_visitation, induced_chain, random_environment, random_policy
from objspec.objectives import specs as S
from objspec.objectives.constructions import (
    build_injective_return,
    decode_lasso,
    decode_return,
    interval_gap,
)
from objspec.objectives.evaluators import compare, evaluate, expected_step_reward, ordering_matrix
from objspec.objectives.ltl import compile_ltl, parse_formula
from objspec.objectives.preorders import LexicographicPreorder, Ordering, ThresholdPreorder
from objspec.objectives.reward_machine import RewardMachine, compile_rm_product
from objspec.objectives.suite import deterministic_policy, random_deterministic_environment, random_reward_machine
from objspec.objectives.wrappers import entropy, resolve_preorder, resolve_wrapper, support_count
from objspec.separations import get_fixture
from objspec.trajectory import lassos

seeds = st.integers(0, 2**32 - 1)


def _stochastic(seed):
    rng = np.random.default_rng(seed)
    env = random_environment(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    return rng, env, random_policy(rng, env, deterministic_frac=0.3)


def _deterministic(seed):
    rng = np.random.default_rng(seed)
    env = random_deterministic_environment(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
    return rng, env, deterministic_policy(rng, env)


# --- Markovian evaluators ---------------------------------------------------------


@given(seeds, st.floats(0.0, 0.95))
def test_mr_equals_visitation_weighted_reward(seed, gamma):
    rng, env, policy = _stochastic(seed)
    reward = rng.uniform(-1, 1, env.transition.shape)
    d = discounted_visitation(env, policy, gamma)
    assert abs(evaluate(S.MR(reward, gamma), env, policy) - d @ expected_step_reward(env, policy, reward)) <= 1e-9


@given(seeds)
def test_lar_equals_cycle_means_on_lassos(seed):
    rng, env, policy = _deterministic(seed)
    reward = rng.uniform(-1, 1, env.transition.shape)
    expected = sum(l.probability * l.limit_average(reward) for l in lassos(env, policy))
    assert abs(evaluate(S.LAR(reward), env, policy) - expected) <= 1e-9


@given(seeds, st.floats(0.0, 0.95), st.floats(-2, 2))
def test_rrl_closed_form(seed, gamma, alpha):
    rng, env, policy = _stochastic(seed)
    reward = rng.uniform(-1, 1, env.transition.shape)
    d = discounted_visitation(env, policy, gamma)
    penalty = np.array([entropy(policy.action_probs[s]) for s in range(env.n_states)])
    expected = d @ (expected_step_reward(env, policy, reward) - alpha * penalty)
    assert abs(evaluate(S.RRL(reward, alpha, entropy, gamma), env, policy) - expected) <= 1e-9
    mr = evaluate(S.MR(reward, gamma), env, policy)
    assert abs(evaluate(S.RRL(reward, 0.0, entropy, gamma), env, policy) - mr) <= 1e-9


@given(seeds, st.floats(0.0, 0.95))
def test_onmr_and_omorl_wrap_returns(seed, gamma):
    rng, env, policy = _stochastic(seed)
    r1, r2 = rng.uniform(-1, 1, (2,) + env.transition.shape)
    j1, j2 = evaluate(S.MR(r1, gamma), env, policy), evaluate(S.MR(r2, gamma), env, policy)
    assert abs(evaluate(S.ONMR(r1, np.tanh, gamma), env, policy) - np.tanh(j1)) <= 1e-9
    f = lambda v: v[0] * v[1]
    assert abs(evaluate(S.OMORL((r1, r2), f, gamma), env, policy) - j1 * j2) <= 1e-9


@given(seeds, st.floats(0.0, 0.9))
def test_inmr_and_imorl_average_over_trajectories(seed, gamma):
    rng, env, policy = _deterministic(seed)
    r1, r2 = rng.uniform(-1, 1, (2,) + env.transition.shape)
    found = lassos(env, policy)
    g1 = [l.discounted_return(r1, gamma) for l in found]
    g2 = [l.discounted_return(r2, gamma) for l in found]
    p = [l.probability for l in found]
    assert abs(evaluate(S.INMR(r1, np.square, gamma), env, policy) - np.dot(p, np.square(g1))) <= 1e-9
    imorl = S.IMORL((r1, r2), lambda v: max(v[0], v[1]), gamma)
    assert abs(evaluate(imorl, env, policy) - np.dot(p, np.maximum(g1, g2))) <= 1e-9


def test_compare_and_ordering_matrix():
    fx = get_fixture("ex_two_paths")
    spec = fx.objective("mr_upper")
    pu, pl = fx.policy("pi_u"), fx.policy("pi_l")
    assert compare(spec, fx.env, pu, pl) is Ordering.GREATER
    assert compare(spec, fx.env, pl, pu) is Ordering.LESS
    matrix = ordering_matrix(spec, fx.env, [pu, pl, pu])
    assert matrix[0][2] is Ordering.EQUAL and matrix[1][0] is Ordering.LESS


def test_preorders():
    lex = LexicographicPreorder()
    assert lex((1.0, 0.0), (0.0, 5.0)) is Ordering.GREATER
    assert lex((1.0, 2.0), (1.0, 2.0)) is Ordering.EQUAL
    thr = ThresholdPreorder(0.5)
    assert thr(0.5, 0.49) is Ordering.GREATER and thr(0.7, 0.9) is Ordering.EQUAL
    assert Ordering.LESS.flip() is Ordering.GREATER


# --- LTL ----------------------------------------------------------------------------


def _reach_probability(env, policy, target):
    # Independent oracle: solve h = 1 on target, h = P h elsewhere, zero where target is unreachable.
    p = induced_chain(env, policy)
    n = env.n_states
    can = {target}
    while True:
        more = {s for s in range(n) if any(p[s, t] > 0 for t in can)} | can
        if more == can:
            break
        can = more
    h = np.zeros(n)
    rest = sorted(can - {target})
    if rest:
        a = np.eye(len(rest)) - p[np.ix_(rest, rest)]
        h[rest] = np.linalg.solve(a, p[rest, target])
    h[target] = 1.0
    return float(env.initial @ h)


@given(seeds)
def test_ltl_eventually_state_is_reachability(seed):
    rng, env, policy = _stochastic(seed)
    target = int(rng.integers(env.n_states))
    spec = S.LTL(f"(eventually (state {env.states[target]}))")
    assert abs(evaluate(spec, env, policy) - _reach_probability(env, policy, target)) <= 1e-9


@given(seeds)
def test_ltl_agrees_with_lasso_semantics(seed):
    rng, env, policy = _deterministic(seed)
    s, a = env.states[int(rng.integers(env.n_states))], env.actions[int(rng.integers(env.n_actions))]
    formula = f"(or (always (not (state {s}))) (and (eventually (act {a})) (not (state {env.states[0]}))))"
    # A state atom holds on every transition that leaves or enters the state.
    expected = 0.0
    for lasso in lassos(env, policy):
        trans = lasso.prefix(len(lasso.stem) + len(lasso.cycle))
        never = all(s not in (env.states[x[0]], env.states[x[2]]) for x in trans)
        acted = any(env.actions[x[1]] == a for x in trans)
        expected += lasso.probability * float(never or (acted and 0 not in (trans[0][0], trans[0][2])))
    assert abs(evaluate(S.LTL(formula), env, policy) - expected) <= 1e-9
    monitor = compile_ltl(formula)
    assert abs(sum(l.probability * monitor.accepts_lasso(env, l) for l in lassos(env, policy)) - expected) <= 1e-9


def test_ltl_until_and_constants():
    fx = get_fixture("ex_loop")
    pa = fx.policy("pi_A")
    assert evaluate(S.LTL("true"), fx.env, pa) == 1.0
    assert evaluate(S.LTL("false"), fx.env, pa) == 0.0
    direct = evaluate(S.LTL("(eventually (state sA))"), fx.env, fx.policy("pi_alpha=0.5"))
    until = evaluate(S.LTL("(until true (state sA))"), fx.env, fx.policy("pi_alpha=0.5"))
    assert abs(direct - until) <= 1e-12


@pytest.mark.parametrize("text", ["(always (eventually (state s0)))", "(eventually (always (state s0)))",
                                  "(until (eventually (state s0)) (state s0))"])
def test_ltl_nested_temporal_operators_are_rejected(text):
    env = random_environment(np.random.default_rng(0), 2, 2)
    with pytest.raises(UnsupportedFragment):
        evaluate(S.LTL(text), env, Policy.uniform(env))


@pytest.mark.parametrize("text", ["", "(state", "s0", "(frobnicate (state s0))", "(not)", "(state s0) extra"])
def test_ltl_parse_errors(text):
    with pytest.raises(ValidationError):
        parse_formula(text)


def test_ltl_unknown_atom():
    env = random_environment(np.random.default_rng(0), 2, 2)
    with pytest.raises(ValidationError):
        evaluate(S.LTL("(eventually (state nowhere))"), env, Policy.uniform(env))


# --- reward machines ---------------------------------------------------------------


@given(seeds, st.floats(0.0, 0.95))
def test_constant_machine_equals_markovian_reward(seed, gamma):
    rng, env, policy = _stochastic(seed)
    reward = rng.uniform(-1, 1, env.transition.shape)
    rm = S.RM(RewardMachine.constant(reward, gamma))
    assert abs(evaluate(rm, env, policy) - evaluate(S.MR(reward, gamma), env, policy)) <= 1e-9


@given(seeds)
def test_machine_value_matches_lasso_returns(seed):
    rng, env, policy = _deterministic(seed)
    machine = random_reward_machine(rng, env)
    expected = sum(l.probability * machine.trajectory_return(l) for l in lassos(env, policy))
    assert abs(evaluate(S.RM(machine), env, policy) - expected) <= 1e-9


def test_product_only_keeps_reachable_pairs():
    fx = get_fixture("ex_xor")
    machine = fx.objective("rm_xor").machine
    product = compile_rm_product(fx.env, machine)
    assert len(product.pairs) <= fx.env.n_states * len(machine.machine_states)
    assert product.env.transition.shape[0] == len(product.pairs)
    assert np.allclose(product.env.transition.sum(axis=2), 1.0)


def test_machine_validation():
    env = random_environment(np.random.default_rng(0), 2, 1)
    with pytest.raises(ValidationError):
        RewardMachine(("u", "u"), 0, np.zeros((2, 2, 1, 2)), {}, 0.9)
    with pytest.raises(ValidationError):
        RewardMachine(("u",), 0, np.ones((1, 2, 1, 2)), {}, 0.9)
    missing = RewardMachine(("u",), 0, np.zeros((1, 2, 1, 2)), {}, 0.9)
    with pytest.raises(ValidationError):
        evaluate(S.RM(missing), env, Policy.uniform(env))


# --- constructions -----------------------------------------------------------------


@given(seeds)
def test_injective_return_decodes_every_lasso(seed):
    _, env, policy = _deterministic(seed)
    reward, gamma = build_injective_return(env)
    assert interval_gap(reward, gamma) > 0
    for lasso in lassos(env, policy):
        g = lasso.discounted_return(reward, gamma)
        assert decode_return(g, reward, gamma, 6) == lasso.prefix(6)
        decoded = decode_lasso(g, reward, gamma)
        assert abs(decoded.discounted_return(reward, gamma) - g) <= 1e-12


def test_decode_rejects_values_outside_the_return_range():
    env = random_environment(np.random.default_rng(0), 2, 2)
    reward, gamma = build_injective_return(env)
    with pytest.raises(NotDecodable):
        decode_return(-1.0, reward, gamma, 3)
    with pytest.raises(NotDecodable):
        decode_return(0.5, np.zeros(env.transition.shape), 0.5, 3)


# --- wrappers and io ---------------------------------------------------------------


def test_wrappers():
    assert resolve_wrapper("abs")(-2.0) == 2.0
    assert resolve_wrapper("threshold(0.5)")(0.5) == 1.0
    assert resolve_wrapper("threshold(0.5)")(0.49) == 0.0
    assert abs(entropy([0.5, 0.5]) - np.log(2)) <= 1e-15
    assert support_count([0.0, 1.0, 0.0]) == 2.0
    assert isinstance(resolve_preorder("threshold(1)"), ThresholdPreorder)
    with pytest.raises(ValidationError):
        resolve_wrapper("softmax")
    with pytest.raises(ValidationError):
        resolve_preorder("entropy")


def test_environment_and_policy_round_trip():
    rng = np.random.default_rng(4)
    env = random_environment(rng, 3, 2)
    back = environment_from_json(environment_to_json(env))
    assert back.states == env.states and np.allclose(back.transition, env.transition)
    policy = random_policy(rng, env)
    assert np.allclose(policy_from_json(env, policy.to_mapping(env)).action_probs, policy.action_probs)


def test_objective_from_json():
    fx = get_fixture("ex_two_paths")
    doc = {"kind": "MR", "reward": {"*,*,*": 1.0}, "gamma": 0.5}
    mr = objective_from_json(fx.env, doc)
    assert abs(evaluate(mr, fx.env, fx.policy("pi_u")) - 2.0) <= 1e-12
    ftr = objective_from_json(fx.env, {"kind": "FTR", "embed": doc})
    assert abs(evaluate(ftr, fx.env, fx.policy("pi_u")) - 2.0) <= 1e-12
    assert abs(evaluate(with_gamma(mr, 0.0), fx.env, fx.policy("pi_u")) - 1.0) <= 1e-12
    with pytest.raises(ValidationError):
        objective_from_json(fx.env, {"kind": "XYZ"})
    with pytest.raises(ValidationError):
        objective_from_json(fx.env, {"kind": "MR", "reward": {}})
    with pytest.raises(ValidationError):
        objective_from_json(fx.env, {"kind": "MR", "embed": {"kind": "LAR", "reward": {}}})


def test_environment_json_errors():
    doc = {"states": ["s"], "actions": ["a"], "transition": {"s,a": [{"to": "t", "p": 1}]}, "initial": [1]}
    with pytest.raises(ValidationError):
        environment_from_json(doc)
    doc["transition"] = {}
    with pytest.raises(ValidationError):
        environment_from_json(doc)
