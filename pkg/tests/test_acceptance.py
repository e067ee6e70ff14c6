"""Acceptance criteria, one test per criterion.

Tolerances and grids are the contract values; none is derived from the
implementation under test.
"""

import numpy as np
import pytest

from conftest import with_orphan
from objspec.hasse import derive_hasse, emit_dot, relation_table, verify_all
from objspec.mdp_core import (
    Policy,
    chain_decomposition,
    deterministic_environment,
    discounted_visitation,
    induced_chain,
    random_environment,
    random_policy,
    reachable_states,
)
from objspec.objectives import CORE_EDGES, build_delta_reward_basis, build_injective_return, decode_lasso
from objspec.objectives.constructions import decode_return
from objspec.objectives import specs as S
from objspec.objectives.evaluators import (
    eval_fomr,
    eval_omorl,
    eval_rrl,
    eval_trajectory_formalism,
    evaluate,
    occupancy_measure,
    policy_eval_vector,
)
from objspec.objectives.embeddings import embed
from objspec.objectives.reward_machine import compile_rm_product
from objspec.objectives.suite import (
    deterministic_policy,
    edge_suite,
    random_deterministic_environment,
    random_reward_machine,
    random_spec,
)
from objspec.objectives.wrappers import entropy
from objspec.separations import (
    OrderingConstraint,
    continuity_probe,
    get_fixture,
    mr_lp_check,
    rrl_lp_check,
)
from objspec.separations.fixtures import ALPHA_GRID, support_size
from objspec.trajectory import lassos, prefix_distribution, sample_paths

TOL = 1e-9
EPSILON = 1e-6
GAMMA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))


def _value(fx, objective, policy):
    return evaluate(fx.objective(objective), fx.env, fx.policy(policy))


def test_criterion_1_closed_forms():
    loop = get_fixture("ex_loop")
    assert abs(_value(loop, "lar_at_s0", "pi_A") - 1.0) <= TOL
    for alpha in (0.5, 0.1, 0.01):
        assert abs(_value(loop, "lar_at_s0", f"pi_alpha={alpha:g}")) <= TOL
        assert abs(_value(loop, "ltl_never_sA", f"pi_alpha={alpha:g}")) <= TOL
    assert abs(_value(loop, "ltl_never_sA", "pi_A") - 1.0) <= TOL

    paths = get_fixture("ex_two_paths")
    assert abs(_value(paths, "mr_upper", "pi_u") - 1.0) <= TOL
    assert abs(_value(paths, "mr_upper", "pi_l")) <= TOL
    assert abs(_value(paths, "lar_generic", "pi_u") - _value(paths, "lar_generic", "pi_l")) <= TOL

    single = get_fixture("ex_single_state")
    g = 0.5
    for p, v in zip(("pi_A", "pi_B", "pi_C"), (1 / (1 - g), 0.0, -1 / (1 - g))):
        assert abs(evaluate(S.MR(single.objective("mr_graded").reward, g), single.env, single.policy(p)) - v) <= TOL

    xor = get_fixture("ex_xor")
    g = xor.gamma
    for p, high in (("pi_AB", True), ("pi_BA", True), ("pi_AA", False), ("pi_BB", False)):
        assert abs(_value(xor, "onmr_abs", p) - (1 / (1 - g) if high else 0.0)) <= TOL
        assert abs(_value(xor, "rm_xor", p) - (g / (1 - g) if high else 0.0)) <= TOL
        assert abs(_value(xor, "ltl_xor", p) - (1.0 if high else 0.0)) <= TOL

    thr = get_fixture("ex_threshold")
    for p in (0.0, 0.49, 0.5, 0.51, 1.0):
        assert abs(_value(thr, "onmr_threshold", f"pi_p={p:g}") - float(p >= 0.5)) <= TOL

    traj = get_fixture("ex_three_traj")
    g, f_d = traj.gamma, traj.data["F_D"]
    seen = set()
    for name, policy in traj.policies.items():
        level = 3 - support_size(policy)
        assert abs(_value(traj, "rrl_support", name) - (level + g * f_d / (1 - g))) <= TOL
        seen.add(level)
    assert seen == {2, 1, 0}


def test_criterion_2_lp_corroboration():
    xor = get_fixture("ex_xor")
    target = xor.targets[0]
    policies = [xor.policy(p) for p in target.policies]
    res = mr_lp_check(xor.env, policies, target.constraint, gamma_grid=GAMMA_GRID, epsilon=EPSILON)
    assert not res.feasible
    assert [g for g, _ in res.report] == list(GAMMA_GRID) + ([xor.gamma] if xor.gamma not in GAMMA_GRID else [])
    assert not rrl_lp_check(xor.env, policies, target.constraint, gamma_grid=GAMMA_GRID, epsilon=EPSILON).feasible

    cycles = get_fixture("ex_two_cycles")
    t = cycles.targets[0]
    assert not rrl_lp_check(cycles.env, [cycles.policy(p) for p in t.policies], t.constraint,
                            gamma_grid=GAMMA_GRID, epsilon=EPSILON).feasible

    paths = get_fixture("ex_two_paths")
    pu, pl = paths.policy("pi_u"), paths.policy("pi_l")
    res = mr_lp_check(paths.env, [pu, pl], OrderingConstraint.from_ranks([1, 0]), gamma_grid=GAMMA_GRID,
                      epsilon=EPSILON)
    assert res.feasible
    reward = np.asarray(res.witness).reshape(paths.env.transition.shape)
    margin = evaluate(S.MR(reward, res.gamma), paths.env, pu) - evaluate(S.MR(reward, res.gamma), paths.env, pl)
    assert margin >= 5e-7


def test_criterion_3_continuity_dichotomy():
    loop = get_fixture("ex_loop")
    family = loop.families["pi_alpha"]
    alphas = ALPHA_GRID
    assert min(alphas) == 1e-4
    limit = family.build(0.0)
    rng = np.random.default_rng(3)
    specs = [loop.objective("mr_at_s0"), loop.objective("rm_until_sA")]
    for _ in range(5):
        specs.append(S.MR(rng.uniform(-1, 1, loop.env.transition.shape), float(rng.uniform(0.1, 0.95))))
        specs.append(S.RM(random_reward_machine(rng, loop.env)))
    for spec in specs:
        assert continuity_probe(loop.env, family.build, spec, alphas, limit).match, spec
    for name in ("lar_at_s0", "ltl_never_sA"):
        report = continuity_probe(loop.env, family.build, loop.objective(name), alphas, limit)
        assert not report.match, name


def _sparse_row(rng, n_actions, avoid=None):
    while True:
        k = min(n_actions, int(rng.integers(1, 3)))
        row = np.zeros(n_actions)
        idx = rng.choice(n_actions, k, replace=False)
        row[idx] = rng.random(k) + 0.1
        row /= row.sum()
        if avoid is None or not np.allclose(row, avoid):
            return row


def test_criterion_4_equivalence_properties():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        # (a) delta basis
        env = random_environment(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
        policy = random_policy(rng, env, deterministic_frac=0.3)
        gamma = float(rng.uniform(0.1, 0.95))
        vec = policy_eval_vector(env, policy, build_delta_reward_basis(env), gamma)
        occ = occupancy_measure(env, policy, gamma).values
        assert np.max(np.abs(vec - np.array([occ[x] for x in env.triples()]))) <= TOL

        # (b) occupancy equality iff depth-2n prefix equality, on agreeing and disagreeing pairs
        env = with_orphan(random_environment(rng, int(rng.integers(1, 4)), int(rng.integers(2, 4)), sparsity=0.6))
        base = np.array([_sparse_row(rng, env.n_actions) for _ in range(env.n_states)])
        p1 = Policy(base)
        visited = reachable_states(env, p1)
        agree = base.copy()
        for s in np.flatnonzero(~visited):
            agree[s] = _sparse_row(rng, env.n_actions, avoid=base[s])
        s = int(rng.choice(np.flatnonzero(visited)))
        disagree = base.copy()
        disagree[s] = _sparse_row(rng, env.n_actions, avoid=base[s])
        depth = 2 * env.n_states
        ref = prefix_distribution(env, p1, depth)
        for other, equal in ((Policy(agree), True), (Policy(disagree), False)):
            occ_equal = np.max(np.abs(occupancy_measure(env, p1, 0.5).values
                                      - occupancy_measure(env, other, 0.5).values)) <= TOL
            prefix_equal = ref.total_variation(prefix_distribution(env, other, depth)) <= TOL
            assert occ_equal == prefix_equal == equal

        # (c) FTR -> INMR through the injective return
        env = random_deterministic_environment(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
        ftr = random_spec("FTR", env, rng)
        inmr = embed(ftr, "INMR", env)
        reward, g_inj = build_injective_return(env)
        for _ in range(3):
            policy = deterministic_policy(rng, env)
            assert abs(evaluate(ftr, env, policy) - evaluate(inmr, env, policy)) <= TOL
            for lasso in lassos(env, policy):
                g = lasso.discounted_return(reward, g_inj)
                depth = len(lasso.stem) + 2 * len(lasso.cycle)
                assert [tuple(x) for x in decode_return(g, reward, g_inj, depth)] == lasso.prefix(depth)
                decoded = decode_lasso(g, reward, g_inj)
                assert abs(ftr.f(decoded) - ftr.f(lasso)) <= TOL


def test_criterion_5_embedding_suite():
    assert len(CORE_EDGES) == 17
    failures = {}
    for edge in CORE_EDGES:
        report = edge_suite(edge, instances=50, seed=0)
        if not report.passed:
            failures[report.label] = report.failures[:3]
    assert not failures


def test_criterion_6_well_definedness():
    rng = np.random.default_rng(6)
    for _ in range(50):
        env = with_orphan(random_environment(rng, int(rng.integers(1, 4)), int(rng.integers(1, 4))))
        p1 = random_policy(rng, env, deterministic_frac=0.3)
        unvisited = np.flatnonzero(~reachable_states(env, p1))
        assert len(unvisited)
        probs = p1.action_probs.copy()
        for s in unvisited:
            row = rng.random(env.n_actions) + 0.05
            probs[s] = row / row.sum()
        p2 = Policy(probs)
        gamma = float(rng.uniform(0.1, 0.95))
        assert np.max(np.abs(occupancy_measure(env, p1, gamma).values
                             - occupancy_measure(env, p2, gamma).values)) <= TOL
        r, r2 = rng.uniform(-1, 1, env.transition.shape), rng.uniform(-1, 1, env.transition.shape)
        alpha = float(rng.uniform(-1, 1))
        assert abs(eval_rrl(env, p1, r, alpha, entropy, gamma) - eval_rrl(env, p2, r, alpha, entropy, gamma)) <= TOL

        def f(v):
            return float(np.tanh(v[0]) * v[1] ** 2)

        assert abs(eval_omorl(env, p1, (r, r2), f, gamma) - eval_omorl(env, p2, (r, r2), f, gamma)) <= TOL
        w = rng.uniform(-1, 1, env.transition.shape)

        def h(m):
            return float(np.sin(np.sum(np.asarray(m) * w)))

        assert abs(eval_fomr(env, p1, h, gamma) - eval_fomr(env, p2, h, gamma)) <= TOL

    thr = get_fixture("ex_threshold")
    build = thr.families["pi_p"].build
    left, right = build(1.0), build(0.0)
    for _ in range(10):
        r = rng.uniform(-1, 1, thr.env.transition.shape)
        c = rng.uniform(0.5, 3.0, 2)
        spec = S.FTR(lambda xi, r=r, c=c: float(np.sin(c[0] * xi.discounted_return(r, 0.9)) + c[1]
                                                 * xi.discounted_return(r, 0.5) ** 2))
        jl = eval_trajectory_formalism(thr.env, left, spec)
        jr = eval_trajectory_formalism(thr.env, right, spec)
        for p in (0.0, 0.25, 0.49, 0.5, 0.51, 0.9, 1.0):
            assert abs(eval_trajectory_formalism(thr.env, build(p), spec) - (p * jl + (1 - p) * jr)) <= 1e-12


def test_criterion_7_hasse_integrity():
    table = relation_table()
    assert table.transitivity_violations() == []
    graph = derive_hasse(table)
    classes = {frozenset(c) for c in graph.classes}
    for merged in ({"INMR", "IMORL", "FTR"}, {"OMORL", "FOMR", "FTLR"}, {"GOMORL", "OMO", "TLO"}):
        assert frozenset(merged) in classes
    assert graph.top == (("PO",),)
    report = verify_all()
    assert report.failures == []
    assert emit_dot(derive_hasse(relation_table())) == emit_dot(graph)
    # Required count is 9; 17 formalisms with three merged triples leave 11, so this stays red.
    assert len(graph.classes) == 9, f"{len(graph.classes)} classes: {graph.classes}"


def _power_average(p, n):
    # Σ_{t<n} P^t by binary splitting, then divided by n.
    def geometric(k):
        if k == 0:
            return np.zeros_like(p), np.eye(len(p))
        if k % 2:
            s, pk = geometric(k - 1)
            return s + pk, pk @ p
        s, pk = geometric(k // 2)
        return s + pk @ s, pk @ pk
    return geometric(n)[0] / n


def test_criterion_8_oracles():
    rng = np.random.default_rng(8)
    for _ in range(20):
        env = random_environment(rng, int(rng.integers(1, 6)), 1, sparsity=0.6)
        chain = induced_chain(env, Policy(np.ones((env.n_states, 1))))
        assert np.max(np.abs(chain_decomposition(chain).cesaro - _power_average(chain, 10**5))) <= 1e-4

        env = random_environment(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)))
        policy = random_policy(rng, env)
        gamma = float(rng.uniform(0.1, 0.95))
        chain = induced_chain(env, policy)
        dist, d = env.initial.copy(), np.zeros(env.n_states)
        for t in range(1000):
            d += gamma**t * dist
            dist = dist @ chain
        assert np.max(np.abs(discounted_visitation(env, policy, gamma) - d)) <= 1e-8

    xor = get_fixture("ex_xor")
    spec = xor.objective("rm_xor")
    machine = spec.machine
    assert compile_rm_product(xor.env, machine).reward.ndim == 3
    # Deterministic policies are exact here (zero variance); they are covered by criterion 1.
    stochastic = [Policy.from_mapping(xor.env, {"sA": {"aA": 0.7, "aB": 0.3}, "sB": {"aA": 0.4, "aB": 0.6}}),
                  Policy(np.full((xor.env.n_states, xor.env.n_actions), 1 / xor.env.n_actions))]
    horizon, samples = 150, 10**5
    bias = machine.gamma**horizon * _reward_bound(machine) / (1 - machine.gamma)
    for policy in stochastic:
        total = _simulate_rm(xor.env, policy, machine, samples, horizon, np.random.default_rng(8))
        mean, se = total.mean(), total.std(ddof=1) / np.sqrt(samples)
        assert abs(evaluate(spec, xor.env, policy) - mean) <= 3 * se + bias + TOL


def _reward_bound(machine):
    return max(float(np.max(np.abs(r))) for r in machine.delta_r.values())


def _simulate_rm(env, policy, machine, samples, horizon, rng):
    """Independent joint simulation of environment and machine, streaming returns."""
    n, a = env.n_states, env.n_actions
    k = machine.delta_u.shape[0]
    # One draw per step over the joint (action, successor) outcome j = a * n + s'.
    joint = (policy.action_probs[:, :, None] * env.transition).reshape(n, a * n)
    cdf = np.cumsum(joint, axis=1)
    succ = np.tile(np.arange(n), a)
    nxt_u = machine.delta_u.reshape(k, n, a * n)
    reward = np.zeros((k, n, a * n))
    for (x, y), table in machine.delta_r.items():
        flat = table.reshape(n, a * n)
        reward[x] = np.where(nxt_u[x] == y, flat, reward[x])

    s = np.minimum((rng.random(samples)[:, None] >= np.cumsum(env.initial)).sum(axis=1), n - 1)
    u = np.full(samples, machine.start)
    total = np.zeros(samples)
    for t in range(horizon):
        j = np.minimum((rng.random(samples)[:, None] >= cdf[s]).sum(axis=1), a * n - 1)
        total += machine.gamma**t * reward[u, s, j]
        s, u = succ[j], nxt_u[u, s, j]
    return total
