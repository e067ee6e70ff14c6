"""Mechanical verification of every fixture's claims.

:func:`run_separation` replays a fixture: recorded closed forms, each
positive claim against its witness objective, and each negative claim
through the check named by its ``method``:

``lp``
    linear infeasibility over the formalism's parameters (MR, RRL, LAR);
``continuity``
    the objective converges along the fixture's policy family, so it
    cannot separate the limit policy from the family;
``two-valued``
    deterministic policies have one trajectory, so LTL takes two values;
``collision``
    random rewards always give two differently ranked policies the same
    discounted return;
``convexity``
    trajectory objectives are linear under mixing at a single state;
``occupancy-identity``
    the policies share occupancy measures and trajectory lotteries;
``proof-reference-only``
    no finite check exists; recorded without computation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import ObjspecError, UnknownFixture
from ..mdp_core import Policy
from ..objectives import specs as S
from ..objectives.constructions import build_delta_reward_basis
from ..objectives.evaluators import compare, evaluate, policy_eval_vector
from ..objectives.preorders import LexicographicPreorder, Ordering
from ..objectives.reward_machine import compile_rm_product
from ..objectives.suite import random_reward_machine
from ..trajectory import lassos, lottery_equal
from .fixtures import BUILDERS, Relation, SeparationFixture, Target, support_size
from .lp import DEFAULT_EPSILON, lar_lp_check, mr_lp_check, rrl_lp_check, trajectory_lp_check
from .probes import CollisionSearch, continuity_probe

TOL = 1e-9
COLLISION_SEEDS = 8
MIXTURE_WRAPPERS = 10


@dataclass(frozen=True)
class Check:
    claim: str
    expected: Any
    computed: Any
    passed: bool

    def to_json(self) -> dict:
        return {"claim": self.claim, "expected": _plain(self.expected), "computed": _plain(self.computed),
                "pass": bool(self.passed)}


@dataclass
class SeparationReport:
    fixture: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, claim: str, expected, computed, passed: bool) -> None:
        self.checks.append(Check(claim, expected, computed, bool(passed)))

    def to_json(self) -> dict:
        return {"fixture": self.fixture, "checks": [c.to_json() for c in self.checks], "pass": self.passed}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _plain(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (Ordering, Relation)):
        return str(x)
    return x


def _close(a: float, b: float, tol: float = TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


# --- positive claims --------------------------------------------------------------


def _ordering_violations(fx: SeparationFixture, target: Target, spec) -> list[str]:
    policies = [fx.policy(p) for p in target.policies]
    bad = []
    for i, j, rel in target.constraint.pairs:
        got = compare(spec, fx.env, policies[i], policies[j])
        want = Ordering.GREATER if rel is Relation.STRICTLY_GREATER else Ordering.EQUAL
        if got is not want:
            bad.append(f"{target.policies[i]} vs {target.policies[j]}: {got}, want {want}")
    return bad


def _check_witness(report, fx, target, claim):
    name = target.witnesses.get(claim.formalism)
    if name is None:
        report.add(f"{target.name}: {claim.formalism} witness", "objective", "missing", False)
        return
    spec = fx.objective(name)
    bad = _ordering_violations(fx, target, spec)
    report.add(f"{target.name}: {name} induces the target ordering over {len(target.policies)} policies",
               0, len(bad) if not bad else bad[:3], not bad)


# --- negative claims --------------------------------------------------------------


def _target_policies(fx, target):
    return [fx.policy(p) for p in target.policies]


def _check_lp(report, fx, target, claim, expect_feasible=False):
    policies = _target_policies(fx, target)
    if claim.formalism == "MR":
        result = mr_lp_check(fx.env, policies, target.constraint, fixture_gamma=fx.gamma)
    elif claim.formalism == "RRL":
        result = rrl_lp_check(fx.env, policies, target.constraint, fixture_gamma=fx.gamma)
    elif claim.formalism == "LAR":
        result = lar_lp_check(fx.env, policies, target.constraint)
    else:
        report.add(f"{target.name}: {claim.formalism} LP", "supported formalism", claim.formalism, False)
        return
    want = "Feasible" if expect_feasible else "Infeasible"
    ok = result.status == want
    computed = result.status
    if expect_feasible and result.feasible:
        computed = {"status": result.status, "margin": result.margin, "gamma": result.gamma}
        ok = result.margin >= DEFAULT_EPSILON / 2
    report.add(f"{target.name}: {claim.formalism}-LP over the discount grid", want, computed, ok)


def _family(fx):
    name, family = next(iter(fx.families.items()))
    return name, family


def _check_continuity(report, fx, target, claim):
    name, family = _family(fx)
    limit_policy = family.build(family.limit)
    limit = next((p for p in target.policies if fx.policy(p) == limit_policy), "its limit")
    rng = np.random.default_rng(0)
    specs = []
    if claim.formalism == "MR":
        specs = [(n, s) for n, s in fx.objectives.items() if isinstance(s, S.MR)]
        specs += [(f"random MR #{k}", S.MR(rng.uniform(-1, 1, fx.env.transition.shape), fx.gamma))
                  for k in range(3)]
    elif claim.formalism == "RM":
        specs = [(n, s) for n, s in fx.objectives.items() if isinstance(s, S.RM)]
        specs += [(f"random RM #{k}", S.RM(random_reward_machine(rng, fx.env))) for k in range(3)]
    for label, spec in specs:
        probe = continuity_probe(fx.env, family.build, spec, family.grid, limit_policy)
        report.add(f"{target.name}: {label} is continuous along {name} as it tends to {limit}",
                   True, {"match": probe.match, "gap": abs(probe.values[-1] - probe.limit_value),
                          "tolerance": probe.tolerance}, probe.match)
    # The witnesses of the positive claims must be the discontinuous ones (checked once per target).
    done = any(c.claim.startswith(f"{target.name}: ") and "jumps at the limit" in c.claim for c in report.checks)
    for formalism, witness in ([] if done else target.witnesses.items()):
        probe = continuity_probe(fx.env, family.build, fx.objective(witness), family.grid, limit_policy)
        report.add(f"{target.name}: {witness} ({formalism}) jumps at the limit of {name}", False,
                   {"match": probe.match, "gap": abs(probe.values[-1] - probe.limit_value)}, not probe.match)


def _check_two_valued(report, fx, target, claim):
    counts = {p: len(lassos(fx.env, fx.policy(p))) for p in target.policies}
    levels = len(set(_ranks(target)))
    report.add(f"{target.name}: every policy generates a single trajectory", 1,
               sorted(set(counts.values())), set(counts.values()) == {1})
    report.add(f"{target.name}: the target uses more than two levels", "> 2", levels, levels > 2)


def _ranks(target):
    # Number of distinct levels: connected components of the Equal relation.
    n = len(target.policies)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, j, r in target.constraint.pairs:
        if r is Relation.EQUAL:
            parent[find(i)] = find(j)
    return [find(i) for i in range(n)]


def _collision_rewards(fx, seeds):
    rng = np.random.default_rng(12345)
    shape = fx.env.transition.shape
    out = [("zero reward", np.zeros(shape)), ("integer reward", rng.integers(-1, 2, shape).astype(float))]
    out += [(f"random reward #{k}", rng.uniform(-1, 1, shape)) for k in range(seeds)]
    return out


def _check_collision(report, fx, target, claim, seeds=COLLISION_SEEDS):
    points = {p: (fx.policy(p), c) for p, c in fx.classes.items()}
    search = CollisionSearch(fx.env, fx.gamma, points, fx.curves)
    for label, reward in _collision_rewards(fx, seeds):
        hit = search.find(reward)
        computed = None if hit is None else {
            "policies": [hit.first.name, hit.second.name], "classes": [hit.first_class, hit.second_class],
            "returns": [hit.first_value, hit.second_value]}
        report.add(f"{target.name}: {label} gives differently ranked policies equal returns",
                   "collision", computed, hit is not None)


def _check_convexity(report, fx, target, claim):
    policies = _target_policies(fx, target)
    result = trajectory_lp_check(fx.env, policies, target.constraint)
    report.add(f"{target.name}: FTR-LP over trajectory values", "Infeasible", result.status, not result.feasible)
    # J_FTR(mixture at s0) is the mixture of J_FTR at the pure policies, for any f.
    # Each policy randomises at s0 only; compare with the pure policies that agree elsewhere.
    def pure(p, a):
        probs = p.action_probs.copy()
        probs[0] = np.eye(fx.env.n_actions)[a]
        return Policy(probs)

    actions = range(fx.env.n_actions)
    keys = sorted({(l.stem, l.cycle) for p in policies for a in actions for l in lassos(fx.env, pure(p, a))})
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(MIXTURE_WRAPPERS):
        table = dict(zip(keys, rng.uniform(-1, 1, len(keys))))
        spec = S.FTR(lambda xi, table=table: table[(xi.stem, xi.cycle)])
        for p in policies:
            mixed = sum(p.action_probs[0, a] * evaluate(spec, fx.env, pure(p, a)) for a in actions)
            worst = max(worst, abs(evaluate(spec, fx.env, p) - mixed))
    report.add(f"{target.name}: J_FTR is linear in the s0 mixture for {MIXTURE_WRAPPERS} random f",
               0.0, worst, worst <= 1e-12)


def _check_occupancy_identity(report, fx, target, claim):
    p1, p2 = (fx.policy(p) for p in target.policies[:2])
    report.add(f"{target.name}: equal trajectory lotteries", True, lottery_equal(fx.env, p1, p2),
               lottery_equal(fx.env, p1, p2))
    basis = build_delta_reward_basis(fx.env)
    v1 = policy_eval_vector(fx.env, p1, basis, fx.gamma)
    v2 = policy_eval_vector(fx.env, p2, basis, fx.gamma)
    gap = float(np.max(np.abs(v1 - v2)))
    report.add(f"{target.name}: equal delta-basis evaluation vectors", 0.0, gap, gap <= TOL)
    rng = np.random.default_rng(3)
    results = []
    for _ in range(5):
        rewards = tuple(rng.uniform(-1, 1, fx.env.transition.shape) for _ in range(3))
        spec = S.GOMORL(rewards, fx.gamma, LexicographicPreorder())
        results.append(str(compare(spec, fx.env, p1, p2)))
    report.add(f"{target.name}: random GOMORL objectives rank the policies equal", ["Equal"] * 5, results,
               set(results) == {"Equal"})


def _check_reference_only(report, fx, target, claim):
    report.add(f"{target.name}: {claim.formalism} cannot express the target (analytic argument only)",
               "proof-reference-only", "proof-reference-only", True)


NEGATIVE_CHECKS = {
    "lp": _check_lp,
    "continuity": _check_continuity,
    "two-valued": _check_two_valued,
    "collision": _check_collision,
    "convexity": _check_convexity,
    "occupancy-identity": _check_occupancy_identity,
    "proof-reference-only": _check_reference_only,
}


def _check_claim(report, fx, target, claim):
    methods = claim.method.split("+")
    for method in methods:
        if method == "witness":
            _check_witness(report, fx, target, claim)
        elif method == "lp" and claim.expresses:
            _check_lp(report, fx, target, claim, expect_feasible=True)
        else:
            NEGATIVE_CHECKS[method](report, fx, target, claim)


# --- fixture-specific extras ------------------------------------------------------


def _extra_checks(report, fx):
    if fx.name == "ex_lex":
        spec = fx.objective("gomorl_lex")
        worst = 0.0
        for name, vec in fx.data["vectors"].items():
            got = policy_eval_vector(fx.env, fx.policy(name), spec.rewards, spec.gamma)
            worst = max(worst, float(np.max(np.abs(got - np.asarray(vec)))))
        report.add("J-vector equals (π(aA|s0), γ·π(aB|sA)) on the policy grid", 0.0, worst, worst <= TOL)
        names = list(fx.data["vectors"])
        vecs = [policy_eval_vector(fx.env, fx.policy(n), spec.rewards, spec.gamma) for n in names]
        pre = spec.preorder
        bad = 0
        for x in vecs:
            for y in vecs:
                if pre.compare(x, y) is not pre.compare(y, x).flip():
                    bad += 1
                for z in vecs:
                    if (pre.compare(x, y) is not Ordering.LESS and pre.compare(y, z) is not Ordering.LESS
                            and pre.compare(x, z) is Ordering.LESS):
                        bad += 1
        report.add("lexicographic comparison is a total preorder on the sampled vectors", 0, bad, bad == 0)
    if fx.name == "ex_xor":
        machine = fx.objective("rm_xor").machine
        product = compile_rm_product(fx.env, machine)
        bound = fx.env.n_states * len(machine.machine_states)
        report.add("reward-machine product has at most |S|·|U| reachable states", f"<= {bound}",
                   len(product.pairs), len(product.pairs) <= bound)
    if fx.name == "ex_three_traj":
        values = sorted({support_size(p) for p in fx.policies.values()})
        report.add("target policies cover supports of size 1, 2 and 3", [1, 2, 3], values, values == [1, 2, 3])


def run_separation(fixture: str | SeparationFixture, collision_seeds: int = COLLISION_SEEDS) -> SeparationReport:
    """Replay every closed form and claim of a fixture (a name or a fixture object)."""
    if not isinstance(fixture, SeparationFixture) and fixture not in BUILDERS:
        raise UnknownFixture(f"unknown fixture {fixture!r}; known: {', '.join(BUILDERS)}")
    fx = BUILDERS[fixture]() if isinstance(fixture, str) else fixture
    report = SeparationReport(fx.name)
    for e in fx.expected:
        value = evaluate(fx.objective(e.objective), fx.env, fx.policy(e.policy))
        label = f"{e.objective}({e.policy}) closed form" + (f" {e.note}" if e.note else "")
        report.add(label, e.value, value, _close(value, e.value))
    for target in fx.targets:
        for claim in target.claims:
            try:
                if claim.method == "collision":
                    _check_collision(report, fx, target, claim, collision_seeds)
                else:
                    _check_claim(report, fx, target, claim)
            except ObjspecError as exc:
                report.add(f"{target.name}: {claim.formalism} {claim.verdict}", claim.verdict,
                           f"error: {exc}", False)
    _extra_checks(report, fx)
    return report
