"""Counterexample environments witnessing the non-expressivity results.

Each :class:`SeparationFixture` bundles an environment, named policies
(parametric families are sampled on fixed grids), the objective
specifications that realise the target orderings, and the claims the
checkers verify.  Pairs of state and action not wired explicitly are
self-loops.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import UnknownFixture, ValidationError
from ..mdp_core import Environment, Policy, deterministic_environment, reward_from_mapping
from ..objectives import specs as S
from ..objectives.ltl import parse_formula
from ..objectives.preorders import LexicographicPreorder
from ..objectives.reward_machine import RewardMachine
from ..objectives.wrappers import absolute, entropy, support_count, threshold

ALPHA_GRID = (0.5, 0.1, 0.01, 0.001, 0.0001)
THETA_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)
Q_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)


class Relation(enum.Enum):
    STRICTLY_GREATER = "StrictlyGreater"
    EQUAL = "Equal"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class OrderingConstraint:
    """Finite fragment of a policy ordering: ``(i, j, relation)`` triples."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple((int(i), int(j), Relation(r)) for i, j, r in self.pairs)
        seen = {}
        for i, j, r in pairs:
            key = (min(i, j), max(i, j))
            normal = (i, j, r) if (i <= j or r is Relation.STRICTLY_GREATER) else (j, i, r)
            if key in seen and seen[key] != normal:
                raise ValidationError(f"conflicting relations for policies {key}")
            seen[key] = normal
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_ranks(cls, ranks: Sequence[float]) -> "OrderingConstraint":
        """Total preorder over indices: higher rank is strictly better, equal ranks tie."""
        pairs = []
        for i, j in itertools.combinations(range(len(ranks)), 2):
            if ranks[i] == ranks[j]:
                pairs.append((i, j, Relation.EQUAL))
            elif ranks[i] > ranks[j]:
                pairs.append((i, j, Relation.STRICTLY_GREATER))
            else:
                pairs.append((j, i, Relation.STRICTLY_GREATER))
        return cls(tuple(pairs))

    def check_indices(self, n: int) -> None:
        for i, j, _ in self.pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"constraint index out of range for {n} policies")

    def violations(self, values: Sequence[float], tol: float = 1e-9) -> list[tuple]:
        bad = []
        for i, j, r in self.pairs:
            diff = values[i] - values[j]
            ok = diff > tol if r is Relation.STRICTLY_GREATER else abs(diff) <= tol
            if not ok:
                bad.append((i, j, r))
        return bad

    def satisfied_by(self, values: Sequence[float], tol: float = 1e-9) -> bool:
        return not self.violations(values, tol)


@dataclass(frozen=True)
class Claim:
    """``formalism`` can (or cannot) induce the target; ``method`` names the check used."""

    formalism: str
    expresses: bool
    reference: str
    method: str

    @property
    def verdict(self) -> str:
        return "CanExpress" if self.expresses else "CannotExpress"


@dataclass(frozen=True)
class PolicyFamily:
    """Parametric policies ``build(x)`` with the grid they are sampled on."""

    build: Callable[[float], Policy]
    grid: tuple
    limit: float | None = None


@dataclass(frozen=True)
class Target:
    """An ordering over a subset of the fixture's policies, and who can express it."""

    name: str
    reference: str
    policies: tuple
    constraint: OrderingConstraint
    claims: tuple
    witnesses: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Expected:
    """Closed-form value of ``objective`` at ``policy``."""

    objective: str
    policy: str
    value: float
    note: str = ""


@dataclass(frozen=True, eq=False)
class SeparationFixture:
    name: str
    env: Environment
    gamma: float
    policies: Mapping[str, Policy]
    objectives: Mapping[str, object]
    targets: tuple
    expected: tuple = ()
    families: Mapping[str, PolicyFamily] = field(default_factory=dict)
    # Named point policies and curves used by the mixture-collision checks.
    curves: Mapping[str, tuple] = field(default_factory=dict)
    classes: Mapping[str, object] = field(default_factory=dict)
    data: Mapping[str, object] = field(default_factory=dict)

    def policy(self, name: str) -> Policy:
        try:
            return self.policies[name]
        except KeyError:
            raise ValidationError(f"fixture {self.name} has no policy {name!r}; "
                                  f"choose from {', '.join(self.policies)}") from None

    def objective(self, name: str):
        try:
            return self.objectives[name]
        except KeyError:
            raise ValidationError(f"fixture {self.name} has no objective {name!r}; "
                                  f"choose from {', '.join(self.objectives)}") from None

    def with_env(self, env: Environment) -> "SeparationFixture":
        """Rebuild this fixture on another environment with the same names."""
        if env.states != self.env.states or env.actions != self.env.actions:
            raise ValidationError(f"replacement environment for {self.name} must keep states "
                                  f"{self.env.states} and actions {self.env.actions}")
        return BUILDERS[self.name](env)


# --- helpers --------------------------------------------------------------------


def _policy(env: Environment, mapping: Mapping, name: str) -> Policy:
    # Unlisted states take the first action; they are unreachable in every fixture.
    return Policy.from_mapping(env, mapping, default=env.actions[0], name=name)


def _reward(env: Environment, mapping: Mapping[str, float]) -> np.ndarray:
    return reward_from_mapping(env, mapping)


def _s0_row(env: Environment, probs: Mapping[str, float], rest: str, name: str) -> Policy:
    # Policy that randomises at s0 only and plays ``rest`` elsewhere.
    mapping = {s: rest for s in env.states}
    mapping["s0"] = dict(probs)
    return _policy(env, mapping, name)


def _fmt(x: float) -> str:
    return f"{x:g}"


# --- the twelve fixtures ----------------------------------------------------------


def _loop_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA"], ["aA", "aB", "aC"],
        {("s0", "aA"): "s0", ("s0", "aB"): "sA", ("sA", "aC"): "sA"}, "s0")


def build_ex_loop(env: Environment | None = None) -> SeparationFixture:
    env = env or _loop_env()
    gamma = 0.9

    def pi_alpha(alpha: float) -> Policy:
        return _policy(env, {"s0": {"aA": 1 - alpha, "aB": alpha}, "sA": "aC"}, f"pi_alpha={_fmt(alpha)}")

    policies = {"pi_A": _policy(env, {"s0": "aA", "sA": "aC"}, "pi_A"),
                "pi_B": _policy(env, {"s0": "aB", "sA": "aC"}, "pi_B")}
    for alpha in ALPHA_GRID:
        p = pi_alpha(alpha)
        policies[p.name] = p
    order = list(policies)
    ranks = [1 if name == "pi_A" else 0 for name in order]
    seen_a = RewardMachine.from_functions(
        env, ["u0", "seen"], "u0",
        lambda u, s, a, t: "seen" if (u == "seen" or t == "sA") else "u0",
        {("u0", "u0"): _reward(env, {"*,*,*": 1.0}), ("u0", "seen"): np.zeros(env.transition.shape),
         ("seen", "seen"): np.zeros(env.transition.shape)}, gamma)
    objectives = {
        "lar_at_s0": S.LAR(_reward(env, {"s0,*,*": 1.0})),
        "ltl_never_sA": S.LTL(parse_formula("(not (eventually (state sA)))")),
        "mr_at_s0": S.MR(_reward(env, {"s0,*,*": 1.0}), gamma),
        "rm_until_sA": S.RM(seen_a),
    }
    expected = [Expected("lar_at_s0", name, 1.0 if name == "pi_A" else 0.0) for name in order]
    expected += [Expected("ltl_never_sA", name, 1.0 if name == "pi_A" else 0.0) for name in order]
    target = Target(
        "discontinuity", "ex_loop/discontinuity", tuple(order), OrderingConstraint.from_ranks(ranks),
        (Claim("LAR", True, "ex_loop/discontinuity", "witness"),
         Claim("LTL", True, "ex_loop/discontinuity", "witness"),
         Claim("MR", False, "ex_loop/discontinuity", "lp+continuity"),
         Claim("RM", False, "ex_loop/discontinuity", "continuity")),
        {"LAR": "lar_at_s0", "LTL": "ltl_never_sA"})
    return SeparationFixture("ex_loop", env, gamma, policies, objectives, (target,), tuple(expected),
                             families={"pi_alpha": PolicyFamily(pi_alpha, ALPHA_GRID, 0.0)})


def _two_paths_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA", "sB", "sC"], ["aA", "aB", "aC", "aD", "aE"],
        {("s0", "aA"): "sA", ("sA", "aC"): "sC", ("s0", "aB"): "sB", ("sB", "aD"): "sC",
         ("sC", "aE"): "sC"}, "s0")


def build_ex_two_paths(env: Environment | None = None) -> SeparationFixture:
    env = env or _two_paths_env()
    gamma = 0.9
    rest = {"sA": "aC", "sB": "aD", "sC": "aE"}
    policies = {"pi_u": _policy(env, {"s0": "aA", **rest}, "pi_u"),
                "pi_l": _policy(env, {"s0": "aB", **rest}, "pi_l")}
    lar_reward = {"s0,aA,sA": 0.3, "sA,aC,sC": -0.7, "s0,aB,sB": 0.9, "sB,aD,sC": 0.2, "sC,aE,sC": 0.5}
    objectives = {
        "mr_upper": S.MR(_reward(env, {"s0,aA,sA": 1.0}), gamma),
        "ltl_reach_sA": S.LTL(parse_formula("(eventually (state sA))")),
        "lar_generic": S.LAR(_reward(env, lar_reward)),
    }
    expected = (Expected("mr_upper", "pi_u", 1.0), Expected("mr_upper", "pi_l", 0.0),
                Expected("ltl_reach_sA", "pi_u", 1.0), Expected("ltl_reach_sA", "pi_l", 0.0),
                Expected("lar_generic", "pi_u", 0.5, "R(sC,aE,sC)"),
                Expected("lar_generic", "pi_l", 0.5, "R(sC,aE,sC)"))
    target = Target(
        "upper_path", "ex_two_paths/upper_path", ("pi_u", "pi_l"), OrderingConstraint.from_ranks([1, 0]),
        (Claim("MR", True, "ex_two_paths/upper_path", "witness+lp"),
         Claim("LTL", True, "ex_two_paths/upper_path", "witness"),
         Claim("LAR", False, "ex_two_paths/upper_path", "lp")),
        {"MR": "mr_upper", "LTL": "ltl_reach_sA"})
    return SeparationFixture("ex_two_paths", env, gamma, policies, objectives, (target,), expected)


def _single_state_env() -> Environment:
    return deterministic_environment(["s0"], ["aA", "aB", "aC"], {}, "s0")


def _vertex_policies(env: Environment) -> dict[str, Policy]:
    return {f"pi_{x[1:]}": _policy(env, {"s0": x}, f"pi_{x[1:]}") for x in ("aA", "aB", "aC")}


def build_ex_single_state(env: Environment | None = None) -> SeparationFixture:
    env = env or _single_state_env()
    gamma = 0.5
    policies = _vertex_policies(env)
    reward = _reward(env, {"s0,aA,s0": 1.0, "s0,aB,s0": 0.0, "s0,aC,s0": -1.0})
    objectives = {"mr_graded": S.MR(reward, gamma), "lar_graded": S.LAR(reward)}
    scale = 1 / (1 - gamma)
    expected = tuple(Expected("mr_graded", p, v) for p, v in zip(policies, (scale, 0.0, -scale)))
    expected += tuple(Expected("lar_graded", p, v) for p, v in zip(policies, (1.0, 0.0, -1.0)))
    target = Target(
        "three_levels", "ex_single_state/three_levels", tuple(policies), OrderingConstraint.from_ranks([2, 1, 0]),
        (Claim("MR", True, "ex_single_state/three_levels", "witness"),
         Claim("LAR", True, "ex_single_state/three_levels", "witness"),
         Claim("LTL", False, "ex_single_state/three_levels", "two-valued")),
        {"MR": "mr_graded", "LAR": "lar_graded"})
    return SeparationFixture("ex_single_state", env, gamma, policies, objectives, (target,), expected)


def _xor_env() -> Environment:
    return deterministic_environment(
        ["sA", "sB"], ["aA", "aB"],
        {("sA", "aA"): "sB", ("sA", "aB"): "sB", ("sB", "aA"): "sA", ("sB", "aB"): "sA"},
        {"sA": 0.5, "sB": 0.5})


def xor_machine(env: Environment, gamma: float) -> RewardMachine:
    """Machine remembering the last action; rewards alternation after the first step."""
    r1 = _reward(env, {"*,aB,*": 1.0})
    r2 = _reward(env, {"*,aA,*": 1.0})
    zero = np.zeros(env.transition.shape)
    rewards = {("u0", "uA"): zero, ("u0", "uB"): zero}
    for v in ("uA", "uB"):
        rewards[("uA", v)] = r1
        rewards[("uB", v)] = r2
    return RewardMachine.from_functions(env, ["u0", "uA", "uB"], "u0",
                                        lambda u, s, a, t: "u" + a[1:], rewards, gamma)


def build_ex_xor(env: Environment | None = None) -> SeparationFixture:
    env = env or _xor_env()
    gamma = 0.9
    policies = {f"pi_{i}{j}": _policy(env, {"sA": f"a{i}", "sB": f"a{j}"}, f"pi_{i}{j}")
                for i, j in (("A", "B"), ("B", "A"), ("A", "A"), ("B", "B"))}
    onmr_reward = _reward(env, {"sA,aA,sB": -1.0, "sA,aB,sB": 1.0, "sB,aA,sA": 1.0, "sB,aB,sA": -1.0})
    objectives = {
        "onmr_abs": S.ONMR(onmr_reward, absolute, gamma),
        "rm_xor": S.RM(xor_machine(env, gamma)),
        "ltl_xor": S.LTL(parse_formula(
            "(always (and (implies (act aA) (next (act aB))) (implies (act aB) (next (act aA)))))")),
    }
    high = {"pi_AB", "pi_BA"}
    expected = []
    for p in policies:
        expected.append(Expected("onmr_abs", p, 1 / (1 - gamma) if p in high else 0.0))
        expected.append(Expected("rm_xor", p, gamma / (1 - gamma) if p in high else 0.0))
        expected.append(Expected("ltl_xor", p, 1.0 if p in high else 0.0))
    ranks = [1 if p in high else 0 for p in policies]
    target = Target(
        "xor", "ex_xor/xor", tuple(policies), OrderingConstraint.from_ranks(ranks),
        (Claim("ONMR", True, "ex_xor/xor", "witness"),
         Claim("RM", True, "ex_xor/xor", "witness"),
         Claim("LTL", True, "ex_xor/xor", "witness"),
         Claim("MR", False, "ex_xor/xor", "lp"),
         Claim("RRL", False, "ex_xor/xor", "lp")),
        {"ONMR": "onmr_abs", "RM": "rm_xor", "LTL": "ltl_xor"})
    return SeparationFixture("ex_xor", env, gamma, policies, objectives, (target,), tuple(expected))


def _five_actions_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA"], ["aA", "aB", "aC", "aD", "aE", "aX"], {("s0", "aX"): "sA"}, "s0")


def build_ex_five_actions(env: Environment | None = None) -> SeparationFixture:
    env = env or _five_actions_env()
    gamma = 0.9
    policies = {}
    for i in "ABC":
        policies[f"pi_{i}"] = _policy(env, {"s0": f"a{i}", "sA": "aD"}, f"pi_{i}")
    for j in "DE":
        policies[f"pi_{j}"] = _policy(env, {"s0": "aX", "sA": f"a{j}"}, f"pi_{j}")

    def family(i: str, j: str):
        def build(theta: float) -> Policy:
            return _policy(env, {"s0": {f"a{i}": theta, "aX": 1 - theta}, "sA": f"a{j}"},
                           f"pi_theta{i}{j}={_fmt(theta)}")
        return build

    families = {}
    for i, j in itertools.product("ABC", "DE"):
        families[f"pi_theta{i}{j}"] = PolicyFamily(family(i, j), THETA_GRID)
        for theta in THETA_GRID:
            p = family(i, j)(theta)
            policies[p.name] = p
    rank_of = {"A": 0, "B": 1, "C": 2, "D": 3, "E": 4}

    def rank(name: str) -> int:
        return rank_of[name.split("=")[0][-1]]

    reward = _reward(env, {"s0,aA,s0": 1.0, "s0,aB,s0": 2.0, "s0,aC,s0": 3.0, "sA,aD,sA": 4.0,
                           "sA,aE,sA": 5.0, "s0,aX,sA": 0.0})
    objectives = {"lar_graded": S.LAR(reward)}
    expected = tuple(Expected("lar_graded", p, float(rank(p) + 1)) for p in policies)
    order = tuple(policies)
    target = Target(
        "limit_classes", "ex_five_actions/limit_classes", order, OrderingConstraint.from_ranks([rank(p) for p in order]),
        (Claim("LAR", True, "ex_five_actions/limit_classes", "witness"),
         Claim("ONMR", False, "ex_five_actions/limit_classes", "collision")),
        {"LAR": "lar_graded"})
    curves = {name: (fam.build, rank(name)) for name, fam in families.items()}
    classes = {p: rank(p) for p in ("pi_A", "pi_B", "pi_C", "pi_D", "pi_E")}
    return SeparationFixture("ex_five_actions", env, gamma, policies, objectives, (target,), expected,
                             families=families, curves=curves, classes=classes)


def _simplex_curves(env: Environment, classify: Callable[[int], object], rest: str | None = None) -> dict:
    """Edges between vertices and rays from each vertex to the barycentre of ``s0``'s three actions."""
    acts = ("aA", "aB", "aC")
    other = rest or "aA"
    curves = {}
    for x, y in itertools.combinations(acts, 2):
        def edge(t: float, x=x, y=y) -> Policy:
            return _s0_row(env, {x: t, y: 1 - t}, other, f"mix_{x[1:]}{y[1:]}={_fmt(t)}")
        curves[f"mix_{x[1:]}{y[1:]}"] = (edge, classify(2))
    for x in acts:
        def ray(t: float, x=x) -> Policy:
            probs = {a: (1 - t) / 3 for a in acts}
            probs[x] += t
            return _s0_row(env, probs, other, f"ray_{x[1:]}={_fmt(t)}")
        curves[f"ray_{x[1:]}"] = (ray, classify(3))
    for q in Q_GRID:
        def fan(theta: float, q=q) -> Policy:
            return _s0_row(env, {"aB": theta, "aA": (1 - theta) * q, "aC": (1 - theta) * (1 - q)},
                           other, f"fan_q{_fmt(q)}={_fmt(theta)}")
        curves[f"fan_q{_fmt(q)}"] = (fan, classify(3))
    return curves


def _support_policies(env: Environment, rest: str | None = None) -> dict[str, Policy]:
    other = rest or "aA"
    policies = {f"pi_{x[1:]}": _s0_row(env, {x: 1.0}, other, f"pi_{x[1:]}") for x in ("aA", "aB", "aC")}
    for x, y in itertools.combinations(("aA", "aB", "aC"), 2):
        name = f"pi_{x[1:]}{y[1:]}"
        policies[name] = _s0_row(env, {x: 0.5, y: 0.5}, other, name)
    policies["pi_uniform"] = _s0_row(env, {a: 1 / 3 for a in ("aA", "aB", "aC")}, other, "pi_uniform")
    for q in Q_GRID:
        for theta in THETA_GRID:
            name = f"pi_q{_fmt(q)}_theta{_fmt(theta)}"
            policies[name] = _s0_row(env, {"aB": theta, "aA": (1 - theta) * q, "aC": (1 - theta) * (1 - q)},
                                     other, name)
    return policies


def support_size(policy: Policy, state: int = 0) -> int:
    return int(np.count_nonzero(policy.action_probs[state] > 0))


def build_ex_three_actions_ltl(env: Environment | None = None) -> SeparationFixture:
    env = env or _single_state_env()
    gamma = 0.9
    policies = _support_policies(env)
    objectives = {"ltl_all_actions": S.LTL(parse_formula(
        "(and (eventually (act aA)) (eventually (act aB)) (eventually (act aC)))"))}
    full = {p: support_size(pol) == 3 for p, pol in policies.items()}
    expected = tuple(Expected("ltl_all_actions", p, 1.0 if full[p] else 0.0) for p in policies)
    order = tuple(policies)
    target = Target(
        "all_actions", "ex_three_actions_ltl/all_actions", order, OrderingConstraint.from_ranks([int(full[p]) for p in order]),
        (Claim("LTL", True, "ex_three_actions_ltl/all_actions", "witness"),
         Claim("ONMR", False, "ex_three_actions_ltl/all_actions", "collision")),
        {"LTL": "ltl_all_actions"})
    curves = _simplex_curves(env, lambda k: int(k == 3))
    classes = {p: 0 for p in ("pi_A", "pi_B", "pi_C")}
    return SeparationFixture("ex_three_actions_ltl", env, gamma, policies, objectives, (target,), expected,
                             curves=curves, classes=classes)


def _threshold_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA", "sB"], ["aA", "aB"], {("s0", "aA"): "sA", ("s0", "aB"): "sB"}, "s0")


def build_ex_threshold(env: Environment | None = None) -> SeparationFixture:
    env = env or _threshold_env()
    gamma = 0.99

    def pi_p(p: float) -> Policy:
        return _s0_row(env, {"aA": p, "aB": 1 - p}, "aA", f"pi_p={_fmt(p)}")

    grid = (0.0, 0.49, 0.5, 0.51, 1.0)
    policies = {pi_p(p).name: pi_p(p) for p in grid}
    policies["pi_L"] = _s0_row(env, {"aA": 1.0}, "aA", "pi_L")
    policies["pi_R"] = _s0_row(env, {"aB": 1.0}, "aA", "pi_R")
    policies["pi_m"] = _s0_row(env, {"aA": 0.5, "aB": 0.5}, "aA", "pi_m")
    equal_returns = _reward(env, {"s0,aA,sA": 1.0, "s0,aB,sB": 1.0})
    alpha = 1.0
    objectives = {
        "onmr_threshold": S.ONMR(_reward(env, {"s0,aA,sA": 1.0}), threshold(0.5), gamma),
        "rrl_entropy": S.RRL(equal_returns, alpha, entropy, gamma),
    }
    expected = tuple(Expected("onmr_threshold", f"pi_p={_fmt(p)}", 1.0 if p >= 0.5 else 0.0) for p in grid)
    expected += (Expected("rrl_entropy", "pi_L", 1.0), Expected("rrl_entropy", "pi_R", 1.0),
                 Expected("rrl_entropy", "pi_m", 1.0 - alpha * np.log(2), "1 − α·ln 2"))
    threshold_order = tuple(f"pi_p={_fmt(p)}" for p in grid)
    targets = (
        Target("threshold", "ex_threshold/threshold", threshold_order,
               OrderingConstraint.from_ranks([int(p >= 0.5) for p in grid]),
               (Claim("ONMR", True, "ex_threshold/threshold", "witness"),
                Claim("FTR", False, "ex_threshold/threshold", "convexity")),
               {"ONMR": "onmr_threshold"}),
        Target("determinism", "ex_threshold/determinism", ("pi_L", "pi_R", "pi_m"),
               OrderingConstraint.from_ranks([1, 1, 0]),
               (Claim("RRL", True, "ex_threshold/determinism", "witness"),
                Claim("FTR", False, "ex_threshold/determinism", "convexity")),
               {"RRL": "rrl_entropy"}),
    )
    return SeparationFixture("ex_threshold", env, gamma, policies, objectives, targets, expected,
                             families={"pi_p": PolicyFamily(pi_p, grid)})


def _unvisited_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA"], ["aA", "aB", "aC", "aD"], {("s0", "aA"): "s0", ("s0", "aB"): "sA"}, "s0")


def build_ex_unvisited(env: Environment | None = None) -> SeparationFixture:
    env = env or _unvisited_env()
    gamma = 0.9
    pi_1 = _policy(env, {"s0": "aA", "sA": "aC"}, "pi_1")
    pi_2 = _policy(env, {"s0": "aA", "sA": "aD"}, "pi_2")
    policies = {"pi_1": pi_1, "pi_2": pi_2}
    objectives = {"fpr_exact": S.FPR(lambda policy: 1.0 if policy == pi_1 else 0.0)}
    expected = (Expected("fpr_exact", "pi_1", 1.0), Expected("fpr_exact", "pi_2", 0.0))
    target = Target(
        "unvisited", "ex_unvisited/unvisited", ("pi_1", "pi_2"), OrderingConstraint.from_ranks([1, 0]),
        (Claim("FPR", True, "ex_unvisited/unvisited", "witness"),
         Claim("GOMORL", False, "ex_unvisited/unvisited", "occupancy-identity")),
        {"FPR": "fpr_exact"})
    return SeparationFixture("ex_unvisited", env, gamma, policies, objectives, (target,), expected)


def _lex_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA", "sB"], ["aA", "aB", "aC", "aD", "aE"],
        {("s0", "aA"): "sA", ("s0", "aC"): "sA", ("sA", "aB"): "sB", ("sA", "aD"): "sB",
         ("sB", "aE"): "sB"}, "s0")


LEX_GRID = ((1.0, 0.3), (1.0, 1.0), (0.5, 0.99), (0.5, 0.2), (0.0, 1.0))


def build_ex_lex(env: Environment | None = None) -> SeparationFixture:
    env = env or _lex_env()
    gamma = 0.99
    policies = {}
    for pa, pb in LEX_GRID:
        name = f"pi_{_fmt(pa)}_{_fmt(pb)}"
        policies[name] = _policy(env, {"s0": {"aA": pa, "aC": 1 - pa}, "sA": {"aB": pb, "aD": 1 - pb},
                                       "sB": "aE"}, name)
    r1 = _reward(env, {"s0,aA,sA": 1.0})
    r2 = _reward(env, {"sA,aB,sB": 1.0})
    objectives = {"gomorl_lex": S.GOMORL((r1, r2), gamma, LexicographicPreorder())}
    order = tuple(policies)
    keys = sorted(set(LEX_GRID))
    ranks = [keys.index(v) for v in LEX_GRID]
    target = Target(
        "lexicographic", "ex_lex/lexicographic", order, OrderingConstraint.from_ranks(ranks),
        (Claim("GOMORL", True, "ex_lex/lexicographic", "witness"),
         Claim("FPR", False, "ex_lex/lexicographic", "proof-reference-only")),
        {"GOMORL": "gomorl_lex"})
    data = {"vectors": {name: (pa, gamma * pb) for name, (pa, pb) in zip(order, LEX_GRID)}}
    return SeparationFixture("ex_lex", env, gamma, policies, objectives, (target,), data=data)


def _three_traj_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA", "sB", "sC"], ["aA", "aB", "aC"],
        {("s0", "aA"): "sA", ("s0", "aB"): "sB", ("s0", "aC"): "sC"}, "s0")


def build_ex_three_traj(env: Environment | None = None) -> SeparationFixture:
    env = env or _three_traj_env()
    gamma = 0.9
    policies = _support_policies(env)
    objectives = {"rrl_support": S.RRL(np.zeros(env.transition.shape), -1.0, support_count, gamma)}
    f_d = float(env.n_actions - 1)
    tail = gamma * f_d / (1 - gamma)
    expected = tuple(Expected("rrl_support", p, 3 - support_size(pol) + tail, "F(π(s0)) + γF_D/(1−γ)")
                     for p, pol in policies.items())
    order = tuple(policies)
    ranks = [3 - support_size(policies[p]) for p in order]
    target = Target(
        "determinism", "ex_three_traj/determinism", order, OrderingConstraint.from_ranks(ranks),
        (Claim("RRL", True, "ex_three_traj/determinism", "witness"),
         Claim("ONMR", False, "ex_three_traj/determinism", "collision")),
        {"RRL": "rrl_support"})
    curves = _simplex_curves(env, lambda k: 3 - k)
    classes = {p: 2 for p in ("pi_A", "pi_B", "pi_C")}
    return SeparationFixture("ex_three_traj", env, gamma, policies, objectives, (target,), expected,
                             curves=curves, classes=classes, data={"F_D": f_d})


def _two_cycles_env() -> Environment:
    return deterministic_environment(
        ["s0", "sA"], ["aA", "aB", "aC", "aD"],
        {("s0", "aA"): "sA", ("s0", "aB"): "sA", ("sA", "aC"): "s0", ("sA", "aD"): "sA"},
        {"s0": 0.5, "sA": 0.5})


def build_ex_two_cycles(env: Environment | None = None) -> SeparationFixture:
    env = env or _two_cycles_env()
    gamma = 0.9
    policies = {f"pi_{i}{j}": _policy(env, {"s0": f"a{i}", "sA": f"a{j}"}, f"pi_{i}{j}")
                for i, j in (("A", "D"), ("B", "D"), ("A", "C"), ("B", "C"))}
    reward = _reward(env, {"s0,aA,sA": 1.0, "s0,aB,sA": 0.0, "sA,aC,s0": 0.0, "sA,aD,sA": 1.0})
    objectives = {"lar_cycles": S.LAR(reward)}
    expected = (Expected("lar_cycles", "pi_AD", 1.0, "R_D"), Expected("lar_cycles", "pi_BD", 1.0, "R_D"),
                Expected("lar_cycles", "pi_AC", 0.5, "(R_A+R_C)/2"),
                Expected("lar_cycles", "pi_BC", 0.0, "(R_B+R_C)/2"))
    target = Target(
        "limit_cycles", "ex_two_cycles/limit_cycles", tuple(policies), OrderingConstraint.from_ranks([2, 2, 1, 0]),
        (Claim("LAR", True, "ex_two_cycles/limit_cycles", "witness"),
         Claim("MR", False, "ex_two_cycles/limit_cycles", "lp"),
         Claim("RRL", False, "ex_two_cycles/limit_cycles", "lp")),
        {"LAR": "lar_cycles"})
    return SeparationFixture("ex_two_cycles", env, gamma, policies, objectives, (target,), expected)


def counter_machine(env: Environment, gamma: float) -> RewardMachine:
    """Tracks the set of actions taken; pays 1 on completing {A, B, C}, then stops."""
    subsets = ["u0", "uA", "uB", "uC", "uAB", "uAC", "uBC", "uABC", "u_end"]

    def next_state(u: str, s: str, a: str, t: str) -> str:
        if u in ("uABC", "u_end"):
            return "u_end"
        seen = set() if u == "u0" else set(u[1:])
        seen.add(a[1:])
        return "u" + "".join(sorted(seen))

    one = np.ones(env.transition.shape)
    zero = np.zeros(env.transition.shape)
    rewards = {(u, v): (one if v == "uABC" else zero) for u in subsets for v in subsets}
    return RewardMachine.from_functions(env, subsets, "u0", next_state, rewards, gamma)


def build_ex_rm_counter(env: Environment | None = None) -> SeparationFixture:
    env = env or _single_state_env()
    gamma = 0.99
    policies = _support_policies(env)
    objectives = {"rm_all_actions": S.RM(counter_machine(env, gamma))}
    full = {p: support_size(pol) == 3 for p, pol in policies.items()}
    expected = tuple(Expected("rm_all_actions", p, 0.0) for p in policies if not full[p])
    order = tuple(policies)
    pairs = [(order.index(p), order.index(q), Relation.STRICTLY_GREATER)
             for p in order if full[p] for q in order if not full[q]]
    target = Target(
        "all_actions", "ex_rm_counter/all_actions", order, OrderingConstraint(tuple(pairs)),
        (Claim("RM", True, "ex_rm_counter/all_actions", "witness"),
         Claim("ONMR", False, "ex_rm_counter/all_actions", "collision")),
        {"RM": "rm_all_actions"})
    curves = _simplex_curves(env, lambda k: int(k == 3))
    classes = {p: 0 for p in ("pi_A", "pi_B", "pi_C")}
    return SeparationFixture("ex_rm_counter", env, gamma, policies, objectives, (target,), expected,
                             curves=curves, classes=classes)


BUILDERS: dict[str, Callable[..., SeparationFixture]] = {
    "ex_loop": build_ex_loop,
    "ex_two_paths": build_ex_two_paths,
    "ex_single_state": build_ex_single_state,
    "ex_xor": build_ex_xor,
    "ex_five_actions": build_ex_five_actions,
    "ex_three_actions_ltl": build_ex_three_actions_ltl,
    "ex_threshold": build_ex_threshold,
    "ex_unvisited": build_ex_unvisited,
    "ex_lex": build_ex_lex,
    "ex_three_traj": build_ex_three_traj,
    "ex_two_cycles": build_ex_two_cycles,
    "ex_rm_counter": build_ex_rm_counter,
}

FIXTURE_NAMES = tuple(BUILDERS)


def closed_form_errors(fixture: SeparationFixture, tol: float = 1e-9) -> list[str]:
    """Mismatches between the fixture's objectives and its recorded closed forms."""
    from ..objectives.evaluators import evaluate

    errors = []
    for e in fixture.expected:
        value = evaluate(fixture.objective(e.objective), fixture.env, fixture.policy(e.policy))
        if abs(value - e.value) > tol * max(1.0, abs(e.value)):
            errors.append(f"{e.objective}({e.policy}) = {value!r}, expected {e.value!r}")
    return errors


_CACHE: dict[str, SeparationFixture] = {}


def get_fixture(name: str) -> SeparationFixture:
    """Bundled fixture by name, validated against its closed forms on first load."""
    if name not in BUILDERS:
        raise UnknownFixture(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    if name not in _CACHE:
        fixture = BUILDERS[name]()
        errors = closed_form_errors(fixture)
        if errors:
            raise AssertionError(f"fixture {name} fails its closed forms: {errors}")
        _CACHE[name] = fixture
    return _CACHE[name]


def fixtures() -> list[SeparationFixture]:
    return [get_fixture(name) for name in FIXTURE_NAMES]
