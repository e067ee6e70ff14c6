"""Randomised agreement checks for embedding edges.

:func:`random_spec` draws a specification of any formalism with random
parameters; :func:`edge_suite` embeds such specs along one edge and
checks that the image induces the same values (scalar targets) or the
same pairwise comparisons (preorder targets) on random policies.
Trajectory-valued formalisms are evaluated on lassos, so edges touching
them run on deterministic environments and deterministic policies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..errors import ValidationError
from ..mdp_core import Environment, Policy, random_environment, random_policy, validate_environment
from . import specs as S
from .embeddings import SUPPORTED_EDGES, embed
from .evaluators import compare, evaluate
from .ltl import parse_formula
from .preorders import ComparatorPreorder, LexicographicPreorder
from .reward_machine import RewardMachine
from .specs import PREORDER_FORMALISMS, TRAJECTORY_FORMALISMS, Formalism as F
from .wrappers import entropy


def needs_lassos(edge: tuple[F, F]) -> bool:
    # FTLR sourced from FTR takes expectations over lassos; other FTLR specs do not.
    a, b = edge
    return a in TRAJECTORY_FORMALISMS or b in TRAJECTORY_FORMALISMS or edge == (F.FTR, F.FTLR)


def random_deterministic_environment(rng: np.random.Generator, n_states: int, n_actions: int) -> Environment:
    transition = np.zeros((n_states, n_actions, n_states))
    for s in range(n_states):
        for a in range(n_actions):
            transition[s, a, rng.integers(n_states)] = 1.0
    init = rng.random(n_states)
    return validate_environment(Environment(tuple(f"s{i}" for i in range(n_states)),
                                            tuple(f"a{i}" for i in range(n_actions)),
                                            transition, init / init.sum()))


def deterministic_policy(rng: np.random.Generator, env: Environment) -> Policy:
    return random_policy(rng, env, deterministic_frac=1.0)


def random_instance(rng: np.random.Generator, lasso: bool = False, max_states: int = 4, max_actions: int = 3,
                    n_policies: int = 3) -> tuple[Environment, list[Policy]]:
    n, a = int(rng.integers(1, max_states + 1)), int(rng.integers(1, max_actions + 1))
    if lasso:
        env = random_deterministic_environment(rng, n, a)
        return env, [deterministic_policy(rng, env) for _ in range(n_policies)]
    env = random_environment(rng, n, a)
    return env, [random_policy(rng, env, deterministic_frac=0.3) for _ in range(n_policies)]


def _table(rng, env):
    return rng.uniform(-1, 1, env.transition.shape)


def _gamma(rng):
    return float(rng.uniform(0.1, 0.9))


def _random_formula(rng, env: Environment) -> str:
    s = env.states[rng.integers(env.n_states)]
    b = env.actions[rng.integers(env.n_actions)]
    templates = [f"(eventually (state {s}))", f"(always (not (act {b})))",
                 f"(and (eventually (state {s})) (always (not (triple {s} {b} {s}))))",
                 f"(until (not (state {s})) (act {b}))", f"(next (or (state {s}) (act {b})))"]
    return templates[rng.integers(len(templates))]


def random_reward_machine(rng, env: Environment) -> RewardMachine:
    k = 2
    delta_u = rng.integers(0, k, size=(k,) + env.transition.shape)
    delta_r = {(u, v): _table(rng, env) for u in range(k) for v in range(k)}
    return RewardMachine(("u0", "u1"), 0, delta_u, delta_r, _gamma(rng))


def random_spec(formalism: F | str, env: Environment, rng: np.random.Generator):
    """A specification of ``formalism`` with random rewards and smooth random wrappers."""
    fm = F(formalism)
    w = rng.uniform(-1, 1, env.transition.shape)
    c = rng.uniform(0.5, 2.0, 3)
    if fm is F.MR:
        return S.MR(_table(rng, env), _gamma(rng))
    if fm is F.LAR:
        return S.LAR(_table(rng, env))
    if fm is F.LTL:
        return S.LTL(parse_formula(_random_formula(rng, env)))
    if fm is F.RM:
        return S.RM(random_reward_machine(rng, env))
    if fm is F.INMR:
        return S.INMR(_table(rng, env), lambda x: float(np.tanh(c[0] * x) + c[1] * x ** 2), _gamma(rng))
    if fm is F.ONMR:
        return S.ONMR(_table(rng, env), lambda x: float(np.tanh(c[0] * x) + c[1] * x ** 2), _gamma(rng))
    if fm in (F.IMORL, F.OMORL):
        cls = S.IMORL if fm is F.IMORL else S.OMORL
        return cls((_table(rng, env), _table(rng, env)),
                   lambda v: float(c[0] * v[0] - c[1] * v[1] ** 2 + np.sin(v[0] * v[1])), _gamma(rng))
    if fm is F.FTR:
        r, g = _table(rng, env), _gamma(rng)
        return S.FTR(lambda xi: float(np.tanh(c[0] * xi.discounted_return(r, g)) + c[1] * xi.limit_average(w)))
    if fm is F.RRL:
        return S.RRL(_table(rng, env), float(rng.uniform(-1, 1)), entropy, _gamma(rng))
    if fm is F.FOMR:
        return S.FOMR(lambda m: float(np.tanh(c[0] * np.sum(np.asarray(m) * w))), _gamma(rng))
    if fm is F.FTLR:
        g = _gamma(rng)
        return S.FTLR(lambda lottery: float(np.sin(c[0] * np.sum(lottery.occupancy(g) * w))
                                            + c[1] * lottery.prefix(2).transition_marginal(1, (0, 0, 0))))
    if fm is F.FPR:
        weights = rng.uniform(-1, 1, (env.n_states, env.n_actions))
        return S.FPR(lambda policy: float(np.sum(policy.action_probs * weights) ** 3))
    if fm is F.GOMORL:
        return S.GOMORL((_table(rng, env), _table(rng, env)), _gamma(rng), LexicographicPreorder())
    if fm is F.OMO:
        w2, lex = rng.uniform(-1, 1, env.transition.shape), LexicographicPreorder()
        return S.OMO(_gamma(rng), ComparatorPreorder(lambda m1, m2: lex.compare(
            [np.sum(np.asarray(m1) * w), np.sum(np.asarray(m1) * w2)],
            [np.sum(np.asarray(m2) * w), np.sum(np.asarray(m2) * w2)])))
    if fm is F.TLO:
        g, lex = _gamma(rng), LexicographicPreorder()
        return S.TLO(ComparatorPreorder(lambda l1, l2: lex.compare(
            [np.sum(l1.occupancy(g) * w), l1.prefix(1).total()],
            [np.sum(l2.occupancy(g) * w), l2.prefix(1).total()])))
    if fm is F.PO:
        weights = rng.uniform(-1, 1, (env.n_states, env.n_actions))
        lex = LexicographicPreorder()
        return S.PO(ComparatorPreorder(lambda p, q: lex.compare([np.sum(p.action_probs * weights)],
                                                                [np.sum(q.action_probs * weights)])))
    raise ValidationError(f"no sampler for {fm}")  # pragma: no cover


def agreement_failures(source, image, env: Environment, policies, tol: float = 1e-9) -> list[str]:
    """Ways in which ``image`` disagrees with ``source`` on ``policies``."""
    failures = []
    scalar = not (source.formalism in PREORDER_FORMALISMS or image.formalism in PREORDER_FORMALISMS)
    if scalar:
        for k, p in enumerate(policies):
            a, b = evaluate(source, env, p), evaluate(image, env, p)
            if abs(a - b) > tol * max(1.0, abs(a)):
                failures.append(f"policy {k}: J = {a!r} but embedded J = {b!r}")
        return failures
    for (i, p), (j, q) in itertools.combinations(enumerate(policies), 2):
        a, b = compare(source, env, p, q), compare(image, env, p, q)
        if a is not b:
            failures.append(f"policies ({i}, {j}): {a} but embedded {b}")
    return failures


@dataclass
class EdgeReport:
    edge: tuple
    instances: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def label(self) -> str:
        return f"{self.edge[0]}->{self.edge[1]}"


def edge_suite(edge: tuple[F, F], instances: int = 50, seed: int = 0, max_states: int = 4,
               max_actions: int = 3) -> EdgeReport:
    """Embed random source specs along ``edge`` and compare on random policies."""
    edge = (F(edge[0]), F(edge[1]))
    if edge not in SUPPORTED_EDGES:
        raise ValidationError(f"{edge[0]}->{edge[1]} is not a supported edge")
    rng = np.random.default_rng([seed, list(F).index(edge[0]), list(F).index(edge[1])])
    report = EdgeReport(edge, instances)
    lasso = needs_lassos(edge)
    for k in range(instances):
        env, policies = random_instance(rng, lasso, max_states, max_actions)
        source = random_spec(edge[0], env, rng)
        image = embed(source, edge[1], env)
        report.failures += [f"instance {k}: {msg}" for msg in agreement_failures(source, image, env, policies)]
    return report
