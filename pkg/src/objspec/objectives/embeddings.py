"""Translations of a specification into a more expressive formalism.

``embed(spec, target, env)`` returns a ``target`` specification inducing
the same objective values (or the same three-way comparisons, for
preorder targets) on every policy of ``env``.
"""

from __future__ import annotations


import numpy as np

from ..errors import UnsupportedEdge, ValidationError
from ..mdp_core import Environment, Policy
from ..trajectory import TrajectoryLottery
from . import specs as S
from .constructions import build_delta_reward_basis, build_injective_return, decode_lasso
from .evaluators import OccupancyMeasure, compare
from .ltl import as_monitor
from .preorders import ComparatorPreorder, InducedPreorder
from .reward_machine import RewardMachine
from .specs import Formalism as F

CORE_EDGES = (
    (F.MR, F.RM), (F.MR, F.INMR), (F.INMR, F.IMORL), (F.IMORL, F.FTR), (F.MR, F.RRL),
    (F.MR, F.ONMR), (F.ONMR, F.OMORL), (F.LAR, F.FTR), (F.LTL, F.FTR), (F.RM, F.FTR),
    (F.FTR, F.FTLR), (F.FTLR, F.FPR), (F.FTLR, F.TLO), (F.OMORL, F.GOMORL), (F.RRL, F.FTLR),
    (F.OMORL, F.FTLR), (F.FTR, F.INMR),
)

# Remaining directions of the three equivalence results, plus PO above everything.
EXTRA_EDGES = (
    (F.OMORL, F.FOMR), (F.FOMR, F.OMORL), (F.FOMR, F.FTLR), (F.FTLR, F.FOMR),
    (F.GOMORL, F.OMO), (F.OMO, F.GOMORL), (F.OMO, F.TLO), (F.TLO, F.OMO),
) + tuple((src, F.PO) for src in F if src is not F.PO)

SUPPORTED_EDGES = CORE_EDGES + EXTRA_EDGES
_NEEDS_ENV = {(F.LTL, F.FTR), (F.FTLR, F.FPR), (F.FTR, F.INMR), (F.FTLR, F.FOMR), (F.TLO, F.OMO),
              (F.FOMR, F.OMORL), (F.OMO, F.GOMORL)} | {
    (src, F.PO) for src in F}


def _identity(x):
    return x


def _zero(_):
    return 0.0


def policy_from_occupancy(env: Environment, m: np.ndarray) -> Policy:
    """A policy with occupancy ``m``: π(a|s) ∝ m[s, a, ·] on visited states, uniform elsewhere."""
    m = np.asarray(m, dtype=float)
    mass = m.sum(axis=2)
    d = mass.sum(axis=1)
    probs = np.full((env.n_states, env.n_actions), 1.0 / env.n_actions)
    visited = d > 0
    probs[visited] = mass[visited] / d[visited, None]
    return Policy(probs)


def _rrl_from_lottery(reward, alpha, regulariser, gamma):
    def f(lottery: TrajectoryLottery) -> float:
        m = lottery.occupancy(gamma)
        mass = m.sum(axis=2)
        d = mass.sum(axis=1)
        penalty = sum(d[s] * float(regulariser(mass[s] / d[s])) for s in np.flatnonzero(d > 0))
        return float(np.sum(m * reward) - alpha * penalty)
    return f


def embed(spec, target: F | str, env: Environment | None = None):
    """Embed ``spec`` into formalism ``target``.

    Raises :class:`~objspec.errors.UnsupportedEdge` for pairs with no known
    construction, including every pair that no construction can exist for.
    """
    target = F(target) if isinstance(target, str) else target
    edge = (spec.formalism, target)
    if edge not in SUPPORTED_EDGES:
        raise UnsupportedEdge(f"no embedding of {edge[0]} into {edge[1]}")
    if edge in _NEEDS_ENV and env is None:
        raise ValidationError(f"embedding {edge[0]} into {edge[1]} needs the environment")

    if target is F.PO:
        return S.PO(ComparatorPreorder(lambda p, q: compare(spec, env, p, q)))

    if edge == (F.MR, F.RM):
        return S.RM(RewardMachine.constant(spec.reward, spec.gamma))
    if edge == (F.MR, F.INMR):
        return S.INMR(spec.reward, _identity, spec.gamma)
    if edge == (F.MR, F.ONMR):
        return S.ONMR(spec.reward, _identity, spec.gamma)
    if edge == (F.MR, F.RRL):
        return S.RRL(spec.reward, 0.0, _zero, spec.gamma)
    if edge == (F.INMR, F.IMORL):
        f = spec.f
        return S.IMORL((spec.reward,), lambda v: f(v[0]), spec.gamma)
    if edge == (F.ONMR, F.OMORL):
        f = spec.f
        return S.OMORL((spec.reward,), lambda v: f(v[0]), spec.gamma)
    if edge == (F.IMORL, F.FTR):
        f, rewards, gamma = spec.f, spec.rewards, spec.gamma
        return S.FTR(lambda xi: f(np.array([xi.discounted_return(r, gamma) for r in rewards])))
    if edge == (F.LAR, F.FTR):
        reward = spec.reward
        return S.FTR(lambda xi: xi.limit_average(reward))
    if edge == (F.LTL, F.FTR):
        monitor = as_monitor(spec.formula)
        return S.FTR(lambda xi: float(monitor.accepts_lasso(env, xi)))
    if edge == (F.RM, F.FTR):
        machine = spec.machine
        return S.FTR(machine.trajectory_return)
    if edge == (F.FTR, F.FTLR):
        f = spec.f
        return S.FTLR(lambda lottery: lottery.expectation(f))
    if edge == (F.FTR, F.INMR):
        f = spec.f
        reward, gamma = build_injective_return(env)
        return S.INMR(reward, lambda g: f(decode_lasso(g, reward, gamma)), gamma)
    if edge == (F.FTLR, F.FPR):
        f = spec.f
        return S.FPR(lambda policy: f(TrajectoryLottery(env, policy)))
    if edge == (F.FTLR, F.TLO):
        return S.TLO(InducedPreorder(spec.f))
    if edge == (F.OMORL, F.GOMORL):
        return S.GOMORL(spec.rewards, spec.gamma, InducedPreorder(spec.f))
    if edge == (F.RRL, F.FTLR):
        return S.FTLR(_rrl_from_lottery(spec.reward, spec.alpha, spec.F, spec.gamma))
    if edge == (F.OMORL, F.FTLR):
        f, rewards, gamma = spec.f, spec.rewards, spec.gamma
        return S.FTLR(lambda lottery: f(_project(lottery.occupancy(gamma), rewards)))
    if edge == (F.OMORL, F.FOMR):
        f, rewards = spec.f, spec.rewards
        return S.FOMR(lambda m: f(_project(np.asarray(m), rewards)), spec.gamma)
    if edge == (F.FOMR, F.OMORL):
        f, gamma, shape = spec.f, spec.gamma, env.transition.shape
        return S.OMORL(build_delta_reward_basis(env),
                       lambda v: f(OccupancyMeasure(np.asarray(v).reshape(shape), gamma)), gamma)
    if edge == (F.FOMR, F.FTLR):
        f, gamma = spec.f, spec.gamma
        return S.FTLR(lambda lottery: f(OccupancyMeasure(lottery.occupancy(gamma), gamma)))
    if edge == (F.FTLR, F.FOMR):
        f = spec.f
        return S.FOMR(lambda m: f(TrajectoryLottery(env, policy_from_occupancy(env, np.asarray(m)))), 0.5)
    if edge == (F.GOMORL, F.OMO):
        rewards, pre = spec.rewards, spec.preorder
        return S.OMO(spec.gamma, ComparatorPreorder(
            lambda m1, m2: pre.compare(_project(np.asarray(m1), rewards), _project(np.asarray(m2), rewards))))
    if edge == (F.OMO, F.GOMORL):
        gamma, pre, shape = spec.gamma, spec.preorder, env.transition.shape

        def as_measure(v):
            return OccupancyMeasure(np.asarray(v).reshape(shape), gamma)

        return S.GOMORL(build_delta_reward_basis(env), gamma,
                        ComparatorPreorder(lambda v1, v2: pre.compare(as_measure(v1), as_measure(v2))))
    if edge == (F.OMO, F.TLO):
        gamma, pre = spec.gamma, spec.preorder
        return S.TLO(ComparatorPreorder(lambda l1, l2: pre.compare(
            OccupancyMeasure(l1.occupancy(gamma), gamma), OccupancyMeasure(l2.occupancy(gamma), gamma))))
    if edge == (F.TLO, F.OMO):
        pre = spec.preorder

        def lottery(m):
            return TrajectoryLottery(env, policy_from_occupancy(env, np.asarray(m)))

        return S.OMO(0.5, ComparatorPreorder(lambda m1, m2: pre.compare(lottery(m1), lottery(m2))))
    raise UnsupportedEdge(f"no embedding of {edge[0]} into {edge[1]}")  # pragma: no cover


def _project(m: np.ndarray, rewards) -> np.ndarray:
    return np.array([float(np.sum(m * r)) for r in rewards])


def embedding_path(source: F, target: F) -> list[tuple[F, F]] | None:
    """Shortest chain of supported edges from ``source`` to ``target``."""
    if source == target:
        return []
    parent = {source: None}
    queue = [source]
    while queue:
        node = queue.pop(0)
        for a, b in SUPPORTED_EDGES:
            if a == node and b not in parent:
                parent[b] = (a, b)
                if b == target:
                    path = []
                    while parent[b] is not None:
                        path.append(parent[b])
                        b = parent[b][0]
                    return path[::-1]
                queue.append(b)
    return None


def embed_chain(spec, path: list[tuple[F, F]], env: Environment | None = None):
    for _, target in path:
        spec = embed(spec, target, env)
    return spec
