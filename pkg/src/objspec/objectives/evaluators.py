"""Closed-form policy evaluation for every formalism."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..errors import DimensionMismatch, ValidationError
from ..mdp_core import (
    Environment,
    Policy,
    chain_decomposition,
    check_gamma,
    check_policy_shape,
    check_reward_shape,
    discounted_visitation,
    induced_chain,
    occupancy_table,
)
from ..trajectory import TrajectoryLottery, iter_truncated, lassos, sample_paths
from . import specs as S
from .ltl import eval_ltl
from .preorders import SCALAR_TOL, Ordering, Preorder
from .reward_machine import eval_rm

# --- occupancy-based evaluators ---------------------------------------------


@dataclass(frozen=True, eq=False)
class OccupancyMeasure:
    """Discounted visitation mass of each transition triple."""

    values: np.ndarray
    gamma: float

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def total(self) -> float:
        return float(self.values.sum())

    def state_marginal(self) -> np.ndarray:
        return self.values.sum(axis=(1, 2))

    def sup_distance(self, other: "OccupancyMeasure") -> float:
        return float(np.max(np.abs(self.values - np.asarray(other))))


def occupancy_measure(env: Environment, policy: Policy, gamma: float) -> OccupancyMeasure:
    values = occupancy_table(env, policy, gamma)
    values.setflags(write=False)
    return OccupancyMeasure(values, float(gamma))


def eval_mr(env: Environment, policy: Policy, reward: np.ndarray, gamma: float) -> float:
    """Expected discounted return, ``⟨m(π), R⟩``."""
    reward = check_reward_shape(env, reward)
    return float(np.sum(occupancy_table(env, policy, gamma) * reward))


def expected_step_reward(env: Environment, policy: Policy, reward: np.ndarray) -> np.ndarray:
    """``r_π[s] = Σ_{a,s'} π(a|s) T(s,a,s') R(s,a,s')``."""
    reward = check_reward_shape(env, reward)
    return np.einsum("sa,sat,sat->s", policy.action_probs, env.transition, reward)


def eval_lar(env: Environment, policy: Policy, reward: np.ndarray) -> float:
    """Limit-average reward ``Iᵀ P* r_π`` using the exact Cesàro limit."""
    r_pi = expected_step_reward(env, policy, reward)
    cesaro = chain_decomposition(induced_chain(env, policy)).cesaro
    return float(env.initial @ cesaro @ r_pi)


def regulariser_values(env: Environment, policy: Policy, F: Callable[[np.ndarray], float]) -> np.ndarray:
    """``F(π(s))`` for every state."""
    check_policy_shape(env, policy)
    return np.array([float(F(policy.action_probs[s])) for s in range(env.n_states)])


def eval_rrl(env: Environment, policy: Policy, reward: np.ndarray, alpha: float,
             F: Callable[[np.ndarray], float], gamma: float) -> float:
    """Regularised return with per-step reward ``R(s,a,s') − α·F(π(s))``.

    Only visited states contribute, so ``F`` is evaluated everywhere but
    weighted by the discounted visitation.
    """
    reward = check_reward_shape(env, reward)
    d = discounted_visitation(env, policy, gamma)
    m = d[:, None, None] * policy.action_probs[:, :, None] * env.transition
    visited = d > 0
    penalty = np.zeros(env.n_states)
    if alpha != 0:
        for s in np.flatnonzero(visited):
            penalty[s] = float(F(policy.action_probs[s]))
    return float(np.sum(m * reward) - alpha * d @ penalty)


def eval_onmr(env: Environment, policy: Policy, reward: np.ndarray, f: Callable[[float], float],
              gamma: float) -> float:
    return float(f(eval_mr(env, policy, reward, gamma)))


def policy_eval_vector(env: Environment, policy: Policy, rewards: Sequence[np.ndarray],
                       gamma: float) -> np.ndarray:
    """``⟨J_1(π), ..., J_k(π)⟩`` for the Markovian rewards ``rewards``."""
    m = occupancy_table(env, policy, gamma)
    return np.array([float(np.sum(m * check_reward_shape(env, r))) for r in rewards])


def eval_omorl(env: Environment, policy: Policy, rewards: Sequence[np.ndarray],
               f: Callable[[np.ndarray], float], gamma: float) -> float:
    return float(f(policy_eval_vector(env, policy, rewards, gamma)))


def eval_fomr(env: Environment, policy: Policy, f: Callable[[OccupancyMeasure], float],
              gamma: float) -> float:
    return float(f(occupancy_measure(env, policy, gamma)))


def gomorl_compare(v1: Sequence[float], v2: Sequence[float], preorder: Preorder) -> Ordering:
    v1, v2 = np.asarray(v1, dtype=float), np.asarray(v2, dtype=float)
    if v1.shape != v2.shape:
        raise DimensionMismatch("policy-evaluation vectors differ in length")
    return preorder.compare(v1, v2)


# --- trajectory formalisms ------------------------------------------------------


@dataclass(frozen=True)
class Exact:
    """Exact evaluation over the finite lasso decomposition."""


@dataclass(frozen=True)
class MonteCarlo:
    """Sample-mean evaluation over truncated trajectories.

    If ``horizon`` is None it is chosen so that ``γ^H·Rmax/(1−γ) < tolerance``
    (INMR and IMORL only).  For INMR and IMORL, ``lipschitz`` is the
    Lipschitz constant of the wrapper (sup-norm on returns); for FTR it is
    read directly as a bound on how much ``f`` can change between
    trajectories sharing their first ``horizon`` transitions.  Without it
    the truncation bias is reported as unbounded.
    """

    samples: int = 10_000
    horizon: int | None = None
    seed: int = 0
    tolerance: float = 1e-3
    lipschitz: float | None = None


@dataclass(frozen=True)
class MonteCarloEstimate:
    value: float
    std_error: float
    samples: int
    horizon: int
    truncation_bound: float | None
    metadata: dict = field(default_factory=dict)


def _return_tail(rewards: Sequence[np.ndarray], gamma: float, horizon: int) -> float:
    rmax = max(float(np.max(np.abs(r))) for r in rewards)
    return gamma**horizon * rmax / (1 - gamma)


def _choose_horizon(rewards: Sequence[np.ndarray], gamma: float, tolerance: float) -> int:
    rmax = max(float(np.max(np.abs(r))) for r in rewards)
    if rmax == 0 or gamma == 0:
        return 1
    # γ^H · Rmax / (1 − γ) < tolerance
    h = math.log(tolerance * (1 - gamma) / rmax) / math.log(gamma)
    return max(1, int(math.floor(h)) + 1)


def _per_trajectory(spec) -> Callable:
    if isinstance(spec, S.FTR):
        return spec.f
    if isinstance(spec, S.INMR):
        return lambda xi: spec.f(xi.discounted_return(spec.reward, spec.gamma))
    if isinstance(spec, S.IMORL):
        return lambda xi: spec.f(np.array([xi.discounted_return(r, spec.gamma) for r in spec.rewards]))
    raise TypeError(f"{type(spec).__name__} is not a trajectory formalism")


def monte_carlo_estimate(env: Environment, policy: Policy, spec, mode: MonteCarlo) -> MonteCarloEstimate:
    """Monte Carlo estimate of an FTR, INMR or IMORL objective with bias metadata."""
    f = _per_trajectory(spec)
    rewards = [spec.reward] if isinstance(spec, S.INMR) else list(getattr(spec, "rewards", []))
    horizon = mode.horizon
    if horizon is None:
        if not rewards:
            raise ValidationError("FTR Monte Carlo evaluation needs an explicit horizon")
        horizon = _choose_horizon(rewards, spec.gamma, mode.tolerance)
    rng = np.random.default_rng(mode.seed)
    states, actions = sample_paths(env, policy, mode.samples, horizon, rng)
    values = np.array([float(f(xi)) for xi in iter_truncated(states, actions)])
    std = float(values.std(ddof=1) / math.sqrt(len(values))) if len(values) > 1 else float("nan")
    metadata = {"mode": "MonteCarlo", "seed": mode.seed}
    bound = None
    if mode.lipschitz is not None:
        if rewards:
            bound = mode.lipschitz * _return_tail(rewards, spec.gamma, horizon)
        else:
            # For FTR the constant already bounds |f(ξ) − f(ξ')| over trajectories
            # sharing their first `horizon` transitions.
            bound = float(mode.lipschitz)
        metadata["bias"] = "bounded"
    else:
        metadata["bias"] = "unbounded-bias"
    return MonteCarloEstimate(float(values.mean()), std, mode.samples, horizon, bound, metadata)


def eval_trajectory_formalism(env: Environment, policy: Policy, spec, mode=Exact()) -> float:
    """``E[f(ξ)]`` for FTR, ``E[f(G(ξ))]`` for INMR, ``E[f(G_1(ξ),...,G_k(ξ))]`` for IMORL.

    Exact mode raises :class:`~objspec.errors.NotLassoEnumerable` when the
    policy's trajectories are not a finite set of lassos.
    """
    if isinstance(mode, MonteCarlo):
        return monte_carlo_estimate(env, policy, spec, mode).value
    f = _per_trajectory(spec)
    return float(sum(lasso.probability * float(f(lasso)) for lasso in lassos(env, policy)))


# --- dispatch -------------------------------------------------------------------


def evaluate(spec, env: Environment, policy: Policy, mode=Exact()) -> float:
    """Scalar objective value ``J(π)`` of a non-preorder specification."""
    if isinstance(spec, S.MR):
        return eval_mr(env, policy, spec.reward, spec.gamma)
    if isinstance(spec, S.LAR):
        return eval_lar(env, policy, spec.reward)
    if isinstance(spec, S.LTL):
        return eval_ltl(env, policy, spec.formula)
    if isinstance(spec, S.RM):
        return eval_rm(env, policy, spec.machine)
    if isinstance(spec, (S.INMR, S.IMORL, S.FTR)):
        return eval_trajectory_formalism(env, policy, spec, mode)
    if isinstance(spec, S.RRL):
        return eval_rrl(env, policy, spec.reward, spec.alpha, spec.F, spec.gamma)
    if isinstance(spec, S.ONMR):
        return eval_onmr(env, policy, spec.reward, spec.f, spec.gamma)
    if isinstance(spec, S.OMORL):
        return eval_omorl(env, policy, spec.rewards, spec.f, spec.gamma)
    if isinstance(spec, S.FOMR):
        return eval_fomr(env, policy, spec.f, spec.gamma)
    if isinstance(spec, S.FTLR):
        return float(spec.f(TrajectoryLottery(env, policy)))
    if isinstance(spec, S.FPR):
        check_policy_shape(env, policy)
        return float(spec.J(policy))
    if isinstance(spec, (S.OMO, S.TLO, S.GOMORL, S.PO)):
        raise TypeError(f"{spec.formalism} orders policies without a scalar objective; use compare()")
    raise TypeError(f"not an objective specification: {spec!r}")


def compare(spec, env: Environment, pi1: Policy, pi2: Policy, mode=Exact(),
            tol: float = SCALAR_TOL) -> Ordering:
    """Three-way comparison of two policies under ``spec``."""
    if isinstance(spec, S.OMO):
        return spec.preorder.compare(occupancy_measure(env, pi1, spec.gamma),
                                     occupancy_measure(env, pi2, spec.gamma))
    if isinstance(spec, S.TLO):
        return spec.preorder.compare(TrajectoryLottery(env, pi1), TrajectoryLottery(env, pi2))
    if isinstance(spec, S.GOMORL):
        return gomorl_compare(policy_eval_vector(env, pi1, spec.rewards, spec.gamma),
                              policy_eval_vector(env, pi2, spec.rewards, spec.gamma), spec.preorder)
    if isinstance(spec, S.PO):
        check_policy_shape(env, pi1)
        check_policy_shape(env, pi2)
        return spec.preorder.compare(pi1, pi2)
    return Ordering.of(evaluate(spec, env, pi1, mode), evaluate(spec, env, pi2, mode), tol)


def ordering_matrix(spec, env: Environment, policies: Sequence[Policy], mode=Exact(),
                    tol: float = SCALAR_TOL) -> list[list[Ordering]]:
    return [[compare(spec, env, p, q, mode, tol) for q in policies] for p in policies]
