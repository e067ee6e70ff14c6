"""Reward machines and their product construction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from ..errors import DimensionMismatch, ValidationError
from ..mdp_core import Environment, Policy, check_gamma, check_policy_shape
from ..trajectory import Lasso


@dataclass(frozen=True, eq=False)
class RewardMachine:
    """Finite machine (U, u0, δ_U, δ_R, γ).

    ``delta_u[u, s, a, s']`` is the index of the next machine state and
    ``delta_r[(u, u')]`` the reward table used on that machine transition.
    """

    machine_states: tuple
    start: int
    delta_u: np.ndarray
    delta_r: Mapping[tuple[int, int], np.ndarray]
    gamma: float

    def __post_init__(self):
        states = tuple(str(u) for u in self.machine_states)
        if len(set(states)) != len(states) or not states:
            raise ValidationError("machine states must be nonempty and distinct")
        delta_u = np.array(self.delta_u, dtype=np.int64)
        if delta_u.ndim != 4 or delta_u.shape[0] != len(states):
            raise DimensionMismatch("delta_u must have shape [|U| × n × a × n]")
        if delta_u.min() < 0 or delta_u.max() >= len(states):
            raise ValidationError("delta_u refers to an unknown machine state")
        delta_u.setflags(write=False)
        start = self.start if isinstance(self.start, (int, np.integer)) else states.index(str(self.start))
        delta_r = {}
        for (u, v), table in self.delta_r.items():
            table = np.array(table, dtype=float)
            if table.shape != delta_u.shape[1:]:
                raise DimensionMismatch(f"delta_r[{u}, {v}] has shape {table.shape}")
            table.setflags(write=False)
            delta_r[(int(u), int(v))] = table
        object.__setattr__(self, "machine_states", states)
        object.__setattr__(self, "start", int(start))
        object.__setattr__(self, "delta_u", delta_u)
        object.__setattr__(self, "delta_r", delta_r)
        object.__setattr__(self, "gamma", check_gamma(self.gamma))

    @classmethod
    def from_functions(cls, env: Environment, machine_states: Sequence[str], start: str,
                       next_state: Callable[[str, str, str, str], str],
                       rewards: Mapping[tuple[str, str], np.ndarray], gamma: float) -> "RewardMachine":
        """Build from a name-level transition function and reward tables keyed by name pairs."""
        states = tuple(machine_states)
        delta_u = np.zeros((len(states),) + env.transition.shape, dtype=np.int64)
        for u, name in enumerate(states):
            for s, a, t in env.triples():
                target = next_state(name, env.states[s], env.actions[a], env.states[t])
                delta_u[u, s, a, t] = states.index(target)
        delta_r = {(states.index(u), states.index(v)): r for (u, v), r in rewards.items()}
        return cls(states, states.index(start), delta_u, delta_r, gamma)

    @classmethod
    def constant(cls, reward: np.ndarray, gamma: float) -> "RewardMachine":
        """Single-state machine that always uses ``reward``."""
        reward = np.asarray(reward, dtype=float)
        return cls(("u0",), 0, np.zeros((1,) + reward.shape, dtype=np.int64), {(0, 0): reward}, gamma)

    def step(self, u: int, triple: tuple[int, int, int]) -> int:
        s, a, t = triple
        return int(self.delta_u[u, s, a, t])

    def reward_of(self, u: int, v: int) -> np.ndarray:
        try:
            return self.delta_r[(u, v)]
        except KeyError:
            raise ValidationError(
                f"delta_r undefined on reachable machine transition "
                f"({self.machine_states[u]}, {self.machine_states[v]})") from None

    def trajectory_return(self, lasso) -> float:
        """Discounted machine reward along a lasso (closed form) or a truncated trajectory."""
        g = self.gamma
        if not isinstance(lasso, Lasso):
            total, u = 0.0, self.start
            for t, x in enumerate(lasso.transitions):
                v = self.step(u, x)
                total += g**t * self.reward_of(u, v)[x]
                u = v
            return float(total)
        labelled = lasso.run(self.step, self.start)

        def r(item):
            x, u, v = item
            return self.reward_of(u, v)[x]

        stem = sum(g**t * r(item) for t, item in enumerate(labelled.stem))
        loop = sum(g**i * r(item) for i, item in enumerate(labelled.cycle))
        return float(stem + g ** len(labelled.stem) * loop / (1 - g ** len(labelled.cycle)))


class RMProduct(NamedTuple):
    """Product environment, its Markovian reward, and the (s, u) pair of each product state."""

    env: Environment
    reward: np.ndarray
    pairs: tuple

    def lift_policy(self, policy: Policy) -> Policy:
        return Policy(policy.action_probs[[s for s, _ in self.pairs]])


def compile_rm_product(env: Environment, machine: RewardMachine) -> RMProduct:
    """Product of ``env`` and ``machine`` restricted to reachable pairs.

    Reachability is taken over all actions, so a single product serves
    every policy.
    """
    if machine.delta_u.shape[1:] != env.transition.shape:
        raise DimensionMismatch("reward machine does not match the environment's dimensions")
    n, a = env.n_states, env.n_actions
    index: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    queue = []
    for s in np.flatnonzero(env.initial > 0):
        key = (int(s), machine.start)
        index[key] = len(pairs)
        pairs.append(key)
        queue.append(key)
    while queue:
        s, u = queue.pop(0)
        for b in range(a):
            for t in np.flatnonzero(env.transition[s, b] > 0):
                v = int(machine.delta_u[u, s, b, t])
                key = (int(t), v)
                if key not in index:
                    index[key] = len(pairs)
                    pairs.append(key)
                    queue.append(key)
    m = len(pairs)
    transition = np.zeros((m, a, m))
    reward = np.zeros((m, a, m))
    for i, (s, u) in enumerate(pairs):
        # Keep rows stochastic even where the kernel has zero-probability successors.
        for b in range(a):
            for t in range(n):
                if env.transition[s, b, t] > 0:
                    v = int(machine.delta_u[u, s, b, t])
                    j = index[(t, v)]
                    transition[i, b, j] += env.transition[s, b, t]
                    reward[i, b, j] = machine.reward_of(u, v)[s, b, t]
    initial = np.array([env.initial[s] if u == machine.start else 0.0 for s, u in pairs])
    names = tuple(f"{env.states[s]}|{machine.machine_states[u]}" for s, u in pairs)
    product = Environment(names, env.actions, transition, initial)
    return RMProduct(product, reward, tuple(pairs))


def eval_rm(env: Environment, policy: Policy, machine: RewardMachine) -> float:
    """Expected discounted reward when the machine selects each step's reward function."""
    from .evaluators import eval_mr

    check_policy_shape(env, policy)
    product = compile_rm_product(env, machine)
    return eval_mr(product.env, product.lift_policy(policy), product.reward, machine.gamma)
