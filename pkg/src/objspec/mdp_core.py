"""Finite environments, stationary policies and induced Markov chains.

All tables are dense numpy arrays indexed in declaration order:
``transition[s, a, s']``, ``initial[s]``, ``action_probs[s, a]`` and
reward tables ``R[s, a, s']``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, SingularSystem, ValidationError

PROB_TOL = 1e-12


def _frozen(array, dtype=float) -> np.ndarray:
    out = np.array(array, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Environment:
    """A finite environment (S, A, T, I).

    Construction checks shapes only; call :func:`validate_environment` to
    check that the kernel and the initial distribution are stochastic.
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    transition: np.ndarray
    initial: np.ndarray

    def __post_init__(self):
        states = tuple(str(s) for s in self.states)
        actions = tuple(str(a) for a in self.actions)
        if not states or not actions:
            raise ValidationError("environment needs at least one state and one action")
        if len(set(states)) != len(states):
            raise ValidationError("duplicate state names")
        if len(set(actions)) != len(actions):
            raise ValidationError("duplicate action names")
        transition = _frozen(self.transition)
        initial = _frozen(self.initial)
        n, a = len(states), len(actions)
        if transition.shape != (n, a, n):
            raise DimensionMismatch(f"transition has shape {transition.shape}, expected {(n, a, n)}")
        if initial.shape != (n,):
            raise DimensionMismatch(f"initial has shape {initial.shape}, expected {(n,)}")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "transition", transition)
        object.__setattr__(self, "initial", initial)

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @property
    def n_triples(self) -> int:
        return self.n_states * self.n_actions * self.n_states

    def state_index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise ValidationError(f"unknown state {name!r}") from None

    def action_index(self, name: str) -> int:
        try:
            return self.actions.index(name)
        except ValueError:
            raise ValidationError(f"unknown action {name!r}") from None

    def triples(self) -> list[tuple[int, int, int]]:
        """All index triples (s, a, s') in declaration order."""
        n, a = self.n_states, self.n_actions
        return [(s, b, t) for s in range(n) for b in range(a) for t in range(n)]

    def triple_name(self, triple: tuple[int, int, int]) -> str:
        s, a, t = triple
        return f"{self.states[s]},{self.actions[a]},{self.states[t]}"

    def __repr__(self):
        return f"Environment(states={self.states}, actions={self.actions})"


@dataclass(frozen=True, eq=False)
class Policy:
    """A stationary stochastic policy, ``action_probs[s, a] = π(a|s)``."""

    action_probs: np.ndarray
    name: str = field(default="", compare=False)

    def __post_init__(self):
        probs = _frozen(self.action_probs)
        if probs.ndim != 2:
            raise DimensionMismatch("action_probs must be a 2-d table")
        object.__setattr__(self, "action_probs", probs)

    def __eq__(self, other):
        # Policies are compared by value (their probability tables).
        if not isinstance(other, Policy):
            return NotImplemented
        return (self.action_probs.shape == other.action_probs.shape
                and bool(np.array_equal(self.action_probs, other.action_probs)))

    def __hash__(self):
        return hash(self.action_probs.tobytes())

    @classmethod
    def from_mapping(cls, env: Environment, mapping: Mapping[str, Mapping[str, float] | str],
                     default: str | None = None, name: str = "") -> "Policy":
        """Build from ``{state: {action: p}}`` or ``{state: action}``.

        States missing from ``mapping`` take ``default`` deterministically,
        or the uniform distribution when ``default`` is None.
        """
        probs = np.zeros((env.n_states, env.n_actions))
        for s, state in enumerate(env.states):
            row = mapping.get(state, default)
            if row is None:
                probs[s] = 1.0 / env.n_actions
            elif isinstance(row, str):
                probs[s, env.action_index(row)] = 1.0
            else:
                for action, p in row.items():
                    probs[s, env.action_index(action)] = float(p)
        return cls(probs, name=name)

    @classmethod
    def uniform(cls, env: Environment, name: str = "uniform") -> "Policy":
        return cls(np.full((env.n_states, env.n_actions), 1.0 / env.n_actions), name=name)

    def mix(self, other: "Policy", weight: float) -> "Policy":
        """State-wise mixture ``weight·self + (1−weight)·other``."""
        return Policy(weight * self.action_probs + (1 - weight) * other.action_probs)

    def to_mapping(self, env: Environment) -> dict[str, dict[str, float]]:
        return {
            state: {action: float(self.action_probs[s, a])
                    for a, action in enumerate(env.actions) if self.action_probs[s, a] > 0}
            for s, state in enumerate(env.states)
        }


def _check_stochastic(rows: np.ndarray, what: str, labels) -> None:
    if not np.all(np.isfinite(rows)):
        raise ValidationError(f"{what} contains non-finite entries")
    flat = rows.reshape(-1, rows.shape[-1])
    for idx, row in enumerate(flat):
        if np.any(row < 0):
            raise ValidationError(f"{what} row {labels(idx)} has a negative entry")
        total = row.sum()
        if abs(total - 1.0) > PROB_TOL:
            raise ValidationError(f"{what} row {labels(idx)} sums to {total!r}, not 1")


def validate_environment(env: Environment) -> Environment:
    """Return ``env`` unchanged if its kernel and initial distribution are stochastic."""
    a = env.n_actions
    _check_stochastic(env.transition, "transition",
                      lambda i: f"({env.states[i // a]}, {env.actions[i % a]})")
    _check_stochastic(env.initial[None, :], "initial", lambda i: "initial")
    return env


def validate_policy(env: Environment, policy: Policy) -> Policy:
    check_policy_shape(env, policy)
    _check_stochastic(policy.action_probs, "policy", lambda i: env.states[i])
    return policy


def check_policy_shape(env: Environment, policy: Policy) -> None:
    if policy.action_probs.shape != (env.n_states, env.n_actions):
        raise DimensionMismatch(
            f"policy has shape {policy.action_probs.shape}, "
            f"environment needs {(env.n_states, env.n_actions)}")


def check_reward_shape(env: Environment, reward: np.ndarray) -> np.ndarray:
    reward = np.asarray(reward, dtype=float)
    if reward.shape != env.transition.shape:
        raise DimensionMismatch(f"reward has shape {reward.shape}, expected {env.transition.shape}")
    if not np.all(np.isfinite(reward)):
        raise ValidationError("reward contains non-finite entries")
    return reward


def check_gamma(gamma: float, allow_zero: bool = True) -> float:
    gamma = float(gamma)
    low_ok = gamma >= 0 if allow_zero else gamma > 0
    if not (low_ok and gamma < 1):
        raise ValidationError(f"discount {gamma} outside [0, 1)")
    return gamma


def reward_from_mapping(env: Environment, mapping: Mapping[str, float] | None = None,
                        default: float = 0.0) -> np.ndarray:
    """Reward table from ``{"s,a,s'": value}``; any field may be ``*``.

    Later keys override earlier ones; unmatched triples get ``default``.
    """
    reward = np.full(env.transition.shape, float(default))
    for key, value in (mapping or {}).items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 3:
            raise ValidationError(f"reward key {key!r} must have the form 's,a,s''")
        s = slice(None) if parts[0] == "*" else env.state_index(parts[0])
        a = slice(None) if parts[1] == "*" else env.action_index(parts[1])
        t = slice(None) if parts[2] == "*" else env.state_index(parts[2])
        reward[s, a, t] = float(value)
    return reward


def induced_chain(env: Environment, policy: Policy) -> np.ndarray:
    """Return ``P[s, s'] = Σ_a π(a|s) T(s, a, s')``."""
    check_policy_shape(env, policy)
    return np.einsum("sa,sat->st", policy.action_probs, env.transition)


def discounted_visitation(env: Environment, policy: Policy, gamma: float) -> np.ndarray:
    """Solve ``d = I + γ Pᵀ d`` for the discounted state visitation."""
    gamma = check_gamma(gamma)
    chain = induced_chain(env, policy)
    system = np.eye(env.n_states) - gamma * chain.T
    try:
        d = np.linalg.solve(system, env.initial)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    if not np.all(np.isfinite(d)):
        raise SingularSystem("non-finite discounted visitation")
    return d


def occupancy_table(env: Environment, policy: Policy, gamma: float) -> np.ndarray:
    """Discounted transition visitation ``d[s]·π(a|s)·T(s, a, s')``."""
    d = discounted_visitation(env, policy, gamma)
    return d[:, None, None] * policy.action_probs[:, :, None] * env.transition


def reachable_states(env: Environment, policy: Policy) -> np.ndarray:
    """Boolean mask of states visited with positive probability."""
    support = induced_chain(env, policy) > 0
    seen = env.initial > 0
    frontier = seen.copy()
    while frontier.any():
        nxt = support[frontier].any(axis=0) & ~seen
        seen |= nxt
        frontier = nxt
    return seen


@dataclass(frozen=True, eq=False)
class ChainDecomposition:
    """Recurrent structure of a finite Markov chain.

    Attributes
    ----------
    classes : list of tuple[int, ...]
        Recurrent (bottom strongly connected) classes, ordered by smallest member.
    transient : tuple[int, ...]
        States belonging to no recurrent class.
    stationary : list of ndarray
        Stationary distribution of each class, as a length-n vector.
    absorption : ndarray, shape (n, n_classes)
        Probability of eventually entering each class from each state.
    cesaro : ndarray, shape (n, n)
        The Cesàro limit ``lim (1/N) Σ_{t<N} P^t``.
    """

    classes: list
    transient: tuple
    stationary: list
    absorption: np.ndarray
    cesaro: np.ndarray

    def class_of(self, state: int) -> int | None:
        for c, members in enumerate(self.classes):
            if state in members:
                return c
        return None


def recurrent_classes(matrix: np.ndarray) -> tuple[list[tuple[int, ...]], np.ndarray]:
    """Bottom SCCs of the support graph of ``matrix`` and the SCC label array."""
    support = matrix > 0
    _, labels = connected_components(support, directed=True, connection="strong")
    classes = []
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        outside = np.flatnonzero(labels != label)
        if not support[np.ix_(members, outside)].any():
            classes.append(tuple(int(m) for m in members))
    classes.sort(key=min)
    return classes, labels


def _stationary(block: np.ndarray) -> np.ndarray:
    # σ(P − I) = 0 with Σσ = 1; replace one balance equation by normalisation.
    k = block.shape[0]
    system = (block - np.eye(k)).T
    system[-1, :] = 1.0
    rhs = np.zeros(k)
    rhs[-1] = 1.0
    try:
        return np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc


def chain_decomposition(matrix: np.ndarray) -> ChainDecomposition:
    """Exact recurrent-class analysis and Cesàro limit of a stochastic matrix."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise DimensionMismatch("chain must be a square matrix")
    classes, _ = recurrent_classes(matrix)
    recurrent = sorted(s for members in classes for s in members)
    transient = tuple(s for s in range(n) if s not in set(recurrent))

    stationary = []
    absorption = np.zeros((n, len(classes)))
    for c, members in enumerate(classes):
        idx = list(members)
        sigma = np.zeros(n)
        sigma[idx] = _stationary(matrix[np.ix_(idx, idx)])
        stationary.append(sigma)
        absorption[idx, c] = 1.0

    if transient:
        tr = list(transient)
        q = matrix[np.ix_(tr, tr)]
        into = np.stack([matrix[np.ix_(tr, list(members))].sum(axis=1) for members in classes], axis=1)
        try:
            absorption[tr] = np.linalg.solve(np.eye(len(tr)) - q, into)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(str(exc)) from exc

    cesaro = absorption @ np.stack(stationary) if classes else np.zeros((n, n))
    return ChainDecomposition(classes, transient, stationary, absorption, cesaro)


def random_environment(rng: np.random.Generator, n_states: int, n_actions: int,
                       sparsity: float = 0.5, initial: str = "random") -> Environment:
    """A random valid environment, mostly for tests and demos.

    Each (s, a) row keeps a random subset of successors (at least one).
    ``initial`` is ``"random"`` or ``"first"`` (start deterministically at state 0).
    """
    transition = np.zeros((n_states, n_actions, n_states))
    for s in range(n_states):
        for a in range(n_actions):
            keep = rng.random(n_states) >= sparsity
            keep[rng.integers(n_states)] = True
            weights = rng.random(n_states) * keep
            transition[s, a] = weights / weights.sum()
    if initial == "first":
        init = np.zeros(n_states)
        init[0] = 1.0
    else:
        init = rng.random(n_states)
        init /= init.sum()
    return Environment(tuple(f"s{i}" for i in range(n_states)),
                       tuple(f"a{i}" for i in range(n_actions)), transition, init)


def random_policy(rng: np.random.Generator, env: Environment, deterministic_frac: float = 0.0) -> Policy:
    probs = rng.random((env.n_states, env.n_actions))
    for s in range(env.n_states):
        if rng.random() < deterministic_frac:
            probs[s] = 0.0
            probs[s, rng.integers(env.n_actions)] = 1.0
    probs /= probs.sum(axis=1, keepdims=True)
    return Policy(probs)


def deterministic_environment(states: Sequence[str], actions: Sequence[str],
                              edges: Mapping[tuple[str, str], str],
                              initial: Mapping[str, float] | str) -> Environment:
    """Environment whose listed (state, action) pairs move deterministically.

    Unlisted pairs are self-loops.
    """
    states, actions = tuple(states), tuple(actions)
    n, a = len(states), len(actions)
    transition = np.zeros((n, a, n))
    for s in range(n):
        transition[s, :, s] = 1.0
    for (state, action), target in edges.items():
        s, b = states.index(state), actions.index(action)
        transition[s, b] = 0.0
        transition[s, b, states.index(target)] = 1.0
    init = np.zeros(n)
    if isinstance(initial, str):
        init[states.index(initial)] = 1.0
    else:
        for state, p in initial.items():
            init[states.index(state)] = p
    return validate_environment(Environment(states, actions, transition, init))
