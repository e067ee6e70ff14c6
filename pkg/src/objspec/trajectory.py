"""Trajectory prefixes, lasso enumeration and trajectory lotteries.

A trajectory is represented by its transitions, each an index triple
``(s, a, s')``.  Lasso-enumerable policies produce finitely many
trajectories, each of the form ``stem · cycle^ω``, whose discounted and
average returns have closed forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterator, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components

from .errors import DimensionMismatch, ExplosionGuard, NotLassoEnumerable
from .mdp_core import (
    Environment,
    Policy,
    check_gamma,
    check_policy_shape,
    induced_chain,
    occupancy_table,
    reachable_states,
)

Triple = tuple[int, int, int]

DEFAULT_PREFIX_CAP = 10**6
LOTTERY_TOL = 1e-9


def _row_groups(keys: np.ndarray):
    """``(first row index, inverse)`` grouping identical rows of ``keys``."""
    if not keys.size:
        return np.arange(len(keys)), np.zeros(len(keys), dtype=np.int64)
    base = int(keys.max()) + 1
    if base ** keys.shape[1] < 2**62:
        # Mixed-radix code per row: a 1-d unique is far faster than ``axis=0``.
        code = keys @ (base ** np.arange(keys.shape[1] - 1, -1, -1, dtype=np.int64))
        _, first, inverse = np.unique(code, return_index=True, return_inverse=True)
    else:
        _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    return first, inverse.ravel()


class PrefixDistribution:
    """Exact distribution over depth-``depth`` prefixes.

    Prefixes are rows ``(s0, a0, s1, ..., s_depth)`` of ``keys`` with
    probabilities ``weights``; :attr:`probs` gives the same data as a dict
    keyed by index tuples.
    """

    def __init__(self, depth: int, keys, weights=None):
        if isinstance(keys, dict):
            items = list(keys.items())
            keys = np.array([k for k, _ in items], dtype=np.int64).reshape(len(items), 2 * depth + 1)
            weights = np.array([p for _, p in items], dtype=float)
        self.depth = depth
        self.keys = np.asarray(keys, dtype=np.int64).reshape(-1, 2 * depth + 1)
        self.weights = np.asarray(weights, dtype=float)
        self._probs = None

    @property
    def probs(self) -> dict:
        if self._probs is None:
            self._probs = dict(zip(map(tuple, self.keys.tolist()), self.weights.tolist()))
        return self._probs

    def __len__(self) -> int:
        return len(self.weights)

    def total(self) -> float:
        return float(self.weights.sum())

    def marginalize(self, depth: int) -> "PrefixDistribution":
        if depth > self.depth:
            raise ValueError("cannot marginalise to a deeper prefix")
        keys = self.keys[:, : 2 * depth + 1]
        first, inverse = _row_groups(keys)
        return PrefixDistribution(depth, keys[first], np.bincount(inverse, self.weights, len(first)))

    def total_variation(self, other: "PrefixDistribution") -> float:
        if other.depth != self.depth:
            raise ValueError("prefix distributions of different depths")
        keys = np.vstack([self.keys, other.keys])
        signed = np.concatenate([self.weights, -other.weights])
        if not len(keys):
            return 0.0
        _, inverse = _row_groups(keys)
        return float(0.5 * np.abs(np.bincount(inverse, signed)).sum())

    def transition_marginal(self, t: int, triple: Triple) -> float:
        """Probability that the ``t``-th transition equals ``triple``."""
        hit = np.all(self.keys[:, 2 * t: 2 * t + 3] == np.asarray(triple), axis=1)
        return float(self.weights[hit].sum())

    def to_records(self, env: Environment) -> list[dict]:
        records = []
        for prefix, p in sorted(self.probs.items()):
            names = [env.states[x] if i % 2 == 0 else env.actions[x] for i, x in enumerate(prefix)]
            records.append({"prefix": names, "p": p})
        return records


def prefix_distribution(env: Environment, policy: Policy, depth: int,
                        cap: int = DEFAULT_PREFIX_CAP) -> PrefixDistribution:
    """Enumerate every positive-probability prefix of ``depth`` transitions."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    check_policy_shape(env, policy)
    step = policy.action_probs[:, :, None] * env.transition
    moves = [np.argwhere(step[s] > 0) for s in range(env.n_states)]
    starts = np.flatnonzero(env.initial > 0)
    keys = starts[:, None].astype(np.int64)
    probs = env.initial[starts].astype(float)
    for _ in range(depth):
        # Grow every prefix by each positive (action, successor) pair, one source state at a time.
        last = keys[:, -1]
        width = int(sum(len(moves[s]) * np.count_nonzero(last == s) for s in range(env.n_states)))
        if width > cap:
            raise ExplosionGuard(f"more than {cap} prefixes at depth {depth}")
        new_keys, new_probs = [np.zeros((0, keys.shape[1] + 2), dtype=np.int64)], [np.zeros(0)]
        for s in range(env.n_states):
            rows = np.flatnonzero(last == s)
            m = moves[s]
            if not len(rows) or not len(m):
                continue
            new_keys.append(np.hstack([np.repeat(keys[rows], len(m), axis=0), np.tile(m, (len(rows), 1))]))
            new_probs.append(np.repeat(probs[rows], len(m)) * np.tile(step[s][m[:, 0], m[:, 1]], len(rows)))
        keys, probs = np.vstack(new_keys), np.concatenate(new_probs)
    return PrefixDistribution(depth, keys, probs)


@dataclass(frozen=True)
class Lasso:
    """An eventually periodic trajectory ``stem · cycle^ω`` with its probability."""

    stem: tuple
    cycle: tuple
    probability: float = 1.0

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")
        chain = list(self.stem) + list(self.cycle) + [self.cycle[0]]
        for x, y in zip(chain, chain[1:]):
            if x[2] != y[0]:
                raise ValueError(f"transitions {x} and {y} do not connect")

    def transition(self, t: int) -> Triple:
        if t < len(self.stem):
            return self.stem[t]
        return self.cycle[(t - len(self.stem)) % len(self.cycle)]

    __getitem__ = transition

    def prefix(self, k: int) -> list[Triple]:
        return [self.transition(t) for t in range(k)]

    def states(self, k: int) -> list[int]:
        """The first ``k + 1`` visited states."""
        steps = self.prefix(k)
        return [self.transition(0)[0]] + [x[2] for x in steps]

    def discounted_return(self, reward: np.ndarray, gamma: float) -> float:
        """Closed form ``Σ_stem γ^t R + γ^|stem| (Σ_cycle γ^i R_i) / (1 − γ^|cycle|)``."""
        stem = sum(gamma**t * reward[x] for t, x in enumerate(self.stem))
        loop = sum(gamma**i * reward[x] for i, x in enumerate(self.cycle))
        return float(stem + gamma ** len(self.stem) * loop / (1 - gamma ** len(self.cycle)))

    def limit_average(self, reward: np.ndarray) -> float:
        return float(np.mean([reward[x] for x in self.cycle]))

    def run(self, step: Callable[[Hashable, Triple], Hashable], start: Hashable) -> "Lasso":
        """Drive a deterministic automaton along the trajectory.

        Returns a lasso over labelled transitions ``(triple, u, u_next)``
        whose cycle spans whole repetitions of this lasso's cycle, so the
        automaton state is periodic as well.
        """
        labelled_stem = []
        u = start
        for x in self.stem:
            nxt = step(u, x)
            labelled_stem.append((x, u, nxt))
            u = nxt
        seen: dict = {}
        rounds: list = []
        while u not in seen:
            seen[u] = len(rounds)
            block = []
            for x in self.cycle:
                nxt = step(u, x)
                block.append((x, u, nxt))
                u = nxt
            rounds.append(block)
        first = seen[u]
        stem = labelled_stem + [item for block in rounds[:first] for item in block]
        cycle = [item for block in rounds[first:] for item in block]
        return LabelledLasso(tuple(stem), tuple(cycle), self.probability)

    def names(self, env: Environment) -> dict:
        return {"stem": [env.triple_name(x) for x in self.stem],
                "cycle": [env.triple_name(x) for x in self.cycle],
                "p": self.probability}


class LabelledLasso(Lasso):
    """Lasso over ``(triple, u, u_next)`` items produced by :meth:`Lasso.run`."""

    def __post_init__(self):
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")


def _cyclic_region(support: np.ndarray, live: np.ndarray) -> np.ndarray:
    """States lying on, or reachable from, a cycle of the live support graph."""
    graph = support & live[:, None] & live[None, :]
    _, labels = connected_components(graph, directed=True, connection="strong")
    on_cycle = np.zeros(len(live), dtype=bool)
    for label in np.unique(labels):
        members = np.flatnonzero(labels == label)
        if len(members) > 1 or graph[members[0], members[0]]:
            on_cycle[members] = True
    region = on_cycle & live
    frontier = region.copy()
    while frontier.any():
        nxt = graph[frontier].any(axis=0) & ~region
        region |= nxt
        frontier = nxt
    return region


def lassos(env: Environment, policy: Policy) -> list[Lasso]:
    """All trajectories of ``policy`` as lassos, with their probabilities.

    Raises :class:`NotLassoEnumerable` unless every reachable state on, or
    reachable from, a cycle of the support graph has exactly one
    positive-probability transition.
    """
    check_policy_shape(env, policy)
    step = policy.action_probs[:, :, None] * env.transition
    live = reachable_states(env, policy)
    support = induced_chain(env, policy) > 0
    region = _cyclic_region(support, live)
    for s in np.flatnonzero(region):
        if np.count_nonzero(step[s] > 0) != 1:
            raise NotLassoEnumerable(
                f"state {env.states[s]} branches inside a recurrent part of the support graph")

    out: list[Lasso] = []

    def walk(s: int, path: list, p: float) -> None:
        if region[s]:
            # Enter the deterministic part: follow the unique path to its cycle.
            order = [x[0] for x in path] + [s]
            cur = s
            tail = list(path)
            while True:
                a, t = (int(v[0]) for v in np.nonzero(step[cur]))
                tail.append((cur, a, t))
                if t in order:
                    first = order.index(t)
                    out.append(Lasso(tuple(tail[:first]), tuple(tail[first:]), p))
                    return
                order.append(t)
                cur = t
        for a, t in zip(*np.nonzero(step[s])):
            walk(int(t), path + [(s, int(a), int(t))], float(p * step[s, a, t]))

    for s in np.flatnonzero(env.initial > 0):
        walk(int(s), [], float(env.initial[s]))
    return out


def enumerate_lassos(env: Environment, policy: Policy, reward: np.ndarray,
                     gamma: float) -> list[tuple[Lasso, float]]:
    """Lassos of ``policy`` paired with their closed-form discounted returns."""
    gamma = check_gamma(gamma)
    reward = np.asarray(reward, dtype=float)
    if reward.shape != env.transition.shape:
        raise DimensionMismatch("reward shape does not match environment")
    return [(lasso, lasso.discounted_return(reward, gamma)) for lasso in lassos(env, policy)]


def is_lasso_enumerable(env: Environment, policy: Policy) -> bool:
    try:
        lassos(env, policy)
    except NotLassoEnumerable:
        return False
    return True


def lottery_equal(env: Environment, pi1: Policy, pi2: Policy, gamma: float = 0.5,
                  tol: float = LOTTERY_TOL) -> bool:
    """Decide ``L_π1 = L_π2`` by comparing occupancy measures."""
    gamma = check_gamma(gamma, allow_zero=False)
    m1 = occupancy_table(env, pi1, gamma)
    m2 = occupancy_table(env, pi2, gamma)
    return bool(np.max(np.abs(m1 - m2)) <= tol)


class TrajectoryLottery:
    """The trajectory lottery of a stationary policy.

    Everything exposed here depends on the policy only through the
    distribution over trajectories it induces, so lottery-valued
    callbacks cannot tell apart policies with equal lotteries.
    """

    def __init__(self, env: Environment, policy: Policy):
        check_policy_shape(env, policy)
        self.env = env
        self._policy = policy

    def prefix(self, depth: int) -> PrefixDistribution:
        return prefix_distribution(self.env, self._policy, depth)

    def occupancy(self, gamma: float) -> np.ndarray:
        return occupancy_table(self.env, self._policy, gamma)

    def visited(self) -> np.ndarray:
        return reachable_states(self.env, self._policy)

    def action_distribution(self, state: int) -> np.ndarray:
        """π(·|state) for a visited state; raises for unvisited states."""
        if not self.visited()[state]:
            raise ValueError(f"state {self.env.states[state]} is never visited")
        m = self.occupancy(0.5)[state].sum(axis=1)
        return m / m.sum()

    def expectation(self, f: Callable[[Lasso], float]) -> float:
        """``E[f(ξ)]`` computed exactly over the lasso decomposition."""
        return float(sum(lasso.probability * f(lasso) for lasso in lassos(self.env, self._policy)))

    def __eq__(self, other):
        if not isinstance(other, TrajectoryLottery):
            return NotImplemented
        return self.env is other.env and lottery_equal(self.env, self._policy, other._policy)

    __hash__ = None


@dataclass(frozen=True)
class TruncatedTrajectory:
    """A sampled trajectory cut after ``horizon`` transitions."""

    transitions: tuple

    @property
    def horizon(self) -> int:
        return len(self.transitions)

    def transition(self, t: int) -> Triple:
        if t >= len(self.transitions):
            raise IndexError(f"trajectory truncated at horizon {self.horizon}")
        return self.transitions[t]

    __getitem__ = transition

    def prefix(self, k: int) -> list[Triple]:
        return [self.transition(t) for t in range(k)]

    def discounted_return(self, reward: np.ndarray, gamma: float) -> float:
        return float(sum(gamma**t * reward[x] for t, x in enumerate(self.transitions)))


def sample_paths(env: Environment, policy: Policy, samples: int, horizon: int,
                 rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised sampling; returns ``states`` (samples × horizon+1) and ``actions``."""
    check_policy_shape(env, policy)
    # Column-major so each time step writes contiguous memory.
    states = np.empty((samples, horizon + 1), dtype=np.int64, order="F")
    actions = np.empty((samples, horizon), dtype=np.int64, order="F")
    pi_cdf = np.cumsum(policy.action_probs, axis=1)
    t_cdf = np.cumsum(env.transition, axis=2)
    states[:, 0] = _draw(np.broadcast_to(np.cumsum(env.initial), (samples, env.n_states)), rng)
    for t in range(horizon):
        s = states[:, t]
        a = _draw(pi_cdf[s], rng)
        actions[:, t] = a
        states[:, t + 1] = _draw(t_cdf[s, a], rng)
    return states, actions


def _draw(cdf: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(cdf.shape[0])[:, None]
    idx = (u >= cdf).sum(axis=1)
    return np.minimum(idx, cdf.shape[1] - 1)


def iter_truncated(states: np.ndarray, actions: np.ndarray) -> Iterator[TruncatedTrajectory]:
    for row_s, row_a in zip(states, actions):
        yield TruncatedTrajectory(tuple(zip(row_s[:-1].tolist(), row_a.tolist(), row_s[1:].tolist())))
