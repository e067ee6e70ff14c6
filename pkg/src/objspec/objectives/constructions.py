"""Reward constructions: injective returns and the delta reward basis."""

from __future__ import annotations

import numpy as np

from ..errors import NotDecodable
from ..mdp_core import Environment
from ..trajectory import Lasso

DECODE_TOL = 1e-9


def build_injective_return(env: Environment) -> tuple[np.ndarray, float]:
    """Reward and discount making the discounted return injective on trajectories.

    Triples get rewards ``0, 1, ..., |X|−1`` in declaration order and
    ``γ = 1/(|X|+1)``, so ``γ·M/(1−γ) = (|X|−1)/|X| < 1 = m`` and the
    return intervals of different first transitions never overlap.
    """
    size = env.n_triples
    reward = np.arange(size, dtype=float).reshape(env.transition.shape)
    return reward, 1.0 / (size + 1)


def interval_gap(reward: np.ndarray, gamma: float) -> float:
    """``m(1−γ) − γM``: positive iff the reward spacing separates returns."""
    values = np.unique(reward)
    m = float(np.min(np.diff(values))) if len(values) > 1 else 1.0
    spread = float(values.max() - values.min())
    return m * (1 - gamma) - gamma * spread


def _next_transition(g: float, flat: np.ndarray, width: float, tol: float) -> tuple[int, float]:
    residual = g - flat
    below = np.maximum(0.0, -residual)
    above = np.maximum(0.0, residual - width)
    miss = below + above
    inside = np.flatnonzero(miss <= tol)
    if len(inside) == 0:
        raise NotDecodable(f"return {g!r} lies outside every transition interval")
    if len(inside) > 1:
        inside = inside[np.argsort(miss[inside])]
        if miss[inside[1]] == 0:
            raise NotDecodable("ambiguous decoding: reward does not separate returns")
    x = int(inside[0])
    return x, float(residual[x])


def decode_return(g: float, reward: np.ndarray, gamma: float, depth: int) -> list[tuple[int, int, int]]:
    """First ``depth`` transitions of the unique trajectory with return ``g``.

    At each step the transition ``x`` with ``g − R(x) ∈ [0, γ·Rmax/(1−γ)]``
    is selected and the search recurses on ``(g − R(x))/γ``.  Deviations
    below 1e-9 (in units of the original return) are absorbed as rounding.
    """
    reward = np.asarray(reward, dtype=float)
    shape = reward.shape
    flat = reward.ravel()
    width = gamma * float(flat.max()) / (1 - gamma) if gamma > 0 else 0.0
    out = []
    scale = 1.0
    for _ in range(depth):
        x, residual = _next_transition(g, flat, width, DECODE_TOL / scale)
        out.append(tuple(int(i) for i in np.unravel_index(x, shape)))
        if gamma == 0:
            g = 0.0
        else:
            g = min(max(residual, 0.0), width) / gamma
            scale *= gamma
    return out


def decode_lasso(g: float, reward: np.ndarray, gamma: float, max_depth: int | None = None) -> Lasso:
    """Decode ``g`` until a state repeats and return the resulting lasso.

    Valid when the trajectory is forced after its first repeated state, as
    for every trajectory of a lasso-enumerable policy.  The lasso's return
    is checked against ``g``.
    """
    reward = np.asarray(reward, dtype=float)
    n = reward.shape[0]
    limit = max_depth if max_depth is not None else n + 1
    prefix = decode_return(g, reward, gamma, limit)
    order = [prefix[0][0]]
    for t, x in enumerate(prefix):
        if x[2] in order:
            first = order.index(x[2])
            lasso = Lasso(tuple(prefix[:first]), tuple(prefix[first:t + 1]))
            if abs(lasso.discounted_return(reward, gamma) - g) > DECODE_TOL * max(1.0, abs(g)):
                raise NotDecodable("decoded prefix does not close into a lasso with return g")
            return lasso
        order.append(x[2])
    raise NotDecodable(f"no repeated state within {limit} transitions")


def build_delta_reward_basis(env: Environment) -> list[np.ndarray]:
    """Indicator rewards ``1[(s, a, s') = x]`` for every triple x, in declaration order."""
    basis = []
    for x in env.triples():
        r = np.zeros(env.transition.shape)
        r[x] = 1.0
        basis.append(r)
    return basis
