"""Continuity probes and mixture-collision searches.

A probe follows a policy family ``π_α`` as ``α → 0`` and compares the
objective with its value at the limit policy.  For discounted Markovian
objectives (and reward machines, through their product) the gap is at
most ``2cα/(1−γ)²`` with ``c`` the largest absolute reward, so the probe
accepts gaps up to ``10·α_min·c/(1−γ)²``.

A collision is a pair of policies the target ordering separates whose
discounted returns coincide; no outer wrapper ``f`` of that return can
then separate them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import ValidationError
from ..mdp_core import Environment, Policy, occupancy_table
from ..objectives import specs as S
from ..objectives.evaluators import evaluate


@dataclass(frozen=True)
class ContinuityReport:
    alphas: tuple
    values: tuple
    extrapolated: float
    limit_value: float
    tolerance: float
    match: bool

    def to_json(self) -> dict:
        return {"alphas": list(self.alphas), "values": list(self.values), "extrapolated": self.extrapolated,
                "limit_value": self.limit_value, "tolerance": self.tolerance, "match": self.match}


def _reward_scale(spec) -> tuple[float, float] | None:
    if isinstance(spec, S.MR):
        return float(np.abs(spec.reward).max()), spec.gamma
    if isinstance(spec, S.RM):
        tables = list(spec.machine.delta_r.values())
        return max((float(np.abs(t).max()) for t in tables), default=0.0), spec.machine.gamma
    if isinstance(spec, (S.ONMR, S.INMR, S.RRL)):
        return float(np.abs(spec.reward).max()), spec.gamma
    return None


def continuity_probe(env: Environment, family: Callable[[float], Policy], spec, alphas: Sequence[float],
                     limit_policy: Policy, tolerance: float | None = None, scale: float = 1.0,
                     gamma: float = 0.5) -> ContinuityReport:
    """Does ``J(π_α)`` approach ``J(limit_policy)`` along ``alphas``?

    Without an explicit ``tolerance`` the bound ``10·α_min·c/(1−γ)²`` is
    used, with ``(c, γ)`` read from ``spec`` when it carries a reward and
    discount, else ``(scale, gamma)``.
    """
    alphas = tuple(float(a) for a in alphas)
    if not alphas or any(a < 1e-8 for a in alphas) or any(x <= y for x, y in zip(alphas, alphas[1:])):
        raise ValidationError("alphas must be strictly descending and ≥ 1e-8")
    values = tuple(evaluate(spec, env, family(a)) for a in alphas)
    limit_value = evaluate(spec, env, limit_policy)
    if tolerance is None:
        c, g = _reward_scale(spec) or (scale, gamma)
        tolerance = 10 * alphas[-1] * max(c, 1e-12) / (1 - g) ** 2
    if len(values) > 1:
        slope = (values[-2] - values[-1]) / (alphas[-2] - alphas[-1])
        extrapolated = values[-1] - alphas[-1] * slope
    else:
        extrapolated = values[-1]
    match = abs(values[-1] - limit_value) <= tolerance
    return ContinuityReport(alphas, values, float(extrapolated), float(limit_value), float(tolerance), bool(match))


# --- mixture collisions -----------------------------------------------------------


@dataclass(frozen=True)
class Collision:
    first: Policy
    second: Policy
    first_class: object
    second_class: object
    first_value: float
    second_value: float

    @property
    def gap(self) -> float:
        return abs(self.first_value - self.second_value)


def _bisect(fn: Callable[[float], float], lo: float, hi: float, target: float, iters: int = 80) -> float:
    f_lo = fn(lo) - target
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid) - target
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _solve_on_curve(value, ts, vals, target):
    # First crossing of ``value(t) = target`` between sampled points.
    diff = vals - target
    exact = np.flatnonzero(diff == 0)
    if len(exact):
        return float(ts[exact[0]])
    cross = np.flatnonzero(np.sign(diff[:-1]) != np.sign(diff[1:]))
    if not len(cross):
        return None
    k = cross[0]
    return _bisect(value, float(ts[k]), float(ts[k + 1]), target)


class CollisionSearch:
    """Search for two policies of different classes with equal ``J_MR``.

    Points are named policies with a class label; curves are continuous
    one-parameter policy families ``build(t)`` with a class label, sampled
    on ``t ∈ [margin, 1 − margin]``.  Occupancy measures are computed once,
    so each reward costs a few matrix products plus bisection, which relies
    on continuity of ``J_MR`` along each curve.
    """

    def __init__(self, env: Environment, gamma: float, points: Mapping[str, tuple[Policy, object]],
                 curves: Mapping[str, tuple[Callable[[float], Policy], object]],
                 samples: int = 401, margin: float = 1e-3):
        self.env, self.gamma = env, gamma
        self.points = [(policy, cls, self._occ(policy)) for policy, cls in points.values()]
        self.ts = np.linspace(margin, 1 - margin, samples)
        self.curves = [(build, cls, np.array([self._occ(build(t)) for t in self.ts]))
                       for build, cls in curves.values()]

    def _occ(self, policy: Policy) -> np.ndarray:
        return occupancy_table(self.env, policy, self.gamma).ravel()

    def find(self, reward: np.ndarray, tol: float = 1e-9) -> Collision | None:
        r = np.asarray(reward, dtype=float).ravel()

        def value(policy):
            return float(self._occ(policy) @ r)

        def accept(p1, c1, p2, c2):
            v1, v2 = value(p1), value(p2)
            if abs(v1 - v2) <= tol * max(1.0, abs(v1)):
                return Collision(p1, p2, c1, c2, v1, v2)
            return None

        pts = [(p, c, float(occ @ r)) for p, c, occ in self.points]
        crv = [(b, c, (lambda t, b=b: value(b(t))), occ @ r) for b, c, occ in self.curves]
        for i, (p1, c1, _) in enumerate(pts):
            for p2, c2, _ in pts[i + 1:]:
                if c1 != c2 and (hit := accept(p1, c1, p2, c2)):
                    return hit
        for p1, c1, v1 in pts:
            for build, c2, fn, vals in crv:
                if c1 != c2:
                    t = _solve_on_curve(fn, self.ts, vals, v1)
                    if t is not None and (hit := accept(p1, c1, build(t), c2)):
                        return hit
        for i, (b1, c1, f1, vals1) in enumerate(crv):
            for b2, c2, f2, vals2 in crv[i + 1:]:
                if c1 == c2:
                    continue
                lo, hi = max(vals1.min(), vals2.min()), min(vals1.max(), vals2.max())
                if hi - lo <= tol * max(1.0, abs(hi)):
                    continue
                target = 0.5 * (lo + hi)
                t1 = _solve_on_curve(f1, self.ts, vals1, target)
                t2 = _solve_on_curve(f2, self.ts, vals2, target)
                if t1 is not None and t2 is not None and (hit := accept(b1(t1), c1, b2(t2), c2)):
                    return hit
        return None


def find_mr_collision(env: Environment, reward: np.ndarray, gamma: float,
                      points: Mapping[str, tuple[Policy, object]],
                      curves: Mapping[str, tuple[Callable[[float], Policy], object]],
                      samples: int = 401, margin: float = 1e-3, tol: float = 1e-9) -> Collision | None:
    """One-shot :class:`CollisionSearch` for a single reward."""
    return CollisionSearch(env, gamma, points, curves, samples, margin).find(reward, tol)
