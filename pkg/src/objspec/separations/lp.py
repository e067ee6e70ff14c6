"""Linear-feasibility checks for objectives that are linear in their parameters.

For fixed policies and discount, ``J_MR(π) = ⟨m(π), R⟩`` is linear in R,
the limit average is linear in R through the Cesàro transition
frequencies, ``J_RRL`` is linear in (R, αF(p)) over the distinct action
distributions p, and ``J_FTR`` is linear in the values f assigns to each
trajectory.  Each check maximises the worst strict margin ``t`` over a
box ``[-1, 1]`` with the equalities imposed exactly; the ordering is
expressible (on that slice) iff ``t* ≥ ε``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog

from ..errors import LPSolverFailure, ValidationError
from ..mdp_core import Environment, Policy, chain_decomposition, discounted_visitation, induced_chain
from ..objectives.evaluators import eval_lar, eval_mr, eval_rrl, eval_trajectory_formalism, occupancy_measure
from ..objectives.specs import FTR
from ..trajectory import lassos
from .fixtures import OrderingConstraint, Relation

DEFAULT_GAMMA_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))
DEFAULT_EPSILON = 1e-6


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of a grid of LPs.

    ``feasible`` is a grid-certified statement: Infeasible means no witness
    exists at any grid point, not for every discount.
    """

    feasible: bool
    witness: np.ndarray | None = None
    margin: float | None = None
    gamma: float | None = None
    report: tuple = ()
    extra: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "Feasible" if self.feasible else "Infeasible"

    def to_json(self) -> dict:
        out = {"status": self.status,
               "grid": [{"gamma": g, "best_margin": t} for g, t in self.report]}
        if self.feasible:
            out.update(gamma=self.gamma, margin=self.margin,
                       witness=[float(x) for x in np.ravel(self.witness)])
        return out


def max_margin(features: np.ndarray, constraint: OrderingConstraint) -> tuple[float, np.ndarray]:
    """Solve ``max t`` s.t. strict rows ``(f_i − f_j)·x ≥ t``, equal rows ``= 0``, ``x ∈ [−1, 1]``."""
    features = np.asarray(features, dtype=float)
    constraint.check_indices(len(features))
    k = features.shape[1]
    strict = [features[i] - features[j] for i, j, r in constraint.pairs if r is Relation.STRICTLY_GREATER]
    equal = [features[i] - features[j] for i, j, r in constraint.pairs if r is Relation.EQUAL]
    c = np.zeros(k + 1)
    c[-1] = -1.0
    a_ub = np.array([np.append(-row, 1.0) for row in strict]) if strict else None
    b_ub = np.zeros(len(strict)) if strict else None
    a_eq = np.array([np.append(row, 0.0) for row in equal]) if equal else None
    b_eq = np.zeros(len(equal)) if equal else None
    bounds = [(-1.0, 1.0)] * k + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        raise LPSolverFailure(f"LP solver returned status {res.status}: {res.message}")
    t = float(res.x[-1]) if strict else 1.0
    return t, np.asarray(res.x[:-1])


def _grid(gamma_grid: Sequence[float] | None, extra: float | None) -> list[float]:
    grid = list(DEFAULT_GAMMA_GRID if gamma_grid is None else gamma_grid)
    if extra is not None and extra not in grid:
        grid.append(extra)
    for g in grid:
        if not 0 < g < 1:
            raise ValidationError(f"grid discount {g} outside (0, 1)")
    return sorted(grid)


def _verify(values: Sequence[float], constraint: OrderingConstraint, epsilon: float, what: str) -> None:
    # A witness is accepted only if it re-verifies through the evaluators.
    for i, j, r in constraint.pairs:
        diff = values[i] - values[j]
        if r is Relation.STRICTLY_GREATER and diff < epsilon / 2:
            raise LPSolverFailure(f"{what} witness margin {diff:.3g} below ε/2 on pair ({i}, {j})")
        if r is Relation.EQUAL and abs(diff) > 1e-9 * max(1.0, abs(values[i])):
            raise LPSolverFailure(f"{what} witness breaks equality on pair ({i}, {j}) by {diff:.3g}")


def _grid_check(feature_fn, verify_fn, grid, constraint, epsilon, what) -> FeasibilityResult:
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    report = []
    for gamma in grid:
        features, extra = feature_fn(gamma)
        t, x = max_margin(features, constraint)
        report.append((gamma, t))
        if t >= epsilon:
            values = verify_fn(x, gamma)
            _verify(values, constraint, epsilon, what)
            margin = min((values[i] - values[j] for i, j, r in constraint.pairs
                          if r is Relation.STRICTLY_GREATER), default=float("inf"))
            return FeasibilityResult(True, x, float(margin), gamma, tuple(report), extra(x) if extra else {})
    return FeasibilityResult(False, report=tuple(report))


def mr_lp_check(env: Environment, policies: Sequence[Policy], constraint: OrderingConstraint,
                gamma_grid: Sequence[float] | None = None, epsilon: float = DEFAULT_EPSILON,
                fixture_gamma: float | None = None) -> FeasibilityResult:
    """Is there a Markovian reward inducing ``constraint`` at some grid discount?"""
    shape = env.transition.shape

    def features(gamma):
        return np.array([occupancy_measure(env, p, gamma).values.ravel() for p in policies]), None

    def verify(x, gamma):
        return [eval_mr(env, p, x.reshape(shape), gamma) for p in policies]

    return _grid_check(features, verify, _grid(gamma_grid, fixture_gamma), constraint, epsilon, "MR")


def distinct_distributions(env: Environment, policies: Sequence[Policy]) -> list[np.ndarray]:
    rows: list[np.ndarray] = []
    for p in policies:
        for row in p.action_probs:
            if not any(np.array_equal(row, q) for q in rows):
                rows.append(row.copy())
    return rows


def rrl_lp_check(env: Environment, policies: Sequence[Policy], constraint: OrderingConstraint,
                 F_support: Sequence[np.ndarray] | None = None, gamma_grid: Sequence[float] | None = None,
                 epsilon: float = DEFAULT_EPSILON, fixture_gamma: float | None = None) -> FeasibilityResult:
    """As :func:`mr_lp_check`, with one extra variable ``φ_p = αF(p)`` per distinct distribution p."""
    support = [np.asarray(p, dtype=float) for p in (F_support if F_support is not None
                                                    else distinct_distributions(env, policies))]
    index = []
    for p in policies:
        row_ids = []
        for row in p.action_probs:
            hits = [k for k, q in enumerate(support) if np.array_equal(row, q)]
            if not hits:
                raise ValidationError(f"action distribution {row} not in F_support")
            row_ids.append(hits[0])
        index.append(row_ids)
    shape = env.transition.shape
    n_r = int(np.prod(shape))

    def features(gamma):
        rows = []
        for p, ids in zip(policies, index):
            d = discounted_visitation(env, p, gamma)
            phi = np.zeros(len(support))
            for s, k in enumerate(ids):
                phi[k] -= d[s]
            rows.append(np.concatenate([occupancy_measure(env, p, gamma).values.ravel(), phi]))

        def extra(x):
            return {"regulariser": [float(v) for v in x[n_r:]]}
        return np.array(rows), extra

    def verify(x, gamma):
        reward, phi = x[:n_r].reshape(shape), x[n_r:]

        def reg(dist):
            k = next(k for k, q in enumerate(support) if np.array_equal(dist, q))
            return phi[k]
        return [eval_rrl(env, p, reward, 1.0, reg, gamma) for p in policies]

    return _grid_check(features, verify, _grid(gamma_grid, fixture_gamma), constraint, epsilon, "RRL")


def cesaro_frequencies(env: Environment, policy: Policy) -> np.ndarray:
    """Long-run transition frequencies ``F[s, a, s']``, so that ``J_LAR = ⟨F, R⟩``."""
    limit = env.initial @ chain_decomposition(induced_chain(env, policy)).cesaro
    return limit[:, None, None] * policy.action_probs[:, :, None] * env.transition


def lar_lp_check(env: Environment, policies: Sequence[Policy], constraint: OrderingConstraint,
                 epsilon: float = DEFAULT_EPSILON) -> FeasibilityResult:
    """Is there a limit-average reward inducing ``constraint``?  (No discount involved.)"""
    shape = env.transition.shape

    def features(_):
        return np.array([cesaro_frequencies(env, p).ravel() for p in policies]), None

    def verify(x, _):
        return [eval_lar(env, p, x.reshape(shape)) for p in policies]

    result = _grid_check(features, verify, [0.5], constraint, epsilon, "LAR")
    return FeasibilityResult(result.feasible, result.witness, result.margin, None,
                             tuple((None, t) for _, t in result.report), result.extra)


def trajectory_lp_check(env: Environment, policies: Sequence[Policy], constraint: OrderingConstraint,
                        epsilon: float = DEFAULT_EPSILON) -> FeasibilityResult:
    """Is there an f on trajectories with ``E[f(ξ)]`` inducing ``constraint``?

    Requires lasso-enumerable policies; the variables are the values of f
    on the finitely many trajectories they generate.
    """
    keys: list[tuple] = []
    rows = []
    per_policy = [lassos(env, p) for p in policies]
    for found in per_policy:
        for lasso in found:
            if (lasso.stem, lasso.cycle) not in keys:
                keys.append((lasso.stem, lasso.cycle))
    for found in per_policy:
        row = np.zeros(len(keys))
        for lasso in found:
            row[keys.index((lasso.stem, lasso.cycle))] += lasso.probability
        rows.append(row)
    features = np.array(rows)

    def verify(x, _):
        table = dict(zip(keys, x))
        spec = FTR(lambda xi: table[(xi.stem, xi.cycle)])
        return [eval_trajectory_formalism(env, p, spec) for p in policies]

    result = _grid_check(lambda _: (features, lambda x: {"trajectories": len(keys)}), verify, [0.5],
                         constraint, epsilon, "FTR")
    return FeasibilityResult(result.feasible, result.witness, result.margin, None,
                             tuple((None, t) for _, t in result.report),
                             {"trajectories": len(keys)})
