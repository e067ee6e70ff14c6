"""Objective specifications: one variant per formalism.

Callback conventions:

* ``f`` of INMR and ONMR takes a real; of IMORL and OMORL a length-k array.
* ``f`` of FTR takes a trajectory (a :class:`~objspec.trajectory.Lasso` in
  exact mode, a :class:`~objspec.trajectory.TruncatedTrajectory` in Monte Carlo mode).
* ``f`` of FOMR takes an :class:`OccupancyMeasure`.
* ``f`` of FTLR takes a :class:`~objspec.trajectory.TrajectoryLottery`.
* ``J`` of FPR takes a :class:`~objspec.mdp_core.Policy`.
* ``F`` of RRL takes an action distribution (1-d array).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Any, Callable, Union

import numpy as np

from ..errors import ValidationError
from .preorders import Preorder, as_preorder


class Formalism(enum.Enum):
    MR = "MR"
    LAR = "LAR"
    LTL = "LTL"
    RM = "RM"
    INMR = "INMR"
    IMORL = "IMORL"
    FTR = "FTR"
    RRL = "RRL"
    ONMR = "ONMR"
    OMORL = "OMORL"
    FOMR = "FOMR"
    FTLR = "FTLR"
    FPR = "FPR"
    OMO = "OMO"
    TLO = "TLO"
    GOMORL = "GOMORL"
    PO = "PO"

    def __str__(self):
        return self.value


FORMALISMS = tuple(Formalism)
PREORDER_FORMALISMS = frozenset({Formalism.OMO, Formalism.TLO, Formalism.GOMORL, Formalism.PO})
TRAJECTORY_FORMALISMS = frozenset({Formalism.FTR, Formalism.INMR, Formalism.IMORL})


def _gamma(value: float) -> float:
    value = float(value)
    if not 0 <= value < 1:
        raise ValidationError(f"discount {value} outside [0, 1)")
    return value


def _reward(value) -> np.ndarray:
    arr = np.array(value, dtype=float)
    if arr.ndim != 3 or not np.all(np.isfinite(arr)):
        raise ValidationError("reward must be a finite [n × a × n] table")
    arr.setflags(write=False)
    return arr


def _rewards(values) -> tuple:
    out = tuple(_reward(r) for r in values)
    if not out:
        raise ValidationError("need at least one reward function (k ≥ 1)")
    return out


class _Spec:
    formalism: Formalism

    @property
    def is_preorder(self) -> bool:
        return self.formalism in PREORDER_FORMALISMS


@dataclass(frozen=True, eq=False)
class MR(_Spec):
    reward: np.ndarray
    gamma: float
    formalism = Formalism.MR

    def __post_init__(self):
        object.__setattr__(self, "reward", _reward(self.reward))
        object.__setattr__(self, "gamma", _gamma(self.gamma))


@dataclass(frozen=True, eq=False)
class LAR(_Spec):
    reward: np.ndarray
    formalism = Formalism.LAR

    def __post_init__(self):
        object.__setattr__(self, "reward", _reward(self.reward))


@dataclass(frozen=True, eq=False)
class LTL(_Spec):
    """``formula`` is s-expression text, a parsed formula, or a DeterministicMonitor."""

    formula: Any
    formalism = Formalism.LTL


@dataclass(frozen=True, eq=False)
class RM(_Spec):
    machine: Any
    formalism = Formalism.RM


@dataclass(frozen=True, eq=False)
class INMR(_Spec):
    reward: np.ndarray
    f: Callable[[float], float]
    gamma: float
    formalism = Formalism.INMR

    def __post_init__(self):
        object.__setattr__(self, "reward", _reward(self.reward))
        object.__setattr__(self, "gamma", _gamma(self.gamma))


@dataclass(frozen=True, eq=False)
class IMORL(_Spec):
    rewards: tuple
    f: Callable[[np.ndarray], float]
    gamma: float
    formalism = Formalism.IMORL

    def __post_init__(self):
        object.__setattr__(self, "rewards", _rewards(self.rewards))
        object.__setattr__(self, "gamma", _gamma(self.gamma))

    @property
    def k(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True, eq=False)
class FTR(_Spec):
    f: Callable[[Any], float]
    formalism = Formalism.FTR


@dataclass(frozen=True, eq=False)
class RRL(_Spec):
    """Regularised return with per-step reward ``R(s, a, s') − α·F(π(s))``."""

    reward: np.ndarray
    alpha: float
    F: Callable[[np.ndarray], float]
    gamma: float
    formalism = Formalism.RRL

    def __post_init__(self):
        object.__setattr__(self, "reward", _reward(self.reward))
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "gamma", _gamma(self.gamma))


@dataclass(frozen=True, eq=False)
class ONMR(_Spec):
    reward: np.ndarray
    f: Callable[[float], float]
    gamma: float
    formalism = Formalism.ONMR

    def __post_init__(self):
        object.__setattr__(self, "reward", _reward(self.reward))
        object.__setattr__(self, "gamma", _gamma(self.gamma))


@dataclass(frozen=True, eq=False)
class OMORL(_Spec):
    rewards: tuple
    f: Callable[[np.ndarray], float]
    gamma: float
    formalism = Formalism.OMORL

    def __post_init__(self):
        object.__setattr__(self, "rewards", _rewards(self.rewards))
        object.__setattr__(self, "gamma", _gamma(self.gamma))

    @property
    def k(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True, eq=False)
class FOMR(_Spec):
    f: Callable[[Any], float]
    gamma: float
    formalism = Formalism.FOMR

    def __post_init__(self):
        object.__setattr__(self, "gamma", _gamma(self.gamma))


@dataclass(frozen=True, eq=False)
class FTLR(_Spec):
    f: Callable[[Any], float]
    formalism = Formalism.FTLR


@dataclass(frozen=True, eq=False)
class FPR(_Spec):
    J: Callable[[Any], float]
    formalism = Formalism.FPR


@dataclass(frozen=True, eq=False)
class OMO(_Spec):
    gamma: float
    preorder: Preorder
    formalism = Formalism.OMO

    def __post_init__(self):
        object.__setattr__(self, "gamma", _gamma(self.gamma))
        object.__setattr__(self, "preorder", as_preorder(self.preorder))


@dataclass(frozen=True, eq=False)
class TLO(_Spec):
    preorder: Preorder
    formalism = Formalism.TLO

    def __post_init__(self):
        object.__setattr__(self, "preorder", as_preorder(self.preorder))


@dataclass(frozen=True, eq=False)
class GOMORL(_Spec):
    rewards: tuple
    gamma: float
    preorder: Preorder
    formalism = Formalism.GOMORL

    def __post_init__(self):
        object.__setattr__(self, "rewards", _rewards(self.rewards))
        object.__setattr__(self, "gamma", _gamma(self.gamma))
        object.__setattr__(self, "preorder", as_preorder(self.preorder))

    @property
    def k(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True, eq=False)
class PO(_Spec):
    preorder: Preorder
    formalism = Formalism.PO

    def __post_init__(self):
        object.__setattr__(self, "preorder", as_preorder(self.preorder))


ObjectiveSpec = Union[MR, LAR, LTL, RM, INMR, IMORL, FTR, RRL, ONMR, OMORL, FOMR,
                      FTLR, FPR, OMO, TLO, GOMORL, PO]

SPEC_CLASSES = {cls.formalism: cls for cls in
                (MR, LAR, LTL, RM, INMR, IMORL, FTR, RRL, ONMR, OMORL, FOMR,
                 FTLR, FPR, OMO, TLO, GOMORL, PO)}
