"""Named wrapper functions usable from configuration files and the CLI."""

from __future__ import annotations

import re

import numpy as np

from ..errors import ValidationError
from .preorders import LexicographicPreorder, ThresholdPreorder


def identity(x):
    return x


def absolute(x):
    return abs(x)


def threshold(c: float):
    c = float(c)

    def f(x):
        return 1.0 if x >= c else 0.0

    f.__name__ = f"threshold({c:g})"
    return f


def entropy(p) -> float:
    """Shannon entropy (nats) of an action distribution."""
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def support_count(p) -> float:
    """Number of actions with probability zero."""
    return float(np.count_nonzero(np.asarray(p) == 0))


WRAPPER_NAMES = ("identity", "abs", "threshold(c)", "lexicographic", "entropy", "support-count")

_THRESHOLD = re.compile(r"^threshold\(\s*([-+0-9.eE]+)\s*\)$")


def resolve_wrapper(name: str):
    """Callable (or preorder) for a built-in wrapper name."""
    name = name.strip()
    if name == "identity":
        return identity
    if name == "abs":
        return absolute
    if name == "entropy":
        return entropy
    if name == "support-count":
        return support_count
    if name == "lexicographic":
        return LexicographicPreorder()
    match = _THRESHOLD.match(name)
    if match:
        return threshold(float(match.group(1)))
    raise ValidationError(f"unknown wrapper {name!r}; built-ins are {', '.join(WRAPPER_NAMES)}")


def resolve_preorder(name: str):
    """Preorder for a built-in name: ``lexicographic`` or ``threshold(c)`` on reals."""
    name = name.strip()
    if name == "lexicographic":
        return LexicographicPreorder()
    match = _THRESHOLD.match(name)
    if match:
        return ThresholdPreorder(float(match.group(1)))
    raise ValidationError(f"unknown preorder {name!r}; use lexicographic or threshold(c)")
