"""Three-way comparisons and the built-in total preorders."""

from __future__ import annotations

import enum
from typing import Any, Callable

import numpy as np

SCALAR_TOL = 1e-9


class Ordering(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def __str__(self):
        return self.value

    @classmethod
    def of(cls, x: float, y: float, tol: float = SCALAR_TOL) -> "Ordering":
        if x > y + tol:
            return cls.GREATER
        if y > x + tol:
            return cls.LESS
        return cls.EQUAL

    def flip(self) -> "Ordering":
        return {Ordering.LESS: Ordering.GREATER, Ordering.GREATER: Ordering.LESS}.get(self, self)


class Preorder:
    """A total preorder given by its three-way comparison."""

    def compare(self, x: Any, y: Any) -> Ordering:
        raise NotImplementedError

    def __call__(self, x: Any, y: Any) -> Ordering:
        return self.compare(x, y)


class ThresholdPreorder(Preorder):
    """Two-level preorder on reals: everything at or above ``c`` beats everything below."""

    def __init__(self, c: float):
        self.c = float(c)

    def compare(self, x, y):
        return Ordering.of(float(x >= self.c), float(y >= self.c), tol=0.0)

    def __repr__(self):
        return f"ThresholdPreorder({self.c})"


class LexicographicPreorder(Preorder):
    """Lexicographic order on vectors, component by component."""

    def __init__(self, tol: float = SCALAR_TOL):
        self.tol = tol

    def compare(self, x, y):
        x, y = np.ravel(np.asarray(x, dtype=float)), np.ravel(np.asarray(y, dtype=float))
        if x.shape != y.shape:
            raise ValueError("lexicographic comparison of vectors with different lengths")
        for xi, yi in zip(x, y):
            result = Ordering.of(xi, yi, self.tol)
            if result is not Ordering.EQUAL:
                return result
        return Ordering.EQUAL

    def __repr__(self):
        return "LexicographicPreorder()"


class InducedPreorder(Preorder):
    """Preorder pulled back from a real-valued function: ``x ⪰ y iff f(x) ≥ f(y)``."""

    def __init__(self, f: Callable[[Any], float], tol: float = SCALAR_TOL):
        self.f = f
        self.tol = tol

    def compare(self, x, y):
        return Ordering.of(float(self.f(x)), float(self.f(y)), self.tol)

    def __repr__(self):
        return f"InducedPreorder({getattr(self.f, '__name__', 'f')})"


class ComparatorPreorder(Preorder):
    """Wrap a plain ``(x, y) -> Ordering`` callable."""

    def __init__(self, cmp: Callable[[Any, Any], Ordering]):
        self.cmp = cmp

    def compare(self, x, y):
        return self.cmp(x, y)


def as_preorder(obj) -> Preorder:
    if isinstance(obj, Preorder):
        return obj
    if callable(obj):
        return ComparatorPreorder(obj)
    raise TypeError(f"cannot use {obj!r} as a preorder")
