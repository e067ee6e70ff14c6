"""Exception hierarchy shared by every module."""


class ObjspecError(Exception):
    """Base class for all package errors."""


class ValidationError(ObjspecError, ValueError):
    """An input violates a structural or probabilistic invariant."""


class DimensionMismatch(ObjspecError, ValueError):
    """Tables with incompatible shapes were combined."""


class SingularSystem(ObjspecError, ArithmeticError):
    """A linear system that should be well posed could not be solved."""


class UnsupportedFragment(ObjspecError):
    """An LTL formula lies outside the compilable fragment."""


class NotLassoEnumerable(ObjspecError):
    """The trajectory set of a policy is not a finite set of lassos."""


class NotDecodable(ObjspecError, ValueError):
    """A return value is not realisable under the injective reward."""


class ExplosionGuard(ObjspecError):
    """Prefix enumeration would exceed the configured cap."""


class LPSolverFailure(ObjspecError):
    """The LP backend returned neither an optimum nor an infeasibility certificate."""


class UnknownFixture(ObjspecError, KeyError):
    """No separation fixture with the requested name."""


class UnsupportedEdge(ObjspecError):
    """No embedding is known between the requested formalisms."""


class InconsistentTable(ObjspecError):
    """The encoded expressivity relation is not transitively closed."""
