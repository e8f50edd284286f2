"""Exception and warning types shared across the package."""


class SixVertexError(Exception):
    """Base class for errors raised by this package."""


class SingularityError(SixVertexError, ArithmeticError):
    """A denominator vanished (to working precision) at the requested point."""


class NonInvertibleError(SixVertexError, ZeroDivisionError):
    """A truncated series with zero constant term was inverted."""


class ShapeError(SixVertexError, ValueError):
    """Operands have incompatible shapes or truncation orders."""


class CapExceededError(SixVertexError, ValueError):
    """A size or index exceeds the enforced cap of the method."""


class ConditioningWarning(UserWarning):
    """A result was computed but lost a large share of its working digits."""
