"""Exception types raised by the weak-value engine."""


class WeakValueError(Exception):
    """Base class for every error raised by this package."""


class ZeroVector(WeakValueError, ValueError):
    """Raw amplitudes have (numerically) zero norm."""


class DimensionMismatch(WeakValueError, ValueError):
    """Operands live in different Hilbert spaces."""


class NotHermitian(WeakValueError, ValueError):
    """A matrix offered as an observable is not Hermitian."""


class NonFiniteValue(WeakValueError, ValueError):
    """NaN or Inf found in amplitudes or matrix entries."""


class InvalidBasis(WeakValueError, ValueError):
    """A set of states is not a complete orthonormal basis."""


class NullPostSelection(WeakValueError, ArithmeticError):
    """Pre- and post-selected states are (numerically) orthogonal.

    The weak value is undefined there; near the floor it diverges.
    """


class ComplexGeometry(WeakValueError, ValueError):
    """A real-restricted routine received complex inner products."""


class OrthogonalIntermediate(WeakValueError, ValueError):
    """The intermediate state is orthogonal to the pre-selected state."""


class ResolutionTooCoarse(WeakValueError, ValueError):
    """Grid resolution below the minimum of 8 points per angle."""


class SchemaError(WeakValueError, ValueError):
    """A scenario document failed validation.

    ``path`` points at the offending field, e.g. ``observables.X.matrix``.
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)
