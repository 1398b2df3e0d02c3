"""Exception taxonomy shared across the package.

Every error raised by the library is a subclass of :class:`OpineqError`
so callers (notably the CLI) can distinguish usage problems from bugs.
"""


class OpineqError(Exception):
    """Base class for all library errors."""


class NonHermitianInput(OpineqError):
    """A matrix violated the Hermitian symmetry tolerance."""


class NotPositiveSemidefinite(OpineqError):
    """A fractional power or mean was asked of a matrix with a genuinely
    negative eigenvalue."""


class SingularMatrix(OpineqError):
    """A negative power was asked of a matrix that is singular at the
    configured threshold."""


class DimensionMismatch(OpineqError):
    """Two operands (or a map and its argument) have incompatible shapes."""


class WeightOutOfRange(OpineqError):
    """A mean weight nu lies outside [0, 1]."""


class BadBounds(OpineqError):
    """Scalar interval data violates 0 < lo <= hi (or the richer sandwich
    ordering)."""


class DegenerateInterval(OpineqError):
    """An operation needs a nondegenerate interval (m < M) but got m == M."""


class NonPositiveArgument(OpineqError):
    """A scalar argument that must be positive was not."""


class MalformedSpec(OpineqError):
    """A map description fails its structural certificate (non-isometric
    columns, weights not summing to one, non-unitary factor, ...)."""


class UnknownKind(OpineqError):
    """An unrecognized map kind tag."""


class UnknownInequality(OpineqError):
    """An identifier not present in the inequality registry."""


class HypothesisNotMet(OpineqError):
    """Instance bounds or case parameters fall outside a registry entry's
    hypothesis set.  The message names the violated clause."""


class IncompatibleEntries(OpineqError):
    """Two registry entries cannot be compared on the given bounds/params."""


class ConfigInvalid(OpineqError):
    """A suite or CLI configuration failed validation."""
