"""Exception types shared across the package.

Every failure mode that callers are expected to handle has its own class so
CLI and tests can distinguish input errors from violated preconditions.
"""


class TorellError(Exception):
    """Base class for all errors raised by this package."""


# --- integer linear algebra ---------------------------------------------

class NonSquare(TorellError):
    """A square matrix was required."""


class DimensionMismatch(TorellError):
    """Vectors or matrices with incompatible dimensions were supplied."""


class WrongCorank(TorellError):
    """A sublattice of a different corank was required."""


# --- fans ----------------------------------------------------------------

class MalformedFan(TorellError):
    """Structural fan invariants (faces, independence, primitivity) fail."""


class NotGood(TorellError):
    """The fan is not good: not smooth, or some cone lies on no top cone."""


class NotTopCone(TorellError):
    """A top-dimensional cone of the fan was required."""


class NotUnimodular(TorellError):
    """A unimodular basis / volume-one cell was required."""


# --- invariants and comparison -------------------------------------------

class RankMismatch(TorellError):
    """Invariants over ambient lattices of different ranks were compared."""


class NotSurface(TorellError):
    """A two-dimensional fan was required."""


class NotProper(TorellError):
    """A proper (complete) fan was required."""


class NotSingleFlip(TorellError):
    """The two fans do not differ by reversing exactly one ray."""


# --- Cech combinatorics ---------------------------------------------------

class DisconnectedStar(TorellError):
    """The star of a cone is not connected through shared walls, so the
    spreading recipe for the distinguished cover is not well defined."""


class WitnessNotFound(TorellError):
    """No smooth cover element with the required letter pattern exists."""


class NotAComplex(TorellError):
    """Differentials do not compose to zero."""


class NotInvertibleBlock(TorellError):
    """The designated block of the differential is not invertible."""


# --- triangulations -------------------------------------------------------

class NotDim2(TorellError):
    """A two-dimensional lattice simplex was required."""


class IllegalFlip(TorellError):
    """The flip move does not apply to this triangulation."""


class NotInSL(TorellError):
    """Group generator weights do not sum to an integer."""


# --- input/output ---------------------------------------------------------

class ParseError(TorellError):
    """Input bytes could not be parsed at all."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class SchemaError(TorellError):
    """Input parsed but does not match the document schema."""
