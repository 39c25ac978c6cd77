"""Exception hierarchy for perscyc.

Precondition violations and malformed inputs raise subclasses of
:class:`PerscycError`; conditions that provably cannot occur on valid input
raise :class:`InternalAssertionError` so that callers can distinguish "your
input is wrong" from "the library is wrong".
"""
from __future__ import annotations


class PerscycError(Exception):
    """Base class for all perscyc errors."""


# --- cell complex construction ------------------------------------------------

class InvalidCellError(PerscycError):
    """Vertex list is not a valid cell (duplicates, negatives, empty)."""


class MissingFaceError(PerscycError):
    """A cell was inserted before one of its facets."""


class DuplicateCellError(PerscycError):
    """The cell is already present (lookup is by canonical vertex order)."""


class NegativeWeightError(PerscycError):
    """Weights must be finite and non-negative."""


class MissingWeightError(PerscycError):
    """A cell in the optimized dimension has no weight assigned."""


class DimZeroError(PerscycError):
    """Boundary of a 0-chain is undefined."""


class ChainNotInComplexError(PerscycError):
    """A chain refers to cell ids that are not in the complex."""


# --- filtrations ---------------------------------------------------------------

class FiltrationError(PerscycError):
    """Base class for invalid filtration orders."""


class FaceAfterCofaceError(FiltrationError):
    """A cell appears before one of its faces."""

    def __init__(self, coface_index: int, face_index: int):
        self.coface_index = coface_index
        self.face_index = face_index
        super().__init__(
            f"cell at position {coface_index} appears before its face "
            f"at position {face_index}"
        )


class MissingCellError(FiltrationError):
    """The order does not cover every cell of the complex."""


class IndexOutOfRangeError(PerscycError):
    """Prefix index outside 0..n."""


# --- flow networks -------------------------------------------------------------

class InvalidNetworkError(PerscycError):
    """Sources/sinks empty, overlapping, or out of range."""


class InvalidCutError(PerscycError):
    """The vertex bipartition is not a cut of the given network."""


# --- cycle algorithms ----------------------------------------------------------

class NotWeakPseudomanifoldError(PerscycError):
    """Some d-cell has more than two (d+1)-cofaces."""


class IntervalNotInDiagramError(PerscycError):
    """The requested interval is not in the persistence diagram."""


class IntervalNotInfiniteError(PerscycError):
    """An infinite interval was required."""


class IntervalNotFiniteError(PerscycError):
    """A finite interval was required."""


class NoCycleThroughSimplexError(PerscycError):
    """Both orientations of the queried cell bound the same void."""


class InternalAssertionError(PerscycError):
    """A condition that is impossible for valid inputs was violated."""


class NoFiniteCutError(InternalAssertionError):
    """Every source/sink cut crosses an infinite-capacity edge."""


# --- embedded geometry ---------------------------------------------------------

class NotEmbeddedError(PerscycError):
    """Coordinates missing, wrong ambient dimension, or degenerate cells."""


class DegenerateGeometryError(PerscycError):
    """Determinant or projection below tolerance."""


class NotEmbeddedLocallyError(PerscycError):
    """Two cofaces project to the same angle around a hinge cell."""


class NotAFaceError(PerscycError):
    """The given cell is not a facet of the other."""


class InconsistentBoundariesError(PerscycError):
    """Void-boundary groups do not cover the required orientations."""


# --- suspension ----------------------------------------------------------------

class NotInImageError(PerscycError):
    """Chain is not in the image of the suspension map."""


class DimensionTooLowError(PerscycError):
    """The lifted dimension must be at least 2."""


# --- cubical -------------------------------------------------------------------

class GridTooSmallError(PerscycError):
    """Scalar grids need at least two samples per axis."""


# --- oracle --------------------------------------------------------------------

class TooLargeError(PerscycError):
    """Instance exceeds the brute-force enumeration cap."""
