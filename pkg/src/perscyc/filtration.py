"""Filtrations, partial complexes, and the Z2 persistence pairing.

The pairing is the plain left-to-right column reduction with lowest-one
bookkeeping.  Indices are 1-based throughout the public surface; an interval
``[birth, death)`` stores filtration indices, with ``death=None`` marking an
infinite interval.  The reduction inner loop runs over flat int64 buffers so
the numba backend can compile it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._backend import njit
from .cells import CellComplex, CellRef, Chain
from .errors import (
    DuplicateCellError,
    FaceAfterCofaceError,
    IndexOutOfRangeError,
    MissingCellError,
)


@dataclass(frozen=True)
class Interval:
    """A persistence interval [birth, death) in one dimension."""

    dim: int
    birth: int
    death: Optional[int] = None

    def __post_init__(self):
        if self.birth < 1:
            raise ValueError("birth index must be >= 1")
        if self.death is not None and self.death <= self.birth:
            raise ValueError("death must exceed birth")

    @property
    def is_finite(self) -> bool:
        return self.death is not None

    def __repr__(self) -> str:
        end = self.death if self.death is not None else "inf"
        return f"[{self.birth},{end})@{self.dim}"


class Diagram:
    """Persistence diagram: intervals grouped per dimension."""

    def __init__(self, intervals: Iterable[Interval]):
        self._by_dim: Dict[int, List[Interval]] = {}
        for iv in intervals:
            self._by_dim.setdefault(iv.dim, []).append(iv)
        for ivs in self._by_dim.values():
            ivs.sort(key=lambda iv: (iv.birth, iv.death if iv.death is not None else np.inf))

    def dims(self) -> List[int]:
        return sorted(self._by_dim)

    def in_dim(self, d: int) -> List[Interval]:
        return list(self._by_dim.get(d, []))

    def finite(self, d: int) -> List[Interval]:
        return [iv for iv in self._by_dim.get(d, []) if iv.is_finite]

    def infinite(self, d: int) -> List[Interval]:
        return [iv for iv in self._by_dim.get(d, []) if not iv.is_finite]

    def all_intervals(self) -> List[Interval]:
        return [iv for d in self.dims() for iv in self._by_dim[d]]

    def __contains__(self, iv: Interval) -> bool:
        return iv in self._by_dim.get(iv.dim, [])

    def __repr__(self) -> str:
        parts = [f"dim {d}: {self._by_dim[d]}" for d in self.dims()]
        return "Diagram(" + "; ".join(parts) + ")"


class Filtration:
    """A total order of the cells of a complex, one cell per step."""

    def __init__(self, complex_: CellComplex, order: Sequence[CellRef]):
        self.complex = complex_
        self.order: List[CellRef] = [(int(q), int(c)) for q, c in order]
        self._index: Dict[CellRef, int] = {}
        for pos, ref in enumerate(self.order, start=1):
            if ref in self._index:
                raise DuplicateCellError(f"cell {ref} appears twice in the filtration")
            self._index[ref] = pos

    def __len__(self) -> int:
        return len(self.order)

    def cell_at(self, i: int) -> CellRef:
        """The cell added at 1-based position i."""
        if not (1 <= i <= len(self.order)):
            raise IndexOutOfRangeError(f"filtration index {i} out of range 1..{len(self.order)}")
        return self.order[i - 1]

    def index_of(self, q: int, cid: int) -> int:
        try:
            return self._index[(q, cid)]
        except KeyError:
            raise MissingCellError(f"cell {(q, cid)} is not in the filtration") from None

    def dim_at(self, i: int) -> int:
        return self.cell_at(i)[0]


def validate_filtration(K: CellComplex, F: Filtration) -> None:
    """Check that F is a bijective, prefix-closed order of K's cells."""
    if len(F) != K.total_cells():
        raise MissingCellError(
            f"filtration covers {len(F)} of {K.total_cells()} cells"
        )
    for q, cid in F.order:
        if not (0 <= q and cid < K.num_cells(q)):
            raise MissingCellError(f"cell {(q, cid)} does not exist in the complex")
    for pos, (q, cid) in enumerate(F.order, start=1):
        if q == 0:
            continue
        for f in K.facets_of(q, cid):
            fpos = F.index_of(q - 1, f)
            if fpos > pos:
                raise FaceAfterCofaceError(pos, fpos)


def partial_complex(F: Filtration, i: int) -> CellComplex:
    """The subcomplex of the first i cells (i=0 empty, i=n the whole complex)."""
    if not (0 <= i <= len(F)):
        raise IndexOutOfRangeError(f"prefix length {i} out of range 0..{len(F)}")
    return F.complex.subcomplex(F.order[:i])


# -- reduction kernel ------------------------------------------------------------


@njit
def _merge_xor(a, la, b, out):
    """Symmetric difference of two sorted index arrays; returns new length."""
    i = 0
    j = 0
    k = 0
    lb = b.shape[0]
    while i < la and j < lb:
        x = a[i]
        y = b[j]
        if x == y:
            i += 1
            j += 1
        elif x < y:
            out[k] = x
            k += 1
            i += 1
        else:
            out[k] = y
            k += 1
            j += 1
    while i < la:
        out[k] = a[i]
        k += 1
        i += 1
    while j < lb:
        out[k] = b[j]
        k += 1
        j += 1
    return k


@njit
def _reduce_lows(indptr, indices, n):
    """Column reduction; lows[j] = pivot row of column j, -1 when it empties."""
    lows = np.full(n, -1, np.int64)
    pivot_col = np.full(n, -1, np.int64)
    # stored reduced columns live in one growable flat buffer
    cap = max(64, indices.shape[0] * 2)
    buf = np.empty(cap, np.int64)
    col_start = np.zeros(n, np.int64)
    col_len = np.zeros(n, np.int64)
    head = 0
    work = np.empty(n, np.int64)
    scratch = np.empty(n, np.int64)
    for j in range(n):
        ln = indptr[j + 1] - indptr[j]
        for t in range(ln):
            work[t] = indices[indptr[j] + t]
        while ln > 0:
            low = work[ln - 1]
            k = pivot_col[low]
            if k < 0:
                break
            ln = _merge_xor(work, ln, buf[col_start[k]:col_start[k] + col_len[k]], scratch)
            tmp = work
            work = scratch
            scratch = tmp
        if ln > 0:
            lows[j] = work[ln - 1]
            pivot_col[work[ln - 1]] = j
            if head + ln > buf.shape[0]:
                newcap = buf.shape[0]
                while newcap < head + ln:
                    newcap *= 2
                newbuf = np.empty(newcap, np.int64)
                newbuf[:head] = buf[:head]
                buf = newbuf
            buf[head:head + ln] = work[:ln]
            col_start[j] = head
            col_len[j] = ln
            head += ln
    return lows


def _boundary_csr(K: CellComplex, F: Filtration) -> Tuple[np.ndarray, np.ndarray]:
    n = len(F)
    counts = np.zeros(n + 1, dtype=np.int64)
    cols: List[np.ndarray] = []
    for pos0, (q, cid) in enumerate(F.order):
        if q == 0:
            cols.append(np.empty(0, dtype=np.int64))
            continue
        rows = np.array(
            sorted(F.index_of(q - 1, f) - 1 for f in K.facets_of(q, cid)),
            dtype=np.int64,
        )
        cols.append(rows)
        counts[pos0 + 1] = rows.shape[0]
    indptr = np.cumsum(counts)
    indices = np.concatenate(cols) if cols else np.empty(0, dtype=np.int64)
    return indptr, indices


def compute_pairs(K: CellComplex, F: Filtration) -> Diagram:
    """Persistence pairing of a valid filtration (unique for the order)."""
    validate_filtration(K, F)
    n = len(F)
    if n == 0:
        return Diagram([])
    indptr, indices = _boundary_csr(K, F)
    lows = _reduce_lows(indptr, indices, n)
    intervals: List[Interval] = []
    paired_births = set()
    for j in range(n):
        i = int(lows[j])
        if i >= 0:
            intervals.append(Interval(F.dim_at(i + 1), i + 1, j + 1))
            paired_births.add(i)
    for i in range(n):
        if lows[i] == -1 and i not in paired_births:
            intervals.append(Interval(F.dim_at(i + 1), i + 1, None))
    return Diagram(intervals)


def filtration_weights_ok(K: CellComplex, F: Filtration, d: int, up_to: int) -> Optional[CellRef]:
    """First d-cell at index <= up_to lacking a weight, or None."""
    for pos, (q, cid) in enumerate(F.order[:up_to], start=1):
        if q == d and K.weight_of(q, cid) is None:
            return (q, cid)
    return None
