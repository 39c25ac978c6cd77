"""Brute-force ground truth for desk-scale instances.

Everything here is deliberately independent of the min-cut pipeline: chains
are dense Z2 vectors, boundary questions are solved by Gaussian elimination,
and minimal persistent cycles are found by enumerating the whole cycle space
of the relevant prefix.  Enumeration caps fail loudly (``TooLargeError``)
rather than sampling, so a passing comparison really covers the instance.
"""
from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

import numpy as np

from .cells import CellComplex, Chain
from .errors import ChainNotInComplexError, MissingWeightError, TooLargeError
from .filtration import Filtration, Interval
from .mincut import INF, FlowNetwork, cut_capacity


# -- dense Z2 linear algebra -------------------------------------------------------


def boundary_matrix(K: CellComplex, q: int) -> np.ndarray:
    """Z2 matrix of the boundary operator from q-cells to (q-1)-cells."""
    rows = K.num_cells(q - 1)
    cols = K.num_cells(q)
    M = np.zeros((rows, cols), dtype=np.uint8)
    for cid in K.cell_ids(q):
        for f in K.facets_of(q, cid):
            M[f, cid] ^= 1
    return M


def rref(M: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over Z2 and the pivot column list."""
    R = M.copy().astype(np.uint8)
    rows, cols = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hit = None
        for rr in range(r, rows):
            if R[rr, c]:
                hit = rr
                break
        if hit is None:
            continue
        if hit != r:
            R[[r, hit]] = R[[hit, r]]
        for rr in range(rows):
            if rr != r and R[rr, c]:
                R[rr, :] ^= R[r, :]
        pivots.append(c)
        r += 1
    return R, pivots


def z2_rank(M: np.ndarray) -> int:
    return len(rref(M)[1])


def nullspace(M: np.ndarray) -> List[np.ndarray]:
    """Basis of the Z2 kernel as dense uint8 vectors over the columns."""
    R, pivots = rref(M)
    cols = M.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = np.zeros(cols, dtype=np.uint8)
        v[fc] = 1
        for r, pc in enumerate(pivots):
            if R[r, fc]:
                v[pc] = 1
        basis.append(v)
    return basis


class _SpanChecker:
    """Membership test for the column space of a fixed matrix."""

    def __init__(self, M: np.ndarray):
        # rows of the RREF of M^T span the same space as M's columns
        self._R, self._pivots = rref(M.T.copy())

    def contains(self, b: np.ndarray) -> bool:
        v = b.astype(np.uint8).copy()
        for r, pc in enumerate(self._pivots):
            if v[pc]:
                v ^= self._R[r, :]
        return not v.any()


# -- spec-level oracle operations ---------------------------------------------------


def cycle_space_basis(K: CellComplex, d: int) -> List[Chain]:
    """Basis of the space of d-cycles (kernel of the d-th boundary map)."""
    if d == 0:
        return [K.chain(0, [c]) for c in K.cell_ids(0)]
    basis = nullspace(boundary_matrix(K, d))
    return [K.chain(d, np.flatnonzero(v)) for v in basis]


def is_boundary_in(K: CellComplex, zeta: Chain) -> bool:
    """True iff some (d+1)-chain of K has boundary zeta (elimination)."""
    for cid in zeta.cells:
        if not (0 <= cid < K.num_cells(zeta.dim)):
            raise ChainNotInComplexError(f"cell {cid} not in complex")
    if not zeta.cells:
        return True
    vec = np.zeros(K.num_cells(zeta.dim), dtype=np.uint8)
    for cid in zeta.cells:
        vec[cid] = 1
    return _SpanChecker(boundary_matrix(K, zeta.dim + 1)).contains(vec)


def betti(K: CellComplex, d: int) -> int:
    """dim H_d = dim Z_d - dim B_d by matrix ranks."""
    nd = K.num_cells(d)
    z = nd - z2_rank(boundary_matrix(K, d)) if d >= 1 else nd
    b = z2_rank(boundary_matrix(K, d + 1))
    return z - b


# -- minimal persistent cycles by enumeration ---------------------------------------


def _weights_vector(K: CellComplex, d: int, support: np.ndarray) -> np.ndarray:
    w = np.zeros(K.num_cells(d), dtype=np.float64)
    for cid in np.flatnonzero(support):
        wc = K.weight_of(d, int(cid))
        if wc is None:
            raise MissingWeightError(f"{d}-cell {cid} has no weight")
        w[cid] = wc
    return w


def _prefix_col_mask(K: CellComplex, F: Filtration, q: int, up_to: int) -> np.ndarray:
    mask = np.zeros(K.num_cells(q), dtype=bool)
    for cid in K.cell_ids(q):
        if F.index_of(q, cid) <= up_to:
            mask[cid] = True
    return mask


def _enumerate_min_cycle(
    K: CellComplex,
    F: Filtration,
    d: int,
    beta: int,
    keep,
    cap: int,
) -> Tuple[Chain, float]:
    """Minimum-weight cycle of the beta-prefix satisfying ``keep(vec)``."""
    nd = K.num_cells(d)
    born = _prefix_col_mask(K, F, d, beta)
    full = boundary_matrix(K, d)
    basis = nullspace(full[:, born])
    k = len(basis)
    if k > cap:
        raise TooLargeError(f"cycle space dimension {k} exceeds cap {cap}")
    lift = []
    born_ids = np.flatnonzero(born)
    for v in basis:
        vec = np.zeros(nd, dtype=np.uint8)
        vec[born_ids[np.flatnonzero(v)]] = 1
        lift.append(vec)
    weights = _weights_vector(K, d, born.astype(np.uint8))
    best_w = None
    best_vec = None
    cur = np.zeros(nd, dtype=np.uint8)
    for i in range(1, 1 << k):
        cur = cur ^ lift[(i & -i).bit_length() - 1]  # Gray-code step
        if not keep(cur):
            continue
        w = float(weights[cur.astype(bool)].sum())
        if best_w is None or w < best_w - 1e-15:
            best_w = w
            best_vec = cur.copy()
    if best_vec is None:
        raise TooLargeError("no qualifying cycle; interval/diagram mismatch")
    return K.chain(d, np.flatnonzero(best_vec)), float(best_w)


def brute_min_pers_cycle_fin(
    K: CellComplex, F: Filtration, interval: Interval, cap: int = 20
) -> Tuple[Chain, float]:
    """Minimal persistent cycle of a finite interval by full enumeration.

    Enumerates every cycle of the birth prefix, keeping those that contain
    the birth cell, do not yet bound just before the death step, and bound
    at the death step.
    """
    d = interval.dim
    beta, delta = interval.birth, interval.death
    if delta is None:
        raise ValueError("finite interval required")
    sigma_beta = F.cell_at(beta)[1]
    d1 = boundary_matrix(K, d + 1)
    in_delta = _SpanChecker(d1[:, _prefix_col_mask(K, F, d + 1, delta)])
    before = _SpanChecker(d1[:, _prefix_col_mask(K, F, d + 1, delta - 1)])

    def keep(vec: np.ndarray) -> bool:
        if not vec[sigma_beta]:
            return False
        if before.contains(vec):
            return False
        return in_delta.contains(vec)

    return _enumerate_min_cycle(K, F, d, beta, keep, cap)


def brute_min_pers_cycle_inf(
    K: CellComplex, F: Filtration, interval: Interval, cap: int = 20
) -> Tuple[Chain, float]:
    """Minimal cycle born in the birth prefix and containing the birth cell."""
    d = interval.dim
    sigma_beta = F.cell_at(interval.birth)[1]

    def keep(vec: np.ndarray) -> bool:
        return bool(vec[sigma_beta])

    return _enumerate_min_cycle(K, F, d, interval.birth, keep, cap)


def brute_min_cut(net: FlowNetwork, cap: int = 20) -> float:
    """Minimum capacity over all source/sink respecting bipartitions."""
    free = [v for v in range(net.num_vertices) if v not in net.sources and v not in net.sinks]
    if net.num_vertices > cap:
        raise TooLargeError(f"{net.num_vertices} vertices exceeds cap {cap}")
    best = INF
    for mask in range(1 << len(free)):
        side = set(net.sources)
        for i, v in enumerate(free):
            if mask >> i & 1:
                side.add(v)
        c = cut_capacity(net, side)
        if c < best:
            best = c
    return best
