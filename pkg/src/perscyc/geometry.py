"""Geometric predicates for complexes embedded in Euclidean space.

Orientation convention: a d-cell embedded in R^{d+1} has a canonical unit
normal derived from its sorted vertex list; an oriented cell is the cell
plus a sign flipping that normal.  The sign produced by
:func:`orientation_toward` matches the construction "orient the (d+1)-simplex
spanned by a sample point naturally, induce on the d-face": for a simplex
with sorted vertices v0..vd and a sample point p it equals the sign of
det(v0-p, ..., vd-p).  The same normal-based formula extends verbatim to
axis-aligned cubical cells, which is why the void reconstruction can run on
both cell types.

Determinant degeneracy uses a relative tolerance of 1e-12 (scale: product of
row norms); angular coincidence around a hinge uses 1e-9 rad.  Inputs
violating general position are rejected, not repaired.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .cells import CellComplex, VertexTuple, canonical_vertices
from .errors import (
    DegenerateGeometryError,
    NotAFaceError,
    NotEmbeddedError,
    NotEmbeddedLocallyError,
)

DET_EPS = 1e-12
ANGLE_EPS = 1e-9


def orientation_parity(ordering: Sequence[int]) -> int:
    """+1 if the ordering is an even permutation of its sorted form, else -1."""
    order = list(ordering)
    target = sorted(order)
    pos = {v: i for i, v in enumerate(order)}
    sign = 1
    for i, v in enumerate(target):
        j = pos[v]
        if j != i:
            other = order[i]
            order[i], order[j] = order[j], order[i]
            pos[other] = j
            pos[v] = i
            sign = -sign
    return sign


def natural_orientation_sign(points: Sequence[Sequence[float]]) -> int:
    """Sign of det(p1-p0, ..., pq-p0) for q+1 points in R^q."""
    P = np.asarray(points, dtype=np.float64)
    if P.shape[0] != P.shape[1] + 1:
        raise ValueError(f"need q+1 points in R^q, got shape {P.shape}")
    M = P[1:] - P[0]
    det = float(np.linalg.det(M))
    scale = float(np.prod([max(np.linalg.norm(r), 1e-300) for r in M]))
    if abs(det) < DET_EPS * scale:
        raise DegenerateGeometryError(f"determinant {det} below tolerance")
    return 1 if det > 0 else -1


def induced_orientation(
    ordering: Sequence[int], facet: Iterable[int]
) -> Tuple[VertexTuple, int]:
    """Orientation a facet inherits from an ordered cell.

    Deleting the missing vertex at position i contributes (-1)^i; the result
    is expressed as a sign against the facet's canonical sorted order.
    """
    facet_c = canonical_vertices(facet)
    order = list(ordering)
    missing = set(order) - set(facet_c)
    if len(missing) != 1 or set(facet_c) | missing != set(order):
        raise NotAFaceError(f"{facet_c} is not a facet of {tuple(order)}")
    v = missing.pop()
    i = order.index(v)
    sub = order[:i] + order[i + 1:]
    sign = (1 if i % 2 == 0 else -1) * orientation_parity(sub)
    return facet_c, sign


@dataclass
class EmbeddedComplex:
    """A cell complex plus vertex coordinates in R^ambient.

    The embedding itself (pairwise disjoint cell interiors) is trusted; load
    only runs cheap sanity checks: finite coordinates, no duplicate points,
    nondegenerate top-dimension cells.
    """

    complex: CellComplex
    coords: Dict[int, np.ndarray]
    ambient_dim: int
    _normals: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.coords = {int(v): np.asarray(p, dtype=np.float64) for v, p in self.coords.items()}
        seen: Dict[Tuple[float, ...], int] = {}
        for cid in self.complex.cell_ids(0):
            (v,) = self.complex.vertices_of(0, cid)
            p = self.coords.get(v)
            if p is None:
                raise NotEmbeddedError(f"vertex {v} has no coordinates")
            if p.shape != (self.ambient_dim,):
                raise NotEmbeddedError(
                    f"vertex {v}: expected {self.ambient_dim} coordinates, got {p.shape}"
                )
            if not np.all(np.isfinite(p)):
                raise NotEmbeddedError(f"vertex {v} has non-finite coordinates")
            key = tuple(p.tolist())
            if key in seen:
                raise NotEmbeddedError(f"vertices {seen[key]} and {v} share coordinates")
            seen[key] = v
        top = self.complex.dim
        if top >= 1:
            for cid in self.complex.cell_ids(top):
                if _affine_rank(self._points(top, cid)) < top:
                    raise NotEmbeddedError(
                        f"top cell {self.complex.vertices_of(top, cid)} is degenerate"
                    )

    def _points(self, q: int, cid: int) -> np.ndarray:
        return np.array([self.coords[v] for v in self.complex.vertices_of(q, cid)])

    def point(self, vertex: int) -> np.ndarray:
        return self.coords[vertex]

    def barycenter(self, q: int, cid: int) -> np.ndarray:
        return self._points(q, cid).mean(axis=0)

    def with_complex(self, sub: CellComplex) -> "EmbeddedComplex":
        """Wrap a subcomplex sharing these coordinates."""
        return EmbeddedComplex(sub, self.coords, self.ambient_dim)

    # -- oriented-cell machinery -------------------------------------------------

    def base_normal(self, d: int, cid: int) -> np.ndarray:
        """Unit normal of a d-cell in R^{d+1}, sign fixed by det([frame; n]) > 0."""
        key = (d, cid)
        cached = self._normals.get(key)
        if cached is not None:
            return cached
        frame = _independent_frame(self._points(d, cid), d)
        n = _unit_nullvector(frame)
        if np.linalg.det(np.vstack([frame, n])) < 0:
            n = -n
        self._normals[key] = n
        return n

    def orientation_toward(self, d: int, cid: int, point: np.ndarray) -> int:
        """Orientation bit of the d-cell whose oriented side faces ``point``."""
        n = self.base_normal(d, cid)
        b = self.barycenter(d, cid)
        side = float(np.dot(np.asarray(point, dtype=np.float64) - b, n))
        if side == 0.0:
            raise DegenerateGeometryError("sample point lies on the cell's hyperplane")
        sign = 1 if side > 0 else -1
        return sign if (d + 1) % 2 == 0 else -sign

    def signed_facet_incidence(self, d: int, cid: int, sign: int, facet: int) -> int:
        """Coefficient of a facet (in canonical orientation) in the integer
        boundary of the oriented cell (cid, sign)."""
        K = self.complex
        n = self.base_normal(d, cid)
        b_cell = self.barycenter(d, cid)
        tau_pts = self._points(d - 1, facet)
        w = tau_pts.mean(axis=0) - b_cell
        if d == 1:
            M = np.vstack([w, n])
        else:
            C = _independent_frame(tau_pts, d - 1)
            M = np.vstack([w, C, n])
        det = float(np.linalg.det(M))
        if det == 0.0:
            raise DegenerateGeometryError("degenerate facet frame")
        return sign * (1 if det > 0 else -1)


def _affine_rank(points: np.ndarray, tol: float = 1e-9) -> int:
    if points.shape[0] < 2:
        return 0
    M = points[1:] - points[0]
    scale = max(float(np.abs(M).max()), 1e-300)
    return int(np.linalg.matrix_rank(M, tol=tol * scale))


def _independent_frame(points: np.ndarray, q: int) -> np.ndarray:
    """q linearly independent edge vectors from the first vertex."""
    vecs = points[1:] - points[0]
    chosen: List[np.ndarray] = []
    basis: List[np.ndarray] = []
    for v in vecs:
        r = v.copy()
        for b in basis:
            r = r - np.dot(r, b) * b
        nr = np.linalg.norm(r)
        if nr > 1e-9 * max(np.linalg.norm(v), 1e-300):
            chosen.append(v)
            basis.append(r / nr)
            if len(chosen) == q:
                return np.array(chosen)
    raise DegenerateGeometryError(f"cell spans fewer than {q} dimensions")


def _unit_nullvector(frame: np.ndarray) -> np.ndarray:
    """Unit vector orthogonal to all rows of a q x (q+1) frame."""
    _, s, vt = np.linalg.svd(frame)
    n = vt[-1]
    if s.size and s[-1] > 1e-7 * s[0] * 0:  # rows always rank-deficient by one column
        pass
    return n / np.linalg.norm(n)


def _orthogonal_plane(points: np.ndarray, ambient: int) -> np.ndarray:
    """Orthonormal basis (2 rows) of the plane orthogonal to an affine hull."""
    if points.shape[0] < 2:
        return np.eye(ambient)[:2]
    A = points[1:] - points[0]
    _, s, vt = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-9 * max(s[0], 1e-300))) if s.size else 0
    comp = vt[rank:]
    if comp.shape[0] < 2:
        raise DegenerateGeometryError("hinge cell is degenerate; no orthogonal plane")
    return comp[:2]


@dataclass
class AngularOrder:
    """Circular order of the d-cofaces around a (d-1)-cell.

    ``cofaces[i]`` sits at ``angles[i]`` in the orthogonal plane spanned by
    ``plane`` (rows) through ``center``; sector i lies between cofaces i and
    i+1 (circularly) and ``occupied[i]`` says whether a (d+1)-cell fills it.
    For a single coface the list holds one full-circle sector.
    """

    center: np.ndarray
    plane: np.ndarray
    cofaces: List[int]
    angles: List[float]
    occupied: List[bool]
    radius: float

    def sector_point(self, i: int) -> np.ndarray:
        """A sample point inside sector i (angular bisector at mid radius)."""
        a0 = self.angles[i]
        a1 = self.angles[(i + 1) % len(self.angles)]
        if len(self.cofaces) == 1:
            mid = a0 + math.pi
        else:
            span = (a1 - a0) % (2 * math.pi)
            if span == 0.0:
                span = 2 * math.pi
            mid = a0 + span / 2.0
        direction = math.cos(mid) * self.plane[0] + math.sin(mid) * self.plane[1]
        return self.center + self.radius * direction


def angular_order_cofaces(emb: EmbeddedComplex, d: int, tau: int) -> AngularOrder:
    """Order the d-cofaces of a (d-1)-cell circularly and flag filled sectors."""
    K = emb.complex
    cofs = list(K.cofaces_of(d - 1, tau))
    if not cofs:
        raise ValueError(f"({d - 1})-cell {tau} has no {d}-cofaces")
    pts = emb._points(d - 1, tau)
    center = pts.mean(axis=0)
    plane = _orthogonal_plane(pts, emb.ambient_dim)
    entries = []
    radii = []
    for c in cofs:
        u = emb.barycenter(d, c) - center
        x = float(np.dot(u, plane[0]))
        y = float(np.dot(u, plane[1]))
        r = math.hypot(x, y)
        if r < 1e-12 * max(np.linalg.norm(u), 1e-300) or r == 0.0:
            raise DegenerateGeometryError(
                f"coface {c} projects to the center of the orthogonal plane"
            )
        entries.append((math.atan2(y, x), c))
        radii.append(r)
    entries.sort()
    angles = [a for a, _ in entries]
    ordered = [c for _, c in entries]
    k = len(ordered)
    for i in range(k):
        gap = (angles[(i + 1) % k] - angles[i]) % (2 * math.pi)
        if k > 1 and (gap < ANGLE_EPS or gap > 2 * math.pi - ANGLE_EPS):
            raise NotEmbeddedLocallyError(
                f"cofaces {ordered[i]} and {ordered[(i + 1) % k]} are angularly coincident"
            )
    occupied = []
    for i in range(k):
        if k == 1:
            occupied.append(False)
            continue
        a, b = ordered[i], ordered[(i + 1) % k]
        shared = set(K.cofaces_of(d, a)) & set(K.cofaces_of(d, b))
        occupied.append(bool(shared))
    return AngularOrder(center, plane, ordered, angles, occupied, float(np.mean(radii)))
