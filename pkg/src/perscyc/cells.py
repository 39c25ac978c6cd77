"""Weighted cell complexes with face/coface incidence.

Cells are identified by their canonical vertex tuple (strictly increasing
vertex ids) and carry small integer ids per dimension.  The structure is
unoriented; chains are Z2 chains (sets of cell ids) and orientation
bookkeeping lives in :mod:`perscyc.geometry`.  Simplicial cells derive their
facets from the drop-one-vertex rule; non-simplicial cells (cubes, squares)
are inserted with explicit facet lists, and every downstream operation works
off the stored incidence only.

A complex is built single-writer and treated as immutable afterwards; all
algorithms only read it.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .errors import (
    ChainNotInComplexError,
    DimZeroError,
    DuplicateCellError,
    InvalidCellError,
    MissingFaceError,
    MissingWeightError,
    NegativeWeightError,
)

VertexTuple = Tuple[int, ...]
CellRef = Tuple[int, int]  # (dimension, cell id)


def canonical_vertices(vertices: Iterable[int]) -> VertexTuple:
    """Sort a vertex list into canonical strictly increasing form."""
    vs = tuple(sorted(vertices))
    if not vs:
        raise InvalidCellError("a cell needs at least one vertex")
    for v in vs:
        if not isinstance(v, (int,)) or isinstance(v, bool) or v < 0:
            raise InvalidCellError(f"vertex ids must be non-negative integers, got {v!r}")
    for a, b in zip(vs, vs[1:]):
        if a == b:
            raise InvalidCellError(f"duplicate vertex {a} in cell {vs}")
    return vs


def simplex_facets(vertices: VertexTuple) -> List[VertexTuple]:
    """All drop-one-vertex faces of a simplex, in vertex order."""
    return [vertices[:i] + vertices[i + 1:] for i in range(len(vertices))]


@dataclass(frozen=True)
class Chain:
    """A Z2 chain: a set of same-dimension cell ids.

    Addition is symmetric difference, written ``a ^ b``.
    """

    dim: int
    cells: frozenset

    def __xor__(self, other: "Chain") -> "Chain":
        if self.dim != other.dim:
            raise ValueError(f"cannot add chains of dim {self.dim} and {other.dim}")
        return Chain(self.dim, self.cells ^ other.cells)

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.cells))

    def __contains__(self, cid: int) -> bool:
        return cid in self.cells

    def __bool__(self) -> bool:
        return bool(self.cells)

    @staticmethod
    def empty(dim: int) -> "Chain":
        return Chain(dim, frozenset())


class UnionFind:
    """Disjoint sets over 0..n-1 with path compression and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]

    def groups(self) -> List[List[int]]:
        by_root: Dict[int, List[int]] = {}
        for x in range(len(self.parent)):
            by_root.setdefault(self.find(x), []).append(x)
        return [sorted(g) for g in sorted(by_root.values(), key=lambda g: g[0])]


class CellComplex:
    """A finite cell complex closed under faces.

    Per dimension q the complex stores the cell table (id -> vertex tuple),
    the reverse lookup, explicit facet ids, (q+1)-coface ids, and optional
    non-negative weights.  Complexes produced by :meth:`subcomplex` remember
    the originating ids, so chains computed on a working copy translate back
    to the root complex without lookups.
    """

    def __init__(self) -> None:
        self._cells: List[List[VertexTuple]] = []
        self._ids: List[Dict[VertexTuple, int]] = []
        self._facets: List[List[Tuple[int, ...]]] = []
        self._cofaces: List[List[List[int]]] = []
        self._weights: List[Dict[int, float]] = []
        self._parents: Optional[List[List[int]]] = None

    # -- construction ----------------------------------------------------------

    def _ensure_dim(self, q: int) -> None:
        while len(self._cells) <= q:
            self._cells.append([])
            self._ids.append({})
            self._facets.append([])
            self._cofaces.append([])
            self._weights.append({})

    def add_cell(
        self,
        vertices: Iterable[int],
        weight: Optional[float] = None,
        facets: Optional[Sequence[int]] = None,
        dim: Optional[int] = None,
    ) -> int:
        """Insert one cell whose proper faces are already present.

        ``facets`` lists the ids of the (q-1)-faces for non-simplicial cells
        (which must also pass ``dim``, e.g. 2 for a four-vertex square); when
        omitted the simplicial drop-one-vertex rule is used.
        """
        verts = canonical_vertices(vertices)
        if dim is None:
            q = len(verts) - 1
        else:
            q = int(dim)
            if facets is None and q != len(verts) - 1:
                raise InvalidCellError("simplicial cells must have dim = |vertices| - 1")
        self._ensure_dim(q)
        if verts in self._ids[q]:
            raise DuplicateCellError(f"cell {verts} already present")
        if q == 0:
            facet_ids: Tuple[int, ...] = ()
        elif facets is None:
            facet_ids = tuple(self._lookup_facets(q, verts))
        else:
            facet_ids = tuple(int(f) for f in facets)
            for f in facet_ids:
                if not (0 <= f < len(self._cells[q - 1])):
                    raise MissingFaceError(f"facet id {f} of {verts} does not exist")
        cid = len(self._cells[q])
        self._cells[q].append(verts)
        self._ids[q][verts] = cid
        self._facets[q].append(facet_ids)
        self._cofaces[q].append([])
        for f in facet_ids:
            self._cofaces[q - 1][f].append(cid)
        if weight is not None:
            self.set_weight(q, cid, weight)
        return cid

    def _lookup_facets(self, q: int, verts: VertexTuple) -> List[int]:
        ids = []
        for face in simplex_facets(verts):
            fid = self._ids[q - 1].get(face) if q - 1 < len(self._ids) else None
            if fid is None:
                raise MissingFaceError(f"facet {face} of {verts} is missing")
            ids.append(fid)
        return ids

    def add_simplex_recursive(self, vertices: Iterable[int], weight: Optional[float] = None) -> int:
        """Insert a simplex together with any missing faces (test helper)."""
        verts = canonical_vertices(vertices)
        for k in range(1, len(verts)):
            for face_idx in _subsets(verts, k):
                if not self.has_cell(face_idx):
                    self.add_cell(face_idx)
        if self.has_cell(verts):
            cid = self.id_of(len(verts) - 1, verts)
            if weight is not None:
                self.set_weight(len(verts) - 1, cid, weight)
            return cid
        return self.add_cell(verts, weight=weight)

    def set_weight(self, q: int, cid: int, weight: float) -> None:
        w = float(weight)
        if not math.isfinite(w) or w < 0.0:
            raise NegativeWeightError(f"weight of cell {(q, cid)} must be finite and >= 0, got {weight}")
        self._weights[q][cid] = w

    # -- basic queries -----------------------------------------------------------

    @property
    def dim(self) -> int:
        for q in range(len(self._cells) - 1, -1, -1):
            if self._cells[q]:
                return q
        return -1

    def num_cells(self, q: int) -> int:
        if 0 <= q < len(self._cells):
            return len(self._cells[q])
        return 0

    def total_cells(self) -> int:
        return sum(len(t) for t in self._cells)

    def cell_ids(self, q: int) -> range:
        return range(self.num_cells(q))

    def all_cells(self) -> Iterator[CellRef]:
        for q in range(len(self._cells)):
            for cid in range(len(self._cells[q])):
                yield (q, cid)

    def vertices_of(self, q: int, cid: int) -> VertexTuple:
        return self._cells[q][cid]

    def id_of(self, q: int, vertices: Iterable[int]) -> Optional[int]:
        if not (0 <= q < len(self._ids)):
            return None
        return self._ids[q].get(canonical_vertices(vertices))

    def has_cell(self, vertices: Iterable[int], dim: Optional[int] = None) -> bool:
        verts = canonical_vertices(vertices)
        q = len(verts) - 1 if dim is None else dim
        return 0 <= q < len(self._ids) and verts in self._ids[q]

    def facets_of(self, q: int, cid: int) -> Tuple[int, ...]:
        return self._facets[q][cid]

    def cofaces_of(self, q: int, cid: int) -> List[int]:
        return self._cofaces[q][cid]

    def weight_of(self, q: int, cid: int) -> Optional[float]:
        return self._weights[q].get(cid)

    def parent_id(self, q: int, cid: int) -> int:
        if self._parents is None:
            return cid
        return self._parents[q][cid]

    # -- chains ------------------------------------------------------------------

    def chain(self, dim: int, cells: Iterable[int]) -> Chain:
        ids = frozenset(int(c) for c in cells)
        n = self.num_cells(dim)
        for c in ids:
            if not (0 <= c < n):
                raise ChainNotInComplexError(f"cell id {c} not a {dim}-cell")
        return Chain(dim, ids)

    def chain_from_vertices(self, dim: int, vertex_lists: Iterable[Iterable[int]]) -> Chain:
        ids = set()
        for verts in vertex_lists:
            cid = self.id_of(dim, verts)
            if cid is None:
                raise ChainNotInComplexError(f"no {dim}-cell {tuple(sorted(verts))}")
            ids.add(cid)
        return Chain(dim, frozenset(ids))

    def chain_weight(self, chain: Chain) -> float:
        total = 0.0
        for cid in chain.cells:
            w = self.weight_of(chain.dim, cid)
            if w is None:
                raise MissingWeightError(f"{chain.dim}-cell {cid} has no weight")
            total += w
        return total

    def parent_chain(self, chain: Chain) -> Chain:
        """Map a chain of this complex into the root complex's id space."""
        if self._parents is None:
            return chain
        return Chain(chain.dim, frozenset(self._parents[chain.dim][c] for c in chain.cells))

    def local_chain(self, chain: Chain, ancestor: "CellComplex") -> Chain:
        """Translate an ancestor-id chain into this complex's ids."""
        ids = set()
        for cid in chain.cells:
            local = self.id_of(chain.dim, ancestor.vertices_of(chain.dim, cid))
            if local is None:
                raise ChainNotInComplexError(
                    f"{chain.dim}-cell {ancestor.vertices_of(chain.dim, cid)} not in subcomplex"
                )
            ids.add(local)
        return Chain(chain.dim, frozenset(ids))

    def boundary_chain(self, chain: Chain) -> Chain:
        """Z2 boundary: the facets that occur an odd number of times."""
        if chain.dim == 0:
            raise DimZeroError("0-chains have no boundary")
        counts: Counter = Counter()
        for cid in chain.cells:
            counts.update(self._facets[chain.dim][cid])
        return Chain(chain.dim - 1, frozenset(f for f, c in counts.items() if c % 2))

    # -- connectivity ------------------------------------------------------------

    def q_connected_components(self, q: int) -> List[List[int]]:
        """Partition of q-cells under "share a (q-1)-face"."""
        n = self.num_cells(q)
        if n == 0:
            return []
        uf = UnionFind(n)
        for tau in self.cell_ids(q - 1) if q >= 1 else ():
            cofs = self._cofaces[q - 1][tau]
            for a, b in zip(cofs, cofs[1:]):
                uf.union(a, b)
        return uf.groups()

    def component_containing(self, q: int, cid: int) -> List[int]:
        """The q-connected component of one q-cell (breadth first)."""
        seen = {cid}
        queue = deque([cid])
        while queue:
            cur = queue.popleft()
            for tau in self._facets[q][cur]:
                for nb in self._cofaces[q - 1][tau]:
                    if nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
        return sorted(seen)

    # -- subcomplexes ------------------------------------------------------------

    def closure_refs(self, seeds: Iterable[CellRef]) -> Set[CellRef]:
        """All faces (recursively) of the given cells, including them."""
        out: Set[CellRef] = set()
        stack = [(int(q), int(c)) for q, c in seeds]
        for q, c in stack:
            if not (0 <= q < len(self._cells)) or not (0 <= c < len(self._cells[q])):
                raise ChainNotInComplexError(f"no cell {(q, c)}")
        while stack:
            q, c = stack.pop()
            if (q, c) in out:
                continue
            out.add((q, c))
            for f in self._facets[q][c]:
                stack.append((q - 1, f))
        return out

    def subcomplex(self, refs: Iterable[CellRef]) -> "CellComplex":
        """Materialize the subcomplex on a face-closed set of cells.

        Weights are inherited and new cells remember the id they had in the
        root complex (composed through nested subcomplexes).
        """
        wanted = sorted(set(refs))
        sub = CellComplex()
        id_map: Dict[CellRef, int] = {}
        parents: List[List[int]] = []
        for q, c in wanted:
            facet_ids = None
            if q > 0:
                facet_ids = []
                for f in self._facets[q][c]:
                    new_f = id_map.get((q - 1, f))
                    if new_f is None:
                        raise MissingFaceError(f"cell set not face-closed at {(q, c)}")
                    facet_ids.append(new_f)
            new_id = sub.add_cell(self._cells[q][c], facets=facet_ids, dim=q)
            id_map[(q, c)] = new_id
            w = self._weights[q].get(c)
            if w is not None:
                sub.set_weight(q, new_id, w)
            while len(parents) <= q:
                parents.append([])
            parents[q].append(self.parent_id(q, c))
        sub._parents = parents
        return sub

    def closure(self, seeds: Iterable[CellRef]) -> "CellComplex":
        """Smallest subcomplex containing the given cells."""
        return self.subcomplex(self.closure_refs(seeds))

    # -- pruning and pseudomanifold test -------------------------------------------

    def prune(self, d: int) -> "CellComplex":
        """Iteratively delete dangled d-cells (and their cofaces).

        A d-cell is dangled when one of its (d-1)-faces has no other d-coface;
        such cells lie in no d-cycle.  Purely combinatorial; does not require
        the complex to be a weak pseudomanifold.
        """
        if d < 1:
            raise ValueError("prune needs d >= 1")
        nd = self.num_cells(d)
        dead: Set[CellRef] = set()
        deg = [len(self._cofaces[d - 1][t]) for t in self.cell_ids(d - 1)]

        def remove_upward(q: int, cid: int) -> None:
            stack = [(q, cid)]
            while stack:
                qq, cc = stack.pop()
                if (qq, cc) in dead:
                    continue
                dead.add((qq, cc))
                if qq + 1 < len(self._cells):
                    for up in self._cofaces[qq][cc]:
                        stack.append((qq + 1, up))

        def sole_live_coface(tau: int) -> Optional[int]:
            live = [c for c in self._cofaces[d - 1][tau] if (d, c) not in dead]
            return live[0] if len(live) == 1 else None

        queue = deque()
        for cid in range(nd):
            if any(deg[t] == 1 for t in self._facets[d][cid]):
                queue.append(cid)
        while queue:
            cid = queue.popleft()
            if (d, cid) in dead:
                continue
            if not any(
                deg[t] == 1 and sole_live_coface(t) == cid for t in self._facets[d][cid]
            ):
                continue
            remove_upward(d, cid)
            for t in self._facets[d][cid]:
                deg[t] -= 1
                if deg[t] == 1:
                    nxt = sole_live_coface(t)
                    if nxt is not None:
                        queue.append(nxt)
        keep = [ref for ref in self.all_cells() if ref not in dead]
        return self.subcomplex(keep)

    def is_weak_pseudomanifold(self, d: int) -> bool:
        """True if every d-cell has at most two (d+1)-cofaces."""
        return all(len(self._cofaces[d][c]) <= 2 for c in self.cell_ids(d))

    def __repr__(self) -> str:
        counts = ",".join(str(self.num_cells(q)) for q in range(len(self._cells)))
        return f"CellComplex(cells per dim: [{counts}])"


def _subsets(verts: VertexTuple, k: int) -> Iterator[VertexTuple]:
    from itertools import combinations

    return combinations(verts, k)
