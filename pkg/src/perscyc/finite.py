"""Minimal persistent d-cycles of finite intervals on weak (d+1)-pseudomanifolds.

The finite-interval problem reduces to a minimal cut on a dual flow network:
graph vertices are the (d+1)-cells of the working complex (plus a dummy
"infinite" vertex absorbing the free sides of boundary d-cells), graph edges
are the d-cells, capacities are cell weights for cells no younger than the
birth step and infinite otherwise.  The source is the dual of the death
cell; the sinks are the duals of (d+1)-cells younger than the death step
together with the infinite vertex.  The d-chain dual to a minimal cut is a
minimal persistent cycle of the interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .cells import CellComplex, Chain
from .errors import (
    InternalAssertionError,
    IntervalNotInDiagramError,
    MissingWeightError,
    NoFiniteCutError,
    NotWeakPseudomanifoldError,
)
from .filtration import Diagram, Filtration, Interval, compute_pairs
from .mincut import INF, Cut, FlowNetwork, cut_edges, min_cut


@dataclass
class FiniteDualGraph:
    """Dual graph of a weak (d+1)-pseudomanifold for the finite-interval cut.

    Vertex i < num_solid is dual to the (d+1)-cell with id i of ``ktilde``;
    ``phi`` names the infinite vertex when present.  The edge dual to d-cell
    e is ``edge_endpoints[e]``.
    """

    ktilde: CellComplex
    d: int
    num_solid: int
    phi: Optional[int]
    edge_endpoints: List[Tuple[int, int]]

    @property
    def num_vertices(self) -> int:
        return self.num_solid + (1 if self.phi is not None else 0)


def dual_graph_fin(ktilde: CellComplex, d: int) -> FiniteDualGraph:
    """Build the dual graph; boundary d-cells connect to the infinite vertex."""
    if not ktilde.is_weak_pseudomanifold(d):
        raise NotWeakPseudomanifoldError(f"some {d}-cell has more than two ({d + 1})-cofaces")
    m = ktilde.num_cells(d + 1)
    has_boundary = any(len(ktilde.cofaces_of(d, e)) < 2 for e in ktilde.cell_ids(d))
    phi = m if has_boundary else None
    endpoints: List[Tuple[int, int]] = []
    for e in ktilde.cell_ids(d):
        cof = ktilde.cofaces_of(d, e)
        if len(cof) == 2:
            endpoints.append((cof[0], cof[1]))
        elif len(cof) == 1:
            endpoints.append((cof[0], phi))
        else:
            endpoints.append((phi, phi))
    return FiniteDualGraph(ktilde, d, m, phi, endpoints)


@dataclass
class FiniteCycleSetup:
    """Flow network plus the id maps needed to read a cut as a chain."""

    root: CellComplex
    filtration: Filtration
    interval: Interval
    dual: FiniteDualGraph
    network: FlowNetwork

    def chain_for_cut(self, cut: Cut) -> Chain:
        """Chain (in root-complex ids) dual to the edges across a cut."""
        ktilde = self.dual.ktilde
        d = self.dual.d
        ids = [ktilde.parent_id(d, e) for e in cut_edges(self.network, cut)]
        return self.root.chain(d, ids)


def setup_finite_instance(
    K: CellComplex,
    d: int,
    F: Filtration,
    interval: Interval,
    diagram: Optional[Diagram] = None,
) -> FiniteCycleSetup:
    """Validate the inputs and build the dual flow network for one interval."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if interval.dim != d:
        raise ValueError(f"interval dimension {interval.dim} does not match d={d}")
    if not interval.is_finite:
        raise IntervalNotInDiagramError(f"{interval} is not a finite interval")
    if not K.is_weak_pseudomanifold(d):
        raise NotWeakPseudomanifoldError(f"some {d}-cell has more than two ({d + 1})-cofaces")
    if diagram is None:
        diagram = compute_pairs(K, F)
    if interval not in diagram:
        raise IntervalNotInDiagramError(f"{interval} not in the diagram of the filtration")
    beta, delta = interval.birth, interval.death

    qd, sigma_delta = F.cell_at(delta)
    if qd != d + 1:
        raise InternalAssertionError("death cell has unexpected dimension")
    component = K.component_containing(d + 1, sigma_delta)
    ktilde = K.closure([(d + 1, c) for c in component])
    dual = dual_graph_fin(ktilde, d)

    source_vertex = None
    for c in ktilde.cell_ids(d + 1):
        if ktilde.parent_id(d + 1, c) == sigma_delta:
            source_vertex = c
            break
    assert source_vertex is not None

    sinks = set()
    for c in ktilde.cell_ids(d + 1):
        if F.index_of(d + 1, ktilde.parent_id(d + 1, c)) > delta:
            sinks.add(c)
    if dual.phi is not None:
        sinks.add(dual.phi)
    if not sinks:
        raise InternalAssertionError(
            "empty sink set: the death cell would have to be a positive cell"
        )

    net = FlowNetwork(dual.num_vertices, [source_vertex], sinks)
    for e in ktilde.cell_ids(d):
        u, v = dual.edge_endpoints[e]
        parent = ktilde.parent_id(d, e)
        if F.index_of(d, parent) <= beta:
            w = K.weight_of(d, parent)
            if w is None:
                raise MissingWeightError(f"{d}-cell {parent} needs a weight")
            net.add_edge(u, v, w)
        else:
            net.add_edge(u, v, INF)
    return FiniteCycleSetup(K, F, interval, dual, net)


def min_pers_cyc_fin(
    K: CellComplex,
    d: int,
    F: Filtration,
    interval: Interval,
    diagram: Optional[Diagram] = None,
) -> Chain:
    """Minimal-weight persistent d-cycle of a finite interval."""
    setup = setup_finite_instance(K, d, F, interval, diagram)
    cut = min_cut(setup.network)
    if not cut.is_finite:
        raise NoFiniteCutError(
            "no finite-capacity cut; the interval cannot be in the diagram"
        )
    return setup.chain_for_cut(cut)
