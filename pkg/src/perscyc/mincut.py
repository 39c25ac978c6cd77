"""Exact minimal s-t cuts on undirected networks.

Networks allow parallel edges (merged by capacity summation before the flow
computation, since identical endpoints always cross together) and
infinite capacities.  Infinity is realized as ``W + 1`` where ``W`` is the
sum of all finite capacities, so a finite-capacity cut can never be beaten
by one crossing an "infinite" edge; any returned capacity above ``W`` is
reported as ``math.inf``.  Multi-source/multi-sink inputs are contracted
through a super source and super sink.

The max-flow engine is Dinic's algorithm over flat arrays, compiled with
numba under the default backend.  Any exact max-flow algorithm satisfies the
contract; only the capacity value is deterministic, not the cut itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Tuple

import numpy as np

from ._backend import njit
from .errors import InvalidCutError, InvalidNetworkError, NegativeWeightError

INF = math.inf


class FlowNetwork:
    """Undirected flow network with designated source and sink vertex sets."""

    def __init__(self, num_vertices: int, sources: Iterable[int], sinks: Iterable[int]):
        self.num_vertices = int(num_vertices)
        self.sources: FrozenSet[int] = frozenset(int(v) for v in sources)
        self.sinks: FrozenSet[int] = frozenset(int(v) for v in sinks)
        self.edges: List[Tuple[int, int, float]] = []
        if not self.sources or not self.sinks:
            raise InvalidNetworkError("source and sink sets must be non-empty")
        if self.sources & self.sinks:
            raise InvalidNetworkError("source and sink sets must be disjoint")
        for v in self.sources | self.sinks:
            if not (0 <= v < self.num_vertices):
                raise InvalidNetworkError(f"terminal vertex {v} out of range")

    def add_edge(self, u: int, v: int, capacity: float) -> int:
        """Add one undirected edge; returns its id.  Parallel edges allowed."""
        u, v = int(u), int(v)
        if not (0 <= u < self.num_vertices and 0 <= v < self.num_vertices):
            raise InvalidNetworkError(f"edge ({u},{v}) out of range")
        cap = float(capacity)
        if cap != INF and (not math.isfinite(cap) or cap < 0.0):
            raise NegativeWeightError(f"capacity must be >= 0 or inf, got {capacity}")
        self.edges.append((u, v, cap))
        return len(self.edges) - 1

    def finite_capacity_sum(self) -> float:
        return sum(c for _, _, c in self.edges if c != INF)


@dataclass(frozen=True)
class Cut:
    """A source/sink respecting bipartition and its capacity."""

    source_side: FrozenSet[int]
    sink_side: FrozenSet[int]
    capacity: float  # math.inf when no finite cut exists
    flow_value: float = 0.0

    @property
    def is_finite(self) -> bool:
        return self.capacity != INF


@njit
def _dinic(n, eu, ev, ecap, s, t, eps):
    """Max flow on an undirected graph; returns (flow, residual reachability).

    Arc 2i and 2i+1 realize undirected edge i; pushing on one raises the
    residual of the other.
    """
    m = eu.shape[0]
    to = np.empty(2 * m, np.int64)
    cap = np.empty(2 * m, np.float64)
    nxt = np.empty(2 * m, np.int64)
    head = np.full(n, -1, np.int64)
    for i in range(m):
        a = 2 * i
        b = a + 1
        to[a] = ev[i]
        cap[a] = ecap[i]
        nxt[a] = head[eu[i]]
        head[eu[i]] = a
        to[b] = eu[i]
        cap[b] = ecap[i]
        nxt[b] = head[ev[i]]
        head[ev[i]] = b
    level = np.empty(n, np.int64)
    iters = np.empty(n, np.int64)
    queue = np.empty(n, np.int64)
    patharc = np.empty(n + 1, np.int64)
    total = 0.0
    while True:
        for i in range(n):
            level[i] = -1
        level[s] = 0
        queue[0] = s
        qh = 0
        qt = 1
        while qh < qt:
            u = queue[qh]
            qh += 1
            e = head[u]
            while e != -1:
                v = to[e]
                if cap[e] > eps and level[v] == -1:
                    level[v] = level[u] + 1
                    queue[qt] = v
                    qt += 1
                e = nxt[e]
        if level[t] == -1:
            break
        for i in range(n):
            iters[i] = head[i]
        v = s
        plen = 0
        while True:
            if v == t:
                bottleneck = np.inf
                for k in range(plen):
                    if cap[patharc[k]] < bottleneck:
                        bottleneck = cap[patharc[k]]
                for k in range(plen):
                    a = patharc[k]
                    cap[a] -= bottleneck
                    cap[a ^ 1] += bottleneck
                total += bottleneck
                # retreat to just before the first saturated arc
                k2 = 0
                while k2 < plen and cap[patharc[k2]] > eps:
                    k2 += 1
                plen = k2
                v = s if plen == 0 else to[patharc[plen - 1]]
                continue
            e = iters[v]
            advanced = False
            while e != -1:
                w = to[e]
                if cap[e] > eps and level[w] == level[v] + 1:
                    patharc[plen] = e
                    plen += 1
                    v = w
                    advanced = True
                    break
                e = nxt[e]
                iters[v] = e
            if not advanced:
                if plen == 0:
                    break  # source exhausted; phase over
                level[v] = -1  # dead this phase
                plen -= 1
                back = patharc[plen]
                v = to[back ^ 1]
                iters[v] = nxt[iters[v]]
    reach = np.zeros(n, np.bool_)
    reach[s] = True
    queue[0] = s
    qh = 0
    qt = 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        e = head[u]
        while e != -1:
            v = to[e]
            if cap[e] > eps and not reach[v]:
                reach[v] = True
                queue[qt] = v
                qt += 1
            e = nxt[e]
    return total, reach


def _merged_edges(net: FlowNetwork, big: float) -> Dict[Tuple[int, int], float]:
    merged: Dict[Tuple[int, int], float] = {}
    for u, v, c in net.edges:
        if u == v:
            continue  # self-loops never cross a cut
        key = (u, v) if u < v else (v, u)
        cur = merged.get(key, 0.0)
        if c == INF or cur >= big:
            merged[key] = big
        else:
            merged[key] = min(cur + c, big)
    return merged


def min_cut(net: FlowNetwork) -> Cut:
    """A cut of globally minimal capacity among source/sink respecting cuts."""
    n0 = net.num_vertices
    W = net.finite_capacity_sum()
    big = W + 1.0
    merged = _merged_edges(net, big)
    s_star, t_star = n0, n0 + 1
    eu: List[int] = []
    ev: List[int] = []
    ecap: List[float] = []
    for (u, v), c in merged.items():
        eu.append(u)
        ev.append(v)
        ecap.append(c)
    for s in net.sources:
        eu.append(s_star)
        ev.append(s)
        ecap.append(big)
    for t in net.sinks:
        eu.append(t)
        ev.append(t_star)
        ecap.append(big)
    eps = max(big, 1.0) * 1e-13
    flow, reach = _dinic(
        n0 + 2,
        np.asarray(eu, dtype=np.int64),
        np.asarray(ev, dtype=np.int64),
        np.asarray(ecap, dtype=np.float64),
        s_star,
        t_star,
        eps,
    )
    source_side = frozenset(v for v in range(n0) if reach[v])
    sink_side = frozenset(v for v in range(n0) if not reach[v])
    if flow > W + 0.5:
        # every cut crosses an infinite edge; the bipartition is meaningless
        return Cut(source_side, sink_side, INF, float(flow))
    capacity = 0.0
    for u, v, c in net.edges:
        if u != v and (u in source_side) != (v in source_side):
            if c == INF:
                capacity = INF
                break
            capacity += c
    if capacity != INF and capacity > W:
        capacity = INF
    return Cut(source_side, sink_side, capacity, float(flow))


def cut_edges(net: FlowNetwork, cut: Cut) -> List[int]:
    """Ids of the original (pre-merge) edges crossing the cut."""
    if cut.source_side & cut.sink_side:
        raise InvalidCutError("cut sides overlap")
    if cut.source_side | cut.sink_side != frozenset(range(net.num_vertices)):
        raise InvalidCutError("cut sides do not cover the vertex set")
    if not net.sources <= cut.source_side or not net.sinks <= cut.sink_side:
        raise InvalidCutError("cut does not respect sources/sinks")
    out = []
    for i, (u, v, _) in enumerate(net.edges):
        if u != v and (u in cut.source_side) != (v in cut.source_side):
            out.append(i)
    return out


def cut_capacity(net: FlowNetwork, source_side: Iterable[int]) -> float:
    """Capacity of an arbitrary source-respecting bipartition (inf-aware)."""
    S = frozenset(source_side)
    total = 0.0
    for u, v, c in net.edges:
        if u != v and (u in S) != (v in S):
            if c == INF:
                return INF
            total += c
    return total
