"""Deterministic max-flow / min-cut on small capacitated networks.

Shortest augmenting paths (Edmonds-Karp) with a fixed arc scan order:
identical inputs give identical flows, decompositions and cuts.  Arithmetic
is exact whenever capacities are ints/Fractions ("exact" mode); "float" mode
treats residual capacity below ``FLOAT_RESIDUAL`` as exhausted.  Scale
target is desk-sized networks, not performance.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import MalformedNetwork
from .metric import Number

#: Marker for an arc without its own capacity limit.  Such arcs are replaced
#: at construction by the sum of all source-adjacent capacities, which no
#: flow can exceed.
UNBOUNDED = None

#: Residual capacity below this is treated as zero in float mode.
FLOAT_RESIDUAL = 1e-12


@dataclass(frozen=True)
class FlowNetwork:
    """Directed capacitated network with distinguished source and sink.

    Arcs are ``(tail, head, capacity)`` with capacity a nonnegative number
    or :data:`UNBOUNDED`.  No arc may enter the source or leave the sink.
    """

    num_nodes: int
    source: int
    sink: int
    arcs: tuple
    mode: str = "exact"

    def __post_init__(self):
        if self.mode not in ("exact", "float"):
            raise MalformedNetwork(f"unknown mode {self.mode!r}")
        if not 0 <= self.source < self.num_nodes or not 0 <= self.sink < self.num_nodes:
            raise MalformedNetwork("source/sink out of range")
        if self.source == self.sink:
            raise MalformedNetwork("source and sink must differ")
        arcs = tuple((int(u), int(v), c) for u, v, c in self.arcs)
        source_out = []
        for k, (u, v, c) in enumerate(arcs):
            if not 0 <= u < self.num_nodes or not 0 <= v < self.num_nodes:
                raise MalformedNetwork(f"arc {k} endpoint out of range")
            if u == v:
                raise MalformedNetwork(f"arc {k} is a self-loop")
            if v == self.source:
                raise MalformedNetwork(f"arc {k} enters the source")
            if u == self.sink:
                raise MalformedNetwork(f"arc {k} leaves the sink")
            if c is not UNBOUNDED:
                if c < 0:
                    raise MalformedNetwork(f"arc {k} has negative capacity {c}")
                if u == self.source:
                    source_out.append(c)
            elif u == self.source:
                raise MalformedNetwork(f"arc {k} out of the source must have finite capacity")
        bound = sum(source_out)
        arcs = tuple((u, v, bound if c is UNBOUNDED else c) for u, v, c in arcs)
        object.__setattr__(self, "arcs", arcs)

    @property
    def residual_floor(self) -> float:
        return 0 if self.mode == "exact" else FLOAT_RESIDUAL


@dataclass(frozen=True)
class FlowResult:
    """A maximum flow with its min-cut certificate.

    ``cut_source_side`` is the residual-reachable node set S (source in,
    sink out); its outgoing capacity equals ``value``.
    """

    value: Number
    arc_flows: tuple
    cut_source_side: frozenset


def max_flow(net: FlowNetwork) -> FlowResult:
    """Maximum flow by shortest augmenting paths, lexicographic arc order."""
    arcs = net.arcs
    floor = net.residual_floor
    adj = [[] for _ in range(net.num_nodes)]
    for k, (u, v, _c) in enumerate(arcs):
        adj[u].append((k, True))
        adj[v].append((k, False))
    flows = [0] * len(arcs)
    s, t = net.source, net.sink

    def residual(k: int, forward: bool) -> Number:
        if forward:
            return arcs[k][2] - flows[k]
        return flows[k]

    while True:
        parent: list = [None] * net.num_nodes
        parent[s] = (s, -1, True)
        queue = deque([s])
        while queue and parent[t] is None:
            u = queue.popleft()
            for k, forward in adj[u]:
                v = arcs[k][1] if forward else arcs[k][0]
                if parent[v] is None and residual(k, forward) > floor:
                    parent[v] = (u, k, forward)
                    queue.append(v)
        if parent[t] is None:
            reachable = frozenset(i for i in range(net.num_nodes) if parent[i] is not None)
            value = sum(flows[k] for k, (u, _v, _c) in enumerate(arcs) if u == s)
            return FlowResult(value, tuple(flows), reachable)
        bottleneck = None
        v = t
        while v != s:
            u, k, forward = parent[v]
            r = residual(k, forward)
            if bottleneck is None or r < bottleneck:
                bottleneck = r
            v = u
        v = t
        while v != s:
            u, k, forward = parent[v]
            flows[k] = flows[k] + bottleneck if forward else flows[k] - bottleneck
            v = u


def min_cut(net: FlowNetwork) -> frozenset:
    """Source side S of a minimum cut: residual-reachable nodes after max flow."""
    return max_flow(net).cut_source_side


def cut_capacity(net: FlowNetwork, source_side: Sequence[int]) -> Number:
    """Capacity of the cut (S, S^c); used as the duality certificate."""
    inside = set(source_side)
    return sum(c for u, v, c in net.arcs if u in inside and v not in inside)
