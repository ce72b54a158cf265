"""Directed acyclic multicast networks and edge-subset minimum cuts.

Every edge has unit capacity. A cut between the source and an edge subset
``A`` is computed on an auxiliary graph in which each ``e`` in ``A`` is split
at a fresh node ``t_e`` and every ``t_e`` feeds a super sink through an edge
that no minimum cut can afford.
"""

from __future__ import annotations

import itertools
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from graphlib import CycleError, TopologicalSorter

from snc.errors import EmptySet, SecurityLevelTooHigh, ValidationError

EdgeSet = tuple[str, ...]


@dataclass(frozen=True)
class Edge:
    id: str
    tail: str
    head: str


class Network:
    """A single-source DAG with a set of sinks.

    Edge order is the order the edges were given in; every matrix row and
    column indexed by edges follows it. A topological order is computed
    separately and used only for evaluation.
    """

    def __init__(self, nodes: Iterable[str], edges: Iterable[Edge | tuple[str, str, str]],
                 source: str, sinks: Iterable[str]):
        self.nodes: tuple[str, ...] = tuple(nodes)
        self.edges: tuple[Edge, ...] = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
        self.source = source
        self.sinks: tuple[str, ...] = tuple(sinks)
        self._validate()
        self.edge_index = {e.id: i for i, e in enumerate(self.edges)}
        self._edge = {e.id: e for e in self.edges}
        self._in: dict[str, list[str]] = {v: [] for v in self.nodes}
        self._out: dict[str, list[str]] = {v: [] for v in self.nodes}
        for e in self.edges:
            self._out[e.tail].append(e.id)
            self._in[e.head].append(e.id)
        self.topological_nodes = self._toposort()

    def _validate(self) -> None:
        if len(set(self.nodes)) != len(self.nodes):
            raise ValidationError("duplicate node id")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise ValidationError("duplicate edge id")
        known = set(self.nodes)
        if self.source not in known:
            raise ValidationError(f"source {self.source!r} is not a node")
        if not self.sinks:
            raise ValidationError("at least one sink is required")
        if len(set(self.sinks)) != len(self.sinks):
            raise ValidationError("duplicate sink")
        for t in self.sinks:
            if t not in known:
                raise ValidationError(f"sink {t!r} is not a node")
            if t == self.source:
                raise ValidationError("the source cannot be a sink")
        sinks = set(self.sinks)
        for e in self.edges:
            if e.tail not in known or e.head not in known:
                raise ValidationError(f"edge {e.id!r} references an unknown node")
            if e.tail == e.head:
                raise ValidationError(f"edge {e.id!r} is a self-loop")
            if e.head == self.source:
                raise ValidationError(f"edge {e.id!r} enters the source")
            if e.tail in sinks:
                raise ValidationError(f"edge {e.id!r} leaves sink {e.tail!r}")

    def _toposort(self) -> tuple[str, ...]:
        ts: TopologicalSorter = TopologicalSorter()
        for v in self.nodes:
            ts.add(v)
        for e in self.edges:
            ts.add(e.head, e.tail)
        try:
            order = list(ts.static_order())
        except CycleError as exc:
            raise ValidationError(f"network has a cycle through {exc.args[1]}") from None
        # stable tie-breaking keeps outputs reproducible
        pos = {v: i for i, v in enumerate(self.nodes)}
        depth: dict[str, int] = {}
        for v in order:
            depth[v] = max((depth[self._edge[d].tail] + 1 for d in self._in[v]), default=0)
        return tuple(sorted(self.nodes, key=lambda v: (depth[v], pos[v])))

    def __repr__(self) -> str:
        return (f"Network(nodes={len(self.nodes)}, edges={len(self.edges)}, "
                f"source={self.source!r}, sinks={self.sinks!r})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (self.nodes, self.edges, self.source, self.sinks) == (
            other.nodes, other.edges, other.source, other.sinks)

    def __hash__(self) -> int:
        return hash((self.nodes, self.edges, self.source, self.sinks))

    def edge(self, eid: str) -> Edge:
        return self._edge[eid]

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def in_edges(self, v: str) -> tuple[str, ...]:
        return tuple(self._in[v])

    def out_edges(self, v: str) -> tuple[str, ...]:
        return tuple(self._out[v])

    @property
    def coding_nodes(self) -> tuple[str, ...]:
        """Non-sink nodes in topological order; these carry local kernels."""
        sinks = set(self.sinks)
        return tuple(v for v in self.topological_nodes if v not in sinks)

    def edge_set(self, ids: Iterable[str]) -> EdgeSet:
        """Canonical edge set: unique ids sorted by edge order."""
        ids = set(ids)
        unknown = ids - self.edge_index.keys()
        if unknown:
            raise ValidationError(f"unknown edge ids {sorted(unknown)}")
        return tuple(sorted(ids, key=self.edge_index.__getitem__))

    @cached_property
    def sink_capacities(self) -> dict[str, int]:
        return {t: (min_cut_to_edge_set(self, self.in_edges(t))[0] if self._in[t] else 0)
                for t in self.sinks}

    @cached_property
    def c_min(self) -> int:
        return min(self.sink_capacities.values())


@dataclass(frozen=True)
class WiretapCollection:
    """Primary edge subsets of size ``r``, sorted by edge order."""

    r: int
    sets: tuple[EdgeSet, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self):
        return iter(self.sets)


def _max_flow(n_nodes: int, arcs: Sequence[tuple[int, int, int]], s: int, t: int
              ) -> tuple[int, list[int], set[int]]:
    """Edmonds-Karp. Returns (value, flow per arc, nodes reachable in the residual graph)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_nodes)]
    for i, (u, v, _) in enumerate(arcs):
        adj[u].append((i, +1))
        adj[v].append((i, -1))
    flow = [0] * len(arcs)

    def residual(i: int, direction: int) -> int:
        return arcs[i][2] - flow[i] if direction > 0 else flow[i]

    def other(i: int, direction: int) -> int:
        return arcs[i][1] if direction > 0 else arcs[i][0]

    value = 0
    while True:
        parent: dict[int, tuple[int, int]] = {s: (-1, 0)}
        queue = deque([s])
        while queue and t not in parent:
            u = queue.popleft()
            for i, d in adj[u]:
                w = other(i, d)
                if w not in parent and residual(i, d) > 0:
                    parent[w] = (i, d)
                    queue.append(w)
        if t not in parent:
            return value, flow, set(parent)
        path = []
        w = t
        while w != s:
            i, d = parent[w]
            path.append((i, d))
            w = arcs[i][0] if d > 0 else arcs[i][1]
        push = min(residual(i, d) for i, d in path)
        for i, d in path:
            flow[i] += push * d
        value += push


def _split_cut(net: Network, a: EdgeSet) -> tuple[int, EdgeSet]:
    """Min-cut capacity between the source and ``a`` plus the source-side minimal cut."""
    index = {v: i for i, v in enumerate(net.nodes)}
    n = len(net.nodes)
    targets = set(a)
    arcs: list[tuple[int, int, int]] = []
    owner: list[str] = []
    big = len(net.edges) + 1
    sink = n + len(a)
    for e in net.edges:
        if e.id in targets:
            te = n + a.index(e.id)
            arcs.append((index[e.tail], te, 1))
            owner.append(e.id)
            arcs.append((te, index[e.head], 1))
            owner.append(e.id)
            arcs.append((te, sink, big))
            owner.append("")
        else:
            arcs.append((index[e.tail], index[e.head], 1))
            owner.append(e.id)
    value, _, reach = _max_flow(sink + 1, arcs, index[net.source], sink)
    cut = {owner[i] for i, (u, v, _) in enumerate(arcs) if u in reach and v not in reach}
    if "" in cut:  # pragma: no cover - super edges exceed every finite cut
        raise AssertionError("super edge in minimum cut")
    return value, net.edge_set(cut)


def min_cut_to_edge_set(net: Network, a: Iterable[str]) -> tuple[int, EdgeSet]:
    """Capacity of a minimum cut between the source and ``a``, and one such cut."""
    a = net.edge_set(a)
    if not a:
        raise EmptySet("edge set is empty")
    return _split_cut(net, a)


def is_regular(net: Network, a: Iterable[str]) -> bool:
    a = net.edge_set(a)
    return min_cut_to_edge_set(net, a)[0] == len(a)


def primary_min_cut(net: Network, a: Iterable[str]) -> EdgeSet:
    """The minimum cut between the source and ``a`` nearest the source.

    Taking the nodes reachable from the source in the final residual graph
    yields the minimum cut whose source side is smallest; it separates the
    source from every other minimum cut.
    """
    a = net.edge_set(a)
    if not a:
        raise EmptySet("edge set is empty")
    return _split_cut(net, a)[1]


def primary_subsets(net: Network, r: int) -> WiretapCollection:
    if r < 0:
        raise ValueError("security level must be non-negative")
    if r > net.c_min:
        raise SecurityLevelTooHigh(f"security level {r} exceeds C_min = {net.c_min}")
    if r == 0:
        return WiretapCollection(0, ((),))
    keep = []
    for combo in itertools.combinations(net.edge_ids, r):
        capacity, cut = _split_cut(net, combo)
        if capacity == r and cut == combo:
            keep.append(combo)
    return WiretapCollection(r, tuple(keep))
