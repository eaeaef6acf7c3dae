"""Graph-theory adequacy baseline: max flow / min cut on the capacity graph.

Node 0 is the super-source S, the last node the super-sink L and the buses
sit in between in document order. Generators hang off S, loads drain into L
and every line becomes two antiparallel arcs at full capacity. Capacities
carry at most two decimals, so the solver works on integers scaled by 100.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .network import Network

SCALE = 100
MAX_ENUMERATION_NODES = 16

SOURCE = "S"
SINK = "L"


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity_mw: float
    kind: str  # generation | load | line-forward | line-reverse
    line_id: str | None = None


@dataclass(frozen=True)
class FlowGraph:
    nodes: tuple[str, ...]
    arcs: tuple[Arc, ...]

    @property
    def source(self) -> int:
        return 0

    @property
    def sink(self) -> int:
        return len(self.nodes) - 1


@dataclass(frozen=True)
class MaxFlowResult:
    max_flow_mw: float
    min_cut_arcs: frozenset[int]  # indices into FlowGraph.arcs
    per_arc_flow_mw: tuple[float, ...]


def build_flow_graph(network: Network) -> FlowGraph:
    nodes = (SOURCE, *(f"bus-{b.id}" for b in network.buses), SINK)
    sink = len(nodes) - 1
    idx = {b.id: i + 1 for i, b in enumerate(network.buses)}
    arcs: list[Arc] = []
    for b in network.buses:
        if b.gen_capacity_mw > 0:
            arcs.append(Arc(0, idx[b.id], b.gen_capacity_mw, "generation"))
    for b in network.buses:
        if b.demand_mw > 0:
            arcs.append(Arc(idx[b.id], sink, b.demand_mw, "load"))
    for ln in network.lines:
        u, v = idx[ln.from_bus], idx[ln.to_bus]
        arcs.append(Arc(u, v, ln.capacity_mw, "line-forward", ln.id))
        arcs.append(Arc(v, u, ln.capacity_mw, "line-reverse", ln.id))
    return FlowGraph(nodes=nodes, arcs=tuple(arcs))


def scaled_capacity(capacity_mw: float) -> int:
    scaled = round(capacity_mw * SCALE)
    if capacity_mw < 0 or abs(scaled - capacity_mw * SCALE) > 1e-6:
        raise ValueError(f"capacity {capacity_mw!r} is negative or has more than two decimals")
    return scaled


class _Dinic:
    def __init__(self, n: int) -> None:
        self.n = n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, c: int) -> int:
        """Add u→v with residual twin v→u; returns the forward edge index."""
        e = len(self.head)
        self.head += [v, u]
        self.cap += [c, 0]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                if self.cap[e] > 0 and level[self.head[e]] < 0:
                    level[self.head[e]] = level[u] + 1
                    queue.append(self.head[e])
        return level if level[t] >= 0 else None

    def _push(self, u: int, t: int, limit: int, level: list[int], ptr: list[int]) -> int:
        if u == t:
            return limit
        while ptr[u] < len(self.adj[u]):
            e = self.adj[u][ptr[u]]
            v = self.head[e]
            if self.cap[e] > 0 and level[v] == level[u] + 1:
                pushed = self._push(v, t, min(limit, self.cap[e]), level, ptr)
                if pushed:
                    self.cap[e] -= pushed
                    self.cap[e ^ 1] += pushed
                    return pushed
            ptr[u] += 1
        return 0

    def run(self, s: int, t: int) -> int:
        total = 0
        while (level := self._levels(s, t)) is not None:
            ptr = [0] * self.n
            while pushed := self._push(s, t, 1 << 62, level, ptr):
                total += pushed
        return total

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in self.adj[u]:
                v = self.head[e]
                if self.cap[e] > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen


def max_flow(graph: FlowGraph) -> MaxFlowResult:
    """Maximum S→L flow (Dinic) and the cut at the residual frontier of S."""
    solver = _Dinic(len(graph.nodes))
    scaled = [scaled_capacity(a.capacity_mw) for a in graph.arcs]
    edges = [solver.add_arc(a.tail, a.head, c) for a, c in zip(graph.arcs, scaled)]
    value = solver.run(graph.source, graph.sink)
    side = solver.reachable(graph.source)
    cut = frozenset(
        i for i, a in enumerate(graph.arcs) if a.tail in side and a.head not in side
    )
    flows = tuple((c - solver.cap[e]) / SCALE for c, e in zip(scaled, edges))
    return MaxFlowResult(max_flow_mw=value / SCALE, min_cut_arcs=cut, per_arc_flow_mw=flows)


def line_flows_mw(graph: FlowGraph, result: MaxFlowResult) -> dict[str, float]:
    """Net flow per transmission line, positive in the line's from→to direction."""
    net: dict[str, float] = {}
    for arc, flow in zip(graph.arcs, result.per_arc_flow_mw):
        if arc.line_id is None:
            continue
        sign = 1.0 if arc.kind == "line-forward" else -1.0
        net[arc.line_id] = net.get(arc.line_id, 0.0) + sign * flow
    return net


def dns_mcmf(network: Network, result: MaxFlowResult) -> float:
    """System DNS as total demand minus the deliverable maximum flow."""
    return max(network.total_demand_mw - result.max_flow_mw, 0.0)


def min_cut_enumeration_oracle(graph: FlowGraph) -> float:
    """Minimum S/L cut capacity by enumerating every bipartition of the inner nodes."""
    n = len(graph.nodes)
    if n > MAX_ENUMERATION_NODES:
        raise ValueError(f"graph too large for enumeration: {n} nodes > {MAX_ENUMERATION_NODES}")
    inner = n - 2
    arcs = [(a.tail, a.head, scaled_capacity(a.capacity_mw)) for a in graph.arcs]
    best = None
    for mask in range(1 << inner):
        # bit i set -> inner node i + 1 sits on the source side
        source_side = (mask << 1) | 1
        total = 0
        for u, v, c in arcs:
            if (source_side >> u) & 1 and not (source_side >> v) & 1:
                total += c
        if best is None or total < best:
            best = total
    return best / SCALE
