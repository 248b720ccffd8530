"""Compressing correspondences on finite balls via integral max-flow.

Sources are the vertices of ``B_r``, each emitting ``n`` units into its
S-neighbours; sinks are the vertices of ``B_r S``, each absorbing at most
``m`` units. Only sources in ``B_r`` and sinks in ``B_{r-1}`` (whose whole
in-neighbourhood is present) are held to exact totals; the remaining
sinks form a relaxed boundary.

The flow is computed in two phases: first with only interior sinks
attached to the terminal, then with the boundary attached as well.
Augmenting paths never lower the inflow of a sink that is not at the end
of the path, so the second phase keeps interior demand at its maximum
while maximizing total throughput.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .correspondence import TableCorrespondence, correspondence_document
from .errors import BudgetExceeded, UsageError
from .groups import Element, GenSet, Group, ball_layers

DEFAULT_FLOW_BUDGET = 5_000_000


class MaxFlow:
    """Dinic's algorithm on an integer-capacity digraph.

    Adjacency lists keep insertion order, so results are deterministic.
    """

    def __init__(self, num_nodes: int):
        self.adj: list[list[int]] = [[] for _ in range(num_nodes)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        eid = len(self.to)
        self.to += [v, u]
        self.cap += [c, 0]
        self.adj[u].append(eid)
        self.adj[v].append(eid + 1)
        return eid

    def flow_on(self, eid: int) -> int:
        return self.cap[eid ^ 1]

    def _levels(self, s: int, t: int):
        level = [-1] * len(self.adj)
        level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for e in self.adj[u]:
                v = self.to[e]
                if self.cap[e] > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    q.append(v)
        return level if level[t] >= 0 else None

    def run(self, s: int, t: int) -> int:
        total = 0
        adj, to, cap = self.adj, self.to, self.cap
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * len(adj)
            while True:
                # one augmenting path in the level graph, iterative DFS
                path: list[int] = []
                u = s
                while u != t:
                    edges = adj[u]
                    while it[u] < len(edges):
                        e = edges[it[u]]
                        v = to[e]
                        if cap[e] > 0 and level[v] == level[u] + 1:
                            break
                        it[u] += 1
                    else:
                        if u == s:
                            break
                        level[u] = -1
                        e = path.pop()
                        u = to[e ^ 1]
                        it[u] += 1
                        continue
                    path.append(e)
                    u = v
                if u != t:
                    break
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                total += push


@dataclass
class FeasibilityReport:
    radius: int
    m: int
    n: int
    feasible: bool
    interior_exact: bool
    deficiency: int
    sink_deficiency: int
    source_deficiency: int
    num_sources: int
    num_interior_sinks: int
    witness: TableCorrespondence | None = None

    def to_document(self, include_witness: bool = False) -> dict:
        doc = {
            "radius": self.radius, "m": self.m, "n": self.n,
            "feasible": self.feasible, "interior_exact": self.interior_exact,
            "deficiency": self.deficiency, "sink_deficiency": self.sink_deficiency,
            "source_deficiency": self.source_deficiency,
            "num_sources": self.num_sources, "num_interior_sinks": self.num_interior_sinks,
        }
        if include_witness and self.witness is not None:
            doc["witness"] = correspondence_document(self.witness, self.witness.rows)
        return doc


def build_correspondence(group: Group, S: GenSet | None, m: int, n: int, radius: int,
                         budget: int = DEFAULT_FLOW_BUDGET) -> FeasibilityReport:
    """Search an m:n correspondence on ``B_radius`` with exact interior sums."""
    if not (m > n >= 1 or m == n == 1):
        raise UsageError("need m > n >= 1, or m = n = 1")
    if radius < 0:
        raise UsageError("radius must be >= 0")
    S = S if S is not None else group.standard_genset()
    layers = ball_layers(group, S, radius)
    sources = [x for layer in layers for x in layer]
    interior = [x for layer in layers[:-1] for x in layer]
    n_edges = len(sources) * (len(S) + 1)
    if n_edges > budget:
        raise BudgetExceeded(f"flow network with ~{n_edges} edges exceeds budget {budget}")

    sink_id: dict[Element, int] = {}
    sinks: list[Element] = []
    for y in interior:
        sink_id[y] = len(sinks)
        sinks.append(y)
    targets = []
    for x in sources:
        row = []
        for s in S:
            y = x * s
            if y not in sink_id:
                sink_id[y] = len(sinks)
                sinks.append(y)
            row.append(y)
        targets.append(row)

    SRC, SNK = 0, 1
    base = 2 + len(sources)
    net = MaxFlow(base + len(sinks))
    for i in range(len(sources)):
        net.add_edge(SRC, 2 + i, n)
    arcs: list[tuple[Element, Element, int]] = []
    for i, x in enumerate(sources):
        for y in targets[i]:
            arcs.append((x, y, net.add_edge(2 + i, base + sink_id[y], n)))
    interior_edges = [net.add_edge(base + j, SNK, m) for j in range(len(interior))]
    net.run(SRC, SNK)
    for j in range(len(interior), len(sinks)):
        net.add_edge(base + j, SNK, m)
    net.run(SRC, SNK)

    inflow = sum(net.flow_on(e) for e in interior_edges)
    outflow = sum(net.flow_on(e) for e in net.adj[SRC] if e % 2 == 0)
    sink_def = m * len(interior) - inflow
    source_def = n * len(sources) - outflow
    deficiency = sink_def + source_def
    witness = None
    if deficiency == 0:
        rows: dict[Element, dict[Element, int]] = {}
        for x, y, e in arcs:
            k = net.flow_on(e)
            if k:
                rows.setdefault(x, {})
                rows[x][y] = rows[x].get(y, 0) + k
        witness = TableCorrespondence(group, S, m, n, rows)
    return FeasibilityReport(
        radius=radius, m=m, n=n, feasible=deficiency == 0, interior_exact=deficiency == 0,
        deficiency=deficiency, sink_deficiency=sink_def, source_deficiency=source_def,
        num_sources=len(sources), num_interior_sinks=len(interior), witness=witness)


def candidate_ratios(max_denominator: int = 4, max_value: int = 4) -> list[tuple[int, int]]:
    """Distinct ratios m/n > 1 with n <= max_denominator and m/n <= max_value,
    largest first, each in lowest terms."""
    seen = {}
    for n in range(1, max_denominator + 1):
        for m in range(n + 1, max_value * n + 1):
            r = Fraction(m, n)
            if r not in seen:
                seen[r] = (r.numerator, r.denominator)
    return [seen[r] for r in sorted(seen, reverse=True)]


def expansion_profile(group: Group, S: GenSet | None, max_radius: int,
                      max_denominator: int = 4, max_value: int = 4,
                      budget: int = DEFAULT_FLOW_BUDGET) -> list[tuple[int, Fraction]]:
    """Largest tested m/n with an interior-exact correspondence, per radius.

    Radius 0 has no interior sinks and is reported as 1. For larger radii
    candidates are tried from the largest down; the first feasible one
    wins, 1 if none is.
    """
    if max_radius < 1:
        raise UsageError("max_radius must be >= 1")
    cands = candidate_ratios(max_denominator, max_value)
    out: list[tuple[int, Fraction]] = [(0, Fraction(1))]
    for r in range(1, max_radius + 1):
        best = Fraction(1)
        for m, n in cands:
            if build_correspondence(group, S, m, n, r, budget).feasible:
                best = Fraction(m, n)
                break
        out.append((r, best))
    return out
