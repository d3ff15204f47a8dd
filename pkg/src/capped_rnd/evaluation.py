"""Routing templates and their worst-case provisioning costs.

A routing template assigns every unordered terminal pair one walk in the
topology. Per-edge capacity is the worst-case demand the universe can push
across that edge through the template; link cost prices those capacities,
node cost sums installed capacity at each endpoint.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

from scipy.optimize import linprog

from . import demand_oracle
from .hub_routing import HubTree
from .topology import Node, ShortestPathIndex, Topology
from .traffic import CappedHoseModel, PairKey, pair_key

RoutingTemplate = dict[PairKey, list[str]]
EdgeKey = frozenset[str]


@dataclass
class CostReport:
    template_kind: str  # SP | HUB | TR | HH
    link_cost: float
    node_costs: dict[str, float]
    total_node_cost: float
    per_edge: dict[EdgeKey, float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "template": self.template_kind,
                "link_cost": self.link_cost,
                "total_node_cost": self.total_node_cost,
                "edges": [
                    {"a": a, "b": b, "capacity": cap}
                    for (a, b), cap in sorted(
                        (tuple(sorted(e)), c) for e, c in self.per_edge.items()
                    )
                ],
                "nodes": [
                    {"id": i, "cost": c} for i, c in sorted(self.node_costs.items())
                ],
            }
        )


def sp_template(idx: ShortestPathIndex) -> RoutingTemplate:
    """Canonical shortest path for every pair."""
    return {(i, j): idx.path(i, j) for i, j in idx.pairs()}


def edge_crossings(tpl: RoutingTemplate, t: Topology) -> dict[EdgeKey, dict[PairKey, int]]:
    """For each topology edge, the pairs whose walk uses it, with traversal
    multiplicity (non-simple walks can cross an edge more than once)."""
    crossings: dict[EdgeKey, dict[PairKey, int]] = {e: {} for e in t.edge_costs}
    for (i, j), walk in tpl.items():
        if walk[0] != i or walk[-1] != j:
            raise ValueError(f"walk for ({i},{j}) has wrong endpoints")
        for u, v in zip(walk, walk[1:]):
            e = frozenset((u, v))
            if e not in crossings:
                raise ValueError(f"walk for ({i},{j}) uses non-edge {u!r}-{v!r}")
            key = pair_key(i, j)
            crossings[e][key] = crossings[e].get(key, 0) + 1
    return crossings


def weighted_pair_capacity(
    m: CappedHoseModel, weights: dict[PairKey, int]
) -> float:
    """max sum w_ij D_ij over the universe. Unit weights go through the flow
    oracle; true multiplicities (non-simple walks only) fall back to an LP.
    """
    if all(w == 1 for w in weights.values()):
        return demand_oracle.pair_set_capacity(m, weights.keys())
    pairs = sorted(weights)
    var = {p: k for k, p in enumerate(pairs)}
    c = [-float(weights[p]) for p in pairs]
    bounds = [(0.0, m.peak(*p)) for p in pairs]
    rows, rhs = [], []
    for i in m.nodes:
        row = [0.0] * len(pairs)
        touched = False
        for p in pairs:
            if i in p:
                row[var[p]] = 1.0
                touched = True
        if touched:
            rows.append(row)
            rhs.append(m.marginal(i))
    res = linprog(c, A_ub=rows or None, b_ub=rhs or None, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"capacity LP failed: {res.message}")
    return -res.fun


def template_capacities(
    m: CappedHoseModel, tpl: RoutingTemplate, t: Topology
) -> dict[EdgeKey, float]:
    """Worst-case capacity per topology edge under a template; zero entries
    are kept so the vector is topology-complete."""
    crossings = edge_crossings(tpl, t)
    caps: dict[EdgeKey, float] = {}
    for e in t.edge_costs:
        weights = crossings[e]
        caps[e] = weighted_pair_capacity(m, weights) if weights else 0.0
    return caps


def link_cost(caps: dict[EdgeKey, float], t: Topology) -> float:
    return sum(t.edge_costs[e] * caps[e] for e in t.edge_costs)


def node_costs(caps: dict[EdgeKey, float], t: Topology) -> dict[str, float]:
    """Installed capacity incident to each node (port-count reading)."""
    out = {i: 0.0 for i in t.node_ids}
    for e, cap in caps.items():
        for v in e:
            out[v] += cap
    return out


def node_costs_max_incident(caps: dict[EdgeKey, float], t: Topology) -> dict[str, float]:
    """Alternative reading: the single largest incident capacity."""
    out = {i: 0.0 for i in t.node_ids}
    for e, cap in caps.items():
        for v in e:
            out[v] = max(out[v], cap)
    return out


def best_single_hub(m: CappedHoseModel, idx: ShortestPathIndex) -> tuple[str, float]:
    """Cheapest single-hub design: argmin_h sum_i trunc(U(i)) * dist(i,h),
    smallest node id on ties."""
    best_h, best_cost = None, math.inf
    for h in m.nodes:
        cost = sum(m.trunc_marginal(i) * idx.dist(i, h) for i in m.nodes)
        if cost < best_cost:
            best_h, best_cost = h, cost
    return best_h, best_cost


def tree_template_in_graph(t: Topology, tree_edges: set[EdgeKey]) -> RoutingTemplate:
    """Routing template of a spanning tree of the topology: every pair uses
    its unique tree path."""
    tree_edges = {frozenset(e) for e in tree_edges}
    for e in tree_edges:
        if e not in t.edge_costs:
            raise ValueError(f"{sorted(e)} is not a topology edge")
    if len(tree_edges) != len(t.node_ids) - 1:
        raise ValueError("edge set is not a spanning tree")
    adj: dict[str, list[str]] = {i: [] for i in t.node_ids}
    for e in tree_edges:
        u, v = sorted(e)
        adj[u].append(v)
        adj[v].append(u)
    # connectivity check + BFS parents from each source
    template: RoutingTemplate = {}
    for i in t.node_ids:
        parent: dict[str, str | None] = {i: None}
        queue = [i]
        for u in queue:
            for v in sorted(adj[u]):
                if v not in parent:
                    parent[v] = u
                    queue.append(v)
        if len(parent) != len(t.node_ids):
            raise ValueError("edge set is not a spanning tree")
        for j in t.node_ids:
            if i < j:
                path = [j]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                path.reverse()
                template[(i, j)] = path
    return template


def cost_report(
    kind: str, caps: dict[EdgeKey, float], t: Topology
) -> CostReport:
    ncosts = node_costs(caps, t)
    return CostReport(
        template_kind=kind,
        link_cost=link_cost(caps, t),
        node_costs=ncosts,
        total_node_cost=sum(ncosts.values()),
        per_edge=caps,
    )


# -- Two-star analytic fixture ----------------------------------------------


def theorem2_fixture(n: int) -> tuple[Topology, CappedHoseModel]:
    """Two unit-bridged stars with a complete bipartite layer of cross edges.

    Star centers "a","b"; leaves v01..v{n}, w01..w{n}. Star edges cost
    1/(2n), cross edges 1 - 1/n, bridge 1. Peaks are 1 on every (v_i, w_j)
    pair, marginals 1 on leaves and 0 on the centers.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    vs = [f"v{i:02d}" for i in range(1, n + 1)]
    ws = [f"w{j:02d}" for j in range(1, n + 1)]
    nodes = [Node("a"), Node("b")] + [Node(v) for v in vs] + [Node(w) for w in ws]
    edges: list[tuple[str, str, float]] = [("a", "b", 1.0)]
    star_cost = 1.0 / (2 * n)
    cross_cost = 1.0 - 1.0 / n
    for v in vs:
        edges.append(("a", v, star_cost))
    for w in ws:
        edges.append(("b", w, star_cost))
    for v in vs:
        for w in ws:
            edges.append((v, w, cross_cost))
    topo = Topology(nodes, edges)

    marginals = {x: 1.0 for x in vs + ws}
    marginals["a"] = 0.0
    marginals["b"] = 0.0
    peaks = {pair_key(v, w): 1.0 for v, w in itertools.product(vs, ws)}
    model = CappedHoseModel([nd.id for nd in nodes], marginals, peaks)
    return topo, model


def theorem2_two_star_tree(t: Topology) -> set[EdgeKey]:
    """The spanning tree used in the two-star analysis: both stars + bridge."""
    return {
        e
        for e in t.edge_costs
        if "a" in e or "b" in e
    }


def theorem2_hub_tree(t: Topology, m: CappedHoseModel) -> HubTree:
    """The natural two-internal-node hub tree: one hub per star plus their
    connecting edge; capacities populated from the model."""
    leaves = sorted(m.nodes)
    labels = {i: lbl for i, lbl in enumerate(leaves)}
    x, y = len(leaves), len(leaves) + 1
    edges = [(x, y)]
    for i, lbl in labels.items():
        side = x if (lbl == "a" or lbl.startswith("v")) else y
        edges.append((side, i))
    tree = HubTree(edges, labels)
    from .hub_routing import populate_capacities

    populate_capacities(tree, m)
    return tree
