"""Hub trees, the sparsest-merging tree heuristic, and hub placement.

A hub tree is an abstract tree whose leaves are exactly the topology's
nodes; internal nodes are hubs-to-be. The merge heuristic builds a binary
hub tree bottom-up by repeatedly joining the pair of groups with the
smallest sparsity, and the placement DP maps internal nodes onto the
topology so that the total circuit cost (edge capacity times hub distance)
is minimized.
"""

from __future__ import annotations

import json
import math
from collections import defaultdict

from . import demand_oracle
from .topology import ShortestPathIndex
from .traffic import CappedHoseModel

TreeEdge = frozenset[int]

_INF = math.inf


class HubTree:
    """Tree over integer node ids; leaves carry terminal labels.

    `capacities` maps tree edges to their worst-case crossing demand and is
    populated lazily (see populate_capacities).
    """

    def __init__(self, edges: list[tuple[int, int]], leaf_labels: dict[int, str]):
        self.edges: list[TreeEdge] = [frozenset(e) for e in edges]
        self.leaf_labels: dict[int, str] = dict(leaf_labels)
        self.adj: dict[int, list[int]] = defaultdict(list)
        for e in self.edges:
            u, v = sorted(e)
            self.adj[u].append(v)
            self.adj[v].append(u)
        self.nodes: list[int] = sorted(self.adj) if self.edges else sorted(leaf_labels)
        self.capacities: dict[TreeEdge, float] = {}
        self._validate()

    def _validate(self) -> None:
        n = len(self.nodes)
        if len(self.edges) != n - 1:
            raise ValueError("not a tree: |E| != |V|-1")
        seen = set()
        stack = [self.nodes[0]]
        while stack:
            u = stack.pop()
            if u in seen:
                continue
            seen.add(u)
            stack.extend(self.adj[u])
        if len(seen) != n:
            raise ValueError("not a tree: disconnected")
        for v in self.nodes:
            deg = len(self.adj[v])
            if deg <= 1 and v not in self.leaf_labels:
                raise ValueError(f"degree-1 node {v} has no terminal label")
            if deg > 1 and v in self.leaf_labels:
                raise ValueError(f"internal node {v} carries a terminal label")

    @property
    def internal_nodes(self) -> list[int]:
        return [v for v in self.nodes if v not in self.leaf_labels]

    @property
    def leaves(self) -> list[int]:
        return sorted(self.leaf_labels)

    def is_binary(self) -> bool:
        degs = [len(self.adj[v]) for v in self.internal_nodes]
        return all(d <= 3 for d in degs) and degs.count(2) <= 1

    def leaf_partition(self, edge: TreeEdge) -> tuple[list[str], list[str]]:
        """Terminal labels on each side of a tree edge (smaller-endpoint side
        first)."""
        edge = frozenset(edge)
        if edge not in set(self.edges):
            raise ValueError(f"edge {sorted(edge)} not in tree")
        u, v = sorted(edge)
        side: set[int] = set()
        stack = [u]
        while stack:
            w = stack.pop()
            if w in side:
                continue
            side.add(w)
            for x in self.adj[w]:
                if not (w == u and x == v):
                    stack.append(x)
        left = sorted(self.leaf_labels[w] for w in side if w in self.leaf_labels)
        right = sorted(
            lbl for w, lbl in self.leaf_labels.items() if w not in side
        )
        return left, right

    def tree_path(self, a: int, b: int) -> list[int]:
        """Unique node path between two tree nodes."""
        parent: dict[int, int | None] = {a: None}
        stack = [a]
        while stack:
            u = stack.pop()
            if u == b:
                break
            for v in self.adj[u]:
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
        path = [b]
        while parent[path[-1]] is not None:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    # -- JSON fixture form ---------------------------------------------------

    def to_json(self) -> str:
        root = max(self.internal_nodes) if self.internal_nodes else self.nodes[0]

        def build(v: int, parent: int | None) -> dict:
            children = [c for c in self.adj[v] if c != parent]
            if not children:
                node: dict = {"leaf": self.leaf_labels[v]}
            else:
                node = {"children": [build(c, v) for c in sorted(children)]}
            if parent is not None:
                cap = self.capacities.get(frozenset((v, parent)))
                if cap is not None:
                    node["capacity"] = cap
            return node

        return json.dumps(build(root, None))

    @classmethod
    def from_json(cls, text: str) -> "HubTree":
        doc = json.loads(text)
        edges: list[tuple[int, int]] = []
        labels: dict[int, str] = {}
        caps: dict[TreeEdge, float] = {}

        def count_leaves(node: dict) -> int:
            if "leaf" in node:
                return 1
            return sum(count_leaves(c) for c in node["children"])

        # leaves get 0..n-1 in encounter order; internal ids are assigned
        # post-order so the root always carries the largest id (matching the
        # root choice to_json makes)
        leaf_counter = [0]
        internal_counter = [count_leaves(doc)]

        def build(node: dict) -> int:
            if "leaf" in node:
                vid = leaf_counter[0]
                leaf_counter[0] += 1
                labels[vid] = node["leaf"]
            else:
                child_ids = [build(c) for c in node["children"]]
                vid = internal_counter[0]
                internal_counter[0] += 1
                for cid, child in zip(child_ids, node["children"]):
                    edges.append((vid, cid))
                    if "capacity" in child:
                        caps[frozenset((vid, cid))] = float(child["capacity"])
            return vid

        build(doc)
        tree = cls(edges, labels)
        tree.capacities = caps
        return tree


def populate_capacities(tree: HubTree, m: CappedHoseModel) -> None:
    """Fill every tree edge with its fundamental-cut capacity."""
    for e in tree.edges:
        tree.capacities[e] = demand_oracle.fundamental_cut_capacity(m, tree, e)


def btsm(m: CappedHoseModel) -> HubTree:
    """Binary tree by sparsest merging.

    Starts from singleton groups and performs n-1 merges; each step joins the
    pair of active groups with minimum sparsity of their leaf sets. Ties (and
    +inf sparsity values, ranked last) break on the lexicographically least
    pair of smallest-leaf labels.
    """
    n = len(m.nodes)
    if n < 2:
        raise ValueError("need at least 2 terminals")
    labels = {idx: name for idx, name in enumerate(m.nodes)}
    leaves: dict[int, frozenset[str]] = {
        idx: frozenset([name]) for idx, name in labels.items()
    }
    active = sorted(leaves)
    edges: list[tuple[int, int]] = []
    next_id = n

    outer_cache: dict[frozenset[str], float] = {}

    def outer_flow(union: frozenset[str]) -> float:
        if union not in outer_cache:
            rest = [v for v in m.nodes if v not in union]
            outer_cache[union] = (
                demand_oracle.u_star(m, sorted(union), rest) if rest else 0.0
            )
        return outer_cache[union]

    def pair_score(a: int, b: int) -> float:
        inner = demand_oracle.u_star(m, sorted(leaves[a]), sorted(leaves[b]))
        if inner <= demand_oracle.FLOW_TOL:
            return _INF
        return outer_flow(leaves[a] | leaves[b]) / inner

    scores: dict[tuple[int, int], float] = {}
    for i_pos, a in enumerate(active):
        for b in active[i_pos + 1 :]:
            scores[(a, b)] = pair_score(a, b)

    while len(active) > 1:
        def sort_key(pair: tuple[int, int]) -> tuple[float, tuple[str, str]]:
            a, b = pair
            tie = tuple(sorted((min(leaves[a]), min(leaves[b]))))
            return (scores[pair], tie)

        best = min(scores, key=sort_key)
        a, b = best
        u = next_id
        next_id += 1
        edges.append((u, a))
        edges.append((u, b))
        leaves[u] = leaves[a] | leaves[b]
        active = [v for v in active if v not in (a, b)]
        scores = {
            p: s for p, s in scores.items() if a not in p and b not in p
        }
        for v in active:
            scores[(v, u) if v < u else (u, v)] = pair_score(v, u)
        active.append(u)

    return HubTree(edges, labels)


def place_hubs(
    tree: HubTree, idx: ShortestPathIndex, topology_nodes: tuple[str, ...] | None = None
) -> tuple[dict[int, str], float]:
    """Optimal hub map for a capacitated hub tree.

    Rooted DP: C(v,g) = sum over children c of min_h [C(c,h) + u(vc)*dist(g,h)],
    with leaves pinned to their own terminals. Ties in the argmin break on the
    smallest topology node id. Returns (eta over all tree nodes, optimal cost).
    """
    for e in tree.edges:
        if e not in tree.capacities:
            raise ValueError(f"tree edge {sorted(e)} has no capacity")
    if topology_nodes is None:
        topology_nodes = tuple(sorted(tree.leaf_labels.values()))
    internal = tree.internal_nodes
    if not internal:
        # Two-leaf degenerate tree has no hubs to place.
        eta = {v: lbl for v, lbl in tree.leaf_labels.items()}
        return eta, 0.0
    root = max(internal)
    return _place_hubs_rooted(tree, idx, topology_nodes, root)


def _place_hubs_rooted(
    tree: HubTree,
    idx: ShortestPathIndex,
    topology_nodes: tuple[str, ...],
    root: int,
) -> tuple[dict[int, str], float]:
    # Post-order over the rooted tree.
    order: list[tuple[int, int | None]] = []
    stack: list[tuple[int, int | None]] = [(root, None)]
    while stack:
        v, parent = stack.pop()
        order.append((v, parent))
        for c in tree.adj[v]:
            if c != parent:
                stack.append((c, v))
    order.reverse()

    cost: dict[int, dict[str, float]] = {}
    choice: dict[int, dict[str, dict[int, str]]] = {}  # v -> g -> child -> h
    children: dict[int, list[int]] = {
        v: sorted(c for c in tree.adj[v] if c != parent) for v, parent in order
    }

    for v, parent in order:
        if v in tree.leaf_labels:
            lbl = tree.leaf_labels[v]
            cost[v] = {g: (0.0 if g == lbl else _INF) for g in topology_nodes}
            continue
        table: dict[str, float] = {}
        pick: dict[str, dict[int, str]] = {}
        for g in topology_nodes:
            total = 0.0
            chosen: dict[int, str] = {}
            for c in children[v]:
                u = tree.capacities[frozenset((v, c))]
                best_val, best_h = _INF, None
                for h in topology_nodes:
                    sub = cost[c][h]
                    if sub == _INF:
                        continue
                    val = sub + u * idx.dist(g, h)
                    # strict < keeps the smallest h on exact ties
                    if val < best_val:
                        best_val, best_h = val, h
                total = total + best_val if best_h is not None else _INF
                if best_h is None:
                    break
                chosen[c] = best_h
            table[g] = total
            pick[g] = chosen
        cost[v] = table
        choice[v] = pick

    best_g = min(topology_nodes, key=lambda g: (cost[root][g], g))
    eta: dict[int, str] = {}

    def assign(v: int, g: str, parent: int | None) -> None:
        eta[v] = g
        if v in tree.leaf_labels:
            return
        for c in children[v]:
            assign(c, choice[v][g][c], v)

    assign(root, best_g, None)
    for v, lbl in tree.leaf_labels.items():
        eta[v] = lbl
    return eta, cost[root][best_g]


def hh_cost(tree: HubTree, eta: dict[int, str], idx: ShortestPathIndex) -> float:
    """Total circuit cost sum_e u(e) * dist(eta ends) for a given map."""
    total = 0.0
    for e in tree.edges:
        u, v = sorted(e)
        total += tree.capacities[e] * idx.dist(eta[u], eta[v])
    return total


def hh_template(
    tree: HubTree, eta: dict[int, str], idx: ShortestPathIndex
) -> dict[tuple[str, str], list[str]]:
    """Induced oblivious routing template: for each leaf pair, concatenate
    canonical shortest paths between consecutive hub images along the tree
    path. Hops between identical images contribute nothing; walks may be
    non-simple.
    """
    leaves = sorted(tree.leaf_labels, key=lambda v: tree.leaf_labels[v])
    template: dict[tuple[str, str], list[str]] = {}
    for a_pos, la in enumerate(leaves):
        for lb in leaves[a_pos + 1 :]:
            i, j = tree.leaf_labels[la], tree.leaf_labels[lb]
            images = [eta[v] for v in tree.tree_path(la, lb)]
            walk = [i]
            for q in range(len(images) - 1):
                if images[q] == images[q + 1]:
                    continue
                walk.extend(idx.path(images[q], images[q + 1])[1:])
            template[(i, j)] = walk
    return template
