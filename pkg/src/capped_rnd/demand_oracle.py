"""Worst-case aggregate demand over a capped hose universe.

Everything here reduces to max-flow: set-pair demand is a three-layer flow,
and arbitrary pair sets go through either the bipartite fast path or the
bipartite double cover (whose max-flow is exactly twice the fractional
optimum of the peak/marginal program).
"""

from __future__ import annotations

import itertools
import math
from typing import TYPE_CHECKING, Iterable

from .maxflow import FlowNetwork
from .traffic import CappedHoseModel, PairKey, pair_key

if TYPE_CHECKING:  # pragma: no cover
    from .hub_routing import HubTree

FLOW_TOL = 1e-9


def u_star(m: CappedHoseModel, A: Iterable[str], B: Iterable[str]) -> float:
    """Maximum total demand between disjoint node sets A and B.

    Max st-flow on the bipartite network: source->i (cap U(i)) for i in A,
    i->j (cap U(i,j)), j->sink (cap U(j)) for j in B.
    """
    A = sorted(set(A))
    B = sorted(set(B))
    if set(A) & set(B):
        raise ValueError("A and B must be disjoint")
    if not A or not B:
        return 0.0
    index = {}
    for v in itertools.chain(A, B):
        index[v] = len(index) + 2
    net = FlowNetwork(len(index) + 2)
    s, t = 0, 1
    for i in A:
        net.add_arc(s, index[i], m.marginal(i))
        for j in B:
            net.add_arc(index[i], index[j], m.peak(i, j))
    for j in B:
        net.add_arc(index[j], t, m.marginal(j))
    return net.max_flow(s, t)


def _two_color(pairs: Iterable[PairKey]) -> dict[str, int] | None:
    """2-coloring of the graph formed by the pairs, or None if not bipartite."""
    adj: dict[str, list[str]] = {}
    for i, j in pairs:
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    color: dict[str, int] = {}
    for start in sorted(adj):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def pair_set_capacity(m: CappedHoseModel, pairs: Iterable[PairKey]) -> float:
    """Optimum of max sum_{(i,j) in S} D_ij over the capped hose universe.

    Bipartite pair sets are solved as a direct max-flow; general sets via the
    double cover, halved.
    """
    S = sorted({pair_key(i, j) for i, j in pairs})
    for i, j in S:
        if i == j:
            raise ValueError("pair sets cannot contain diagonal pairs")
    if not S:
        return 0.0
    color = _two_color(S)
    if color is not None:
        side_a = sorted(v for v, c in color.items() if c == 0)
        side_b = sorted(v for v, c in color.items() if c == 1)
        index = {}
        for v in itertools.chain(side_a, side_b):
            index[v] = len(index) + 2
        net = FlowNetwork(len(index) + 2)
        s, t = 0, 1
        for i in side_a:
            net.add_arc(s, index[i], m.marginal(i))
        for j in side_b:
            net.add_arc(index[j], t, m.marginal(j))
        for i, j in S:
            if color[i] == 1:
                i, j = j, i
            net.add_arc(index[i], index[j], m.peak(i, j))
        return net.max_flow(s, t)

    # Double cover: i' on the source side, i'' on the sink side.
    involved = sorted({v for p in S for v in p})
    out_idx = {v: 2 + r for r, v in enumerate(involved)}
    in_idx = {v: 2 + len(involved) + r for r, v in enumerate(involved)}
    net = FlowNetwork(2 + 2 * len(involved))
    s, t = 0, 1
    for v in involved:
        net.add_arc(s, out_idx[v], m.marginal(v))
        net.add_arc(in_idx[v], t, m.marginal(v))
    for i, j in S:
        u = m.peak(i, j)
        net.add_arc(out_idx[i], in_idx[j], u)
        net.add_arc(out_idx[j], in_idx[i], u)
    return net.max_flow(s, t) / 2.0


def fundamental_cut_capacity(m: CappedHoseModel, tree: "HubTree", edge) -> float:
    """Worst-case demand across one hub-tree edge: u* between the leaf sets
    the edge separates."""
    side, other = tree.leaf_partition(edge)
    return u_star(m, side, other)


def sparsity(m: CappedHoseModel, A: Iterable[str], B: Iterable[str]) -> float:
    """sc(A,B) = u*(A+B, rest) / u*(A,B); +inf when no traffic is possible
    between A and B (merging them has no sharing benefit)."""
    A = sorted(set(A))
    B = sorted(set(B))
    if not A or not B:
        raise ValueError("sparsity needs nonempty disjoint sets")
    inner = u_star(m, A, B)
    if inner <= FLOW_TOL:
        return math.inf
    union = set(A) | set(B)
    rest = [v for v in m.nodes if v not in union]
    if not rest:
        return 0.0
    return u_star(m, sorted(union), rest) / inner
