"""Network topology: loading, validation, distances, canonical shortest paths.

Node ids are strings and all orderings are plain string order, which is what
makes every downstream result reproducible.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass, field

EARTH_RADIUS_KM = 6371.0

# Relative tolerance for "is this edge on a shortest path" checks.
_REL_TOL = 1e-9


class TopologyError(ValueError):
    """Raised for malformed or inconsistent topology input."""


@dataclass(frozen=True)
class Node:
    id: str
    x: float | None = None
    y: float | None = None
    population: float | None = None

    @property
    def has_coords(self) -> bool:
        return self.x is not None and self.y is not None


def euclidean_distance(ax: float, ay: float, bx: float, by: float) -> float:
    return math.hypot(ax - bx, ay - by)


def great_circle_distance(ax: float, ay: float, bx: float, by: float) -> float:
    """Haversine distance in km; x is longitude and y is latitude, in degrees."""
    lon1, lat1, lon2, lat2 = map(math.radians, (ax, ay, bx, by))
    h = (
        math.sin((lat2 - lat1) / 2.0) ** 2
        + math.cos(lat1) * math.cos(lat2) * math.sin((lon2 - lon1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


class Topology:
    """Undirected, connected, simple graph with nonnegative per-unit edge costs.

    Immutable after construction; safe for concurrent reads.
    """

    def __init__(
        self,
        nodes: list[Node],
        edges: list[tuple[str, str, float]],
        coordinate_system: str = "euclidean",
    ):
        if coordinate_system not in ("euclidean", "geographic"):
            raise TopologyError(f"unknown coordinate_system {coordinate_system!r}")
        self.coordinate_system = coordinate_system
        self.nodes: dict[str, Node] = {}
        for n in nodes:
            if n.id in self.nodes:
                raise TopologyError(f"duplicate node id {n.id!r}")
            self.nodes[n.id] = n
        self.node_ids: tuple[str, ...] = tuple(sorted(self.nodes))

        self.edge_costs: dict[frozenset[str], float] = {}
        self.adj: dict[str, dict[str, float]] = {i: {} for i in self.node_ids}
        for a, b, cost in edges:
            if a == b:
                raise TopologyError(f"self-loop on node {a!r}")
            for end in (a, b):
                if end not in self.nodes:
                    raise TopologyError(f"edge endpoint {end!r} is not a node")
            key = frozenset((a, b))
            if key in self.edge_costs:
                raise TopologyError(f"duplicate edge {a!r}-{b!r}")
            if cost < 0 or not math.isfinite(cost):
                raise TopologyError(f"edge {a!r}-{b!r} has invalid cost {cost}")
            self.edge_costs[key] = cost
            self.adj[a][b] = cost
            self.adj[b][a] = cost

        self._check_connected()

    def _check_connected(self) -> None:
        if not self.node_ids:
            raise TopologyError("topology has no nodes")
        seen = {self.node_ids[0]}
        stack = [self.node_ids[0]]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if len(seen) != len(self.node_ids):
            missing = sorted(set(self.node_ids) - seen)
            raise TopologyError(f"graph is disconnected; unreachable: {missing}")

    @property
    def edges(self) -> list[frozenset[str]]:
        return sorted(self.edge_costs, key=lambda e: tuple(sorted(e)))

    def cost(self, a: str, b: str) -> float:
        return self.edge_costs[frozenset((a, b))]

    def geo_distance(self, a: str, b: str) -> float:
        """Coordinate distance between two nodes (not the graph distance)."""
        na, nb = self.nodes[a], self.nodes[b]
        if not na.has_coords or not nb.has_coords:
            raise TopologyError(f"node {a if not na.has_coords else b!r} has no coordinates")
        if self.coordinate_system == "geographic":
            return great_circle_distance(na.x, na.y, nb.x, nb.y)
        return euclidean_distance(na.x, na.y, nb.x, nb.y)


_NODE_FIELDS = {"id", "x", "y", "population"}
_EDGE_FIELDS = {"a", "b", "cost"}
_TOP_FIELDS = {"coordinate_system", "nodes", "edges"}


def load_topology(source: str) -> Topology:
    """Parse a topology JSON document (text). Unknown fields are rejected.

    Edges without an explicit cost get the coordinate distance between their
    endpoints (Euclidean, or great-circle when coordinate_system is
    "geographic").
    """
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"topology is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise TopologyError("topology document must be a JSON object")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise TopologyError(f"unknown top-level fields: {sorted(unknown)}")
    system = doc.get("coordinate_system", "euclidean")

    nodes = []
    for nd in doc.get("nodes", []):
        unknown = set(nd) - _NODE_FIELDS
        if unknown:
            raise TopologyError(f"unknown node fields: {sorted(unknown)}")
        if "id" not in nd or not isinstance(nd["id"], str):
            raise TopologyError("every node needs a string 'id'")
        nodes.append(
            Node(
                id=nd["id"],
                x=nd.get("x"),
                y=nd.get("y"),
                population=nd.get("population"),
            )
        )
    by_id = {n.id: n for n in nodes}

    edges = []
    for ed in doc.get("edges", []):
        unknown = set(ed) - _EDGE_FIELDS
        if unknown:
            raise TopologyError(f"unknown edge fields: {sorted(unknown)}")
        a, b = ed.get("a"), ed.get("b")
        if a not in by_id or b not in by_id:
            raise TopologyError(f"edge {a!r}-{b!r} references unknown node")
        cost = ed.get("cost")
        if cost is None:
            na, nb = by_id[a], by_id[b]
            if not na.has_coords or not nb.has_coords:
                raise TopologyError(
                    f"edge {a!r}-{b!r} has no cost and an endpoint lacks coordinates"
                )
            if system == "geographic":
                cost = great_circle_distance(na.x, na.y, nb.x, nb.y)
            else:
                cost = euclidean_distance(na.x, na.y, nb.x, nb.y)
        edges.append((a, b, float(cost)))

    return Topology(nodes, edges, coordinate_system=system)


def load_topology_file(path: str) -> Topology:
    with open(path, encoding="utf-8") as fh:
        return load_topology(fh.read())


class ShortestPathIndex:
    """All-pairs distances plus one canonical shortest path per pair.

    Among equal-cost shortest paths, the canonical path (taken from the
    smaller-id endpoint) is the lexicographically smallest node-id sequence;
    the reverse direction is its mirror image, so path(i,j) is always the
    reverse of path(j,i).
    """

    def __init__(self, dist: dict[str, dict[str, float]], paths: dict[tuple[str, str], list[str]]):
        self._dist = dist
        self._paths = paths

    def dist(self, i: str, j: str) -> float:
        return self._dist[i][j]

    def path(self, i: str, j: str) -> list[str]:
        if i == j:
            return [i]
        if i < j:
            return list(self._paths[(i, j)])
        return list(reversed(self._paths[(j, i)]))

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self._paths)


def _dijkstra(t: Topology, source: str) -> dict[str, float]:
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done: set[str] = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, c in t.adj[u].items():
            nd = d + c
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def shortest_paths(t: Topology) -> ShortestPathIndex:
    """All-pairs shortest paths with deterministic lexicographic tie-breaking."""
    dist = {i: _dijkstra(t, i) for i in t.node_ids}
    # exact symmetry: both directions use the smaller-id source's value
    for a_idx, i in enumerate(t.node_ids):
        for j in t.node_ids[a_idx + 1 :]:
            dist[j][i] = dist[i][j]

    paths: dict[tuple[str, str], list[str]] = {}
    ids = t.node_ids
    for a_idx, i in enumerate(ids):
        for j in ids[a_idx + 1 :]:
            target_dist = dist[i][j]
            dj = dist[j]  # dj[u] = dist(u, j) by symmetry
            # Greedy: always step to the smallest-id neighbor that stays on a
            # shortest path; yields the lexicographically least sequence.
            path = [i]
            cur = i
            remaining = target_dist
            while cur != j:
                best = None
                for v in sorted(t.adj[cur]):
                    c = t.adj[cur][v]
                    slack = abs(c + dj[v] - remaining)
                    if slack <= _REL_TOL * max(1.0, target_dist):
                        best = v
                        break
                if best is None:  # numerically impossible on valid input
                    raise RuntimeError(f"no shortest-path successor from {cur} to {j}")
                remaining -= t.adj[cur][best]
                cur = best
                path.append(cur)
            paths[(i, j)] = path
    return ShortestPathIndex(dist, paths)
