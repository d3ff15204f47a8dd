"""Small dense-friendly Dinic max-flow on float capacities.

Graphs here are tiny (a few hundred arcs at most) but the solver is called
hundreds of thousands of times per sweep, so this is written against flat
lists rather than objects.
"""

from __future__ import annotations

_EPS = 1e-12


class FlowNetwork:
    def __init__(self, n: int):
        self.n = n
        self.to: list[int] = []
        self.cap: list[float] = []
        self.head: list[list[int]] = [[] for _ in range(n)]

    def add_arc(self, u: int, v: int, cap: float) -> None:
        if cap <= 0.0:
            return
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0.0)

    def max_flow(self, s: int, t: int) -> float:
        to, cap, head = self.to, self.cap, self.head
        flow = 0.0
        while True:
            # BFS levels on the residual graph
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for a in head[u]:
                    v = to[a]
                    if level[v] < 0 and cap[a] > _EPS:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n
            # iterative DFS blocking flow
            while True:
                path: list[int] = []
                u = s
                while u != t:
                    advanced = False
                    while it[u] < len(head[u]):
                        a = head[u][it[u]]
                        v = to[a]
                        if cap[a] > _EPS and level[v] == level[u] + 1:
                            path.append(a)
                            u = v
                            advanced = True
                            break
                        it[u] += 1
                    if not advanced:
                        level[u] = -1  # dead end
                        if u == s:
                            break
                        u = to[path[-1] ^ 1]
                        path.pop()
                        it[u] += 1
                if u != t:
                    break
                aug = min(cap[a] for a in path)
                for a in path:
                    cap[a] -= aug
                    cap[a ^ 1] += aug
                flow += aug
        return flow
