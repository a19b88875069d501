"""Host-side graph container shared by oracles, generators, and reductions.

Nodes are 0..n-1. Edges are (u, v) or (u, v, w) tuples; undirected graphs
store each edge once and expand to both arcs in adjacency queries. Distances
use the package-wide INF sentinel for "unreachable".
"""

from __future__ import annotations

from .machine import INF
from . import formats


class Graph:
    def __init__(self, n, edges=None, directed=False, weighted=False):
        self.n = int(n)
        self.directed = bool(directed)
        self.weighted = bool(weighted)
        self.edges = []
        for e in (edges or []):
            self.add_edge(*e)

    def add_edge(self, u, v, w=None):
        u, v = int(u), int(v)
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ValueError(f"edge ({u},{v}) out of range [0,{self.n})")
        if self.weighted:
            if w is None:
                raise ValueError("weighted graph needs edge weights")
            self.edges.append((u, v, int(w)))
        else:
            if w is not None and w != 1:
                raise ValueError("unweighted graph takes no weights")
            self.edges.append((u, v))

    @property
    def m(self):
        return len(self.edges)

    def weight(self, e):
        return e[2] if self.weighted else 1

    def adj(self):
        """Adjacency lists of (neighbor, weight) pairs; both directions for
        undirected graphs."""
        lists = [[] for _ in range(self.n)]
        for e in self.edges:
            u, v = e[0], e[1]
            w = self.weight(e)
            lists[u].append((v, w))
            if not self.directed:
                lists[v].append((u, w))
        return lists

    def arcs(self):
        """All stored arcs (u, v, w), expanding undirected edges both ways."""
        out = []
        for e in self.edges:
            u, v = e[0], e[1]
            w = self.weight(e)
            out.append((u, v, w))
            if not self.directed:
                out.append((v, u, w))
        return out

    def has_edge(self, u, v):
        for e in self.edges:
            if (e[0], e[1]) == (u, v):
                return True
            if not self.directed and (e[0], e[1]) == (v, u):
                return True
        return False

    def without_edge(self, u, v):
        """Copy minus one matching stored edge (first match removed)."""
        g = Graph(self.n, directed=self.directed, weighted=self.weighted)
        removed = False
        for e in self.edges:
            same = (e[0], e[1]) == (u, v) or \
                (not self.directed and (e[0], e[1]) == (v, u))
            if same and not removed:
                removed = True
                continue
            g.edges.append(e)
        if not removed:
            raise ValueError(f"edge ({u},{v}) not present")
        return g

    def without_vertex(self, v):
        """Copy with v isolated (ids preserved, incident edges dropped)."""
        g = Graph(self.n, directed=self.directed, weighted=self.weighted)
        g.edges = [e for e in self.edges if e[0] != v and e[1] != v]
        return g

    def copy(self):
        g = Graph(self.n, directed=self.directed, weighted=self.weighted)
        g.edges = list(self.edges)
        return g

    def degree(self, v):
        """Incident-edge count; out-degree for directed graphs."""
        d = 0
        for e in self.edges:
            if e[0] == v:
                d += 1
            elif e[1] == v and not self.directed:
                d += 1
        return d

    def incident_edges(self, v):
        """Undirected: stored edges touching v."""
        return [e for e in self.edges if e[0] == v or e[1] == v]

    # -- constructors --------------------------------------------------------

    @classmethod
    def path(cls, n):
        return cls(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n):
        if n < 3:
            raise ValueError("cycle needs n >= 3")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n):
        return cls(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def star(cls, n):
        """Node 0 is the hub."""
        return cls(n, [(0, i) for i in range(1, n)])

    # -- text format bridge --------------------------------------------------

    @classmethod
    def from_text(cls, text):
        gt = formats.parse_graph(text)
        return cls(gt.n, gt.edges, directed=gt.directed, weighted=gt.weighted)

    def to_text(self):
        return formats.write_graph(
            formats.GraphText(self.n, self.directed, self.weighted, self.edges))

    def to_layout(self, machine, sort_lists=True, annotated=False):
        from .extprims import build_graph_layout
        return build_graph_layout(machine, self.n, self.edges,
                                  directed=self.directed,
                                  weighted=self.weighted,
                                  sort_lists=sort_lists, annotated=annotated)

    def __repr__(self):
        kind = "digraph" if self.directed else "graph"
        return f"Graph({kind}, n={self.n}, m={self.m})"
