"""Reference solvers used to validate the simulated-machine algorithms and
the reduction layer.

Everything here runs on the host (no miss accounting) and favors clarity
over speed. Size caps keep the cubic enumerations affordable; exceeding a
cap raises SizeError rather than silently grinding. Witness selection is
deterministic: the lexicographically smallest index tuple wins.
"""

from __future__ import annotations

import heapq
from collections import deque

import numpy as np

from .machine import INF
from .graphs import Graph

CUBIC_CAP = 64
PAIR_CAP = 4096
EXHAUSTIVE_CAP = 5


class SizeError(ValueError):
    pass


class NegativeCycleError(ValueError):
    pass


def _cap(n, cap, what):
    if n > cap:
        raise SizeError(f"{what}: size {n} exceeds oracle cap {cap}")


# -- all-pairs distances -----------------------------------------------------

def bfs_all(g: Graph):
    """All-pairs hop distances. Requires unit weights."""
    for e in g.edges:
        if g.weighted and e[2] != 1:
            raise ValueError("bfs_all needs unit weights")
    adj = g.adj()
    D = np.full((g.n, g.n), INF, dtype=np.int64)
    for s in range(g.n):
        D[s, s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            du = D[s, u]
            for v, _ in adj[u]:
                if D[s, v] == INF:
                    D[s, v] = du + 1
                    q.append(v)
    return D


def dijkstra_all(g: Graph):
    """All-pairs distances, non-negative weights."""
    for e in g.edges:
        if g.weighted and e[2] < 0:
            raise ValueError("negative weight; use bellman_ford_all")
    adj = g.adj()
    D = np.full((g.n, g.n), INF, dtype=np.int64)
    for s in range(g.n):
        dist = D[s]
        dist[s] = 0
        heap = [(0, s)]
        while heap:
            du, u = heapq.heappop(heap)
            if du > dist[u]:
                continue
            for v, w in adj[u]:
                nd = du + w
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
    return D


def bellman_ford_all(g: Graph):
    """All-pairs distances allowing negative weights. A negative cycle
    reachable from any source raises NegativeCycleError."""
    arcs = g.arcs()
    D = np.full((g.n, g.n), INF, dtype=np.int64)
    for s in range(g.n):
        dist = [INF] * g.n
        dist[s] = 0
        for _ in range(g.n - 1):
            changed = False
            for u, v, w in arcs:
                if dist[u] < INF and dist[u] + w < dist[v]:
                    dist[v] = dist[u] + w
                    changed = True
            if not changed:
                break
        for u, v, w in arcs:
            if dist[u] < INF and dist[u] + w < dist[v]:
                raise NegativeCycleError(
                    f"negative cycle reachable from node {s}")
        D[s] = dist
    return D


def shortest_paths(g: Graph):
    """Dispatch on edge weights: BFS for unit, Dijkstra for non-negative,
    Bellman-Ford otherwise."""
    if not g.weighted:
        return bfs_all(g)
    ws = [e[2] for e in g.edges]
    if all(w == 1 for w in ws):
        return bfs_all(g)
    if all(w >= 0 for w in ws):
        return dijkstra_all(g)
    return bellman_ford_all(g)


def floyd_warshall(D0):
    """Matrix-form APSP: D0 is n x n with 0 diagonal and INF non-edges.
    Negative diagonal after closure raises NegativeCycleError."""
    D = np.array(D0, dtype=np.int64, copy=True)
    n = D.shape[0]
    for k in range(n):
        # INF + negative stays astronomically large, clamped below
        D = np.minimum(D, D[:, k : k + 1] + D[k : k + 1, :])
    D[D > INF // 2] = INF
    if (np.diag(D) < 0).any():
        raise NegativeCycleError("negative cycle on diagonal")
    return D


# -- derived distance statistics ---------------------------------------------

def eccentricities(D):
    return [int(D[v].max()) for v in range(D.shape[0])]


def diameter(D):
    return max(eccentricities(D))


def radius(D):
    return min(eccentricities(D))


def row_total(D, v):
    """Sum of one row as a python int (INF-safe, no int64 overflow)."""
    return sum(int(x) for x in D[v])


def median(D):
    """Node minimizing total distance to all nodes; smallest index on ties."""
    best, best_v = None, None
    for v in range(D.shape[0]):
        t = row_total(D, v)
        if best is None or t < best:
            best, best_v = t, v
    return best_v


def wiener(D):
    """Sum of distances over ordered pairs; INF if any pair is unreachable."""
    if (np.asarray(D) >= INF).any() and D.shape[0] > 1:
        return INF
    return sum(int(x) for row in D for x in row)


def wiener_subset(D, X, T):
    """Sum of d(x, t) over ordered pairs X x T; INF if any is unreachable."""
    total = 0
    for x in X:
        for t in T:
            d = int(D[x, t])
            if d >= INF:
                return INF
            total += d
    return total


def distance_count_tables(D):
    """Per-node reachability counts.

    T[i][j] = #nodes at distance <= j for j in 0..2; S[i] = exact counts at
    distance 0, 1, 2, and >= 3 (unreachable included in the last bucket).
    """
    n = D.shape[0]
    T = [[0, 0, 0] for _ in range(n)]
    S = [[0, 0, 0, 0] for _ in range(n)]
    for i in range(n):
        for j in range(3):
            T[i][j] = int((D[i] <= j).sum())
        S[i][0] = int((D[i] == 0).sum())
        S[i][1] = int((D[i] == 1).sum())
        S[i][2] = int((D[i] == 2).sum())
        S[i][3] = n - S[i][0] - S[i][1] - S[i][2]
    return T, S


# -- vector problems ---------------------------------------------------------

def ov_brute(U, V):
    """Orthogonal-pair existence over 0/1 vectors. Returns (found, witness)
    with witness = smallest (i, j) or None."""
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    _cap(max(U.shape[0], V.shape[0]), PAIR_CAP, "ov_brute")
    if U.shape[1] != V.shape[1]:
        raise ValueError("dimension mismatch")
    hits = np.argwhere(U @ V.T == 0)
    if hits.size == 0:
        return False, None
    i, j = hits[0]
    return True, (int(i), int(j))


def hs_brute(A, B):
    """Is there a row of A with positive inner product against every row
    of B?"""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    _cap(max(A.shape[0], B.shape[0]), PAIR_CAP, "hs_brute")
    if A.shape[1] != B.shape[1]:
        raise ValueError("dimension mismatch")
    good = (A @ B.T > 0).all(axis=1)
    idx = np.flatnonzero(good)
    if idx.size == 0:
        return False, None
    return True, int(idx[0])


# -- sum problems -------------------------------------------------------------

def three_sum_brute(A, B, C):
    """Three-list form: exists a in A, b in B, c in C with a + b + c = 0.
    Returns (found, witness (i, j, k) or None)."""
    _cap(max(len(A), len(B), len(C)), PAIR_CAP, "three_sum_brute")
    first = {}
    for k, c in enumerate(C):
        if c not in first:
            first[c] = k
    for i, a in enumerate(A):
        for j, b in enumerate(B):
            k = first.get(-(a + b))
            if k is not None:
                return True, (i, j, k)
    return False, None


def three_sum_set_brute(S):
    """Single-set variant: exists a, b, c in S with a + b = c. Kept for
    cross-checking generators; the reduction layer uses the three-list form."""
    _cap(len(S), PAIR_CAP, "three_sum_set_brute")
    vals = set(S)
    for i, a in enumerate(S):
        for b in S[i:]:
            if a + b in vals:
                return True
    return False


def conv3sum_brute(A):
    """Single-list convolution form: exists i, j with i + j < n and
    A[i] + A[j] + A[i+j] = 0 (i = j allowed)."""
    n = len(A)
    _cap(n, PAIR_CAP, "conv3sum_brute")
    for i in range(n):
        for j in range(n - i):
            if A[i] + A[j] + A[i + j] == 0:
                return True, (i, j)
    return False, None


def conv3sum_brute3(A, B, C):
    """Three-list convolution form: exists x, y with x + y < n and
    A[x] + B[y] + C[x+y] = 0."""
    n = len(A)
    if len(B) != n or len(C) != n:
        raise ValueError("lists must share a length")
    _cap(n, PAIR_CAP, "conv3sum_brute3")
    for x in range(n):
        for y in range(n - x):
            if A[x] + B[y] + C[x + y] == 0:
                return True, (x, y)
    return False, None


# -- matrix problems ----------------------------------------------------------

def triangle_brute(wxy, wyz, wzx, mode="zero"):
    """Tripartite triangle search: a triple (x, y, z) whose edge weights sum
    to zero ("zero") or below zero ("negative"). Returns (found, witness)."""
    if mode not in ("zero", "negative"):
        raise ValueError(f"unknown mode {mode!r}")
    wxy = np.asarray(wxy, dtype=np.int64)
    wyz = np.asarray(wyz, dtype=np.int64)
    wzx = np.asarray(wzx, dtype=np.int64)
    _cap(max(wxy.shape[0], wxy.shape[1], wyz.shape[1]), CUBIC_CAP,
         "triangle_brute")
    sums = wxy[:, :, None] + wyz[None, :, :] + wzx.T[:, None, :]
    mask = (sums == 0) if mode == "zero" else (sums < 0)
    hits = np.argwhere(mask)
    if hits.size == 0:
        return False, None
    x, y, z = hits[0]
    return True, (int(x), int(y), int(z))


def minplus_brute(A, B):
    """(min,+) product with smallest-index witnesses: V[i,k] = min_j
    A[i,j] + B[j,k], S[i,k] = the least j attaining it."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape[1] != B.shape[0]:
        raise ValueError("inner dimensions disagree")
    _cap(max(A.shape[0], A.shape[1], B.shape[1]), CUBIC_CAP, "minplus_brute")
    T = A[:, :, None] + B[None, :, :]
    # the unreachable sentinel absorbs: inf + anything = inf
    bad = (A >= INF)[:, :, None] | (B >= INF)[None, :, :]
    T[bad] = INF
    V = T.min(axis=1)
    S = T.argmin(axis=1)  # first occurrence = smallest j
    return V, S.astype(np.int64)


# -- girth and path oracles ---------------------------------------------------

def stsp_brute(g: Graph, s, t):
    """Shortest s-t distance (INF when unreachable)."""
    D = shortest_paths(g)
    return int(D[s, t])


def girth_through_edge_brute(g: Graph, u, v):
    """Length of the shortest cycle using edge (u, v); INF if none.

    Undirected: drop the edge, then w(u,v) + d(u, v). Directed u->v: drop it,
    then w(u,v) + d(v, u).
    """
    w = None
    for e in g.edges:
        if (e[0], e[1]) == (u, v) or (not g.directed and (e[0], e[1]) == (v, u)):
            w = g.weight(e)
            break
    if w is None:
        raise ValueError(f"edge ({u},{v}) not present")
    h = g.without_edge(u, v)
    D = shortest_paths(h)
    back = int(D[v, u]) if g.directed else int(D[u, v])
    return INF if back >= INF else w + back


def girth_through_vertex_brute(g: Graph, v):
    """Length of the shortest cycle visiting v; INF if none.

    Undirected: over incident-edge pairs (v-a, v-b), a != b, take
    w(va) + w(vb) + d(a, b) in the graph without v. Directed: pair every
    out-arc v->b with every in-arc a->v.
    """
    h = g.without_vertex(v)
    D = shortest_paths(h)
    best = INF
    if g.directed:
        outs = [(e[1], g.weight(e)) for e in g.edges if e[0] == v]
        ins = [(e[0], g.weight(e)) for e in g.edges if e[1] == v]
        for b, wb in outs:
            for a, wa in ins:
                # a == b gives the 2-cycle v->b->v, which is legitimate
                mid = int(D[b, a])
                if mid < INF:
                    best = min(best, wb + mid + wa)
    else:
        inc = [(e[1] if e[0] == v else e[0], g.weight(e))
               for e in g.incident_edges(v)]
        for i in range(len(inc)):
            for j in range(i + 1, len(inc)):
                a, wa = inc[i]
                b, wb = inc[j]
                mid = int(D[a, b])
                if mid < INF:
                    best = min(best, wa + wb + mid)
    return best


# -- exhaustive graph enumeration ---------------------------------------------

def enumerate_graphs(n, connected_only=False):
    """Yield every simple undirected graph on n labeled nodes. Capped small:
    the count is 2^(n choose 2)."""
    _cap(n, EXHAUSTIVE_CAP, "enumerate_graphs")
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(pairs)):
        edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
        g = Graph(n, edges)
        if connected_only and not is_connected(g):
            continue
        yield g


def is_connected(g: Graph):
    if g.n == 0:
        return True
    adj = g.adj()
    seen = {0}
    q = deque([0])
    while q:
        u = q.popleft()
        for v, _ in adj[u]:
            if v not in seen:
                seen.add(v)
                q.append(v)
    return len(seen) == g.n
