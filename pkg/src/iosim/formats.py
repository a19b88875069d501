"""Text instance formats.

All formats are line oriented. Blank lines and lines starting with '#' are
ignored everywhere. Malformed content raises FormatError carrying the
1-based line number.

graph        header "n m directed weighted" (flags 0/1), then m lines
             "u v" (or "u v w" when weighted).
intlist      header "n", then n lines of one integer.
three-lists  header "na nb nc", then na+nb+nc integer lines (lists stacked).
vectors      header "nu nv d", then nu+nv lines of d 0/1 entries
             (set U stacked above set V).
matrix       header "rows cols", then `rows` lines of `cols` integers.
"""

from __future__ import annotations

import numpy as np


class FormatError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _content_lines(text):
    for i, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        yield i, s


def _ints(s, lineno, expect=None):
    parts = s.split()
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise FormatError(f"non-integer token in {s!r}", lineno) from None
    if expect is not None and len(vals) != expect:
        raise FormatError(
            f"expected {expect} integers, got {len(vals)}", lineno)
    return vals


class GraphText:
    """Parsed graph file: header flags plus raw edge tuples."""

    def __init__(self, n, directed, weighted, edges):
        self.n = n
        self.directed = bool(directed)
        self.weighted = bool(weighted)
        self.edges = edges

    @property
    def m(self):
        return len(self.edges)


def parse_graph(text) -> GraphText:
    it = _content_lines(text)
    try:
        lineno, s = next(it)
    except StopIteration:
        raise FormatError("empty graph file") from None
    n, m, directed, weighted = _ints(s, lineno, expect=4)
    if n < 0 or m < 0 or directed not in (0, 1) or weighted not in (0, 1):
        raise FormatError("bad header values", lineno)
    per_line = 3 if weighted else 2
    edges = []
    for lineno, s in it:
        if len(edges) == m:
            raise FormatError("more edge lines than header m", lineno)
        vals = _ints(s, lineno, expect=per_line)
        u, v = vals[0], vals[1]
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"node id out of range [0,{n})", lineno)
        edges.append(tuple(vals))
    if len(edges) != m:
        raise FormatError(f"header promises {m} edges, file has {len(edges)}")
    return GraphText(n, directed, weighted, edges)


def write_graph(g: GraphText) -> str:
    lines = [f"{g.n} {g.m} {int(g.directed)} {int(g.weighted)}"]
    for e in g.edges:
        lines.append(" ".join(str(x) for x in e))
    return "\n".join(lines) + "\n"


def parse_intlist(text) -> list:
    it = _content_lines(text)
    try:
        lineno, s = next(it)
    except StopIteration:
        raise FormatError("empty integer-list file") from None
    (n,) = _ints(s, lineno, expect=1)
    if n < 0:
        raise FormatError("negative count", lineno)
    vals = []
    for lineno, s in it:
        if len(vals) == n:
            raise FormatError("more values than header count", lineno)
        vals.append(_ints(s, lineno, expect=1)[0])
    if len(vals) != n:
        raise FormatError(f"header promises {n} values, file has {len(vals)}")
    return vals


def write_intlist(vals) -> str:
    return "\n".join([str(len(vals))] + [str(int(v)) for v in vals]) + "\n"


def parse_three_lists(text):
    it = _content_lines(text)
    try:
        lineno, s = next(it)
    except StopIteration:
        raise FormatError("empty three-list file") from None
    counts = _ints(s, lineno, expect=3)
    if any(c < 0 for c in counts):
        raise FormatError("negative count", lineno)
    total = sum(counts)
    vals = []
    for lineno, s in it:
        if len(vals) == total:
            raise FormatError("more values than header counts", lineno)
        vals.append(_ints(s, lineno, expect=1)[0])
    if len(vals) != total:
        raise FormatError(f"header promises {total} values, file has {len(vals)}")
    a = vals[:counts[0]]
    b = vals[counts[0]:counts[0] + counts[1]]
    c = vals[counts[0] + counts[1]:]
    return a, b, c


def write_three_lists(a, b, c) -> str:
    lines = [f"{len(a)} {len(b)} {len(c)}"]
    for lst in (a, b, c):
        lines.extend(str(int(v)) for v in lst)
    return "\n".join(lines) + "\n"


def parse_vectors(text):
    """Two stacked 0/1 vector sets; returns (U, V) as int64 arrays."""
    it = _content_lines(text)
    try:
        lineno, s = next(it)
    except StopIteration:
        raise FormatError("empty vectors file") from None
    nu, nv, d = _ints(s, lineno, expect=3)
    if nu < 0 or nv < 0 or d < 1:
        raise FormatError("bad header values", lineno)
    rows = []
    for lineno, s in it:
        if len(rows) == nu + nv:
            raise FormatError("more vector lines than header promises", lineno)
        vals = _ints(s, lineno, expect=d)
        if any(v not in (0, 1) for v in vals):
            raise FormatError("vector entries must be 0 or 1", lineno)
        rows.append(vals)
    if len(rows) != nu + nv:
        raise FormatError(
            f"header promises {nu + nv} vectors, file has {len(rows)}")
    arr = np.asarray(rows, dtype=np.int64).reshape(nu + nv, d)
    return arr[:nu], arr[nu:]


def write_vectors(U, V) -> str:
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    lines = [f"{U.shape[0]} {V.shape[0]} {U.shape[1]}"]
    for row in list(U) + list(V):
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix(text) -> np.ndarray:
    it = _content_lines(text)
    try:
        lineno, s = next(it)
    except StopIteration:
        raise FormatError("empty matrix file") from None
    r, c = _ints(s, lineno, expect=2)
    if r < 0 or c < 1:
        raise FormatError("bad header values", lineno)
    rows = []
    for lineno, s in it:
        if len(rows) == r:
            raise FormatError("more rows than header promises", lineno)
        rows.append(_ints(s, lineno, expect=c))
    if len(rows) != r:
        raise FormatError(f"header promises {r} rows, file has {len(rows)}")
    return np.asarray(rows, dtype=np.int64).reshape(r, c)


def write_matrix(a) -> str:
    a = np.asarray(a, dtype=np.int64)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for row in a:
        lines.append(" ".join(str(int(x)) for x in row))
    return "\n".join(lines) + "\n"


def parse_tripartite_weights(text):
    """Three stacked n x n weight matrices (file header "3n n")."""
    m = parse_matrix(text)
    if m.shape[0] != 3 * m.shape[1]:
        raise FormatError("tripartite weights need 3n rows of n columns")
    n = m.shape[1]
    return m[:n], m[n:2 * n], m[2 * n:]


def write_tripartite_weights(wxy, wyz, wzx) -> str:
    stack = np.concatenate([np.asarray(x, dtype=np.int64) for x in
                            (wxy, wyz, wzx)], axis=0)
    return write_matrix(stack)
