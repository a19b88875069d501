"""External-memory building blocks: scans, multiway merge sort, and
deterministic on-disk layouts for arrays, graphs, and matrices.

Everything here moves data through an IoMachine so transfer counts are real.
Host-side python state is limited to O(1) buffers per open stream (the model's
"in cache" working set); bulk data lives on the machine disk.
"""

from __future__ import annotations

import heapq

import numpy as np

from .machine import ConfigError, IoMachine, Region


class LayoutError(ValueError):
    pass


class DiskArray:
    """Contiguous array of fixed-width elements on a machine disk.

    width > 1 stores each element as that many consecutive words (row-major),
    which is how sort payloads and (neighbor, weight) pairs are kept.
    """

    def __init__(self, machine: IoMachine, region: Region, length, width=1):
        if length * width > region.length:
            raise LayoutError("region too small for declared length")
        self.machine = machine
        self.region = region
        self.length = int(length)
        self.width = int(width)

    @classmethod
    def from_values(cls, machine, values, width=None):
        vals = np.asarray(values, dtype=np.int64)
        if vals.ndim == 1:
            if width not in (None, 1):
                vals = vals.reshape(-1, width)
        if vals.ndim == 2:
            width = vals.shape[1]
        else:
            width = 1
        n = vals.shape[0]
        region = machine.alloc(n * width)
        if n:
            machine.write_range(region.base, vals.reshape(-1))
        return cls(machine, region, n, width)

    @classmethod
    def zeros(cls, machine, length, width=1):
        region = machine.alloc(length * width)
        return cls(machine, region, length, width)

    def __len__(self):
        return self.length

    def address(self, i):
        return self.region.base + i * self.width

    def read_element(self, i):
        vals = self.machine.read_range(self.address(i), self.width)
        return int(vals[0]) if self.width == 1 else tuple(int(v) for v in vals)

    def read_all(self) -> np.ndarray:
        """Charged read of the whole array; returns a detached copy,
        shape (n,) for width 1 and (n, width) otherwise."""
        flat = np.array(self.machine.read_range(self.region.base,
                                                self.length * self.width))
        return flat if self.width == 1 else flat.reshape(self.length, self.width)


def scan_map(a: DiskArray, fn, out=None) -> DiskArray:
    """Elementwise map over a disk array: out[i] = fn(a[i]).

    One sequential read stream plus one sequential write stream, so a cold
    cache pays at most 2*ceil(n*width/B) + O(1) misses. fn sees either a word
    (width 1) or a width-tuple; vectorized callables are used when they accept
    a whole chunk.
    """
    m = a.machine
    if out is None:
        out = DiskArray.zeros(m, a.length, a.width)
    chunk_words = max(m.B, 1024) // a.width * a.width
    chunk_words = max(chunk_words, a.width)
    total = a.length * a.width
    pos = 0
    while pos < total:
        k = min(chunk_words, total - pos)
        vals = np.array(m.read_range(a.region.base + pos, k))
        if a.width > 1:
            vals = vals.reshape(-1, a.width)
        mapped = None
        try:
            cand = fn(vals)
            cand = np.asarray(cand, dtype=np.int64)
            if cand.shape == vals.shape:
                mapped = cand
        except (TypeError, ValueError):
            mapped = None
        if mapped is None:
            if a.width == 1:
                mapped = np.fromiter((fn(int(v)) for v in vals), dtype=np.int64,
                                     count=vals.shape[0])
            else:
                mapped = np.array([fn(tuple(int(x) for x in row))
                                   for row in vals], dtype=np.int64)
        m.write_range(out.region.base + pos, mapped.reshape(-1))
        pos += k
    return out


def _run_reader(m, base, nelems, width, batch_elems):
    """Yield elements of one sorted run, reading batch_elems at a time."""
    pos = 0
    while pos < nelems:
        k = min(batch_elems, nelems - pos)
        flat = np.array(m.read_range(base + pos * width, k * width))
        if width == 1:
            for v in flat:
                yield int(v)
        else:
            rows = flat.reshape(k, width)
            for r in rows:
                yield tuple(int(x) for x in r)
        pos += k


class _RunWriter:
    def __init__(self, m, base, width, batch_words):
        self.m = m
        self.base = base
        self.width = width
        self.buf = []
        self.batch = max(batch_words, width)
        self.written = 0

    def put(self, elem):
        if self.width == 1:
            self.buf.append(elem)
        else:
            self.buf.extend(elem)
        if len(self.buf) >= self.batch:
            self.flush()

    def flush(self):
        if self.buf:
            self.m.write_range(self.base + self.written,
                               np.asarray(self.buf, dtype=np.int64))
            self.written += len(self.buf)
            self.buf = []


def ext_sort(a: DiskArray, key=None) -> DiskArray:
    """Stable multiway mergesort of a disk array.

    Runs of ~M words are formed with an in-cache stable sort, then merged with
    fan-in M/B - 1 until one run remains: O((n/B) log_{M/B}(n/B) + n/B)
    misses. key maps an element (word or width-tuple) to its sort key; default
    is the first word.
    """
    m = a.machine
    if m.M < 3 * m.B:
        raise ConfigError(f"ext_sort needs M >= 3B, got M={m.M} B={m.B}")
    n, w = a.length, a.width
    out = DiskArray.zeros(m, n, w)
    if n == 0:
        return out

    def keyof(elem):
        if key is not None:
            return key(elem)
        return elem if w == 1 else elem[0]

    # run formation: sort M-word chunks in cache
    run_elems = max(1, m.M // w)
    scratch = DiskArray.zeros(m, n, w)
    runs = []  # (buffer, start_elem, n_elems)
    pos = 0
    while pos < n:
        k = min(run_elems, n - pos)
        flat = np.array(m.read_range(a.address(pos), k * w))
        rows = flat.reshape(k, w) if w > 1 else flat
        if key is None and w == 1:
            ordered = np.sort(flat, kind="stable")
        else:
            elems = ([int(v) for v in flat] if w == 1 else
                     [tuple(int(x) for x in r) for r in rows])
            order = sorted(range(k), key=lambda i: keyof(elems[i]))
            ordered = rows[np.asarray(order)] if w > 1 else flat[np.asarray(order)]
        m.write_range(scratch.address(pos), np.asarray(ordered).reshape(-1))
        runs.append((scratch, pos, k))
        pos += k

    fan_in = m.M // m.B - 1
    batch_elems = max(1, m.B // w)
    ping, pong = scratch, out
    while len(runs) > 1:
        next_runs = []
        wpos = 0
        for g in range(0, len(runs), fan_in):
            group = runs[g:g + fan_in]
            total = sum(r[2] for r in group)
            writer = _RunWriter(m, pong.address(wpos), w, m.B)
            streams = [_run_reader(m, buf.address(start), cnt, w, batch_elems)
                       for (buf, start, cnt) in group]
            for elem in heapq.merge(*streams, key=keyof):
                writer.put(elem)
            writer.flush()
            next_runs.append((pong, wpos, total))
            wpos += total
        runs = next_runs
        ping, pong = pong, ping
    final_buf, start, cnt = runs[0]
    if final_buf is not out:
        # copy the single remaining run into the output buffer
        pos = 0
        step = max(1, 4096 // w) * w
        total = cnt * w
        while pos < total:
            k = min(step, total - pos)
            vals = np.array(m.read_range(final_buf.address(start) + pos, k))
            m.write_range(out.region.base + pos, vals)
            pos += k
    return out


class GraphLayout:
    """CSR adjacency layout on disk.

    offsets_region holds n+1 words; data_region holds the concatenated lists.
    Unweighted lists store neighbor ids (element width 1); weighted lists
    store (neighbor, weight) pairs (width 2). offsets count elements.

    The annotated form (unweighted only) prefixes each list with three header
    words [node_id, dist_two_count, already_close]; its offsets count words.
    """

    HEADER_WORDS = 3

    def __init__(self, machine, n, m, directed, weighted, offsets_region,
                 data_region, lists_sorted, annotated=False):
        self.machine = machine
        self.n = n
        self.m = m
        self.directed = directed
        self.weighted = weighted
        self.offsets_region = offsets_region
        self.data_region = data_region
        self.lists_sorted = lists_sorted
        self.annotated = annotated
        self.elem_width = 2 if weighted else 1

    # offsets in ELEMENT units (plain) or WORD units (annotated)
    def _bounds(self, u):
        o = self.machine.read_range(self.offsets_region.base + u, 2)
        return int(o[0]), int(o[1])

    def degree(self, u) -> int:
        lo, hi = self._bounds(u)
        if self.annotated:
            return hi - lo - self.HEADER_WORDS
        return hi - lo

    def list_address(self, u, lo):
        base = self.data_region.base
        if self.annotated:
            return base + lo + self.HEADER_WORDS
        return base + lo * self.elem_width

    def neighbors(self, u) -> np.ndarray:
        """Charged read of u's list: ids (unweighted) or (id, weight) rows."""
        lo, hi = self._bounds(u)
        if self.annotated:
            vals = np.array(self.machine.read_range(
                self.data_region.base + lo + self.HEADER_WORDS,
                hi - lo - self.HEADER_WORDS))
            return vals
        vals = np.array(self.machine.read_range(
            self.data_region.base + lo * self.elem_width,
            (hi - lo) * self.elem_width))
        return vals.reshape(-1, 2) if self.weighted else vals

    def read_header(self, u):
        if not self.annotated:
            raise LayoutError("layout is not annotated")
        lo, _ = self._bounds(u)
        vals = self.machine.read_range(self.data_region.base + lo,
                                       self.HEADER_WORDS)
        return tuple(int(v) for v in vals)

    def write_header(self, u, node_id=None, dist_two=None, already_close=None):
        if not self.annotated:
            raise LayoutError("layout is not annotated")
        lo, _ = self._bounds(u)
        base = self.data_region.base + lo
        if node_id is not None:
            self.machine.write(base, node_id)
        if dist_two is not None:
            self.machine.write(base + 1, dist_two)
        if already_close is not None:
            self.machine.write(base + 2, already_close)

    def offsets_array(self) -> np.ndarray:
        return np.array(self.machine.read_range(self.offsets_region.base,
                                                self.n + 1))

    def arcs(self):
        """Enumerate stored arcs (u, v) or (u, v, w) in layout order (charged)."""
        offs = self.offsets_array()
        out = []
        for u in range(self.n):
            lst = self.neighbors(u)
            if self.weighted:
                for v, wt in lst:
                    out.append((u, int(v), int(wt)))
            else:
                for v in lst:
                    out.append((u, int(v)))
        return out


def _edge_array(edges, weighted):
    cols = 3 if weighted else 2
    arr = np.asarray(list(edges), dtype=np.int64)
    if arr.size == 0:
        return np.zeros((0, cols), dtype=np.int64)
    if arr.ndim != 2 or arr.shape[1] != cols:
        raise LayoutError(
            f"edges must be {'(u,v,w)' if weighted else '(u,v)'} rows")
    return arr


def build_graph_layout(machine, n, edges, directed=False, weighted=False,
                       sort_lists=True, annotated=False) -> GraphLayout:
    """Deterministic CSR layout via external sort of the arc list.

    Undirected edges are stored in both directions; m counts stored arcs.
    sort_lists=True orders every list ascending (stable two-key sort);
    otherwise input arc order within each list is preserved.
    """
    if annotated and weighted:
        raise LayoutError("annotated layout is unweighted")
    arr = _edge_array(edges, weighted)
    if arr.size and (arr[:, 0].min() < 0 or arr[:, 0].max() >= n
                     or arr[:, 1].min() < 0 or arr[:, 1].max() >= n):
        raise LayoutError(f"node id out of range [0,{n})")
    if not directed:
        rev = arr.copy()
        rev[:, 0], rev[:, 1] = arr[:, 1].copy(), arr[:, 0].copy()
        arr = np.concatenate([arr, rev], axis=0)
    m_arcs = arr.shape[0]

    width = 3 if weighted else 2
    darr = DiskArray.from_values(machine, arr) if m_arcs else \
        DiskArray.zeros(machine, 0, width)
    if sort_lists:
        skey = (lambda e: (e[0], e[1]))
    else:
        skey = (lambda e: e[0])  # stable: preserves input order inside lists
    sorted_arcs = ext_sort(darr, key=skey)

    # one streaming pass: emit data array and per-node offsets
    header = GraphLayout.HEADER_WORDS if annotated else 0
    elem_w = 2 if weighted else 1
    data_words = m_arcs * elem_w + (n * header if annotated else 0)
    offsets_region = machine.alloc(n + 1)
    data_region = machine.alloc(max(data_words, 0))

    offs = np.zeros(n + 1, dtype=np.int64)
    degrees = np.zeros(n, dtype=np.int64)
    if m_arcs:
        src = np.array(machine.read_range(sorted_arcs.region.base,
                                          m_arcs * width)).reshape(m_arcs, width)
        np.add.at(degrees, src[:, 0], 1)
    if annotated:
        offs[1:] = np.cumsum(degrees + header)
    else:
        offs[1:] = np.cumsum(degrees)
    machine.write_range(offsets_region.base, offs)

    if annotated:
        pos = 0
        start = 0
        for u in range(n):
            d = int(degrees[u])
            block = np.zeros(header + d, dtype=np.int64)
            block[0] = u
            if d:
                block[header:] = src[start:start + d, 1]
            machine.write_range(data_region.base + pos, block)
            pos += header + d
            start += d
    elif m_arcs:
        if weighted:
            machine.write_range(data_region.base, src[:, 1:3].reshape(-1))
        else:
            machine.write_range(data_region.base, src[:, 1])

    return GraphLayout(machine, n, m_arcs, directed, weighted, offsets_region,
                       data_region, lists_sorted=sort_lists, annotated=annotated)


def sort_adjacency_lists(g: GraphLayout) -> GraphLayout:
    """Rebuild a layout with every adjacency list ascending (cost O(sort(m)))."""
    arcs = g.arcs()
    return build_graph_layout(g.machine, g.n, arcs, directed=True,
                              weighted=g.weighted, sort_lists=True,
                              annotated=g.annotated)


class Matrix:
    """Square n x n word matrix on disk, row-major or tiled.

    Tiled form: the tile grid is swept row-major; each tile is stored
    contiguously, itself row-major, with ragged edge tiles kept at their true
    size. Tile (ti, tj) starts at a deterministic offset.
    """

    def __init__(self, machine, region, n, layout="row", tile=0):
        self.machine = machine
        self.region = region
        self.n = int(n)
        self.layout = layout
        self.tile = int(tile)
        if layout not in ("row", "tiled"):
            raise LayoutError(f"unknown layout {layout!r}")
        if layout == "tiled" and not (1 <= self.tile <= self.n):
            raise LayoutError("tile side must be in [1, n]")

    @classmethod
    def from_array(cls, machine, arr):
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise LayoutError("matrix must be square")
        n = arr.shape[0]
        region = machine.alloc(n * n)
        if n:
            machine.write_range(region.base, arr.reshape(-1))
        return cls(machine, region, n)

    def addr(self, i, j):
        if self.layout != "row":
            raise LayoutError("addr() is for row-major layout")
        return self.region.base + i * self.n + j

    def to_array(self) -> np.ndarray:
        if self.layout == "row":
            flat = np.array(self.machine.read_range(self.region.base,
                                                    self.n * self.n))
            return flat.reshape(self.n, self.n)
        out = np.zeros((self.n, self.n), dtype=np.int64)
        t = self.tile
        for ti in range(0, self.n, t):
            for tj in range(0, self.n, t):
                h = min(t, self.n - ti)
                w = min(t, self.n - tj)
                base = self.tile_base(ti // t, tj // t)
                vals = np.array(self.machine.read_range(base, h * w))
                out[ti:ti + h, tj:tj + w] = vals.reshape(h, w)
        return out

    def tile_base(self, bi, bj):
        """Disk address of tile (bi, bj) in the tiled layout."""
        if self.layout != "tiled":
            raise LayoutError("tile_base() is for tiled layout")
        t = self.tile
        n = self.n
        nbj = -(-n // t)
        full_rows_h = t
        base = self.region.base
        # rows of tiles above
        for r in range(bi):
            h = min(t, n - r * t)
            base += h * n
        h = min(t, n - bi * t)
        for c in range(bj):
            w = min(t, n - c * t)
            base += h * w
        return base

    def tile_dims(self, bi, bj):
        t = self.tile
        return min(t, self.n - bi * t), min(t, self.n - bj * t)


def tile_matrix(a: Matrix, t) -> Matrix:
    """Copy a row-major matrix into tiled layout (contents preserved)."""
    if a.layout != "row":
        raise LayoutError("tile_matrix expects a row-major source")
    t = int(t)
    if not (1 <= t <= a.n):
        raise LayoutError("tile side must be in [1, n]")
    m = a.machine
    out = Matrix(m, m.alloc(a.n * a.n), a.n, layout="tiled", tile=t)
    for ti in range(0, a.n, t):
        for tj in range(0, a.n, t):
            h = min(t, a.n - ti)
            w = min(t, a.n - tj)
            dst = out.tile_base(ti // t, tj // t)
            for r in range(h):
                vals = m.read_range(a.addr(ti + r, tj), w)
                m.write_range(dst + r * w, vals)
    return out


def untile_matrix(a: Matrix) -> Matrix:
    """Inverse of tile_matrix: copy a tiled matrix back to row-major."""
    if a.layout != "tiled":
        raise LayoutError("untile_matrix expects a tiled source")
    m = a.machine
    out = Matrix(m, m.alloc(a.n * a.n), a.n, layout="row")
    t = a.tile
    for ti in range(0, a.n, t):
        for tj in range(0, a.n, t):
            h = min(t, a.n - ti)
            w = min(t, a.n - tj)
            src = a.tile_base(ti // t, tj // t)
            for r in range(h):
                vals = m.read_range(src + r * w, w)
                m.write_range(out.addr(ti + r, tj), vals)
    return out
