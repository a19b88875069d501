"""Hot-loop kernels in two interchangeable backends.

The numba backend jits the loop implementations; the python backend runs the
same loops interpreted (machine-state kernels) or swaps in vectorized numpy
equivalents (compute kernels). Selection: the IOSIM_NUMBA environment variable
("auto" by default, "1"/"on" to require numba, "0"/"off" to force python).
Both backends must produce bit-identical counter updates and results; the test
suite holds them to that.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("IOSIM_NUMBA", "auto").strip().lower()

if _FLAG in ("0", "off", "false", "no"):
    HAVE_NUMBA = False
else:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:
        HAVE_NUMBA = False
        if _FLAG in ("1", "on", "true", "yes"):
            raise RuntimeError("IOSIM_NUMBA requested numba but it is not importable")

# Slots of the shared int64 counter array every machine-state kernel mutates.
MISSES = 0
WRITEBACKS = 1
LOGICAL = 2
RESIDENT = 3
MRU = 4
LRU = 5
FREE_TOP = 6
CTR_SLOTS = 8


# ---------------------------------------------------------------------------
# machine-state kernels (loop form; exact in both backends)
# ---------------------------------------------------------------------------

def _lru_touch_range(lo, hi, mark_dirty, slot_of_line, line_of_slot, prv, nxt,
                     dirty, free_stack, ctr):
    """Touch cache lines lo..hi (inclusive) under LRU replacement.

    Updates recency, fills on miss (evicting the least recently used line,
    counting a writeback when it is dirty), and marks touched lines dirty when
    mark_dirty is set. Miss/writeback/recency updates depend only on the line
    sequence.
    """
    for ln in range(lo, hi + 1):
        s = slot_of_line[ln]
        if s >= 0:
            if ctr[MRU] != s:
                p = prv[s]
                q = nxt[s]
                if p >= 0:
                    nxt[p] = q
                if q >= 0:
                    prv[q] = p
                if ctr[LRU] == s:
                    ctr[LRU] = p
                prv[s] = -1
                nxt[s] = ctr[MRU]
                if ctr[MRU] >= 0:
                    prv[ctr[MRU]] = s
                ctr[MRU] = s
        else:
            ctr[MISSES] += 1
            if ctr[FREE_TOP] > 0:
                ctr[FREE_TOP] -= 1
                s = free_stack[ctr[FREE_TOP]]
                ctr[RESIDENT] += 1
            else:
                s = ctr[LRU]
                if dirty[s]:
                    ctr[WRITEBACKS] += 1
                slot_of_line[line_of_slot[s]] = -1
                p = prv[s]
                if p >= 0:
                    nxt[p] = -1
                ctr[LRU] = p
                prv[s] = -1
            dirty[s] = False
            line_of_slot[s] = ln
            slot_of_line[ln] = s
            prv[s] = -1
            nxt[s] = ctr[MRU]
            if ctr[MRU] >= 0:
                prv[ctr[MRU]] = s
            ctr[MRU] = s
            if ctr[LRU] < 0:
                ctr[LRU] = s
        if mark_dirty:
            dirty[s] = True


def _check_resident_range(lo, hi, slot_of_line):
    """Return the first non-resident line in lo..hi, or -1 if all resident."""
    for ln in range(lo, hi + 1):
        if slot_of_line[ln] < 0:
            return ln
    return -1


# ---------------------------------------------------------------------------
# compute kernels (loop form; the python backend overrides with numpy)
# ---------------------------------------------------------------------------

def _minplus_tile(a, b, accv, accs, j0, inf):
    """Fold one (ti x tj) x (tj x tk) tile pair into min-plus accumulators.

    accv holds current minima, accs the smallest witness index; a strict
    improvement is required to overwrite, so earlier (smaller) witnesses win
    ties. inf is absorbing: any operand at or above it makes the sum inf,
    so unreachable entries never leak finite garbage into the minima.
    """
    ti = a.shape[0]
    tj = a.shape[1]
    tk = b.shape[1]
    for i in range(ti):
        for k in range(tk):
            best = accv[i, k]
            bj = accs[i, k]
            for j in range(tj):
                if a[i, j] >= inf or b[j, k] >= inf:
                    s = inf
                else:
                    s = a[i, j] + b[j, k]
                if s < best:
                    best = s
                    bj = j0 + j
            accv[i, k] = best
            accs[i, k] = bj


def _zero_tri_tile(wxy, wyz, wzx, find_negative):
    """Scan one tile triple for a triangle summing to zero (or below zero)."""
    ti = wxy.shape[0]
    tj = wxy.shape[1]
    tk = wyz.shape[1]
    for i in range(ti):
        for j in range(tj):
            ij = wxy[i, j]
            for k in range(tk):
                s = ij + wyz[j, k] + wzx[k, i]
                if find_negative:
                    if s < 0:
                        return True
                elif s == 0:
                    return True
    return False


def _any_disjoint_pair(data_a, starts_a, ends_a, ids_a,
                       data_b, starts_b, ends_b, ids_b):
    """True if some list from group a and some list from group b are disjoint.

    Lists are sorted runs inside data_a/data_b; pairs with equal ids are
    skipped (a set always meets itself).
    """
    for p in range(starts_a.shape[0]):
        for q in range(starts_b.shape[0]):
            if ids_a[p] == ids_b[q]:
                continue
            i = starts_a[p]
            j = starts_b[q]
            ea = ends_a[p]
            eb = ends_b[q]
            hit = False
            while i < ea and j < eb:
                da = data_a[i]
                db = data_b[j]
                if da == db:
                    hit = True
                    break
                if da < db:
                    i += 1
                else:
                    j += 1
            if not hit:
                return True
    return False


def _flag_list_hits(chunk, data_s, starts_s, ends_s, flags):
    """Set flags[q] for every sorted list q that intersects the sorted chunk."""
    for q in range(starts_s.shape[0]):
        if flags[q]:
            continue
        i = 0
        j = starts_s[q]
        eb = ends_s[q]
        n = chunk.shape[0]
        while i < n and j < eb:
            da = chunk[i]
            db = data_s[j]
            if da == db:
                flags[q] = True
                break
            if da < db:
                i += 1
            else:
                j += 1


def _minplus_tile_np(a, b, accv, accs, j0, inf):
    s3 = a[:, :, None] + b[None, :, :]
    bad = (a >= inf)[:, :, None] | (b >= inf)[None, :, :]
    s3[bad] = inf
    jmin = s3.argmin(axis=1)
    vmin = np.take_along_axis(s3, jmin[:, None, :], axis=1)[:, 0, :]
    upd = vmin < accv
    accs[upd] = (jmin + j0)[upd]
    accv[upd] = vmin[upd]


def _zero_tri_tile_np(wxy, wyz, wzx, find_negative):
    s3 = wxy[:, :, None] + wyz[None, :, :] + wzx.T[:, None, :]
    if find_negative:
        return bool((s3 < 0).any())
    return bool((s3 == 0).any())


def _any_disjoint_pair_np(data_a, starts_a, ends_a, ids_a,
                          data_b, starts_b, ends_b, ids_b):
    sets_b = [frozenset(data_b[starts_b[q]:ends_b[q]].tolist())
              for q in range(len(starts_b))]
    for p in range(len(starts_a)):
        sa = frozenset(data_a[starts_a[p]:ends_a[p]].tolist())
        for q in range(len(starts_b)):
            if ids_a[p] == ids_b[q]:
                continue
            if not (sa & sets_b[q]):
                return True
    return False


def _flag_list_hits_np(chunk, data_s, starts_s, ends_s, flags):
    cs = set(chunk.tolist())
    for q in range(len(starts_s)):
        if flags[q]:
            continue
        if not cs.isdisjoint(data_s[starts_s[q]:ends_s[q]].tolist()):
            flags[q] = True


class Backend:
    """Uniform namespace over one kernel implementation set."""

    def __init__(self, name, is_numba, fns):
        self.name = name
        self.is_numba = is_numba
        for k, v in fns.items():
            setattr(self, k, v)

    def __repr__(self):
        return f"Backend({self.name})"


PY_BACKEND = Backend("python", False, {
    "lru_touch_range": _lru_touch_range,
    "check_resident_range": _check_resident_range,
    "minplus_tile": _minplus_tile_np,
    "zero_tri_tile": _zero_tri_tile_np,
    "any_disjoint_pair": _any_disjoint_pair_np,
    "flag_list_hits": _flag_list_hits_np,
    # recursive drivers have no interpreted twin here: the machine-API
    # implementations in iosim.algos are the python path
    "ov_driver": None,
    "mm_classical_driver": None,
    "mm_strassen_driver": None,
})

NB_BACKEND = None

if HAVE_NUMBA:
    _nb_lru_touch_range = njit(cache=True)(_lru_touch_range)
    _nb_check_resident_range = njit(cache=True)(_check_resident_range)
    _nb_minplus_tile = njit(cache=True)(_minplus_tile)
    _nb_zero_tri_tile = njit(cache=True)(_zero_tri_tile)
    _nb_any_disjoint_pair = njit(cache=True)(_any_disjoint_pair)
    _nb_flag_list_hits = njit(cache=True)(_flag_list_hits)

    @njit(cache=True)
    def _nb_ov_driver(disk, ub, vb, nu, nv, d, B, slot_of_line, line_of_slot,
                      prv, nxt, dirty, free_stack, ctr):
        # 4-way split on both vector sets; leaves read one vector pair each.
        # Mirrors the machine-API recursion in iosim.algos.vectors exactly
        # (same touch order, same logical-access counts).
        if nu == 1 and nv == 1:
            _nb_lru_touch_range(ub // B, (ub + d - 1) // B, False, slot_of_line,
                                line_of_slot, prv, nxt, dirty, free_stack, ctr)
            ctr[LOGICAL] += d
            _nb_lru_touch_range(vb // B, (vb + d - 1) // B, False, slot_of_line,
                                line_of_slot, prv, nxt, dirty, free_stack, ctr)
            ctr[LOGICAL] += d
            s = 0
            for i in range(d):
                s += disk[ub + i] * disk[vb + i]
            return s == 0
        found = False
        hu = nu // 2 if nu > 1 else 1
        hv = nv // 2 if nv > 1 else 1
        if nu == 1:
            found |= _nb_ov_driver(disk, ub, vb, 1, hv, d, B, slot_of_line,
                                   line_of_slot, prv, nxt, dirty, free_stack, ctr)
            found |= _nb_ov_driver(disk, ub, vb + hv * d, 1, nv - hv, d, B,
                                   slot_of_line, line_of_slot, prv, nxt, dirty,
                                   free_stack, ctr)
        elif nv == 1:
            found |= _nb_ov_driver(disk, ub, vb, hu, 1, d, B, slot_of_line,
                                   line_of_slot, prv, nxt, dirty, free_stack, ctr)
            found |= _nb_ov_driver(disk, ub + hu * d, vb, nu - hu, 1, d, B,
                                   slot_of_line, line_of_slot, prv, nxt, dirty,
                                   free_stack, ctr)
        else:
            found |= _nb_ov_driver(disk, ub, vb, hu, hv, d, B, slot_of_line,
                                   line_of_slot, prv, nxt, dirty, free_stack, ctr)
            found |= _nb_ov_driver(disk, ub, vb + hv * d, hu, nv - hv, d, B,
                                   slot_of_line, line_of_slot, prv, nxt, dirty,
                                   free_stack, ctr)
            found |= _nb_ov_driver(disk, ub + hu * d, vb, nu - hu, hv, d, B,
                                   slot_of_line, line_of_slot, prv, nxt, dirty,
                                   free_stack, ctr)
            found |= _nb_ov_driver(disk, ub + hu * d, vb + hv * d, nu - hu,
                                   nv - hv, d, B, slot_of_line, line_of_slot,
                                   prv, nxt, dirty, free_stack, ctr)
        return found

    @njit(cache=True)
    def _nb_touch_rows(base, ld, rows, width, B, mark_dirty, slot_of_line,
                       line_of_slot, prv, nxt, dirty, free_stack, ctr):
        for r in range(rows):
            a = base + r * ld
            _nb_lru_touch_range(a // B, (a + width - 1) // B, mark_dirty,
                                slot_of_line, line_of_slot, prv, nxt, dirty,
                                free_stack, ctr)
            ctr[LOGICAL] += width

    @njit(cache=True)
    def _nb_mm_classical(disk, a, b, c, lda, ldb, ldc, s, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty,
                         free_stack, ctr):
        # c += a @ b on s x s row-major submatrices, 8-way quadrant recursion,
        # no scratch. Same row-wise touch order as the machine-API twin.
        if s <= base_s:
            _nb_touch_rows(a, lda, s, s, B, False, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            _nb_touch_rows(b, ldb, s, s, B, False, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            _nb_touch_rows(c, ldc, s, s, B, False, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            for i in range(s):
                for j in range(s):
                    acc = disk[c + i * ldc + j]
                    for k in range(s):
                        acc += disk[a + i * lda + k] * disk[b + k * ldb + j]
                    disk[c + i * ldc + j] = acc
            _nb_touch_rows(c, ldc, s, s, B, True, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            return
        h = s // 2
        a11 = a
        a12 = a + h
        a21 = a + h * lda
        a22 = a21 + h
        b11 = b
        b12 = b + h
        b21 = b + h * ldb
        b22 = b21 + h
        c11 = c
        c12 = c + h
        c21 = c + h * ldc
        c22 = c21 + h
        _nb_mm_classical(disk, a11, b11, c11, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a12, b21, c11, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a11, b12, c12, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a12, b22, c12, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a21, b11, c21, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a22, b21, c21, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a21, b12, c22, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_classical(disk, a22, b22, c22, lda, ldb, ldc, h, base_s, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)

    @njit(cache=True)
    def _nb_combine_rows(dst, ld_dst, src1, ld1, sign1, src2, ld2, sign2, rows,
                         width, disk, B, slot_of_line, line_of_slot, prv, nxt,
                         dirty, free_stack, ctr):
        # dst = sign1*src1 [+ sign2*src2]; src2 < 0 means single operand
        for r in range(rows):
            s1 = src1 + r * ld1
            _nb_lru_touch_range(s1 // B, (s1 + width - 1) // B, False,
                                slot_of_line, line_of_slot, prv, nxt, dirty,
                                free_stack, ctr)
            ctr[LOGICAL] += width
            if src2 >= 0:
                s2 = src2 + r * ld2
                _nb_lru_touch_range(s2 // B, (s2 + width - 1) // B, False,
                                    slot_of_line, line_of_slot, prv, nxt, dirty,
                                    free_stack, ctr)
                ctr[LOGICAL] += width
            dr = dst + r * ld_dst
            _nb_lru_touch_range(dr // B, (dr + width - 1) // B, True,
                                slot_of_line, line_of_slot, prv, nxt, dirty,
                                free_stack, ctr)
            ctr[LOGICAL] += width
            for j in range(width):
                v = sign1 * disk[s1 + j]
                if src2 >= 0:
                    v += sign2 * disk[src2 + r * ld2 + j]
                disk[dr + j] = v

    @njit(cache=True)
    def _nb_accumulate_rows(dst, ld_dst, src, ld_src, sign, assign, rows, width,
                            disk, B, slot_of_line, line_of_slot, prv, nxt,
                            dirty, free_stack, ctr):
        # dst (+)= sign * src, row by row; assign skips the dst read
        for r in range(rows):
            sr = src + r * ld_src
            _nb_lru_touch_range(sr // B, (sr + width - 1) // B, False,
                                slot_of_line, line_of_slot, prv, nxt, dirty,
                                free_stack, ctr)
            ctr[LOGICAL] += width
            dr = dst + r * ld_dst
            if not assign:
                _nb_lru_touch_range(dr // B, (dr + width - 1) // B, False,
                                    slot_of_line, line_of_slot, prv, nxt, dirty,
                                    free_stack, ctr)
                ctr[LOGICAL] += width
            _nb_lru_touch_range(dr // B, (dr + width - 1) // B, True,
                                slot_of_line, line_of_slot, prv, nxt, dirty,
                                free_stack, ctr)
            ctr[LOGICAL] += width
            for j in range(width):
                v = sign * disk[sr + j]
                if not assign:
                    v += disk[dr + j]
                disk[dr + j] = v

    @njit(cache=True)
    def _nb_mm_strassen(disk, a, b, c, lda, ldb, ldc, s, base_s, B, sb,
                        slot_of_line, line_of_slot, prv, nxt, dirty,
                        free_stack, ctr):
        # c = a @ b (overwrite), 7-multiplication recursion with LIFO scratch
        # at disk offset sb: TA (h*h), TB (h*h), P (h*h), children above.
        if s <= base_s:
            _nb_touch_rows(a, lda, s, s, B, False, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            _nb_touch_rows(b, ldb, s, s, B, False, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            for i in range(s):
                for j in range(s):
                    acc = 0
                    for k in range(s):
                        acc += disk[a + i * lda + k] * disk[b + k * ldb + j]
                    disk[c + i * ldc + j] = acc
            _nb_touch_rows(c, ldc, s, s, B, True, slot_of_line, line_of_slot,
                           prv, nxt, dirty, free_stack, ctr)
            return
        h = s // 2
        a11 = a
        a12 = a + h
        a21 = a + h * lda
        a22 = a21 + h
        b11 = b
        b12 = b + h
        b21 = b + h * ldb
        b22 = b21 + h
        c11 = c
        c12 = c + h
        c21 = c + h * ldc
        c22 = c21 + h
        ta = sb
        tb = sb + h * h
        p = sb + 2 * h * h
        child = sb + 3 * h * h
        # m1 = (a11 + a22)(b11 + b22): c11 <- m1, c22 <- m1
        _nb_combine_rows(ta, h, a11, lda, 1, a22, lda, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_combine_rows(tb, h, b11, ldb, 1, b22, ldb, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, ta, tb, p, h, h, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c11, ldc, p, h, 1, True, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c22, ldc, p, h, 1, True, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m2 = (a21 + a22) b11: c21 <- m2, c22 -= m2
        _nb_combine_rows(ta, h, a21, lda, 1, a22, lda, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, ta, b11, p, h, ldb, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c21, ldc, p, h, 1, True, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c22, ldc, p, h, -1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m3 = a11 (b12 - b22): c12 <- m3, c22 += m3
        _nb_combine_rows(tb, h, b12, ldb, 1, b22, ldb, -1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, a11, tb, p, lda, h, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c12, ldc, p, h, 1, True, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c22, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m4 = a22 (b21 - b11): c11 += m4, c21 += m4
        _nb_combine_rows(tb, h, b21, ldb, 1, b11, ldb, -1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, a22, tb, p, lda, h, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c11, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c21, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m5 = (a11 + a12) b22: c11 -= m5, c12 += m5
        _nb_combine_rows(ta, h, a11, lda, 1, a12, lda, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, ta, b22, p, h, ldb, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c11, ldc, p, h, -1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c12, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m6 = (a21 - a11)(b11 + b12): c22 += m6
        _nb_combine_rows(ta, h, a21, lda, 1, a11, lda, -1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_combine_rows(tb, h, b11, ldb, 1, b12, ldb, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, ta, tb, p, h, h, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c22, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        # m7 = (a12 - a22)(b21 + b22): c11 += m7
        _nb_combine_rows(ta, h, a12, lda, 1, a22, lda, -1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_combine_rows(tb, h, b21, ldb, 1, b22, ldb, 1, h, h, disk, B,
                         slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_mm_strassen(disk, ta, tb, p, h, h, h, h, base_s, B, child,
                        slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)
        _nb_accumulate_rows(c11, ldc, p, h, 1, False, h, h, disk, B,
                            slot_of_line, line_of_slot, prv, nxt, dirty, free_stack, ctr)

    NB_BACKEND = Backend("numba", True, {
        "lru_touch_range": _nb_lru_touch_range,
        "check_resident_range": _nb_check_resident_range,
        "minplus_tile": _nb_minplus_tile,
        "zero_tri_tile": _nb_zero_tri_tile,
        "any_disjoint_pair": _nb_any_disjoint_pair,
        "flag_list_hits": _nb_flag_list_hits,
        "ov_driver": _nb_ov_driver,
        "mm_classical_driver": _nb_mm_classical,
        "mm_strassen_driver": _nb_mm_strassen,
    })


def default_backend():
    return NB_BACKEND if NB_BACKEND is not None else PY_BACKEND


def get_backend(name):
    if name in (None, "auto"):
        return default_backend()
    if name == "python":
        return PY_BACKEND
    if name == "numba":
        if NB_BACKEND is None:
            raise RuntimeError("numba backend unavailable (disabled or not installed)")
        return NB_BACKEND
    raise ValueError(f"unknown backend {name!r}")
