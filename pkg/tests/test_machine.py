import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iosim import (
    INF,
    WORD_MAX,
    BoundsError,
    CacheFault,
    CapacityError,
    ConfigError,
    IoMachine,
    MachineConfig,
    ModeError,
    WordRangeError,
)
from iosim import kernels


BACKENDS = ["python"] + (["numba"] if kernels.NB_BACKEND is not None else [])


def make(M, B, mode="automatic-lru", backend="python", **kw):
    return IoMachine(M=M, B=B, mode=mode, backend=backend, **kw)


# ---------------------------------------------------------------------------
# frozen expected values
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("backend", BACKENDS)
def test_cold_scan_1024_words_B16_is_64_misses(backend):
    m = make(M=64, B=16, backend=backend)
    r = m.alloc(1024)
    for i in range(1024):
        m.read(r.base + i)
    s = m.stats()
    assert s.misses == 64
    assert s.writebacks == 0
    assert s.logical_accesses == 1024


@pytest.mark.parametrize("backend", BACKENDS)
def test_lru_two_line_cache_pattern(backend):
    # M=32, B=16: two-line cache. Touch lines 0,1,2,0.
    # 0 miss, 1 miss, 2 miss (evicts 0), 0 miss again: 4 misses total.
    m = make(M=32, B=16, backend=backend)
    r = m.alloc(64)
    for ln in (0, 1, 2, 0):
        m.read(r.base + ln * 16)
    assert m.stats().misses == 4
    assert m.resident_lines() == [0, 2]


def test_cold_scan_misses_are_ceil_n_over_B():
    for n, B in [(1, 4), (5, 4), (16, 4), (17, 4), (1000, 8), (1024, 16)]:
        m = make(M=4 * B, B=B)
        r = m.alloc(n)
        m.read_range(r.base, n)
        assert m.stats().misses == -(-n // B), (n, B)


def test_dirty_eviction_counts_writeback():
    m = make(M=32, B=16)  # 2 lines
    r = m.alloc(64)
    m.write(r.base, 7)            # line 0 dirty
    m.read(r.base + 16)           # line 1
    m.read(r.base + 32)           # line 2 evicts line 0 -> writeback
    s = m.stats()
    assert s.misses == 3
    assert s.writebacks == 1
    # clean evictions don't write back
    m.read(r.base + 48)           # line 3 evicts line 1 (clean)
    assert m.stats().writebacks == 1


def test_flush_writes_back_dirty_lines_only():
    m = make(M=64, B=16)
    r = m.alloc(64)
    m.write(r.base, 1)
    m.read(r.base + 16)
    m.write(r.base + 32, 2)
    m.flush()
    s = m.stats()
    assert s.writebacks == 2
    assert m.resident_lines() == []
    # flushing an empty cache is a no-op
    m.flush()
    assert m.stats().writebacks == 2


def test_rereading_resident_line_costs_nothing():
    m = make(M=64, B=16)
    r = m.alloc(16)
    m.read(r.base)
    base_misses = m.stats().misses
    for _ in range(100):
        m.read(r.base + 5)
    assert m.stats().misses == base_misses
    assert m.stats().logical_accesses == 101


# ---------------------------------------------------------------------------
# configuration and error contracts
# ---------------------------------------------------------------------------

def test_config_validation():
    with pytest.raises(ConfigError):
        MachineConfig(M=8, B=0)
    with pytest.raises(ConfigError):
        MachineConfig(M=8, B=16)       # M < B
    with pytest.raises(ConfigError):
        MachineConfig(M=24, B=16)      # M not a multiple of B
    with pytest.raises(ConfigError):
        MachineConfig(M=32, B=16, mode="weird")
    c = MachineConfig(M=256, B=16)
    assert c.lines == 16
    assert c.tall_cache
    assert not MachineConfig(M=32, B=16).tall_cache


def test_bounds_checks():
    m = make(M=32, B=16)
    r = m.alloc(10)
    with pytest.raises(BoundsError):
        m.read(r.base + 10)
    with pytest.raises(BoundsError):
        m.read(-1)
    with pytest.raises(BoundsError):
        m.read_range(r.base, 11)
    m.read_range(r.base, 10)


def test_word_range_enforced():
    m = make(M=32, B=16)
    r = m.alloc(4)
    m.write(r.base, WORD_MAX)
    m.write(r.base, -(2**63))
    with pytest.raises(WordRangeError):
        m.write(r.base, 2**63)
    with pytest.raises(WordRangeError):
        m.write_range(r.base, [0, 2**63])


def test_alloc_alignment_and_separation():
    m = make(M=32, B=16)
    r1 = m.alloc(5)
    r2 = m.alloc(20)
    r3 = m.alloc(16)
    for r in (r1, r2, r3):
        assert r.base % 16 == 0
    assert r2.base >= r1.end
    assert r3.base >= r2.end
    # fresh regions read as zeros
    assert m.read_range(r2.base, 20).sum() == 0
    # identical alloc sequences land at identical addresses
    m2 = make(M=32, B=16)
    assert (m2.alloc(5), m2.alloc(20), m2.alloc(16)) == (r1, r2, r3)


def test_read_range_view_is_read_only():
    m = make(M=32, B=16)
    r = m.alloc(8)
    v = m.read_range(r.base, 8)
    with pytest.raises(ValueError):
        v[0] = 1


def test_inf_sentinel_headroom():
    # a few saturating adds of INF stay well inside the word range
    assert 4 * INF < WORD_MAX


# ---------------------------------------------------------------------------
# explicit mode
# ---------------------------------------------------------------------------

def test_explicit_load_access_evict_cycle():
    m = make(M=32, B=16, mode="explicit")
    r = m.alloc(64)
    m.load_line(0)
    assert m.read(r.base) == 0
    m.write(r.base + 1, 9)
    m.evict_line(0)
    s = m.stats()
    assert (s.misses, s.writebacks) == (1, 1)


def test_explicit_faults_on_nonresident_access():
    m = make(M=32, B=16, mode="explicit")
    r = m.alloc(64)
    m.load_line(0)
    with pytest.raises(CacheFault):
        m.read(r.base + 16)
    with pytest.raises(CacheFault):
        m.write(r.base + 16, 1)
    with pytest.raises(CacheFault):
        m.read_range(r.base, 17)   # crosses into non-resident line 1


def test_explicit_double_load_and_bad_evict_fault():
    m = make(M=32, B=16, mode="explicit")
    m.alloc(64)
    m.load_line(0)
    with pytest.raises(CacheFault):
        m.load_line(0)
    with pytest.raises(CacheFault):
        m.evict_line(1)


def test_explicit_capacity_error():
    m = make(M=32, B=16, mode="explicit")  # 2 lines
    m.alloc(80)
    m.load_line(0)
    m.load_line(1)
    with pytest.raises(CapacityError):
        m.load_line(2)
    m.evict_line(0)
    m.load_line(2)  # now it fits
    assert m.stats().misses == 3


def test_explicit_range_ops():
    m = make(M=64, B=16, mode="explicit")  # 4 lines
    r = m.alloc(96)
    m.load_range(r.base, 48)      # lines 0..2
    m.write_range(r.base, range(48))
    with pytest.raises(CacheFault):
        m.load_range(r.base + 32, 32)   # line 2 already resident
    with pytest.raises(CapacityError):
        m.load_range(r.base + 48, 48)   # lines 3..5: only one slot left
    m.evict_range(r.base, 48)
    s = m.stats()
    assert s.misses == 3
    assert s.writebacks == 3
    assert np.array_equal(
        np.concatenate([m._disk[r.base:r.base + 48]]), np.arange(48))


def test_explicit_ops_rejected_in_automatic_mode():
    m = make(M=32, B=16)
    m.alloc(32)
    with pytest.raises(ModeError):
        m.load_line(0)
    with pytest.raises(ModeError):
        m.evict_line(0)


def test_explicit_flush_counts_dirty():
    m = make(M=64, B=16, mode="explicit")
    r = m.alloc(64)
    m.load_range(r.base, 64)
    m.write(r.base, 1)
    m.write(r.base + 48, 2)
    m.flush()
    assert m.stats().writebacks == 2
    assert m.resident_lines() == []


# ---------------------------------------------------------------------------
# property tests: backend equivalence, value independence, determinism
# ---------------------------------------------------------------------------

op_strategy = st.lists(
    st.tuples(
        st.sampled_from(["r", "w", "rr", "wr"]),
        st.integers(min_value=0, max_value=127),
        st.integers(min_value=1, max_value=32),
        st.integers(min_value=-100, max_value=100),
    ),
    min_size=1, max_size=60)


def run_ops(m, region, ops):
    n = region.length
    for kind, addr, span, val in ops:
        a = region.base + addr % n
        k = min(span, n - addr % n)
        if kind == "r":
            m.read(a)
        elif kind == "w":
            m.write(a, val)
        elif kind == "rr":
            m.read_range(a, k)
        else:
            m.write_range(a, np.full(k, val, dtype=np.int64))


@pytest.mark.skipif(kernels.NB_BACKEND is None, reason="numba unavailable")
@settings(max_examples=120, deadline=None)
@given(ops=op_strategy,
       M_lines=st.integers(min_value=1, max_value=6),
       B=st.sampled_from([1, 2, 4, 16]))
def test_backends_agree_exactly(ops, M_lines, B):
    results = []
    for backend in ("python", "numba"):
        m = make(M=M_lines * B, B=B, backend=backend)
        r = m.alloc(128)
        run_ops(m, r, ops)
        s = m.stats()
        results.append((s.misses, s.writebacks, s.logical_accesses,
                        m.resident_lines(), m.recency_order(),
                        m._disk[r.base:r.end].tolist()))
    assert results[0] == results[1]


@settings(max_examples=80, deadline=None)
@given(ops=op_strategy, B=st.sampled_from([2, 8]))
def test_misses_do_not_depend_on_values(ops, B):
    stats = []
    for shift in (0, 37):
        m = make(M=4 * B, B=B)
        r = m.alloc(128)
        shifted = [(k, a, s, v + shift) for (k, a, s, v) in ops]
        run_ops(m, r, shifted)
        stats.append((m.stats().misses, m.stats().writebacks))
    assert stats[0] == stats[1]


@settings(max_examples=60, deadline=None)
@given(ops=op_strategy)
def test_replay_is_deterministic(ops):
    runs = []
    for _ in range(2):
        m = make(M=32, B=8)
        r = m.alloc(128)
        run_ops(m, r, ops)
        runs.append((m.stats(), m.resident_lines(), m.recency_order()))
    assert runs[0] == runs[1]


@settings(max_examples=80, deadline=None)
@given(ops=op_strategy, M_lines=st.integers(min_value=1, max_value=5))
def test_cache_never_exceeds_line_budget(ops, M_lines):
    m = make(M=M_lines * 8, B=8)
    r = m.alloc(128)
    run_ops(m, r, ops)
    assert len(m.resident_lines()) <= M_lines
    assert sorted(m.recency_order()) == m.resident_lines()


@settings(max_examples=60, deadline=None)
@given(start=st.integers(min_value=0, max_value=40),
       length=st.integers(min_value=1, max_value=80),
       B=st.sampled_from([1, 4, 16]))
def test_bulk_range_matches_word_loop(start, length, B):
    ms = []
    for bulk in (True, False):
        m = make(M=8 * B, B=B)
        r = m.alloc(128)
        if bulk:
            m.read_range(r.base + start, length)
        else:
            for i in range(length):
                m.read(r.base + start + i)
        ms.append((m.stats().misses, m.stats().logical_accesses,
                   m.resident_lines()))
    assert ms[0] == ms[1]


@settings(max_examples=40, deadline=None)
@given(ops=op_strategy)
def test_writeback_conservation(ops):
    # after a final flush, every dirty line ever evicted or flushed was
    # written back exactly once; writebacks never exceed writes issued
    m = make(M=16, B=8)
    r = m.alloc(128)
    run_ops(m, r, ops)
    writes = sum(1 for k, *_ in ops if k in ("w", "wr"))
    m.flush()
    assert m.stats().writebacks <= m.stats().logical_accesses
    if writes == 0:
        assert m.stats().writebacks == 0


# ---------------------------------------------------------------------------
# trace hashing
# ---------------------------------------------------------------------------

def test_trace_hash_invariant_across_cache_geometry():
    def drive(M, B):
        m = make(M=M, B=B, trace_hash=True)
        r = m.alloc(64)
        m.write_range(r.base, np.arange(64))
        m.read_range(r.base, 64)
        m.read(r.base + 3)
        return m.trace_hash

    h1 = drive(32, 16)
    h2 = drive(256, 4)
    assert h1 == h2

    m = make(M=32, B=16, trace_hash=True)
    r = m.alloc(64)
    m.read(r.base)
    assert m.trace_hash != h1


def test_trace_hash_requires_flag():
    m = make(M=32, B=16)
    with pytest.raises(ModeError):
        m.trace_hash


def test_reset_stats_clears_counters_not_cache():
    m = make(M=32, B=16)
    r = m.alloc(32)
    m.read_range(r.base, 32)
    m.reset_stats()
    s = m.stats()
    assert (s.misses, s.writebacks, s.logical_accesses) == (0, 0, 0)
    m.read(r.base)  # still resident, no new miss
    assert m.stats().misses == 0
