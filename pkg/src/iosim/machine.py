"""Simulated two-level memory with exact transfer accounting.

Storage is a growable disk of 64-bit words. A cache of M words is organized as
M/B lines of B words; every access touches the line(s) holding the addressed
words, transfers happen in whole aligned lines, and computation on cached
values costs nothing. Miss and writeback counts are a pure function of the
address trace: values never influence them.

Two replacement modes:

- "automatic-lru": any address may be touched; a miss loads the line, evicting
  the least recently used one (counting a writeback if it was dirty).
- "explicit": the program places lines itself via load_line/evict_line and
  faults on any access to a non-resident line. Misses count loads.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import kernels
from .kernels import FREE_TOP, LOGICAL, LRU, MISSES, MRU, RESIDENT, WRITEBACKS

WORD_MAX = 2**63 - 1
WORD_MIN = -(2**63)
# Distance sentinel for "unreachable"/"no entry". Far above any real path
# weight yet small enough that a few saturating adds cannot wrap int64.
INF = 2**60

MODES = ("automatic-lru", "explicit")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


class MachineError(Exception):
    pass


class ConfigError(MachineError):
    pass


class BoundsError(MachineError):
    pass


class CacheFault(MachineError):
    """Explicit-mode violation: access to a non-resident line, double load,
    or eviction of a line that is not resident."""


class CapacityError(MachineError):
    """Explicit load into a cache with no free line."""


class ModeError(MachineError):
    pass


class WordRangeError(MachineError):
    pass


@dataclasses.dataclass(frozen=True)
class MachineConfig:
    M: int
    B: int
    mode: str = "automatic-lru"

    def __post_init__(self):
        if not isinstance(self.M, int) or not isinstance(self.B, int):
            raise ConfigError("M and B must be integers")
        if self.B < 1:
            raise ConfigError(f"B must be >= 1, got {self.B}")
        if self.M < self.B:
            raise ConfigError(f"M must be >= B, got M={self.M} B={self.B}")
        if self.M % self.B != 0:
            raise ConfigError(f"M must be a multiple of B, got M={self.M} B={self.B}")
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {MODES}, got {self.mode!r}")

    @property
    def lines(self) -> int:
        return self.M // self.B

    @property
    def tall_cache(self) -> bool:
        return self.M >= self.B * self.B


@dataclasses.dataclass(frozen=True)
class Stats:
    misses: int
    writebacks: int
    logical_accesses: int
    M: int
    B: int
    mode: str
    tall_cache: bool


@dataclasses.dataclass(frozen=True)
class Region:
    """A line-aligned allocation on the disk."""
    base: int
    length: int

    @property
    def end(self) -> int:
        return self.base + self.length


class IoMachine:
    def __init__(self, M, B, mode="automatic-lru", backend=None,
                 trace_hash=False):
        if isinstance(M, MachineConfig):
            self.config = M
        else:
            self.config = MachineConfig(M, B, mode)
        self.M = self.config.M
        self.B = self.config.B
        self.mode = self.config.mode
        if isinstance(backend, str) or backend is None:
            backend = kernels.get_backend(backend)
        self.backend = backend

        nlines = self.config.lines
        self._disk = np.zeros(0, dtype=np.int64)
        self._size = 0  # words allocated so far
        self._slot_of_line = np.zeros(0, dtype=np.int64)
        self._line_of_slot = np.full(nlines, -1, dtype=np.int64)
        self._prv = np.full(nlines, -1, dtype=np.int64)
        self._nxt = np.full(nlines, -1, dtype=np.int64)
        self._dirty = np.zeros(nlines, dtype=np.bool_)
        self._free = np.arange(nlines - 1, -1, -1, dtype=np.int64)
        self._ctr = np.zeros(kernels.CTR_SLOTS, dtype=np.int64)
        self._ctr[MRU] = -1
        self._ctr[LRU] = -1
        self._ctr[FREE_TOP] = nlines

        self.trace_hash_enabled = bool(trace_hash)
        self._hash = _FNV_OFFSET

    # -- allocation -------------------------------------------------------

    def alloc(self, length) -> Region:
        """Reserve length words on the disk, zero-filled and line-aligned.

        Placement is deterministic: regions are laid out consecutively, each
        starting at the next line boundary, and never overlap.
        """
        length = int(length)
        if length < 0:
            raise BoundsError(f"negative allocation {length}")
        base = -(-self._size // self.B) * self.B
        new_size = base + length
        if new_size > self._disk.shape[0]:
            cap = max(1024, self._disk.shape[0])
            while cap < new_size:
                cap *= 2
            cap = -(-cap // self.B) * self.B
            disk = np.zeros(cap, dtype=np.int64)
            disk[:self._disk.shape[0]] = self._disk
            self._disk = disk
            sol = np.full(cap // self.B, -1, dtype=np.int64)
            sol[:self._slot_of_line.shape[0]] = self._slot_of_line
            self._slot_of_line = sol
        self._size = new_size
        return Region(base, length)

    @property
    def disk_size(self) -> int:
        return self._size

    # -- internals ---------------------------------------------------------

    def _fold(self, op, a, b):
        h = self._hash
        for k in (op, a, b):
            h = ((h ^ (k & _U64)) * _FNV_PRIME) & _U64
        self._hash = h

    @property
    def trace_hash(self) -> int:
        if not self.trace_hash_enabled:
            raise ModeError("trace hashing not enabled on this machine")
        return self._hash

    def _check_bounds(self, base, length):
        if length < 0 or base < 0 or base + length > self._size:
            raise BoundsError(
                f"access [{base}, {base + length}) outside disk of {self._size} words")

    def _touch(self, base, length, mark_dirty):
        lo = base // self.B
        hi = (base + length - 1) // self.B
        if self.mode == "automatic-lru":
            self.backend.lru_touch_range(
                lo, hi, mark_dirty, self._slot_of_line, self._line_of_slot,
                self._prv, self._nxt, self._dirty, self._free, self._ctr)
        else:
            bad = self.backend.check_resident_range(lo, hi, self._slot_of_line)
            if bad >= 0:
                raise CacheFault(f"line {bad} not resident (explicit mode)")
            if mark_dirty:
                self._dirty[self._slot_of_line[lo:hi + 1]] = True

    # -- word and range accesses -------------------------------------------

    def read(self, addr) -> int:
        addr = int(addr)
        self._check_bounds(addr, 1)
        self._touch(addr, 1, False)
        self._ctr[LOGICAL] += 1
        if self.trace_hash_enabled:
            self._fold(1, addr, 1)
        return int(self._disk[addr])

    def write(self, addr, value):
        addr = int(addr)
        value = int(value)
        if not (WORD_MIN <= value <= WORD_MAX):
            raise WordRangeError(f"value {value} outside signed 64-bit range")
        self._check_bounds(addr, 1)
        self._touch(addr, 1, True)
        self._ctr[LOGICAL] += 1
        if self.trace_hash_enabled:
            self._fold(2, addr, 1)
        self._disk[addr] = value

    def read_range(self, base, length) -> np.ndarray:
        """Read length consecutive words; returns a read-only view.

        The view is valid until the next alloc (which may move the disk).
        Costs the same misses as reading the words one by one left to right.
        """
        base = int(base)
        length = int(length)
        self._check_bounds(base, length)
        if length == 0:
            return np.zeros(0, dtype=np.int64)
        self._touch(base, length, False)
        self._ctr[LOGICAL] += length
        if self.trace_hash_enabled:
            self._fold(3, base, length)
        out = self._disk[base:base + length]
        out.flags.writeable = False
        return out

    def write_range(self, base, values):
        base = int(base)
        try:
            vals = np.asarray(values, dtype=np.int64)
        except OverflowError as e:
            raise WordRangeError(str(e)) from None
        if vals.ndim != 1:
            vals = vals.reshape(-1)
        length = vals.shape[0]
        self._check_bounds(base, length)
        if length == 0:
            return
        self._touch(base, length, True)
        self._ctr[LOGICAL] += length
        if self.trace_hash_enabled:
            self._fold(4, base, length)
        self._disk[base:base + length] = vals

    def read_region(self, region: Region) -> np.ndarray:
        return self.read_range(region.base, region.length)

    def write_region(self, region: Region, values):
        vals = np.asarray(values, dtype=np.int64).reshape(-1)
        if vals.shape[0] != region.length:
            raise BoundsError(
                f"value count {vals.shape[0]} != region length {region.length}")
        self.write_range(region.base, vals)

    # -- explicit cache management ------------------------------------------

    def _require_explicit(self):
        if self.mode != "explicit":
            raise ModeError("explicit cache ops only valid in explicit mode")

    def load_line(self, line):
        self._require_explicit()
        line = int(line)
        if line < 0 or line * self.B >= self._size:
            raise BoundsError(f"line {line} outside disk")
        if self._slot_of_line[line] >= 0:
            raise CacheFault(f"line {line} already resident")
        if self._ctr[FREE_TOP] == 0:
            raise CapacityError("cache full: no free line")
        self._ctr[FREE_TOP] -= 1
        s = self._free[self._ctr[FREE_TOP]]
        self._slot_of_line[line] = s
        self._line_of_slot[s] = line
        self._dirty[s] = False
        self._ctr[RESIDENT] += 1
        self._ctr[MISSES] += 1
        if self.trace_hash_enabled:
            self._fold(5, line, 1)

    def evict_line(self, line):
        self._require_explicit()
        line = int(line)
        if line < 0 or line >= self._slot_of_line.shape[0] \
                or self._slot_of_line[line] < 0:
            raise CacheFault(f"line {line} not resident")
        s = self._slot_of_line[line]
        if self._dirty[s]:
            self._ctr[WRITEBACKS] += 1
        self._slot_of_line[line] = -1
        self._line_of_slot[s] = -1
        self._dirty[s] = False
        self._free[self._ctr[FREE_TOP]] = s
        self._ctr[FREE_TOP] += 1
        self._ctr[RESIDENT] -= 1
        if self.trace_hash_enabled:
            self._fold(6, line, 1)

    def load_range(self, base, length):
        """Explicitly load every line of [base, base+length)."""
        self._require_explicit()
        self._check_bounds(base, length)
        if length == 0:
            return
        lo = base // self.B
        hi = (base + length - 1) // self.B
        lines = np.arange(lo, hi + 1)
        slots_now = self._slot_of_line[lo:hi + 1]
        if (slots_now >= 0).any():
            ln = int(lines[slots_now >= 0][0])
            raise CacheFault(f"line {ln} already resident")
        k = lines.shape[0]
        if k > self._ctr[FREE_TOP]:
            raise CapacityError(
                f"cache full: need {k} lines, {int(self._ctr[FREE_TOP])} free")
        top = int(self._ctr[FREE_TOP])
        slots = self._free[top - k:top][::-1].copy()
        self._ctr[FREE_TOP] = top - k
        self._slot_of_line[lo:hi + 1] = slots
        self._line_of_slot[slots] = lines
        self._dirty[slots] = False
        self._ctr[RESIDENT] += k
        self._ctr[MISSES] += k
        if self.trace_hash_enabled:
            self._fold(5, lo, k)

    def evict_range(self, base, length):
        self._require_explicit()
        if length == 0:
            return
        lo = base // self.B
        hi = (base + length - 1) // self.B
        slots = self._slot_of_line[lo:hi + 1]
        if (slots < 0).any():
            ln = int(np.arange(lo, hi + 1)[slots < 0][0])
            raise CacheFault(f"line {ln} not resident")
        slots = slots.copy()
        k = slots.shape[0]
        self._ctr[WRITEBACKS] += int(self._dirty[slots].sum())
        self._slot_of_line[lo:hi + 1] = -1
        self._line_of_slot[slots] = -1
        self._dirty[slots] = False
        top = int(self._ctr[FREE_TOP])
        self._free[top:top + k] = slots[::-1]
        self._ctr[FREE_TOP] = top + k
        self._ctr[RESIDENT] -= k
        if self.trace_hash_enabled:
            self._fold(6, lo, k)

    def load_region(self, region: Region):
        self.load_range(region.base, region.length)

    def evict_region(self, region: Region):
        self.evict_range(region.base, region.length)

    # -- whole-cache operations ---------------------------------------------

    def flush(self):
        """Write back every dirty line and empty the cache."""
        live = self._line_of_slot >= 0
        self._ctr[WRITEBACKS] += int((self._dirty & live).sum())
        lines = self._line_of_slot[live]
        self._slot_of_line[lines] = -1
        nlines = self.config.lines
        self._line_of_slot[:] = -1
        self._prv[:] = -1
        self._nxt[:] = -1
        self._dirty[:] = False
        self._free[:] = np.arange(nlines - 1, -1, -1)
        self._ctr[RESIDENT] = 0
        self._ctr[MRU] = -1
        self._ctr[LRU] = -1
        self._ctr[FREE_TOP] = nlines

    def stats(self) -> Stats:
        return Stats(
            misses=int(self._ctr[MISSES]),
            writebacks=int(self._ctr[WRITEBACKS]),
            logical_accesses=int(self._ctr[LOGICAL]),
            M=self.M, B=self.B, mode=self.mode,
            tall_cache=self.config.tall_cache)

    def reset_stats(self):
        self._ctr[MISSES] = 0
        self._ctr[WRITEBACKS] = 0
        self._ctr[LOGICAL] = 0
        self._hash = _FNV_OFFSET

    # -- introspection (tests, debugging) ------------------------------------

    def resident_lines(self):
        """Sorted line indexes currently in cache."""
        return sorted(int(x) for x in self._line_of_slot if x >= 0)

    def recency_order(self):
        """Resident lines from most to least recently used (automatic mode)."""
        out = []
        s = int(self._ctr[MRU])
        while s >= 0:
            out.append(int(self._line_of_slot[s]))
            s = int(self._nxt[s])
        return out

    def line_is_dirty(self, line) -> bool:
        s = self._slot_of_line[line]
        return bool(s >= 0 and self._dirty[s])

    def can_jit(self) -> bool:
        """True when jitted drivers may run on this machine's state."""
        return (self.backend.is_numba and not self.trace_hash_enabled
                and self.mode == "automatic-lru")

    def raw_state(self):
        """State tuple handed to jitted drivers (they mutate it in place)."""
        return (self._disk, self._slot_of_line, self._line_of_slot, self._prv,
                self._nxt, self._dirty, self._free, self._ctr)

    def charge_logical(self, n):
        """Account n logical accesses performed outside the normal ops."""
        self._ctr[LOGICAL] += int(n)
