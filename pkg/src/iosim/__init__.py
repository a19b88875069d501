"""External-memory algorithm laboratory.

A simulated two-level memory with exact cache-miss accounting, external-memory
primitives, a symbolic solver for divide-and-conquer transfer recurrences,
cache-aware and cache-oblivious algorithms, and oracle-checked reductions
between fine-grained problems.
"""

from .machine import (
    INF,
    WORD_MAX,
    WORD_MIN,
    BoundsError,
    CacheFault,
    CapacityError,
    ConfigError,
    IoMachine,
    MachineConfig,
    MachineError,
    ModeError,
    Region,
    Stats,
    WordRangeError,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "WORD_MAX", "WORD_MIN",
    "IoMachine", "MachineConfig", "Region", "Stats",
    "MachineError", "ConfigError", "BoundsError", "CacheFault",
    "CapacityError", "ModeError", "WordRangeError",
]
