"""Motion-adaptive memory of tracking hidden states."""

from .buffer import (
    MemoryBuffer,
    MemoryPolicy,
    MemorySlot,
    motion_distance,
    should_store,
)

__all__ = ["MemoryBuffer", "MemoryPolicy", "MemorySlot", "motion_distance", "should_store"]
