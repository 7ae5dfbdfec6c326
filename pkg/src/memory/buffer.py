"""
Motion-adaptive memory of tracking hidden states.

A hidden state is stored when the tracking pose has moved far enough from
the pose of the most recently stored slot, in rotation or translation.
"""

from collections import deque
from dataclasses import dataclass
from typing import Deque, Literal, Optional, Tuple

import numpy as np

from src.geometry import PoseSE3, matrix_to_euler
from src.tensor import Tensor
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

MemoryRule = Literal["or", "and"]


@dataclass(frozen=True)
class MemoryPolicy:
    theta_rot: float  # rad
    theta_trans: float  # m
    size: int
    rule: MemoryRule = "or"

    def __post_init__(self):
        if self.theta_rot < 0 or self.theta_trans < 0:
            raise ValueError(f"thresholds must be >= 0, got ({self.theta_rot}, {self.theta_trans})")
        if self.size < 1:
            raise ValueError(f"memory size must be >= 1, got {self.size}")
        if self.rule not in ("or", "and"):
            raise ValueError(f"unknown memory rule '{self.rule}'")

    @classmethod
    def from_config(cls, config) -> "MemoryPolicy":
        return cls(config.theta_rot, config.theta_trans, config.memory_size, config.memory_rule)


@dataclass(frozen=True)
class MemorySlot:
    hidden: Tensor
    anchor: PoseSE3
    frame: int


def motion_distance(candidate: PoseSE3, last: PoseSE3) -> Tuple[float, float]:
    """(rotational, translational) distance between two anchors.

    Rotation uses the Euler vector of the relative rotation last^T @ candidate.
    """
    relative = last.rotation.T @ candidate.rotation
    rot = float(np.linalg.norm(matrix_to_euler(relative)))
    trans = float(np.linalg.norm(candidate.translation - last.translation))
    return rot, trans


def should_store(candidate: PoseSE3, last_stored: PoseSE3, policy: MemoryPolicy) -> bool:
    rot, trans = motion_distance(candidate, last_stored)
    rotated = rot >= policy.theta_rot
    moved = trans >= policy.theta_trans
    if policy.rule == "and":
        return rotated and moved
    return rotated or moved


class MemoryBuffer:
    """Bounded FIFO of selected hidden states, owned by one pipeline run."""

    def __init__(self, policy: MemoryPolicy):
        self.policy = policy
        self._slots: Deque[MemorySlot] = deque()
        self._last_frame: Optional[int] = None
        self._last_stored: Optional[MemorySlot] = None

    def __len__(self) -> int:
        return len(self._slots)

    @property
    def last_frame(self) -> Optional[int]:
        return self._last_frame

    def observe(self, hidden: Tensor, pose: PoseSE3, frame: int) -> bool:
        """
        Offer one hidden state to the memory.

        Args:
            hidden: Tracking hidden state H_t
            pose: Tracking-integrated pose of frame t
            frame: Frame index, strictly after every earlier observation

        Returns:
            True if the state was stored

        Raises:
            ValueError: If frames arrive out of order
        """
        if self._last_frame is not None and frame <= self._last_frame:
            raise ValueError(f"out-of-order frame {frame} after {self._last_frame}")
        self._last_frame = frame

        if self._last_stored is not None and not should_store(pose, self._last_stored.anchor, self.policy):
            return False

        slot = MemorySlot(hidden, pose, frame)
        self._slots.append(slot)
        self._last_stored = slot
        if len(self._slots) > self.policy.size:
            evicted = self._slots.popleft()
            logger.debug(f"Evicted memory slot of frame {evicted.frame}")
        return True

    def snapshot(self) -> Tuple[MemorySlot, ...]:
        """Slots in storage order."""
        return tuple(self._slots)

    def frames(self) -> Tuple[int, ...]:
        return tuple(slot.frame for slot in self._slots)
