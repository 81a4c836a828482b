"""2.5D slab assembly: three consecutive slices become one 3-channel sample."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator

import numpy as np

from .errors import GeometryMismatchError, OutOfRangeError


class SlabMode(Enum):
    """Channel assignment of slices (n-1, n, n+1)."""

    RGB = "rgb"   # n-1 -> red, n -> green, n+1 -> blue
    BGR = "bgr"   # n-1 -> blue, n -> green, n+1 -> red
    GRAY = "gray"  # n on all three channels


@dataclass(frozen=True)
class SlabConfig:
    mode: SlabMode = SlabMode.RGB


@dataclass
class Slab:
    """One training sample: 3 x H x W float32 channels in [0, 1] plus the
    binary ground truth of the center slice."""

    scan_id: str
    center_index: int
    channels: np.ndarray  # (3, H, W) float32
    target: np.ndarray    # (H, W) uint8


def make_slab(stack: np.ndarray, gt: np.ndarray, n: int, cfg: SlabConfig,
              scan_id: str = "") -> Slab:
    """Build the slab centered on slice ``n`` of a normalized (nz, ny, nx)
    stack. Channel order is (red, green, blue)."""
    depth = stack.shape[0]
    if n < 1 or n > depth - 2:
        raise OutOfRangeError(f"slice {n} has no n-1/n+1 neighbours in depth {depth}")
    if cfg.mode is SlabMode.GRAY:
        order = (n, n, n)
    elif cfg.mode is SlabMode.RGB:
        order = (n - 1, n, n + 1)
    else:
        order = (n + 1, n, n - 1)
    channels = np.stack([stack[i] for i in order]).astype(np.float32)
    target = np.ascontiguousarray(gt[n], dtype=np.uint8)
    return Slab(scan_id, n, channels, target)


def iterate_slabs(stack: np.ndarray, gt: np.ndarray, cfg: SlabConfig,
                  scan_id: str = "") -> Iterator[Slab]:
    """Yield slabs for n = 1 .. depth-2 in ascending order (max(depth-2, 0)
    of them); edge slices are discarded."""
    if stack.shape != gt.shape:
        raise GeometryMismatchError(
            f"ground truth shape {gt.shape} differs from stack shape {stack.shape}"
        )
    for n in range(1, stack.shape[0] - 1):
        yield make_slab(stack, gt, n, cfg, scan_id)


def slab_count(depth: int) -> int:
    return max(depth - 2, 0)
