"""Two-stage HU preprocessing: boundary calibration, windowing, input scaling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfWindowError
from .volume_io import CtVolume

BOUNDARY_HU = -3000
HU_MIN = -1000
HU_MAX = 400


@dataclass
class WindowedVolume(CtVolume):
    """CtVolume whose voxels are confined to [-1000, 400]."""

    def __post_init__(self):
        super().__post_init__()
        lo, hi = int(self.voxels.min(initial=HU_MIN)), int(self.voxels.max(initial=HU_MIN))
        if lo < HU_MIN or hi > HU_MAX:
            raise OutOfWindowError(f"voxels span [{lo}, {hi}], outside [{HU_MIN}, {HU_MAX}]")


def calibrate_boundary(v: CtVolume) -> CtVolume:
    """Replace the -3000 HU boundary sentinel with -1000 (air); leave everything
    else untouched."""
    voxels = np.where(v.voxels == BOUNDARY_HU, np.int16(HU_MIN), v.voxels)
    return CtVolume(voxels, v.spacing, v.origin)


def clip_window(v: CtVolume) -> WindowedVolume:
    """Clamp voxels to the [-1000, 400] HU window; geometry unchanged."""
    voxels = np.clip(v.voxels, HU_MIN, HU_MAX)
    return WindowedVolume(voxels, v.spacing, v.origin)


def normalize(values: np.ndarray) -> np.ndarray:
    """Map windowed HU values to float32 in [0, 1] via (v + 1000) / 1400.

    Accepts a 2D slice or a 3D stack. Raises OutOfWindowError when any value
    falls outside [-1000, 400].
    """
    values = np.asarray(values)
    if values.size:
        lo, hi = values.min(), values.max()
        if lo < HU_MIN or hi > HU_MAX:
            raise OutOfWindowError(f"values span [{lo}, {hi}], outside [{HU_MIN}, {HU_MAX}]")
    return ((values.astype(np.float32) - HU_MIN) / (HU_MAX - HU_MIN)).astype(np.float32)


def denormalize(pixels: np.ndarray) -> np.ndarray:
    """Inverse of normalize, back to HU (float)."""
    return np.asarray(pixels, dtype=np.float32) * (HU_MAX - HU_MIN) + HU_MIN
