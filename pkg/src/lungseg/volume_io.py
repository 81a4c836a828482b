"""MetaImage (.mhd + .raw) reading/writing and label handling for CT volumes.

Arrays are stored (nz, ny, nx) with x fastest in memory, matching the raw
payload order. ``dims`` follows the header convention (nx, ny, nz).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import (
    DimMismatchError,
    IoError,
    MissingKeyError,
    UnmappedLabelError,
    UnsupportedTypeError,
)

LEFT_LUNG = "left-lung"
RIGHT_LUNG = "right-lung"
TRACHEA = "trachea"

_REQUIRED_KEYS = ("NDims", "DimSize", "ElementType", "ElementDataFile")
_DTYPES = {"MET_SHORT": np.dtype("<i2"), "MET_UCHAR": np.dtype("u1")}


@dataclass
class Volume:
    """Shared geometry container; voxels are immutable after construction."""

    voxels: np.ndarray  # (nz, ny, nx)
    spacing: tuple[float, float, float] = (1.0, 1.0, 1.0)  # (sx, sy, sz) mm
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)  # (ox, oy, oz) mm

    def __post_init__(self):
        if self.voxels.ndim != 3:
            raise ValueError(f"expected a 3D voxel array, got ndim={self.voxels.ndim}")
        if min(self.voxels.shape) < 1:
            raise ValueError(f"all dims must be positive, got shape {self.voxels.shape}")
        if any(s <= 0 for s in self.spacing):
            raise ValueError(f"spacing components must be positive, got {self.spacing}")
        self.spacing = tuple(float(s) for s in self.spacing)
        self.origin = tuple(float(o) for o in self.origin)
        self.voxels.setflags(write=False)

    @property
    def dims(self) -> tuple[int, int, int]:
        """(nx, ny, nz) as declared in a MetaImage header."""
        nz, ny, nx = self.voxels.shape
        return (nx, ny, nz)

    @property
    def depth(self) -> int:
        return self.voxels.shape[0]


@dataclass
class CtVolume(Volume):
    """CT grid of signed 16-bit Hounsfield values."""

    def __post_init__(self):
        if self.voxels.dtype != np.int16:
            self.voxels = self.voxels.astype(np.int16)
        super().__post_init__()


@dataclass
class LabelVolume(Volume):
    """Integer label grid plus the semantic role of each label value."""

    label_map: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.voxels.dtype != np.uint8:
            self.voxels = self.voxels.astype(np.uint8)
        super().__post_init__()

    def validate_labels(self):
        """Reject voxel values that are nonzero yet absent from the label map."""
        known = set(self.label_map.values()) | {0}
        present = set(np.unique(self.voxels).tolist())
        unknown = sorted(present - known)
        if unknown:
            raise UnmappedLabelError(f"unmapped label values {unknown}")


@dataclass
class BinaryMask(Volume):
    """Voxel grid restricted to {0, 1}."""

    def __post_init__(self):
        if self.voxels.dtype != np.uint8:
            self.voxels = self.voxels.astype(np.uint8)
        super().__post_init__()
        hi = int(self.voxels.max(initial=0))
        if hi > 1:
            raise ValueError(f"mask voxels must be 0 or 1, found {hi}")

    @classmethod
    def from_volume(cls, vol: Volume) -> "BinaryMask":
        return cls(vol.voxels.copy(), vol.spacing, vol.origin)


def _parse_header(text: str) -> dict[str, str]:
    header = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if "=" not in line:
            raise UnsupportedTypeError(f"malformed header line: {line!r}")
        key, value = line.split("=", 1)
        header[key.strip()] = value.strip()
    return header


def _is_true(value: str) -> bool:
    return value.strip().lower() == "true"


def read_mhd(path, label_map: Mapping[str, int] | None = None, strict: bool = False):
    """Read a MetaImage volume.

    MET_SHORT payloads come back as a CtVolume, MET_UCHAR as a LabelVolume
    carrying ``label_map``. With ``strict``, label values outside the map are
    rejected.
    """
    path = Path(path)
    header = _parse_header(path.read_text(encoding="ascii"))

    for key in _REQUIRED_KEYS:
        if key not in header:
            raise MissingKeyError(f"header key {key} missing from {path.name}")

    if header["NDims"] != "3":
        raise UnsupportedTypeError(f"NDims = {header['NDims']}, only 3 supported")
    elem_type = header["ElementType"]
    if elem_type not in _DTYPES:
        raise UnsupportedTypeError(f"ElementType {elem_type} not supported")
    for key in ("ElementByteOrderMSB", "BinaryDataByteOrderMSB"):
        if _is_true(header.get(key, "False")):
            raise UnsupportedTypeError("big-endian payloads not supported")
    if _is_true(header.get("CompressedData", "False")):
        raise UnsupportedTypeError("compressed payloads not supported")
    data_file = header["ElementDataFile"]
    if data_file in ("LOCAL", "LIST"):
        raise UnsupportedTypeError(f"ElementDataFile = {data_file} not supported")

    try:
        nx, ny, nz = (int(v) for v in header["DimSize"].split())
    except ValueError as exc:
        raise UnsupportedTypeError(f"bad DimSize {header['DimSize']!r}") from exc
    spacing = tuple(float(v) for v in header.get("ElementSpacing", "1 1 1").split())
    origin = tuple(float(v) for v in header.get("Offset", "0 0 0").split())

    dtype = _DTYPES[elem_type]
    raw = (path.parent / data_file).read_bytes()
    expected = nx * ny * nz * dtype.itemsize
    if len(raw) != expected:
        raise DimMismatchError(
            f"{data_file}: payload is {len(raw)} bytes, header implies {expected}"
        )
    voxels = np.frombuffer(raw, dtype=dtype).reshape(nz, ny, nx)

    if elem_type == "MET_SHORT":
        return CtVolume(voxels, spacing, origin)
    vol = LabelVolume(voxels, spacing, origin, label_map=dict(label_map or {}))
    if strict:
        vol.validate_labels()
    return vol


def write_mhd(volume: Volume, path) -> None:
    """Write ``volume`` as a .mhd header plus sibling .raw little-endian payload."""
    path = Path(path)
    raw_name = path.stem + ".raw"
    dtype = np.dtype("<i2") if volume.voxels.dtype == np.int16 else np.dtype("u1")
    elem_type = "MET_SHORT" if dtype.itemsize == 2 else "MET_UCHAR"
    nx, ny, nz = volume.dims
    sx, sy, sz = volume.spacing
    ox, oy, oz = volume.origin
    header = (
        "NDims = 3\n"
        f"DimSize = {nx} {ny} {nz}\n"
        f"ElementSpacing = {sx} {sy} {sz}\n"
        f"Offset = {ox} {oy} {oz}\n"
        f"ElementType = {elem_type}\n"
        "ElementByteOrderMSB = False\n"
        f"ElementDataFile = {raw_name}\n"
    )
    try:
        path.write_text(header, encoding="ascii")
        (path.parent / raw_name).write_bytes(volume.voxels.astype(dtype).tobytes())
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def to_binary_lung(labels: LabelVolume, strict: bool = False) -> BinaryMask:
    """Merge left and right lung labels into a binary mask; trachea and all
    other labels map to 0."""
    for role in (LEFT_LUNG, RIGHT_LUNG):
        if role not in labels.label_map:
            raise UnmappedLabelError(f"label map does not define {role!r}")
    if strict:
        labels.validate_labels()
    lung_values = [labels.label_map[LEFT_LUNG], labels.label_map[RIGHT_LUNG]]
    voxels = np.isin(labels.voxels, lung_values).astype(np.uint8)
    return BinaryMask(voxels, labels.spacing, labels.origin)
