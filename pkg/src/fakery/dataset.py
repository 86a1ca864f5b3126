"""Dataset loading, stratified splitting, and the binary feature cache.

Directory convention: root/{train,test}/{REAL,FAKE}/*.{png,jpg,jpeg} with
REAL -> label 0 and FAKE -> label 1.  Images must be exactly 32x32; anything
else is rejected rather than silently resized.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    DecodeError,
    DegenerateClassError,
    DimensionError,
    EmptyDatasetError,
    FormatError,
    TruncationError,
)
from .rng import SplitMix64

IMAGE_SIDE = 32
_EXTENSIONS = {".png", ".jpg", ".jpeg"}

CACHE_MAGIC = b"HFFX"
CACHE_VERSION = 1


@dataclass
class ImageRecord:
    """Decoded 32x32 RGB image with its binary label."""

    pixels: np.ndarray  # (32, 32, 3) uint8
    label: int
    path: str

    def __post_init__(self):
        if self.pixels.shape != (IMAGE_SIDE, IMAGE_SIDE, 3):
            raise DimensionError(f"pixel buffer shape {self.pixels.shape}")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label}")


@dataclass
class SplitIndices:
    train_idx: list[int]
    val_idx: list[int]


def load_image(path: str, label: int = 0) -> ImageRecord:
    """Decode a PNG/JPEG file into an ImageRecord.

    Grayscale sources are replicated across the three channels.  Raises
    DecodeError for unreadable files and DimensionError for any size other
    than 32x32 (no resizing).
    """
    try:
        with Image.open(path) as img:
            if img.size != (IMAGE_SIDE, IMAGE_SIDE):
                raise DimensionError(f"{path}: expected 32x32, got {img.size}")
            rgb = img.convert("RGB")
            pixels = np.asarray(rgb, dtype=np.uint8)
    except DimensionError:
        raise
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    return ImageRecord(pixels=pixels, label=label, path=str(path))


def scan_dataset(root: str) -> list[tuple[str, int]]:
    """Collect (path, label) pairs under a dataset root.

    Accepts either a split directory containing REAL/ and/or FAKE/ leaves, or
    a full tree with train/ and test/ above them.  Paths are sorted
    lexicographically within each class; REAL (label 0) pairs precede FAKE.
    """
    real_paths: list[str] = []
    fake_paths: list[str] = []
    for dirpath, _dirnames, filenames in os.walk(root):
        leaf = os.path.basename(dirpath)
        if leaf not in ("REAL", "FAKE"):
            continue
        bucket = real_paths if leaf == "REAL" else fake_paths
        for name in filenames:
            if os.path.splitext(name)[1].lower() in _EXTENSIONS:
                bucket.append(os.path.join(dirpath, name))
    if not real_paths and not fake_paths:
        raise EmptyDatasetError(f"no images under {root}")
    real_paths.sort()
    fake_paths.sort()
    return [(p, 0) for p in real_paths] + [(p, 1) for p in fake_paths]


def stratified_split(labels, val_fraction: float, seed: int) -> SplitIndices:
    """Deterministic per-class split.

    Each class is Fisher-Yates shuffled with SplitMix64 seeded with
    seed XOR class_id; the first max(1, round(val_fraction * n_class))
    members go to validation.
    """
    if not 0.0 < val_fraction < 1.0:
        raise ValueError("val_fraction must be in (0, 1)")
    labels = np.asarray(labels)
    val_idx: list[int] = []
    train_idx: list[int] = []
    for cls in sorted(int(c) for c in np.unique(labels)):
        positions = [int(i) for i in np.flatnonzero(labels == cls)]
        if len(positions) < 2:
            raise DegenerateClassError(f"class {cls} has {len(positions)} member(s)")
        rng = SplitMix64(seed ^ cls)
        rng.shuffle(positions)
        n_val = max(1, int(math.floor(val_fraction * len(positions) + 0.5)))
        val_idx.extend(positions[:n_val])
        train_idx.extend(positions[n_val:])
    return SplitIndices(train_idx=sorted(train_idx), val_idx=sorted(val_idx))


def write_cache(matrix, labels, spec_tag: str, path: str) -> None:
    """Persist a feature matrix to the HFFX binary format.

    Little-endian throughout; features stored as 32-bit floats.  The file is
    written to a temp name and renamed into place so readers never observe a
    partial file.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.uint8)
    if matrix.ndim != 2:
        raise DimensionError(f"matrix must be 2-D, got {matrix.ndim}-D")
    if matrix.shape[0] != labels.shape[0]:
        raise DimensionError(
            f"{matrix.shape[0]} rows but {labels.shape[0]} labels"
        )
    tag = spec_tag.encode("utf-8")
    tmp = path + ".tmp"
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<I", CACHE_VERSION))
        fh.write(struct.pack("<QQ", matrix.shape[0], matrix.shape[1]))
        fh.write(struct.pack("<I", len(tag)))
        fh.write(tag)
        fh.write(labels.tobytes())
        fh.write(matrix.astype("<f4").tobytes())
    os.replace(tmp, path)


def read_cache(path: str) -> tuple[np.ndarray, np.ndarray, str]:
    """Read back (matrix, labels, spec_tag) from an HFFX file."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 24 or blob[:4] != CACHE_MAGIC:
        raise FormatError(f"{path}: bad magic")
    (version,) = struct.unpack_from("<I", blob, 4)
    if version != CACHE_VERSION:
        raise FormatError(f"{path}: unsupported version {version}")
    n_rows, n_cols = struct.unpack_from("<QQ", blob, 8)
    (tag_len,) = struct.unpack_from("<I", blob, 24)
    offset = 28
    if len(blob) < offset + tag_len:
        raise TruncationError(f"{path}: truncated spec tag")
    spec_tag = blob[offset : offset + tag_len].decode("utf-8")
    offset += tag_len
    need = offset + n_rows + n_rows * n_cols * 4
    if len(blob) < need:
        raise TruncationError(f"{path}: {len(blob)} bytes, need {need}")
    labels = np.frombuffer(blob, dtype=np.uint8, count=n_rows, offset=offset)
    offset += n_rows
    data = np.frombuffer(blob, dtype="<f4", count=n_rows * n_cols, offset=offset)
    matrix = data.astype(np.float64).reshape(n_rows, n_cols)
    return matrix, labels.copy(), spec_tag
