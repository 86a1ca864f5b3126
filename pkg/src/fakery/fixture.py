"""Synthetic dataset fixtures for self-contained testing.

Class 0 ("REAL") images are white noise; class 1 ("FAKE") images are white
noise passed twice through a 3x3 box blur and re-quantized, which suppresses
high frequencies the same way generative up-sampling tends to.  A null-signal
variant makes both classes plain noise so detectors should score at chance.
"""

from __future__ import annotations

import os

import numpy as np
from PIL import Image

from .dataset import IMAGE_SIDE
from .rng import SplitMix64


def box_blur(img: np.ndarray, passes: int = 2) -> np.ndarray:
    """Repeated 3x3 mean filter with edge replication, per channel."""
    out = img.astype(np.float64)
    for _ in range(passes):
        padded = np.pad(out, ((1, 1), (1, 1), (0, 0)), mode="edge")
        acc = np.zeros_like(out)
        for dr in range(3):
            for dc in range(3):
                acc += padded[dr : dr + IMAGE_SIDE, dc : dc + IMAGE_SIDE]
        out = acc / 9.0
    return out


def make_fixture(out_dir: str, n_per_class: int, seed: int, null_signal: bool = False) -> None:
    """Write a dataset tree with n_per_class images per class per split.

    Deterministic from seed; 4 * n_per_class files total.
    """
    if n_per_class < 2:
        raise ValueError("n_per_class must be >= 2")
    rng = SplitMix64(seed)
    n_bytes = IMAGE_SIDE * IMAGE_SIDE * 3
    for split in ("train", "test"):
        for cls_dir, cls in (("REAL", 0), ("FAKE", 1)):
            leaf = os.path.join(out_dir, split, cls_dir)
            os.makedirs(leaf, exist_ok=True)
            for i in range(n_per_class):
                noise = rng.block_bytes(n_bytes).reshape(IMAGE_SIDE, IMAGE_SIDE, 3)
                if cls == 1 and not null_signal:
                    blurred = box_blur(noise)
                    pixels = np.clip(np.rint(blurred), 0, 255).astype(np.uint8)
                else:
                    pixels = noise
                Image.fromarray(pixels, mode="RGB").save(
                    os.path.join(leaf, f"img_{i:05d}.png")
                )
