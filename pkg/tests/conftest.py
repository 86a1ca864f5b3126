import numpy as np
import pytest

from fakery.dataset import ImageRecord


def random_record(rng: np.random.Generator, label: int = 0) -> ImageRecord:
    pixels = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
    return ImageRecord(pixels=pixels, label=label, path="<random>")


def solid_record(r: int, g: int, b: int, label: int = 0) -> ImageRecord:
    pixels = np.empty((32, 32, 3), dtype=np.uint8)
    pixels[:, :, 0] = r
    pixels[:, :, 1] = g
    pixels[:, :, 2] = b
    return ImageRecord(pixels=pixels, label=label, path="<solid>")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
