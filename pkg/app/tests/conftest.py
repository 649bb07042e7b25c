import numpy as np
import pytest

from app.core.log_config import setup_logging
from app.models.tensor import DenseTensor


@pytest.fixture(autouse=True, scope="session")
def _quiet_logs():
    setup_logging("WARNING")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_tensor(rng: np.random.Generator, shape) -> DenseTensor:
    return DenseTensor.from_array(rng.standard_normal(tuple(shape)))


def relative(a: DenseTensor, b: DenseTensor) -> float:
    return (a - b).frobenius_norm() / b.frobenius_norm()


def synthetic_image(height: int, width: int, seed: int = 0) -> DenseTensor:
    """Smooth colour gradients, a few stripes and mild noise, in [0, 255]."""
    g = np.random.default_rng(seed)
    y, x = np.mgrid[0:height, 0:width] / np.array([height, width])[:, None, None]
    red = 120 + 100 * np.sin(3 * x + 2 * y)
    green = 128 + 90 * np.cos(5 * x * y + 1)
    blue = 90 + 60 * ((np.floor(12 * x) + np.floor(8 * y)) % 2)
    img = np.stack([red, green, blue], axis=-1) + g.normal(0, 4, (height, width, 3))
    return DenseTensor.from_array(np.clip(img, 0, 255))
