"""PSNR, compression rate and grids for multiresolution image compression."""
import math
from math import prod
from typing import Sequence

import numpy as np

from app.core.config import settings
from app.core.errors import EmptyInput, IndexOutOfRange, InvalidArgument, ShapeMismatch
from app.models.tensor import DenseTensor
from app.schemas.grid_schema import FactorGrid


def image_grid(shape: Sequence[int], levels: int) -> FactorGrid:
    """
    Degree ``levels + 1`` grid (n1/2^L x n2/2^L x c) (x) (2x2x1)^L. Factor 1
    is a 2x2x1 block, the last factor is the coarse image.
    """
    if len(shape) != 3:
        raise ShapeMismatch(f"images are height x width x channels, got {tuple(shape)}")
    if levels < 0:
        raise InvalidArgument(f"levels must be >= 0, got {levels}")
    height, width, channels = (int(n) for n in shape)
    block = 2 ** levels
    for name, n in (("height", height), ("width", width)):
        if n % block:
            raise ShapeMismatch(f"image {name} {n} is not divisible by 2^{levels} = {block}")
    return FactorGrid.of([(2, 2, 1)] * levels + [(height // block, width // block, channels)])


def psnr(original: DenseTensor, approx: DenseTensor) -> float:
    """Peak signal-to-noise ratio in dB; +inf for identical images."""
    if original.shape != approx.shape:
        raise ShapeMismatch(f"PSNR of {original.shape} against {approx.shape}")
    diff = original.data - approx.data
    mse = float(np.sum(diff * diff)) / original.size
    return _psnr_from_mse(mse)


def psnr_from_sigmas(sigmas: Sequence[float], r: int, values: int) -> float:
    """PSNR of the r-term approximant from the sigma tail; ``values`` = n1 n2 c."""
    s = np.asarray(sigmas, dtype=np.float64)
    if not 0 <= r <= s.size:
        raise IndexOutOfRange(f"truncation at {r} terms of {s.size}")
    tail = s[r:]
    return _psnr_from_mse(float(np.sum(tail * tail)) / values)


def _psnr_from_mse(mse: float) -> float:
    if mse == 0:
        return math.inf
    return 20.0 * math.log10(settings.MAX_PIXEL) - 10.0 * math.log10(mse)


def compression_rate(grid: FactorGrid, k_factors: int, r: int) -> float:
    """
    Storage ratio of the image at the resolution of the ``k_factors`` largest
    factors against r terms of those factors.
    """
    if r <= 0:
        raise EmptyInput("compression rate of zero terms")
    if not 1 <= k_factors <= grid.degree:
        raise IndexOutOfRange(f"kFactors must lie in 1..{grid.degree}, got {k_factors}")
    sizes = grid.factor_sizes[grid.degree - k_factors:]
    return prod(sizes) / (r * sum(sizes))


def downsample(t: DenseTensor, grid: FactorGrid, k_factors: int) -> DenseTensor:
    """Block average over the extents of the dropped (rightmost) factors."""
    grid.check_target(t.shape)
    if not 1 <= k_factors <= grid.degree:
        raise IndexOutOfRange(f"kFactors must lie in 1..{grid.degree}, got {k_factors}")
    dropped = grid.dims[:grid.degree - k_factors]
    blocks = [prod(f[r] for f in dropped) for r in range(grid.order)]
    split = [n for b, full in zip(blocks, t.shape) for n in (b, full // b)]
    arr = t.to_array().reshape(split, order="F")
    return DenseTensor.from_array(arr.mean(axis=tuple(range(0, 2 * grid.order, 2))))
