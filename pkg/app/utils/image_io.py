from pathlib import Path

import numpy as np
from PIL import Image

from app.core.config import settings
from app.core.errors import FormatError, ShapeMismatch
from app.models.tensor import DenseTensor


def read_image(path: "str | Path") -> DenseTensor:
    """PGM/PPM (or any 8-bit L/RGB image) as a height x width x channels tensor."""
    with Image.open(path) as img:
        if img.mode not in ("L", "RGB"):
            raise FormatError(f"{path}: unsupported image mode {img.mode}, expected 8-bit gray or RGB")
        pixels = np.asarray(img, dtype=np.float64)
    if pixels.ndim == 2:
        pixels = pixels[:, :, None]
    return DenseTensor.from_array(pixels)


def quantize(t: DenseTensor) -> np.ndarray:
    """Clamp to [0, MAX_PIXEL] and round half to even."""
    return np.rint(np.clip(t.to_array(), 0.0, settings.MAX_PIXEL)).astype(np.uint8)


def write_image(path: "str | Path", t: DenseTensor) -> None:
    """Writes binary P5 (1 channel) or P6 (3 channels) for .pgm/.ppm paths."""
    if t.order != 3 or t.shape[2] not in (1, 3):
        raise ShapeMismatch(f"images are height x width x (1 or 3), got {t.shape}")
    pixels = quantize(t)
    if t.shape[2] == 1:
        img = Image.fromarray(pixels[:, :, 0])
    else:
        img = Image.fromarray(pixels)
    img.save(path)
