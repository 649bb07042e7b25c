import numpy as np
import pytest

from app.core.errors import FormatError
from app.models.enums import Backend
from app.models.tensor import DenseTensor
from app.schemas.grid_schema import FactorGrid
from app.services.structure import hankel_map
from app.services.tkpsvd import reconstruct_kp, tkpsvd
from app.tests.conftest import random_tensor, synthetic_image
from app.utils.image_io import quantize, read_image, write_image
from app.utils.tensor_io import (
    read_decomposition,
    read_permutation_pattern,
    read_sigmas,
    read_tensor,
    write_decomposition,
    write_permutation_pattern,
    write_tensor,
)


@pytest.mark.parametrize("suffix", [".tenb", ".ten"])
def test_tensor_files_are_exact(tmp_path, rng, suffix):
    t = random_tensor(rng, (3, 1, 4))
    path = tmp_path / f"t{suffix}"
    write_tensor(path, t)
    back = read_tensor(path)
    assert back.shape == t.shape
    assert np.array_equal(back.data, t.data)


def test_binary_layout(tmp_path):
    path = tmp_path / "t.tenb"
    write_tensor(path, DenseTensor([1.0, 2.0], (2,)))
    raw = path.read_bytes()
    assert raw[:4] == b"TEN1"
    assert len(raw) == 4 + 4 + 8 + 16


def test_bad_tensor_files(tmp_path):
    bad_magic = tmp_path / "bad.tenb"
    bad_magic.write_bytes(b"XXXX" + b"\x01\x00\x00\x00" + (1).to_bytes(8, "little") + b"\x00" * 8)
    with pytest.raises(FormatError):
        read_tensor(bad_magic)
    truncated = tmp_path / "short.tenb"
    write_tensor(truncated, DenseTensor([1.0, 2.0, 3.0], (3,)))
    truncated.write_bytes(truncated.read_bytes()[:-4])
    with pytest.raises(FormatError):
        read_tensor(truncated)
    text = tmp_path / "count.ten"
    text.write_text("TEN1\n1\n3\n1.0\n2.0\n")
    with pytest.raises(FormatError):
        read_tensor(text)


@pytest.mark.parametrize("backend", list(Backend))
def test_decomposition_round_trip(tmp_path, rng, backend):
    t = random_tensor(rng, (6, 6))
    res = tkpsvd(t, FactorGrid.parse("2x3,3x2"), backend)
    path = tmp_path / "d.tkp"
    write_decomposition(path, res)
    back = read_decomposition(path)
    assert back.grid == res.grid
    assert back.backend is backend
    assert back.source_norm == res.source_norm
    assert np.array_equal(back.sigmas, res.sigmas)
    assert back.degenerate == res.degenerate
    assert reconstruct_kp(back) == reconstruct_kp(res)
    assert np.array_equal(read_sigmas(path), res.sigmas)


def test_decomposition_bad_magic(tmp_path):
    path = tmp_path / "d.tkp"
    path.write_bytes(b"NOPE" + b"\x00" * 64)
    with pytest.raises(FormatError):
        read_decomposition(path)


def test_sigma_text_file(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("4 3\n1\n")
    assert read_sigmas(path).tolist() == [4.0, 3.0, 1.0]
    path.write_text("4 x\n")
    with pytest.raises(FormatError):
        read_sigmas(path)


def test_permutation_pattern_round_trip(tmp_path):
    p = hankel_map((3, 3, 3))
    path = tmp_path / "p.txt"
    write_permutation_pattern(path, p)
    lines = path.read_text().splitlines()
    assert lines[1] == "2 4"
    assert read_permutation_pattern(path) == p


@pytest.mark.parametrize("channels,suffix", [(3, ".ppm"), (1, ".pgm")])
def test_image_round_trip(tmp_path, channels, suffix):
    img = synthetic_image(8, 12, seed=2)
    if channels == 1:
        img = DenseTensor.from_array(img.to_array()[:, :, :1])
    path = tmp_path / f"img{suffix}"
    write_image(path, img)
    back = read_image(path)
    assert back.shape == (8, 12, channels)
    assert np.array_equal(back.to_array(), quantize(img).astype(np.float64))


def test_quantize_clamps_and_rounds_half_even():
    t = DenseTensor.from_array(np.array([-3.0, 2.5, 3.5, 300.0, 254.6]).reshape(5, 1, 1))
    assert quantize(t).reshape(-1).tolist() == [0, 2, 4, 255, 255]
