import struct
import zlib

import numpy as np
import pytest

from oidct import codec
from oidct.codec import ImagePlanes
from oidct.formats import (KERNEL_FILE_SIZE, ChecksumError, FormatError, PayloadError,
                           encoded_from_bytes, encoded_to_bytes, format_ppm, kernel_from_bytes,
                           kernel_to_bytes, load_encoded, load_kernel, parse_ppm, read_image,
                           save_encoded, save_kernel, write_image)
from oidct.learner import TrainedKernel
from oidct.transform import KernelKind, KernelMatrix


@pytest.fixture
def trained(rng):
    return TrainedKernel(KernelMatrix(rng.normal(size=(64, 64)), KernelKind.LEARNED_INVERSE),
                         training_qf=70, sample_count=123_456, ridge_lambda=0.0321)


def test_known_2x2_ppm():
    data = b"P6\n2 2\n255\n" + bytes([255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30])
    img = parse_ppm(data)
    assert (img.width, img.height) == (2, 2)
    assert img.to_hwc().reshape(4, 3).tolist() == [[255, 0, 0], [0, 255, 0], [0, 0, 255], [10, 20, 30]]


def test_ppm_header_comments_and_whitespace():
    data = b"P6 # made by hand\n 1\t1 \n# max\n255\n" + bytes([1, 2, 3])
    assert parse_ppm(data).to_hwc().reshape(3).tolist() == [1, 2, 3]


def test_ppm_round_trip(tmp_path, rng):
    img = ImagePlanes(rng.integers(0, 256, (3, 5, 7)).astype(float))
    write_image(img, tmp_path / "a.ppm")
    back = read_image(tmp_path / "a.ppm")
    assert np.array_equal(back.planes, img.planes)
    write_image(back, tmp_path / "b.ppm")
    assert (tmp_path / "a.ppm").read_bytes() == (tmp_path / "b.ppm").read_bytes()


def test_ppm_rewrite_normalizes_header(tmp_path):
    raw = b"P6  2\n1   255\n" + bytes(range(6))
    (tmp_path / "in.ppm").write_bytes(raw)
    write_image(read_image(tmp_path / "in.ppm"), tmp_path / "out.ppm")
    out = (tmp_path / "out.ppm").read_bytes()
    assert out == b"P6\n2 1\n255\n" + bytes(range(6))


def test_png_round_trip(tmp_path, rng):
    pytest.importorskip("PIL")
    img = ImagePlanes(rng.integers(0, 256, (3, 6, 4)).astype(float))
    write_image(img, tmp_path / "a.png")
    assert np.array_equal(read_image(tmp_path / "a.png").planes, img.planes)


@pytest.mark.parametrize("data,err", [
    (b"P6\n2 2\n255\n" + bytes(11), PayloadError),
    (b"P3\n1 1\n255\n1 2 3\n", FormatError),
    (b"P6\n1 1\n65535\n" + bytes(6), FormatError),
    (b"P6\n0 1\n255\n", FormatError),
    (b"P6\nx 1\n255\n", FormatError),
    (b"", FormatError),
])
def test_ppm_errors(data, err):
    with pytest.raises(err):
        parse_ppm(data)


def test_read_unknown_format(tmp_path):
    (tmp_path / "x.bin").write_bytes(b"GIF89a....")
    with pytest.raises(FormatError):
        read_image(tmp_path / "x.bin")


def test_write_rejects_non_8bit(tmp_path):
    with pytest.raises(ValueError):
        write_image(ImagePlanes(np.full((3, 2, 2), 1.5)), tmp_path / "bad.ppm")
    with pytest.raises(ValueError):
        format_ppm(ImagePlanes(np.full((3, 2, 2), 300.0)))


def test_kernel_round_trip(tmp_path, trained):
    save_kernel(trained, tmp_path / "k.oidk")
    back = load_kernel(tmp_path / "k.oidk")
    assert back.entries.tobytes() == trained.entries.tobytes()
    assert back.training_qf == 70 and back.sample_count == 123_456
    assert back.ridge_lambda == 0.0321
    assert back.kernel.kind is KernelKind.LEARNED_INVERSE


def test_kernel_layout(trained):
    data = kernel_to_bytes(trained)
    assert len(data) == KERNEL_FILE_SIZE == 4 + 4 + 1 + 8 + 8 + 4096 * 8 + 4
    assert data[:4] == b"OIDK"
    assert struct.unpack_from("<I", data, 4) == (1,)
    assert data[8] == 70
    assert struct.unpack_from("<d", data, 9) == (0.0321,)
    assert struct.unpack_from("<Q", data, 17) == (123_456,)
    assert struct.unpack_from("<d", data, 25)[0] == trained.entries[0, 0]
    assert struct.unpack_from("<d", data, 25 + 8 * 65)[0] == trained.entries[1, 1]
    assert struct.unpack("<I", data[-4:])[0] == zlib.crc32(data[:-4])


@pytest.mark.parametrize("offset", [9, 30, 25 + 8 * 4095, KERNEL_FILE_SIZE - 1])
def test_kernel_bit_flip_rejected(trained, offset):
    data = bytearray(kernel_to_bytes(trained))
    data[offset] ^= 0x01
    with pytest.raises(ChecksumError):
        kernel_from_bytes(bytes(data))


def test_kernel_bad_magic(trained):
    data = b"XIDK" + kernel_to_bytes(trained)[4:]
    with pytest.raises(FormatError):
        kernel_from_bytes(data)


def test_kernel_bad_version(trained):
    body = bytearray(kernel_to_bytes(trained)[:-4])
    body[4:8] = struct.pack("<I", 2)
    data = bytes(body) + struct.pack("<I", zlib.crc32(bytes(body)))
    with pytest.raises(FormatError, match="version"):
        kernel_from_bytes(data)


@pytest.mark.parametrize("n", [0, 3, 100, KERNEL_FILE_SIZE - 1])
def test_kernel_truncated(trained, n):
    with pytest.raises(FormatError):
        kernel_from_bytes(kernel_to_bytes(trained)[:n])


def test_encoded_round_trip(tmp_path, rng):
    img = ImagePlanes(rng.integers(0, 256, (3, 11, 19)).astype(float))
    enc = codec.encode(img, 42)
    save_encoded(enc, tmp_path / "e.oide")
    back = load_encoded(tmp_path / "e.oide")
    assert (back.width, back.height, back.qf) == (19, 11, 42)
    assert np.array_equal(back.blocks, enc.blocks)


def test_encoded_corruption(rng):
    enc = codec.encode(ImagePlanes(rng.integers(0, 256, (3, 8, 8)).astype(float)), 50)
    data = bytearray(encoded_to_bytes(enc))
    data[30] ^= 0xFF
    with pytest.raises(ChecksumError):
        encoded_from_bytes(bytes(data))
    with pytest.raises(FormatError):
        encoded_from_bytes(b"OID")
