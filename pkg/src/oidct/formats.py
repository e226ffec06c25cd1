"""On-disk formats: PPM/PNG images, OIDK kernel files and encoded-image sidecars.

Kernel file layout (little endian)::

    b"OIDK"  u32 version=1  u8 training_qf  f64 ridge_lambda  u64 sample_count
    4096 x f64 entries (row-major)  u32 crc32 of everything before it

Encoded sidecar layout (little endian)::

    b"OIDE"  u32 version=1  u32 width  u32 height  u8 qf  u32 n_blocks
    3 * n_blocks * 64 x i32 coefficients  u32 crc32
"""
from __future__ import annotations

import os
import re
import struct
import zlib
from pathlib import Path
from typing import Union

import numpy as np

from .codec import EncodedImage, ImagePlanes, RGB
from .learner import TrainedKernel
from .transform import N, KernelKind, KernelMatrix

PathLike = Union[str, os.PathLike]

KERNEL_MAGIC = b"OIDK"
KERNEL_VERSION = 1
_KERNEL_HEADER = struct.Struct("<4sIBdQ")
KERNEL_FILE_SIZE = _KERNEL_HEADER.size + N * N * 8 + 4

ENCODED_MAGIC = b"OIDE"
ENCODED_VERSION = 1
_ENCODED_HEADER = struct.Struct("<4sIIIBI")


class FormatError(ValueError):
    """File is not in the expected format (bad magic, header or size)."""


class ChecksumError(FormatError):
    pass


class PayloadError(FormatError):
    """Image header parsed but the pixel payload is short or malformed."""


# ---------------------------------------------------------------- images

_PPM_HEADER = re.compile(rb"\A(P6)(?:\s|#[^\n]*\n)+(\d+)(?:\s|#[^\n]*\n)+(\d+)"
                         rb"(?:\s|#[^\n]*\n)+(\d+)\s")


def parse_ppm(data: bytes) -> ImagePlanes:
    m = _PPM_HEADER.match(data)
    if m is None:
        raise FormatError("not a binary PPM (P6) file or malformed header")
    width, height, maxval = (int(g) for g in m.groups()[1:])
    if maxval != 255:
        raise FormatError(f"unsupported PPM maxval {maxval}, only 255 is accepted")
    if width == 0 or height == 0:
        raise FormatError("PPM has zero width or height")
    need = width * height * 3
    payload = data[m.end():m.end() + need]
    if len(payload) < need:
        raise PayloadError(f"PPM payload truncated: {len(payload)} of {need} bytes")
    arr = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return ImagePlanes.from_hwc(arr.astype(np.float64))


def format_ppm(img: ImagePlanes) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + _as_bytes(img).tobytes()


def _as_bytes(img: ImagePlanes) -> np.ndarray:
    if img.space != RGB:
        raise ValueError("only RGB images can be written")
    hwc = img.to_hwc()
    if hwc.min() < 0 or hwc.max() > 255 or np.any(hwc != np.round(hwc)):
        raise ValueError("image samples must be integers in [0, 255]")
    return np.ascontiguousarray(hwc, dtype=np.uint8)


def read_image(path: PathLike) -> ImagePlanes:
    """Read an 8-bit RGB image: binary PPM, or PNG when Pillow is installed."""
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"P6":
        return parse_ppm(data)
    if data[:8] == b"\x89PNG\r\n\x1a\n":
        from PIL import Image
        with Image.open(path) as im:
            return ImagePlanes.from_hwc(np.asarray(im.convert("RGB"), dtype=np.float64))
    raise FormatError(f"{path}: unsupported image format")


def write_image(img: ImagePlanes, path: PathLike) -> None:
    path = Path(path)
    if path.suffix.lower() == ".png":
        from PIL import Image
        Image.fromarray(_as_bytes(img), "RGB").save(path)
    else:
        path.write_bytes(format_ppm(img))


# ---------------------------------------------------------------- kernels

def kernel_to_bytes(tk: TrainedKernel) -> bytes:
    body = _KERNEL_HEADER.pack(KERNEL_MAGIC, KERNEL_VERSION, tk.training_qf,
                               float(tk.ridge_lambda), tk.sample_count)
    body += np.ascontiguousarray(tk.entries, dtype="<f8").tobytes()
    return body + struct.pack("<I", zlib.crc32(body))


def kernel_from_bytes(data: bytes) -> TrainedKernel:
    if len(data) < 4 or data[:4] != KERNEL_MAGIC:
        raise FormatError("not a kernel file (bad magic)")
    if len(data) != KERNEL_FILE_SIZE:
        raise FormatError(f"kernel file has {len(data)} bytes, expected {KERNEL_FILE_SIZE}")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) != crc:
        raise ChecksumError("kernel file checksum mismatch")
    _, version, qf, lam, count = _KERNEL_HEADER.unpack_from(body)
    if version != KERNEL_VERSION:
        raise FormatError(f"unsupported kernel file version {version}")
    entries = np.frombuffer(body, dtype="<f8", offset=_KERNEL_HEADER.size).reshape(N, N)
    return TrainedKernel(KernelMatrix(entries, KernelKind.LEARNED_INVERSE), qf, count, lam,
                         source_digest=f"file:crc32={crc:08x}")


def save_kernel(tk: TrainedKernel, path: PathLike) -> None:
    Path(path).write_bytes(kernel_to_bytes(tk))


def load_kernel(path: PathLike) -> TrainedKernel:
    return kernel_from_bytes(Path(path).read_bytes())


# ---------------------------------------------------------------- encoded images

def encoded_to_bytes(enc: EncodedImage) -> bytes:
    n_blocks = enc.blocks.shape[1]
    body = _ENCODED_HEADER.pack(ENCODED_MAGIC, ENCODED_VERSION, enc.width, enc.height,
                                enc.qf, n_blocks)
    body += np.ascontiguousarray(enc.blocks, dtype="<i4").tobytes()
    return body + struct.pack("<I", zlib.crc32(body))


def encoded_from_bytes(data: bytes) -> EncodedImage:
    if len(data) < _ENCODED_HEADER.size + 4 or data[:4] != ENCODED_MAGIC:
        raise FormatError("not an encoded image file")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) != crc:
        raise ChecksumError("encoded image checksum mismatch")
    _, version, width, height, qf, n_blocks = _ENCODED_HEADER.unpack_from(body)
    if version != ENCODED_VERSION:
        raise FormatError(f"unsupported encoded image version {version}")
    if len(body) != _ENCODED_HEADER.size + 3 * n_blocks * N * 4:
        raise FormatError("encoded image payload length does not match its header")
    blocks = np.frombuffer(body, dtype="<i4", offset=_ENCODED_HEADER.size)
    return EncodedImage(width, height, qf, blocks.reshape(3, n_blocks, N))


def save_encoded(enc: EncodedImage, path: PathLike) -> None:
    Path(path).write_bytes(encoded_to_bytes(enc))


def load_encoded(path: PathLike) -> EncodedImage:
    return encoded_from_bytes(Path(path).read_bytes())
