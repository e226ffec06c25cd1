"""Whole-image JPEG-style pipeline (4:4:4, no entropy coding).

Encode: RGB -> YCbCr, edge-pad to multiples of 8, level shift, forward DCT,
quantize. Decode: dequantize, inverse transform with a chosen kernel, undo
the level shift, crop, YCbCr -> RGB, round and clamp to [0, 255].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from . import quantizer
from .transform import (BLOCK, N, KernelMatrix, forward_dct_rows,
                        inverse_transform_rows)

RGB = "RGB"
YCBCR = "YCbCr"

# BT.601 full range
_RGB2YCC = np.array([
    [0.299, 0.587, 0.114],
    [-0.168736, -0.331264, 0.5],
    [0.5, -0.418688, -0.081312],
])
_YCC2RGB = np.linalg.inv(_RGB2YCC)
_CHROMA_OFFSET = np.array([0.0, 128.0, 128.0])


@dataclass(frozen=True, eq=False)
class ImagePlanes:
    """Three planes of shape (height, width), tagged RGB or YCbCr."""

    planes: np.ndarray
    space: str = RGB

    def __post_init__(self):
        planes = np.asarray(self.planes, dtype=np.float64)
        if planes.ndim != 3 or planes.shape[0] != 3:
            raise ValueError(f"expected planes of shape (3, H, W), got {planes.shape}")
        if self.space not in (RGB, YCBCR):
            raise ValueError(f"unknown color space {self.space!r}")
        object.__setattr__(self, "planes", planes)

    @property
    def height(self) -> int:
        return self.planes.shape[1]

    @property
    def width(self) -> int:
        return self.planes.shape[2]

    @classmethod
    def from_hwc(cls, array: np.ndarray, space: str = RGB) -> "ImagePlanes":
        array = np.asarray(array)
        if array.ndim == 2:
            array = np.repeat(array[:, :, None], 3, axis=2)
        return cls(np.moveaxis(array[:, :, :3], 2, 0), space)

    def to_hwc(self) -> np.ndarray:
        return np.moveaxis(self.planes, 0, 2)


@dataclass(frozen=True, eq=False)
class EncodedImage:
    """Quantized coefficients, shape (3, blocks_y * blocks_x, 64), raster block order."""

    width: int
    height: int
    qf: int
    blocks: np.ndarray

    def __post_init__(self):
        blocks = np.asarray(self.blocks)
        expected = (3, blocks_along(self.height) * blocks_along(self.width), N)
        if blocks.shape != expected:
            raise ValueError(f"expected coefficient array {expected}, got {blocks.shape}")
        object.__setattr__(self, "blocks", blocks.astype(np.int32))


def blocks_along(n: int) -> int:
    return -(-n // BLOCK)


def rgb_to_ycbcr(img: ImagePlanes) -> ImagePlanes:
    if img.space != RGB:
        raise ValueError(f"rgb_to_ycbcr expects an RGB image, got {img.space}")
    ycc = np.tensordot(_RGB2YCC, img.planes, axes=1) + _CHROMA_OFFSET[:, None, None]
    return ImagePlanes(ycc, YCBCR)


def ycbcr_to_rgb(img: ImagePlanes) -> ImagePlanes:
    if img.space != YCBCR:
        raise ValueError(f"ycbcr_to_rgb expects a YCbCr image, got {img.space}")
    rgb = np.tensordot(_YCC2RGB, img.planes - _CHROMA_OFFSET[:, None, None], axes=1)
    return ImagePlanes(rgb, RGB)


def luma(img: ImagePlanes) -> np.ndarray:
    if img.space == YCBCR:
        return img.planes[0]
    return np.tensordot(_RGB2YCC[0], img.planes, axes=1)


def to_blocks(plane: np.ndarray) -> np.ndarray:
    """(H, W) plane with H, W multiples of 8 -> (n_blocks, 64) raster rows."""
    h, w = plane.shape
    by, bx = h // BLOCK, w // BLOCK
    return (plane[:by * BLOCK, :bx * BLOCK]
            .reshape(by, BLOCK, bx, BLOCK).swapaxes(1, 2).reshape(by * bx, N))


def from_blocks(rows: np.ndarray, by: int, bx: int) -> np.ndarray:
    return rows.reshape(by, bx, BLOCK, BLOCK).swapaxes(1, 2).reshape(by * BLOCK, bx * BLOCK)


def pad_to_blocks(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    return np.pad(plane, ((0, blocks_along(h) * BLOCK - h), (0, blocks_along(w) * BLOCK - w)),
                  mode="edge")


def encode(img: ImagePlanes, qf: int) -> EncodedImage:
    if img.width == 0 or img.height == 0:
        raise ValueError("cannot encode an empty image")
    table = quantizer.table_from_qf(qf)
    ycc = rgb_to_ycbcr(img)
    blocks = np.stack([
        quantizer.quantize(forward_dct_rows(to_blocks(pad_to_blocks(p)) - 128.0), table)
        for p in ycc.planes
    ])
    return EncodedImage(img.width, img.height, int(qf), blocks)


def decode_planes(enc: EncodedImage, kernel: KernelMatrix) -> ImagePlanes:
    """Reconstructed YCbCr planes before rounding and clamping."""
    table = quantizer.table_from_qf(enc.qf)
    by, bx = blocks_along(enc.height), blocks_along(enc.width)
    planes = []
    for rows in enc.blocks:
        pix = inverse_transform_rows(quantizer.dequantize(rows, table), kernel) + 128.0
        planes.append(from_blocks(pix, by, bx)[:enc.height, :enc.width])
    return ImagePlanes(np.stack(planes), YCBCR)


def to_pixels(img: ImagePlanes) -> ImagePlanes:
    """Round half away from zero and clamp to the 8-bit range."""
    return ImagePlanes(np.clip(quantizer.round_half_away(img.planes), 0, 255), img.space)


def decode(enc: EncodedImage, kernel: KernelMatrix) -> ImagePlanes:
    if not kernel.is_inverse:
        raise ValueError("decode needs an inverse kernel, got a forward kernel")
    return to_pixels(ycbcr_to_rgb(decode_planes(enc, kernel)))


def training_rows(img: ImagePlanes, qf: int) -> Tuple[np.ndarray, np.ndarray]:
    """Level-shifted luma block rows and their dequantized DCT rows.

    Only complete 8x8 blocks are used; partial edge blocks are dropped.
    """
    table = quantizer.table_from_qf(qf)
    y = luma(img)
    by, bx = y.shape[0] // BLOCK, y.shape[1] // BLOCK
    if by == 0 or bx == 0:
        return np.zeros((0, N)), np.zeros((0, N))
    x = to_blocks(y[:by * BLOCK, :bx * BLOCK]) - 128.0
    d = quantizer.dequantize(quantizer.quantize(forward_dct_rows(x), table), table)
    return x, d


def extract_training_pairs(img: ImagePlanes, qf: int) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    x, d = training_rows(img, qf)
    for xi, di in zip(x, d):
        yield xi.reshape(BLOCK, BLOCK), di.reshape(BLOCK, BLOCK)
