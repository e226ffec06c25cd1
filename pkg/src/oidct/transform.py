"""8x8 block DCT as a 64x64 matrix acting on raster-flattened blocks.

Pixel blocks and coefficient blocks are both flattened row-major, so that
position ``(r, c)`` lands at index ``8*r + c``. The forward kernel rows are
indexed by frequency ``(u, v)`` in the same raster order.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

BLOCK = 8
N = BLOCK * BLOCK


class KernelKind(str, enum.Enum):
    FORWARD = "forward"
    STANDARD_INVERSE = "standard-inverse"
    LEARNED_INVERSE = "learned-inverse"


@dataclass(frozen=True, eq=False)
class KernelMatrix:
    """A 64x64 kernel applied to flattened 8x8 blocks.

    ``entries`` is stored as a read-only float64 array so instances can be
    shared between workers without copying.
    """

    entries: np.ndarray
    kind: KernelKind

    def __post_init__(self):
        entries = np.array(self.entries, dtype=np.float64)
        if entries.shape != (N, N):
            raise ValueError(f"kernel must be {N}x{N}, got {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise ValueError("kernel entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "kind", KernelKind(self.kind))

    @property
    def is_inverse(self) -> bool:
        return self.kind is not KernelKind.FORWARD


def _dct_matrix() -> np.ndarray:
    # 1-D orthonormal DCT-II basis, C[u, i]
    idx = np.arange(BLOCK)
    c = np.where(idx == 0, 1 / np.sqrt(2), 1.0)
    C = 0.5 * c[:, None] * np.cos((2 * idx[None, :] + 1) * idx[:, None] * np.pi / 16)
    # K[(u,v),(i,j)] = C[u,i] C[v,j]
    return np.kron(C, C)


@lru_cache(maxsize=None)
def build_forward_kernel() -> KernelMatrix:
    """Orthonormal 2-D DCT-II kernel for 8x8 blocks."""
    return KernelMatrix(_dct_matrix(), KernelKind.FORWARD)


@lru_cache(maxsize=None)
def standard_inverse_kernel() -> KernelMatrix:
    """Transpose of the forward kernel, i.e. the classical IDCT."""
    return KernelMatrix(build_forward_kernel().entries.T, KernelKind.STANDARD_INVERSE)


def flatten(block: np.ndarray) -> np.ndarray:
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (BLOCK, BLOCK):
        raise ValueError(f"expected an 8x8 block, got {block.shape}")
    return block.reshape(N).copy()


def unflatten(vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.float64)
    if vec.shape != (N,):
        raise ValueError(f"expected a 64-vector, got {vec.shape}")
    return vec.reshape(BLOCK, BLOCK).copy()


def _check_block(block: np.ndarray) -> np.ndarray:
    block = np.asarray(block, dtype=np.float64)
    if block.shape != (BLOCK, BLOCK):
        raise ValueError(f"expected an 8x8 block, got {block.shape}")
    if not np.all(np.isfinite(block)):
        raise ValueError("block entries must be finite")
    return block


def forward_dct(block: np.ndarray) -> np.ndarray:
    block = _check_block(block)
    return (build_forward_kernel().entries @ block.reshape(N)).reshape(BLOCK, BLOCK)


def inverse_transform(coeffs: np.ndarray, kernel: KernelMatrix) -> np.ndarray:
    """Map a coefficient block back to pixels with a standard or learned kernel."""
    if not kernel.is_inverse:
        raise ValueError("inverse_transform needs an inverse kernel, got a forward kernel")
    coeffs = _check_block(coeffs)
    return (kernel.entries @ coeffs.reshape(N)).reshape(BLOCK, BLOCK)


# Batched variants over rows of an (n, 64) array; used by the codec and learner.

def forward_dct_rows(rows: np.ndarray) -> np.ndarray:
    return np.asarray(rows, dtype=np.float64) @ build_forward_kernel().entries.T


def inverse_transform_rows(rows: np.ndarray, kernel: KernelMatrix) -> np.ndarray:
    if not kernel.is_inverse:
        raise ValueError("inverse_transform needs an inverse kernel, got a forward kernel")
    return np.asarray(rows, dtype=np.float64) @ kernel.entries.T
