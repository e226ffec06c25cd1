"""Quality-factor scaled quantization tables (IJG convention) and Quan/DeQuan."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# fmt: off
LUMA_BASE = np.array([
    16,  11,  10,  16,  24,  40,  51,  61,
    12,  12,  14,  19,  26,  58,  60,  55,
    14,  13,  16,  24,  40,  57,  69,  56,
    14,  17,  22,  29,  51,  87,  80,  62,
    18,  22,  37,  56,  68, 109, 103,  77,
    24,  35,  55,  64,  81, 104, 113,  92,
    49,  64,  78,  87, 103, 121, 120, 101,
    72,  92,  95,  98, 112, 100, 103,  99,
], dtype=np.int64).reshape(8, 8)
# fmt: on
LUMA_BASE.setflags(write=False)


@dataclass(frozen=True, eq=False)
class QuantTable:
    divisors: np.ndarray
    qf: int

    def __post_init__(self):
        d = np.array(self.divisors, dtype=np.int64).reshape(8, 8)
        if d.min() < 1 or d.max() > 255:
            raise ValueError("quantization divisors must lie in [1, 255]")
        d.setflags(write=False)
        object.__setattr__(self, "divisors", d)


def qf_scale(qf: int) -> int:
    if qf < 50:
        return 5000 // qf
    return 200 - 2 * qf


def table_from_qf(qf: int) -> QuantTable:
    """Scale the luminance base table to the given quality factor.

    Raises
    ------
    ValueError
        If ``qf`` is not an integer in [1, 100].
    """
    if isinstance(qf, bool) or int(qf) != qf or not 1 <= qf <= 100:
        raise ValueError(f"quality factor must be an integer in [1, 100], got {qf!r}")
    qf = int(qf)
    scale = qf_scale(qf)
    divisors = np.clip((LUMA_BASE * scale + 50) // 100, 1, 255)
    return QuantTable(divisors, qf)


def round_half_away(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize(coeffs: np.ndarray, table: QuantTable) -> np.ndarray:
    # Broadcasts over leading axes as long as the trailing shape is (8, 8) or (64,).
    coeffs = np.asarray(coeffs, dtype=np.float64)
    div = table.divisors if coeffs.shape[-2:] == (8, 8) else table.divisors.reshape(64)
    return round_half_away(coeffs / div)


def dequantize(q: np.ndarray, table: QuantTable) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    div = table.divisors if q.shape[-2:] == (8, 8) else table.divisors.reshape(64)
    return q * div
