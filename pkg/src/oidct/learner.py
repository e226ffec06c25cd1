"""Least-squares learning of an inverse DCT kernel from (pixel, dequantized) pairs.

The regression target is ``P ~ K_hat @ D`` where columns of ``P`` are
flattened pixel blocks and columns of ``D`` the matching dequantized
coefficient blocks. Only the sufficient statistics ``P D^T`` and ``D D^T``
are kept, so memory does not grow with the number of samples.
"""
from __future__ import annotations

import hashlib
import logging
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .transform import N, KernelKind, KernelMatrix

log = logging.getLogger(__name__)

MIN_SAMPLES = N
RECOMMENDED_SAMPLES = N * N
PINV_RCOND = 1e-10


class InsufficientDataError(ValueError):
    pass


class EmptyBankError(ValueError):
    pass


@dataclass
class TrainingAccumulator:
    cross: np.ndarray = field(default_factory=lambda: np.zeros((N, N)))
    auto: np.ndarray = field(default_factory=lambda: np.zeros((N, N)))
    count: int = 0

    def accumulate(self, pixels: np.ndarray, dequantized: np.ndarray) -> "TrainingAccumulator":
        """Add one block pair; equivalent to appending a column to P and D."""
        x = np.asarray(pixels, dtype=np.float64).reshape(N)
        d = np.asarray(dequantized, dtype=np.float64).reshape(N)
        self.cross += np.outer(x, d)
        self.auto += np.outer(d, d)
        self.count += 1
        return self

    def accumulate_rows(self, pixels: np.ndarray, dequantized: np.ndarray) -> "TrainingAccumulator":
        """Add many block pairs given as (n, 64) arrays of flattened blocks."""
        X = np.asarray(pixels, dtype=np.float64).reshape(-1, N)
        D = np.asarray(dequantized, dtype=np.float64).reshape(-1, N)
        if X.shape != D.shape:
            raise ValueError(f"pixel rows {X.shape} and coefficient rows {D.shape} differ")
        self.cross += X.T @ D
        self.auto += D.T @ D
        self.count += X.shape[0]
        return self

    def merge(self, other: "TrainingAccumulator") -> "TrainingAccumulator":
        return TrainingAccumulator(self.cross + other.cross, self.auto + other.auto,
                                   self.count + other.count)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.cross).tobytes())
        h.update(np.ascontiguousarray(self.auto).tobytes())
        h.update(str(self.count).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True, eq=False)
class TrainedKernel:
    kernel: KernelMatrix
    training_qf: int
    sample_count: int
    ridge_lambda: float
    source_digest: str = ""

    def __post_init__(self):
        if not 1 <= self.training_qf <= 100:
            raise ValueError(f"training_qf must be in [1, 100], got {self.training_qf}")
        if self.ridge_lambda < 0:
            raise ValueError("ridge_lambda must be nonnegative")

    @property
    def entries(self) -> np.ndarray:
        return self.kernel.entries


def default_lambda(acc: TrainingAccumulator) -> float:
    return 1e-6 * float(np.trace(acc.auto)) / N


def solve_kernel(acc: TrainingAccumulator, lam: Optional[float] = None,
                 training_qf: int = 50) -> TrainedKernel:
    """Solve the ridge normal equations ``K_hat (auto + lam I) = cross``.

    Parameters
    ----------
    acc : TrainingAccumulator
        Statistics gathered at a single quality factor.
    lam : float, optional
        Ridge weight. ``None`` selects ``1e-6 * trace(auto) / 64``; pass 0
        for the plain least-squares fit.
    training_qf : int
        Quality factor the statistics were gathered at, stored with the kernel.

    Returns
    -------
    TrainedKernel
        The learned inverse kernel. When ``auto + lam I`` is not numerically
        positive definite the fit falls back to an SVD pseudo-inverse and the
        ``source_digest`` ends in ``+pinv``.
    """
    if acc.count < MIN_SAMPLES:
        raise InsufficientDataError(
            f"need at least {MIN_SAMPLES} blocks to fit a 64x64 kernel, got {acc.count}")
    if acc.count < RECOMMENDED_SAMPLES:
        warnings.warn(f"only {acc.count} training blocks; fewer than {RECOMMENDED_SAMPLES} "
                      "gives a poorly determined kernel", RuntimeWarning, stacklevel=2)
    lam = default_lambda(acc) if lam is None else float(lam)
    if lam < 0:
        raise ValueError("ridge lambda must be nonnegative")

    A = acc.auto + lam * np.eye(N)
    method = "chol"
    try:
        # K_hat A = cross  <=>  A K_hat^T = cross^T  (A symmetric)
        c = scipy.linalg.cho_factor(A, lower=True, check_finite=True)
        K_hat = scipy.linalg.cho_solve(c, acc.cross.T).T
        if not np.all(np.isfinite(K_hat)) or _rel_residual(acc, K_hat, lam) > 1e-8:
            raise np.linalg.LinAlgError("cholesky solve is inaccurate")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        method = "pinv"
        K_hat = acc.cross @ np.linalg.pinv(A, rcond=PINV_RCOND, hermitian=True)
    log.debug("solved kernel qf=%s n=%d lambda=%.3g via %s", training_qf, acc.count, lam, method)

    digest = acc.digest() + ("+pinv" if method == "pinv" else "")
    return TrainedKernel(KernelMatrix(K_hat, KernelKind.LEARNED_INVERSE),
                         int(training_qf), int(acc.count), lam, digest)


def stationarity_residual(acc: TrainingAccumulator, K_hat: np.ndarray, lam: float) -> float:
    """Max-abs gradient of the ridge objective (up to a factor of 2) at ``K_hat``."""
    K_hat = np.asarray(K_hat)
    return float(np.abs(acc.cross - K_hat @ acc.auto - lam * K_hat).max())


def _rel_residual(acc, K_hat, lam):
    return stationarity_residual(acc, K_hat, lam) / (1.0 + np.abs(acc.cross).max())


def objective(P: np.ndarray, D: np.ndarray, K_hat: np.ndarray, lam: float = 0.0) -> float:
    """Sum of squared column errors of ``P - K_hat D`` plus the ridge penalty."""
    E = P - K_hat @ D
    return float(np.sum(E * E) + lam * np.sum(K_hat * K_hat))


def kernel_distance(a: TrainedKernel, b: TrainedKernel) -> float:
    return float(np.linalg.norm(a.entries - b.entries, "fro"))


def select_kernel(bank: Sequence[TrainedKernel], qf: int) -> TrainedKernel:
    """Pick the kernel whose training QF is closest to ``qf`` (ties go upward)."""
    if not bank:
        raise EmptyBankError("kernel bank is empty")
    return min(bank, key=lambda k: (abs(k.training_qf - qf), -k.training_qf))
