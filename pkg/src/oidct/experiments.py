"""Training / evaluation drivers behind the CLI.

Everything here is deterministic: inputs are processed in the order given and
CSV rows are written in that order.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import codec, metrics
from .formats import load_kernel, read_image, save_kernel
from .learner import (InsufficientDataError, TrainedKernel, TrainingAccumulator,
                      kernel_distance, select_kernel, solve_kernel, stationarity_residual)
from .transform import KernelKind, KernelMatrix, standard_inverse_kernel

log = logging.getLogger(__name__)

KERNEL_SUFFIX = ".oidk"
EVAL_COLUMNS = ["image", "qf", "psnr_std", "psnr_learned", "ssim_std", "ssim_learned"]
SUMMARY_COLUMNS = ["qf", "kernel_qf", "n_images", "psnr_std", "psnr_learned", "psnr_gain",
                   "ssim_std", "ssim_learned", "ssim_gain"]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    train_paths: List[str] = field(default_factory=list)
    test_paths: List[str] = field(default_factory=list)
    qf_list: List[int] = field(default_factory=lambda: [50, 70, 90])
    ridge_lambda: Optional[float] = None
    output_dir: str = "out"

    def validate(self) -> "ExperimentConfig":
        if not self.qf_list:
            raise ConfigError("qf_list is empty")
        for qf in self.qf_list:
            if int(qf) != qf or not 1 <= qf <= 100:
                raise ConfigError(f"quality factor {qf!r} outside [1, 100]")
        if self.ridge_lambda is not None and self.ridge_lambda < 0:
            raise ConfigError("ridge_lambda must be nonnegative")
        check_disjoint(self.train_paths, self.test_paths)
        return self

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls(**json.load(fh))

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(asdict(self), fh, indent=2)


def _identity(path) -> Tuple[str, Optional[str]]:
    p = Path(path)
    try:
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
    except OSError:
        digest = None
    return os.path.realpath(p), digest


def check_disjoint(train_paths: Sequence, test_paths: Sequence) -> None:
    """Fail if any test image is also a training image (same file or same bytes)."""
    train = [_identity(p) for p in train_paths]
    paths = {t[0] for t in train}
    digests = {t[1] for t in train if t[1] is not None}
    for p in test_paths:
        real, digest = _identity(p)
        if real in paths or (digest is not None and digest in digests):
            raise ConfigError(f"test image {p} also appears in the training set")


def _load_images(paths: Iterable) -> List[Tuple[str, codec.ImagePlanes]]:
    out = []
    for p in paths:
        try:
            out.append((str(p), read_image(p)))
        except (OSError, ValueError) as exc:
            log.warning("skipping unreadable image %s: %s", p, exc)
    return out


def kernel_filename(qf: int) -> str:
    return f"kernel_qf{qf:03d}{KERNEL_SUFFIX}"


def train_kernel(images: Sequence[codec.ImagePlanes], qf: int,
                 ridge_lambda: Optional[float] = None) -> Tuple[TrainedKernel, TrainingAccumulator]:
    acc = TrainingAccumulator()
    for img in images:
        acc.accumulate_rows(*codec.training_rows(img, qf))
    if acc.count == 0:
        raise InsufficientDataError("no complete 8x8 blocks in the training images")
    return solve_kernel(acc, ridge_lambda, training_qf=qf), acc


def cmd_train(config: ExperimentConfig) -> List[Path]:
    """Train and save one kernel per quality factor; returns the written paths."""
    config.validate()
    if not config.train_paths:
        raise ConfigError("no training images given")
    images = [img for _, img in _load_images(config.train_paths)]
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for qf in config.qf_list:
        tk, acc = train_kernel(images, qf, config.ridge_lambda)
        res = stationarity_residual(acc, tk.entries, tk.ridge_lambda)
        log.info("qf=%d samples=%d lambda=%.4g stationarity=%.3g", qf, tk.sample_count,
                 tk.ridge_lambda, res)
        path = out_dir / kernel_filename(qf)
        save_kernel(tk, path)
        written.append(path)
    return written


def standard_as_trained(qf: int = 50) -> TrainedKernel:
    """Wrap the transpose IDCT as a bank entry, for baselines and sanity checks."""
    k = standard_inverse_kernel()
    return TrainedKernel(KernelMatrix(k.entries, KernelKind.LEARNED_INVERSE), qf, 0, 0.0,
                         "standard-idct")


def load_bank(bank_dir) -> List[TrainedKernel]:
    paths = sorted(Path(bank_dir).glob(f"*{KERNEL_SUFFIX}"))
    if not paths:
        raise ConfigError(f"no {KERNEL_SUFFIX} kernel files in {bank_dir}")
    return [load_kernel(p) for p in paths]


@dataclass
class EvalResult:
    rows: List[dict]
    summary: List[dict]

    def gains(self) -> Dict[int, Tuple[float, float]]:
        return {r["qf"]: (r["psnr_gain"], r["ssim_gain"]) for r in self.summary}


def evaluate_image(img: codec.ImagePlanes, qf: int, learned: KernelMatrix) -> dict:
    enc = codec.encode(img, qf)
    std = metrics.evaluate(img, codec.decode(enc, standard_inverse_kernel()))
    new = metrics.evaluate(img, codec.decode(enc, learned))
    return {"qf": qf, "psnr_std": std.psnr_rgb, "psnr_learned": new.psnr_rgb,
            "ssim_std": std.ssim, "ssim_learned": new.ssim}


def run_eval(images: Sequence[Tuple[str, codec.ImagePlanes]], qf_list: Sequence[int],
             bank: Sequence[TrainedKernel]) -> EvalResult:
    if not images:
        raise ConfigError("no test images")
    rows = []
    for name, img in images:
        for qf in qf_list:
            chosen = select_kernel(bank, qf)
            rows.append({"image": name, **evaluate_image(img, qf, chosen.kernel),
                         "kernel_qf": chosen.training_qf})
    summary = []
    for qf in qf_list:
        sel = [r for r in rows if r["qf"] == qf]
        mean = {k: float(np.mean([r[k] for r in sel]))
                for k in ("psnr_std", "psnr_learned", "ssim_std", "ssim_learned")}
        summary.append({"qf": qf, "kernel_qf": sel[0]["kernel_qf"], "n_images": len(sel), **mean,
                        "psnr_gain": float(np.mean([_gain(r["psnr_learned"], r["psnr_std"])
                                                    for r in sel])),
                        "ssim_gain": mean["ssim_learned"] - mean["ssim_std"]})
    return EvalResult(rows, summary)


def _gain(new: float, old: float) -> float:
    # both infinite means both lossless
    if math.isinf(new) and math.isinf(old):
        return 0.0
    return new - old


def cmd_eval(config: ExperimentConfig, bank: Sequence[TrainedKernel]) -> EvalResult:
    """Evaluate standard vs learned decoding on the test images and write CSVs.

    Writes ``eval.csv`` (one row per image and QF), ``summary.csv`` (per-QF
    means) and ``table.csv`` (PSNR/SSIM gain rows with one column per QF).
    """
    config.validate()
    result = run_eval(_load_images(config.test_paths), config.qf_list, bank)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(out_dir / "eval.csv", EVAL_COLUMNS, result.rows)
    write_csv(out_dir / "summary.csv", SUMMARY_COLUMNS, result.summary)
    table = [{"metric": "PSNR (dB)", **{str(s["qf"]): s["psnr_gain"] for s in result.summary}},
             {"metric": "SSIM", **{str(s["qf"]): s["ssim_gain"] for s in result.summary}}]
    write_csv(out_dir / "table.csv", ["metric"] + [str(q) for q in config.qf_list], table)
    return result


def distance_matrix(kernels: Sequence[TrainedKernel]) -> np.ndarray:
    n = len(kernels)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d[i, j] = d[j, i] = kernel_distance(kernels[i], kernels[j])
    return d


def cmd_kernel_dist(paths: Sequence, out_path) -> Tuple[List[int], np.ndarray]:
    """Pairwise Frobenius distances between kernel files, written as a labelled CSV."""
    if len(paths) < 2:
        raise ConfigError("need at least two kernel files")
    kernels = sorted((load_kernel(p) for p in paths), key=lambda k: k.training_qf)
    labels = [k.training_qf for k in kernels]
    d = distance_matrix(kernels)
    rows = [{"qf": q, **{str(c): d[i, j] for j, c in enumerate(labels)}}
            for i, q in enumerate(labels)]
    write_csv(out_path, ["qf"] + [str(q) for q in labels], rows)
    return labels, d


def write_csv(path, columns: Sequence[str], rows: Iterable[dict]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore",
                           lineterminator="\r\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: (repr(float(v)) if isinstance(v, (float, np.floating)) else v)
                        for k, v in r.items()})
