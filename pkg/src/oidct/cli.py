"""Command line interface: ``oidct {train,eval,encode,decode,kernel-dist}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import codec
from .experiments import (ExperimentConfig, cmd_eval, cmd_kernel_dist, cmd_train, load_bank)
from .formats import load_encoded, load_kernel, read_image, save_encoded, write_image
from .learner import select_kernel
from .transform import standard_inverse_kernel

log = logging.getLogger("oidct")


def _lambda(text: str):
    if text.lower() in ("auto", "default"):
        return None
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("lambda must be nonnegative")
    return value


def _config(args, train=(), test=()) -> ExperimentConfig:
    if args.config:
        cfg = ExperimentConfig.from_json(args.config)
    else:
        cfg = ExperimentConfig()
    if train:
        cfg.train_paths = [str(p) for p in train]
    if test:
        cfg.test_paths = [str(p) for p in test]
    if args.qf:
        cfg.qf_list = args.qf
    if getattr(args, "ridge_lambda", None) is not None:
        cfg.ridge_lambda = args.ridge_lambda
    if args.out:
        cfg.output_dir = args.out
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oidct", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="learn one inverse kernel per quality factor")
    t.add_argument("images", nargs="*", help="training images (PPM or PNG)")
    t.add_argument("--qf", type=int, nargs="+")
    t.add_argument("--lambda", dest="ridge_lambda", type=_lambda, default=None,
                   help="ridge weight; 'auto' (default) is 1e-6*trace(DD^T)/64")
    t.add_argument("--out", help="directory for kernel files")
    t.add_argument("--config", help="ExperimentConfig as JSON")

    e = sub.add_parser("eval", help="compare standard and learned decoding")
    e.add_argument("images", nargs="*", help="test images")
    e.add_argument("--train", nargs="+", default=[],
                   help="training images, checked to be disjoint from the test images")
    e.add_argument("--kernel-bank", required=True, help="directory of .oidk kernel files")
    e.add_argument("--qf", type=int, nargs="+")
    e.add_argument("--out", help="directory for eval.csv, summary.csv, table.csv")
    e.add_argument("--format", choices=["csv"], default="csv")
    e.add_argument("--config", help="ExperimentConfig as JSON")

    en = sub.add_parser("encode", help="encode an image to a coefficient container")
    en.add_argument("image")
    en.add_argument("--qf", type=int, required=True)
    en.add_argument("--out", required=True, help="output .oide file")

    de = sub.add_parser("decode", help="decode a coefficient container to PPM/PNG")
    de.add_argument("encoded")
    de.add_argument("--out", required=True, help="output image path")
    grp = de.add_mutually_exclusive_group()
    grp.add_argument("--kernel", help="a single .oidk kernel file")
    grp.add_argument("--kernel-bank", help="directory of kernels; nearest QF is used")

    kd = sub.add_parser("kernel-dist", help="pairwise Frobenius distances between kernels")
    kd.add_argument("kernels", nargs="*", help=".oidk kernel files")
    kd.add_argument("--kernel-bank", help="use every kernel file in this directory")
    kd.add_argument("--out", required=True, help="output directory")
    kd.add_argument("--format", choices=["csv"], default="csv")
    return p


def run(args) -> None:
    if args.command == "train":
        for path in cmd_train(_config(args, train=args.images)):
            print(path)
    elif args.command == "eval":
        cfg = _config(args, train=args.train, test=args.images)
        result = cmd_eval(cfg, load_bank(args.kernel_bank))
        for s in result.summary:
            print(f"qf={s['qf']} kernel_qf={s['kernel_qf']} psnr_gain={s['psnr_gain']:+.4f} dB "
                  f"ssim_gain={s['ssim_gain']:+.5f}")
    elif args.command == "encode":
        save_encoded(codec.encode(read_image(args.image), args.qf), args.out)
    elif args.command == "decode":
        enc = load_encoded(args.encoded)
        if args.kernel:
            kernel = load_kernel(args.kernel).kernel
        elif args.kernel_bank:
            kernel = select_kernel(load_bank(args.kernel_bank), enc.qf).kernel
        else:
            kernel = standard_inverse_kernel()
        write_image(codec.decode(enc, kernel), args.out)
    elif args.command == "kernel-dist":
        paths = list(args.kernels)
        if args.kernel_bank:
            paths += sorted(Path(args.kernel_bank).glob("*.oidk"))
        cmd_kernel_dist(paths, Path(args.out) / "kernel_dist.csv")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        run(args)
    except (OSError, ValueError) as exc:
        print(f"oidct: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
