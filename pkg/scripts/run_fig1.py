"""Pairwise distances between kernels trained over a grid of quality factors."""
import argparse
import glob
import logging
from pathlib import Path

import numpy as np

from oidct.experiments import ExperimentConfig, cmd_kernel_dist, cmd_train


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default="data")
    ap.add_argument("--out", default="results/fig1")
    ap.add_argument("--qf", type=int, nargs="+", default=list(range(10, 101, 5)))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    train = sorted(glob.glob(f"{args.data}/train/*.ppm"))
    paths = cmd_train(ExperimentConfig(train_paths=train, qf_list=args.qf,
                                       output_dir=f"{args.out}/kernels"))
    labels, d = cmd_kernel_dist(paths, Path(args.out) / "kernel_dist.csv")
    np.set_printoptions(precision=2, suppress=True, linewidth=200)
    print("QF  ", labels)
    for q, row in zip(labels, d):
        print(f"{q:>3} ", row)


if __name__ == "__main__":
    main()
