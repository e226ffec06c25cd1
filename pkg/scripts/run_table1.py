"""Train kernels at QF 50/70/90 and tabulate mean PSNR/SSIM gains on the test split.

Also evaluates the QF-70 kernel on the texture images (cross-content check).
Run scripts/make_corpus.py first.
"""
import argparse
import glob
import logging

from oidct.experiments import ExperimentConfig, cmd_eval, cmd_train, load_bank


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default="data")
    ap.add_argument("--out", default="results/table1")
    ap.add_argument("--lambda", dest="lam", type=float, default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    train = sorted(glob.glob(f"{args.data}/train/*.ppm"))
    test = sorted(glob.glob(f"{args.data}/test/*.ppm"))
    textures = sorted(glob.glob(f"{args.data}/textures/*.ppm"))
    bank_dir = f"{args.out}/kernels"
    cmd_train(ExperimentConfig(train, test, [50, 70, 90], args.lam, bank_dir))
    bank = load_bank(bank_dir)

    res = cmd_eval(ExperimentConfig(train, test, [50, 70, 90], args.lam, f"{args.out}/matched"), bank)
    print("matched content (test split):")
    for s in res.summary:
        print(f"  QF {s['qf']}: PSNR {s['psnr_gain']:+.4f} dB  SSIM {s['ssim_gain']:+.5f}")

    res = cmd_eval(ExperimentConfig(train, textures, [70], args.lam, f"{args.out}/cross"), bank)
    s = res.summary[0]
    print(f"cross content (textures), QF 70: PSNR {s['psnr_gain']:+.4f} dB  SSIM {s['ssim_gain']:+.5f}")


if __name__ == "__main__":
    main()
