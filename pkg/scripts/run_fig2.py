"""Quality vs QF for the standard IDCT and a small kernel bank (nearest-QF selection)."""
import argparse
import glob
import logging

from oidct.experiments import ExperimentConfig, cmd_eval, cmd_train, load_bank


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--data", default="data")
    ap.add_argument("--out", default="results/fig2")
    ap.add_argument("--bank-qf", type=int, nargs="+", default=[30, 50, 70, 90])
    ap.add_argument("--qf", type=int, nargs="+", default=list(range(10, 101, 10)))
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    train = sorted(glob.glob(f"{args.data}/train/*.ppm"))
    test = sorted(glob.glob(f"{args.data}/test/*.ppm"))
    cmd_train(ExperimentConfig(train, test, args.bank_qf, None, f"{args.out}/kernels"))
    res = cmd_eval(ExperimentConfig(train, test, args.qf, None, args.out),
                   load_bank(f"{args.out}/kernels"))
    print(" QF  K_QF  PSNR std  PSNR new   gain    SSIM std  SSIM new")
    for s in res.summary:
        print(f"{s['qf']:>3}  {s['kernel_qf']:>4}  {s['psnr_std']:8.3f}  {s['psnr_learned']:8.3f}  "
              f"{s['psnr_gain']:+.3f}  {s['ssim_std']:.5f}  {s['ssim_learned']:.5f}")


if __name__ == "__main__":
    main()
