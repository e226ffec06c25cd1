"""Export the bundled sample photos as PPM files: train/, test/ and textures/."""
import argparse

from oidct import corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    for split, names, offsets in [("train", corpus.TRAIN, corpus.GRID_OFFSETS),
                                  ("test", corpus.TEST, [(0, 0)]),
                                  ("textures", corpus.TEXTURES, [(0, 0)])]:
        paths = corpus.export(names, f"{args.out}/{split}", offsets)
        print(f"{split}: {len(paths)} images -> {args.out}/{split}")


if __name__ == "__main__":
    main()
