"""Regenerate data/paper_dataset.csv, the vendored stand-in for the robot's recorded dataset."""
import argparse
import logging
from pathlib import Path

from navbot.corpus import surrogate_dataset
from navbot.dataset import write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--jitter", type=float, default=0.5)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "data" / "paper_dataset.csv"))
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING, format="%(message)s")
    ds = surrogate_dataset(args.seed, args.jitter)
    write_csv(args.out, ds)
    print(f"wrote {len(ds)} samples to {args.out}")


if __name__ == "__main__":
    main()
