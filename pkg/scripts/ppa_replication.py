"""Attachment table on the RRR94 files: baseline, NB, BO, DL and SNOW.

    AMBIGUITY_LAB_DATA=/data python scripts/ppa_replication.py \
        --train ppa/training --test ppa/test --epochs 2

Reference accuracies: baseline 59.0, BO 83.7 (unsmoothed), SNOW 83.9.
"""

import argparse

from ambiguity_lab.harness import ExperimentConfig, compare


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--train", required=True)
    ap.add_argument("--test", required=True)
    ap.add_argument("--methods", default="baseline,nb,bo,dl,snow")
    ap.add_argument("--epochs", type=int, default=1)
    ap.add_argument("--alpha", type=float, default=1.5)
    ap.add_argument("--beta", type=float, default=0.8)
    ap.add_argument("--theta", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cfgs = [ExperimentConfig(task="ppa", method=m, train=args.train, test=args.test, epochs=args.epochs,
                             alpha=args.alpha, beta=args.beta, theta=args.theta, seed=args.seed,
                             shuffle=args.epochs > 1)
            for m in args.methods.split(",")]
    print(compare(cfgs), end="")


if __name__ == "__main__":
    main()
