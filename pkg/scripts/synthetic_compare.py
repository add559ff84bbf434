"""All methods on a seeded synthetic disjunction task, averaged over seeds.

    python scripts/synthetic_compare.py --classes 2 --seeds 5
"""

import argparse

import numpy as np

from ambiguity_lab.harness import ExperimentConfig, run_experiment


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--classes", type=int, default=2)
    ap.add_argument("--n", type=int, default=300)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--n-train", type=int, default=2000)
    ap.add_argument("--epochs", type=int, default=2)
    args = ap.parse_args()
    methods = ["baseline", "nb", "snow"] + (["dl"] if args.classes == 2 else [])
    print(f"{'method':<10} {'mean':>7} {'min':>7}")
    for m in methods:
        accs = [run_experiment(ExperimentConfig(method=m, classes=args.classes, n=args.n, seed=s,
                                                n_train=args.n_train, epochs=args.epochs)).accuracy
                for s in range(args.seeds)]
        print(f"{m:<10} {100 * np.mean(accs):>7.2f} {100 * min(accs):>7.2f}")


if __name__ == "__main__":
    main()
