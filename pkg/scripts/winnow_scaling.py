"""Mistake counts of textbook Winnow on k-literal disjunctions as n grows.

    python scripts/winnow_scaling.py --seeds 20 --k 5 --n 64 256 1024 4096
"""

import argparse
import math

import numpy as np

from ambiguity_lab.synthetic import balanced_activation, disjunction_stream
from ambiguity_lab.winnow import WinnowConfig, WinnowLearner, train_stream


def mistakes(n, k, seed, length):
    rng = np.random.default_rng(seed)
    relevant = sorted(rng.choice(n, size=k, replace=False).tolist())
    stream = disjunction_stream(n, relevant, length, balanced_activation(k), seed=seed)
    learner = WinnowLearner(WinnowConfig(2.0, 0.5, float(n), 1.0), allocate_on_sight=True)
    return train_stream(learner, stream, 1)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[64, 256, 1024])
    ap.add_argument("--k", type=int, default=5)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--length", type=int, default=3000)
    args = ap.parse_args()
    print(f"{'n':>6} {'bound':>7} {'mean':>8} {'max':>5}")
    for n in args.n:
        ms = [mistakes(n, args.k, s, args.length) for s in range(args.seeds)]
        bound = 2 + 3 * args.k * (1 + math.log2(n))
        print(f"{n:>6} {bound:>7.1f} {np.mean(ms):>8.2f} {max(ms):>5}")


if __name__ == "__main__":
    main()
