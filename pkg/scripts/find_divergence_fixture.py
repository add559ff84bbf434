"""Search for a small attachment corpus on which the naive Bayes, back-off and
decision-list separators pairwise disagree, and write it as a 5-column file.

    python scripts/find_divergence_fixture.py tests/fixtures/divergence_ppa.txt
"""

import itertools
import sys

import numpy as np

from ambiguity_lab.baselines import as_binary, bo_fit, bo_to_linear, dl_fit, dl_to_linear, nb_fit, nb_to_linear
from ambiguity_lab.feature_space import FeatureSpace, encode
from ambiguity_lab.lin_sep import predict_binary
from ambiguity_lab.tasks import PpaRecord, dump_ppa, ppa_feature_set

VOCAB = [["buy", "eat"], ["car", "pizza"], ["with", "for"], ["money", "cheese"]]


def lattice(records):
    slots = [sorted({r.words[i] for r in records}) for i in range(4)]
    return list(itertools.product(*slots))


def exported(records):
    space = FeatureSpace()
    train = [encode(space, ppa_feature_set(r), r.class_id, True) for r in records]
    space.freeze()
    inst = [encode(space, ppa_feature_set(PpaRecord(*t, "v"))) for t in lattice(records)]
    seps = {
        "nb": nb_to_linear(nb_fit(train, space.n)),
        "bo": bo_to_linear(bo_fit(train, space.order, 4), inst),
        "dl": dl_to_linear(dl_fit(train)),
    }
    return seps, inst


def diverges(records):
    seps, inst = exported(records)
    for a, b in itertools.combinations(seps, 2):
        if all(predict_binary(seps[a], e) == predict_binary(seps[b], e) for e in inst):
            return False
    return True


def main(out):
    for seed in range(10000):
        rng = np.random.default_rng(seed)
        records = []
        for _ in range(int(rng.integers(4, 10))):
            words = [v[int(rng.integers(len(v)))] for v in VOCAB]
            records.append(PpaRecord(*words, "v" if rng.random() < 0.5 else "n"))
        if len({r.class_id for r in records}) == 2 and diverges(records):
            dump_ppa(records, out)
            print(f"seed {seed}: {len(records)} records written to {out}")
            return 0
    print("no divergent corpus found", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main(sys.argv[1] if len(sys.argv) > 1 else "divergence_ppa.txt"))
