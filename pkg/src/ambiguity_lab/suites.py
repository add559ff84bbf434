"""Random model and lattice generators shared by the oracle command, tests and scripts."""

from __future__ import annotations

import itertools

import numpy as np

from .baselines import DecisionList, NbParams, bo_fit
from .feature_space import Feature, FeatureSpace, Token, encode
from .tasks import PpaRecord, ppa_feature_set


def random_nb(rng, n: int) -> NbParams:
    return NbParams.binary(rng.uniform(0.05, 0.95), rng.uniform(0.02, 0.98, n), rng.uniform(0.02, 0.98, n))


def random_decision_list(rng, n: int, k: int) -> DecisionList:
    """Random rules over features 0..n-1, canonicalized (so at most n rules survive)."""
    feats = rng.integers(0, n, size=k).tolist() if n else []
    cons = rng.choice([-1, 1], size=len(feats)).tolist()
    return DecisionList(tuple(zip(feats, cons)), int(rng.choice([-1, 1]))).canonical()


def tuple_feature_set(words) -> frozenset:
    """All non-empty slot-labeled sub-tuples; the attachment encoding for 4-tuples."""
    if len(words) == 4:
        return ppa_feature_set(PpaRecord(*words, "v"))
    pairs = [(i, Token(w)) for i, w in enumerate(words)]
    return frozenset(Feature(c) for r in range(1, len(pairs) + 1) for c in itertools.combinations(pairs, r))


def bo_lattice_case(seed: int, slots: int = None):
    """A fitted back-off model plus its full instance lattice.

    Slot count is 2..4 (4 is the attachment shape: 15 features per
    instance). Each slot draws from a 1..3 word vocabulary; instances are
    every tuple in the product. Training tuples are sampled with repetition
    and labeled by a per-tuple coin whose bias is random, so count ties and
    unseen tuples both occur.
    """
    rng = np.random.default_rng(seed)
    b = int(slots or rng.integers(2, 5))
    vocab = [[f"s{s}w{j}" for j in range(int(rng.integers(1, 4)))] for s in range(b)]
    tuples = list(itertools.product(*vocab))
    space = FeatureSpace()
    bias = {t: rng.random() for t in tuples}
    train = []
    for _ in range(int(rng.integers(1, 40))):
        t = tuples[int(rng.integers(len(tuples)))]
        label = int(rng.random() < bias[t])
        train.append(encode(space, tuple_feature_set(t), label, register_new=True))
    space.freeze()
    model = bo_fit(train, space.order, b)
    instances = [encode(space, tuple_feature_set(t)) for t in tuples]
    return model, instances
