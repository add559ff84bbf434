import random

import pytest
from hypothesis import given, strategies as st

from ambiguity_lab.feature_space import Example
from ambiguity_lab.lin_sep import (
    LinearSeparator, ModelFormatError, Prediction, activation, perf, predict_binary,
)


def test_activation_examples():
    assert activation(LinearSeparator(), Example((1, 2, 3))) == 0
    h = LinearSeparator({1: 2.0, 2: -1.0}, 1.0, 0.5)
    assert activation(h, Example((1, 2))) == 1.5
    assert activation(LinearSeparator({1: 2.0}, 0.0, 0.25), Example((7,))) == 0.25


def test_predict_binary_strict_threshold():
    h = LinearSeparator({1: 1.5}, 1.0)
    assert predict_binary(h, Example((1,))) == 1
    assert predict_binary(LinearSeparator({1: 1.0}, 1.0), Example((1,))) == 0
    assert predict_binary(LinearSeparator({1: -3.0}, 0.0), Example((1,))) == 0


def test_zero_weights_dropped_and_finiteness():
    assert LinearSeparator({1: 0.0, 2: 1.0}).weights == {2: 1.0}
    with pytest.raises(ValueError):
        LinearSeparator({1: float("inf")})
    with pytest.raises(ValueError):
        LinearSeparator({}, float("nan"))


class Item:
    def __init__(self, label):
        self.label = label


def test_perf_ratios():
    test = [Example((), 1), Example((), 1), Example((), 1), Example((), 0)]
    assert perf(lambda e: 1, test) == 0.75
    assert perf(lambda e: e.label, test) == 1.0
    assert perf(lambda e: Prediction(1, 0.0), test) == 0.75
    with pytest.raises(ValueError):
        perf(lambda e: 1, [])
    with pytest.raises(ValueError):
        perf(lambda e: 1, [Example(())])


weights = st.dictionaries(st.integers(0, 20), st.floats(-10, 10, allow_nan=False), max_size=10)
examples = st.sets(st.integers(0, 25), max_size=12).map(lambda s: Example(tuple(s)))


@given(weights, examples, st.integers(0, 25), st.floats(0.001, 10))
def test_positive_weight_never_lowers_activation(w, e, fid, pos):
    base = LinearSeparator({k: v for k, v in w.items() if k != fid})
    more = LinearSeparator({**base.weights, fid: pos})
    grown = Example(e.active + (fid,))
    assert activation(more, grown) >= activation(base, e) - 1e-9


@given(weights, examples, st.floats(-5, 5), st.floats(-5, 5), st.sampled_from([0.5, 2.0, 4.0, 0.25]))
def test_prediction_scale_invariant(w, e, theta, bias, lam):
    # power-of-two factors scale exactly, so the comparison is unaffected by rounding
    h = LinearSeparator(w, theta, bias)
    assert predict_binary(h, e) == predict_binary(h.scaled(lam), e)


@given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=30), st.randoms())
def test_perf_permutation_invariant(pairs, rnd):
    items = [Example((g,), y) for g, y in pairs]
    pred = lambda e: e.active[0]
    shuffled = items[:]
    rnd.shuffle(shuffled)
    assert perf(pred, items) == perf(pred, shuffled)


def test_model_file_round_trip():
    rng = random.Random(3)
    h = LinearSeparator({rng.randrange(1000): rng.uniform(-1e3, 1e3) for _ in range(50)}, 0.1, 1 / 3)
    text = h.dumps()
    assert text.splitlines()[0] == "linsep 0.10000000000000001 0.33333333333333331"
    back = LinearSeparator.loads(text)
    assert back == h
    ids = [int(l.split("\t")[0]) for l in text.splitlines()[1:]]
    assert ids == sorted(ids)


def test_model_file_errors():
    with pytest.raises(ModelFormatError, match="unknown header"):
        LinearSeparator.loads("winnow 1 2 3\n")
    with pytest.raises(ModelFormatError, match="line 2"):
        LinearSeparator.loads("linsep 0 0\n3\tabc\n")
