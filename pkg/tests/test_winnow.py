import math

import pytest
from hypothesis import given, settings, strategies as st

from ambiguity_lab.feature_space import Example
from ambiguity_lab.synthetic import balanced_activation, disjunction_stream
from ambiguity_lab.winnow import (
    W_MIN, WinnowConfig, WinnowLearner, train_stream, winnow_predict, winnow_update,
)


def learner(weights, theta=2.0, alpha=2.0, beta=0.5):
    return WinnowLearner(WinnowConfig(alpha, beta, theta, 1.0), weights=dict(weights))


def test_predict_traces():
    assert winnow_predict(learner({1: 1, 2: 1}), Example((1, 2))) == (0, 2)
    assert winnow_predict(learner({1: 1, 2: 1, 3: 1}), Example((1, 2, 3))) == (1, 3)
    assert winnow_predict(learner({1: 1}), Example(())) == (0, 0)


def test_promotion_trace():
    L = learner({1: 1, 2: 1, 3: 1})
    assert winnow_update(L, Example((1,)), 1) is True
    assert L.weights == {1: 2, 2: 1, 3: 1}
    assert L.mistakes == 1


def test_demotion_trace():
    L = learner({1: 1, 2: 1, 3: 1})
    assert winnow_update(L, Example((1, 2, 3)), 0) is True
    assert L.weights == {1: 0.5, 2: 0.5, 3: 0.5}


def test_correct_prediction_changes_nothing():
    L = learner({1: 1, 2: 1, 3: 1})
    before = dict(L.weights)
    assert winnow_update(L, Example((1, 2, 3)), 1) is False
    assert L.weights == before and L.mistakes == 0 and L.examples_seen == 1


def test_allocate_on_sight_counts_unseen_features():
    L = WinnowLearner(WinnowConfig(2, 0.5, 2.5, 1.0), allocate_on_sight=True)
    assert L.predict(Example((4, 5, 6))) == (1, 3.0)
    L.update(Example((4, 5)), 1)
    assert L.weights == {4: 2.0, 5: 2.0}


def test_train_stream_basics():
    assert train_stream(WinnowLearner(), [], 3) == 0
    with pytest.raises(ValueError):
        train_stream(WinnowLearner(), [Example((1,))])


def test_config_validation():
    for bad in [dict(alpha=1.0), dict(beta=1.0), dict(beta=0), dict(theta=0), dict(initial_weight=0)]:
        with pytest.raises(ValueError):
            WinnowConfig(**bad)


def test_single_literal_learned_exactly():
    n = 1024
    stream = disjunction_stream(n, [17], 600, 0.05, seed=4)
    L = WinnowLearner(WinnowConfig(2.0, 0.5, n, 1.0), allocate_on_sight=True)
    for _ in range(20):
        if train_stream(L, stream, 1) == 0:
            break
    correct = sum(L.predict(e)[0] == e.label for e in stream)
    assert correct == len(stream)


def test_mistake_bound_k5_n1024():
    n, k = 1024, 5
    bound = 2 + 3 * k * (1 + math.log2(n))
    assert bound == 167
    stream = disjunction_stream(n, [3, 200, 411, 777, 1000], 3000, balanced_activation(k), seed=11)
    L = WinnowLearner(WinnowConfig(2.0, 0.5, n, 1.0), allocate_on_sight=True)
    assert train_stream(L, stream, 1) <= bound


streams = st.lists(
    st.tuples(st.sets(st.integers(0, 15), max_size=8), st.integers(0, 1)), max_size=40,
).map(lambda xs: [Example(tuple(a), y) for a, y in xs])


@given(streams)
def test_weights_stay_positive(stream):
    L = WinnowLearner(WinnowConfig(1.5, 0.8, 1.0, 0.5), allocate_on_sight=True)
    train_stream(L, stream, 2)
    assert all(w >= W_MIN for w in L.weights.values())
    assert L.mistakes <= L.examples_seen


@given(streams)
def test_state_depends_only_on_mistakes(stream):
    L = WinnowLearner(WinnowConfig(1.5, 0.8, 1.0, 0.5), allocate_on_sight=True)
    mistakes = [e for e in stream if L.update(e, e.label)]
    replay = WinnowLearner(WinnowConfig(1.5, 0.8, 1.0, 0.5), allocate_on_sight=True)
    for e in mistakes:
        assert replay.update(e, e.label)
    assert replay.weights == L.weights


@settings(max_examples=50)
@given(st.sets(st.integers(0, 30), min_size=1, max_size=10), st.integers(1, 4),
       st.dictionaries(st.integers(0, 30), st.sampled_from([0.25, 0.5, 1.0, 3.0]), max_size=30))
def test_promote_then_demote_restores(active, a, start):
    alpha = 2.0 ** a
    cfg = WinnowConfig(alpha, 1 / alpha, 1e9, 1.0)
    e = Example(tuple(active))
    L = WinnowLearner(cfg, weights={**{i: 1.0 for i in active}, **start})
    before = dict(L.weights)
    assert L.update(e, 1)  # far below threshold: promotion
    L.config = WinnowConfig(alpha, 1 / alpha, 1e-9, 1.0)
    assert L.update(e, 0)  # now far above: demotion
    assert L.weights == before


def test_clamping_is_counted():
    L = WinnowLearner(WinnowConfig(2.0, 1e-200, 1e-300, 1.0), weights={1: 1.0})
    L.update(Example((1,)), 0)
    L.update(Example((1,)), 0)
    assert L.weights[1] == W_MIN and L.clamp_events == 1


def test_serialization_round_trip():
    L = WinnowLearner(WinnowConfig(1.5, 0.8, 1.0, 0.5), weights={3: 0.1, 9: 2.25})
    text = L.dumps()
    assert text.startswith("winnow 1.5 0.80000000000000004 1 0.5\nlinsep 1 0\n")
    back = WinnowLearner.loads(text)
    assert back.weights == L.weights and back.config == L.config
