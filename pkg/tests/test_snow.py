import pytest
from hypothesis import given, strategies as st

from ambiguity_lab.feature_space import Example, TaskDef
from ambiguity_lab.lin_sep import perf
from ambiguity_lab.snow import ON_ANY, FrozenNetworkError, SnowNetwork, TargetNode
from ambiguity_lab.synthetic import DisjunctionTask
from ambiguity_lab.winnow import WinnowConfig, WinnowLearner

AB = TaskDef(["A", "B"])


def test_gold_node_allocates_links():
    net = SnowNetwork(AB)
    net.train_example(Example((1, 2), 0))
    assert net.nodes[0].links == {1, 2}
    assert net.nodes[1].links == set()


@pytest.mark.parametrize("theta, demoted", [(1.0, False), (0.4, True)])
def test_second_example_one_vs_all(theta, demoted):
    cfg = WinnowConfig(1.5, 0.8, theta, 0.5)
    net = SnowNetwork(AB, cfg)
    net.train_example(Example((1, 2), 0))
    w_before = net.nodes[0].learner.weights[1]
    a_fires = net.nodes[0].learner.predict(Example((1,)))[0] == 1
    net.train_example(Example((1,), 1))
    assert net.nodes[1].links == {1}
    assert a_fires == demoted
    expect = w_before * 0.8 if demoted else w_before
    assert net.nodes[0].learner.weights[1] == expect


def test_unknown_label_and_frozen():
    net = SnowNetwork(AB)
    with pytest.raises(ValueError):
        net.train_example(Example((1,), 2))
    net.freeze()
    with pytest.raises(FrozenNetworkError):
        net.train_example(Example((1,), 0))


def _net_with(weights_a, weights_b, theta=1.0):
    cfg = WinnowConfig(1.5, 0.8, theta, 0.5)
    return SnowNetwork(AB, cfg, nodes=[TargetNode(0, WinnowLearner(cfg, weights=weights_a)),
                                      TargetNode(1, WinnowLearner(cfg, weights=weights_b))])


def test_winner_take_all_and_ties():
    net = _net_with({1: 3.2}, {1: 1.1})
    assert net.predict(Example((1,))).label == 0
    assert net.predict(Example((1,))).score == 3.2
    assert _net_with({1: 2.0}, {1: 2.0}).predict(Example((1,))).label == 0
    assert _net_with({1: 1.0}, {1: 2.0}).predict(Example((9,))).label == 0


def test_wta_differs_from_node_threshold():
    net = _net_with({1: 0.5}, {1: 0.2})
    e = Example((1,))
    assert net.nodes[0].learner.predict(e)[0] == 0
    assert net.predict(e).label == 0  # node A wins anyway


def test_theta_normalized_comparison():
    net = _net_with({1: 0.5}, {1: 0.2})
    net.nodes[1].learner.config = WinnowConfig(1.5, 0.8, 0.1, 0.5)
    net.normalize_by_theta = True
    assert net.predict(Example((1,))).label == 1


corpora = st.lists(st.tuples(st.sets(st.integers(0, 12), max_size=6), st.integers(0, 2)),
                   min_size=1, max_size=30).map(lambda xs: [Example(tuple(a), y) for a, y in xs])


@given(corpora, st.sampled_from([0.5, 2.0, 8.0]))
def test_argmax_invariant_under_rescaling(corpus, lam):
    net = SnowNetwork(TaskDef("ABC"))
    net.train_corpus(corpus, 1)
    preds = [net.predict(e).label for e in corpus]
    for n in net.nodes:
        n.learner.weights = {i: w * lam for i, w in n.learner.weights.items()}
    assert [net.predict(e).label for e in corpus] == preds


@given(corpora)
def test_links_only_from_positive_examples(corpus):
    net = SnowNetwork(TaskDef("ABC"))
    net.train_corpus(corpus, 2)
    for node in net.nodes:
        seen = set().union(*[e.active for e in corpus if e.label == node.class_id])
        assert node.links <= seen


@given(corpora)
def test_any_cooccurrence_policy_is_looser(corpus):
    strict, loose = SnowNetwork(TaskDef("ABC")), SnowNetwork(TaskDef("ABC"), allocation_policy=ON_ANY)
    strict.train_corpus(corpus, 1)
    loose.train_corpus(corpus, 1)
    everything = set().union(*[e.active for e in corpus])
    for s, l in zip(strict.nodes, loose.nodes):
        assert l.links == everything
        assert s.links <= l.links


def test_training_is_deterministic_per_seed():
    task = DisjunctionTask()
    data = task.sample(500, 1)
    a, b = SnowNetwork(TaskDef("ABC")), SnowNetwork(TaskDef("ABC"))
    a.train_corpus(data, 2, shuffle_seed=7)
    b.train_corpus(data, 2, shuffle_seed=7)
    assert a.dumps() == b.dumps()


def test_zero_epochs_is_a_no_op():
    net = SnowNetwork(TaskDef("ABC"))
    assert net.train_corpus(DisjunctionTask().sample(50, 1), 0) == [0, 0, 0]
    assert all(not n.links for n in net.nodes)


def test_three_disjunctions_learned():
    task = DisjunctionTask(n=300, num_classes=3, seed=5)
    net = SnowNetwork(TaskDef("ABC"))
    net.train_corpus(task.sample(2000, 1), 2, shuffle_seed=0, freeze=True)
    test = task.sample(500, 2)
    assert perf(net, test) >= 0.95
    assert [net.predict(e) for e in test] == [net.predict(e) for e in test]


def test_network_file_round_trip():
    task = DisjunctionTask(seed=2)
    net = SnowNetwork(TaskDef("ABC"))
    net.train_corpus(task.sample(300, 1), 1)
    text = net.dumps()
    assert text.startswith("snow 3\nnode 0\nwinnow ")
    back = SnowNetwork.loads(text, TaskDef("ABC"))
    probe = task.sample(200, 9)
    assert [back.predict(e) for e in probe] == [net.predict(e) for e in probe]
