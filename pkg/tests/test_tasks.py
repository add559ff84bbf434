from collections import Counter

import pytest
from hypothesis import given, strategies as st

from ambiguity_lab.feature_space import CONTEXT, POS_TAG, Example, Feature, FeatureSpace, Token
from ambiguity_lab.tasks import (
    ConfusionSet, DataError, MajorityClass, MostCommonTag, PosCorpus, baseline_most_common,
    dump_ppa, load_confusion_sets, load_ppa, load_spelling, parse_pos, parse_ppa,
    ppa_feature_set, ppa_features, pos_instances, spelling_instances, split,
)

# -- PP attachment -----------------------------------------------------------


def test_parse_ppa_line():
    [r] = parse_ppa(["buy car with money v"])
    assert r.words == ("buy", "car", "with", "money") and r.class_id == 1
    [r6] = parse_ppa(["0 join board as director V"])
    assert r6.words[0] == "join" and r6.label == "v"


def test_parse_ppa_errors_name_the_line():
    with pytest.raises(DataError, match=":2:"):
        parse_ppa(["a b c d n", "buy car with money"], "x")
    with pytest.raises(DataError):
        parse_ppa(["a b c d x"])


def test_empty_ppa_file(tmp_path):
    p = tmp_path / "empty.txt"
    p.write_text("")
    assert load_ppa(p) == []
    with pytest.raises(DataError):
        load_ppa(tmp_path / "missing.txt")


def test_ppa_has_fifteen_features():
    [r] = parse_ppa(["buy car with money v"])
    feats = ppa_feature_set(r)
    assert len(feats) == 15
    assert Feature.of(("V", "buy"), ("N1", "car"), ("P", "with"), ("N2", "money")) in feats
    assert Counter(f.order for f in feats) == {1: 4, 2: 6, 3: 4, 4: 1}


def test_shared_preposition_only():
    a, b = parse_ppa(["buy car with money v", "eat pizza with fork n"])
    shared = ppa_feature_set(a) & ppa_feature_set(b)
    assert shared == {Feature.of(("P", "with"))}


def test_same_word_in_different_slots_is_different():
    a, b = parse_ppa(["see saw on saw v", "saw man on hill n"])
    assert not ppa_feature_set(a) & ppa_feature_set(b) - {Feature.of(("P", "on"))}


def test_ppa_round_trip_bytes(tmp_path):
    src = tmp_path / "in.txt"
    src.write_bytes(b"buy car with money v\neat pizza with fork n\n")
    out = tmp_path / "out.txt"
    dump_ppa(load_ppa(src), out)
    assert out.read_bytes() == src.read_bytes()


def test_ppa_features_encode():
    space = FeatureSpace()
    [r] = parse_ppa(["buy car with money v"])
    e = ppa_features(r, space, True)
    assert len(e.active) == 15 and e.label == 1


# -- spelling ----------------------------------------------------------------

TTT = ConfusionSet(("to", "too", "two"))


def test_spelling_single_occurrence():
    out = spelling_instances(["It's not too late"], [TTT], k=10, l=2)
    [inst] = out["to,too,two"]
    assert inst.label == 1
    assert Feature.of((CONTEXT, "it's")) in inst.features
    assert Feature.of((-1, "not"), (1, "late")) in inst.features


def test_spelling_one_instance_per_occurrence():
    out = spelling_instances(["two to too", "nothing here", "to"], [TTT])
    assert [i.label for i in out["to,too,two"]] == [2, 0, 1, 0]


def test_spelling_multiple_sets():
    sets = [TTT, ConfusionSet(("then", "than"))]
    out = spelling_instances(["more than two"], sets)
    assert len(out["to,too,two"]) == 1 and out["then,than"][0].label == 1


def test_confusion_set_file(tmp_path):
    p = tmp_path / "sets.txt"
    p.write_text("# comment\nto,too,two\nthen, than\n")
    assert [s.name for s in load_confusion_sets(p)] == ["to,too,two", "then,than"]
    p.write_text("lonely\n")
    with pytest.raises(DataError, match=":1:"):
        load_confusion_sets(p)
    corpus = tmp_path / "c.txt"
    corpus.write_text("I want to go\n")
    with pytest.raises(DataError):
        load_spelling(corpus, [])


# -- tagging -----------------------------------------------------------------


def test_parse_pos():
    c = parse_pos(["the_DT dog_NN", "a_b_c_NN"])
    assert c.sentences[0] == [("the", "DT"), ("dog", "NN")]
    assert c.sentences[1] == [("a_b_c", "NN")]
    assert c.tagset == ["DT", "NN"]
    with pytest.raises(DataError, match=":1:"):
        parse_pos(["thedog"])
    with pytest.raises(DataError):
        parse_pos(["dog_"])


def test_most_common_tag():
    c = parse_pos(["the_DT dog_NN", "dog_VB dog_NN the_DT"])
    tagger = MostCommonTag.fit(c)
    assert tagger.tag("dog") == "NN" and tagger.tag("the") == "DT"
    assert tagger.tag("zebra") == "DT"  # DT and NN tie at 2; alphabetically first wins
    assert baseline_most_common(c).by_word == tagger.by_word


def test_pos_instances_ignore_gold_tags():
    a = parse_pos(["the_DT dog_NN runs_VB"])
    b = PosCorpus([[("the", "VB"), ("dog", "DT"), ("runs", "NN")]], a.tagset)
    tagger = MostCommonTag({"the": "DT"}, "NN")
    fa = [i.features for i in pos_instances(a, tagger, a.tagset)]
    fb = [i.features for i in pos_instances(b, tagger, a.tagset)]
    assert fa == fb
    assert [i.label for i in pos_instances(a, tagger, a.tagset)] == [0, 1, 2]


def test_pos_features_use_initial_tags():
    c = parse_pos(["the_DT dog_NN"])
    tagger = MostCommonTag({"the": "DT"}, "NN")
    [_, dog] = pos_instances(c, tagger, c.tagset)
    assert Feature(((-1, Token("DT", POS_TAG)),)) in dog.features
    assert Feature(((0, Token("NN", POS_TAG)),)) in dog.features
    assert Feature.of((0, "dog")) in dog.features


# -- baselines and splits ----------------------------------------------------


def test_majority_ties_to_lower_id():
    assert baseline_most_common([Example((), 1), Example((), 0)]) == MajorityClass(0)
    assert baseline_most_common([Example((), 2), Example((), 2), Example((), 0)])(Example(())) == 2


@given(st.integers(0, 50), st.floats(0.05, 0.95), st.integers(0, 5))
def test_split_partitions(n, ratio, seed):
    items = list(range(n))
    a, b = split(items, ratio, seed)
    assert sorted(a + b) == items
    assert split(items, ratio, seed) == (a, b)
