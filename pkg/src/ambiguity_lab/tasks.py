"""Corpus readers and feature encodings for spelling, PP attachment and tagging."""

from __future__ import annotations

import itertools
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .feature_space import (
    POS_TAG, WORD, Example, Feature, FeatureSpace, TaskDef, Token, encode,
    extract_collocations, extract_context_words,
)


class DataError(ValueError):
    """Malformed or unreadable input data."""


@dataclass(frozen=True)
class Instance:
    """Raw feature set of one classification case, before id assignment."""

    features: frozenset
    label: Optional[int] = None
    source: Optional[str] = None


def encode_instances(space: FeatureSpace, instances: Iterable[Instance], register: bool) -> list:
    return [encode(space, inst.features, inst.label, register, inst.source) for inst in instances]


def split(items: list, ratio: float, seed: int):
    """Seeded shuffle, then the first ``ratio`` share is training data."""
    if not 0 < ratio < 1:
        raise ValueError(f"split ratio must be in (0, 1), got {ratio}")
    idx = list(range(len(items)))
    random.Random(seed).shuffle(idx)
    cut = int(round(ratio * len(items)))
    return [items[i] for i in idx[:cut]], [items[i] for i in idx[cut:]]


def _read_lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read().splitlines()
    except OSError as err:
        raise DataError(f"cannot read {path}: {err.strerror}") from None


# ---------------------------------------------------------------------------
# PP attachment

PPA_SLOTS = ("V", "N1", "P", "N2")
PPA_TASK = TaskDef(["n", "v"], "pp_attachment")  # class 1 = verb attachment


@dataclass(frozen=True)
class PpaRecord:
    verb: str
    noun1: str
    preposition: str
    noun2: str
    label: str

    def __post_init__(self):
        for w in self.words:
            if not w or any(ch.isspace() for ch in w):
                raise DataError(f"bad head word {w!r}")
        if self.label not in ("v", "n"):
            raise DataError(f"attachment label must be v or n, got {self.label!r}")

    @property
    def words(self) -> tuple:
        return (self.verb, self.noun1, self.preposition, self.noun2)

    @property
    def class_id(self) -> int:
        return 1 if self.label == "v" else 0

    def line(self) -> str:
        return " ".join((*self.words, self.label))


def parse_ppa(lines, name="<ppa>") -> list:
    """Parse ``verb noun1 prep noun2 label`` lines.

    Six-column lines (a leading sentence id, as in the distributed RRR94
    files) are accepted and the id is dropped. Labels V/N are lower-cased.
    """
    records = []
    for lineno, line in enumerate(lines, 1):
        cols = line.split()
        if not cols:
            continue
        if len(cols) == 6:
            cols = cols[1:]
        if len(cols) != 5:
            raise DataError(f"{name}:{lineno}: expected 5 columns, got {len(cols)}")
        label = cols[4].lower()
        if label not in ("v", "n"):
            raise DataError(f"{name}:{lineno}: attachment label must be v or n, got {cols[4]!r}")
        records.append(PpaRecord(*cols[:4], label))
    return records


def load_ppa(path) -> list:
    return parse_ppa(_read_lines(path), str(path))


def dump_ppa(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(r.line() + "\n")


def ppa_feature_set(r: PpaRecord) -> frozenset:
    """All 15 non-empty slot-labeled sub-sequences of the head-word 4-tuple."""
    pairs = list(zip(PPA_SLOTS, (Token(w) for w in r.words)))
    feats = set()
    for size in range(1, 5):
        for combo in itertools.combinations(pairs, size):
            feats.add(Feature(combo))
    return frozenset(feats)


def ppa_instance(r: PpaRecord, source=None) -> Instance:
    return Instance(ppa_feature_set(r), r.class_id, source)


def ppa_features(r: PpaRecord, space: FeatureSpace, register: bool) -> Example:
    return encode(space, ppa_feature_set(r), r.class_id, register)


# ---------------------------------------------------------------------------
# context-sensitive spelling


@dataclass(frozen=True)
class ConfusionSet:
    words: tuple

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))
        if len(self.words) < 2:
            raise DataError(f"a confusion set needs at least two words: {self.words}")
        if len(set(self.words)) != len(self.words):
            raise DataError(f"duplicate words in confusion set {self.words}")

    @property
    def name(self) -> str:
        return ",".join(self.words)

    @property
    def task(self) -> TaskDef:
        return TaskDef(list(self.words), "spelling")


def load_confusion_sets(path) -> list:
    sets = []
    for lineno, line in enumerate(_read_lines(path), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words = [w.strip() for w in line.split(",") if w.strip()]
        try:
            sets.append(ConfusionSet(tuple(words)))
        except DataError as err:
            raise DataError(f"{path}:{lineno}: {err}") from None
    return sets


def spelling_instances(sentences, sets, k: int = 10, l: int = 2, lowercase: bool = True,
                       name: str = "<text>") -> dict:
    """One instance per occurrence of a confusion-set member, keyed by set name.

    Targets match case-sensitively; context words and collocations are
    lower-cased when ``lowercase`` is set. The label is the index of the word
    actually present in the text.
    """
    for cs in sets:
        if not isinstance(cs, ConfusionSet):
            raise DataError(f"expected ConfusionSet, got {cs!r}")
    out = {cs.name: [] for cs in sets}
    members = defaultdict(list)
    for cs in sets:
        for idx, w in enumerate(cs.words):
            members[w].append((cs.name, idx))
    for lineno, sent in enumerate(sentences, 1):
        words = sent.split()
        if not words:
            continue
        norm = [w.lower() for w in words] if lowercase else words
        for i, w in enumerate(words):
            if w not in members:
                continue
            feats = extract_context_words(norm, i, k) | extract_collocations(norm, None, i, l)
            for set_name, idx in members[w]:
                out[set_name].append(Instance(frozenset(feats), idx, f"{name}:{lineno}"))
    return out


def load_spelling(corpus_path, sets, k: int = 10, l: int = 2, lowercase: bool = True) -> dict:
    if not sets:
        raise DataError("no confusion sets given")
    return spelling_instances(_read_lines(corpus_path), sets, k, l, lowercase, str(corpus_path))


# ---------------------------------------------------------------------------
# part-of-speech tagging


@dataclass
class PosCorpus:
    sentences: list
    tagset: list = field(default_factory=list)

    def __post_init__(self):
        if not self.tagset:
            self.tagset = sorted({t for s in self.sentences for _, t in s})
        tags = set(self.tagset)
        for s in self.sentences:
            for w, t in s:
                if t not in tags:
                    raise DataError(f"tag {t!r} not in tagset")

    @property
    def num_words(self) -> int:
        return sum(len(s) for s in self.sentences)

    @property
    def task(self) -> TaskDef:
        return TaskDef(list(self.tagset), "pos")


def parse_pos(lines, name="<pos>") -> PosCorpus:
    sentences = []
    for lineno, line in enumerate(lines, 1):
        sent = []
        for pos, tok in enumerate(line.split()):
            word, sep, tag = tok.rpartition("_")
            if not sep or not word or not tag:
                raise DataError(f"{name}:{lineno}: token {pos} {tok!r} lacks a word_TAG separator")
            sent.append((word, tag))
        if sent:
            sentences.append(sent)
    return PosCorpus(sentences)


def load_pos(path) -> PosCorpus:
    return parse_pos(_read_lines(path), str(path))


def _majority(counter: Counter):
    # highest count, then smallest key
    return min(counter.items(), key=lambda kv: (-kv[1], kv[0]))[0]


@dataclass
class MostCommonTag:
    """Per-word majority tag from training counts, global majority for unknown words."""

    by_word: dict
    fallback: str

    @classmethod
    def fit(cls, corpus: PosCorpus) -> "MostCommonTag":
        if not corpus.sentences:
            raise DataError("cannot fit a tagger on an empty corpus")
        per_word = defaultdict(Counter)
        overall = Counter()
        for sent in corpus.sentences:
            for w, t in sent:
                per_word[w][t] += 1
                overall[t] += 1
        return cls({w: _majority(c) for w, c in per_word.items()}, _majority(overall))

    def tag(self, word: str) -> str:
        return self.by_word.get(word, self.fallback)

    def tag_sentence(self, words) -> list:
        return [self.tag(w) for w in words]


def pos_instances(corpus: PosCorpus, initial: MostCommonTag, tagset, k: int = 2, l: int = 2,
                  name: str = "<pos>") -> list:
    """One instance per word, labeled with the index of its gold tag in ``tagset``.

    Features: the word itself and its initial tag, context words within
    ``k``, and word/tag collocations up to ``l`` where the neighbors' tags
    come from the initial tagger, never from gold.
    """
    index = {t: i for i, t in enumerate(tagset)}
    out = []
    for si, sent in enumerate(corpus.sentences):
        words = [w for w, _ in sent]
        lower = [w.lower() for w in words]
        tags = initial.tag_sentence(words)
        for i, (w, gold) in enumerate(sent):
            feats = {Feature(((0, Token(w)),)), Feature(((0, Token(tags[i], POS_TAG)),))}
            if k:
                feats |= extract_context_words(lower, i, k)
            if l:
                feats |= extract_collocations(lower, tags, i, l)
            out.append(Instance(frozenset(feats), index.get(gold), f"{name}:{si + 1}:{i}"))
    return out


def pos_features(corpus: PosCorpus, sentence: int, position: int, initial: MostCommonTag,
                 space: FeatureSpace, k: int = 2, l: int = 2, register: bool = False) -> Example:
    sub = PosCorpus([corpus.sentences[sentence]], corpus.tagset)
    inst = pos_instances(sub, initial, corpus.tagset, k, l)[position]
    return encode(space, inst.features, inst.label, register, inst.source)


# ---------------------------------------------------------------------------
# most-common baselines


@dataclass(frozen=True)
class MajorityClass:
    label: int

    def __call__(self, e) -> int:
        return self.label


def baseline_most_common(train):
    """Constant majority-class predictor, or a per-word tagger for a PosCorpus.

    Ties between classes go to the lower class id.
    """
    if isinstance(train, PosCorpus):
        return MostCommonTag.fit(train)
    counts = Counter()
    for i, e in enumerate(train):
        if e.label is None:
            raise DataError(f"training example {i} is unlabeled")
        counts[e.label] += 1
    if not counts:
        raise DataError("baseline needs non-empty training data")
    return MajorityClass(_majority(counts))
