"""Features, the feature lexicon and sparse binary examples.

A feature is a short sequence of (slot, token) pairs. Slots are integer
offsets from the classification target, or a named slot ("context" for
position-free context words, V/N1/P/N2 for attachment tuples).
"""

from __future__ import annotations

import io
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

WORD = "word"
POS_TAG = "pos_tag"
KINDS = (WORD, POS_TAG)

CONTEXT = "context"
NAMED_SLOTS = (CONTEXT, "V", "N1", "P", "N2")

Slot = Union[int, str]


class FeatureError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Token:
    text: str
    kind: str = WORD

    def __post_init__(self):
        if not self.text:
            raise FeatureError("token text must be non-empty")
        if any(ch.isspace() for ch in self.text):
            raise FeatureError(f"token text may not contain whitespace: {self.text!r}")
        if self.kind not in KINDS:
            raise FeatureError(f"unknown token kind {self.kind!r}")


def _slot_rank(slot: Slot) -> tuple:
    if isinstance(slot, bool):
        raise FeatureError("slot must be an int offset or a named slot")
    if isinstance(slot, int):
        return (0, slot)
    if slot in NAMED_SLOTS:
        return (1, NAMED_SLOTS.index(slot))
    raise FeatureError(f"unknown slot {slot!r}")


@dataclass(frozen=True)
class Feature:
    """An ordered, non-empty tuple of ``(slot, Token)`` pairs."""

    tokens: tuple

    def __post_init__(self):
        toks = tuple((s, t) for s, t in self.tokens)
        object.__setattr__(self, "tokens", toks)
        if not toks:
            raise FeatureError("a feature needs at least one token")
        ranks = [_slot_rank(s) for s, _ in toks]
        if len({r[0] for r in ranks}) > 1:
            raise FeatureError("cannot mix offset slots and named slots in one feature")
        for a, b in zip(ranks, ranks[1:]):
            if not a < b:
                raise FeatureError(f"slot positions must be strictly increasing: {self.tokens!r}")
        for _, t in toks:
            if not isinstance(t, Token):
                raise FeatureError(f"expected Token, got {t!r}")

    @classmethod
    def of(cls, *pairs) -> "Feature":
        """Shorthand: ``Feature.of((-1, "not"), (1, "late"))`` builds word tokens."""
        return cls(tuple((s, t if isinstance(t, Token) else Token(t)) for s, t in pairs))

    @property
    def order(self) -> int:
        return len(self.tokens)

    def token_set(self) -> frozenset:
        return frozenset(self.tokens)

    def render(self) -> str:
        return " ".join(f"{t.kind}:{s}:{t.text}" for s, t in self.tokens)

    @classmethod
    def parse(cls, text: str) -> "Feature":
        pairs = []
        for chunk in text.split(" "):
            kind, slot, word = chunk.split(":", 2)
            try:
                slot = int(slot)
            except ValueError:
                pass
            pairs.append((slot, Token(word, kind)))
        return cls(tuple(pairs))

    def __str__(self):
        return self.render()


def feature_order(f: Feature) -> int:
    return f.order


def precedes(f: Feature, g: Feature) -> bool:
    """Non-strict generality order: f's (slot, token) pairs are a subset of g's."""
    return f.token_set() <= g.token_set()


def extract_context_words(tokens: Sequence, target_index: int, k: int) -> set:
    """Order-1 features for each distinct word within distance 1..k of the target."""
    if not 0 <= target_index < len(tokens):
        raise FeatureError(f"target index {target_index} out of range for {len(tokens)} tokens")
    if k < 1:
        raise FeatureError("context window radius must be >= 1")
    feats = set()
    lo, hi = max(0, target_index - k), min(len(tokens), target_index + k + 1)
    for i in range(lo, hi):
        if i != target_index:
            tok = tokens[i] if isinstance(tokens[i], Token) else Token(tokens[i])
            feats.add(Feature(((CONTEXT, tok),)))
    return feats


def collocation_spans(l: int) -> list:
    """All contiguous offset spans of 1..l tokens inside [-l, l], stepping over 0."""
    offsets = [o for o in range(-l, l + 1) if o != 0]
    spans = []
    for length in range(1, l + 1):
        for start in range(len(offsets) - length + 1):
            spans.append(tuple(offsets[start:start + length]))
    return spans


def extract_collocations(tokens: Sequence, pos_tags: Optional[Sequence], target_index: int, l: int) -> set:
    """Position-anchored patterns of up to ``l`` tokens around the target.

    Spans that run off either end of the sentence are skipped. With tags,
    every span is emitted once with words and once with tags.
    """
    n = len(tokens)
    if not 0 <= target_index < n:
        raise FeatureError(f"target index {target_index} out of range for {n} tokens")
    if l < 1:
        raise FeatureError("collocation length must be >= 1")
    if pos_tags is not None and len(pos_tags) != n:
        raise FeatureError(f"got {len(pos_tags)} tags for {n} tokens")
    layers = [[t if isinstance(t, Token) else Token(t) for t in tokens]]
    if pos_tags is not None:
        layers.append([t if isinstance(t, Token) else Token(t, POS_TAG) for t in pos_tags])
    feats = set()
    for span in collocation_spans(l):
        idx = [target_index + o for o in span]
        if idx[0] < 0 or idx[-1] >= n:
            continue
        for layer in layers:
            feats.add(Feature(tuple((o, layer[i]) for o, i in zip(span, idx))))
    return feats


@dataclass(frozen=True)
class Example:
    """Sorted active feature ids, an optional class id and where it came from."""

    active: tuple
    label: Optional[int] = None
    source: Optional[str] = None

    def __post_init__(self):
        act = tuple(sorted(set(int(i) for i in self.active)))
        object.__setattr__(self, "active", act)

    def __contains__(self, fid):
        return fid in self.active_set

    @property
    def active_set(self) -> frozenset:
        # cached on first use; frozen dataclass so go through object.__setattr__
        try:
            return self.__dict__["_active_set"]
        except KeyError:
            s = frozenset(self.active)
            object.__setattr__(self, "_active_set", s)
            return s

    def with_label(self, label) -> "Example":
        return Example(self.active, label, self.source)


@dataclass
class TaskDef:
    classes: list
    predicate_name: str = "label"

    def __post_init__(self):
        self.classes = list(self.classes)
        if len(self.classes) < 2:
            raise FeatureError("a task needs at least two classes")
        if len(set(self.classes)) != len(self.classes):
            raise FeatureError(f"duplicate class names in {self.classes}")

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def index(self, name) -> int:
        return self.classes.index(name)


class FrozenSpaceError(RuntimeError):
    pass


@dataclass
class FeatureSpace:
    """Bijective lexicon Feature <-> dense id, first come first served."""

    _ids: dict = field(default_factory=dict)
    _features: list = field(default_factory=list)
    frozen: bool = False
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @property
    def n(self) -> int:
        return len(self._features)

    def __len__(self):
        return len(self._features)

    def __contains__(self, f: Feature):
        return f in self._ids

    def freeze(self) -> None:
        self.frozen = True

    def lookup(self, f: Feature) -> Optional[int]:
        return self._ids.get(f)

    def register(self, f: Feature) -> int:
        fid = self._ids.get(f)
        if fid is not None:
            return fid
        with self._lock:
            if self.frozen:
                raise FrozenSpaceError(f"feature space is frozen; cannot register {f}")
            fid = self._ids.get(f)
            if fid is None:
                fid = len(self._features)
                self._ids[f] = fid
                self._features.append(f)
        return fid

    def feature(self, fid: int) -> Feature:
        return self._features[fid]

    def order(self, fid: int) -> int:
        return self._features[fid].order

    def decode(self, e: Example) -> list:
        return [self._features[i] for i in e.active]

    def features(self) -> list:
        return list(self._features)

    def dumps(self) -> str:
        return "".join(f"{i}\t{f.render()}\n" for i, f in enumerate(self._features))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.dumps())

    @classmethod
    def loads(cls, text: str) -> "FeatureSpace":
        space = cls()
        for lineno, line in enumerate(io.StringIO(text), 1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                fid, rendered = line.split("\t", 1)
                f = Feature.parse(rendered)
                fid = int(fid)
            except (ValueError, FeatureError) as err:
                raise FeatureError(f"lexicon line {lineno}: {err}") from None
            if fid != space.n:
                raise FeatureError(f"lexicon line {lineno}: expected id {space.n}, got {fid}")
            if f in space:
                raise FeatureError(f"lexicon line {lineno}: duplicate feature {rendered!r}")
            space.register(f)
        return space

    @classmethod
    def load(cls, path) -> "FeatureSpace":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())


def encode(space: FeatureSpace, feats: Iterable[Feature], label=None, register_new: bool = False,
           source: Optional[str] = None) -> Example:
    """Map features to ids. Unknown features are registered in training mode
    and silently dropped otherwise."""
    ids = []
    for f in sorted(feats, key=Feature.render):
        fid = space.register(f) if register_new else space.lookup(f)
        if fid is not None:
            ids.append(fid)
    return Example(tuple(ids), label, source)
