"""Positive Winnow: mistake-driven multiplicative updates on a sparse weight map."""

from __future__ import annotations

from dataclasses import dataclass, field

from .lin_sep import LinearSeparator, ModelFormatError, fmt_float, parse_linsep_block

W_MIN, W_MAX = 1e-300, 1e300


@dataclass(frozen=True)
class WinnowConfig:
    alpha: float = 1.5
    beta: float = 0.8
    theta: float = 1.0
    initial_weight: float = 0.5

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValueError(f"promotion alpha must be > 1, got {self.alpha}")
        if not 0 < self.beta < 1:
            raise ValueError(f"demotion beta must be in (0, 1), got {self.beta}")
        if not self.theta > 0:
            raise ValueError(f"threshold theta must be > 0, got {self.theta}")
        if not self.initial_weight > 0:
            raise ValueError(f"initial weight must be > 0, got {self.initial_weight}")


class FrozenLearnerError(RuntimeError):
    pass


@dataclass
class WinnowLearner:
    """One linear threshold unit trained by positive Winnow.

    With ``allocate_on_sight`` an unseen active feature behaves as if it
    already carried ``initial_weight`` (and gets a stored weight on its first
    update); otherwise unseen features contribute nothing and are never
    touched. The first mode matches textbook Winnow over a dense feature set.
    """

    config: WinnowConfig = field(default_factory=WinnowConfig)
    allocate_on_sight: bool = False
    weights: dict = field(default_factory=dict)
    mistakes: int = 0
    examples_seen: int = 0
    clamp_events: int = 0
    frozen: bool = False

    def allocate(self, ids) -> int:
        """Link any of ``ids`` not yet linked, at the initial weight."""
        added = 0
        w0 = self.config.initial_weight
        for i in ids:
            if i not in self.weights:
                self.weights[i] = w0
                added += 1
        return added

    def activation(self, e) -> float:
        w = self.weights
        if self.allocate_on_sight:
            w0 = self.config.initial_weight
            return sum(w.get(i, w0) for i in e.active)
        return sum(w.get(i, 0.0) for i in e.active)

    def predict(self, e):
        a = self.activation(e)
        return (1 if a > self.config.theta else 0), a

    def update(self, e, gold: int) -> bool:
        if self.frozen:
            raise FrozenLearnerError("learner is frozen")
        self.examples_seen += 1
        pred, _ = self.predict(e)
        if pred == gold:
            return False
        factor = self.config.alpha if gold == 1 else self.config.beta
        w = self.weights
        w0 = self.config.initial_weight
        for i in e.active:
            if i in w:
                v = w[i] * factor
            elif self.allocate_on_sight:
                v = w0 * factor
            else:
                continue
            if v < W_MIN:
                v = W_MIN
                self.clamp_events += 1
            elif v > W_MAX:
                v = W_MAX
                self.clamp_events += 1
            w[i] = v
        self.mistakes += 1
        return True

    def freeze(self) -> None:
        self.frozen = True

    def to_linear(self) -> LinearSeparator:
        return LinearSeparator(dict(self.weights), self.config.theta, 0.0)

    def dumps(self) -> str:
        c = self.config
        head = (f"winnow {fmt_float(c.alpha)} {fmt_float(c.beta)} {fmt_float(c.theta)} "
                f"{fmt_float(c.initial_weight)}\n")
        return head + self.to_linear().dumps()

    @classmethod
    def loads(cls, text: str) -> "WinnowLearner":
        lines = text.splitlines()
        learner, end = parse_winnow_block(lines, 0)
        if any(l.strip() for l in lines[end:]):
            raise ModelFormatError(f"line {end + 1}: trailing content after winnow block")
        return learner


def parse_winnow_block(lines: list, start: int):
    head = lines[start].split() if start < len(lines) else []
    if not head or head[0] != "winnow":
        raise ModelFormatError(f"line {start + 1}: unknown header {head[:1]}")
    if len(head) not in (4, 5):
        raise ModelFormatError(f"line {start + 1}: malformed winnow header")
    try:
        vals = [float(v) for v in head[1:]]
    except ValueError:
        raise ModelFormatError(f"line {start + 1}: malformed winnow header") from None
    cfg = WinnowConfig(*vals)
    sep, end = parse_linsep_block(lines, start + 1)
    if sep.threshold != cfg.theta:
        raise ModelFormatError(f"line {start + 2}: linsep threshold disagrees with winnow theta")
    return WinnowLearner(cfg, weights=dict(sep.weights)), end


def winnow_predict(learner: WinnowLearner, e):
    return learner.predict(e)


def winnow_update(learner: WinnowLearner, e, gold: int) -> bool:
    return learner.update(e, gold)


def train_stream(learner: WinnowLearner, stream, epochs: int = 1) -> int:
    """Run ``epochs`` sequential passes of mistake-driven updates."""
    if epochs < 0:
        raise ValueError("epochs must be non-negative")
    stream = list(stream)
    for i, e in enumerate(stream):
        if e.label is None:
            raise ValueError(f"example {i} in stream is unlabeled")
    before = learner.mistakes
    for _ in range(epochs):
        for e in stream:
            learner.update(e, e.label)
    return learner.mistakes - before
