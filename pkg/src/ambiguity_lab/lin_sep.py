"""Sparse linear threshold functions, the shared hypothesis form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional


class ModelFormatError(ValueError):
    pass


def fmt_float(x: float) -> str:
    return "%.17g" % x


@dataclass(frozen=True)
class LinearSeparator:
    """Predicts 1 iff ``bias + sum(weights[i] for active i) > threshold``."""

    weights: dict = field(default_factory=dict)
    threshold: float = 0.0
    bias: float = 0.0

    def __post_init__(self):
        clean = {}
        for fid, w in self.weights.items():
            w = float(w)
            if not math.isfinite(w):
                raise ValueError(f"non-finite weight for feature {fid}: {w}")
            if w != 0.0:
                clean[int(fid)] = w
        object.__setattr__(self, "weights", clean)
        if not (math.isfinite(self.threshold) and math.isfinite(self.bias)):
            raise ValueError("threshold and bias must be finite")

    def scaled(self, lam: float) -> "LinearSeparator":
        return LinearSeparator({i: w * lam for i, w in self.weights.items()},
                               self.threshold * lam, self.bias * lam)

    def __call__(self, e) -> int:
        return predict_binary(self, e)

    def dumps(self) -> str:
        lines = [f"linsep {fmt_float(self.threshold)} {fmt_float(self.bias)}"]
        lines += [f"{i}\t{fmt_float(self.weights[i])}" for i in sorted(self.weights)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "LinearSeparator":
        lines = text.splitlines()
        sep, end = parse_linsep_block(lines, 0)
        if any(l.strip() for l in lines[end:]):
            raise ModelFormatError(f"line {end + 1}: trailing content after linsep block")
        return sep


def parse_linsep_block(lines: list, start: int):
    """Parse a ``linsep`` block beginning at ``lines[start]``.

    Stops at the first line that is not ``<id>\\t<weight>``; returns the
    separator and the index of that line.
    """
    if start >= len(lines):
        raise ModelFormatError(f"line {start + 1}: expected linsep header, got end of file")
    head = lines[start].split()
    if not head or head[0] != "linsep":
        raise ModelFormatError(f"line {start + 1}: unknown header {lines[start].split()[:1]}")
    if len(head) != 3:
        raise ModelFormatError(f"line {start + 1}: malformed linsep header")
    try:
        theta, bias = float(head[1]), float(head[2])
    except ValueError:
        raise ModelFormatError(f"line {start + 1}: malformed linsep header") from None
    weights = {}
    i = start + 1
    while i < len(lines):
        line = lines[i]
        if "\t" not in line:
            break
        fid, w = line.split("\t", 1)
        try:
            weights[int(fid)] = float(w)
        except ValueError:
            raise ModelFormatError(f"line {i + 1}: malformed weight line {line!r}") from None
        i += 1
    return LinearSeparator(weights, theta, bias), i


def activation(h: LinearSeparator, e) -> float:
    w = h.weights
    return h.bias + sum(w.get(i, 0.0) for i in e.active)


def predict_binary(h: LinearSeparator, e) -> int:
    # strict ">" : a tie at the threshold is class 0
    return 1 if activation(h, e) > h.threshold else 0


@dataclass(frozen=True)
class Prediction:
    label: int
    score: float

    def __post_init__(self):
        if not math.isfinite(self.score):
            raise ValueError("prediction score must be finite")


def perf(predictor: Callable, test: Iterable) -> float:
    """Fraction of test items whose ``.label`` the predictor reproduces."""
    test = list(test)
    if not test:
        raise ValueError("perf needs a non-empty test set")
    correct = 0
    for i, e in enumerate(test):
        if e.label is None:
            raise ValueError(f"test item {i} is unlabeled")
        guess = predictor(e)
        if isinstance(guess, Prediction):
            guess = guess.label
        correct += guess == e.label
    return correct / len(test)
