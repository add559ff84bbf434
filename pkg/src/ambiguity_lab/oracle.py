"""Exhaustive checks: predictor agreement on the Boolean cube, and shattering.

Inputs over ``n`` features are enumerated as a binary counter: input number
``m`` activates feature ``i`` iff bit ``i`` of ``m`` is set. That order also
defines which disagreement counts as the first one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Optional

from .baselines import DecisionList, NbParams, as_binary
from .feature_space import Example
from .lin_sep import LinearSeparator

MAX_ENUM_FEATURES = 24
MAX_SHATTER_POINTS = 20


class OracleError(ValueError):
    pass


def cube(n: int) -> Iterator[Example]:
    for m in range(1 << n):
        yield Example(tuple(i for i in range(n) if m >> i & 1))


@dataclass(frozen=True)
class AgreementReport:
    total_inputs: int
    disagreements: int
    first_counterexample: Optional[Example] = None

    def __post_init__(self):
        if self.disagreements > self.total_inputs:
            raise ValueError("more disagreements than inputs")
        if (self.disagreements > 0) != (self.first_counterexample is not None):
            raise ValueError("counterexample must be present iff there are disagreements")

    @property
    def agree(self) -> bool:
        return self.disagreements == 0

    def render(self) -> str:
        out = f"agreement {self.total_inputs} {self.disagreements}"
        if self.first_counterexample is not None:
            out += "\ncounterexample " + " ".join(map(str, self.first_counterexample.active))
        return out

    def merge(self, other: "AgreementReport") -> "AgreementReport":
        first = self.first_counterexample or other.first_counterexample
        return AgreementReport(self.total_inputs + other.total_inputs,
                               self.disagreements + other.disagreements, first)


def agreement_over(pred_a: Callable, pred_b: Callable, inputs: Iterable) -> AgreementReport:
    """Agreement of two predictors over an explicit input collection."""
    total = bad = 0
    first = None
    for e in inputs:
        total += 1
        if pred_a(e) != pred_b(e):
            bad += 1
            if first is None:
                first = e
    return AgreementReport(total, bad, first)


def enumerate_agreement(pred_a: Callable, pred_b: Callable, n: int) -> AgreementReport:
    if n > MAX_ENUM_FEATURES:
        raise OracleError(f"refusing to enumerate 2^{n} inputs (limit n <= {MAX_ENUM_FEATURES})")
    if n < 0:
        raise OracleError("n must be non-negative")
    return agreement_over(pred_a, pred_b, cube(n))


# ---------------------------------------------------------------------------
# shattering


@dataclass(frozen=True)
class ShatterReport:
    point_set: tuple
    achieved_labelings: int
    shattered: bool
    inconclusive: bool = False

    def __post_init__(self):
        if self.shattered != (self.achieved_labelings == 2 ** len(self.point_set)):
            raise ValueError("shattered must mean every labeling was achieved")


def shatter_check(hypotheses: Iterable[Callable], points, cap: Optional[int] = None) -> ShatterReport:
    """Collect the labelings the hypotheses induce on ``points``.

    Stops as soon as all labelings are seen. If ``cap`` hypotheses are
    tried first, the result is flagged inconclusive.
    """
    points = tuple(points)
    if len(points) > MAX_SHATTER_POINTS:
        raise OracleError(f"at most {MAX_SHATTER_POINTS} points")
    want = 2 ** len(points)
    seen = set()
    tried = 0
    inconclusive = False
    for h in hypotheses:
        if cap is not None and tried >= cap:
            inconclusive = True
            break
        tried += 1
        seen.add(tuple(int(h(p)) for p in points))
        if len(seen) == want:
            break
    shattered = len(seen) == want
    return ShatterReport(points, len(seen), shattered, inconclusive and not shattered)


def point(*bits) -> Example:
    """Example from a 0/1 vector: ``point(1, 0, 1)`` activates ids 0 and 2."""
    return Example(tuple(i for i, b in enumerate(bits) if b))


def grid_separators(n: int, values=(-2, -1, 0, 1, 2), thresholds=None) -> Iterator[LinearSeparator]:
    """Linear separators with weights from a small rational grid."""
    values = [Fraction(v) for v in values]
    thresholds = [Fraction(v, 2) for v in range(-5, 6)] if thresholds is None else thresholds
    for ws in itertools.product(values, repeat=n):
        for t in thresholds:
            yield LinearSeparator({i: float(w) for i, w in enumerate(ws)}, float(t), 0.0)


def all_p1_decision_lists(n: int) -> Iterator[Callable]:
    """Every canonical positive 1-decision list over features 0..n-1, as 0/1 predictors."""
    for size in range(n + 1):
        for feats in itertools.permutations(range(n), size):
            for cons in itertools.product((-1, 1), repeat=size):
                for default in (-1, 1):
                    yield as_binary(DecisionList(tuple(zip(feats, cons)), default))


def constants() -> list:
    return [lambda e: 0, lambda e: 1]


def grid_naive_bayes(n: int, probs=(0.1, 0.5, 0.9), priors=(0.25, 0.5, 0.75)) -> Iterator[NbParams]:
    """Naive Bayes models with every p_i, q_i drawn from a coarse grid."""
    for prior in priors:
        for ps in itertools.product(probs, repeat=n):
            for qs in itertools.product(probs, repeat=n):
                yield NbParams.binary(prior, list(ps), list(qs))
