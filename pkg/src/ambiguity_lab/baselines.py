"""Naive Bayes, back-off estimation and positive 1-decision lists.

Each method has a native predictor and an export to an explicit
:class:`LinearSeparator` that makes the same binary decisions.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .lin_sep import LinearSeparator, ModelFormatError, fmt_float


class BaselineError(ValueError):
    pass


def _labels(corpus):
    labels = []
    for i, e in enumerate(corpus):
        if e.label is None:
            raise BaselineError(f"training example {i} is unlabeled")
        labels.append(e.label)
    return labels


# ---------------------------------------------------------------------------
# naive Bayes


@dataclass
class NbParams:
    """Class priors and per-class Bernoulli feature probabilities.

    ``cond[c, i]`` is P(x_i = 1 | c). Binary models expose the usual
    ``prior_1``, ``prior_0``, ``p`` and ``q`` views.
    """

    priors: np.ndarray
    cond: np.ndarray
    smoothing: float = 1.0

    def __post_init__(self):
        self.priors = np.asarray(self.priors, dtype=float)
        self.cond = np.atleast_2d(np.asarray(self.cond, dtype=float))
        if self.cond.shape[0] != len(self.priors):
            raise BaselineError("one row of conditionals per class is required")
        if abs(self.priors.sum() - 1.0) > 1e-12:
            raise BaselineError(f"priors sum to {self.priors.sum()}, not 1")

    @classmethod
    def binary(cls, prior_1, p, q, smoothing=1.0) -> "NbParams":
        return cls(np.array([1.0 - prior_1, prior_1]), np.vstack([q, p]), smoothing)

    @property
    def num_classes(self) -> int:
        return len(self.priors)

    @property
    def n(self) -> int:
        return self.cond.shape[1]

    @property
    def prior_1(self) -> float:
        return float(self.priors[1])

    @property
    def prior_0(self) -> float:
        return float(self.priors[0])

    @property
    def p(self) -> np.ndarray:
        return self.cond[1]

    @property
    def q(self) -> np.ndarray:
        return self.cond[0]

    def __call__(self, e) -> int:
        return nb_predict(self, e)

    def dumps(self) -> str:
        if self.num_classes == 2:
            lines = [f"nb {fmt_float(self.prior_1)} {fmt_float(self.smoothing)}"]
            lines += [f"{i}\t{fmt_float(self.p[i])}\t{fmt_float(self.q[i])}" for i in range(self.n)]
        else:
            priors = " ".join(fmt_float(v) for v in self.priors)
            lines = [f"nbm {self.num_classes} {fmt_float(self.smoothing)} {priors}"]
            lines += [f"{i}\t" + "\t".join(fmt_float(v) for v in self.cond[:, i]) for i in range(self.n)]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "NbParams":
        lines = text.splitlines()
        head = lines[0].split() if lines else []
        try:
            if head[:1] == ["nb"] and len(head) == 3:
                prior_1, smoothing = float(head[1]), float(head[2])
                priors, m = [1.0 - prior_1, prior_1], 2
                cols = [1, 0]  # file columns hold p (class 1) then q (class 0)
            elif head[:1] == ["nbm"] and len(head) >= 3:
                m, smoothing = int(head[1]), float(head[2])
                priors = [float(v) for v in head[3:]]
                if len(priors) != m:
                    raise ValueError
                cols = list(range(m))
            else:
                raise ModelFormatError(f"line 1: unknown header {head[:1]}")
        except (ValueError, IndexError):
            raise ModelFormatError("line 1: malformed naive Bayes header") from None
        rows = []
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            parts = line.split("\t")
            try:
                fid, vals = int(parts[0]), [float(v) for v in parts[1:]]
            except ValueError:
                raise ModelFormatError(f"line {lineno}: malformed feature line {line!r}") from None
            if fid != len(rows) or len(vals) != m:
                raise ModelFormatError(f"line {lineno}: malformed feature line {line!r}")
            row = [0.0] * m
            for col, v in zip(cols, vals):
                row[col] = v
            rows.append(row)
        cond = np.array(rows, dtype=float).T if rows else np.zeros((m, 0))
        return cls(np.array(priors), cond, smoothing)


def nb_fit(corpus, n_features: int, smoothing: float = 1.0, num_classes: int = 2) -> NbParams:
    """Add-``smoothing`` estimates of P(x_i = 1 | c) over ``n_features`` ids.

    Priors are the raw class frequencies. Every class must occur.
    """
    corpus = list(corpus)
    if not corpus:
        raise BaselineError("naive Bayes needs a non-empty corpus")
    labels = _labels(corpus)
    counts = np.zeros((num_classes, n_features))
    class_n = np.zeros(num_classes)
    for e, y in zip(corpus, labels):
        class_n[y] += 1
        if e.active:
            counts[y, list(e.active)] += 1
    missing = [c for c in range(num_classes) if class_n[c] == 0]
    if missing:
        raise BaselineError(f"classes {missing} never occur in the training corpus")
    cond = (counts + smoothing) / (class_n[:, None] + 2 * smoothing)
    return NbParams(class_n / class_n.sum(), cond, smoothing)


def nb_scores(params: NbParams, e) -> np.ndarray:
    """log P(c) + sum_i log P(x_i | c), with every feature contributing."""
    x = np.zeros(params.n, dtype=bool)
    if e.active:
        x[list(e.active)] = True
    with np.errstate(divide="ignore"):
        terms = np.where(x, np.log(params.cond), np.log1p(-params.cond))
        return np.log(params.priors) + terms.sum(axis=1)


def nb_predict(params: NbParams, e) -> int:
    s = nb_scores(params, e)
    return int(np.argmax(s))  # first maximum: ties go to the lower class id


def nb_to_linear(params: NbParams) -> LinearSeparator:
    if params.num_classes != 2:
        raise BaselineError("linear export is defined for two classes only")
    p, q = params.p, params.q
    if np.any((p <= 0) | (p >= 1) | (q <= 0) | (q >= 1)):
        raise BaselineError("naive Bayes export needs probabilities strictly inside (0, 1)")
    if not 0 < params.prior_1 < 1:
        raise BaselineError("naive Bayes export needs both priors strictly inside (0, 1)")
    weights = {}
    bias = math.log(params.prior_1 / params.prior_0)
    for i in range(params.n):
        pi, qi = float(p[i]), float(q[i])
        weights[i] = math.log((pi * (1 - qi)) / ((1 - pi) * qi))
        bias += math.log((1 - pi) / (1 - qi))
    return LinearSeparator(weights, 0.0, bias)


# ---------------------------------------------------------------------------
# back-off estimation

EMPTY = -1  # the order-0 feature: present in every example, its counts give the prior


@dataclass
class BackoffModel:
    """Count tables N(f) and N(c, f) for features up to order ``k``.

    ``orders`` maps feature id to order. The empty feature (id -1, order 0)
    counts every training example.
    """

    k: int
    num_classes: int = 2
    orders: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        self.counts.setdefault(EMPTY, [0] * self.num_classes)
        self.orders.setdefault(EMPTY, 0)

    def N(self, fid) -> int:
        return sum(self.counts.get(fid, ()))

    def Nc(self, c, fid) -> int:
        row = self.counts.get(fid)
        return row[c] if row else 0

    def cond(self, fid) -> list:
        """Exact empirical P(c | f) for every class, as fractions."""
        row = self.counts[fid]
        n = sum(row)
        return [Fraction(v, n) for v in row]

    def __call__(self, e) -> int:
        return bo_predict(self, e)[0]

    def dumps(self) -> str:
        lines = [f"bo {self.k}"]
        for fid in sorted(self.counts, key=lambda f: (self.orders[f], f)):
            row = self.counts[fid]
            lines.append("\t".join(str(v) for v in (self.orders[fid], fid, sum(row), *row[1:])))
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "BackoffModel":
        lines = text.splitlines()
        head = lines[0].split() if lines else []
        if len(head) != 2 or head[0] != "bo":
            raise ModelFormatError(f"line 1: unknown header {head[:1]}")
        try:
            k = int(head[1])
        except ValueError:
            raise ModelFormatError("line 1: malformed bo header") from None
        rows, m = [], None
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            try:
                vals = [int(v) for v in line.split("\t")]
            except ValueError:
                raise ModelFormatError(f"line {lineno}: malformed count line {line!r}") from None
            width = len(vals) - 2
            if width < 2 or (m is not None and width != m):
                raise ModelFormatError(f"line {lineno}: malformed count line {line!r}")
            m = width
            order, fid, total, rest = vals[0], vals[1], vals[2], vals[3:]
            if total < sum(rest) or min(rest, default=0) < 0:
                raise ModelFormatError(f"line {lineno}: class counts exceed N(f)")
            rows.append((order, fid, [total - sum(rest), *rest]))
        model = cls(k, m or 2)
        for order, fid, row in rows:
            model.orders[fid] = order
            model.counts[fid] = row
        return model


def bo_fit(corpus, orders, k: int, num_classes: int = 2) -> BackoffModel:
    """Count every active feature of order <= k.

    ``orders`` is a mapping or callable giving each feature id's order. Each
    example must contain at least one feature of order ``k`` (its maximal
    feature); all its active features are taken as that feature's sub-lattice.
    """
    order_of = orders if callable(orders) else orders.__getitem__
    model = BackoffModel(k, num_classes)
    for i, e in enumerate(corpus):
        if e.label is None:
            raise BaselineError(f"training example {i} is unlabeled")
        ords = {fid: order_of(fid) for fid in e.active}
        if k not in ords.values():
            raise BaselineError(f"training example {i} has no feature of maximal order {k}")
        model.counts[EMPTY][e.label] += 1
        for fid, o in ords.items():
            if o > k:
                continue
            model.orders[fid] = o
            row = model.counts.setdefault(fid, [0] * num_classes)
            row[e.label] += 1
    return model


def _supported_by_order(model: BackoffModel, e) -> dict:
    out = {}
    for fid in e.active:
        if fid != EMPTY and fid in model.counts and model.N(fid) > 0 and model.orders[fid] <= model.k:
            out.setdefault(model.orders[fid], []).append(fid)
    return out


def bo_estimate(model: BackoffModel, e):
    """Class distribution from the highest order with training support.

    Returns ``(order, probs)`` with exact fractions; order 0 means the
    prior was used.
    """
    by_order = _supported_by_order(model, e)
    for j in range(model.k, 0, -1):
        seen = by_order.get(j)
        if seen:
            probs = [Fraction(0)] * model.num_classes
            for fid in seen:
                for c, v in enumerate(model.cond(fid)):
                    probs[c] += v
            return j, [v / len(seen) for v in probs]
    if model.N(EMPTY) == 0:
        return 0, [Fraction(1, model.num_classes)] * model.num_classes
    return 0, model.cond(EMPTY)


def bo_predict(model: BackoffModel, e):
    """``(label, P)``. P is the class-1 estimate for binary models and the
    winning class's estimate otherwise. P = 0.5 predicts 0."""
    _, probs = bo_estimate(model, e)
    if model.num_classes == 2:
        return (1 if probs[1] > Fraction(1, 2) else 0), float(probs[1])
    best = max(range(len(probs)), key=lambda c: (probs[c], -c))
    return best, float(probs[best])


def bo_to_linear(model: BackoffModel, instances: Iterable) -> LinearSeparator:
    """Linear separator reproducing ``bo_predict`` on every example in ``instances``.

    Order-j weights are ``m_j * (P(1|f) - P(0|f) - eta_j)``: the small shift
    ``eta_j`` pushes exact ties (P = 0.5) to the negative side, and the scale
    ``m_j`` is chosen so that any supported order-j sum outweighs all lower
    orders together on the instance set.
    """
    if model.num_classes != 2:
        raise BaselineError("linear export is defined for two classes only")
    if instances is None:
        raise BaselineError("back-off export needs an enumerable instance set")
    instances = list(instances)
    diff = {}
    for fid in model.counts:
        if model.N(fid) > 0:
            p0, p1 = model.cond(fid)
            diff[fid] = p1 - p0

    # per order: the distinct seen-feature groups that occur in the instance set;
    # all margin arithmetic is exact, only the final weights are rounded
    groups = {0: {(EMPTY,)} if EMPTY in diff else set()}
    for e in instances:
        for j, fids in _supported_by_order(model, e).items():
            groups.setdefault(j, set()).add(tuple(sorted(fids)))

    weights, bias = {}, 0.0
    lower_mass = Fraction(0)  # bound on |contribution| of all orders below the current one
    for j in range(0, model.k + 1):
        level = sorted(groups.get(j, ()))
        fids_at_j = sorted({f for g in level for f in g})
        if not fids_at_j:
            continue
        sums = [sum(diff[f] for f in g) for g in level]
        pos = [s for s in sums if s > 0]
        # eta small enough that every positive sum stays positive after the shift
        biggest_group = max(len(g) for g in level)
        eta = (min(pos) / (2 * biggest_group)) if pos else Fraction(1, 2)
        shifted = [s - eta * len(g) for s, g in zip(sums, level)]
        gap = min(abs(s) for s in shifted)
        scale = Fraction(1) if j == 0 else 2 * (lower_mass + 1) / gap
        for f in fids_at_j:
            w = float(scale * (diff[f] - eta))
            if f == EMPTY:
                bias = w
            else:
                weights[f] = w
        lower_mass += max(abs(scale * s) for s in shifted)
    if EMPTY not in diff:
        bias = -1.0  # no training data: bo_predict says 0 everywhere
    return LinearSeparator(weights, 0.0, bias)


# ---------------------------------------------------------------------------
# decision lists

MAX_DL_RULES = 1023


@dataclass(frozen=True)
class DecisionList:
    """Ordered (feature id, consequent in {-1, +1}) rules; later rules win."""

    rules: tuple = ()
    default_label: int = -1

    def __post_init__(self):
        rules = tuple((int(f), int(c)) for f, c in self.rules)
        for f, c in rules:
            if c not in (-1, 1):
                raise BaselineError(f"rule consequent must be -1 or +1, got {c}")
        if self.default_label not in (-1, 1):
            raise BaselineError(f"default label must be -1 or +1, got {self.default_label}")
        object.__setattr__(self, "rules", rules)

    def canonical(self) -> "DecisionList":
        """Keep only the last rule for each feature, in original relative order."""
        last = {f: j for j, (f, _) in enumerate(self.rules)}
        kept = tuple(r for j, r in enumerate(self.rules) if last[r[0]] == j)
        return DecisionList(kept, self.default_label)

    def is_canonical(self) -> bool:
        return len({f for f, _ in self.rules}) == len(self.rules)

    def __call__(self, e) -> int:
        return dl_evaluate(self, e)

    def dumps(self) -> str:
        lines = [f"dl {self.default_label:+d}"]
        lines += [f"{f}\t{c:+d}" for f, c in self.rules]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "DecisionList":
        lines = text.splitlines()
        head = lines[0].split() if lines else []
        if len(head) != 2 or head[0] != "dl":
            raise ModelFormatError(f"line 1: unknown header {head[:1]}")
        try:
            default = int(head[1])
        except ValueError:
            raise ModelFormatError("line 1: malformed dl header") from None
        rules = []
        for lineno, line in enumerate(lines[1:], 2):
            if not line.strip():
                continue
            try:
                f, c = line.split("\t")
                rules.append((int(f), int(c)))
            except ValueError:
                raise ModelFormatError(f"line {lineno}: malformed rule line {line!r}") from None
        try:
            return cls(tuple(rules), default)
        except BaselineError as err:
            raise ModelFormatError(str(err)) from None


def dl_evaluate(dl: DecisionList, e) -> int:
    active = e.active_set if hasattr(e, "active_set") else set(e.active)
    for f, c in reversed(dl.rules):
        if f in active:
            return c
    return dl.default_label


def dl_to_linear(dl: DecisionList) -> LinearSeparator:
    """Rule j (1-based) gets weight 2**j * c_j; the default sits in the bias."""
    dl = dl.canonical()
    if len(dl.rules) > MAX_DL_RULES:
        raise BaselineError(f"{len(dl.rules)} rules exceed the {MAX_DL_RULES}-rule float range")
    weights = {f: math.ldexp(c, j) for j, (f, c) in enumerate(dl.rules, 1)}
    return LinearSeparator(weights, 0.0, float(dl.default_label))


def dl_fit(corpus, min_count: int = 1, smoothing: float = 0.1) -> DecisionList:
    """Decision list ranked by smoothed log-likelihood ratio.

    The most reliable rule goes last so it is consulted first. Consequent is
    the feature's majority class; the default is the overall majority.
    """
    corpus = list(corpus)
    labels = _labels(corpus)
    if not corpus:
        raise BaselineError("decision list needs a non-empty corpus")
    n1 = Counter()
    n = Counter()
    for e, y in zip(corpus, labels):
        if y not in (0, 1):
            raise BaselineError("decision lists are binary; labels must be 0 or 1")
        for f in e.active:
            n[f] += 1
            n1[f] += y
    ranked = []
    for f, total in n.items():
        if total < min_count:
            continue
        pos, neg = n1[f], total - n1[f]
        if pos == neg:
            continue
        strength = abs(math.log((pos + smoothing) / (neg + smoothing)))
        ranked.append((strength, total, -f, f, 1 if pos > neg else -1))
    ranked.sort()
    ones = sum(labels)
    default = 1 if ones > len(labels) - ones else -1
    return DecisionList(tuple((f, c) for *_, f, c in ranked), default)


def pm1_to_01(label: int) -> int:
    return 1 if label > 0 else 0


def as_binary(dl: DecisionList) -> Callable:
    """Wrap a decision list so it answers in {0, 1} like the other predictors."""
    return lambda e: pm1_to_01(dl_evaluate(dl, e))
