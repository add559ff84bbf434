"""Synthetic data with known ground truth: hidden monotone disjunctions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .feature_space import Example


@dataclass(frozen=True)
class DisjunctionTask:
    """One hidden k-literal disjunction per class over disjoint feature ids.

    An example of class c has at least one of c's literals active, none of
    the other classes' literals, and background features drawn with
    probability ``p_act``.
    """

    n: int = 300
    num_classes: int = 3
    k: int = 5
    p_act: float = 0.05
    seed: int = 0

    def literals(self) -> list:
        rng = np.random.default_rng(self.seed)
        picked = rng.choice(self.n, size=self.k * self.num_classes, replace=False)
        return [sorted(int(i) for i in picked[c * self.k:(c + 1) * self.k])
                for c in range(self.num_classes)]

    def sample(self, count: int, seed: int) -> list:
        rng = np.random.default_rng(seed)
        lits = self.literals()
        relevant = np.zeros(self.n, dtype=bool)
        for ls in lits:
            relevant[ls] = True
        background = np.flatnonzero(~relevant)
        out = []
        for _ in range(count):
            c = int(rng.integers(self.num_classes))
            on = background[rng.random(len(background)) < self.p_act]
            mask = rng.random(self.k) < 0.3
            if not mask.any():
                mask[rng.integers(self.k)] = True
            chosen = np.asarray(lits[c])[mask]
            out.append(Example(tuple(int(i) for i in np.concatenate([on, chosen])), c))
        return out

    def truth(self, e) -> int:
        for c, ls in enumerate(self.literals()):
            if any(i in e.active_set for i in ls):
                return c
        return -1


def disjunction_stream(n: int, relevant, count: int, p_act: float, seed: int) -> list:
    """Binary examples over ``n`` features labeled by OR of ``relevant``."""
    rng = np.random.default_rng(seed)
    rel = np.asarray(sorted(relevant))
    out = []
    for _ in range(count):
        x = rng.random(n) < p_act
        out.append(Example(tuple(int(i) for i in np.flatnonzero(x)), int(x[rel].any())))
    return out


def balanced_activation(k: int, target: float = 0.5) -> float:
    """Per-feature probability making a k-literal disjunction true with prob ``target``."""
    return 1.0 - (1.0 - target) ** (1.0 / k)
