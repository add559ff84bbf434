"""SNOW: one positive-Winnow target node per class, winner-take-all output."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .feature_space import TaskDef
from .lin_sep import ModelFormatError, Prediction
from .winnow import WinnowConfig, WinnowLearner, parse_winnow_block

ON_POSITIVE = "on_positive_example"
ON_ANY = "on_any_cooccurrence"
POLICIES = (ON_POSITIVE, ON_ANY)


class FrozenNetworkError(RuntimeError):
    pass


@dataclass
class TargetNode:
    class_id: int
    learner: WinnowLearner

    @property
    def links(self) -> set:
        return set(self.learner.weights)


@dataclass
class SnowNetwork:
    task: TaskDef
    config: WinnowConfig = field(default_factory=WinnowConfig)
    allocation_policy: str = ON_POSITIVE
    normalize_by_theta: bool = False
    nodes: list = field(default_factory=list)
    frozen: bool = False

    def __post_init__(self):
        if self.allocation_policy not in POLICIES:
            raise ValueError(f"unknown allocation policy {self.allocation_policy!r}")
        if not self.nodes:
            self.nodes = [TargetNode(c, WinnowLearner(self.config))
                          for c in range(self.task.num_classes)]
        if len(self.nodes) != self.task.num_classes:
            raise ValueError("need exactly one node per class")
        if len({n.class_id for n in self.nodes}) != len(self.nodes):
            raise ValueError("duplicate node class ids")

    def train_example(self, e) -> list:
        """One-vs-all update; returns the class ids of nodes that erred."""
        if self.frozen:
            raise FrozenNetworkError("network is frozen")
        if e.label is None or not 0 <= e.label < len(self.nodes):
            raise ValueError(f"label {e.label!r} is not a class of this task")
        if self.allocation_policy == ON_ANY:
            for node in self.nodes:
                node.learner.allocate(e.active)
        else:
            self.nodes[e.label].learner.allocate(e.active)
        return [node.class_id for node in self.nodes
                if node.learner.update(e, 1 if node.class_id == e.label else 0)]

    def activations(self, e) -> list:
        acts = [n.learner.activation(e) for n in self.nodes]
        if self.normalize_by_theta:
            acts = [a - n.learner.config.theta for a, n in zip(acts, self.nodes)]
        return acts

    def predict(self, e) -> Prediction:
        acts = self.activations(e)
        best = 0
        for c in range(1, len(acts)):
            if acts[c] > acts[best]:
                best = c
        return Prediction(self.nodes[best].class_id, acts[best])

    def __call__(self, e) -> int:
        return self.predict(e).label

    def train_corpus(self, corpus, epochs: int = 1, shuffle_seed: Optional[int] = None,
                     freeze: bool = False) -> list:
        """Sequential passes over ``corpus``; reshuffled each epoch when a seed is given."""
        corpus = list(corpus)
        for i, e in enumerate(corpus):
            if e.label is None:
                raise ValueError(f"training example {i} is unlabeled")
        before = [n.learner.mistakes for n in self.nodes]
        rng = random.Random(shuffle_seed) if shuffle_seed is not None else None
        for _ in range(epochs):
            order = corpus
            if rng is not None:
                order = corpus[:]
                rng.shuffle(order)
            for e in order:
                self.train_example(e)
        if freeze:
            self.freeze()
        return [n.learner.mistakes - b for n, b in zip(self.nodes, before)]

    def freeze(self) -> None:
        self.frozen = True
        for n in self.nodes:
            n.learner.freeze()

    def dumps(self) -> str:
        out = [f"snow {len(self.nodes)}\n"]
        for n in self.nodes:
            out.append(f"node {n.class_id}\n")
            out.append(n.learner.dumps())
        return "".join(out)

    @classmethod
    def loads(cls, text: str, task: Optional[TaskDef] = None) -> "SnowNetwork":
        lines = text.splitlines()
        head = lines[0].split() if lines else []
        if len(head) != 2 or head[0] != "snow":
            raise ModelFormatError(f"line 1: unknown header {head[:1]}")
        try:
            m = int(head[1])
        except ValueError:
            raise ModelFormatError("line 1: malformed snow header") from None
        nodes, i = [], 1
        while i < len(lines):
            if not lines[i].strip():
                i += 1
                continue
            parts = lines[i].split()
            if len(parts) != 2 or parts[0] != "node":
                raise ModelFormatError(f"line {i + 1}: expected 'node <class-id>'")
            learner, i = parse_winnow_block(lines, i + 1)
            nodes.append(TargetNode(int(parts[1]), learner))
        if len(nodes) != m:
            raise ModelFormatError(f"header announces {m} nodes, found {len(nodes)}")
        if task is None:
            task = TaskDef([str(c) for c in range(m)])
        return cls(task, nodes[0].learner.config if nodes else WinnowConfig(), nodes=nodes)


def snow_train_example(net: SnowNetwork, e) -> None:
    net.train_example(e)


def snow_predict(net: SnowNetwork, e) -> Prediction:
    return net.predict(e)


def snow_train_corpus(net: SnowNetwork, corpus, epochs: int = 1, shuffle_seed=None, freeze=False) -> list:
    return net.train_corpus(corpus, epochs, shuffle_seed, freeze)
