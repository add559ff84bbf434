"""Experiment runner: data preparation, training, evaluation and model files."""

from __future__ import annotations

import os
import time
from collections import namedtuple
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .baselines import (
    BackoffModel, BaselineError, DecisionList, NbParams, as_binary, bo_fit, dl_fit, nb_fit,
)
from .feature_space import CONTEXT, Feature, FeatureSpace, TaskDef, Token
from .lin_sep import LinearSeparator, ModelFormatError, perf
from .snow import ON_POSITIVE, POLICIES, SnowNetwork
from .synthetic import DisjunctionTask
from .tasks import (
    PPA_TASK, DataError, Instance, MostCommonTag, PosCorpus, baseline_most_common,
    encode_instances, load_confusion_sets, load_pos, load_ppa, load_spelling, pos_instances,
    ppa_instance, split, spelling_instances, _read_lines,
)
from .winnow import WinnowConfig, WinnowLearner

TASKS = ("spell", "ppa", "pos", "synthetic")
METHODS = ("snow", "nb", "bo", "dl", "baseline")
DATA_ENV = "AMBIGUITY_LAB_DATA"


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    task: str = "synthetic"
    method: str = "snow"
    train: Optional[str] = None
    test: Optional[str] = None
    sets: Optional[str] = None
    model: Optional[str] = None
    split: float = 0.8
    seed: int = 0
    epochs: int = 1
    shuffle: bool = False
    alpha: float = 1.5
    beta: float = 0.8
    theta: float = 1.0
    initial_weight: float = 0.5
    policy: str = ON_POSITIVE
    smoothing: float = 1.0
    k: Optional[int] = None
    l: Optional[int] = None
    # synthetic task shape
    n: int = 300
    classes: int = 3
    literals: int = 5
    p_act: float = 0.05
    n_train: int = 2000
    n_test: int = 500

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; choose from {', '.join(TASKS)}")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if not 0 < self.split < 1:
            raise ConfigError(f"split ratio must be in (0, 1), got {self.split}")
        if self.epochs < 0:
            raise ConfigError("epochs must be non-negative")
        if self.policy not in POLICIES:
            raise ConfigError(f"unknown allocation policy {self.policy!r}")
        try:
            self.winnow_config()
        except ValueError as err:
            raise ConfigError(str(err)) from None
        if self.task != "synthetic" and self.train is None and self.test is None:
            raise ConfigError(f"task {self.task} needs --train data")
        if self.task == "spell" and self.sets is None:
            raise ConfigError("task spell needs a confusion-set file (--sets)")
        if self.method == "bo" and self.task != "ppa":
            raise ConfigError("back-off estimation needs one maximal feature per example (task ppa)")
        if self.method == "dl" and (self.task == "pos" or (self.task == "synthetic" and self.classes != 2)):
            raise ConfigError("decision lists are binary; use a two-class task")

    def winnow_config(self) -> WinnowConfig:
        return WinnowConfig(self.alpha, self.beta, self.theta, self.initial_weight)

    @property
    def window(self) -> int:
        if self.k is not None:
            return self.k
        return 10 if self.task == "spell" else 2

    @property
    def span(self) -> int:
        return self.l if self.l is not None else 2

    @classmethod
    def from_mapping(cls, values: dict) -> "ExperimentConfig":
        known = {f.name: f for f in fields(cls)}
        kw = {}
        for key, raw in values.items():
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kw[key] = _coerce(known[key], raw)
        return cls(**kw)

    def render(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items() if v is not None)


def _coerce(f, raw):
    if not isinstance(raw, str):
        return raw
    default = f.default
    try:
        if f.name in ("k", "l"):
            return int(raw)
        if isinstance(default, bool):
            if raw.lower() not in ("1", "0", "true", "false", "yes", "no"):
                raise ValueError
            return raw.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"bad value for {f.name}: {raw!r}") from None
    return raw


def read_config_file(path) -> dict:
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, val = line.split("=", 1)
        values[key.strip()] = val.strip()
    return values


def resolve_data_path(path: Optional[str]) -> Optional[str]:
    """Relative paths that do not exist are looked up under $AMBIGUITY_LAB_DATA."""
    if path is None or os.path.isabs(path) or os.path.exists(path):
        return path
    root = os.environ.get(DATA_ENV)
    if root and os.path.exists(os.path.join(root, path)):
        return os.path.join(root, path)
    return path


# ---------------------------------------------------------------------------
# data preparation


@dataclass
class Group:
    """One independently trained classifier: a confusion set, or the whole task."""

    name: str
    task: TaskDef
    train: list
    test: list
    baseline_labels: Optional[list] = None  # per-test-item baseline guesses, when not constant
    extras: dict = field(default_factory=dict)


def _synthetic_instances(examples) -> list:
    return [Instance(frozenset(Feature(((CONTEXT, Token(f"x{i}")),)) for i in e.active), e.label)
            for e in examples]


def build_groups(cfg: ExperimentConfig, tagger: Optional[MostCommonTag] = None,
                 tagset: Optional[list] = None) -> list:
    train_path, test_path = resolve_data_path(cfg.train), resolve_data_path(cfg.test)
    if cfg.task == "synthetic":
        gen = DisjunctionTask(cfg.n, cfg.classes, cfg.literals, cfg.p_act, cfg.seed)
        task = TaskDef([f"c{i}" for i in range(cfg.classes)], "synthetic")
        return [Group("synthetic", task,
                      _synthetic_instances(gen.sample(cfg.n_train, cfg.seed + 1)),
                      _synthetic_instances(gen.sample(cfg.n_test, cfg.seed + 2)))]

    if cfg.task == "ppa":
        train = load_ppa(train_path) if train_path else []
        if test_path:
            test = load_ppa(test_path)
        else:
            train, test = split(train, cfg.split, cfg.seed)
        return [Group("ppa", PPA_TASK,
                      [ppa_instance(r, f"train:{i + 1}") for i, r in enumerate(train)],
                      [ppa_instance(r, f"test:{i + 1}") for i, r in enumerate(test)])]

    if cfg.task == "spell":
        sets = load_confusion_sets(resolve_data_path(cfg.sets))
        if not sets:
            raise DataError(f"no confusion sets in {cfg.sets}")
        if test_path:
            train = load_spelling(train_path, sets, cfg.window, cfg.span) if train_path else {}
            test = load_spelling(test_path, sets, cfg.window, cfg.span)
        else:
            sents = _read_lines(train_path)
            tr, ts = split(sents, cfg.split, cfg.seed)
            train = spelling_instances(tr, sets, cfg.window, cfg.span, name="train")
            test = spelling_instances(ts, sets, cfg.window, cfg.span, name="test")
        return [Group(cs.name, cs.task, train.get(cs.name, []), test[cs.name]) for cs in sets]

    # pos
    train = load_pos(train_path) if train_path else PosCorpus([])
    if test_path:
        test = load_pos(test_path)
    else:
        tr, ts = split(train.sentences, cfg.split, cfg.seed)
        train, test = PosCorpus(tr), PosCorpus(ts)
    if tagger is None:
        tagger = MostCommonTag.fit(train)
    if tagset is None:
        tagset = sorted(set(train.tagset) | set(test.tagset) | set(tagger.by_word.values())
                        | {tagger.fallback})
    index = {t: i for i, t in enumerate(tagset)}
    baseline = [index.get(tagger.tag(w), -1) for s in test.sentences for w, _ in s]
    return [Group("pos", TaskDef(tagset, "pos"),
                  pos_instances(train, tagger, tagset, cfg.window, cfg.span, "train"),
                  pos_instances(test, tagger, tagset, cfg.window, cfg.span, "test"),
                  baseline, {"tagger": tagger})]


# ---------------------------------------------------------------------------
# training and evaluation


@dataclass
class Trained:
    model: object
    predictor: object
    mistakes: int = 0


def fit_method(cfg: ExperimentConfig, task: TaskDef, train: list, space: FeatureSpace) -> Trained:
    m = task.num_classes
    if cfg.method == "snow":
        net = SnowNetwork(task, cfg.winnow_config(), cfg.policy)
        mistakes = net.train_corpus(train, cfg.epochs, cfg.seed if cfg.shuffle else None, freeze=True)
        return Trained(net, net, sum(mistakes))
    if cfg.method == "nb":
        params = nb_fit(train, space.n, cfg.smoothing, m)
        return Trained(params, params)
    if cfg.method == "bo":
        model = bo_fit(train, space.order, 4, m)
        return Trained(model, model)
    if cfg.method == "dl":
        if m != 2:
            raise ConfigError(f"decision lists are binary; {task.predicate_name} has {m} classes")
        dl = load_model(resolve_data_path(cfg.model), "dl") if cfg.model else dl_fit(train)
        return Trained(dl, as_binary(dl))
    model = baseline_most_common(train)
    return Trained(model, model)


Scored = namedtuple("Scored", "label guess")


def _guess(s):
    return s.guess


@dataclass
class GroupResult:
    name: str
    n_train: int
    n_test: int
    accuracy: float
    baseline: float


@dataclass
class Report:
    task: str
    method: str
    accuracy: float
    baseline: float
    n_train: int
    n_test: int
    mistakes: int
    per_class: dict
    groups: list
    wall_time: float = 0.0

    def render(self, timing: bool = False) -> str:
        lines = [f"task {self.task}  method {self.method}",
                 f"{'group':<24} {'train':>8} {'test':>8} {'baseline':>9} {'accuracy':>9}"]
        for g in self.groups:
            lines.append(f"{g.name:<24} {g.n_train:>8d} {g.n_test:>8d} "
                         f"{100 * g.baseline:>9.2f} {100 * g.accuracy:>9.2f}")
        lines.append(f"{'overall':<24} {self.n_train:>8d} {self.n_test:>8d} "
                     f"{100 * self.baseline:>9.2f} {100 * self.accuracy:>9.2f}")
        if self.per_class:
            lines.append("per-class accuracy: " + " ".join(
                f"{c}={100 * a:.2f}" for c, a in self.per_class.items()))
        lines.append(f"mistakes {self.mistakes}")
        if timing:
            lines.append(f"wall_time {self.wall_time:.3f}s")
        lines.append(self.result_line())
        return "\n".join(lines) + "\n"

    def result_line(self) -> str:
        return f"result {self.method} {self.task} {self.accuracy:.6f} {self.n_test}"


def _scored_accuracy(scored: list) -> float:
    return perf(_guess, scored)


def evaluate_group(cfg, group: Group, trained: Trained, test_examples: list):
    if cfg.method == "baseline" and group.baseline_labels is not None:
        guesses = list(group.baseline_labels)
    else:
        guesses = [trained.predictor(e) for e in test_examples]
    guesses = [g.label if hasattr(g, "label") else g for g in guesses]
    return [Scored(e.label, g) for e, g in zip(test_examples, guesses)]


def run_groups(cfg: ExperimentConfig, groups: list):
    """Train and evaluate every group; returns (report, trained models, spaces)."""
    start = time.perf_counter()
    results, all_scored, base_scored = [], [], []
    models, spaces = [], []
    n_train = mistakes = 0
    class_hits = {}
    for g in groups:
        if not g.test:
            raise DataError(f"group {g.name}: no test cases")
        if not g.train:
            raise DataError(f"group {g.name}: no training cases")
        space = FeatureSpace()
        train_ex = encode_instances(space, g.train, register=True)
        space.freeze()
        test_ex = encode_instances(space, g.test, register=False)
        try:
            trained = fit_method(cfg, g.task, train_ex, space)
        except BaselineError as err:
            raise DataError(f"group {g.name}: {err}") from None
        scored = evaluate_group(cfg, g, trained, test_ex)
        if g.baseline_labels is not None:
            base = [Scored(e.label, b) for e, b in zip(test_ex, g.baseline_labels)]
        else:
            majority = baseline_most_common(train_ex)
            base = [Scored(e.label, majority(e)) for e in test_ex]
        g.extras["majority"] = baseline_most_common(train_ex).label
        results.append(GroupResult(g.name, len(train_ex), len(test_ex),
                                   _scored_accuracy(scored), _scored_accuracy(base)))
        all_scored += scored
        base_scored += base
        n_train += len(train_ex)
        mistakes += trained.mistakes
        for s in scored:
            name = g.task.classes[s.label] if len(groups) == 1 else f"{g.name}:{g.task.classes[s.label]}"
            hit = class_hits.setdefault(name, [0, 0])
            hit[0] += s.guess == s.label
            hit[1] += 1
        models.append(trained.model)
        spaces.append(space)
    report = Report(cfg.task, cfg.method, _scored_accuracy(all_scored), _scored_accuracy(base_scored),
                    n_train, len(all_scored), mistakes,
                    {c: h / t for c, (h, t) in sorted(class_hits.items())}, results,
                    time.perf_counter() - start)
    return report, models, spaces


def run_experiment(cfg: ExperimentConfig) -> Report:
    cfg.validate()
    return run_groups(cfg, build_groups(cfg))[0]


def compare(cfgs: list) -> str:
    """Run several methods on one task and split; one table row per method."""
    if not cfgs:
        raise ConfigError("compare needs at least one configuration")
    base = cfgs[0]
    for c in cfgs[1:]:
        if (c.task, c.train, c.test, c.split, c.seed, c.sets) != (base.task, base.train, base.test,
                                                                   base.split, base.seed, base.sets):
            raise ConfigError("compared configurations must share task, data and split")
    groups = build_groups(base)
    reports = [run_groups(c, groups)[0] for c in cfgs]
    lines = [f"{'method':<10} {'cases':>8} {'baseline':>9} {'accuracy':>9}"]
    for r in reports:
        lines.append(f"{r.method:<10} {r.n_test:>8d} {100 * r.baseline:>9.2f} {100 * r.accuracy:>9.2f}")
    lines += [r.result_line() for r in reports]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# model files

MODEL_KINDS = {
    "linsep": LinearSeparator,
    "winnow": WinnowLearner,
    "snow": SnowNetwork,
    "nb": NbParams,
    "nbm": NbParams,
    "bo": BackoffModel,
    "dl": DecisionList,
}


def save_model(path, model) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(model.dumps())


def load_model(path, kind: Optional[str] = None):
    """Read any model file, dispatching on its header word.

    ``kind`` asserts the expected header; a mismatch is a ModelFormatError.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise DataError(f"cannot read model {path}: {err.strerror}") from None
    first = text.split("\n", 1)[0].split()
    header = first[0] if first else ""
    if header not in MODEL_KINDS:
        raise ModelFormatError(f"{path}: unknown model header {header!r}")
    if kind is not None and header != kind and {header, kind} != {"nb", "nbm"}:
        raise ModelFormatError(f"{path}: expected a {kind!r} model, found header {header!r}")
    try:
        return MODEL_KINDS[header].loads(text)
    except ModelFormatError as err:
        raise ModelFormatError(f"{path}: {err}") from None


def save_tagger(tagger: MostCommonTag, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"fallback\t{tagger.fallback}\n")
        for w in sorted(tagger.by_word):
            fh.write(f"{w}\t{tagger.by_word[w]}\n")


def load_tagger(path) -> MostCommonTag:
    lines = _read_lines(path)
    fallback, by_word = None, {}
    for lineno, line in enumerate(lines, 1):
        parts = line.split("\t")
        if len(parts) != 2:
            raise ModelFormatError(f"{path}:{lineno}: expected word<TAB>tag")
        if lineno == 1 and parts[0] == "fallback":
            fallback = parts[1]
        else:
            by_word[parts[0]] = parts[1]
    if fallback is None:
        raise ModelFormatError(f"{path}: missing fallback line")
    return MostCommonTag(by_word, fallback)


def save_bundle(out_dir, cfg: ExperimentConfig, groups: list, models: list, spaces: list) -> None:
    """Directory layout: config.txt, then one subdirectory per group."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config.txt").write_text(cfg.render(), encoding="utf-8")
    for i, (g, model, space) in enumerate(zip(groups, models, spaces)):
        d = out / f"group{i}"
        d.mkdir(exist_ok=True)
        (d / "group.txt").write_text(
            f"{g.name}\n{chr(9).join(g.task.classes)}\n{g.extras.get('majority', 0)}\n", encoding="utf-8")
        space.save(d / "lexicon.txt")
        save_model(d / "model.txt", model)
        if "tagger" in g.extras:
            save_tagger(g.extras["tagger"], out / "tagger.txt")


def evaluate_bundle(bundle_dir, test_path: str) -> Report:
    """Evaluate a saved bundle on a new test file."""
    bundle = Path(bundle_dir)
    if not (bundle / "config.txt").exists():
        raise DataError(f"{bundle_dir} is not a model bundle (no config.txt)")
    values = read_config_file(bundle / "config.txt")
    values["test"] = test_path
    cfg = ExperimentConfig.from_mapping(values)
    meta = []
    i = 0
    while (bundle / f"group{i}" / "group.txt").exists():
        name, classes, majority = _read_lines(bundle / f"group{i}" / "group.txt")[:3]
        meta.append((name, classes.split("\t"), int(majority)))
        i += 1
    if not meta:
        raise DataError(f"{bundle_dir} contains no trained groups")
    tagger = load_tagger(bundle / "tagger.txt") if cfg.task == "pos" else None
    if cfg.task == "synthetic":
        groups = build_groups(cfg)
    else:
        groups = build_groups(replace(cfg, train=None), tagger, meta[0][1] if tagger else None)
    if len(groups) != len(meta):
        raise DataError(f"bundle has {len(meta)} groups but the test data yields {len(groups)}")
    start = time.perf_counter()
    results, all_scored, base_scored = [], [], []
    for i, g in enumerate(groups):
        d = bundle / f"group{i}"
        majority = meta[i][2]
        space = FeatureSpace.load(d / "lexicon.txt")
        space.freeze()
        model = load_model(d / "model.txt")
        if isinstance(model, SnowNetwork):
            model = SnowNetwork(g.task, model.config, nodes=model.nodes)
        predictor = as_binary(model) if isinstance(model, DecisionList) else model
        test_ex = encode_instances(space, g.test, register=False)
        scored = [Scored(e.label, predictor(e)) for e in test_ex]
        scored = [Scored(s.label, getattr(s.guess, "label", s.guess)) for s in scored]
        if g.baseline_labels is not None:
            base = [Scored(e.label, b) for e, b in zip(test_ex, g.baseline_labels)]
        else:
            base = [Scored(e.label, majority) for e in test_ex]
        results.append(GroupResult(g.name, 0, len(test_ex), _scored_accuracy(scored), _scored_accuracy(base)))
        all_scored += scored
        base_scored += base
    return Report(cfg.task, cfg.method, _scored_accuracy(all_scored), _scored_accuracy(base_scored),
                  0, len(all_scored), 0, {}, results, time.perf_counter() - start)
