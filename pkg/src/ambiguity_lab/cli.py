"""Command line entry point: ``ambiguity-lab {train,eval,compare,oracle,shatter}``."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import harness, oracle, suites
from .baselines import BaselineError, as_binary, bo_to_linear, dl_to_linear, nb_to_linear
from .feature_space import FeatureError
from .harness import ConfigError, ExperimentConfig
from .lin_sep import ModelFormatError
from .tasks import DataError

EXIT_DATA, EXIT_CONFIG = 2, 3

RUN_FLAGS = ("task", "method", "train", "test", "split", "seed", "alpha", "beta", "theta",
             "epochs", "k", "l", "sets", "model", "smoothing", "policy", "initial_weight", "shuffle",
             "n", "classes", "literals", "p_act", "n_train", "n_test")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # bad flags are configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_flags(p, multi_method=False):
    p.add_argument("--config", help="key=value file; flags override it")
    p.add_argument("--task")
    if multi_method:
        p.add_argument("--method", help="comma-separated methods", default="baseline,nb,snow")
    else:
        p.add_argument("--method")
    p.add_argument("--train")
    p.add_argument("--test")
    p.add_argument("--sets", help="confusion sets, one comma-separated set per line")
    p.add_argument("--model", help="decision-list file for --method dl")
    p.add_argument("--split", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--initial-weight", dest="initial_weight", type=float)
    p.add_argument("--policy")
    p.add_argument("--smoothing", type=float)
    p.add_argument("--epochs", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--shuffle", action="store_true", default=None, help="reshuffle each epoch (seeded)")
    g = p.add_argument_group("synthetic task")
    g.add_argument("--n", type=int, help="feature count")
    g.add_argument("--classes", type=int)
    g.add_argument("--literals", type=int, help="literals per hidden disjunction")
    g.add_argument("--p-act", dest="p_act", type=float)
    g.add_argument("--n-train", dest="n_train", type=int)
    g.add_argument("--n-test", dest="n_test", type=int)


def _config(args, method=None) -> ExperimentConfig:
    values = harness.read_config_file(args.config) if args.config else {}
    for key in RUN_FLAGS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if method is not None:
        values["method"] = method
    return ExperimentConfig.from_mapping(values)


def cmd_train(args) -> int:
    cfg = _config(args)
    groups = harness.build_groups(cfg)
    report, models, spaces = harness.run_groups(cfg, groups)
    if args.out:
        harness.save_bundle(args.out, cfg, groups, models, spaces)
    sys.stdout.write(report.render(timing=args.timing))
    return 0


def cmd_eval(args) -> int:
    report = harness.evaluate_bundle(args.model, args.test)
    sys.stdout.write(report.render(timing=args.timing))
    return 0


def cmd_compare(args) -> int:
    methods = [m.strip() for m in args.method.split(",") if m.strip()]
    cfgs = [_config(args, m) for m in methods]
    table = harness.compare(cfgs)
    sys.stdout.write(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(table)
    return 0


def cmd_oracle(args) -> int:
    """Exhaustive agreement between native predictors and their linear exports."""
    rng = np.random.default_rng(args.seed)

    nb = oracle.AgreementReport(0, 0)
    for _ in range(args.seeds):
        params = suites.random_nb(rng, args.n)
        sep = nb_to_linear(params)
        nb = nb.merge(oracle.enumerate_agreement(params, sep, args.n))
    print(f"nb seeds={args.seeds} n={args.n}")
    print(nb.render())

    dl_rep = oracle.AgreementReport(0, 0)
    for _ in range(args.seeds):
        n = int(rng.integers(1, min(args.n, 16) + 1))
        dl = suites.random_decision_list(rng, n, int(rng.integers(0, 17)))
        dl_rep = dl_rep.merge(oracle.enumerate_agreement(as_binary(dl), dl_to_linear(dl), n))
    print(f"dl seeds={args.seeds}")
    print(dl_rep.render())

    bo = oracle.AgreementReport(0, 0)
    for s in range(args.seeds):
        model, instances = suites.bo_lattice_case(args.seed * 1000 + s)
        sep = bo_to_linear(model, instances)
        bo = bo.merge(oracle.agreement_over(model, sep, instances))
    print(f"bo seeds={args.seeds}")
    print(bo.render())
    return 0 if nb.agree and dl_rep.agree and bo.agree else 1


def cmd_shatter(args) -> int:
    n = args.n
    points = [oracle.point(*[1 if j == i else 0 for j in range(n)]) for i in range(n)]
    points.insert(0, oracle.point(*([0] * n)))
    classes = {
        "linsep": lambda: oracle.grid_separators(n),
        "p1dl": lambda: oracle.all_p1_decision_lists(n),
        "nb": lambda: oracle.grid_naive_bayes(n),
    }
    for name, make in classes.items():
        rep = oracle.shatter_check(make(), points, cap=args.cap)
        verdict = "shattered" if rep.shattered else ("inconclusive" if rep.inconclusive else "not-shattered")
        print(f"shatter {name} n={n} points={len(points)} labelings={rep.achieved_labelings} {verdict}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ambiguity-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train one method and report held-out accuracy")
    _add_run_flags(p)
    p.add_argument("--out", help="directory for the trained model bundle")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a saved model bundle on a test file")
    p.add_argument("--model", required=True, help="bundle directory written by train --out")
    p.add_argument("--test", required=True)
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", help="run several methods on one task and split")
    _add_run_flags(p, multi_method=True)
    p.add_argument("--out", help="also write the table here")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="exhaustive native-vs-linear agreement checks")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("shatter", help="small-n shattering demonstrations")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_shatter)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, ModelFormatError, FeatureError, BaselineError, OSError) as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
