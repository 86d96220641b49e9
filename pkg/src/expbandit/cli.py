"""Command-line front end.

Exit codes: 0 success, 1 config/usage error, 2 runtime error. Relative
output paths resolve under EXPBANDIT_OUTPUT_ROOT when that is set.
"""

import argparse
import os
import sys

from expbandit import banknote, cart, colors, harness
from expbandit.config import parse_config
from expbandit.errors import ConfigError, DataFormatError

OUTPUT_ROOT_ENV = "EXPBANDIT_OUTPUT_ROOT"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the contract reserves 2 for
    # runtime failures, so remap to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _resolve_out(path: str) -> str:
    root = os.environ.get(OUTPUT_ROOT_ENV)
    if root and not os.path.isabs(path):
        return os.path.join(root, path)
    return path


def _cmd_run(args) -> int:
    config = parse_config(args.config)
    outdir = _resolve_out(config.outdir)
    env = harness.build_environment(config)
    result = harness.run_grid(config, env)
    os.makedirs(outdir, exist_ok=True)
    with open(os.path.join(outdir, "config_echo.txt"), "w", encoding="utf-8") as fh:
        fh.write(config.describe())
    files = [os.path.join(outdir, "config_echo.txt")]
    files += harness.emit_csv(result, config, outdir)
    files += harness.emit_plot(result.curves, outdir)
    if env.tree is not None:
        tree_path = os.path.join(outdir, "ground_truth_tree.txt")
        cart.save_tree(env.tree, tree_path)
        files.append(tree_path)
    for curve in result.curves:
        print(f"{curve.dataset} {curve.strategy}/{curve.kernel}: "
              f"final regret {curve.mean[-1]:.3f} +- {curve.std[-1]:.3f}")
    for path in files:
        print(path)
    return 0


def _cmd_gen_colors(args) -> int:
    instances = colors.gen_colors(args.n, args.rule, args.seed)
    out = _resolve_out(args.out)
    colors.save_colors(instances, args.seed, out)
    positives = sum(inst.label for inst in instances)
    print(f"{out}: {len(instances)} instances, {positives} positive, rule {args.rule}")
    return 0


def _cmd_train_tree(args) -> int:
    data = banknote.load_banknote(args.data)
    tree = cart.train_cart(data.x, data.y, args.depth, args.min_leaf)
    out = _resolve_out(args.out)
    cart.save_tree(tree, out)
    acc = cart.training_accuracy(tree, data.x, data.y)
    print(f"{out}: depth {tree.depth()}, training accuracy {acc:.4f}")
    return 0


def _cmd_plot(args) -> int:
    curves = harness.load_aggregate_csv(args.aggregate)
    out = _resolve_out(args.out)
    for path in harness.emit_plot(curves, out):
        print(path)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="expbandit",
                     description="GP contextual-bandit experiments over explanation arms")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a config's full experiment grid")
    run.add_argument("config")
    run.set_defaults(func=_cmd_run)

    gen = sub.add_parser("gen-colors", help="generate a colors dataset file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--rule", choices=colors.RULES, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=_cmd_gen_colors)

    tree = sub.add_parser("train-tree", help="fit the ground-truth decision tree")
    tree.add_argument("--data", required=True)
    tree.add_argument("--depth", type=int, default=7)
    tree.add_argument("--min-leaf", type=int, default=1)
    tree.add_argument("--out", required=True)
    tree.set_defaults(func=_cmd_train_tree)

    plot = sub.add_parser("plot", help="re-render SVG plots from an aggregate CSV")
    plot.add_argument("aggregate")
    plot.add_argument("--out", default=".")
    plot.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (ConfigError, DataFormatError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"runtime error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
