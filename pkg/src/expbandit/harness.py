"""Experiment driver: build the task environment, sweep the grid,
aggregate regret curves, and write CSV/SVG artifacts.

Grid cells (strategy x kernel x seed) are independent; with workers > 1
they run in a process pool. Aggregation and file emission stay
single-threaded so output bytes depend only on the ledgers.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from expbandit import banknote as banknote_mod
from expbandit import cart, colors, svgplot
from expbandit.bandit import Environment, EpisodeSpec, RegretLedger, run_episode
from expbandit.config import ExperimentConfig
from expbandit.explanations import ConditionVocabulary
from expbandit.kernels import EXPLANATION_LEAVES, parse_kernel
from expbandit.rewards import RewardOracle


@dataclass
class AggregateCurve:
    """Across-seed mean/std of cumulative regret, one point per round."""

    dataset: str
    strategy: str
    kernel: str
    t: np.ndarray
    mean: np.ndarray
    std: np.ndarray


@dataclass
class GridResult:
    curves: List[AggregateCurve]
    ledgers: Dict[Tuple[str, str, int], RegretLedger]  # (strategy, kernel, seed)


def build_environment(config: ExperimentConfig) -> Environment:
    """Materialize the dataset, ground truths, and reward oracle."""
    if config.dataset.startswith("colors-"):
        rule = config.dataset.split("-", 1)[1]
        instances = colors.gen_colors(config.colors_pool, rule, config.dataset_seed)
        contexts = np.ascontiguousarray([inst.x for inst in instances])
        if config.explanation == "relevance":
            truth = {inst.cid: (inst.relevance, inst.label) for inst in instances}
        else:
            truth = {inst.cid: (inst.importance, inst.label) for inst in instances}
        oracle = RewardOracle(config.reward, truth)
        base = list(dict.fromkeys(z for z, _ in truth.values()))
        return Environment(contexts, oracle, base,
                           context_ids=[inst.cid for inst in instances])

    data = banknote_mod.load_banknote(config.banknote_path)
    tree = cart.train_cart(data.x, data.y, config.tree_depth, config.tree_min_leaf)
    truth = {}
    for cid, row in enumerate(data.x):
        trace, label = cart.extract_trace(tree, row)
        truth[cid] = (trace, label)
    base = list(dict.fromkeys(z for z, _ in truth.values()))
    vocab = ConditionVocabulary([c for z in base for c in z.conditions])
    oracle = RewardOracle(config.reward, truth, vocab)
    return Environment(np.ascontiguousarray(data.x), oracle, base, vocabulary=vocab, tree=tree)


def _episode_spec(config: ExperimentConfig, strategy: str, kernel_text: str) -> EpisodeSpec:
    leaf = EXPLANATION_LEAVES[config.explanation]
    return EpisodeSpec(
        kernel=parse_kernel(kernel_text, config.gammas, explanation_kind=leaf),
        strategy=strategy,
        schedule=config.schedule,
        rounds=config.rounds,
        sigma2=config.sigma2,
        n_perturb=config.pool_perturb,
        strengths=config.pool_strengths,
    )


def _run_cell(args):
    spec, seed, env = args
    return run_episode(spec, seed, env)


def run_grid(config: ExperimentConfig, env: Environment = None) -> GridResult:
    """Every (strategy, kernel, seed) episode, then per-cell aggregation."""
    if env is None:
        env = build_environment(config)
    cells = [
        (strategy, label, _episode_spec(config, strategy, text))
        for strategy in config.strategies
        for label, text in config.kernels
    ]
    jobs = [(spec, seed, env) for _, _, spec in cells for seed in config.seeds]
    try:
        if config.workers > 1:
            with ProcessPoolExecutor(max_workers=config.workers) as pool:
                results = list(pool.map(_run_cell, jobs))
        else:
            results = [_run_cell(job) for job in jobs]
    except Exception as exc:
        raise type(exc)(f"grid cell failed: {exc}") from exc

    ledgers: Dict[Tuple[str, str, int], RegretLedger] = {}
    it = iter(results)
    for strategy, label, _ in cells:
        for seed in config.seeds:
            ledgers[(strategy, label, seed)] = next(it)

    curves = []
    for strategy, label, _ in cells:
        stack = np.vstack([ledgers[(strategy, label, s)].cum_regret for s in config.seeds])
        curves.append(AggregateCurve(
            dataset=config.dataset,
            strategy=strategy,
            kernel=label,
            t=np.arange(1, config.rounds + 1, dtype=np.int64),
            mean=stack.mean(axis=0),
            std=stack.std(axis=0),
        ))
    return GridResult(curves, ledgers)


# ---------------------------------------------------------------------------
# artifact emission
# ---------------------------------------------------------------------------

def _f(v: float) -> str:
    return repr(float(v))


def emit_csv(result: GridResult, config: ExperimentConfig, directory) -> List[str]:
    """Per-seed ledgers plus one aggregate file; bytes depend only on
    the ledgers, so re-emission is re-producible."""
    os.makedirs(directory, exist_ok=True)
    written = []
    for (strategy, kernel, seed), ledger in sorted(
            result.ledgers.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        path = os.path.join(
            directory, f"ledger_{config.dataset}_{strategy}_{kernel}_{seed}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("run,t,reward,true_reward,regret,cum_regret,label_correct\n")
            for i in range(len(ledger)):
                fh.write(",".join((
                    str(seed), str(int(ledger.t[i])),
                    _f(ledger.noisy_reward[i]), _f(ledger.true_reward[i]),
                    _f(ledger.regret[i]), _f(ledger.cum_regret[i]),
                    str(int(ledger.label_correct[i])),
                )) + "\n")
        written.append(path)

    agg_path = os.path.join(directory, "aggregate.csv")
    with open(agg_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("dataset,strategy,kernel,t,mean,std\n")
        for curve in result.curves:
            for i in range(curve.t.shape[0]):
                fh.write(",".join((
                    curve.dataset, curve.strategy, curve.kernel,
                    str(int(curve.t[i])), _f(curve.mean[i]), _f(curve.std[i]),
                )) + "\n")
    written.append(agg_path)
    return written


def emit_plot(curves: List[AggregateCurve], directory) -> List[str]:
    """One SVG per dataset present in the curve list."""
    if not curves:
        raise ValueError("need at least one curve")
    os.makedirs(directory, exist_ok=True)
    written = []
    datasets = list(dict.fromkeys(c.dataset for c in curves))
    for dataset in datasets:
        subset = [c for c in curves if c.dataset == dataset]
        path = os.path.join(directory, f"regret_{dataset}.svg")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svgplot.render_curves(subset, f"cumulative regret, {dataset}"))
        written.append(path)
    return written


def load_aggregate_csv(path) -> List[AggregateCurve]:
    """Rebuild curves from an aggregate.csv, for standalone re-plotting."""
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "dataset,strategy,kernel,t,mean,std":
            raise ValueError(f"{path}: unexpected aggregate header {header!r}")
        for line in fh:
            dataset, strategy, kernel, t, mean, std = line.rstrip("\n").split(",")
            rows.append((dataset, strategy, kernel, int(t), float(mean), float(std)))
    curves = []
    for key in dict.fromkeys((d, s, k) for d, s, k, _, _, _ in rows):
        block = [r for r in rows if (r[0], r[1], r[2]) == key]
        curves.append(AggregateCurve(
            dataset=key[0], strategy=key[1], kernel=key[2],
            t=np.array([r[3] for r in block], dtype=np.int64),
            mean=np.array([r[4] for r in block]),
            std=np.array([r[5] for r in block]),
        ))
    return curves
