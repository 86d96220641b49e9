"""Experiment config: flat ``key = value`` text with '#' comments.

Unknown keys fail loudly by name. List-valued keys (strategy, kernel,
seeds, pool_strengths) take comma-separated entries; kernel entries may
themselves be parenthesized expressions, so splitting respects nesting.
All defaults are resolved at parse time and echoed by ``describe``.
"""

import os
from dataclasses import dataclass, field
from typing import Optional, Tuple

from expbandit.bandit import DEFAULT_N_PERTURB, DEFAULT_STRENGTHS, STRATEGIES, BetaSchedule
from expbandit.errors import ConfigError
from expbandit.kernels import EXPLANATION_LEAVES, parse_kernel

DATASETS = ("colors-A", "colors-B", "banknote")

# explanation variants each dataset can ground-truth, and reward kinds
# each variant supports (first entry = default)
DATASET_VARIANTS = {
    "colors-A": ("relevance", "importance"),
    "colors-B": ("relevance", "importance"),
    "banknote": ("trace",),
}
VARIANT_REWARDS = {
    "relevance": ("cosine", "hamming"),
    "importance": ("cosine",),
    "trace": ("jaccard", "lcs"),
    "ranking": ("kendall",),
}

_KNOWN_KEYS = (
    "dataset", "explanation", "reward", "kernel", "strategy", "rounds",
    "sigma2", "seeds", "beta", "pool_perturb", "pool_strengths",
    "colors_pool", "dataset_seed", "banknote_path", "tree_depth",
    "tree_min_leaf", "outdir", "workers",
    "gamma_instance", "gamma_explanation", "gamma_label",
)


@dataclass(frozen=True)
class ExperimentConfig:
    dataset: str
    explanation: str
    reward: str
    kernels: Tuple[Tuple[str, str], ...]   # (label, expression text)
    strategies: Tuple[str, ...]
    rounds: int
    sigma2: float
    seeds: Tuple[int, ...]
    schedule: BetaSchedule
    pool_perturb: int
    pool_strengths: Tuple[int, ...]
    colors_pool: int
    dataset_seed: int
    banknote_path: Optional[str]
    tree_depth: int
    tree_min_leaf: int
    outdir: str
    workers: int
    gammas: dict = field(default_factory=dict)

    def kernel_exprs(self):
        leaf = EXPLANATION_LEAVES[self.explanation]
        return [(label, parse_kernel(text, self.gammas, explanation_kind=leaf))
                for label, text in self.kernels]

    def describe(self) -> str:
        lines = [
            f"dataset = {self.dataset}",
            f"explanation = {self.explanation}",
            f"reward = {self.reward}",
            f"kernel = {', '.join(text for _, text in self.kernels)}",
            f"strategy = {', '.join(self.strategies)}",
            f"rounds = {self.rounds}",
            f"sigma2 = {self.sigma2!r}",
            f"seeds = {','.join(str(s) for s in self.seeds)}",
            f"beta = {_schedule_text(self.schedule)}",
            f"pool_perturb = {self.pool_perturb}",
            f"pool_strengths = {','.join(str(s) for s in self.pool_strengths)}",
            f"colors_pool = {self.colors_pool}",
            f"dataset_seed = {self.dataset_seed}",
            f"tree_depth = {self.tree_depth}",
            f"tree_min_leaf = {self.tree_min_leaf}",
            f"outdir = {self.outdir}",
            f"workers = {self.workers}",
        ]
        if self.banknote_path is not None:
            lines.insert(13, f"banknote_path = {self.banknote_path}")
        for part in ("instance", "explanation", "label"):
            if part in self.gammas:
                lines.append(f"gamma_{part} = {self.gammas[part]!r}")
        return "\n".join(lines) + "\n"


def _schedule_text(schedule: BetaSchedule) -> str:
    if schedule.kind == "constant":
        return f"constant({schedule.beta!r})"
    return f"log-growth({schedule.a!r}, {schedule.b!r})"


def _split_top_level(text: str):
    """Split on commas outside parentheses."""
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i].strip())
            start = i + 1
    parts.append(text[start:].strip())
    return [p for p in parts if p]


def _parse_seeds(text: str):
    if ":" in text:
        lo_text, hi_text = text.split(":", 1)
        lo, hi = int(lo_text), int(hi_text)
        if hi <= lo:
            raise ValueError("empty seed range")
        return tuple(range(lo, hi))
    return tuple(int(tok) for tok in _split_top_level(text))


def _parse_beta(text: str) -> BetaSchedule:
    body = text.strip()
    if body.startswith("constant(") and body.endswith(")"):
        return BetaSchedule.constant(float(body[len("constant("):-1]))
    if body.startswith("log-growth(") and body.endswith(")"):
        args = [float(v) for v in body[len("log-growth("):-1].split(",")]
        if len(args) != 2:
            raise ValueError("log-growth takes two coefficients")
        return BetaSchedule.log_growth(*args)
    raise ValueError(
        f"expected constant(BETA) or log-growth(A, B), got {body!r}; "
        "the theorem schedule needs a surrogate sequence and is API-only")


def _read_pairs(path):
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            pairs.append((lineno, key, value))
    return pairs


def parse_config(path) -> ExperimentConfig:
    pairs = _read_pairs(path)
    raw = {}
    for lineno, key, value in pairs:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        raw[key] = value

    def take(key, default=None):
        return raw.pop(key, default)

    dataset = take("dataset")
    if dataset is None:
        raise ConfigError(f"{path}: missing required key 'dataset'")
    matches = [d for d in DATASETS if d.lower() == dataset.lower()]
    if not matches:
        raise ConfigError(f"{path}: dataset must be one of {DATASETS}, got {dataset!r}")
    dataset = matches[0]

    variants = DATASET_VARIANTS[dataset]
    explanation = take("explanation", variants[0])
    if explanation not in variants:
        raise ConfigError(
            f"{path}: explanation for {dataset} must be one of {variants}, got {explanation!r}")

    rewards = VARIANT_REWARDS[explanation]
    reward = take("reward", rewards[0])
    if reward not in rewards:
        raise ConfigError(
            f"{path}: reward for {explanation} explanations must be one of {rewards}, "
            f"got {reward!r}")

    strategies = tuple(_split_top_level(take("strategy", "ucb, random")))
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad or not strategies:
        raise ConfigError(f"{path}: strategy entries must be in {STRATEGIES}, got {bad or '[]'}")

    gammas = {}
    for part in ("instance", "explanation", "label"):
        value = take(f"gamma_{part}")
        if value is not None:
            try:
                gammas[part] = float(value)
            except ValueError:
                raise ConfigError(f"{path}: gamma_{part} must be a number") from None

    kernel_texts = _split_top_level(take("kernel", "prod, sum"))
    kernels = []
    for i, text in enumerate(kernel_texts):
        label = text if text in ("prod", "sum") else f"kernel{i}"
        # validate now so errors carry the path
        parse_kernel(text, gammas, explanation_kind=EXPLANATION_LEAVES[explanation])
        kernels.append((label, text))
    if len({label for label, _ in kernels}) != len(kernels):
        raise ConfigError(f"{path}: duplicate kernel entries")

    def int_key(key, default, minimum, maximum=None):
        value = take(key, None)
        try:
            out = default if value is None else int(value)
        except ValueError:
            raise ConfigError(f"{path}: {key} must be an integer") from None
        if out < minimum or (maximum is not None and out > maximum):
            bound = f">= {minimum}" if maximum is None else f"in [{minimum}, {maximum}]"
            raise ConfigError(f"{path}: {key} must be {bound}, got {out}")
        return out

    rounds = int_key("rounds", 200, 1)
    pool_perturb = int_key("pool_perturb", DEFAULT_N_PERTURB, 0)
    colors_pool = int_key("colors_pool", 200, 1)
    dataset_seed = int_key("dataset_seed", 0, 0)
    tree_depth = int_key("tree_depth", 7, 5, 10)
    tree_min_leaf = int_key("tree_min_leaf", 1, 1)
    workers = int_key("workers", 1, 1)

    try:
        sigma2 = float(take("sigma2", "0.01"))
    except ValueError:
        raise ConfigError(f"{path}: sigma2 must be a number") from None
    if sigma2 < 0:
        raise ConfigError(f"{path}: sigma2 must be nonnegative")

    try:
        seeds = _parse_seeds(take("seeds", "0:10"))
    except ValueError as exc:
        raise ConfigError(f"{path}: seeds: {exc}") from None

    try:
        schedule = _parse_beta(take("beta", "log-growth(1.0, 0.2)"))
    except ValueError as exc:
        raise ConfigError(f"{path}: beta: {exc}") from None

    try:
        strengths = tuple(int(tok) for tok in _split_top_level(take("pool_strengths", "1,2,3")))
    except ValueError:
        raise ConfigError(f"{path}: pool_strengths must be integers") from None
    if not strengths or any(s < 0 for s in strengths):
        raise ConfigError(f"{path}: pool_strengths must be nonnegative and nonempty")

    base_dir = os.path.dirname(os.path.abspath(path))
    banknote_path = take("banknote_path")
    if dataset == "banknote":
        banknote_path = banknote_path or "data/banknote.csv"
        if not os.path.isabs(banknote_path):
            banknote_path = os.path.normpath(os.path.join(base_dir, banknote_path))
    elif banknote_path is not None:
        raise ConfigError(f"{path}: banknote_path only applies to the banknote dataset")

    outdir = take("outdir", f"results/{dataset}")

    assert not raw, f"unconsumed keys {sorted(raw)}"
    return ExperimentConfig(
        dataset=dataset, explanation=explanation, reward=reward,
        kernels=tuple(kernels), strategies=strategies, rounds=rounds,
        sigma2=sigma2, seeds=seeds, schedule=schedule,
        pool_perturb=pool_perturb, pool_strengths=strengths,
        colors_pool=colors_pool, dataset_seed=dataset_seed,
        banknote_path=banknote_path, tree_depth=tree_depth,
        tree_min_leaf=tree_min_leaf, outdir=outdir, workers=workers,
        gammas=gammas,
    )
