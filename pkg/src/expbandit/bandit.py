"""Bandit round loop: UCB and random arm selection, beta schedules,
regret accounting.

Each round presents a context drawn without replacement, a finite pool
of (explanation, label) arms built from the dataset's ground truths
plus fresh perturbations, and a noisy reward for the chosen arm. The
UCB strategy maximizes posterior mean + sqrt(beta) * posterior std and
feeds every observation back into the GP; the random baseline picks
uniformly and learns nothing.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from expbandit.errors import ConfigError
from expbandit.explanations import perturb
from expbandit.gp import JITTER, GpPosterior
from expbandit.kernels import Triple, TripleBatch
from expbandit.rewards import RewardOracle

STRATEGIES = ("ucb", "random")

# perturbation strengths cycle through this pattern as the pool is built
DEFAULT_STRENGTHS = (1, 2, 3)
DEFAULT_N_PERTURB = 8


# ---------------------------------------------------------------------------
# beta schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaSchedule:
    """Exploration weight per round; see the named constructors."""

    kind: str
    beta: float = 1.0
    a: float = 1.0
    b: float = 0.2
    omega: float = 1.0
    delta: float = 0.05
    gamma: tuple = ()

    @classmethod
    def constant(cls, beta: float) -> "BetaSchedule":
        if beta < 0:
            raise ValueError("beta must be nonnegative")
        return cls("constant", beta=beta)

    @classmethod
    def log_growth(cls, a: float = 1.0, b: float = 0.2) -> "BetaSchedule":
        if a < 0 or b < 0:
            raise ValueError("log-growth coefficients must be nonnegative")
        return cls("log-growth", a=a, b=b)

    @classmethod
    def theorem(cls, omega: float, delta: float, gamma: Sequence[float]) -> "BetaSchedule":
        if delta <= 0:
            raise ValueError("delta must be positive")
        g = tuple(float(v) for v in gamma)
        if any(v < 0 for v in g):
            raise ValueError("information-gain surrogates must be nonnegative")
        return cls("theorem", omega=omega, delta=delta, gamma=g)


def beta_value(schedule: BetaSchedule, t: int) -> float:
    if t < 1:
        raise ValueError("round index starts at 1")
    if schedule.kind == "constant":
        return schedule.beta
    if schedule.kind == "log-growth":
        return schedule.a + schedule.b * math.log(1 + t)
    if schedule.kind == "theorem":
        if t > len(schedule.gamma):
            raise ValueError(f"no information-gain surrogate supplied for round {t}")
        # ln(t / delta) clamps at 0 so early rounds stay nonnegative
        ln = max(math.log(t / schedule.delta), 0.0)
        return 2.0 * schedule.omega ** 2 + 300.0 * schedule.gamma[t - 1] * ln ** 3
    raise ValueError(f"unknown schedule kind {schedule.kind!r}")


# ---------------------------------------------------------------------------
# arm pools
# ---------------------------------------------------------------------------

class Arm(NamedTuple):
    index: int
    explanation: object
    label: int


class ArmPool:
    """Finite candidate set: one arm per (explanation, label) pair."""

    def __init__(self, explanations: Sequence, labels=(0, 1)):
        if not explanations:
            raise ValueError("arm pool must be nonempty")
        variants = {e.variant for e in explanations}
        if len(variants) != 1:
            raise ValueError("arm pool explanations must share one variant")
        if any(y not in (0, 1) for y in labels):
            raise ValueError("arm labels must be 0 or 1")
        self.arms = [
            Arm(i, e, y)
            for i, (e, y) in enumerate((e, y) for e in explanations for y in labels)
        ]
        self.explanations = [a.explanation for a in self.arms]
        self.labels = np.array([a.label for a in self.arms], dtype=np.int64)

    def __len__(self):
        return len(self.arms)

    def __getitem__(self, i) -> Arm:
        return self.arms[i]

    def batch(self, x, vocabulary=None) -> TripleBatch:
        triples = [Triple(x, a.explanation, a.label) for a in self.arms]
        return TripleBatch.from_triples(triples, vocabulary)


def build_pool(base_explanations: Sequence, rng,
               n_perturb: int = DEFAULT_N_PERTURB,
               strengths: Sequence[int] = DEFAULT_STRENGTHS,
               vocabulary=None) -> ArmPool:
    """Dataset-wide ground-truth explanations plus random perturbations
    of them (cycling targets and strengths), deduplicated in order.

    Built once per episode: a fixed arm set lets UCB's variance bonus
    decay, where per-round redraws would present unseen arms forever.
    """
    candidates = dict.fromkeys(base_explanations)
    base = list(base_explanations)
    for i in range(n_perturb):
        target = base[i % len(base)]
        strength = strengths[i % len(strengths)]
        candidates[perturb(target, rng, strength, vocabulary=vocabulary)] = None
    return ArmPool(list(candidates))


# ---------------------------------------------------------------------------
# arm selection
# ---------------------------------------------------------------------------

def select_arm_ucb(gp: GpPosterior, x, pool: ArmPool, beta: float):
    """Arm maximizing mean + sqrt(beta) * std; first index wins ties."""
    batch = pool.batch(x, gp.vocabulary)
    mean = gp.posterior_mean_batch(batch)
    std = np.sqrt(gp.posterior_var_batch(batch))
    scores = mean + math.sqrt(beta) * std
    best = int(np.argmax(scores))
    return pool[best], float(scores[best])


def select_arm_random(pool: ArmPool, rng) -> Arm:
    return pool[int(rng.integers(0, len(pool)))]


def instantaneous_regret(oracle: RewardOracle, cid, pool: ArmPool, chosen: Arm) -> float:
    """Gap to the best pool arm under the noise-free oracle."""
    rewards = oracle.pool_rewards(cid, pool.explanations, pool.labels)
    return float(rewards.max() - rewards[chosen.index])


# ---------------------------------------------------------------------------
# episodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpisodeSpec:
    """One grid cell: everything a single episode needs beyond the seed."""

    kernel: object
    strategy: str
    schedule: BetaSchedule
    rounds: int
    sigma2: float
    n_perturb: int = DEFAULT_N_PERTURB
    strengths: tuple = DEFAULT_STRENGTHS

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if self.rounds < 1:
            raise ConfigError("rounds must be at least 1")
        if self.sigma2 < 0:
            raise ConfigError("sigma2 must be nonnegative")


@dataclass
class RegretLedger:
    """Per-round record of one episode; arrays all share length T."""

    t: np.ndarray
    chosen_index: np.ndarray
    chosen_label: np.ndarray
    noisy_reward: np.ndarray
    true_reward: np.ndarray
    best_reward: np.ndarray
    regret: np.ndarray
    cum_regret: np.ndarray
    label_correct: np.ndarray
    noise: np.ndarray

    def __len__(self):
        return self.t.shape[0]


@dataclass
class Environment:
    """Dataset-side state shared by every episode of one experiment."""

    contexts: np.ndarray            # (n, dx) instance vectors
    oracle: RewardOracle
    base_explanations: list         # distinct ground truths, dataset order
    vocabulary: object = None
    tree: object = None             # banknote ground-truth model, if any
    context_ids: Optional[list] = field(default=None)

    def __post_init__(self):
        if self.context_ids is None:
            self.context_ids = list(range(self.contexts.shape[0]))


def run_episode(spec: EpisodeSpec, seed: int, env: Environment) -> RegretLedger:
    """Play one seeded episode and account every round.

    The rng order is fixed: context permutation, then the pool
    perturbations, then per round the random strategy's draw and the
    reward noise, so ledgers are reproducible bit for bit.
    """
    n = env.contexts.shape[0]
    if spec.rounds > n:
        raise ConfigError(
            f"rounds={spec.rounds} exceeds the {n} available contexts (drawn without replacement)")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)[:spec.rounds]
    pool = build_pool(env.base_explanations, rng,
                      spec.n_perturb, spec.strengths, env.vocabulary)
    noise_scale = math.sqrt(spec.sigma2)
    gp = GpPosterior.prior(spec.kernel, spec.sigma2 if spec.sigma2 > 0 else JITTER,
                           env.vocabulary)

    T = spec.rounds
    ledger = RegretLedger(
        t=np.arange(1, T + 1, dtype=np.int64),
        chosen_index=np.zeros(T, dtype=np.int64),
        chosen_label=np.zeros(T, dtype=np.int64),
        noisy_reward=np.zeros(T),
        true_reward=np.zeros(T),
        best_reward=np.zeros(T),
        regret=np.zeros(T),
        cum_regret=np.zeros(T),
        label_correct=np.zeros(T, dtype=bool),
        noise=np.zeros(T),
    )

    cum = 0.0
    for t in range(1, T + 1):
        cid = env.context_ids[order[t - 1]]
        x = env.contexts[order[t - 1]]
        _, y_gt = env.oracle.ground_truth(cid)
        if spec.strategy == "ucb":
            arm, _ = select_arm_ucb(gp, x, pool, beta_value(spec.schedule, t))
        else:
            arm = select_arm_random(pool, rng)
        rewards = env.oracle.pool_rewards(cid, pool.explanations, pool.labels)
        true_r = float(rewards[arm.index])
        eps = float(rng.normal(0.0, noise_scale)) if spec.sigma2 > 0 else 0.0
        f_t = true_r + eps
        if spec.strategy == "ucb":
            gp = gp.append_observation(Triple(x, arm.explanation, arm.label), f_t)

        i = t - 1
        cum += float(rewards.max()) - true_r
        ledger.chosen_index[i] = arm.index
        ledger.chosen_label[i] = arm.label
        ledger.noisy_reward[i] = f_t
        ledger.true_reward[i] = true_r
        ledger.best_reward[i] = float(rewards.max())
        ledger.regret[i] = float(rewards.max()) - true_r
        ledger.cum_regret[i] = cum
        ledger.label_correct[i] = arm.label == int(y_gt)
        ledger.noise[i] = eps
    return ledger
