"""Contextual GP bandit that learns predictions and explanations jointly.

A learner repeatedly sees an instance, proposes a (explanation, label)
arm from a finite pool, and receives a noisy similarity reward against
the ground truth. A Gaussian process over (instance, explanation,
label) triples drives a UCB rule; kernels compose per part through
direct sums and tensor products.
"""

from expbandit.bandit import (
    ArmPool,
    BetaSchedule,
    Environment,
    EpisodeSpec,
    RegretLedger,
    beta_value,
    build_pool,
    instantaneous_regret,
    run_episode,
    select_arm_random,
    select_arm_ucb,
)
from expbandit.config import ExperimentConfig, parse_config
from expbandit.errors import ConfigError, DataFormatError, ExpBanditError, NumericalError
from expbandit.explanations import (
    Condition,
    ConditionVocabulary,
    Importance,
    Ranking,
    Relevance,
    Trace,
    perturb,
    vectorize,
)
from expbandit.gp import GpPosterior
from expbandit.harness import AggregateCurve, build_environment, emit_csv, emit_plot, run_grid
from expbandit.kernels import (
    BaseKernel,
    CompositeKernel,
    Triple,
    TripleBatch,
    compose_product,
    compose_sum,
    gram,
    parse_kernel,
    prod_kernel,
    sum_kernel,
)
from expbandit.rewards import (
    RewardOracle,
    reward_cosine_signed,
    reward_hamming_signed,
    reward_jaccard_signed,
    reward_kendall_signed,
    reward_lcs_signed,
)

__version__ = "0.1.0"
