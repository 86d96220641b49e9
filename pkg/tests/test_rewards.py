"""Signed reward values, the pooled oracle, and its persistence format."""

import numpy as np
import pytest

from expbandit.errors import DataFormatError
from expbandit.explanations import (
    Condition,
    ConditionVocabulary,
    Importance,
    Ranking,
    Relevance,
    Trace,
)
from expbandit.rewards import (
    RewardOracle,
    reward_cosine_signed,
    reward_hamming_signed,
    reward_jaccard_signed,
    reward_kendall_signed,
    reward_lcs_signed,
)
from tests.conftest import make_vocabulary

# ---------------------------------------------------------------------------
# scalar rewards
# ---------------------------------------------------------------------------


def test_cosine_exact_match_and_sign():
    assert reward_cosine_signed([1, 0, 1], 1, [1, 0, 1], 1) == pytest.approx(1.0)
    assert reward_cosine_signed([1, 0, 1], 1, [1, 0, 1], 0) == pytest.approx(-1.0)
    # orthogonal masks score zero either way
    assert reward_cosine_signed([1, 0], 0, [0, 1], 0) == pytest.approx(0.0)


def test_cosine_rejects_zero_norm():
    with pytest.raises(ValueError):
        reward_cosine_signed([0, 0], 1, [1, 0], 1)
    with pytest.raises(ValueError):
        reward_cosine_signed([1, 0], 1, [0, 0], 1)


def test_cosine_signed_importance_vectors():
    # opposite signed masks are anti-aligned
    assert reward_cosine_signed([1, 0, -1], 1, [-1, 0, 1], 1) == pytest.approx(-1.0)
    assert reward_cosine_signed([1, 0, -1], 1, [-1, 0, 1], 0) == pytest.approx(1.0)


def test_hamming_counts_agreeing_positions():
    assert reward_hamming_signed([1, 0, 1, 0], 1, [1, 1, 1, 0], 1) == pytest.approx(0.75)
    assert reward_hamming_signed([1, 0, 1, 0], 1, [1, 1, 1, 0], 0) == pytest.approx(-0.75)


def test_jaccard_two_of_three_overlap():
    gt = {1, 2, 3}
    assert reward_jaccard_signed(gt, 1, {2, 3}, 1) == pytest.approx(2.0 / 3.0)
    # same overlap with the wrong label flips to -2/3... then shrink to -0.5
    assert reward_jaccard_signed(gt, 1, {2, 3, 4}, 0) == pytest.approx(-0.5)
    assert reward_jaccard_signed(set(), 1, set(), 1) == 1.0


def test_kendall_reversed_ranking_scores_zero():
    assert reward_kendall_signed((0, 1, 2), 1, (2, 1, 0), 1) == pytest.approx(0.0)
    assert reward_kendall_signed((0, 1, 2), 1, (0, 2, 1), 0) == pytest.approx(-2.0 / 3.0)


def test_lcs_normalizes_by_ground_truth_length():
    # gt (a, b, c) vs prediction (a, c): common subsequence length 2
    assert reward_lcs_signed(["a", "b", "c"], 1, ["a", "c"], 1) == pytest.approx(2.0 / 3.0)
    # longer predictions can recover the whole ground truth
    assert reward_lcs_signed(["a", "b"], 1, ["x", "a", "y", "b"], 1) == pytest.approx(1.0)
    assert reward_lcs_signed(["a", "b"], 0, ["a", "b"], 1) == pytest.approx(-1.0)
    assert reward_lcs_signed(["a"], 1, [], 1) == pytest.approx(0.0)


def test_lcs_rejects_empty_ground_truth():
    with pytest.raises(ValueError):
        reward_lcs_signed([], 1, ["a"], 1)


def test_lcs_brute_force_small():
    # exhaustive check over every subsequence, tiny alphabet
    from itertools import combinations

    def brute(a, b):
        best = 0
        for k in range(len(a), 0, -1):
            for picks in combinations(range(len(a)), k):
                sub = [a[i] for i in picks]
                it = iter(b)
                if all(c in it for c in sub):
                    best = k
                    break
            if best:
                break
        return best

    rng = np.random.default_rng(5)
    for _ in range(200):
        a = list(rng.integers(0, 4, size=rng.integers(1, 6)))
        b = list(rng.integers(0, 4, size=rng.integers(0, 6)))
        got = reward_lcs_signed(a, 1, b, 1)
        assert got == pytest.approx(brute(a, b) / len(a))


# ---------------------------------------------------------------------------
# pooled oracle
# ---------------------------------------------------------------------------


def test_oracle_exact_arm_scores_one():
    truth = {0: (Relevance((1, 0, 1)), 1)}
    oracle = RewardOracle("cosine", truth)
    z, y = oracle.ground_truth(0)
    assert oracle.true_reward(0, z, y) == pytest.approx(1.0)
    with pytest.raises(KeyError):
        oracle.ground_truth(99)


def test_oracle_rejects_unknown_kind_and_variant_mismatch():
    truth = {0: (Relevance((1, 0)), 1)}
    with pytest.raises(ValueError):
        RewardOracle("euclidean", truth)
    oracle = RewardOracle("cosine", truth)
    with pytest.raises(ValueError):
        oracle.true_reward(0, Ranking((0, 1)), 1)


@pytest.mark.parametrize("kind,variant", [
    ("cosine", "relevance"),
    ("hamming", "relevance"),
    ("cosine", "importance"),
    ("jaccard", "relevance"),
    ("kendall", "ranking"),
])
def test_pool_rewards_match_scalar_loop(kind, variant, rng):
    from tests.conftest import random_importance, random_ranking, random_relevance
    maker = {"relevance": random_relevance, "importance": random_importance,
             "ranking": random_ranking}[variant]
    gt = maker(rng)
    oracle = RewardOracle(kind, {0: (gt, 1)})
    pool = [maker(rng) for _ in range(6)] + [gt]
    labels = [i % 2 for i in range(7)]
    batched = oracle.pool_rewards(0, pool, labels)
    for i, (z, y) in enumerate(zip(pool, labels)):
        assert batched[i] == pytest.approx(oracle.true_reward(0, z, y), abs=1e-12)


@pytest.mark.parametrize("kind", ["jaccard", "lcs"])
def test_pool_rewards_traces_match_scalar(kind, rng):
    from tests.conftest import random_trace
    vocab = make_vocabulary()
    gt = random_trace(rng, vocab)
    oracle = RewardOracle(kind, {7: (gt, 0)}, vocab)
    pool = [random_trace(rng, vocab) for _ in range(5)] + [gt, Trace(())]
    labels = [i % 2 for i in range(7)]
    batched = oracle.pool_rewards(7, pool, labels)
    for i, (z, y) in enumerate(zip(pool, labels)):
        assert batched[i] == pytest.approx(oracle.true_reward(7, z, y), abs=1e-12)


def test_pool_rewards_known_lcs_values():
    c = [Condition.make(i, float(i), "le") for i in range(3)]
    vocab = ConditionVocabulary(c)
    gt = Trace((c[0], c[1], c[2]))
    oracle = RewardOracle("lcs", {0: (gt, 1)}, vocab)
    pool = [gt, Trace((c[0], c[2])), Trace((c[1],))]
    out = oracle.pool_rewards(0, pool, [1, 1, 0])
    np.testing.assert_allclose(out, [1.0, 2.0 / 3.0, -1.0 / 3.0])


def test_oracle_save_load_roundtrip(tmp_path, rng, vocabulary):
    from tests.conftest import random_trace
    truth = {i: (random_trace(rng, vocabulary), i % 2) for i in range(5)}
    oracle = RewardOracle("jaccard", truth, vocabulary)
    path = tmp_path / "truth.tsv"
    oracle.save(path)
    loaded = RewardOracle.load(path, vocabulary)
    assert loaded.kind == "jaccard"
    assert loaded.truth == oracle.truth


def test_oracle_save_load_all_variants(tmp_path):
    cases = [
        ("cosine", Relevance((1, 0, 1))),
        ("cosine", Importance((-1.0, 0.0, 1.0))),
        ("kendall", Ranking((1, 0, 2))),
    ]
    for kind, z in cases:
        oracle = RewardOracle(kind, {3: (z, 1)})
        path = tmp_path / f"{z.variant}.tsv"
        oracle.save(path)
        assert RewardOracle.load(path).truth[3] == (z, 1)


def test_oracle_load_errors_carry_line_numbers(tmp_path):
    bad = tmp_path / "bad.tsv"
    bad.write_text("#reward\tcosine\n0\t1\trelevance\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="bad.tsv:2"):
        RewardOracle.load(bad)
    bad.write_text("#reward\tcosine\n0\t1\trelevance\t1,2,x\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="bad.tsv:2"):
        RewardOracle.load(bad)
    bad.write_text("0\t1\trelevance\t1,0\n", encoding="utf-8")
    with pytest.raises(DataFormatError, match="missing"):
        RewardOracle.load(bad)
