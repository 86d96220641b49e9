"""Explanation variants and the operations the bandit needs on them.

Four variants are supported: relevance masks (0-1 per feature), signed
importance weights, feature rankings (permutations), and traces (ordered
feature-condition sequences extracted from a tree). Explanations are
immutable and hashable so candidate pools can be deduplicated.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

SIG_DIGITS = 6  # threshold quantization for condition identity


def quantize_threshold(value: float) -> float:
    """Round to 6 significant digits so float noise cannot split a
    condition into distinct identifiers."""
    return float(f"{float(value):.{SIG_DIGITS}g}")


class Condition(NamedTuple):
    """One branch decision: feature `op` threshold, with op in {le, gt}."""

    feature: int
    threshold: float
    op: str

    @staticmethod
    def make(feature, threshold, op):
        if op not in ("le", "gt"):
            raise ValueError(f"condition op must be 'le' or 'gt', got {op!r}")
        return Condition(int(feature), quantize_threshold(threshold), op)


@dataclass(frozen=True)
class Relevance:
    """0-1 mask over features marking the ones deemed relevant."""

    bits: tuple

    variant = "relevance"

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("relevance entries must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @property
    def payload(self):
        return self.bits

    def active_set(self) -> frozenset:
        return frozenset(i for i, b in enumerate(self.bits) if b)


@dataclass(frozen=True)
class Importance:
    """Signed per-feature weights in [-1, 1]; ground truths use {-1, 0, +1}."""

    weights: tuple

    variant = "importance"

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        if any(w < -1.0 or w > 1.0 for w in weights):
            raise ValueError("importance entries must lie in [-1, 1]")
        object.__setattr__(self, "weights", weights)

    @property
    def payload(self):
        return self.weights


@dataclass(frozen=True)
class Ranking:
    """Permutation over features; entry i is the position of feature i."""

    positions: tuple

    variant = "ranking"

    def __post_init__(self):
        positions = tuple(int(p) for p in self.positions)
        if len(positions) < 2:
            raise ValueError("rankings need at least 2 features")
        if sorted(positions) != list(range(len(positions))):
            raise ValueError("ranking positions must be a permutation of 0..d-1")
        object.__setattr__(self, "positions", positions)

    @property
    def payload(self):
        return self.positions


@dataclass(frozen=True)
class Trace:
    """Ordered root-to-leaf condition sequence; conditions are unique."""

    conditions: tuple

    variant = "trace"

    def __post_init__(self):
        conds = tuple(self.conditions)
        if any(not isinstance(c, Condition) for c in conds):
            raise ValueError("trace entries must be Condition instances")
        if len(set(conds)) != len(conds):
            raise ValueError("trace conditions must be unique")
        object.__setattr__(self, "conditions", conds)

    @property
    def payload(self):
        return self.conditions

    def condition_set(self) -> frozenset:
        return frozenset(self.conditions)


Explanation = Union[Relevance, Importance, Ranking, Trace]


class ConditionVocabulary:
    """Ordered global set of conditions a trace may draw from."""

    def __init__(self, conditions: Sequence[Condition]):
        ordered = []
        seen = set()
        for c in conditions:
            if not isinstance(c, Condition):
                raise ValueError("vocabulary entries must be Condition instances")
            if c not in seen:
                seen.add(c)
                ordered.append(c)
        self._conditions = tuple(ordered)
        self._index = {c: i for i, c in enumerate(ordered)}

    def __len__(self):
        return len(self._conditions)

    def __iter__(self):
        return iter(self._conditions)

    def __contains__(self, cond):
        return cond in self._index

    def index(self, cond: Condition) -> int:
        try:
            return self._index[cond]
        except KeyError:
            raise ValueError(f"condition {cond} not in vocabulary") from None

    def membership(self, conditions) -> np.ndarray:
        """0-1 vector over the vocabulary marking the given conditions."""
        out = np.zeros(len(self._conditions), dtype=np.float64)
        for c in conditions:
            out[self.index(c)] = 1.0
        return out

    def ids(self, conditions) -> np.ndarray:
        return np.array([self.index(c) for c in conditions], dtype=np.int64)


def vectorize(explanation: Explanation, vocabulary: Optional[ConditionVocabulary] = None) -> np.ndarray:
    """Map an explanation to the real vector the RBF/linear kernels see.

    Relevance and importance pass through, rankings become normalized
    position vectors, traces become 0-1 membership vectors over the
    global condition vocabulary.
    """
    if isinstance(explanation, (Relevance, Importance)):
        return np.asarray(explanation.payload, dtype=np.float64)
    if isinstance(explanation, Ranking):
        d = len(explanation.positions)
        return np.asarray(explanation.positions, dtype=np.float64) / (d - 1)
    if isinstance(explanation, Trace):
        if vocabulary is None:
            raise ValueError("vectorizing a trace requires a condition vocabulary")
        return vocabulary.membership(explanation.conditions)
    raise ValueError(f"unknown explanation type: {type(explanation).__name__}")


def perturb(
    explanation: Explanation,
    rng: np.random.Generator,
    strength: int,
    vocabulary: Optional[ConditionVocabulary] = None,
) -> Explanation:
    """Apply ``strength`` random variant-preserving edits.

    Relevance: flip distinct bits (never producing an all-zero mask);
    importance: resample entries within {-1, 0, +1}; ranking: adjacent
    transpositions; trace: condition replacements from the vocabulary
    and position swaps.
    """
    if strength < 0:
        raise ValueError("strength must be >= 0")
    if strength == 0:
        return explanation

    if isinstance(explanation, Relevance):
        return _perturb_relevance(explanation, rng, strength)
    if isinstance(explanation, Importance):
        return _perturb_importance(explanation, rng, strength)
    if isinstance(explanation, Ranking):
        return _perturb_ranking(explanation, rng, strength)
    if isinstance(explanation, Trace):
        return _perturb_trace(explanation, rng, strength, vocabulary)
    raise ValueError(f"unknown explanation type: {type(explanation).__name__}")


def _perturb_relevance(explanation, rng, strength):
    bits = list(explanation.bits)
    d = len(bits)
    k = min(strength, d)
    for _ in range(1000):
        picks = rng.choice(d, size=k, replace=False)
        flipped = bits.copy()
        for p in picks:
            flipped[p] ^= 1
        if any(flipped):
            return Relevance(tuple(flipped))
    raise ValueError("cannot flip bits without producing an all-zero mask")


def _perturb_importance(explanation, rng, strength):
    levels = (-1.0, 0.0, 1.0)
    weights = list(explanation.weights)
    d = len(weights)
    picks = rng.choice(d, size=min(strength, d), replace=False)
    for p in picks:
        options = [v for v in levels if v != weights[p]]
        weights[p] = options[int(rng.integers(len(options)))]
    return Importance(tuple(weights))


def _perturb_ranking(explanation, rng, strength):
    positions = list(explanation.positions)
    d = len(positions)
    # invert to feature-by-rank, swap adjacent ranks, invert back
    by_rank = [0] * d
    for feat, pos in enumerate(positions):
        by_rank[pos] = feat
    for _ in range(strength):
        r = int(rng.integers(d - 1))
        by_rank[r], by_rank[r + 1] = by_rank[r + 1], by_rank[r]
    out = [0] * d
    for pos, feat in enumerate(by_rank):
        out[feat] = pos
    return Ranking(tuple(out))


def _perturb_trace(explanation, rng, strength, vocabulary):
    conds = list(explanation.conditions)
    for _ in range(strength):
        can_swap = len(conds) >= 2
        candidates = None
        if vocabulary is not None:
            present = set(conds)
            candidates = [c for c in vocabulary if c not in present]
        do_replace = bool(candidates) and (not can_swap or rng.random() < 0.5)
        if do_replace:
            i = int(rng.integers(len(conds))) if conds else 0
            new = candidates[int(rng.integers(len(candidates)))]
            if conds:
                conds[i] = new
            else:
                conds.append(new)
        elif can_swap:
            i, j = rng.choice(len(conds), size=2, replace=False)
            conds[i], conds[j] = conds[j], conds[i]
    return Trace(tuple(conds))
