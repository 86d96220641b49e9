"""Shared factories for random triples of every explanation variant."""

import numpy as np
import pytest

from expbandit.explanations import (
    Condition,
    ConditionVocabulary,
    Importance,
    Ranking,
    Relevance,
    Trace,
)
from expbandit.kernels import Triple


def random_relevance(rng, d=6):
    bits = rng.integers(0, 2, size=d)
    if not bits.any():
        bits[int(rng.integers(d))] = 1
    return Relevance(tuple(int(b) for b in bits))


def random_importance(rng, d=6):
    return Importance(tuple(float(v) for v in rng.choice((-1.0, 0.0, 1.0), size=d)))


def random_ranking(rng, d=5):
    return Ranking(tuple(int(p) for p in rng.permutation(d)))


def make_vocabulary(n=8):
    conds = [Condition.make(i % 3, 0.25 * i - 1.0, "le" if i % 2 else "gt")
             for i in range(n)]
    return ConditionVocabulary(conds)


def random_trace(rng, vocabulary, max_len=5):
    k = int(rng.integers(1, max_len + 1))
    picks = rng.choice(len(vocabulary), size=min(k, len(vocabulary)), replace=False)
    conds = list(vocabulary)
    return Trace(tuple(conds[i] for i in picks))


_MAKERS = {
    "relevance": random_relevance,
    "importance": random_importance,
    "ranking": random_ranking,
}


def random_triples(rng, n, variant="relevance", dx=4, vocabulary=None):
    """n random triples sharing one explanation variant."""
    out = []
    for _ in range(n):
        x = rng.normal(size=dx)
        if variant == "trace":
            z = random_trace(rng, vocabulary)
        else:
            z = _MAKERS[variant](rng)
        out.append(Triple(x, z, int(rng.integers(0, 2))))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def vocabulary():
    return make_vocabulary()
