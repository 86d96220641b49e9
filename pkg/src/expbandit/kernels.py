"""Kernel algebra over (instance, explanation, label) triples.

Base kernels (RBF, linear, set-Jaccard, Kendall) attach to exactly one
part of a triple; expressions combine them with a direct sum (values
add) or tensor product (values multiply) over disjoint parts. Batched
evaluation routes through the selected accel backend; the scalar
``pair`` path uses plain numpy and doubles as a reference for tests.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from expbandit import accel
from expbandit.errors import ConfigError
from expbandit.explanations import (
    ConditionVocabulary,
    Explanation,
    Importance,
    Ranking,
    Relevance,
    Trace,
    vectorize,
)

PARTS = ("instance", "explanation", "label")
BASE_KINDS = ("rbf", "linear", "jaccard", "kendall")


class Triple(NamedTuple):
    """One bandit observation point: context, explanation, label."""

    x: np.ndarray
    explanation: Explanation
    label: int


# ---------------------------------------------------------------------------
# scalar base-kernel evaluations
# ---------------------------------------------------------------------------

def eval_rbf(u, v, gamma: float) -> float:
    """exp(-gamma * ||u - v||^2); equals 1 at zero distance."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    diff = u - v
    return float(np.exp(-gamma * np.dot(diff, diff)))


def eval_set_jaccard(a, b) -> float:
    """|a & b| / |a | b|; two empty sets count as identical (1.0)."""
    sa, sb = set(a), set(b)
    union = len(sa | sb)
    if union == 0:
        return 1.0
    return len(sa & sb) / union


def eval_kendall(a, b) -> float:
    """Fraction of concordant index pairs between two rank vectors.

    Inputs assign a rank to each of n >= 2 items; both must use the same
    rank set. Returns 1 - (discordant pairs) / (n(n-1)/2).
    """
    ra, rb = list(a), list(b)
    n = len(ra)
    if n != len(rb):
        raise ValueError("rank vectors must have equal length")
    if n < 2:
        raise ValueError("need at least 2 items")
    if len(set(ra)) != n or set(ra) != set(rb):
        raise ValueError("inputs must be permutations of the same item set")
    discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            if (ra[i] - ra[j]) * (rb[i] - rb[j]) < 0:
                discordant += 1
    return 1.0 - discordant / (n * (n - 1) / 2)


def eval_linear(u, v) -> float:
    """Plain dot product; normalize inputs if bounded variance is needed."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.dot(u, v))


# ---------------------------------------------------------------------------
# packed batches of triples
# ---------------------------------------------------------------------------

class TripleBatch:
    """Columnar view of a homogeneous triple list for batched kernels."""

    def __init__(self, x, y, variant, vec=None, bits=None, positions=None, vocabulary=None):
        self.x = x
        self.y = y
        self.variant = variant
        self.vec = vec
        self.bits = bits
        self.positions = positions
        self.vocabulary = vocabulary

    def __len__(self):
        return self.x.shape[0]

    @staticmethod
    def from_triples(triples: Sequence[Triple], vocabulary: Optional[ConditionVocabulary] = None):
        if not triples:
            raise ValueError("triple list must be nonempty")
        variants = {t.explanation.variant for t in triples}
        if len(variants) != 1:
            raise ValueError(f"heterogeneous explanation variants in one batch: {sorted(variants)}")
        variant = variants.pop()
        try:
            x = np.ascontiguousarray([np.asarray(t.x, dtype=np.float64) for t in triples])
        except ValueError as exc:
            raise ValueError("instance vectors must share one dimension") from exc
        if x.ndim != 2:
            raise ValueError("instance vectors must be 1-dimensional")
        y = np.ascontiguousarray([[float(t.label)] for t in triples])

        vec = bits = positions = None
        expls = [t.explanation for t in triples]
        if variant == "trace" and vocabulary is None:
            raise ValueError("trace batches require a condition vocabulary")
        vec = np.ascontiguousarray([vectorize(e, vocabulary) for e in expls])
        if variant == "relevance":
            bits = np.ascontiguousarray(vec, dtype=np.uint8)
        elif variant == "trace":
            bits = np.ascontiguousarray(vec != 0.0, dtype=np.uint8)
        elif variant == "ranking":
            positions = np.ascontiguousarray([e.positions for e in expls], dtype=np.int64)
        return TripleBatch(x, y, variant, vec, bits, positions, vocabulary)

    @staticmethod
    def concat(a: "TripleBatch", b: "TripleBatch") -> "TripleBatch":
        _check_compat(a, b)

        def cat(u, v):
            return None if u is None else np.ascontiguousarray(np.concatenate([u, v]))

        return TripleBatch(
            cat(a.x, b.x), cat(a.y, b.y), a.variant,
            cat(a.vec, b.vec), cat(a.bits, b.bits), cat(a.positions, b.positions),
            a.vocabulary,
        )


def _check_compat(a: TripleBatch, b: TripleBatch):
    if a.variant != b.variant:
        raise ValueError(f"explanation variant mismatch: {a.variant} vs {b.variant}")
    if a.x.shape[1] != b.x.shape[1]:
        raise ValueError("instance dimension mismatch")
    if a.vec is not None and b.vec is not None and a.vec.shape[1] != b.vec.shape[1]:
        raise ValueError("explanation dimension mismatch")


# ---------------------------------------------------------------------------
# kernel expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseKernel:
    """Leaf kernel attached to one part of the triple."""

    kind: str
    part: str
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in BASE_KINDS:
            raise ValueError(f"unknown base kernel {self.kind!r}")
        if self.part not in PARTS:
            raise ValueError(f"unknown part selector {self.part!r}")
        if self.kind in ("jaccard", "kendall") and self.part != "explanation":
            raise ValueError(f"{self.kind} kernels apply to the explanation part only")
        if self.gamma is not None:
            if self.kind != "rbf":
                raise ValueError(f"gamma is only meaningful for rbf, not {self.kind}")
            if self.gamma <= 0:
                raise ValueError("gamma must be positive")

    @property
    def parts(self) -> frozenset:
        return frozenset((self.part,))

    def _gamma_for(self, dim: int) -> float:
        return self.gamma if self.gamma is not None else 1.0 / dim

    # scalar path, kept independent of the accel backend
    def pair(self, t1: Triple, t2: Triple, vocabulary=None) -> float:
        if self.part == "instance":
            u, v = np.asarray(t1.x, dtype=np.float64), np.asarray(t2.x, dtype=np.float64)
        elif self.part == "label":
            u, v = np.array([float(t1.label)]), np.array([float(t2.label)])
        else:
            e1, e2 = t1.explanation, t2.explanation
            if e1.variant != e2.variant:
                raise ValueError("explanation variant mismatch")
            if self.kind == "jaccard":
                return eval_set_jaccard(*(_as_set(e) for e in (e1, e2)))
            if self.kind == "kendall":
                return eval_kendall(e1.positions, e2.positions)
            u, v = vectorize(e1, vocabulary), vectorize(e2, vocabulary)
        if self.kind == "rbf":
            return eval_rbf(u, v, self._gamma_for(u.shape[0]))
        if self.kind == "linear":
            return eval_linear(u, v)
        if self.kind == "jaccard":
            return eval_set_jaccard(np.nonzero(u)[0], np.nonzero(v)[0])
        raise ValueError(f"{self.kind} kernel is not defined on part {self.part!r}")

    def cross(self, a: TripleBatch, b: TripleBatch) -> np.ndarray:
        _check_compat(a, b)
        if self.kind == "jaccard":
            if a.bits is None:
                raise ValueError("jaccard kernels need relevance or trace explanations")
            return accel.jaccard_cross(a.bits, b.bits)
        if self.kind == "kendall":
            if a.positions is None:
                raise ValueError("kendall kernels need ranking explanations")
            return accel.kendall_cross(a.positions, b.positions)
        ua, ub = self._vectors(a), self._vectors(b)
        if self.kind == "rbf":
            return accel.rbf_cross(ua, ub, self._gamma_for(ua.shape[1]))
        return accel.linear_cross(ua, ub)

    def diag(self, a: TripleBatch) -> np.ndarray:
        if self.kind == "linear":
            u = self._vectors(a)
            return np.einsum("ij,ij->i", u, u)
        return np.ones(len(a), dtype=np.float64)

    def _vectors(self, batch: TripleBatch) -> np.ndarray:
        if self.part == "instance":
            return batch.x
        if self.part == "label":
            return batch.y
        if batch.vec is None:
            raise ValueError(f"{batch.variant} explanations have no vector form")
        return batch.vec


def _as_set(explanation):
    if isinstance(explanation, Relevance):
        return explanation.active_set()
    if isinstance(explanation, Trace):
        return explanation.condition_set()
    raise ValueError(f"jaccard kernels are undefined on {explanation.variant} explanations")


@dataclass(frozen=True)
class CompositeKernel:
    """Direct sum or tensor product of two kernels over disjoint parts."""

    op: str
    left: "KernelExpr"
    right: "KernelExpr"

    def __post_init__(self):
        if self.op not in ("sum", "product"):
            raise ValueError(f"unknown composition operator {self.op!r}")
        overlap = self.left.parts & self.right.parts
        if overlap:
            raise ValueError(f"overlapping part selectors: {sorted(overlap)}")

    @property
    def parts(self) -> frozenset:
        return self.left.parts | self.right.parts

    def pair(self, t1, t2, vocabulary=None):
        lv = self.left.pair(t1, t2, vocabulary)
        rv = self.right.pair(t1, t2, vocabulary)
        return lv + rv if self.op == "sum" else lv * rv

    def cross(self, a, b):
        lv = self.left.cross(a, b)
        rv = self.right.cross(a, b)
        return lv + rv if self.op == "sum" else lv * rv

    def diag(self, a):
        lv = self.left.diag(a)
        rv = self.right.diag(a)
        return lv + rv if self.op == "sum" else lv * rv


KernelExpr = object  # BaseKernel | CompositeKernel; duck-typed


def compose_sum(k, k_other) -> CompositeKernel:
    """Direct sum: values add; operands must cover disjoint parts."""
    return CompositeKernel("sum", k, k_other)


def compose_product(k, k_other) -> CompositeKernel:
    """Tensor product: values multiply; operands must cover disjoint parts."""
    return CompositeKernel("product", k, k_other)


def gram(kernel, triples: Sequence[Triple], vocabulary=None) -> np.ndarray:
    """Kernel matrix over a triple list, symmetrized against float noise."""
    batch = TripleBatch.from_triples(triples, vocabulary)
    k = kernel.cross(batch, batch)
    return (k + k.T) / 2.0


# ---------------------------------------------------------------------------
# construction from config text
# ---------------------------------------------------------------------------

# base kernel appropriate to each explanation payload
EXPLANATION_LEAVES = {"relevance": "rbf", "importance": "rbf",
                      "trace": "jaccard", "ranking": "kendall"}


def _explanation_leaf(kind: str, gamma) -> BaseKernel:
    # gamma only applies to rbf leaves; set kernels take no bandwidth
    if kind == "rbf":
        return BaseKernel("rbf", "explanation", gamma)
    return BaseKernel(kind, "explanation", None)


def prod_kernel(gammas: Optional[dict] = None, explanation_kind: str = "rbf") -> CompositeKernel:
    """Product of one kernel per part. The explanation leaf defaults to
    RBF; pass ``jaccard`` or ``kendall`` for set and ranking payloads."""
    g = gammas or {}
    return compose_product(
        compose_product(
            BaseKernel("rbf", "instance", g.get("instance")),
            _explanation_leaf(explanation_kind, g.get("explanation")),
        ),
        BaseKernel("rbf", "label", g.get("label")),
    )


def sum_kernel(gammas: Optional[dict] = None, explanation_kind: str = "rbf") -> CompositeKernel:
    """Sum of instance and explanation kernels, times a label RBF."""
    g = gammas or {}
    return compose_product(
        compose_sum(
            BaseKernel("rbf", "instance", g.get("instance")),
            _explanation_leaf(explanation_kind, g.get("explanation")),
        ),
        BaseKernel("rbf", "label", g.get("label")),
    )


def parse_kernel(text: str, gammas: Optional[dict] = None, explanation_kind: str = "rbf"):
    """Parse a kernel expression such as ``product(rbf@instance,
    rbf(gamma=0.2)@explanation, rbf@label)``; the names ``prod`` and
    ``sum`` select the two standard compositions, with the explanation
    leaf chosen by ``explanation_kind``."""
    stripped = text.strip().lower()
    if stripped == "prod":
        return prod_kernel(gammas, explanation_kind)
    if stripped == "sum":
        return sum_kernel(gammas, explanation_kind)
    parser = _KernelParser(text, gammas or {})
    try:
        expr = parser.parse_expr()
        parser.expect_end()
    except ValueError as exc:
        raise ConfigError(f"invalid kernel expression {text!r}: {exc}") from None
    return expr


class _KernelParser:
    def __init__(self, text, gammas):
        self.text = text
        self.pos = 0
        self.gammas = gammas

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self):
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _take_word(self):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        if start == self.pos:
            raise ValueError(f"expected a name at position {start}")
        return self.text[start:self.pos]

    def _expect(self, ch):
        if self._peek() != ch:
            raise ValueError(f"expected {ch!r} at position {self.pos}")
        self.pos += 1

    def expect_end(self):
        self._skip_ws()
        if self.pos != len(self.text):
            raise ValueError(f"unexpected trailing text at position {self.pos}")

    def parse_expr(self):
        word = self._take_word()
        if self._peek() == "(" and word in ("sum", "product"):
            self._expect("(")
            children = [self.parse_expr()]
            while self._peek() == ",":
                self._expect(",")
                children.append(self.parse_expr())
            self._expect(")")
            if len(children) < 2:
                raise ValueError(f"{word} needs at least two operands")
            expr = children[0]
            for child in children[1:]:
                expr = CompositeKernel(word, expr, child)
            return expr
        return self._parse_leaf(word)

    def _parse_leaf(self, kind):
        params = {}
        if self._peek() == "(":
            self._expect("(")
            while True:
                name = self._take_word()
                self._expect("=")
                params[name] = self._take_number()
                if self._peek() != ",":
                    break
                self._expect(",")
            self._expect(")")
        self._expect("@")
        part = self._take_word()
        unknown = set(params) - {"gamma"}
        if unknown:
            raise ValueError(f"unknown kernel parameters {sorted(unknown)}")
        if "gamma" in params:
            gamma = params["gamma"]
        elif kind == "rbf":
            gamma = self.gammas.get(part)
        else:
            gamma = None
        return BaseKernel(kind, part, gamma)

    def _take_number(self):
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and (self.text[self.pos].isdigit() or self.text[self.pos] in ".eE+-"):
            self.pos += 1
        try:
            return float(self.text[start:self.pos])
        except ValueError:
            raise ValueError(f"expected a number at position {start}") from None
