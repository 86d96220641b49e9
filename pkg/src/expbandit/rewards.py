"""Signed similarity rewards and the ground-truth reward oracle.

Every reward compares a candidate (explanation, label) arm against the
ground truth for one context and lands in [-1, 1]: a similarity in
[0, 1] times +1 when the labels agree and -1 when they do not. The
exact ground-truth arm always scores 1.
"""

from typing import Optional, Sequence

import numpy as np

from expbandit import accel
from expbandit.errors import DataFormatError
from expbandit.explanations import (
    Condition,
    ConditionVocabulary,
    Importance,
    Ranking,
    Relevance,
    Trace,
    vectorize,
)
from expbandit.kernels import eval_kendall, eval_set_jaccard

REWARD_KINDS = ("cosine", "hamming", "jaccard", "kendall", "lcs")


def _label_sign(y_gt, y) -> float:
    return 1.0 if int(y) == int(y_gt) else -1.0


def reward_cosine_signed(z_gt, y_gt, z, y) -> float:
    """Cosine similarity with a label-agreement sign; zero vectors are
    rejected because their cosine is undefined."""
    u = np.asarray(z_gt, dtype=np.float64)
    v = np.asarray(z, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine reward is undefined for zero-norm explanations")
    return float(np.dot(u, v) / (nu * nv)) * _label_sign(y_gt, y)


def reward_hamming_signed(z_gt, y_gt, z, y) -> float:
    """1 - (Hamming distance)/d on 0-1 vectors, with the label sign."""
    u = np.asarray(z_gt, dtype=np.float64)
    v = np.asarray(z, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return float(np.mean(u == v)) * _label_sign(y_gt, y)


def reward_jaccard_signed(gt_conditions, y_gt, conditions, y) -> float:
    """Order-free trace overlap: Jaccard of the two condition sets."""
    return eval_set_jaccard(gt_conditions, conditions) * _label_sign(y_gt, y)


def _as_set(explanation):
    # jaccard rewards accept relevance masks (active pixels) and traces
    if isinstance(explanation, Relevance):
        return explanation.active_set()
    return explanation.condition_set()


def reward_kendall_signed(rank_gt, y_gt, rank, y) -> float:
    """Concordant-pair fraction between two rankings, with the label sign."""
    return eval_kendall(rank_gt, rank) * _label_sign(y_gt, y)


def reward_lcs_signed(gt_sequence, y_gt, sequence, y) -> float:
    """Longest common subsequence length over the ground-truth length."""
    a = list(gt_sequence)
    b = list(sequence)
    if not a:
        raise ValueError("ground-truth trace must be nonempty for the LCS reward")
    prev = [0] * (len(b) + 1)
    for item in a:
        cur = [0]
        for j, other in enumerate(b, start=1):
            if item == other:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(cur[j - 1], prev[j]))
        prev = cur
    return prev[-1] / len(a) * _label_sign(y_gt, y)


class RewardOracle:
    """Ground-truth rewards for one dataset: kind + cid -> (z*, y*) map."""

    def __init__(self, kind: str, truth: dict, vocabulary: Optional[ConditionVocabulary] = None):
        if kind not in REWARD_KINDS:
            raise ValueError(f"unknown reward kind {kind!r}")
        self.kind = kind
        self.truth = dict(truth)
        self.vocabulary = vocabulary

    def ground_truth(self, cid):
        try:
            return self.truth[cid]
        except KeyError:
            raise KeyError(f"no ground truth stored for context {cid!r}") from None

    def true_reward(self, cid, explanation, label) -> float:
        z_gt, y_gt = self.ground_truth(cid)
        if explanation.variant != z_gt.variant:
            raise ValueError(f"variant mismatch: {explanation.variant} vs {z_gt.variant}")
        if self.kind == "cosine":
            return reward_cosine_signed(z_gt.payload, y_gt, explanation.payload, label)
        if self.kind == "hamming":
            return reward_hamming_signed(z_gt.payload, y_gt, explanation.payload, label)
        if self.kind == "jaccard":
            return reward_jaccard_signed(
                _as_set(z_gt), y_gt, _as_set(explanation), label)
        if self.kind == "kendall":
            return reward_kendall_signed(z_gt.positions, y_gt, explanation.positions, label)
        return reward_lcs_signed(z_gt.conditions, y_gt, explanation.conditions, label)

    def pool_rewards(self, cid, explanations: Sequence, labels) -> np.ndarray:
        """True rewards of a whole arm pool at once, via the accel backend."""
        z_gt, y_gt = self.ground_truth(cid)
        labels = np.asarray(labels)
        signs = np.where(labels == int(y_gt), 1.0, -1.0)
        if self.kind in ("cosine", "hamming"):
            g = np.asarray(vectorize(z_gt, self.vocabulary), dtype=np.float64)
            mat = np.ascontiguousarray([vectorize(e, self.vocabulary) for e in explanations])
            if self.kind == "hamming":
                sims = np.mean(mat == g[None, :], axis=1)
            else:
                norms = np.linalg.norm(mat, axis=1)
                gn = np.linalg.norm(g)
                if gn == 0.0 or np.any(norms == 0.0):
                    raise ValueError("cosine reward is undefined for zero-norm explanations")
                sims = (mat @ g) / (norms * gn)
        elif self.kind == "jaccard":
            if self.vocabulary is not None:
                g = self.vocabulary.membership(z_gt.conditions)[None, :]
                mat = np.ascontiguousarray(
                    [self.vocabulary.membership(e.conditions) for e in explanations])
                sims = accel.jaccard_cross(mat, g)[:, 0]
            else:
                gt_set = _as_set(z_gt)
                sims = np.array([eval_set_jaccard(gt_set, _as_set(e))
                                 for e in explanations])
        elif self.kind == "kendall":
            g = np.asarray(z_gt.positions, dtype=np.int64)[None, :]
            mat = np.ascontiguousarray([e.positions for e in explanations], dtype=np.int64)
            sims = accel.kendall_cross(mat, g)[:, 0]
        else:
            if self.vocabulary is None:
                raise ValueError("lcs pool rewards require a condition vocabulary")
            gt_ids = self.vocabulary.ids(z_gt.conditions)
            if gt_ids.shape[0] == 0:
                raise ValueError("ground-truth trace must be nonempty for the LCS reward")
            lens = np.array([len(e.conditions) for e in explanations], dtype=np.int64)
            width = max(1, int(lens.max()))
            preds = np.full((len(explanations), width), -1, dtype=np.int64)
            for i, e in enumerate(explanations):
                if lens[i]:
                    preds[i, :lens[i]] = self.vocabulary.ids(e.conditions)
            sims = accel.lcs_batch(gt_ids, preds, lens) / gt_ids.shape[0]
        return sims * signs

    # ------------------------------------------------------------------
    # line-delimited persistence: cid, label, variant, payload
    # ------------------------------------------------------------------

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"#reward\t{self.kind}\n")
            for cid in sorted(self.truth):
                z, y = self.truth[cid]
                fh.write(f"{cid}\t{int(y)}\t{z.variant}\t{_format_payload(z)}\n")

    @classmethod
    def load(cls, path, vocabulary: Optional[ConditionVocabulary] = None) -> "RewardOracle":
        truth = {}
        kind = None
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n")
                if not line:
                    continue
                if line.startswith("#reward\t"):
                    kind = line.split("\t", 1)[1]
                    continue
                parts = line.split("\t")
                if len(parts) != 4:
                    raise DataFormatError(f"{path}:{lineno}: expected 4 tab-separated fields")
                cid_text, label_text, variant, payload = parts
                cid = int(cid_text) if cid_text.lstrip("-").isdigit() else cid_text
                try:
                    truth[cid] = (_parse_payload(variant, payload), int(label_text))
                except ValueError as exc:
                    raise DataFormatError(f"{path}:{lineno}: {exc}") from None
        if kind is None:
            raise DataFormatError(f"{path}: missing '#reward' header line")
        return cls(kind, truth, vocabulary)


def _format_payload(explanation) -> str:
    if isinstance(explanation, Relevance):
        return ",".join(str(int(b)) for b in explanation.bits)
    if isinstance(explanation, Importance):
        return ",".join(repr(float(w)) for w in explanation.weights)
    if isinstance(explanation, Ranking):
        return ",".join(str(int(p)) for p in explanation.positions)
    return ";".join(f"{c.feature}:{repr(c.threshold)}:{c.op}" for c in explanation.conditions)


def _parse_payload(variant, text):
    if variant == "relevance":
        return Relevance([int(tok) for tok in text.split(",")])
    if variant == "importance":
        return Importance([float(tok) for tok in text.split(",")])
    if variant == "ranking":
        return Ranking([int(tok) for tok in text.split(",")])
    if variant == "trace":
        conditions = []
        if text:
            for tok in text.split(";"):
                feature, threshold, op = tok.split(":")
                conditions.append(Condition.make(int(feature), float(threshold), op))
        return Trace(conditions)
    raise ValueError(f"unknown explanation variant {variant!r}")
