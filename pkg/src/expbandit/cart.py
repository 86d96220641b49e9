"""Minimal CART classifier: greedy binary Gini splits, fully deterministic.

Candidate thresholds are midpoints between consecutive distinct sorted
feature values; ties in impurity break toward the lowest feature index,
then the lowest threshold, so identical data always yields an identical
tree. Root-to-leaf paths double as trace explanations.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from expbandit.errors import DataFormatError, NumericalError
from expbandit.explanations import Condition, Trace

DEPTH_RANGE = (5, 10)
FORMAT_VERSION = "v1"


@dataclass
class Node:
    label: int
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional["Node"] = None
    right: Optional["Node"] = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


@dataclass
class DecisionTree:
    root: Node
    max_depth: int
    min_leaf: int
    degenerate: bool = False  # single-class training data

    def predict(self, x) -> int:
        node = self.root
        x = np.asarray(x, dtype=np.float64)
        while not node.is_leaf:
            node = node.left if x[node.feature] <= node.threshold else node.right
        return node.label

    def depth(self) -> int:
        def walk(node):
            if node.is_leaf:
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)


def _gini_best_split(x, y) -> Optional[Tuple[int, float, float]]:
    """Lowest weighted-Gini (impurity, feature, threshold) or None.

    For each feature the sorted prefix class counts give the impurity of
    every candidate cut in one vectorized pass.
    """
    n, d = x.shape
    best = None
    for feature in range(d):
        order = np.argsort(x[:, feature], kind="stable")
        vals = x[order, feature]
        ones = np.cumsum(y[order])[:-1].astype(np.float64)
        left_n = np.arange(1, n, dtype=np.float64)
        right_n = n - left_n
        right_ones = float(y.sum()) - ones
        gini_l = 1.0 - (ones / left_n) ** 2 - (1.0 - ones / left_n) ** 2
        gini_r = 1.0 - (right_ones / right_n) ** 2 - (1.0 - right_ones / right_n) ** 2
        impurity = (left_n * gini_l + right_n * gini_r) / n
        valid = vals[1:] > vals[:-1]
        if not np.any(valid):
            continue
        impurity = np.where(valid, impurity, np.inf)
        cut = int(np.argmin(impurity))  # argmin takes the first, so the lowest threshold
        candidate = (float(impurity[cut]), feature, float((vals[cut] + vals[cut + 1]) / 2.0))
        if best is None or candidate[0] < best[0] - 1e-15:
            best = candidate
    return best


def _majority(y) -> int:
    ones = int(y.sum())
    zeros = y.shape[0] - ones
    return 1 if ones > zeros else 0


def _grow(x, y, depth, max_depth, min_leaf) -> Node:
    if depth == max_depth or y.shape[0] < 2 * min_leaf or y.min() == y.max():
        return Node(label=_majority(y))
    split = _gini_best_split(x, y)
    if split is None:
        return Node(label=_majority(y))
    _, feature, threshold = split
    mask = x[:, feature] <= threshold
    if mask.sum() < min_leaf or (~mask).sum() < min_leaf:
        return Node(label=_majority(y))
    return Node(
        label=_majority(y),
        feature=feature,
        threshold=threshold,
        left=_grow(x[mask], y[mask], depth + 1, max_depth, min_leaf),
        right=_grow(x[~mask], y[~mask], depth + 1, max_depth, min_leaf),
    )


def train_cart(x, y, max_depth: int = 7, min_leaf: int = 1) -> DecisionTree:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("training data must be a nonempty 2-d array")
    if x.shape[0] != y.shape[0]:
        raise ValueError("one label per row required")
    if not DEPTH_RANGE[0] <= max_depth <= DEPTH_RANGE[1]:
        raise ValueError(f"max_depth must lie in {DEPTH_RANGE}")
    if min_leaf < 1:
        raise ValueError("min_leaf must be at least 1")
    degenerate = bool(y.min() == y.max())
    root = _grow(x, y, 0, max_depth, min_leaf)
    tree = DecisionTree(root, max_depth, min_leaf, degenerate)
    _check_unique_paths(tree)
    return tree


def _check_unique_paths(tree: DecisionTree):
    """Quantized condition ids must not collide along any path."""
    def walk(node, seen):
        if node.is_leaf:
            return
        for op in ("le", "gt"):
            cond = Condition.make(node.feature, node.threshold, op)
            if cond in seen:
                raise NumericalError(f"duplicate path condition {cond}")
        left = Condition.make(node.feature, node.threshold, "le")
        right = Condition.make(node.feature, node.threshold, "gt")
        walk(node.left, seen | {left})
        walk(node.right, seen | {right})
    walk(tree.root, frozenset())


def extract_trace(tree: DecisionTree, x) -> Tuple[Trace, int]:
    """Conditions along the evaluation path of x, plus the leaf label."""
    x = np.asarray(x, dtype=np.float64)
    conditions = []
    node = tree.root
    while not node.is_leaf:
        if x[node.feature] <= node.threshold:
            conditions.append(Condition.make(node.feature, node.threshold, "le"))
            node = node.left
        else:
            conditions.append(Condition.make(node.feature, node.threshold, "gt"))
            node = node.right
    return Trace(conditions), node.label


def training_accuracy(tree: DecisionTree, x, y) -> float:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    hits = sum(tree.predict(row) == label for row, label in zip(x, y))
    return hits / y.shape[0]


# ---------------------------------------------------------------------------
# line-delimited persistence (pre-order walk)
# ---------------------------------------------------------------------------

def save_tree(tree: DecisionTree, path):
    lines = []

    def walk(node):
        if node.is_leaf:
            lines.append(f"leaf\t{node.label}")
        else:
            lines.append(f"node\t{node.feature}\t{repr(node.threshold)}\t{node.label}")
            walk(node.left)
            walk(node.right)

    walk(tree.root)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#tree\t{FORMAT_VERSION}\tmax_depth={tree.max_depth}"
                 f"\tmin_leaf={tree.min_leaf}\tdegenerate={int(tree.degenerate)}\n")
        fh.write("\n".join(lines) + "\n")


def load_tree(path) -> DecisionTree:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if len(header) != 5 or header[0] != "#tree" or header[1] != FORMAT_VERSION:
            raise DataFormatError(f"{path}:1: not a {FORMAT_VERSION} tree file")
        max_depth = int(header[2].split("=", 1)[1])
        min_leaf = int(header[3].split("=", 1)[1])
        degenerate = bool(int(header[4].split("=", 1)[1]))
        lines = [line.rstrip("\n") for line in fh if line.strip()]

    pos = 0

    def build():
        nonlocal pos
        if pos >= len(lines):
            raise DataFormatError(f"{path}: truncated tree body")
        parts = lines[pos].split("\t")
        pos += 1
        if parts[0] == "leaf":
            return Node(label=int(parts[1]))
        if parts[0] != "node" or len(parts) != 4:
            raise DataFormatError(f"{path}: malformed tree line {parts!r}")
        node = Node(label=int(parts[3]), feature=int(parts[1]), threshold=float(parts[2]))
        node.left = build()
        node.right = build()
        return node

    root = build()
    if pos != len(lines):
        raise DataFormatError(f"{path}: trailing tree lines")
    return DecisionTree(root, max_depth, min_leaf, degenerate)
