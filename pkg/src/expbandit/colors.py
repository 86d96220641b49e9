"""Synthetic 5x5 color-grid classification task with known explanations.

Rule A: the four corner pixels share one color. Rule B: the three
top-middle pixels are pairwise distinct. Every generated instance
satisfies both rules (label 1) or neither (label 0), so either rule
alone predicts the label; the requested rule only decides which pixels
the ground-truth explanations point at.
"""

from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from expbandit.errors import DataFormatError
from expbandit.explanations import Importance, Relevance

GRID_SIDE = 5
N_PIXELS = GRID_SIDE * GRID_SIDE
PALETTE = 4
CORNERS = (0, 4, 20, 24)
TOP_MIDDLE = (1, 2, 3)
RULES = ("A", "B")

FORMAT_VERSION = "v1"


def rule_a(grid) -> bool:
    """Four corner pixels share one color."""
    g = np.asarray(grid).reshape(-1)
    return bool(g[CORNERS[0]] == g[CORNERS[1]] == g[CORNERS[2]] == g[CORNERS[3]])


def rule_b(grid) -> bool:
    """Three top-middle pixels are pairwise distinct."""
    g = np.asarray(grid).reshape(-1)
    a, b, c = (int(g[i]) for i in TOP_MIDDLE)
    return a != b and a != c and b != c


def one_hot(grid) -> np.ndarray:
    """Flattened per-pixel one-hot encoding, length N_PIXELS * PALETTE."""
    g = np.asarray(grid, dtype=np.int64).reshape(-1)
    x = np.zeros(N_PIXELS * PALETTE)
    x[np.arange(N_PIXELS) * PALETTE + g] = 1.0
    return x


def rule_mask(rule: str) -> np.ndarray:
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    mask = np.zeros(N_PIXELS, dtype=np.int64)
    mask[list(CORNERS if rule == "A" else TOP_MIDDLE)] = 1
    return mask


@dataclass(frozen=True)
class ColorsInstance:
    cid: int
    grid: tuple
    label: int
    rule: str

    @property
    def x(self) -> np.ndarray:
        return one_hot(self.grid)

    @property
    def relevance(self) -> Relevance:
        return Relevance(rule_mask(self.rule))

    @property
    def importance(self) -> Importance:
        return colors_importance(self, self.rule)


def colors_importance(instance: ColorsInstance, rule: str) -> Importance:
    """Signed pixel weights: +1 on the rule's pixels for positives, -1
    for negatives, 0 elsewhere. Support equals the relevance mask."""
    sign = 1.0 if instance.label == 1 else -1.0
    return Importance(rule_mask(rule) * sign)


def _draw_positive(rng) -> np.ndarray:
    grid = rng.integers(0, PALETTE, size=N_PIXELS)
    grid[list(CORNERS)] = rng.integers(0, PALETTE)
    grid[list(TOP_MIDDLE)] = rng.choice(PALETTE, size=3, replace=False)
    return grid


def _draw_negative(rng) -> np.ndarray:
    # rejection keeps the joint constraint exact: neither rule may hold
    while True:
        grid = rng.integers(0, PALETTE, size=N_PIXELS)
        if not rule_a(grid) and not rule_b(grid):
            return grid


def gen_colors(n: int, rule: str, seed: int) -> List[ColorsInstance]:
    """Deterministic balanced sample; labels alternate 1, 0, 1, ..."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if rule not in RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {RULES}")
    rng = np.random.default_rng(seed)
    out = []
    for cid in range(n):
        label = 1 - cid % 2
        grid = _draw_positive(rng) if label == 1 else _draw_negative(rng)
        out.append(ColorsInstance(cid, tuple(int(c) for c in grid), label, rule))
    return out


def save_colors(instances: Sequence[ColorsInstance], seed: int, path):
    rule = instances[0].rule
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"#colors\t{FORMAT_VERSION}\tseed={seed}\trule={rule}\tpalette={PALETTE}\n")
        for inst in instances:
            cells = ",".join(str(c) for c in inst.grid)
            fh.write(f"{inst.cid}\t{inst.label}\t{cells}\n")


def load_colors(path) -> List[ColorsInstance]:
    instances = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        fields = header.split("\t")
        if len(fields) != 5 or fields[0] != "#colors" or fields[1] != FORMAT_VERSION:
            raise DataFormatError(f"{path}:1: not a {FORMAT_VERSION} colors file")
        rule = fields[3].split("=", 1)[1]
        if rule not in RULES:
            raise DataFormatError(f"{path}:1: unknown rule {rule!r}")
        for lineno, raw in enumerate(fh, start=2):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataFormatError(f"{path}:{lineno}: expected 3 tab-separated fields")
            try:
                cid, label = int(parts[0]), int(parts[1])
                grid = tuple(int(c) for c in parts[2].split(","))
            except ValueError as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
            if len(grid) != N_PIXELS:
                raise DataFormatError(f"{path}:{lineno}: expected {N_PIXELS} cells")
            satisfied = rule_a(grid)
            if satisfied != rule_b(grid) or int(satisfied) != label:
                raise DataFormatError(f"{path}:{lineno}: label inconsistent with the rules")
            instances.append(ColorsInstance(cid, grid, label, rule))
    return instances
