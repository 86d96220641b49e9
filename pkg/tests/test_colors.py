"""Color-grid dataset: rules, encodings, generation invariants, persistence."""

import numpy as np
import pytest

from expbandit.colors import (
    CORNERS,
    N_PIXELS,
    PALETTE,
    TOP_MIDDLE,
    ColorsInstance,
    colors_importance,
    gen_colors,
    load_colors,
    one_hot,
    rule_a,
    rule_b,
    rule_mask,
    save_colors,
)
from expbandit.errors import DataFormatError


def grid_with(assignments, fill=0):
    g = np.full(N_PIXELS, fill, dtype=np.int64)
    for idx, color in assignments.items():
        g[idx] = color
    return g


def test_rule_a_known_grids():
    assert rule_a(grid_with({i: 2 for i in CORNERS}, fill=1))
    assert not rule_a(grid_with({0: 2, 4: 2, 20: 2, 24: 3}, fill=1))


def test_rule_b_known_grids():
    assert rule_b(grid_with({1: 0, 2: 1, 3: 2}, fill=3))
    assert not rule_b(grid_with({1: 0, 2: 0, 3: 2}, fill=3))
    # distinctness is pairwise, not just adjacent
    assert not rule_b(grid_with({1: 0, 2: 1, 3: 0}, fill=3))


def test_one_hot_shape_and_placement():
    g = np.zeros(N_PIXELS, dtype=np.int64)
    g[7] = 3
    x = one_hot(g)
    assert x.shape == (N_PIXELS * PALETTE,)
    assert x.sum() == N_PIXELS
    assert x[7 * PALETTE + 3] == 1.0
    assert x[7 * PALETTE + 0] == 0.0
    assert x[0] == 1.0


def test_rule_mask_pixels():
    assert sorted(np.flatnonzero(rule_mask("A"))) == sorted(CORNERS)
    assert sorted(np.flatnonzero(rule_mask("B"))) == sorted(TOP_MIDDLE)
    with pytest.raises(ValueError):
        rule_mask("C")


def test_importance_sign_tracks_label():
    pos = ColorsInstance(0, tuple(grid_with({i: 1 for i in CORNERS})), 1, "A")
    neg = ColorsInstance(1, tuple(grid_with({0: 1, 4: 2, 1: 0, 2: 0, 3: 0})), 0, "A")
    w_pos = np.asarray(colors_importance(pos, "A").weights)
    w_neg = np.asarray(colors_importance(neg, "A").weights)
    assert set(np.unique(w_pos)) == {0.0, 1.0}
    assert set(np.unique(w_neg)) == {-1.0, 0.0}
    np.testing.assert_array_equal(np.abs(w_pos), rule_mask("A"))
    np.testing.assert_array_equal(w_neg, -w_pos)


def test_instance_properties_match_rule():
    inst = gen_colors(4, "B", seed=3)[0]
    np.testing.assert_array_equal(inst.relevance.bits, rule_mask("B"))
    assert inst.x.shape == (N_PIXELS * PALETTE,)
    assert inst.importance.variant == "importance"


@pytest.mark.parametrize("rule", ["A", "B"])
def test_gen_colors_joint_invariant(rule):
    # positives satisfy both rules, negatives neither; labels alternate
    instances = gen_colors(400, rule, seed=11)
    assert len(instances) == 400
    for inst in instances:
        assert inst.label == 1 - inst.cid % 2
        a, b = rule_a(inst.grid), rule_b(inst.grid)
        if inst.label == 1:
            assert a and b
        else:
            assert not a and not b


def test_gen_colors_deterministic():
    first = gen_colors(50, "A", seed=7)
    second = gen_colors(50, "A", seed=7)
    assert [i.grid for i in first] == [i.grid for i in second]
    assert gen_colors(50, "A", seed=8)[2].grid != first[2].grid


def test_gen_colors_validation():
    with pytest.raises(ValueError):
        gen_colors(0, "A", seed=0)
    with pytest.raises(ValueError):
        gen_colors(10, "c", seed=0)


def test_save_load_roundtrip(tmp_path):
    instances = gen_colors(30, "B", seed=5)
    path = tmp_path / "colors.tsv"
    save_colors(instances, seed=5, path=path)
    loaded = load_colors(path)
    assert len(loaded) == 30
    for orig, back in zip(instances, loaded):
        assert back.cid == orig.cid
        assert back.label == orig.label
        assert back.grid == orig.grid
        assert back.rule == "B"


def test_load_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("#colours\tv1\tseed=0\trule=A\tpalette=4\n")
    with pytest.raises(DataFormatError, match="bad.tsv:1"):
        load_colors(path)


def test_load_rejects_inconsistent_label(tmp_path):
    instances = gen_colors(4, "A", seed=2)
    path = tmp_path / "colors.tsv"
    save_colors(instances, seed=2, path=path)
    lines = path.read_text().splitlines()
    cid, _, cells = lines[1].split("\t")
    lines[1] = f"{cid}\t0\t{cells}"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(DataFormatError, match=":2"):
        load_colors(path)


def test_load_rejects_short_row(tmp_path):
    path = tmp_path / "colors.tsv"
    path.write_text(
        "#colors\tv1\tseed=0\trule=A\tpalette=4\n"
        "0\t1\t1,2,3\n")
    with pytest.raises(DataFormatError, match="25 cells"):
        load_colors(path)
