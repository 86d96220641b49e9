"""End-to-end command-line checks through real subprocesses."""

import os
import subprocess
import sys

import pytest

from expbandit.banknote import write_synthetic_banknote
from expbandit.cart import load_tree
from expbandit.colors import load_colors


def run_cli(*args, cwd=None, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "expbandit", *args],
        capture_output=True, text=True, cwd=cwd, env=env, timeout=300)


def test_no_command_usage_error():
    proc = run_cli()
    assert proc.returncode == 1
    assert "usage" in proc.stderr.lower()


def test_unknown_command():
    proc = run_cli("frobnicate")
    assert proc.returncode == 1


def test_gen_colors(tmp_path):
    out = tmp_path / "colors.tsv"
    proc = run_cli("gen-colors", "--n", "20", "--rule", "B", "--seed", "4",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert "20 instances, 10 positive, rule B" in proc.stdout
    assert len(load_colors(out)) == 20


def test_gen_colors_requires_rule(tmp_path):
    proc = run_cli("gen-colors", "--n", "5", "--out", str(tmp_path / "x.tsv"))
    assert proc.returncode == 1
    assert "--rule" in proc.stderr


def test_train_tree(tmp_path):
    csv = tmp_path / "banknote.csv"
    write_synthetic_banknote(csv, seed=0)
    out = tmp_path / "tree.tsv"
    proc = run_cli("train-tree", "--data", str(csv), "--depth", "7",
                   "--out", str(out))
    assert proc.returncode == 0, proc.stderr
    assert "training accuracy" in proc.stdout
    acc = float(proc.stdout.rsplit(" ", 1)[1])
    assert acc >= 0.98
    tree = load_tree(out)
    assert tree.max_depth == 7


def test_train_tree_missing_file(tmp_path):
    proc = run_cli("train-tree", "--data", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path / "t.tsv"))
    assert proc.returncode == 2
    assert "runtime error" in proc.stderr


def test_train_tree_bad_data(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2,3\n")
    proc = run_cli("train-tree", "--data", str(bad), "--out", str(tmp_path / "t.tsv"))
    assert proc.returncode == 1
    assert "config error" in proc.stderr


def test_run_config_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("dataset = colors-A\nrounds = -3\n")
    proc = run_cli("run", str(cfg))
    assert proc.returncode == 1
    assert "config error" in proc.stderr
    assert "rounds" in proc.stderr


@pytest.fixture(scope="module")
def run_artifacts(tmp_path_factory):
    tmp_path = tmp_path_factory.mktemp("cli_run")
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        "dataset = colors-A\n"
        "rounds = 10\n"
        "seeds = 0:2\n"
        "colors_pool = 30\n"
        "pool_perturb = 4\n"
        "outdir = results\n")
    proc = run_cli("run", str(cfg), env_extra={"EXPBANDIT_OUTPUT_ROOT": str(tmp_path)})
    return proc, tmp_path / "results"


def test_run_emits_artifacts(run_artifacts):
    proc, outdir = run_artifacts
    assert proc.returncode == 0, proc.stderr
    names = sorted(os.listdir(outdir))
    assert "aggregate.csv" in names
    assert "config_echo.txt" in names
    assert "regret_colors-A.svg" in names
    assert sum(n.startswith("ledger_") for n in names) == 8
    # one summary line per curve on stdout
    assert proc.stdout.count("final regret") == 4


def test_run_echo_is_reparseable(run_artifacts, tmp_path):
    _, outdir = run_artifacts
    from expbandit.config import parse_config
    echoed = parse_config(outdir / "config_echo.txt")
    assert echoed.rounds == 10
    assert echoed.seeds == (0, 1)


def test_plot_from_aggregate(run_artifacts, tmp_path):
    _, outdir = run_artifacts
    proc = run_cli("plot", str(outdir / "aggregate.csv"), "--out", str(tmp_path))
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "regret_colors-A.svg").exists()


def test_banknote_run_saves_tree(tmp_path):
    csv = tmp_path / "banknote.csv"
    write_synthetic_banknote(csv, seed=0)
    cfg = tmp_path / "bn.cfg"
    cfg.write_text(
        "dataset = banknote\n"
        f"banknote_path = {csv}\n"
        "rounds = 6\n"
        "seeds = 0\n"
        "pool_perturb = 2\n"
        "kernel = prod\n"
        "strategy = ucb\n"
        f"outdir = {tmp_path / 'out'}\n")
    proc = run_cli("run", str(cfg))
    assert proc.returncode == 0, proc.stderr
    tree_path = tmp_path / "out" / "ground_truth_tree.txt"
    assert tree_path.exists()
    assert load_tree(tree_path).max_depth == 7


def test_console_script_installed():
    proc = subprocess.run(["expbandit", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "run" in proc.stdout and "gen-colors" in proc.stdout
