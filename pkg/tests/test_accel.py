"""Backend equivalence: the jitted kernels must match the numpy path."""

import importlib

import numpy as np
import pytest

from expbandit.accel import _numpy_impl
from expbandit.kernels import eval_kendall, eval_rbf
from expbandit.rewards import reward_lcs_signed

try:
    from expbandit.accel import _numba_impl
except ImportError:
    _numba_impl = None

needs_numba = pytest.mark.skipif(_numba_impl is None, reason="numba unavailable")


def _random_case(seed, n=7, m=5, d=4):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, d))
    b = rng.normal(size=(m, d))
    return rng, a, b


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_rbf_cross_backends_agree(seed):
    _, a, b = _random_case(seed)
    out_np = _numpy_impl.rbf_cross(a, b, 0.37)
    out_nb = _numba_impl.rbf_cross(a, b, 0.37)
    np.testing.assert_allclose(out_nb, out_np, rtol=0, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_linear_cross_backends_agree(seed):
    _, a, b = _random_case(seed)
    np.testing.assert_allclose(
        _numba_impl.linear_cross(a, b), _numpy_impl.linear_cross(a, b),
        rtol=0, atol=1e-12)


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_jaccard_cross_backends_agree(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(6, 9)).astype(np.float64)
    b = rng.integers(0, 2, size=(4, 9)).astype(np.float64)
    np.testing.assert_allclose(
        _numba_impl.jaccard_cross(a, b), _numpy_impl.jaccard_cross(a, b),
        rtol=0, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_kendall_cross_backends_agree(seed):
    rng = np.random.default_rng(seed)
    a = np.vstack([rng.permutation(6) for _ in range(5)]).astype(np.int64)
    b = np.vstack([rng.permutation(6) for _ in range(4)]).astype(np.int64)
    np.testing.assert_allclose(
        _numba_impl.kendall_cross(a, b), _numpy_impl.kendall_cross(a, b),
        rtol=0, atol=1e-14)


@needs_numba
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_lcs_batch_backends_agree(seed):
    rng = np.random.default_rng(seed)
    gt = rng.integers(0, 5, size=6).astype(np.int64)
    lens = rng.integers(0, 7, size=8).astype(np.int64)
    preds = np.full((8, 7), -1, dtype=np.int64)
    for i, k in enumerate(lens):
        preds[i, :k] = rng.integers(0, 5, size=k)
    np.testing.assert_array_equal(
        _numba_impl.lcs_batch(gt, preds, lens), _numpy_impl.lcs_batch(gt, preds, lens))


def test_rbf_cross_matches_scalar():
    rng, a, b = _random_case(7)
    out = _numpy_impl.rbf_cross(a, b, 0.6)
    for i in range(a.shape[0]):
        for j in range(b.shape[0]):
            assert out[i, j] == pytest.approx(eval_rbf(a[i], b[j], 0.6), abs=1e-14)


def test_kendall_cross_matches_scalar():
    rng = np.random.default_rng(11)
    a = np.vstack([rng.permutation(5) for _ in range(6)]).astype(np.int64)
    out = _numpy_impl.kendall_cross(a, a)
    for i in range(6):
        for j in range(6):
            assert out[i, j] == pytest.approx(eval_kendall(a[i], a[j]), abs=1e-14)


def test_lcs_batch_matches_scalar_dp():
    rng = np.random.default_rng(13)
    gt = rng.integers(0, 4, size=5).astype(np.int64)
    lens = np.array([0, 2, 5, 3], dtype=np.int64)
    preds = np.full((4, 5), -1, dtype=np.int64)
    for i, k in enumerate(lens):
        preds[i, :k] = rng.integers(0, 4, size=k)
    out = _numpy_impl.lcs_batch(gt, preds, lens)
    for i, k in enumerate(lens):
        seq = list(preds[i, :k])
        if k == 0:
            expected = 0.0
        else:
            expected = reward_lcs_signed(list(gt), 1, seq, 1) * len(gt)
        assert out[i] == pytest.approx(expected)


def test_backend_env_flag_selects_numpy(monkeypatch):
    import expbandit.accel as accel
    monkeypatch.setenv("EXPBANDIT_BACKEND", "numpy")
    reloaded = importlib.reload(accel)
    try:
        assert reloaded.BACKEND == "numpy"
    finally:
        monkeypatch.undo()
        importlib.reload(accel)


def test_backend_env_flag_rejects_unknown(monkeypatch):
    import expbandit.accel as accel
    monkeypatch.setenv("EXPBANDIT_BACKEND", "fortran")
    with pytest.raises(ValueError):
        importlib.reload(accel)
    monkeypatch.undo()
    importlib.reload(accel)
