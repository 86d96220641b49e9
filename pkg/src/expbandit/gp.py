"""Gaussian-process posterior over triples, with O(T^2) rank-one growth.

The posterior after T observations is the usual noisy-GP conditional:
mean k_T(q)' (K_T + s2 I)^{-1} f and covariance k(q, q') minus the
matching quadratic form. The inverse is never formed; a lower Cholesky
factor of K_T + s2 I is kept and extended one row per new observation.
"""

from typing import Optional, Sequence

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from expbandit.errors import NumericalError
from expbandit.kernels import Triple, TripleBatch

# noise floor substituted by callers that simulate noiseless rewards
JITTER = 1e-8

# posterior variances this far below zero indicate real numerical trouble
VAR_CLAMP = -1e-9


class GpPosterior:
    """Immutable GP state; ``append_observation`` returns a grown copy."""

    def __init__(self, kernel, sigma2: float, vocabulary=None, *, batch=None, L=None, f=None, alpha=None):
        if sigma2 <= 0:
            raise ValueError("sigma2 must be positive; use JITTER for noiseless data")
        self.kernel = kernel
        self.sigma2 = float(sigma2)
        self.vocabulary = vocabulary
        self.batch = batch
        self.L = L
        self.f = f
        self.alpha = alpha

    def __len__(self):
        return 0 if self.batch is None else len(self.batch)

    @classmethod
    def prior(cls, kernel, sigma2: float, vocabulary=None) -> "GpPosterior":
        return cls(kernel, sigma2, vocabulary)

    @classmethod
    def fit(cls, kernel, triples: Sequence[Triple], targets, sigma2: float,
            vocabulary=None) -> "GpPosterior":
        """Factor the full T-point system in one shot."""
        if len(triples) == 0:
            return cls.prior(kernel, sigma2, vocabulary)
        f = np.asarray(targets, dtype=np.float64).reshape(-1)
        if f.shape[0] != len(triples):
            raise ValueError("one target per triple required")
        batch = TripleBatch.from_triples(triples, vocabulary)
        k = kernel.cross(batch, batch)
        k = (k + k.T) / 2.0
        k[np.diag_indices_from(k)] += sigma2
        try:
            L = np.linalg.cholesky(k)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"kernel matrix is not positive definite: {exc}") from None
        alpha = cho_solve((L, True), f)
        return cls(kernel, sigma2, vocabulary, batch=batch, L=L, f=f, alpha=alpha)

    def append_observation(self, triple: Triple, target: float) -> "GpPosterior":
        """Grow the Cholesky factor by one bordered row; O(T^2)."""
        new = TripleBatch.from_triples([triple], self.vocabulary)
        c = float(self.kernel.diag(new)[0]) + self.sigma2
        if self.batch is None:
            if c <= 0:
                raise NumericalError("nonpositive prior variance at first observation")
            batch = new
            L = np.array([[np.sqrt(c)]])
            f = np.array([float(target)])
        else:
            b = self.kernel.cross(self.batch, new)[:, 0]
            w = solve_triangular(self.L, b, lower=True)
            d2 = c - np.dot(w, w)
            if d2 <= 0:
                raise NumericalError("Cholesky update broke down; kernel matrix lost positive definiteness")
            t = len(self)
            L = np.zeros((t + 1, t + 1))
            L[:t, :t] = self.L
            L[t, :t] = w
            L[t, t] = np.sqrt(d2)
            batch = TripleBatch.concat(self.batch, new)
            f = np.append(self.f, float(target))
        alpha = cho_solve((L, True), f)
        return GpPosterior(self.kernel, self.sigma2, self.vocabulary,
                           batch=batch, L=L, f=f, alpha=alpha)

    # ------------------------------------------------------------------
    # queries
    # ------------------------------------------------------------------

    def posterior_mean(self, triple: Triple) -> float:
        return float(self.posterior_mean_batch(self._as_batch(triple))[0])

    def posterior_var(self, triple: Triple) -> float:
        return float(self.posterior_var_batch(self._as_batch(triple))[0])

    def posterior_mean_batch(self, queries: TripleBatch) -> np.ndarray:
        if self.batch is None:
            return np.zeros(len(queries))
        k = self.kernel.cross(self.batch, queries)
        return k.T @ self.alpha

    def posterior_var_batch(self, queries: TripleBatch) -> np.ndarray:
        prior = np.asarray(self.kernel.diag(queries), dtype=np.float64)
        if self.batch is None:
            return prior
        k = self.kernel.cross(self.batch, queries)
        v = solve_triangular(self.L, k, lower=True)
        var = prior - np.einsum("ij,ij->j", v, v)
        bad = var < VAR_CLAMP
        if np.any(bad):
            raise NumericalError(f"posterior variance fell to {var[bad].min():.3e}")
        return np.maximum(var, 0.0)

    def _as_batch(self, triple: Triple) -> TripleBatch:
        return TripleBatch.from_triples([triple], self.vocabulary)
