"""Multivariate Gaussian sensor model and the negative-log-density score.

The model describes the joint distribution of the *unattacked* sensor
readings.  Its anomaly score for a coalition S of sensors is
``-ln f_S(x_S)``, the negative log of the Gaussian marginal restricted to
the sensors in S: large when the readings are improbable under the clean
model, small when they are typical.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular

from .coalitions import Coalition

# Exact coalition enumeration is capped well below anything a desk machine
# can chew through; the model shares the cap so marginal caches stay bounded.
MAX_SENSORS = 24

_LOG_2PI = math.log(2.0 * math.pi)


class NotPositiveDefiniteError(ValueError):
    """Covariance admits no Cholesky factorization (degenerate model)."""


class DimensionMismatchError(ValueError):
    """Mean/covariance/observation dimensions disagree."""


def check_observation(values, n: int) -> np.ndarray:
    """Validate a raw observation vector: length n, all entries finite."""
    x = np.asarray(values, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatchError(f"observation has shape {x.shape}, expected ({n},)")
    if not np.all(np.isfinite(x)):
        raise ValueError("observation contains non-finite entries")
    return x


class GaussianModel:
    """Immutable N-sensor Gaussian model with cached factorizations.

    Parameters
    ----------
    mean : array_like, shape (n,)
        Mean reading of each sensor.
    cov : array_like, shape (n, n)
        Covariance of the readings; must be symmetric positive definite.
    cache_marginals : bool
        Keep the per-coalition marginal factorizations.  Disable for bulk
        enumeration at large n, where the cache would hold 2^n factors.
    """

    def __init__(self, mean, cov, cache_marginals: bool = True):
        mean = np.atleast_1d(np.asarray(mean, dtype=float))
        cov = np.atleast_2d(np.asarray(cov, dtype=float))
        n = mean.shape[0]
        if mean.ndim != 1 or cov.shape != (n, n):
            raise DimensionMismatchError(
                f"mean has shape {mean.shape} but covariance has shape {cov.shape}"
            )
        if n == 0:
            raise DimensionMismatchError("model needs at least one sensor")
        if n > MAX_SENSORS:
            raise DimensionMismatchError(
                f"{n} sensors exceeds the supported maximum of {MAX_SENSORS}"
            )
        if not (np.all(np.isfinite(mean)) and np.all(np.isfinite(cov))):
            raise ValueError("mean/covariance contain non-finite entries")
        scale = np.max(np.abs(cov))
        if not np.allclose(cov, cov.T, rtol=1e-12, atol=1e-12 * max(scale, 1.0)):
            raise ValueError("covariance is not symmetric")
        try:
            chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError as exc:
            raise NotPositiveDefiniteError(
                "covariance is not positive definite"
            ) from exc

        self._n = n
        self._mean = mean
        self._cov = cov
        self._chol = chol
        for arr in (self._mean, self._cov, self._chol):
            arr.setflags(write=False)
        # per-coalition marginal factorizations, keyed by bit mask
        self._cache_marginals = cache_marginals
        self._marginals: dict[int, tuple[np.ndarray, np.ndarray, np.ndarray, float]] = {}

    @property
    def n(self) -> int:
        return self._n

    @property
    def mean(self) -> np.ndarray:
        return self._mean

    @property
    def cov(self) -> np.ndarray:
        return self._cov

    @property
    def chol(self) -> np.ndarray:
        """Lower Cholesky factor of the full covariance."""
        return self._chol

    def __repr__(self) -> str:
        return f"GaussianModel(n={self._n})"

    # ------------------------------------------------------------------
    # sampling

    def sample(self, rng, size: int | None = None) -> np.ndarray:
        """Draw from the joint pdf: mean + L z with z iid standard normal.

        Returns shape (n,) when ``size`` is None, else (size, n).
        """
        if size is None:
            z = rng.standard_normal(self._n)
            return self._mean + self._chol @ z
        z = rng.standard_normal((size, self._n))
        return self._mean + z @ self._chol.T

    # ------------------------------------------------------------------
    # marginal densities

    def _marginal(self, s: Coalition):
        """(index array, sub-mean, lower Cholesky, log-normalizer) for S."""
        entry = self._marginals.get(s.bits)
        if entry is not None:
            return entry
        if s.n != self._n:
            raise DimensionMismatchError(
                f"coalition universe {s.n} does not match model with {self._n} sensors"
            )
        if not s:
            raise ValueError("marginal density of the empty coalition is undefined")
        idx = np.fromiter(s, dtype=np.intp)
        sub_mean = self._mean[idx]
        sub_cov = self._cov[np.ix_(idx, idx)]
        try:
            sub_chol = np.linalg.cholesky(sub_cov)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - SPD minors of SPD
            raise NotPositiveDefiniteError("marginal covariance not positive definite") from exc
        log_norm = 0.5 * len(idx) * _LOG_2PI + float(np.sum(np.log(np.diag(sub_chol))))
        entry = (idx, sub_mean, sub_chol, log_norm)
        if self._cache_marginals:
            self._marginals[s.bits] = entry
        return entry

    def marginal_log_density(self, s: Coalition, x) -> float:
        """ln f_S(x_S) for the Gaussian marginal over the sensors in S."""
        idx, sub_mean, sub_chol, log_norm = self._marginal(s)
        x = np.asarray(x, dtype=float)
        if x.shape != (self._n,):
            raise DimensionMismatchError(f"observation has shape {x.shape}, expected ({self._n},)")
        y = solve_triangular(sub_chol, x[idx] - sub_mean, lower=True, check_finite=False)
        return float(-0.5 * (y @ y) - log_norm)

    def marginal_log_density_batch(self, s: Coalition, xs: np.ndarray) -> np.ndarray:
        """ln f_S(x_S) for every row of ``xs`` (shape (m, n))."""
        idx, sub_mean, sub_chol, log_norm = self._marginal(s)
        diff = xs[:, idx] - sub_mean
        y = solve_triangular(sub_chol, diff.T, lower=True, check_finite=False)
        return -0.5 * np.einsum("ij,ij->j", y, y) - log_norm

    # ------------------------------------------------------------------
    # anomaly score

    def value(self, s: Coalition, x) -> float:
        """Anomaly score -ln f_S(x_S); zero on the empty coalition."""
        if not s:
            return 0.0
        return -self.marginal_log_density(s, x)


class GaussianValueFunction:
    """Coalition score backed by a Gaussian model, for the Shapley engine."""

    def __init__(self, model: GaussianModel):
        self.model = model
        self.n = model.n

    def __call__(self, s: Coalition, x) -> float:
        return self.model.value(s, x)
