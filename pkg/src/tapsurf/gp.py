"""Exact Gaussian-process regression on the unit square with an RBF kernel.

The regressor follows the scikit-learn estimator protocol (``fit`` /
``predict`` / ``get_params``) so it composes with pipelines and model
selection utilities, but it is deliberately small: unit-amplitude RBF
kernel, constant prior mean, fixed hyperparameters, and an exact solve via
a Cholesky factorization of the jittered kernel matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .validation import as_points, as_values

__all__ = [
    "FactorizationError",
    "GaussianProcess",
    "KernelParams",
    "kernel_matrix",
    "rbf",
]


class FactorizationError(np.linalg.LinAlgError):
    """The jittered kernel matrix is not positive definite.

    Usually means duplicate training points combined with ``noise_var=0``.
    """


@dataclass(frozen=True)
class KernelParams:
    """RBF hyperparameters plus the constant prior mean of the process.

    ``lengthscale_sq`` is the squared lengthscale of the kernel in
    normalized coordinates; ``noise_var`` is added to the kernel diagonal
    and doubles as numerical jitter.
    """

    lengthscale_sq: float = 0.017
    noise_var: float = 1e-6
    prior_mean: float = 0.0

    def __post_init__(self) -> None:
        if not self.lengthscale_sq > 0.0:
            raise ValueError("lengthscale_sq must be positive")
        if self.noise_var < 0.0:
            raise ValueError("noise_var must be non-negative")


def rbf(a, b, params: KernelParams) -> float:
    """Kernel value ``exp(-|a - b|^2 / (2 * lengthscale_sq))``.

    Symmetric in its arguments, in (0, 1], and exactly 1 iff ``a == b``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d2 = float(((a - b) ** 2).sum())
    return float(np.exp(-d2 / (2.0 * params.lengthscale_sq)))


def kernel_matrix(X, Y, params: KernelParams) -> np.ndarray:
    """Pairwise kernel matrix of shape ``(len(X), len(Y))``.

    Built from explicit coordinate differences rather than the usual norm
    expansion so that k(x, x) is exactly 1 and K(X, X) is exactly symmetric.
    """
    X = as_points(X, name="X")
    Y = as_points(Y, name="Y")
    d2 = ((X[:, None, :] - Y[None, :, :]) ** 2).sum(axis=2)
    return np.exp(-d2 / (2.0 * params.lengthscale_sq))


class GaussianProcess(RegressorMixin, BaseEstimator):
    """Exact GP regressor over [0, 1]^2.

    Parameters
    ----------
    lengthscale_sq : float
        Squared RBF lengthscale in normalized coordinates.
    noise_var : float
        Observation-noise variance added to the kernel diagonal (also the
        jitter that keeps duplicate points factorizable).
    prior_mean : float
        Constant prior mean; predictions fall back to it away from data.

    Fitted attributes (set by :meth:`fit`, never mutated afterwards, so a
    fitted instance is safe to share across threads): ``X_train_``,
    ``y_train_``, ``L_`` (lower Cholesky factor of K + noise_var*I) and
    ``alpha_`` (solution of ``(K + noise_var*I) alpha = y - prior_mean``).

    An empty training set is legal and reproduces the prior exactly.
    """

    def __init__(self, lengthscale_sq: float = 0.017, noise_var: float = 1e-6,
                 prior_mean: float = 0.0):
        self.lengthscale_sq = lengthscale_sq
        self.noise_var = noise_var
        self.prior_mean = prior_mean

    @classmethod
    def from_params(cls, params: KernelParams) -> "GaussianProcess":
        return cls(lengthscale_sq=params.lengthscale_sq,
                   noise_var=params.noise_var,
                   prior_mean=params.prior_mean)

    @property
    def kernel_params(self) -> KernelParams:
        """Validated view of the constructor arguments."""
        return KernelParams(float(self.lengthscale_sq), float(self.noise_var),
                            float(self.prior_mean))

    def fit(self, X, y) -> "GaussianProcess":
        """Factorize the training covariance and precompute prediction weights.

        Raises
        ------
        FactorizationError
            If ``K + noise_var * I`` is not positive definite.
        """
        params = self.kernel_params
        X = as_points(X, name="X")
        y = as_values(y, X.shape[0], name="y")
        if X.shape[0]:
            K = kernel_matrix(X, X, params)
            K[np.diag_indices_from(K)] += params.noise_var
            try:
                L = np.linalg.cholesky(K)
            except np.linalg.LinAlgError as exc:
                raise FactorizationError(
                    "kernel matrix is not positive definite; duplicate "
                    "training points with noise_var=0?") from exc
            z = solve_triangular(L, y - params.prior_mean, lower=True)
            alpha = solve_triangular(L.T, z, lower=False)
        else:
            L = np.zeros((0, 0))
            alpha = np.zeros(0)
        self.X_train_ = X
        self.y_train_ = y
        self.L_ = L
        self.alpha_ = alpha
        return self

    def predict(self, X, return_var: bool = False):
        """Posterior mean (and, optionally, variance) at query points.

        With no training data this returns ``(prior_mean, 1.0)`` exactly.
        Variance is clamped below at 0; it never exceeds the unit prior
        variance beyond rounding error. Pure function of the fitted state,
        safe to call concurrently.
        """
        check_is_fitted(self, "X_train_")
        params = self.kernel_params
        X = as_points(X, name="X")
        n_query = X.shape[0]
        if self.X_train_.shape[0] == 0:
            mean = np.full(n_query, params.prior_mean)
            if return_var:
                return mean, np.ones(n_query)
            return mean
        Ks = kernel_matrix(self.X_train_, X, params)
        mean = params.prior_mean + Ks.T @ self.alpha_
        if return_var:
            V = solve_triangular(self.L_, Ks, lower=True)
            var = np.clip(1.0 - (V * V).sum(axis=0), 0.0, None)
            return mean, var
        return mean
