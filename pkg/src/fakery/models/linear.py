"""Standardization and L2-regularized logistic regression."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import DimensionError, SingleClassError

_SIGMA_FLOOR = 1e-12


@dataclass
class Standardizer:
    mu: np.ndarray
    sigma: np.ndarray  # population std, floored at 1e-12

    def apply(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        return (X - self.mu) / self.sigma


def fit_standardizer(X: np.ndarray) -> Standardizer:
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise DimensionError("cannot standardize an empty matrix")
    mu = X.mean(axis=0)
    sigma = np.maximum(X.std(axis=0), _SIGMA_FLOOR)
    return Standardizer(mu=mu, sigma=sigma)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    # Keep outputs strictly inside (0, 1) despite float saturation.
    return np.clip(out, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))


@dataclass
class LinearModel:
    weights: np.ndarray
    bias: float
    standardizer: Standardizer

    def predict_proba(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.shape[1] != self.weights.shape[0]:
            raise DimensionError(
                f"expected {self.weights.shape[0]} features, got {X.shape[1]}"
            )
        z = self.standardizer.apply(X) @ self.weights + self.bias
        return _sigmoid(z)


def logreg_loss_grad(params: np.ndarray, Z: np.ndarray, y_pm: np.ndarray, l2: float):
    """Mean logistic loss with L2 on weights (not bias), plus its gradient."""
    w, b = params[:-1], params[-1]
    margins = y_pm * (Z @ w + b)
    loss = float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * l2 * float(w @ w)
    coeff = -y_pm * _sigmoid(-margins) / len(y_pm)
    grad_w = Z.T @ coeff + l2 * w
    grad_b = float(np.sum(coeff))
    return loss, np.append(grad_w, grad_b)


def logreg_fit(
    X: np.ndarray,
    y: np.ndarray,
    l2: float = 1e-4,
    max_iter: int = 500,
    tol: float = 1e-6,
    seed: int = 0,
) -> LinearModel:
    """Fit on standardized features with L-BFGS-B from a zero start.

    The zero start makes the fit deterministic; `seed` is accepted for
    interface uniformity with the tree models.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if len(np.unique(y)) < 2:
        raise SingleClassError("both classes required to fit")
    std = fit_standardizer(X)
    Z = std.apply(X)
    y_pm = 2.0 * y.astype(np.float64) - 1.0
    x0 = np.zeros(X.shape[1] + 1)
    result = minimize(
        logreg_loss_grad,
        x0,
        args=(Z, y_pm, l2),
        method="L-BFGS-B",
        jac=True,
        options={"maxiter": max_iter, "gtol": tol, "ftol": 1e-14},
    )
    return LinearModel(
        weights=result.x[:-1], bias=float(result.x[-1]), standardizer=std
    )
