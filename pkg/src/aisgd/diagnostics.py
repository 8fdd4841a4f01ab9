"""Prediction, error metrics and convergence checks."""
import csv
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, UnsupportedOperationError
from .models import transfer, transfer_array


@dataclass(frozen=True)
class TraceRecord:
    update_index: int
    metric_name: str
    value: float


def predict(spec, theta, x):
    theta = np.asarray(theta, dtype=float)
    x = np.asarray(x, dtype=float)
    if theta.shape != x.shape:
        raise InvalidInputError(f"dimension mismatch: theta {theta.shape}, x {x.shape}")
    eta = float(x @ theta)
    return transfer(spec, eta) if spec.is_glm else eta


def predict_many(spec, theta, X):
    X = np.asarray(X, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if X.ndim != 2 or X.shape[1] != theta.shape[0]:
        raise InvalidInputError(f"dimension mismatch: X {X.shape}, theta {theta.shape}")
    eta = X @ theta
    return transfer_array(spec, eta) if spec.is_glm else eta


def mse_to_truth(theta_hat, theta_star):
    """(1/p) ||theta_hat - theta_star||^2."""
    a = np.asarray(theta_hat, dtype=float)
    b = np.asarray(theta_star, dtype=float)
    if a.shape != b.shape:
        raise InvalidInputError(f"length mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(diff @ diff) / diff.size


def classification_error(spec, theta, X, y):
    """Fraction of rows where the 0.5-thresholded prediction misses y."""
    if spec.kind != "binomial":
        raise UnsupportedOperationError("classification error needs a binomial model")
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise InvalidInputError("empty test set")
    labels = predict_many(spec, theta, X) >= 0.5
    return float(np.mean(labels != (y == 1.0)))


def convergence_check(history, tol, window=1):
    """True when the last ``window`` relative changes are all below ``tol``.

    The change between consecutive iterates is measured as
    ``||a - b|| / max(1, ||b||)``.  Fewer than two iterates never count as
    converged.
    """
    if window < 1:
        raise InvalidInputError("window must be >= 1")
    hist = [np.atleast_1d(np.asarray(h, dtype=float)) for h in history]
    if len(hist) < 2:
        return False
    recent = hist[-(window + 1):]
    for prev, cur in zip(recent, recent[1:]):
        change = np.linalg.norm(cur - prev) / max(1.0, np.linalg.norm(cur))
        if not change < tol:
            return False
    return True


def write_trace(records, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["update_index", "metric", "value"])
        for r in records:
            w.writerow([r.update_index, r.metric_name, repr(float(r.value))])
