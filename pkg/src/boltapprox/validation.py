"""Input checks shared by the estimator classes."""

from __future__ import annotations

import numpy as np
from sklearn.utils.validation import check_array

from .exceptions import InputError


def check_label_matrix(X) -> np.ndarray:
    """Two integer columns: s-label and p-label of each sample."""
    X = check_array(X, dtype=None, ensure_2d=True)
    if X.shape[1] != 2:
        raise InputError(f"expected 2 label columns (s, p), got {X.shape[1]}")
    as_int = X.astype(np.int64)
    if not np.array_equal(as_int, X):
        raise InputError("class labels must be integers")
    if as_int.min() < 0:
        raise InputError("class labels must be nonnegative")
    return as_int


def check_target(y, n_samples: int) -> np.ndarray:
    y = check_array(y, ensure_2d=False, dtype=np.float64)
    if y.ndim != 1:
        raise InputError("target must be one-dimensional")
    if y.size != n_samples:
        raise InputError(f"target has {y.size} values for {n_samples} samples")
    return y


def lookup_labels(values: np.ndarray, known: np.ndarray, name: str) -> np.ndarray:
    """Positions of ``values`` inside the sorted array ``known``."""
    pos = np.searchsorted(known, values)
    pos = np.clip(pos, 0, known.size - 1)
    bad = known[pos] != values
    if np.any(bad):
        raise InputError(f"unseen {name}-labels: {np.unique(values[bad]).tolist()}")
    return pos
