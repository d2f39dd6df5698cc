"""Pure-NumPy fallback for the hot kernels.

Mirrors the surface of the compiled ``_core`` extension; selected at import
time by :mod:`antidote_clustering.kernels` when the extension is unavailable
or ``ANTIDOTE_PURE_PYTHON`` is set.
"""

import numpy as np

NAME = "python"


def pairwise_sq_dists(X, C):
    """Squared Euclidean distances between rows of X (n,d) and C (k,d)."""
    X = np.asarray(X, dtype=np.float64)
    C = np.asarray(C, dtype=np.float64)
    diff = X[:, None, :] - C[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def assign_nearest(X, C):
    """Index of the nearest row of C for each row of X; ties -> lowest index."""
    return np.argmin(pairwise_sq_dists(X, C), axis=1).astype(np.int64)


def min_sq_dists(X, C):
    """Squared distance from each row of X to its nearest row of C."""
    return pairwise_sq_dists(X, C).min(axis=1)


def update_centers(X, labels, k):
    """Per-cluster means. Empty clusters get a zero row and count 0."""
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    d = X.shape[1]
    sums = np.zeros((k, d))
    np.add.at(sums, labels, X)
    counts = np.bincount(labels, minlength=k).astype(np.int64)
    nonempty = counts > 0
    centers = np.zeros((k, d))
    centers[nonempty] = sums[nonempty] / counts[nonempty, None]
    return centers, counts


def block_soft_threshold(V, t):
    """Row-wise shrinkage max(0, 1 - t/||v||) * v; zero rows stay zero."""
    V = np.asarray(V, dtype=np.float64)
    norms = np.sqrt(np.einsum("ij,ij->i", V, V))
    scale = np.zeros_like(norms)
    pos = norms > t
    scale[pos] = 1.0 - t / norms[pos]
    return V * scale[:, None]
