"""Clustering-quality indices: Silhouette, Davies-Bouldin, Calinski-Harabasz.

Conventions: lone-point clusters contribute silhouette 0; zero
within-cluster dispersion in Calinski-Harabasz yields an infinite sentinel
rather than a division by zero.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DataError


@dataclass(frozen=True)
class QualityReport:
    silhouette: float
    davies_bouldin: float
    calinski_harabasz: float


def _check_labels(X, labels):
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    if labels.shape != (X.shape[0],):
        raise DataError("labels length must match number of points")
    uniq = np.unique(labels)
    if uniq.size < 2:
        raise DataError("need at least 2 nonempty clusters")
    return X, labels, uniq


def silhouette(X, labels):
    X, labels, uniq = _check_labels(X, labels)
    n = X.shape[0]
    dist = np.sqrt(kernels.pairwise_sq_dists(X, X))
    members = {c: np.flatnonzero(labels == c) for c in uniq}
    scores = np.zeros(n)
    for p in range(n):
        own = members[labels[p]]
        if own.size == 1:
            continue  # lone point: s = 0
        a = dist[p, own].sum() / (own.size - 1)
        b = min(dist[p, members[c]].mean() for c in uniq if c != labels[p])
        denom = max(a, b)
        scores[p] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def davies_bouldin(X, labels):
    X, labels, uniq = _check_labels(X, labels)
    centroids = np.array([X[labels == c].mean(axis=0) for c in uniq])
    dispersion = np.array(
        [
            np.sqrt(kernels.min_sq_dists(X[labels == c], centroids[i : i + 1])).mean()
            for i, c in enumerate(uniq)
        ]
    )
    center_dist = np.sqrt(kernels.pairwise_sq_dists(centroids, centroids))
    k = uniq.size
    worst = np.zeros(k)
    for i in range(k):
        ratios = [
            (dispersion[i] + dispersion[j]) / center_dist[i, j]
            for j in range(k)
            if j != i and center_dist[i, j] > 0
        ]
        worst[i] = max(ratios) if ratios else 0.0
    return float(worst.mean())


def calinski_harabasz(X, labels):
    X, labels, uniq = _check_labels(X, labels)
    n = X.shape[0]
    k = uniq.size
    grand = X.mean(axis=0)
    between = 0.0
    within = 0.0
    for c in uniq:
        pts = X[labels == c]
        centroid = pts.mean(axis=0)
        between += pts.shape[0] * float(np.sum((centroid - grand) ** 2))
        within += float(np.sum((pts - centroid) ** 2))
    if within == 0.0:
        return float("inf")
    return float((between / within) * ((n - k) / (k - 1)))


def quality_report(X, labels) -> QualityReport:
    return QualityReport(
        silhouette=silhouette(X, labels),
        davies_bouldin=davies_bouldin(X, labels),
        calinski_harabasz=calinski_harabasz(X, labels),
    )
