"""Group-level fairness costs, always evaluated on the original data only.

Two notions are supported: the worst per-group average squared distance to
the nearest center ("social"), and the negated worst-case proportionality
ratio over clusters and groups ("balance", in [-1, 0]).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .clustering import Centers, assign
from .datasets import Dataset, group_index
from .errors import ConfigError, DataError


@dataclass(frozen=True)
class FairnessSpec:
    notion: str  # social | balance
    alpha: float

    def __post_init__(self):
        if self.notion not in ("social", "balance"):
            raise ConfigError(f"unknown fairness notion {self.notion!r}")
        if self.notion == "balance" and not -1.0 <= self.alpha <= 0.0:
            raise ConfigError("balance threshold must lie in [-1, 0]")


@dataclass(frozen=True)
class FairnessReport:
    cost: float
    per_group: np.ndarray
    worst_group: int
    worst_cluster: int | None = None


def social_cost(centers: Centers, ds: Dataset) -> FairnessReport:
    """Worst per-group mean squared distance to the nearest center."""
    sq = kernels.min_sq_dists(ds.points, centers.mu)
    per_group = np.array([sq[idx].mean() for idx in group_index(ds)])
    worst = int(np.argmax(per_group))
    return FairnessReport(
        cost=float(per_group[worst]), per_group=per_group, worst_group=worst
    )


def balance_cost(centers: Centers, ds: Dataset) -> FairnessReport:
    """Negative of the worst proportionality ratio min{R, 1/R}.

    R(i, j) compares group j's share of the data with its share of cluster
    i. A cluster with no members of some group contributes the worst term 0
    (the R -> inf limit); clusters empty on the data are skipped.
    """
    labels = assign(ds.points, centers).labels
    k = centers.mu.shape[0]
    n = ds.n
    cluster_sizes = np.bincount(labels, minlength=k)
    if not np.any(cluster_sizes > 0):
        raise DataError("no cluster contains any original data point")
    group_sizes = np.bincount(ds.groups, minlength=ds.g)

    per_group = np.full(ds.g, np.inf)
    worst_cluster_for = np.zeros(ds.g, dtype=int)
    for i in range(k):
        if cluster_sizes[i] == 0:
            continue
        in_cluster = labels == i
        for j in range(ds.g):
            inter = int(np.count_nonzero(in_cluster & (ds.groups == j)))
            if inter == 0:
                term = 0.0
            else:
                R = (group_sizes[j] / n) / (inter / cluster_sizes[i])
                term = min(R, 1.0 / R)
            if term < per_group[j]:
                per_group[j] = term
                worst_cluster_for[j] = i
    worst = int(np.argmin(per_group))
    return FairnessReport(
        cost=float(-per_group[worst]),
        per_group=per_group,
        worst_group=worst,
        worst_cluster=int(worst_cluster_for[worst]),
    )


def evaluate(spec: FairnessSpec, centers: Centers, ds: Dataset) -> FairnessReport:
    if spec.notion == "social":
        return social_cost(centers, ds)
    return balance_cost(centers, ds)
