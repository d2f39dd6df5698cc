"""Dataset ingestion and synthetic fixtures.

A :class:`Dataset` couples a point matrix with per-point protected-group
labels. Antidote points deliberately carry no group label: group structure
is a property of the original data only, and every fairness computation
downstream works off the original rows.
"""

import csv
import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """Points (n, d) with group indices in [0, g)."""

    points: np.ndarray
    groups: np.ndarray
    g: int
    group_names: list | None = None
    dropped_rows: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        grp = np.asarray(self.groups, dtype=np.int64)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "groups", grp)
        if pts.ndim != 2:
            raise DataError(f"points must be 2-D, got shape {pts.shape}")
        if grp.shape != (pts.shape[0],):
            raise DataError("groups length must equal number of points")
        if not np.all(np.isfinite(pts)):
            raise DataError("points contain non-finite values")
        if self.g < 1 or grp.min(initial=0) < 0 or (grp.size and grp.max() >= self.g):
            raise DataError("group indices must lie in [0, g)")
        present = np.bincount(grp, minlength=self.g)
        if np.any(present == 0):
            missing = int(np.argmin(present))
            raise DataError(f"group {missing} has no members")

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]


def group_index(ds: Dataset):
    """Per-group row-index lists; they partition [0, n)."""
    return [np.flatnonzero(ds.groups == j) for j in range(ds.g)]


def load_csv(path, group_column, feature_columns):
    """Load a header-first CSV with one categorical group column.

    Group labels are encoded densely in first-appearance order. Rows with a
    missing or unparsable feature value are dropped; the count is logged and
    recorded on the returned dataset.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in [group_column, *feature_columns]:
            if col not in header:
                raise DataError(f"column {col!r} not found in {path}")
        rows = []
        labels = []
        dropped = 0
        for record in reader:
            try:
                feats = [float(record[c]) for c in feature_columns]
            except (TypeError, ValueError):
                dropped += 1
                continue
            if not all(np.isfinite(feats)):
                dropped += 1
                continue
            group = record[group_column]
            if group is None or group == "":
                dropped += 1
                continue
            rows.append(feats)
            labels.append(group)
    if dropped:
        log.warning("dropped %d rows with missing values from %s", dropped, path)
    if not rows:
        raise DataError(f"no usable rows in {path} after cleaning")
    names = []
    seen = {}
    for lab in labels:
        if lab not in seen:
            seen[lab] = len(names)
            names.append(lab)
    if len(names) < 2:
        raise DataError(f"need at least 2 distinct groups, found {len(names)}")
    groups = np.array([seen[lab] for lab in labels], dtype=np.int64)
    return Dataset(
        points=np.array(rows, dtype=np.float64),
        groups=groups,
        g=len(names),
        group_names=names,
        dropped_rows=dropped,
    )


def standardize(ds: Dataset) -> Dataset:
    """Zero-mean, unit sample-sd features; zero-variance features go to 0."""
    if ds.n < 2:
        raise DataError("standardize needs at least 2 rows")
    X = ds.points
    mean = X.mean(axis=0)
    sd = X.std(axis=0, ddof=1)
    out = np.zeros_like(X)
    nz = sd > 0
    out[:, nz] = (X[:, nz] - mean[nz]) / sd[nz]
    return Dataset(out, ds.groups, ds.g, ds.group_names, ds.dropped_rows)


def subsample(ds: Dataset, m, seed) -> Dataset:
    """Uniform sample of m rows without replacement, keeping all groups.

    Resamples up to 100 times until every group is represented.
    """
    if m > ds.n:
        raise DataError(f"cannot sample {m} rows from {ds.n}")
    if m == ds.n:
        return Dataset(ds.points.copy(), ds.groups.copy(), ds.g, ds.group_names)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        idx = np.sort(rng.choice(ds.n, size=m, replace=False))
        groups = ds.groups[idx]
        if np.unique(groups).size == ds.g:
            return Dataset(ds.points[idx], groups, ds.g, ds.group_names)
    raise DataError(f"could not retain all {ds.g} groups in {m} samples after 100 attempts")


def make_skewed_blobs(n, d, g, skew, seed, blobs=None, separation=6.0, spread=1.0,
                      lean=1.2):
    """Gaussian blobs whose per-blob group proportions are skewed.

    Blob b is dominated by group ``b % g``: that group's share is
    ``1/g + skew*(1 - 1/g)``, the rest split evenly. skew=0 gives equal
    proportions in every blob; skew=1 makes each blob single-group, so
    vanilla clustering that recovers the blobs has the worst possible
    balance.

    Within each blob the dominant group leans toward the middle of the
    configuration by ``lean * spread`` (the minority leans away), so points
    near the cluster boundary are dominant-group-rich: shifting the
    boundary trades a donor cluster's dominant group into the neighbor
    where it is the minority, which is exactly the regime where a small
    antidote set can improve balance.
    """
    if g < 2:
        raise DataError("need at least 2 groups")
    if not 0.0 <= skew <= 1.0:
        raise DataError("skew must lie in [0, 1]")
    n_blobs = blobs if blobs is not None else g
    rng = np.random.default_rng(seed)

    # deterministic blob centers: a line in 1-D, a circle otherwise
    centers = np.zeros((n_blobs, d))
    if d == 1:
        centers[:, 0] = separation * np.arange(n_blobs)
    else:
        angles = 2.0 * np.pi * np.arange(n_blobs) / n_blobs
        centers[:, 0] = separation * np.cos(angles)
        centers[:, 1] = separation * np.sin(angles)

    sizes = np.full(n_blobs, n // n_blobs, dtype=int)
    sizes[: n % n_blobs] += 1

    grand = centers.mean(axis=0)
    points = []
    groups = []
    for b in range(n_blobs):
        nb = sizes[b]
        dominant = b % g
        shares = np.full(g, (1.0 - (1.0 / g + skew * (1.0 - 1.0 / g))) / (g - 1))
        shares[dominant] = 1.0 / g + skew * (1.0 - 1.0 / g)
        counts = np.floor(shares * nb).astype(int)
        # largest-remainder rounding so counts sum to nb
        remainder = shares * nb - counts
        for j in np.argsort(-remainder)[: nb - counts.sum()]:
            counts[j] += 1
        blob_groups = np.repeat(np.arange(g), counts)
        inward = grand - centers[b]
        norm = np.linalg.norm(inward)
        inward = inward / norm if norm > 0 else np.zeros(d)
        offsets = np.where(blob_groups == dominant, lean, -lean)[:, None] * (
            spread * inward
        )
        points.append(
            centers[b] + offsets + spread * rng.standard_normal((nb, d))
        )
        groups.append(blob_groups)

    X = np.vstack(points)
    y = np.concatenate(groups)
    order = rng.permutation(n)
    return Dataset(X[order], y[order], g)
