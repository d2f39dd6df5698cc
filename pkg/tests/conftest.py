import numpy as np
import pytest

from antidote_clustering.datasets import Dataset


@pytest.fixture
def two_blob_ds():
    """40 points in two separated 2-D blobs, groups mixed 70/30 vs 30/70."""
    rng = np.random.default_rng(0)
    left = rng.normal([-4.0, 0.0], 0.5, size=(20, 2))
    right = rng.normal([4.0, 0.0], 0.5, size=(20, 2))
    groups = np.array([0] * 14 + [1] * 6 + [1] * 14 + [0] * 6)
    return Dataset(np.vstack([left, right]), groups, 2)


@pytest.fixture
def line_ds():
    """20 1-D points: a tight majority mass and a small offset minority."""
    rng = np.random.default_rng(3)
    x0 = 0.02 * rng.standard_normal(16)
    x1 = 1.0 + 0.02 * rng.standard_normal(4)
    X = np.concatenate([x0, x1])[:, None]
    return Dataset(X, np.array([0] * 16 + [1] * 4), 2)
