"""Zeroth-order minimization: a sampling-and-learning optimizer that
alternates classifying an archive into positive/negative samples with
learning an axis-aligned promising region, plus a sequential random
embedding wrapper for high-dimensional objectives with low effective
dimensionality.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class SearchBox:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=np.float64)
        hi = np.asarray(self.upper, dtype=np.float64)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ConfigError("box bounds must be 1-D vectors of equal length")
        if not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
            raise ConfigError("box bounds must be finite")
        if np.any(lo > hi):
            raise ConfigError("box lower bound exceeds upper bound")

    @property
    def dim(self):
        return self.lower.size

    def clip(self, x):
        return np.clip(x, self.lower, self.upper)

    def sample(self, rng, lower=None, upper=None):
        lo = self.lower if lower is None else lower
        hi = self.upper if upper is None else upper
        return lo + (hi - lo) * rng.random(self.dim)


@dataclass(frozen=True)
class RacosConfig:
    positive_size: int = 5
    init_samples: int = 20
    explore_prob: float = 0.1
    shrink_attempts: int = 30
    neg_capacity: int = 100
    # dimensions left free when sampling from the learned region; all other
    # coordinates are pinned to the chosen positive sample
    uncertain_dims: int = 1


@dataclass
class OptState:
    """Archive and learned region of one sampling-and-learning run."""

    samples: list = field(default_factory=list)
    values: list = field(default_factory=list)
    region_lower: np.ndarray | None = None
    region_upper: np.ndarray | None = None
    evaluations: int = 0
    seed: int | None = None
    best_trace: list = field(default_factory=list)


def _learn_region(box, positive, negatives, rng, attempts):
    """Shrink the box along random coordinates until it excludes every
    negative sample while still containing the chosen positive one."""
    lower = box.lower.copy()
    upper = box.upper.copy()
    if negatives.size == 0:
        return lower, upper
    for _ in range(attempts):
        inside = np.all((negatives >= lower) & (negatives <= upper), axis=1)
        idx = np.flatnonzero(inside)
        if idx.size == 0:
            break
        neg = negatives[idx[rng.integers(idx.size)]]
        dims = np.flatnonzero(neg != positive)
        if dims.size == 0:
            continue  # duplicate of the positive: cannot separate
        c = dims[rng.integers(dims.size)]
        cut = positive[c] + (neg[c] - positive[c]) * rng.random()
        if neg[c] < positive[c]:
            lower[c] = max(lower[c], cut)
        else:
            upper[c] = min(upper[c], cut)
    return lower, upper


def racos_minimize(f, box: SearchBox, budget, cfg: RacosConfig = RacosConfig(), seed=0):
    """Minimize f over the box with at most ``budget`` evaluations.

    Returns (best point, best value, final OptState); deterministic given
    the seed. Budget exhaustion is normal termination.
    """
    if budget < 1:
        raise ConfigError("budget must be positive")
    rng = np.random.default_rng(seed)
    state = OptState(seed=seed)

    n_init = min(cfg.init_samples, budget)
    for _ in range(n_init):
        x = box.sample(rng)
        state.samples.append(x)
        state.values.append(float(f(x)))
        state.evaluations += 1
        state.best_trace.append(min(state.values))

    r = min(cfg.positive_size, len(state.samples))
    while state.evaluations < budget:
        order = np.argsort(state.values, kind="stable")
        pos_idx = order[:r]
        neg_idx = order[r:]
        # forget random surplus negatives to bound the archive
        if neg_idx.size > cfg.neg_capacity:
            keep = rng.choice(neg_idx.size, size=cfg.neg_capacity, replace=False)
            drop = np.setdiff1d(neg_idx, neg_idx[keep])
            for i in sorted(drop, reverse=True):
                del state.samples[i]
                del state.values[i]
            order = np.argsort(state.values, kind="stable")
            pos_idx = order[:r]
            neg_idx = order[r:]

        positive = state.samples[pos_idx[rng.integers(pos_idx.size)]]
        negatives = (
            np.array([state.samples[i] for i in neg_idx])
            if neg_idx.size
            else np.empty((0, box.dim))
        )
        lower, upper = _learn_region(box, positive, negatives, rng, cfg.shrink_attempts)
        # pin all but a few random dimensions to the positive sample
        if 0 < cfg.uncertain_dims < box.dim:
            free = rng.choice(box.dim, size=cfg.uncertain_dims, replace=False)
            pinned = np.ones(box.dim, dtype=bool)
            pinned[free] = False
            lower = np.where(pinned, positive, lower)
            upper = np.where(pinned, positive, upper)
        state.region_lower, state.region_upper = lower, upper

        if rng.random() < 1.0 - cfg.explore_prob:
            x = box.sample(rng, lower, upper)
        else:
            x = box.sample(rng)
        state.samples.append(x)
        state.values.append(float(f(x)))
        state.evaluations += 1
        state.best_trace.append(min(state.values))

    best = int(np.argmin(state.values))
    return state.samples[best].copy(), state.values[best], state


def sre_minimize(
    f,
    dim,
    n_prime,
    stages,
    inner_budget,
    box: SearchBox,
    seed=0,
    x0=None,
    w_scale=1.0,
    cfg: RacosConfig = RacosConfig(),
):
    """Sequential random embedding around :func:`racos_minimize`.

    Each stage draws a fresh Gaussian projection (dim, n_prime) scaled by
    1/sqrt(n_prime), optimizes g(w) = f(clip(offset + A @ w)) in the
    embedded box, and moves the offset to the stage's best full-dimensional
    point. Returns the best point and value over all stages.
    """
    if n_prime >= dim:
        raise ConfigError(f"n_prime={n_prime} must be smaller than dim={dim}")
    if stages < 1:
        raise ConfigError("stages must be at least 1")
    if box.dim != dim:
        raise ConfigError("box dimension does not match dim")
    seeds = np.random.SeedSequence(seed).spawn(stages)
    offset = box.clip(
        np.asarray(x0, dtype=np.float64)
        if x0 is not None
        else (box.lower + box.upper) / 2.0
    )
    best_x = None
    best_val = np.inf
    w_box = SearchBox(np.full(n_prime, -w_scale), np.full(n_prime, w_scale))
    for stage_seed in seeds:
        rng = np.random.default_rng(stage_seed)
        A = rng.standard_normal((dim, n_prime)) / np.sqrt(n_prime)

        def g(w, _A=A, _off=offset):
            return f(box.clip(_off + _A @ w))

        w_best, val, _ = racos_minimize(g, w_box, inner_budget, cfg, seed=rng.integers(2**63))
        x_stage = box.clip(offset + A @ w_best)
        offset = x_stage
        if val < best_val:
            best_val = val
            best_x = x_stage
    return best_x, best_val
