"""Bi-level antidote-data drivers.

Both drivers share the same outer loop: fix the antidote set size, optimize
the antidote points to minimize the fairness cost of clustering the
augmented data (fairness always measured on the original data), and grow
the set if the target threshold is not met.

The general driver treats the clustering-plus-fairness pipeline as a black
box and searches with the sampling-and-learning optimizer, embedding to a
lower dimension when the flattened antidote set is large. The convex driver
exploits that relaxing the shrinkage stationarity condition of SON
clustering to an affine one makes the centers an explicit affine function
of the antidote points, so the upper-level cost can be descended directly;
the relaxation is only a search surrogate and every reported cost is
recomputed with a fresh SON solve.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from . import kernels
from .clustering import (
    Centers,
    ClusteringSpec,
    assign,
    incidence_matrix,
    kmeans,
    pair_indices,
    son_solve,
    spectral,
)
from .datasets import Dataset, group_index
from .errors import ConfigError
from .fairness import FairnessSpec, balance_cost, evaluate, social_cost
from .numerics import solve_spd
from .zoopt import RacosConfig, SearchBox, racos_minimize, sre_minimize

BOX_MARGIN = 0.1


@dataclass(frozen=True)
class AntidoteConfig:
    V_s: int = 10
    xi: int = 1
    alpha: float = 0.0
    max_outer_iters: int = 20
    max_V_fraction: float = 0.5
    n_prime: int = 100
    sre_stages: int = 3
    inner_budget: int = 1000
    seed: int = 0
    gamma: float = 0.99          # convex driver only
    lam: float = 0.01            # convex driver only
    inner_steps: int = 2000      # convex driver subgradient steps
    restarts: int = 3            # convex driver multi-starts
    step_scale: float | None = None
    w_scale: float = 1.0
    social_all_rows: bool = True
    # pin the lower-level clustering seed; None derives it from `seed`
    cluster_seed: int | None = None
    racos: RacosConfig = field(default_factory=RacosConfig)

    def __post_init__(self):
        if self.xi < 1:
            raise ConfigError("xi must be a positive integer")
        if not 0.0 < self.gamma <= 1.0:
            raise ConfigError("gamma must lie in (0, 1]")
        if self.max_V_fraction <= 0:
            raise ConfigError("max_V_fraction must be positive")


@dataclass(frozen=True)
class AntidoteResult:
    V: np.ndarray
    fairness_before: float
    fairness_after: float
    ratio: float
    iterations: int
    status: str  # met_alpha | budget_exhausted | V_cap_reached
    centers_vanilla: np.ndarray | None = None
    centers_antidote: np.ndarray | None = None
    seed: int = 0


@dataclass(frozen=True)
class RelaxedKktSystem:
    """Affine single-level system after eliminating the auxiliary variables.

    With coupling c = (1 - gamma)/gamma the relaxed shrinkage condition
    forces zeta = c * eta, and eliminating eta, theta, zeta against the
    three affine conditions leaves (Id + c*L) mu = X with L the
    complete-graph Laplacian m*Id - ones.
    """

    m: int
    gamma: float
    c: float
    matrix: np.ndarray
    mu: np.ndarray
    eta: np.ndarray
    theta: np.ndarray
    zeta: np.ndarray

    def residuals(self, X):
        """Norms of the three affine conditions and the relaxed shrinkage."""
        X = np.asarray(X, dtype=np.float64)
        i_idx, j_idx = pair_indices(self.m)
        I = incidence_matrix(self.m)
        r_theta = np.linalg.norm(self.theta + self.mu - X)
        r_prox = np.linalg.norm(self.eta - self.gamma * (self.eta + self.zeta))
        r_eta = np.linalg.norm((self.mu[i_idx] - self.mu[j_idx]) - self.eta)
        r_dual = np.linalg.norm(I @ self.zeta - self.theta)
        return r_theta, r_prox, r_eta, r_dual


def build_relaxed_kkt(X, gamma) -> RelaxedKktSystem:
    """Solve the gamma-relaxed single-level system for centers mu."""
    X = np.asarray(X, dtype=np.float64)
    if not 0.0 < gamma <= 1.0:
        raise ConfigError("gamma must lie in (0, 1]")
    m = X.shape[0]
    c = (1.0 - gamma) / gamma
    L = m * np.eye(m) - np.ones((m, m))
    matrix = np.eye(m) + c * L
    mu = solve_spd(matrix, X)
    i_idx, j_idx = pair_indices(m)
    eta = mu[i_idx] - mu[j_idx]
    zeta = c * eta
    theta = X - mu
    return RelaxedKktSystem(
        m=m, gamma=gamma, c=c, matrix=matrix, mu=mu, eta=eta, theta=theta, zeta=zeta
    )


def search_box_for(U) -> SearchBox:
    """Bounding box of the data expanded by 10% of the span per side."""
    lo = U.min(axis=0)
    hi = U.max(axis=0)
    span = hi - lo
    margin = BOX_MARGIN * np.where(span > 0, span, 1.0)
    return SearchBox(lo - margin, hi + margin)


def _cluster(spec: ClusteringSpec, X, seed) -> Centers:
    if spec.kind == "kmeans":
        return kmeans(X, spec.k, seed)
    if spec.kind == "spectral":
        return spectral(X, spec.k, seed)
    raise ConfigError(f"unsupported clustering kind {spec.kind!r} for this driver")


def algorithm2(
    ds: Dataset, clustering: ClusteringSpec, fairness: FairnessSpec, cfg: AntidoteConfig
) -> AntidoteResult:
    """General driver: black-box search over antidote points.

    The objective evaluates the full pipeline (cluster the augmented data,
    measure fairness on the original data) and is deterministic because
    every evaluation reuses the same clustering seed.
    """
    if clustering.kind not in ("kmeans", "spectral"):
        raise ConfigError("general driver supports kmeans or spectral clustering")
    U = ds.points
    n, d = U.shape
    seq = np.random.SeedSequence(cfg.seed)
    init_seed, opt_seed, cluster_seed_seq = seq.spawn(3)
    cluster_seed = (
        cfg.cluster_seed
        if cfg.cluster_seed is not None
        else int(cluster_seed_seq.generate_state(1)[0])
    )

    vanilla = _cluster(clustering, U, cluster_seed)
    fairness_before = evaluate(fairness, vanilla, ds).cost

    box1 = search_box_for(U)
    init_rng = np.random.default_rng(init_seed)
    opt_seeds = opt_seed.spawn(cfg.max_outer_iters)

    V_s = cfg.V_s
    best = None
    status = "budget_exhausted"
    iterations = 0
    for t in range(cfg.max_outer_iters):
        if V_s > cfg.max_V_fraction * n:
            status = "V_cap_reached"
            break
        iterations = t + 1
        D = V_s * d
        lower = np.tile(box1.lower, V_s)
        upper = np.tile(box1.upper, V_s)
        box = SearchBox(lower, upper)

        def f(v_flat, _Vs=V_s):
            V = v_flat.reshape(_Vs, d)
            mu = _cluster(clustering, np.vstack([U, V]), cluster_seed)
            return evaluate(fairness, mu, ds).cost

        x0 = box.sample(init_rng)
        stage_seed = int(opt_seeds[t].generate_state(1)[0])
        if D > cfg.n_prime:
            v_best, _ = sre_minimize(
                f,
                D,
                cfg.n_prime,
                cfg.sre_stages,
                cfg.inner_budget,
                box,
                seed=stage_seed,
                x0=x0,
                w_scale=cfg.w_scale,
                cfg=cfg.racos,
            )
        else:
            v_best, _, _ = racos_minimize(f, box, cfg.inner_budget, cfg.racos, seed=stage_seed)

        V = v_best.reshape(V_s, d)
        mu_after = _cluster(clustering, np.vstack([U, V]), cluster_seed)
        fairness_after = evaluate(fairness, mu_after, ds).cost
        if best is None or fairness_after < best[1]:
            best = (V, fairness_after, mu_after)
        if fairness_after <= cfg.alpha:
            status = "met_alpha"
            best = (V, fairness_after, mu_after)
            break
        V_s += cfg.xi
    else:
        status = "budget_exhausted"

    V, fairness_after, mu_after = best
    return AntidoteResult(
        V=V,
        fairness_before=fairness_before,
        fairness_after=fairness_after,
        ratio=V.shape[0] / n,
        iterations=iterations,
        status=status,
        centers_vanilla=vanilla.mu,
        centers_antidote=mu_after.mu,
        seed=cfg.seed,
    )


def _relaxed_centers(X_full, c):
    """Closed-form solve of (Id + c*L) mu = X using the rank-one structure."""
    m = X_full.shape[0]
    return (X_full + c * X_full.sum(axis=0, keepdims=True)) / (1.0 + c * m)


def _social_surrogate(mu, U, groups_idx):
    sq = kernels.pairwise_sq_dists(U, mu)
    nearest = np.argmin(sq, axis=1)
    mins = sq[np.arange(U.shape[0]), nearest]
    per_group = np.array([mins[idx].mean() for idx in groups_idx])
    return per_group, nearest


def algorithm1(ds: Dataset, cfg: AntidoteConfig) -> AntidoteResult:
    """Convex driver: SON clustering with the social fairness cost.

    The inner solve runs projected subgradient descent on the relaxed
    affine surrogate (multi-start, best iterate kept); candidate antidote
    sets are then screened by their true cost under a fresh SON solve.
    """
    U = ds.points
    n, d = U.shape
    groups_idx = group_index(ds)
    c = (1.0 - cfg.gamma) / cfg.gamma

    vanilla = son_solve(U, cfg.lam)
    fairness_before = social_cost(Centers(vanilla.mu, "son"), ds).cost

    box = search_box_for(U)
    seq = np.random.SeedSequence(cfg.seed)
    outer_seeds = seq.spawn(cfg.max_outer_iters)

    def true_cost(V):
        sol = son_solve(np.vstack([U, V]), cfg.lam)
        return social_cost(Centers(sol.mu, "son"), ds).cost, sol

    V_s = cfg.V_s if cfg.V_s >= 1 else 1
    best = None
    status = "budget_exhausted"
    iterations = 0
    step0 = cfg.step_scale if cfg.step_scale is not None else 0.1 * float(
        np.max(box.upper - box.lower)
    )
    for t in range(cfg.max_outer_iters):
        if V_s > cfg.max_V_fraction * n:
            status = "V_cap_reached"
            break
        iterations = t + 1
        m = n + V_s
        rng = np.random.default_rng(outer_seeds[t])
        candidates = []
        for _ in range(cfg.restarts):
            V = np.array([box.sample(rng) for _ in range(V_s)])
            candidates.append(V.copy())
            best_sur = np.inf
            best_V = V.copy()
            for step_i in range(1, cfg.inner_steps + 1):
                X_full = np.vstack([U, V])
                mu = _relaxed_centers(X_full, c)
                per_group, nearest = _social_surrogate(mu, U, groups_idx)
                j_star = int(np.argmax(per_group))
                if per_group[j_star] < best_sur:
                    best_sur = per_group[j_star]
                    best_V = V.copy()
                # subgradient of the active group's mean squared distance
                idx = groups_idx[j_star]
                grad_mu = np.zeros_like(mu)
                np.add.at(grad_mu, nearest[idx], -(2.0 / idx.size) * (U[idx] - mu[nearest[idx]]))
                # chain rule through mu = (X + c*colsum(X)) / (1 + c*m)
                grad_V = (grad_mu[n:] + c * grad_mu.sum(axis=0, keepdims=True)) / (1.0 + c * m)
                norm = np.linalg.norm(grad_V)
                if norm == 0:
                    break
                V = V - (step0 / np.sqrt(step_i)) * grad_V / norm
                V = np.clip(V, box.lower, box.upper)
            candidates.append(best_V)
            candidates.append(V.copy())

        evaluated = [(true_cost(V)[0], V) for V in candidates]
        cost_t, V_t = min(evaluated, key=lambda cv: cv[0])
        if best is None or cost_t < best[0]:
            best = (cost_t, V_t)
        if best[0] <= cfg.alpha:
            status = "met_alpha"
            break
        V_s += cfg.xi

    fairness_after, V = best
    sol_after = son_solve(np.vstack([U, V]), cfg.lam)
    return AntidoteResult(
        V=V,
        fairness_before=fairness_before,
        fairness_after=fairness_after,
        ratio=V.shape[0] / n,
        iterations=iterations,
        status=status,
        centers_vanilla=vanilla.mu,
        centers_antidote=sol_after.mu,
        seed=cfg.seed,
    )


@dataclass(frozen=True)
class ComparisonRecord:
    alpha: float
    V_ratio: float
    F_vanilla: float
    F_antidote: float
    status: str
    quality_vanilla: object = None
    quality_antidote: object = None


def compare_vanilla(
    ds: Dataset, clustering: ClusteringSpec, fairness: FairnessSpec, result: AntidoteResult
) -> ComparisonRecord:
    """Five-column comparison plus quality metrics for both clusterings on
    the original data. Quality is None when a clustering leaves fewer than
    two nonempty clusters on the data."""
    from .metrics import quality_report

    def quality(mu):
        if mu is None:
            return None
        labels = assign(ds.points, Centers(mu, clustering.kind)).labels
        if clustering.kind == "son":
            # fold per-point centers into fused-group labels
            groups = _fused_label_map(mu)
            labels = groups[labels]
        try:
            return quality_report(ds.points, labels)
        except Exception:
            return None

    return ComparisonRecord(
        alpha=fairness.alpha,
        V_ratio=result.ratio,
        F_vanilla=result.fairness_before,
        F_antidote=result.fairness_after,
        status=result.status,
        quality_vanilla=quality(result.centers_vanilla),
        quality_antidote=quality(result.centers_antidote),
    )


def _fused_label_map(mu, tol=1e-4):
    from .clustering import _fused_groups

    groups = _fused_groups(mu, tol)
    label = np.zeros(mu.shape[0], dtype=np.int64)
    for gi, rows in enumerate(groups):
        label[rows] = gi
    return label
