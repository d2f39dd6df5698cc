"""Lower-level clustering objectives: Lloyd k-means, unnormalized spectral
clustering, and sum-of-norms (SON) convex clustering via ADMM on the
incidence-matrix split, plus the nearest-center assignment rule.
"""

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigError, ConvergenceError, NumericsError
from .numerics import sym_eig

SPECTRAL_DENSE_CAP = 2000
FUSION_TOL = 1e-4


@dataclass(frozen=True)
class Centers:
    """Cluster centers (k, d), or one row per point for SON."""

    mu: np.ndarray
    kind: str = "kmeans"


@dataclass(frozen=True)
class Assignment:
    labels: np.ndarray


@dataclass(frozen=True)
class ClusteringSpec:
    """Which lower-level objective to run and its parameters."""

    kind: str  # kmeans | spectral | son
    k: int = 2
    lam: float = 0.01
    tol: float = 1e-6

    def __post_init__(self):
        if self.kind not in ("kmeans", "spectral", "son"):
            raise ConfigError(f"unknown clustering kind {self.kind!r}")


@dataclass(frozen=True)
class SonSolution:
    """SON centers with fused-group structure and the ADMM dual state."""

    mu: np.ndarray
    lam: float
    merged: list
    eta: np.ndarray | None = None
    theta: np.ndarray | None = None
    zeta: np.ndarray | None = None
    iterations: int = 0


def assign(X, centers: Centers) -> Assignment:
    """Nearest-center labels in Euclidean distance; ties go to the lowest index."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1] != centers.mu.shape[1]:
        raise NumericsError(
            f"dimension mismatch: points have {X.shape[1]} columns, "
            f"centers have {centers.mu.shape[1]}"
        )
    return Assignment(labels=kernels.assign_nearest(X, centers.mu))


def _kmeans_pp_init(X, k, rng):
    n = X.shape[0]
    centers = np.empty((k, X.shape[1]))
    centers[0] = X[rng.integers(n)]
    sq = kernels.min_sq_dists(X, centers[:1])
    for c in range(1, k):
        total = sq.sum()
        if total <= 0:
            centers[c] = X[rng.integers(n)]
        else:
            probs = sq / total
            centers[c] = X[rng.choice(n, p=probs)]
        sq = np.minimum(sq, kernels.min_sq_dists(X, centers[c : c + 1]))
    return centers


def kmeans_objective(X, mu):
    return float(kernels.min_sq_dists(X, mu).sum())


def kmeans(X, k, seed, max_iter=300, tol=1e-6) -> Centers:
    """Lloyd iterations from a k-means++ start; deterministic given seed.

    Empty clusters are repaired by reseeding at the point currently worst
    fit by its own center. The objective is asserted non-increasing across
    plain Lloyd steps.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if k > n:
        raise ConfigError(f"k={k} exceeds {n} points")
    rng = np.random.default_rng(seed)
    mu = _kmeans_pp_init(X, k, rng)
    prev_obj = np.inf
    repaired = False
    for _ in range(max_iter):
        labels = kernels.assign_nearest(X, mu)
        new_mu, counts = kernels.update_centers(X, labels, k)
        empty = np.flatnonzero(counts == 0)
        if empty.size:
            # reseed each empty center at the point farthest from its center
            sq = kernels.min_sq_dists(X, new_mu[counts > 0])
            order = np.argsort(-sq)
            for rank, c in enumerate(empty):
                new_mu[c] = X[order[rank % n]]
            repaired = True
        obj = kmeans_objective(X, new_mu)
        if not repaired and obj > prev_obj + 1e-9 * max(prev_obj, 1.0):
            raise ConvergenceError("Lloyd objective increased")
        repaired = False
        move = np.linalg.norm(new_mu - mu)
        mu = new_mu
        prev_obj = obj
        if move < tol:
            break
    return Centers(mu=mu, kind="kmeans")


def spectral(X, k, seed) -> Centers:
    """Unnormalized spectral clustering with a Gaussian similarity graph.

    Bandwidth is the median pairwise distance; the returned centers are the
    input-space means of the spectral clusters so center-based fairness
    costs stay evaluable.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    n = X.shape[0]
    if n > SPECTRAL_DENSE_CAP:
        raise ConfigError(
            f"{n} rows exceed the dense eigensolve cap ({SPECTRAL_DENSE_CAP}); "
            "subsample the dataset first"
        )
    if k > n:
        raise ConfigError(f"k={k} exceeds {n} points")
    if k == 1:
        return Centers(mu=X.mean(axis=0, keepdims=True), kind="spectral")
    sq = kernels.pairwise_sq_dists(X, X)
    dists = np.sqrt(sq[np.triu_indices(n, k=1)])
    sigma = np.median(dists)
    if sigma <= 0:
        sigma = 1.0
    W = np.exp(-sq / (2.0 * sigma**2))
    np.fill_diagonal(W, 0.0)
    L = np.diag(W.sum(axis=1)) - W
    emb = sym_eig(L, k).vectors
    emb_centers = kmeans(emb, k, seed)
    labels = kernels.assign_nearest(emb, emb_centers.mu)
    mu, counts = kernels.update_centers(X, labels, k)
    # empty spectral clusters collapse onto the grand mean
    mu[counts == 0] = X.mean(axis=0)
    return Centers(mu=mu, kind="spectral")


def pair_indices(m):
    """Row/column indices of all pairs i < j, in lexicographic order."""
    i_idx, j_idx = np.triu_indices(m, k=1)
    return i_idx, j_idx


def incidence_matrix(m):
    """Node-arc incidence matrix of the complete graph on m nodes.

    Column l for pair (i, j) has +1 at row i and -1 at row j, so
    ``I @ I.T`` is the complete-graph Laplacian m*Id - ones.
    """
    i_idx, j_idx = pair_indices(m)
    n_pairs = i_idx.size
    I = np.zeros((m, n_pairs))
    I[i_idx, np.arange(n_pairs)] = 1.0
    I[j_idx, np.arange(n_pairs)] = -1.0
    return I


def _scatter_pairs(E, i_idx, j_idx, m):
    """Compute I @ E for per-pair rows E (|O|, d) without forming I."""
    out = np.zeros((m, E.shape[1]))
    np.add.at(out, i_idx, E)
    np.subtract.at(out, j_idx, E)
    return out


def son_objective(X, mu, lam):
    X = np.asarray(X, dtype=np.float64)
    mu = np.asarray(mu, dtype=np.float64)
    i_idx, j_idx = pair_indices(X.shape[0])
    fit = 0.5 * np.sum((mu - X) ** 2)
    penalty = lam * np.linalg.norm(mu[i_idx] - mu[j_idx], axis=1).sum()
    return float(fit + penalty)


def _fused_groups(mu, tol=FUSION_TOL):
    m = mu.shape[0]
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    i_idx, j_idx = pair_indices(m)
    close = np.linalg.norm(mu[i_idx] - mu[j_idx], axis=1) <= tol
    for i, j in zip(i_idx[close], j_idx[close]):
        ri, rj = find(int(i)), find(int(j))
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for r in range(m):
        groups.setdefault(find(r), []).append(r)
    return [groups[r] for r in sorted(groups)]


def son_solve(X, lam, tol=1e-6, max_iter=5000, rho=1.0) -> SonSolution:
    """Minimize 0.5*||mu - X||^2 + lam * sum_{i<j} ||mu_i - mu_j|| by ADMM.

    The split enforces eta = I^T mu per pair; the mu-update has a closed
    form because I @ I.T is the complete-graph Laplacian. Scaled duals are
    mapped back to the unscaled dual variables (theta, zeta) on return.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    if lam < 0:
        raise ConfigError("lambda must be non-negative")
    m, d = X.shape
    i_idx, j_idx = pair_indices(m)
    n_pairs = i_idx.size
    if lam == 0.0 or n_pairs == 0:
        return SonSolution(
            mu=X.copy(),
            lam=lam,
            merged=_fused_groups(X),
            eta=(X[i_idx] - X[j_idx]),
            theta=np.zeros_like(X),
            zeta=np.zeros((n_pairs, d)),
        )

    eta = X[i_idx] - X[j_idx]
    u = np.zeros((n_pairs, d))
    scale = 1.0 + rho * m
    for it in range(1, max_iter + 1):
        # mu-update: (Id + rho * I I^T) mu = X + rho * I (eta - u),
        # inverted in closed form via Sherman-Morrison
        rhs = X + rho * _scatter_pairs(eta - u, i_idx, j_idx, m)
        mu = (rhs + rho * rhs.sum(axis=0, keepdims=True)) / scale
        diffs = mu[i_idx] - mu[j_idx]
        eta_old = eta
        eta = kernels.block_soft_threshold(diffs + u, lam / rho)
        u = u + diffs - eta
        r_prim = np.linalg.norm(diffs - eta)
        r_dual = rho * np.linalg.norm(
            _scatter_pairs(eta - eta_old, i_idx, j_idx, m)
        )
        eps_prim = tol * max(np.linalg.norm(diffs), np.linalg.norm(eta), 1.0)
        eps_dual = tol * max(rho * np.linalg.norm(_scatter_pairs(u, i_idx, j_idx, m)), 1.0)
        if r_prim <= eps_prim and r_dual <= eps_dual:
            return SonSolution(
                mu=mu,
                lam=lam,
                merged=_fused_groups(mu),
                eta=eta,
                theta=X - mu,
                zeta=rho * u,
                iterations=it,
            )
    raise ConvergenceError(
        f"SON ADMM did not converge in {max_iter} iterations "
        f"(primal residual {r_prim:.3e}, dual residual {r_dual:.3e})"
    )


def son_kkt_residuals(sol: SonSolution, X, eta, theta, zeta, lambda_scaled=False):
    """Frobenius norms of the four stationarity conditions for the SON split.

    ``eta`` and ``zeta`` are per-pair rows (|O|, d). The shrinkage factor in
    the second condition is max{0, 1 - 1/||v||} per pair by default;
    ``lambda_scaled`` switches to max{0, 1 - lam/||v||}, the proximal map of
    lam times the Euclidean norm.
    """
    X = np.asarray(X, dtype=np.float64)
    mu = sol.mu
    m, d = X.shape
    i_idx, j_idx = pair_indices(m)
    n_pairs = i_idx.size
    for name, arr, shape in [
        ("eta", eta, (n_pairs, d)),
        ("theta", theta, (m, d)),
        ("zeta", zeta, (n_pairs, d)),
    ]:
        if np.asarray(arr).shape != shape:
            raise NumericsError(f"{name} has shape {np.asarray(arr).shape}, expected {shape}")
    eta = np.asarray(eta, dtype=np.float64)
    theta = np.asarray(theta, dtype=np.float64)
    zeta = np.asarray(zeta, dtype=np.float64)

    shrink = sol.lam if lambda_scaled else 1.0
    r1 = np.linalg.norm(theta + mu - X)
    r2 = np.linalg.norm(eta - kernels.block_soft_threshold(eta + zeta, shrink))
    r3 = np.linalg.norm((mu[i_idx] - mu[j_idx]) - eta)
    r4 = np.linalg.norm(_scatter_pairs(zeta, i_idx, j_idx, m) - theta)
    return r1, r2, r3, r4
