"""Acceptance suite: eleven criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines as they complete. Criteria 5-7 share their runs with criterion 10
through a module-level cache.
"""

import json
import subprocess
import sys
import time

import numpy as np
import pytest

from antidote_clustering.antidote import (
    AntidoteConfig,
    algorithm1,
    algorithm2,
    build_relaxed_kkt,
    search_box_for,
)
from antidote_clustering.clustering import (
    Centers,
    ClusteringSpec,
    assign,
    kmeans,
    son_kkt_residuals,
    son_objective,
    son_solve,
    spectral,
)
from antidote_clustering.datasets import Dataset, make_skewed_blobs
from antidote_clustering.fairness import balance_cost, social_cost, FairnessSpec
from antidote_clustering.metrics import davies_bouldin, quality_report, silhouette
from antidote_clustering.zoopt import SearchBox, racos_minimize, sre_minimize

CLUSTER_SEED = 7
_CACHE = {}


def _report(num, desc, ok, elapsed):
    line = f"{'PASS' if ok else 'FAIL'}  criterion {num:2d}: {desc} ({elapsed:.1f}s)"
    print(line)
    assert ok, line


# ---------------------------------------------------------------- criterion 1
def test_criterion_01_fairness_definition_oracle():
    t0 = time.time()
    rng = np.random.default_rng(0)
    ok = True
    for _ in range(1000):
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, 4))
        g = min(int(rng.integers(2, 4)), n)
        groups = rng.integers(0, g, size=n)
        groups[:g] = np.arange(g)
        X = rng.standard_normal((n, 2))
        mu = rng.standard_normal((k, 2))
        ds = Dataset(X, groups, g)
        centers = Centers(mu)

        # social, from the definition
        worst = -np.inf
        for j in range(g):
            pts = X[groups == j]
            total = sum(min(float(np.sum((p - c) ** 2)) for c in mu) for p in pts)
            worst = max(worst, total / len(pts))
        ok &= abs(social_cost(centers, ds).cost - worst) <= 1e-12

        # balance, from the definition
        labels = np.array([int(np.argmin([np.sum((p - c) ** 2) for c in mu])) for p in X])
        worst_r = np.inf
        for i in range(k):
            cluster = np.flatnonzero(labels == i)
            if cluster.size == 0:
                continue
            for j in range(g):
                inter = int(np.sum(groups[cluster] == j))
                if inter == 0:
                    term = 0.0
                else:
                    R = (np.sum(groups == j) / n) / (inter / cluster.size)
                    term = min(R, 1.0 / R)
                worst_r = min(worst_r, term)
        got = balance_cost(centers, ds).cost
        ok &= abs(got - (-worst_r)) <= 1e-12 and -1.0 <= got <= 0.0
    elapsed = time.time() - t0
    _report(1, "fairness costs match from-the-definition recomputation", ok and elapsed < 10, elapsed)


# ---------------------------------------------------------------- criterion 2
def test_criterion_02_son_correctness():
    t0 = time.time()
    rng = np.random.default_rng(1)
    ok = True

    # lambda = 0 returns the data exactly
    X = rng.standard_normal((6, 2))
    ok &= np.array_equal(son_solve(X, 0.0).mu, X)

    # 4-point 1-D objective vs two-stage dense grid search, 3 decimals
    def grid_objective(X1, lam):
        x = X1.ravel()
        lo, hi = x.min() - 0.1, x.max() + 0.1
        g = np.linspace(lo, hi, 40)
        M = np.stack(np.meshgrid(g, g, g, g, indexing="ij"), axis=-1).reshape(-1, 4)

        def obj(M):
            fid = 0.5 * ((M - x) ** 2).sum(axis=1)
            pen = np.zeros(M.shape[0])
            for i in range(4):
                for j in range(i + 1, 4):
                    pen += np.abs(M[:, i] - M[:, j])
            return fid + lam * pen

        b = M[np.argmin(obj(M))]
        axes = [np.linspace(bi - 0.05, bi + 0.05, 21) for bi in b]
        M2 = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 4)
        return float(obj(M2).min())

    for X1, lam in [
        (np.array([[0.0], [0.4], [1.0], [1.5]]), 0.05),
        (np.array([[-0.5], [0.0], [0.2], [0.9]]), 0.1),
    ]:
        sol = son_solve(X1, lam, tol=1e-9)
        ok &= abs(son_objective(X1, sol.mu, lam) - grid_objective(X1, lam)) < 1e-3

    # stationarity residuals as printed, below 10*tol, on a fusing instance
    tol = 1e-8
    X2 = np.array([[0.0], [0.1], [0.2], [0.3]])
    sol = son_solve(X2, 0.5, tol=tol)
    res = son_kkt_residuals(sol, X2, sol.eta, sol.theta, sol.zeta)
    ok &= max(res) < 10 * tol
    elapsed = time.time() - t0
    _report(2, "SON solver: exact at lambda=0, grid-verified objective, residuals", ok and elapsed < 30, elapsed)


# ---------------------------------------------------------------- criterion 3
def test_criterion_03_relaxed_kkt():
    t0 = time.time()
    rng = np.random.default_rng(2)
    ok = True
    for gamma in (0.5, 0.9, 0.99, 1 - 1e-6):
        X = rng.standard_normal((7, 3))
        sys_ = build_relaxed_kkt(X, gamma)
        ok &= max(sys_.residuals(X)) < 1e-10
    # m=2, gamma=0.5: c=1 so the system matrix is [[2,-1],[-1,2]]
    X = np.array([[1.0], [3.0]])
    sys_ = build_relaxed_kkt(X, 0.5)
    ok &= np.allclose(sys_.matrix, [[2.0, -1.0], [-1.0, 2.0]])
    ok &= np.allclose(sys_.mu, np.linalg.solve(sys_.matrix, X), atol=1e-12)
    elapsed = time.time() - t0
    _report(3, "relaxed stationarity system solves and matches 2x2 analytic case", ok and elapsed < 5, elapsed)


# ---------------------------------------------------------------- criterion 4
def test_criterion_04_lambda_sweep():
    t0 = time.time()
    rng = np.random.default_rng(3)
    x0 = 0.02 * rng.standard_normal(16)
    x1 = 1.0 + 0.02 * rng.standard_normal(4)
    ds = Dataset(np.concatenate([x0, x1])[:, None], np.array([0] * 16 + [1] * 4), 2)
    ok = True
    for lam in [round(0.001 * i, 3) for i in range(1, 11)]:
        cfg = AntidoteConfig(
            V_s=2, xi=1, alpha=0.0, max_outer_iters=1, max_V_fraction=0.1,
            seed=11, lam=lam, inner_steps=300, restarts=3,
        )
        res = algorithm1(ds, cfg)
        # recompute with a fresh convex solve
        sol = son_solve(np.vstack([ds.points, res.V]), lam)
        fresh = social_cost(Centers(sol.mu, "son"), ds).cost
        ok &= res.fairness_before - fresh >= 0 and res.ratio <= 0.1
    elapsed = time.time() - t0
    _report(4, "convex driver: non-negative improvement across the lambda grid", ok and elapsed < 120, elapsed)


# --------------------------------------------------------- criteria 5-7 cache
def _fixture(tag):
    if tag == "k2":
        return make_skewed_blobs(200, 2, 2, 0.6, seed=42, spread=2.5)
    if tag == "k3":
        return make_skewed_blobs(200, 2, 2, 0.6, seed=42, blobs=3, spread=2.0)
    return make_skewed_blobs(200, 2, 2, 0.6, seed=42, blobs=4, spread=2.0)


def _protocol(tag, kind, notion, k, budget):
    """Ten-seed improvement protocol shared by criteria 5-7 and 10."""
    key = (tag, kind, notion, k)
    if key in _CACHE:
        return _CACHE[key]
    ds = _fixture(tag)
    cluster = (lambda P: kmeans(P, k, CLUSTER_SEED)) if kind == "kmeans" else (
        lambda P: spectral(P, k, seed=CLUSTER_SEED)
    )
    vanilla = cluster(ds.points)
    cost_fn = balance_cost if notion == "balance" else social_cost
    fv = cost_fn(vanilla, ds).cost
    sil_v = silhouette(ds.points, assign(ds.points, vanilla).labels)
    wins, worst_delta, ratios = 0, 0.0, []
    for s in range(10):
        cfg = AntidoteConfig(
            V_s=1, xi=1, alpha=fv - 1e-9, inner_budget=budget, seed=s,
            max_outer_iters=3, max_V_fraction=0.05, cluster_seed=CLUSTER_SEED,
        )
        res = algorithm2(
            ds, ClusteringSpec(kind, k), FairnessSpec(notion, alpha=min(fv, 0.0)), cfg
        )
        ratios.append(res.ratio)
        if res.fairness_after < res.fairness_before:
            wins += 1
            anti = cluster(np.vstack([ds.points, res.V]))
            sil_a = silhouette(ds.points, assign(ds.points, anti).labels)
            worst_delta = max(worst_delta, abs(sil_a - sil_v))
    _CACHE[key] = {"wins": wins, "worst_sil_delta": worst_delta, "max_ratio": max(ratios)}
    return _CACHE[key]


# ---------------------------------------------------------------- criterion 5
def test_criterion_05_general_driver_balance():
    t0 = time.time()
    ds = _fixture("k2")
    vanilla = kmeans(ds.points, 2, CLUSTER_SEED)
    fv = balance_cost(vanilla, ds).cost

    # pre-registered lattice oracle: a single improving antidote point exists
    box = search_box_for(ds.points)
    xs = np.linspace(box.lower[0], box.upper[0], 40)
    ys = np.linspace(box.lower[1], box.upper[1], 40)
    exists = False
    for x in xs:
        for y in ys:
            aug = np.vstack([ds.points, [[x, y]]])
            if balance_cost(kmeans(aug, 2, CLUSTER_SEED), ds).cost < fv:
                exists = True
                break
        if exists:
            break

    out = _protocol("k2", "kmeans", "balance", 2, 600)
    ok = exists and out["wins"] >= 8 and out["max_ratio"] <= 0.05
    elapsed = time.time() - t0
    _report(5, f"kmeans+balance improves in {out['wins']}/10 seeds (oracle confirmed)", ok and elapsed < 180, elapsed)


# ---------------------------------------------------------------- criterion 6
def test_criterion_06_other_combinations():
    t0 = time.time()
    social = _protocol("k2", "kmeans", "social", 2, 600)
    spec = _protocol("k2", "spectral", "balance", 2, 600)
    ok = social["wins"] >= 7 and spec["wins"] >= 7
    elapsed = time.time() - t0
    _report(
        6,
        f"kmeans+social {social['wins']}/10, spectral+balance {spec['wins']}/10 seeds improve",
        ok and elapsed < 300,
        elapsed,
    )


# ---------------------------------------------------------------- criterion 7
def test_criterion_07_more_clusters():
    t0 = time.time()
    k3 = _protocol("k3", "kmeans", "balance", 3, 800)
    k4 = _protocol("k4", "kmeans", "balance", 4, 800)
    ok = k3["wins"] >= 7 and k4["wins"] >= 7
    elapsed = time.time() - t0
    _report(7, f"k=3 improves in {k3['wins']}/10, k=4 in {k4['wins']}/10 seeds", ok, elapsed)


# ---------------------------------------------------------------- criterion 8
def test_criterion_08_optimizer_sanity():
    t0 = time.time()

    def sphere(x):
        return float(np.sum(x**2))

    box10 = SearchBox(np.full(10, -1.0), np.full(10, 1.0))
    hits = sum(
        racos_minimize(sphere, box10, 2000, seed=s)[1] <= 0.05 for s in range(10)
    )

    D = 200
    box_hi = SearchBox(np.full(D, -5.0), np.full(D, 5.0))
    x0 = np.ones(D)

    def low_dim(x):
        return float(x[0] ** 2 + x[1] ** 2)

    f0 = low_dim(x0)
    sre_hits = sum(
        sre_minimize(low_dim, D, 10, 3, 700, box_hi, seed=s, x0=x0)[1] <= 0.1 * f0
        for s in range(10)
    )
    ok = hits >= 9 and sre_hits >= 8
    elapsed = time.time() - t0
    _report(8, f"direct search {hits}/10, embedded search {sre_hits}/10 seeds converge", ok and elapsed < 60, elapsed)


# ---------------------------------------------------------------- criterion 9
def test_criterion_09_metric_fixtures():
    t0 = time.time()
    X4 = np.array([[0.0], [1.0], [10.0], [11.0]])
    L4 = np.array([0, 0, 1, 1])
    want = ((10.5 - 1) / 10.5 + (9.5 - 1) / 9.5) / 2  # hand derivation
    ok = abs(silhouette(X4, L4) - want) < 1e-6
    ok &= abs(davies_bouldin(X4, L4) - 0.1) < 1e-12

    rng = np.random.default_rng(4)
    for _ in range(100):
        n = int(rng.integers(6, 25))
        k = int(rng.integers(2, 4))
        labels = rng.integers(0, k, size=n)
        labels[:k] = np.arange(k)
        X = rng.standard_normal((n, 3))
        base = quality_report(X, labels)
        perm = rng.permutation(k)
        Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        for other in (
            quality_report(X, perm[labels]),
            quality_report(X @ Q + rng.standard_normal(3), labels),
        ):
            ok &= abs(other.silhouette - base.silhouette) < 1e-8
            ok &= abs(other.davies_bouldin - base.davies_bouldin) < 1e-8
            ok &= abs(other.calinski_harabasz - base.calinski_harabasz) < 1e-6 * max(
                base.calinski_harabasz, 1.0
            )
    elapsed = time.time() - t0
    _report(9, "metric hand values and relabeling/rigid-motion invariance", ok and elapsed < 10, elapsed)


# --------------------------------------------------------------- criterion 10
def test_criterion_10_quality_preserved():
    t0 = time.time()
    runs = [
        _protocol("k2", "kmeans", "balance", 2, 600),
        _protocol("k2", "kmeans", "social", 2, 600),
        _protocol("k2", "spectral", "balance", 2, 600),
        _protocol("k3", "kmeans", "balance", 3, 800),
        _protocol("k4", "kmeans", "balance", 4, 800),
    ]
    worst = max(r["worst_sil_delta"] for r in runs)
    ok = worst <= 0.1
    elapsed = time.time() - t0
    _report(10, f"silhouette shift on successful runs at most {worst:.3f} (<= 0.1)", ok, elapsed)


# --------------------------------------------------------------- criterion 11
def test_criterion_11_cli_determinism(tmp_path):
    t0 = time.time()

    def cli(*args):
        proc = subprocess.run(
            [sys.executable, "-m", "antidote_clustering.cli", *args],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0, proc.stderr
        return proc.stdout

    data = tmp_path / "blobs.csv"
    ok = True

    # gen-fixture
    a, b = tmp_path / "ga.csv", tmp_path / "gb.csv"
    cli("gen-fixture", "--n", "60", "--seed", "3", "--out", str(a))
    cli("gen-fixture", "--n", "60", "--seed", "3", "--out", str(b))
    ok &= a.read_bytes() == b.read_bytes()
    data.write_bytes(a.read_bytes())

    # run
    outs = []
    for tag in ("ra", "rb"):
        j, c = tmp_path / f"{tag}.json", tmp_path / f"{tag}.csv"
        cli(
            "run", "--data", str(data), "--feature-cols", "x0,x1",
            "--combination", "kmeans+balance", "--alpha", "-1.0",
            "--inner-budget", "40", "--max-outer-iters", "1", "--seed", "5",
            "--out-json", str(j), "--out-csv", str(c),
        )
        outs.append((j.read_bytes(), c.read_bytes()))
    ok &= outs[0] == outs[1]
    ok &= json.loads(outs[0][0])["seed"] == 5

    # metrics
    m = [
        cli("metrics", "--data", str(data), "--feature-cols", "x0,x1",
            "--kmeans-k", "2", "--seed", "1")
        for _ in range(2)
    ]
    ok &= m[0] == m[1]

    # sweep-lambda
    s = []
    for tag in ("sa", "sb"):
        out = tmp_path / f"{tag}.csv"
        cli(
            "sweep-lambda", "--data", str(data), "--feature-cols", "x0,x1",
            "--lambdas", "0.002,0.01", "--vs", "1", "--max-outer-iters", "1",
            "--seed", "2", "--out-csv", str(out),
        )
        s.append(out.read_bytes())
    ok &= s[0] == s[1]
    elapsed = time.time() - t0
    _report(11, "every CLI subcommand is byte-identical under a fixed seed", ok, elapsed)
