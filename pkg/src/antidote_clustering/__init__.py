"""Antidote data for group-level fairness in center-based clustering.

Augment a dataset with a small set of extra points so that running an
unmodified clustering algorithm on the augmented data yields a fairer
result, with fairness always measured on the original data only.
"""

from .antidote import (
    AntidoteConfig,
    AntidoteResult,
    algorithm1,
    algorithm2,
    build_relaxed_kkt,
    compare_vanilla,
)
from .clustering import Centers, ClusteringSpec, SonSolution, assign, kmeans, son_solve, spectral
from .datasets import Dataset, load_csv, make_skewed_blobs, standardize, subsample
from .fairness import FairnessReport, FairnessSpec, balance_cost, social_cost
from .kernels import BACKEND
from .metrics import QualityReport, quality_report
from .zoopt import RacosConfig, SearchBox, racos_minimize, sre_minimize

__version__ = "0.1.0"

__all__ = [
    "AntidoteConfig",
    "AntidoteResult",
    "BACKEND",
    "Centers",
    "ClusteringSpec",
    "Dataset",
    "FairnessReport",
    "FairnessSpec",
    "QualityReport",
    "RacosConfig",
    "SearchBox",
    "SonSolution",
    "algorithm1",
    "algorithm2",
    "assign",
    "balance_cost",
    "build_relaxed_kkt",
    "compare_vanilla",
    "kmeans",
    "load_csv",
    "make_skewed_blobs",
    "quality_report",
    "racos_minimize",
    "social_cost",
    "son_solve",
    "spectral",
    "sre_minimize",
    "standardize",
    "subsample",
]
