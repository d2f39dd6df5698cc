"""Hot-kernel backend selection.

The compiled Cython extension is used when available; the NumPy fallback is
used otherwise, or when ``ANTIDOTE_PURE_PYTHON`` is set in the environment.
Both backends expose the same functions and agree numerically.
"""

import os

if os.environ.get("ANTIDOTE_PURE_PYTHON"):
    from . import _py as _backend
else:
    try:
        from . import _core as _backend  # type: ignore[attr-defined]
    except ImportError:
        from . import _py as _backend

BACKEND = _backend.NAME

pairwise_sq_dists = _backend.pairwise_sq_dists
assign_nearest = _backend.assign_nearest
min_sq_dists = _backend.min_sq_dists
update_centers = _backend.update_centers
block_soft_threshold = _backend.block_soft_threshold

__all__ = [
    "BACKEND",
    "pairwise_sq_dists",
    "assign_nearest",
    "min_sq_dists",
    "update_centers",
    "block_soft_threshold",
]
