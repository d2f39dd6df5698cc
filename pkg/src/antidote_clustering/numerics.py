"""Dense linear algebra used by the clustering objectives and the
single-level reduction: symmetric eigendecomposition, SPD solves, PCA.

Backed by LAPACK through NumPy/SciPy; the functions here add the input
validation and output conventions the rest of the package relies on
(ascending eigenvalues, unit eigenvectors with a fixed sign, structured
errors instead of raw ``LinAlgError``).
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, NotSpdError, NumericsError

SYMMETRY_RTOL = 1e-10


@dataclass(frozen=True)
class EigenPairs:
    """Ascending eigenvalues with matching orthonormal eigenvectors.

    ``vectors`` has one column per eigenvalue.
    """

    values: np.ndarray
    vectors: np.ndarray


def _check_square_symmetric(A):
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise NumericsError(f"expected a square matrix, got shape {A.shape}")
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.T) > SYMMETRY_RTOL * max(scale, 1.0):
        raise NumericsError("matrix is not symmetric within tolerance")
    return A


def sym_eig(A, want):
    """Smallest ``want`` eigenpairs of a symmetric matrix.

    Eigenvalues are returned ascending; each eigenvector is unit-norm with
    its largest-magnitude entry made positive so results are reproducible.
    """
    A = _check_square_symmetric(A)
    n = A.shape[0]
    if not 1 <= want <= n:
        raise NumericsError(f"want={want} out of range for a {n}x{n} matrix")
    try:
        values, vectors = scipy.linalg.eigh(A, subset_by_index=[0, want - 1])
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(
            f"symmetric eigensolver failed to converge (LAPACK cap): {exc}"
        ) from exc
    # fix the sign of each eigenvector for determinism
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            vectors[:, j] = -col
    return EigenPairs(values=values, vectors=vectors)


def solve_spd(A, B):
    """Solve A @ X = B for symmetric positive-definite A via Cholesky."""
    A = _check_square_symmetric(A)
    B = np.asarray(B, dtype=np.float64)
    if B.shape[0] != A.shape[0]:
        raise NumericsError(
            f"right-hand side has {B.shape[0]} rows, expected {A.shape[0]}"
        )
    try:
        factor = scipy.linalg.cho_factor(A, lower=True)
    except np.linalg.LinAlgError as exc:
        raise NotSpdError(f"matrix is not positive definite: {exc}") from exc
    return scipy.linalg.cho_solve(factor, B)


def pca(X, d_out, return_basis=False):
    """Project rows of X onto the top ``d_out`` principal directions.

    The data is column-centered first. With ``return_basis`` the (d, d_out)
    orthonormal basis is returned alongside, so ``proj @ basis.T``
    reconstructs the centered data when ``d_out == d``.
    """
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2:
        raise NumericsError(f"expected a 2-D matrix, got shape {X.shape}")
    if d_out > X.shape[1]:
        raise NumericsError(f"d_out={d_out} exceeds {X.shape[1]} columns")
    Xc = X - X.mean(axis=0)
    _, _, Vt = np.linalg.svd(Xc, full_matrices=False)
    basis = Vt[:d_out].T
    for j in range(basis.shape[1]):
        col = basis[:, j]
        if col[np.argmax(np.abs(col))] < 0:
            basis[:, j] = -col
    proj = Xc @ basis
    if return_basis:
        return proj, basis
    return proj
