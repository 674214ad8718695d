"""Dense linear algebra used to train ELMs.

Storage convention used throughout the package: every matrix is a 2-D
``float64`` numpy array in C (row-major) order, indexed ``A[row, col]``.
Data matrices follow the column-per-sample layout, so ``X`` has shape
``(D, N)``, the hidden weights ``W`` have shape ``(M, D)`` and the hidden
layer output ``H`` has shape ``(N, M)`` (one row per sample, one column
per hidden node).

Singular values below ``rcond * sigma_max`` are treated as zero. The
pseudoinverse is always formed from the SVD, never from the normal
equations, since ``H`` is close to singular when ``M`` is near ``N``.
"""

import numpy as np

DEFAULT_RCOND = 1e-12


class NumericalFailure(ArithmeticError):
    """Raised when a decomposition fails to converge."""


def as_matrix(A, name="A"):
    """Return ``A`` as a finite, non-empty 2-D float64 array."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise ValueError(f"{name} must have at least one row and column, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def as_vector(v, name="v"):
    """Return ``v`` as a finite, non-empty 1-D float64 array."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.shape[0] < 1:
        raise ValueError(f"{name} must be a non-empty 1-D vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError(f"{name} contains non-finite entries")
    return v


def _check_rcond(rcond):
    if not rcond >= 0:
        raise ValueError(f"rcond must be non-negative, got {rcond}")


def svd(A):
    """Thin singular value decomposition ``A = U @ diag(s) @ V.T``.

    Returns ``(U, s, V)`` with ``U`` of shape ``(m, k)``, ``s`` of length
    ``k = min(m, n)`` sorted non-increasing, and ``V`` of shape ``(n, k)``.
    Note that ``V`` is returned, not its transpose.
    """
    A = as_matrix(A)
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge for matrix of shape {A.shape}") from exc
    return U, s, Vt.T


def _kept(s, rcond):
    if s.size == 0 or s[0] == 0.0:
        return np.zeros(s.shape, dtype=bool)
    return s > rcond * s[0]


def pseudoinverse(A, rcond=DEFAULT_RCOND):
    """Moore-Penrose pseudoinverse via SVD.

    Singular values ``sigma_i > rcond * sigma_max`` are inverted, the rest
    are zeroed. The result has shape ``A.T.shape``.
    """
    _check_rcond(rcond)
    U, s, V = svd(A)
    keep = _kept(s, rcond)
    inv_s = np.zeros_like(s)
    inv_s[keep] = 1.0 / s[keep]
    return (V * inv_s) @ U.T


def min_norm_lsq(H, y, rcond=DEFAULT_RCOND):
    """Minimal-norm least-squares solution of ``H @ beta = y``.

    Equivalent to ``pseudoinverse(H, rcond) @ y`` but never forms the
    pseudoinverse explicitly.
    """
    _check_rcond(rcond)
    H = as_matrix(H, "H")
    y = as_vector(y, "y")
    if H.shape[0] != y.shape[0]:
        raise ValueError(f"H has {H.shape[0]} rows but y has length {y.shape[0]}")
    U, s, V = svd(H)
    keep = _kept(s, rcond)
    coef = (U[:, keep].T @ y) / s[keep]
    return V[:, keep] @ coef


def smallest_nonzero_singular_value(A, rcond=DEFAULT_RCOND):
    """Smallest singular value above ``rcond * sigma_max``; 0 if there is none."""
    _check_rcond(rcond)
    A = as_matrix(A)
    try:
        s = np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge for matrix of shape {A.shape}") from exc
    s = s[_kept(s, rcond)]
    return float(s[-1]) if s.size else 0.0
