"""Dense matrix/vector kernels shared by the rest of the package.

Everything is plain float64 numpy. Symmetric inputs to the decompositions
are symmetrized as (M + M^T)/2 when the asymmetry is below 1e-10 and
rejected otherwise, so round-off from covariance propagation is absorbed
but genuinely asymmetric matrices are caught early.
"""

import numpy as np
import scipy.linalg

SYM_TOL = 1e-10


class DecompositionError(ValueError):
    """A matrix factorization failed (non-symmetric or not positive-definite)."""


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


def as_matrix(a, square=False):
    """Validate and return a float64 2-D array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise DimensionError(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    return m


def as_vector(a):
    """Validate and return a float64 1-D array with finite entries."""
    v = np.asarray(a, dtype=float)
    if v.ndim != 1:
        raise DimensionError(f"expected a vector, got ndim={v.ndim}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector contains non-finite entries")
    return v


def _symmetrized(m):
    m = as_matrix(m, square=True)
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > SYM_TOL:
        raise DecompositionError(f"matrix is not symmetric (asymmetry {asym:.3g})")
    return 0.5 * (m + m.T)


def cholesky_upper(m):
    """Upper-triangular F with F^T F = m, for symmetric positive-definite m."""
    m = _symmetrized(m)
    try:
        lower = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"matrix is not positive-definite: {exc}") from exc
    return lower.T.copy()


def invert_spd(m):
    """Inverse of a symmetric positive-definite matrix, via Cholesky."""
    m = _symmetrized(m)
    try:
        c, low = scipy.linalg.cho_factor(m, lower=True)
    except scipy.linalg.LinAlgError as exc:
        raise DecompositionError(f"matrix is not positive-definite: {exc}") from exc
    inv = scipy.linalg.cho_solve((c, low), np.eye(m.shape[0]))
    return 0.5 * (inv + inv.T)


def generalized_eigvals(a, b):
    """All solutions mu of a v = mu b v, ascending; b must be SPD."""
    a = _symmetrized(a)
    b = _symmetrized(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")
    try:
        np.linalg.cholesky(b)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"b is not positive-definite: {exc}") from exc
    return scipy.linalg.eigh(a, b, eigvals_only=True)


def is_integer_unimodular(r, tol=1e-8):
    """True iff every entry of r is within tol of an integer and |det| = 1."""
    r = as_matrix(r, square=True)
    rounded = np.round(r)
    if np.max(np.abs(r - rounded)) > tol:
        return False
    det = round(np.linalg.det(rounded))
    return abs(det) == 1


def is_integral(a, tol=1e-9):
    """True iff every entry is within tol of an integer."""
    a = np.asarray(a, dtype=float)
    return bool(np.all(np.abs(a - np.round(a)) <= tol))
