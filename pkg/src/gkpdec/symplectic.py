"""Phase-space layer: symplectic form, two-mode couplers, composition, selection maps.

Coordinate convention is qpqp throughout: mode j (0-based) owns coordinates
(2j, 2j+1) = (q_j, p_j). For a Steane system with m storage modes the layout is
storage modes 0..m-1 followed by the 2m auxiliary modes, auxiliary l attached
to stabilizer l.
"""

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .linalg import DimensionError, as_matrix, as_vector

SYMPLECTIC_TOL = 1e-9

COUPLER_KINDS = ("qq", "pp", "qp")


class InvalidCouplingError(ValueError):
    """Coupler endpoints are invalid (same mode, or out of range)."""


def omega(n_modes):
    """Symplectic form in qpqp ordering: direct sum of [[0,1],[-1,0]] blocks."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    o = np.zeros((2 * n_modes, 2 * n_modes))
    for j in range(n_modes):
        o[2 * j, 2 * j + 1] = 1.0
        o[2 * j + 1, 2 * j] = -1.0
    return o


def symplectic_product(u1, u2):
    """omega(u1, u2) = u1^T Omega u2."""
    u1 = as_vector(u1)
    u2 = as_vector(u2)
    if u1.shape != u2.shape or u1.size % 2:
        raise DimensionError(f"need equal even lengths, got {u1.size} and {u2.size}")
    q1, p1 = u1[0::2], u1[1::2]
    q2, p2 = u2[0::2], u2[1::2]
    return float(np.dot(q1, p2) - np.dot(p1, q2))


def is_symplectic(mat, tol=SYMPLECTIC_TOL):
    mat = as_matrix(mat, square=True)
    n = mat.shape[0] // 2
    o = omega(n)
    return np.max(np.abs(mat.T @ o @ mat - o)) <= tol


@dataclass(frozen=True)
class SymplecticMatrix:
    """A real 2n x 2n matrix satisfying L^T Omega L = Omega."""

    n_modes: int
    mat: np.ndarray

    def __post_init__(self):
        mat = as_matrix(self.mat, square=True)
        if mat.shape[0] != 2 * self.n_modes:
            raise DimensionError(
                f"matrix is {mat.shape[0]}x{mat.shape[0]}, expected {2 * self.n_modes}"
            )
        if not is_symplectic(mat):
            raise ValueError("matrix does not satisfy the symplectic condition")
        object.__setattr__(self, "mat", mat)


def coupler(kind, j, k, tau, n_modes):
    """Two-mode coupler C_kind^{j->k}(tau) as a SymplecticMatrix.

    Actions on the quadratures (all other coordinates untouched):
      qq: p_j -> p_j - tau q_k,  p_k -> p_k - tau q_j
      pp: q_j -> q_j + tau p_k,  q_k -> q_k + tau p_j
      qp: p_j -> p_j - tau p_k,  q_k -> q_k + tau q_j
    """
    if kind not in COUPLER_KINDS:
        raise InvalidCouplingError(f"unknown coupler kind {kind!r}")
    if j == k:
        raise InvalidCouplingError("coupler endpoints must be distinct modes")
    if not (0 <= j < n_modes and 0 <= k < n_modes):
        raise InvalidCouplingError(f"mode out of range for n_modes={n_modes}")
    mat = np.eye(2 * n_modes)
    qj, pj, qk, pk = 2 * j, 2 * j + 1, 2 * k, 2 * k + 1
    if kind == "qq":
        mat[pj, qk] = -tau
        mat[pk, qj] = -tau
    elif kind == "pp":
        mat[qj, pk] = tau
        mat[qk, pj] = tau
    else:  # qp
        mat[pj, pk] = -tau
        mat[qk, qj] = tau
    return SymplecticMatrix(n_modes, mat)


def compose(ops):
    """Compose Gaussian operations; list order is application order.

    The first entry is applied first, so the result is L_k ... L_2 L_1.
    """
    ops = list(ops)
    if not ops:
        raise ValueError("compose needs at least one operation")
    n = ops[0].n_modes
    if any(op.n_modes != n for op in ops):
        raise DimensionError("all operations must act on the same number of modes")
    mat = reduce(lambda acc, op: op.mat @ acc, ops[1:], ops[0].mat)
    return SymplecticMatrix(n, mat)


def _selector(rows, width):
    p = np.zeros((len(rows), width))
    for i, r in enumerate(rows):
        p[i, r] = 1.0
    return p


@dataclass(frozen=True)
class SelectionMaps:
    """Coordinate selectors for a Steane system with m storage modes.

    pi_g picks the 2m storage coordinates, pi_m the measured auxiliary
    quadratures, pi_p the unmeasured ones; pi_s is pi_g stacked over pi_m.
    """

    m: int
    pi_g: np.ndarray
    pi_m: np.ndarray
    pi_p: np.ndarray
    pi_s: np.ndarray
    measured_coords: tuple


def selection_maps(m, measured=None):
    """Build SelectionMaps for m storage modes.

    By default every auxiliary is measured in q (coordinate 2m+2l for
    auxiliary l). `measured` overrides the per-auxiliary choice with a
    sequence over {"q", "p"}; this exists for reference circuits that
    measure some auxiliary in p.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if measured is None:
        measured = ("q",) * (2 * m)
    if len(measured) != 2 * m or any(c not in ("q", "p") for c in measured):
        raise ValueError("measured must be a length-2m sequence over {'q','p'}")
    width = 6 * m
    meas_rows = []
    unmeas_rows = []
    for l, choice in enumerate(measured):
        q_coord, p_coord = 2 * m + 2 * l, 2 * m + 2 * l + 1
        if choice == "q":
            meas_rows.append(q_coord)
            unmeas_rows.append(p_coord)
        else:
            meas_rows.append(p_coord)
            unmeas_rows.append(q_coord)
    pi_g = _selector(range(2 * m), width)
    pi_m = _selector(meas_rows, width)
    pi_p = _selector(unmeas_rows, width)
    return SelectionMaps(
        m=m,
        pi_g=pi_g,
        pi_m=pi_m,
        pi_p=pi_p,
        pi_s=np.vstack([pi_g, pi_m]),
        measured_coords=tuple(meas_rows),
    )
