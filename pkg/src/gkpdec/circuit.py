"""Steane-type QEC circuit synthesis and covariance propagation.

For an m-mode code with stabilizer basis S, auxiliary l couples to the
storage through the block matrix T_l: the identity except that the measured
q row of auxiliary l carries kappa_l = row l of K = diag(nu) S Omega, and the
p column of auxiliary l carries Omega kappa_l (the back-action). The full
circuit is Tbar = T_{2m} ... T_1.

Two measurement scalings are supported: "h" (nu_j = eta_j = ell, measuring
the raw stabilizer combinations modulo 2*pi) and "hprime" (nu_j = eta_j =
ell/|g_j| with |g_j| = ell |s_j|, unit-norm kappa rows). hprime is the
default: it injects the least squeezing and behaves best with noisy
auxiliaries.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .lattice import GkpCode
from .linalg import (
    DecompositionError,
    as_matrix,
    as_vector,
    generalized_eigvals,
    is_integer_unimodular,
)
from .noise import ELL
from .symplectic import SelectionMaps, SymplecticMatrix, omega, selection_maps

SCALINGS = ("h", "hprime")

_GOLDEN_TOL = 1e-12


class StabilizerViolationError(ValueError):
    """The circuit does not map the joint stabilizer lattice to itself."""


@dataclass(frozen=True)
class SteaneCircuit:
    code: GkpCode
    scaling: str
    tbar: SymplecticMatrix
    eta: np.ndarray  # auxiliary qunaught squeezings, one per stabilizer
    nu: np.ndarray  # measurement scalings, nu_j = eta_j
    maps: SelectionMaps
    k_matrix: np.ndarray

    @property
    def m(self):
        return self.code.m

    @property
    def windows(self):
        """Modular period of each measured value, in quadrature units."""
        out = np.empty(2 * self.m)
        for l, coord in enumerate(self.maps.measured_coords):
            q_measured = (coord - 2 * self.m) % 2 == 0
            out[l] = ELL * self.eta[l] if q_measured else ELL / self.eta[l]
        return out

    @property
    def aux_stabilizer_basis(self):
        """S_eta: block diagonal of diag(eta_j, 1/eta_j)."""
        blocks = [np.diag([e, 1.0 / e]) for e in self.eta]
        return scipy.linalg.block_diag(*blocks)

    @property
    def full_stabilizer_basis(self):
        """S_G (+) S_eta for the joint 3m-mode system."""
        return scipy.linalg.block_diag(self.code.basis, self.aux_stabilizer_basis)


def scaling_vectors(code, scaling):
    """(nu, eta) for a measurement scaling; nu_j = eta_j always.

    Besides the named scalings, an explicit positive vector of length 2m is
    accepted (any choice with eta = nu yields a valid circuit, but only the
    named ones are tied to validated performance numbers).
    """
    if isinstance(scaling, str):
        if scaling == "h":
            nu = np.full(2 * code.m, ELL)
        elif scaling == "hprime":
            g_norms = ELL * np.linalg.norm(code.basis, axis=1)
            nu = ELL / g_norms
        else:
            raise ValueError(f"unknown scaling {scaling!r}; expected one of {SCALINGS}")
    else:
        nu = as_vector(scaling)
        if nu.size != 2 * code.m or np.any(nu <= 0):
            raise ValueError("custom scaling must be a positive length-2m vector")
    return nu, nu.copy()


def build_k_matrix(code, scaling):
    """K = diag(nu) S Omega; row l holds the coupling strengths kappa_l."""
    nu, _ = scaling_vectors(code, scaling)
    return np.diag(nu) @ code.basis @ omega(code.m)


def build_tl(kappa_l, l, m):
    """The block matrix T_l coupling the storage to auxiliary l (0-based)."""
    kappa_l = as_vector(kappa_l)
    if kappa_l.size != 2 * m:
        raise ValueError(f"kappa_l must have length {2 * m}")
    if not 0 <= l < 2 * m:
        raise ValueError(f"auxiliary index {l} out of range")
    mat = np.eye(6 * m)
    mat[2 * m + 2 * l, : 2 * m] = kappa_l
    mat[: 2 * m, 2 * m + 2 * l + 1] = omega(m) @ kappa_l
    return SymplecticMatrix(3 * m, mat)


def build_circuit(code, scaling="hprime"):
    """Assemble the full Steane circuit for a code and measurement scaling."""
    nu, eta = scaling_vectors(code, scaling)
    k = build_k_matrix(code, scaling)
    m = code.m
    tbar = np.eye(6 * m)
    for l in range(2 * m):
        tbar = build_tl(k[l], l, m).mat @ tbar
    circuit = SteaneCircuit(
        code=code,
        scaling=scaling if isinstance(scaling, str) else "custom",
        tbar=SymplecticMatrix(3 * m, tbar),
        eta=eta,
        nu=nu,
        maps=selection_maps(m),
        k_matrix=k,
    )
    _check_circuit(circuit)
    return circuit


def _check_circuit(circuit):
    m = circuit.m
    t = circuit.tbar.mat
    if np.max(np.abs(t[: 2 * m, : 2 * m] - np.eye(2 * m))) > 1e-12:
        raise StabilizerViolationError("circuit deforms the storage quadratures")
    meas = circuit.maps.pi_m @ t
    if np.max(np.abs(meas[:, : 2 * m] - circuit.k_matrix)) > 1e-10:
        raise StabilizerViolationError("measured rows do not reproduce K")
    verify_stabilizer_preservation(circuit)


def verify_stabilizer_preservation(circuit, tol=1e-8):
    """R = S_full Tbar^T S_full^{-1}; raises unless R is integer unimodular."""
    s_full = circuit.full_stabilizer_basis
    r = s_full @ circuit.tbar.mat.T @ np.linalg.inv(s_full)
    if not is_integer_unimodular(r, tol):
        raise StabilizerViolationError(
            f"S Tbar^T != R S for integer unimodular R (circuit {circuit.code.name!r})"
        )
    return r


def propagate_covariance(circuit, gamma0_mat):
    """Gamma = Pi_S Tbar Gamma0 Tbar^T Pi_S^T, on storage (+) measured-q."""
    g0 = as_matrix(gamma0_mat, square=True)
    if g0.shape[0] != 6 * circuit.m:
        raise ValueError(f"gamma0 must be {6 * circuit.m} x {6 * circuit.m}")
    ps = circuit.maps.pi_s
    gamma = ps @ circuit.tbar.mat @ g0 @ circuit.tbar.mat.T @ ps.T
    return 0.5 * (gamma + gamma.T)


def cov_distance(a, b, reg=1e-9):
    """d_Cov(a, b) = sqrt(sum_k ln^2 mu_k) over the generalized eigenvalues
    a v = mu b v. Near-singular inputs are regularized by +reg*I."""
    a = as_matrix(a, square=True)
    b = as_matrix(b, square=True)
    if np.min(np.linalg.eigvalsh(a)) < 1e-12:
        a = a + reg * np.eye(a.shape[0])
    if np.min(np.linalg.eigvalsh(b)) < 1e-12:
        b = b + reg * np.eye(b.shape[0])
    mu = generalized_eigvals(a, b)
    if np.any(mu <= 0):
        raise DecompositionError("generalized eigenvalues are not all positive")
    return float(np.sqrt(np.sum(np.log(mu) ** 2)))


def squeezing_distance(circuit):
    """How much auxiliary noise the circuit mixes into the measurement.

    Compares the measured-quadrature covariance under isotropic noise on all
    modes against the same circuit's measured covariance when only the
    storage is noisy (the ideal propagation K K^T). Scale-invariant, so the
    unit input covariance is used.
    """
    m = circuit.m
    t = circuit.tbar.mat
    pm = circuit.maps.pi_m
    noisy = pm @ t @ t.T @ pm.T
    storage_only = np.zeros((6 * m, 6 * m))
    storage_only[: 2 * m, : 2 * m] = np.eye(2 * m)
    ideal = pm @ t @ storage_only @ t.T @ pm.T
    return cov_distance(noisy, ideal)


def square_reference_circuit():
    """The mixed-quadrature reference circuit for the square code.

    Measures q of auxiliary 1 and p of auxiliary 2 with unit-strength qp
    couplers, reproducing the historical square-GKP correction circuit; the
    measured pair returns the storage shift (xi_q, xi_p) directly, modulo
    sqrt(pi). Kept as a golden fixture for the covariance-distance
    comparison, not as a decode path.
    """
    from .lattice import catalog

    code = catalog("square")
    tbar = np.array(
        [
            [1.0, 0.0, 0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 1.0, 0.0, -1.0, 0.0, 1.0],
        ]
    )
    eta = np.array([2.0 ** -0.5, 2.0 ** 0.5])
    maps = selection_maps(1, measured=("q", "p"))
    circuit = SteaneCircuit(
        code=code,
        scaling="reference",
        tbar=SymplecticMatrix(3, tbar),
        eta=eta,
        nu=np.ones(2),
        maps=maps,
        k_matrix=np.eye(2),
    )
    verify_stabilizer_preservation(circuit)
    return circuit
