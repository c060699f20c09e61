"""Syndrome decoding: baseline MED and the noise-correlated COR-MED.

MED treats the syndrome as if the auxiliaries were noiseless: it rebuilds
chi(z) = -Omega S^{-1} y (y_j = z_j / (ell nu_j)) and solves a CVP on the
logical lattice.

COR-MED keeps the joint covariance Gamma of the propagated storage and
measured noise. With the blocks of Gamma^{-1} written
[[Gamma_G, gamma], [gamma^T, Gamma_m]], the correction is
-Gamma_G^{-1} gamma (z + lambda_m) where lambda_m minimizes
|F (z + lambda_m)| over the measurement lattice Lambda_m and F is the upper
Cholesky factor of Gbar = Gamma_m - gamma^T Gamma_G^{-1} gamma. By the
Schur-complement identity, Gbar is exactly the inverse of the measured
marginal of Gamma, so |F u| is the Mahalanobis length of u under the
measured-noise distribution and -Gamma_G^{-1} gamma is the Gaussian
conditional-mean (regression) operator.
"""

from dataclasses import dataclass, field

import numpy as np

from .circuit import propagate_covariance
from .cvp import ReducedLattice
from .linalg import as_vector, cholesky_upper, invert_spd
from .noise import ELL
from .symplectic import omega


def gamma_inverse_blocks(gamma, m):
    """(Gamma_G, gamma, Gamma_m): the blocks of Gamma^{-1} as in the source
    decomposition; provided for verification against the conditioned route
    used by cormed_precompute."""
    inv = invert_spd(gamma)
    return inv[: 2 * m, : 2 * m], inv[: 2 * m, 2 * m :], inv[2 * m :, 2 * m :]


@dataclass(frozen=True)
class Syndrome:
    """Measured auxiliary values, units of ell*[quadrature], each reduced
    into its half-open modular window [-w_j/2, w_j/2)."""

    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", as_vector(self.z))


def chi_from_syndrome(code, circuit, syn):
    """chi(z) = -Omega S^{-1} y with y_j = z_j / (ell nu_j)."""
    y = syn.z / (ELL * circuit.nu)
    return -omega(code.m) @ np.linalg.solve(code.basis, y)


class MedDecoder:
    """Closest-vector decoding on the logical lattice (precomputed basis)."""

    def __init__(self, code):
        self.code = code
        self.lattice = ReducedLattice(code.dual_basis)

    def decode_chi(self, chi):
        return chi - self.lattice.closest_point(chi)


def med_decode(code, circuit, syn):
    """xi_bar = chi(z) - closest logical lattice point; lies in V(L_perp)."""
    chi = chi_from_syndrome(code, circuit, syn)
    return MedDecoder(code).decode_chi(chi)


@dataclass(frozen=True)
class CorMedContext:
    gamma: np.ndarray  # 4m x 4m propagated covariance
    correction_map: np.ndarray  # -Gamma_G^{-1} gamma
    f: np.ndarray  # upper Cholesky factor of Gbar
    lambda_m_basis: np.ndarray  # 2m x 2m basis of the measurement lattice
    whitened_basis: np.ndarray  # LLL-reduced basis of F * Lambda_m
    _search: ReducedLattice = field(repr=False)
    _lambda_reduced: np.ndarray = field(repr=False)


def measurement_lattice_basis(circuit):
    """Basis of Lambda_m: measured components of the auxiliary stabilizer
    rows, reduced to a full-rank 2m x 2m matrix (diag(eta) for qunaughts
    measured in q)."""
    m = circuit.m
    s_eta = circuit.aux_stabilizer_basis
    cols = [coord - 2 * m for coord in circuit.maps.measured_coords]
    gens = s_eta[:, cols]
    rows = [r for r in gens if np.linalg.norm(r) > 1e-12]
    basis = np.array(rows)
    if basis.shape != (2 * m, 2 * m) or abs(np.linalg.det(basis)) < 1e-12:
        raise ValueError("auxiliary lattice did not reduce to a full-rank basis")
    return basis


def cormed_precompute(circuit, gamma0_mat):
    """Everything COR-MED needs for a fixed (circuit, input covariance).

    Gbar and the correction map are evaluated through the block-inverse
    identities Gbar = (Pi_m marginal of Gamma)^{-1} and
    -Gamma_G^{-1} gamma = Gamma[G,m] Gamma[m,m]^{-1}: these equal the
    Gamma^{-1}-block expressions exactly but stay well-conditioned when the
    noiseless-auxiliary floor makes Gamma itself nearly singular.
    """
    gamma = propagate_covariance(circuit, gamma0_mat)
    m = circuit.m
    marginal = gamma[2 * m :, 2 * m :]
    cross = gamma[: 2 * m, 2 * m :]
    gbar = invert_spd(marginal)
    f = cholesky_upper(gbar)
    lam_basis = measurement_lattice_basis(circuit)
    whitened = lam_basis @ f.T
    search = ReducedLattice(whitened)
    return CorMedContext(
        gamma=gamma,
        correction_map=cross @ gbar,
        f=f,
        lambda_m_basis=lam_basis,
        whitened_basis=search.reduced,
        _search=search,
        _lambda_reduced=search.transform @ lam_basis,
    )


def cormed_decode(ctx, syn):
    """Correction -Gamma_G^{-1} gamma (z + lambda_bar), z in units of ell."""
    z = syn.z / ELL
    coeffs = ctx._search.closest_coeffs(-ctx.f @ z)
    lam = ctx._lambda_reduced.T @ coeffs
    return ctx.correction_map @ (z + lam)
