"""Gaussian random translation noise.

Shift vectors xi are dimensionless, in units of ell = sqrt(2*pi): the physical
translation of the quadrature vector is ell*xi. Variances follow the same
convention, in units of ell^2 = 2*pi; the `sigma2` arguments below equal the
plotted noise-grid values (sigma^2/2pi). The squeezing-dB conversion uses the
identification sigma^2 = Delta^2 of the physical shift variance with the
finite-energy envelope parameter, a convention validated against the 11-dB
anchor point (~0.00632 in grid units).
"""

from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, as_vector, cholesky_upper

ELL = np.sqrt(2.0 * np.pi)

NOISE_FLOOR = 1e-9  # keeps Gamma invertible when the auxiliaries are noiseless


class InvalidParameterError(ValueError):
    """A noise parameter is out of range."""


@dataclass(frozen=True)
class NoiseModel:
    """Mean and covariance of a Gaussian shift distribution (units of ell)."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = as_vector(self.mean)
        cov = as_matrix(cov_in := self.cov, square=True)
        if cov.shape[0] != mean.size:
            raise InvalidParameterError("mean/cov size mismatch")
        if np.max(np.abs(cov - cov.T), initial=0.0) > 1e-12:
            raise InvalidParameterError("covariance must be symmetric")
        if np.any(np.diag(cov) < 0):
            raise InvalidParameterError("covariance diagonal must be nonnegative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", 0.5 * (cov + cov.T))

    @property
    def dim(self):
        return self.mean.size


def gamma0(sigma2, noisy_aux, m):
    """Input covariance for a Steane system with m storage modes.

    noisy_aux=True: sigma2 on all 6m diagonal entries. noisy_aux=False:
    sigma2 on the 2m storage entries, NOISE_FLOOR on the 4m auxiliary
    entries (the floor exists only so the correlated decoder's Gamma stays
    invertible).
    """
    if sigma2 < 0:
        raise InvalidParameterError("sigma2 must be nonnegative")
    diag = np.full(6 * m, float(sigma2))
    if not noisy_aux:
        diag[2 * m :] = NOISE_FLOOR
    return np.diag(diag)


def sample_shift(model, rng):
    """One shift vector xi = mean + C^T u with cov = C^T C and u standard
    normal; zero-variance coordinates come out exactly zero."""
    n = model.dim
    diag = np.diag(model.cov)
    live = diag > 0
    xi = model.mean.copy()
    if np.any(live):
        sub = model.cov[np.ix_(live, live)]
        c = cholesky_upper(sub)
        u = rng.standard_normal(int(np.sum(live)))
        xi[live] += c.T @ u
    return xi


def db_to_sigma2_over_2pi(delta_db):
    """Squeezing in dB -> noise variance in grid units (sigma^2 / 2pi).

    Delta_dB = -10 log10(2 Delta^2) and sigma^2 = Delta^2, so the grid value
    is 10^(-Delta_dB/10) / (4 pi).
    """
    return 10.0 ** (-delta_db / 10.0) / (4.0 * np.pi)


def sigma2_over_2pi_to_db(sigma2_over_2pi):
    """Inverse of db_to_sigma2_over_2pi."""
    if sigma2_over_2pi <= 0:
        raise InvalidParameterError("variance must be positive")
    return -10.0 * np.log10(4.0 * np.pi * sigma2_over_2pi)
