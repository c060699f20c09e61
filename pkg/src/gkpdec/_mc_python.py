"""Pure-NumPy Monte-Carlo kernel: the fallback when the compiled extension
is unavailable.

Trials are processed in fixed-size vectorized batches. The closest-point
step uses a Babai round plus an argmin over a precomputed candidate set
that provably contains every possible answer for targets reduced into the
centered fundamental cell (radius bound: max cell norm + nearest-plane
covering bound), so it is exact, not heuristic.
"""

import itertools

import numpy as np

from ._philox import trial_normals

BATCH = 1 << 16


def cvp_candidates(reduced):
    """Integer coefficient offsets covering every CVP answer for targets in
    the centered fundamental cell of `reduced` (rows are generators)."""
    from .cvp import ReducedLattice

    n = reduced.shape[0]
    corners = np.array(list(itertools.product([-0.5, 0.5], repeat=n)))
    cell_max = np.max(np.linalg.norm(corners @ reduced, axis=1))
    r = np.linalg.qr(reduced.T, mode="r")
    cover = 0.5 * np.sqrt(np.sum(np.diag(r) ** 2))
    radius = cell_max + cover + 1e-9
    lat = ReducedLattice(reduced)
    pts = lat.enumerate_within(np.zeros(n), radius)
    return np.round(np.array(pts) @ np.linalg.inv(reduced)).astype(np.int64)


def _closest_coeffs_batch(targets, reduced, inv_reduced, cand_coeffs, cand_pts):
    """Integer coefficients of the closest lattice point for each target row."""
    u = targets @ inv_reduced
    k = np.floor(u + 0.5)
    residual = targets - k @ reduced
    scores = -2.0 * (residual @ cand_pts.T) + np.sum(cand_pts**2, axis=1)
    picks = np.argmin(scores, axis=1)
    return k.astype(np.int64) + cand_coeffs[picks]


class _SearchData:
    def __init__(self, reduced):
        self.reduced = np.ascontiguousarray(reduced)
        self.inv_reduced = np.linalg.inv(self.reduced)
        self.cand_coeffs = cvp_candidates(self.reduced)
        self.cand_pts = self.cand_coeffs @ self.reduced


def run_cell(plan, t0, t1):
    """Count logical errors over trials [t0, t1) for one experiment cell."""
    med = plan.decoder == 0
    search = _SearchData(plan.med_reduced if med else plan.wh_reduced)
    errors = 0
    for start in range(t0, t1, BATCH):
        tt = np.arange(start, min(start + BATCH, t1), dtype=np.uint64)
        xi = trial_normals(plan.key0, plan.key1, tt, plan.dim) * plan.noise_std
        z = xi @ plan.mmeas.T
        z -= plan.windows * np.floor(z / plan.windows + 0.5)
        storage = xi @ plan.mstor.T
        if med:
            chi = z @ plan.chimap.T
            coeffs = _closest_coeffs_batch(
                chi, search.reduced, search.inv_reduced,
                search.cand_coeffs, search.cand_pts,
            )
            correction = chi - coeffs @ search.reduced
        else:
            target = z @ plan.fz.T
            coeffs = _closest_coeffs_batch(
                target, search.reduced, search.inv_reduced,
                search.cand_coeffs, search.cand_pts,
            )
            lam = coeffs @ plan.lam_reduced
            correction = z @ plan.corr_z.T + lam @ plan.corr_l.T
        residual = storage - correction
        bad = np.any(np.abs(residual @ plan.relvecs.T) > plan.relthr, axis=1)
        errors += int(np.count_nonzero(bad))
    return errors
