"""Exact lattice algorithms: LLL reduction, Schnorr-Euchner closest-point
search, bounded enumeration, and a brute-force oracle for tests.

Bases are row matrices: lattice points are integer row-combinations, i.e.
v = basis^T a for integer a. Dimensions here are tiny (2m <= 4 for the code
catalog), so clarity wins over asymptotics; the Monte-Carlo hot path has its
own compiled/vectorized search built on the same reduction.
"""

import numpy as np

from .linalg import as_matrix, as_vector

LLL_DELTA = 0.99
_RANK_TOL = 1e-12


class RankError(ValueError):
    """Basis rows are not linearly independent."""


def _gram_schmidt(b):
    """Orthogonalization of the rows of b; returns (bstar, mu)."""
    n = b.shape[0]
    bstar = np.zeros_like(b)
    mu = np.zeros((n, n))
    for i in range(n):
        bstar[i] = b[i]
        for j in range(i):
            mu[i, j] = np.dot(b[i], bstar[j]) / np.dot(bstar[j], bstar[j])
            bstar[i] -= mu[i, j] * bstar[j]
        if np.dot(bstar[i], bstar[i]) < _RANK_TOL:
            raise RankError("basis is rank-deficient")
    return bstar, mu


def lll_reduce(basis, delta=LLL_DELTA):
    """LLL-reduce a full-rank row basis.

    Returns (reduced, transform) with transform integer unimodular and
    reduced = transform @ basis.
    """
    if not 0.25 < delta < 1.0:
        raise ValueError("delta must lie in (0.25, 1)")
    b = as_matrix(basis).copy()
    n = b.shape[0]
    u = np.eye(n, dtype=np.int64)
    bstar, mu = _gram_schmidt(b)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = int(np.floor(mu[k, j] + 0.5))
            if q:
                b[k] -= q * b[j]
                u[k] -= q * u[j]
                bstar, mu = _gram_schmidt(b)
        lhs = np.dot(bstar[k], bstar[k])
        rhs = (delta - mu[k, k - 1] ** 2) * np.dot(bstar[k - 1], bstar[k - 1])
        if lhs >= rhs:
            k += 1
        else:
            b[[k - 1, k]] = b[[k, k - 1]]
            u[[k - 1, k]] = u[[k, k - 1]]
            bstar, mu = _gram_schmidt(b)
            k = max(k - 1, 1)
    return b, u


def _se_closest(r, tp):
    """Schnorr-Euchner search: integer a minimizing |r a - tp|, r upper
    triangular with positive diagonal. First-found wins exact ties."""
    n = tp.size
    a = np.zeros(n, dtype=np.int64)
    step = np.zeros(n, dtype=np.int64)
    e = np.zeros(n)
    dist = np.zeros(n + 1)
    best = a.copy()
    bestdist = np.inf
    k = n - 1
    e[k] = tp[k]
    c = e[k] / r[k, k]
    a[k] = int(np.floor(c + 0.5))
    step[k] = 1 if c >= a[k] else -1
    while True:
        d = dist[k + 1] + (e[k] - r[k, k] * a[k]) ** 2
        if d < bestdist:
            if k == 0:
                bestdist = d
                best = a.copy()
                a[k] += step[k]
                step[k] = -step[k] - (1 if step[k] > 0 else -1)
            else:
                dist[k] = d
                k -= 1
                e[k] = tp[k] - r[k, k + 1 :] @ a[k + 1 :]
                c = e[k] / r[k, k]
                a[k] = int(np.floor(c + 0.5))
                step[k] = 1 if c >= a[k] else -1
        else:
            k += 1
            if k == n:
                return best, bestdist
            a[k] += step[k]
            step[k] = -step[k] - (1 if step[k] > 0 else -1)


def _se_enumerate(r, tp, radius2):
    """All integer a with |r a - tp|^2 <= radius2 (closed ball)."""
    n = tp.size
    a = np.zeros(n, dtype=np.int64)
    step = np.zeros(n, dtype=np.int64)
    e = np.zeros(n)
    dist = np.zeros(n + 1)
    found = []
    k = n - 1
    e[k] = tp[k]
    c = e[k] / r[k, k]
    a[k] = int(np.floor(c + 0.5))
    step[k] = 1 if c >= a[k] else -1
    while True:
        d = dist[k + 1] + (e[k] - r[k, k] * a[k]) ** 2
        if d <= radius2:
            if k == 0:
                found.append((a.copy(), d))
                a[k] += step[k]
                step[k] = -step[k] - (1 if step[k] > 0 else -1)
            else:
                dist[k] = d
                k -= 1
                e[k] = tp[k] - r[k, k + 1 :] @ a[k + 1 :]
                c = e[k] / r[k, k]
                a[k] = int(np.floor(c + 0.5))
                step[k] = 1 if c >= a[k] else -1
        else:
            k += 1
            if k == n:
                return found
            a[k] += step[k]
            step[k] = -step[k] - (1 if step[k] > 0 else -1)


class ReducedLattice:
    """An LLL-reduced basis with cached QR data for repeated CVP calls."""

    def __init__(self, basis, delta=LLL_DELTA):
        basis = as_matrix(basis)
        if basis.shape[0] != basis.shape[1]:
            raise RankError("expected a square (full-rank) basis")
        self.basis = basis
        self.reduced, self.transform = lll_reduce(basis, delta)
        q, r = np.linalg.qr(self.reduced.T)
        sign = np.sign(np.diag(r))
        sign[sign == 0] = 1.0
        self.q = q * sign
        self.r = sign[:, None] * r

    @property
    def dim(self):
        return self.basis.shape[0]

    def closest_coeffs(self, target):
        """Integer coefficients (in the reduced basis) of the closest point."""
        target = as_vector(target)
        a, _ = _se_closest(self.r, self.q.T @ target)
        return a

    def closest_point(self, target):
        return self.reduced.T @ self.closest_coeffs(target)

    def enumerate_within(self, target, radius):
        """All lattice points within `radius` of target (closed ball)."""
        target = as_vector(target)
        hits = _se_enumerate(self.r, self.q.T @ target, radius * radius)
        return [self.reduced.T @ a for a, _ in hits]


def closest_point(basis, target):
    """Lattice vector minimizing |target - v| (LLL + Schnorr-Euchner)."""
    return ReducedLattice(basis).closest_point(target)


def closest_point_bruteforce(basis, target, coeff_bound):
    """Exhaustive minimum over coefficients in [-coeff_bound, coeff_bound]^n."""
    basis = as_matrix(basis)
    target = as_vector(target)
    n = basis.shape[0]
    axes = [np.arange(-coeff_bound, coeff_bound + 1)] * n
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)
    pts = grid @ basis
    d2 = np.sum((pts - target) ** 2, axis=1)
    return pts[int(np.argmin(d2))]


def shortest_vectors(basis, radius):
    """All nonzero lattice vectors with norm <= radius, sorted by norm then
    lexicographically."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    lat = ReducedLattice(basis)
    pts = lat.enumerate_within(np.zeros(lat.dim), radius)
    pts = [p for p in pts if np.linalg.norm(p) > 1e-12]
    pts.sort(key=lambda p: (np.linalg.norm(p), tuple(p)))
    return pts
