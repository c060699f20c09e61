# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte-Carlo kernel: per-trial Philox noise, syndrome reduction,
Schnorr-Euchner closest-point search, and Voronoi classification.

Mirrors gkpdec._mc_python trial-for-trial: the integer RNG stages are
bit-identical; float results match up to libm rounding.
"""

from cython.parallel cimport prange
from libc.math cimport INFINITY, M_PI, cos, fabs, floor, log, sin, sqrt

import numpy as np

ctypedef unsigned long long u64

cdef extern from *:
    """
    typedef unsigned __int128 gkp_u128;
    static inline unsigned long long gkp_mulhi64(unsigned long long a,
                                                 unsigned long long b) {
        return (unsigned long long)(((gkp_u128)a * (gkp_u128)b) >> 64);
    }
    """
    u64 gkp_mulhi64(u64 a, u64 b) nogil

cdef u64 _M0 = 0xD2E7470EE14C6C93ULL
cdef u64 _M1 = 0xCA5A826395121157ULL
cdef u64 _W0 = 0x9E3779B97F4A7C15ULL
cdef u64 _W1 = 0xBB67AE8584CAA73BULL

DEF MAXDIM = 16   # >= 6m
DEF MAXSYN = 8    # >= 2m
DEF MAXREL = 32


cdef inline void _philox4(u64 k0, u64 k1, u64 c0, u64 c1, u64 c2, u64 c3,
                          u64* out) noexcept nogil:
    cdef int r
    cdef u64 hi0, lo0, hi1, lo1
    for r in range(10):
        hi0 = gkp_mulhi64(_M0, c0); lo0 = _M0 * c0
        hi1 = gkp_mulhi64(_M1, c2); lo1 = _M1 * c2
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
        k0 = k0 + _W0
        k1 = k1 + _W1
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3


cdef inline double _u01(u64 x) noexcept nogil:
    return (<double>(x >> 11) + 0.5) * (1.0 / 9007199254740992.0)


cdef inline void _trial_normals(u64 k0, u64 k1, u64 t, int n,
                                double* out) noexcept nogil:
    cdef u64 blk[4]
    cdef double tmp[4]
    cdef double u, v, r, th
    cdef int b, i, idx = 0
    cdef int nblocks = (n + 3) // 4
    for b in range(nblocks):
        _philox4(k0, k1, t, <u64>b, 0, 0, blk)
        u = _u01(blk[0]); v = _u01(blk[1])
        r = sqrt(-2.0 * log(u)); th = 2.0 * M_PI * v
        tmp[0] = r * cos(th); tmp[1] = r * sin(th)
        u = _u01(blk[2]); v = _u01(blk[3])
        r = sqrt(-2.0 * log(u)); th = 2.0 * M_PI * v
        tmp[2] = r * cos(th); tmp[3] = r * sin(th)
        for i in range(4):
            if idx < n:
                out[idx] = tmp[i]
                idx += 1


cdef double _se_closest(const double* r, const double* tp, int n,
                        long* best) noexcept nogil:
    """argmin_a |r a - tp| for upper-triangular r with positive diagonal;
    zig-zag Schnorr-Euchner, first-found wins exact ties."""
    cdef long a[MAXSYN]
    cdef long step[MAXSYN]
    cdef double e[MAXSYN]
    cdef double dist[MAXSYN + 1]
    cdef double bestdist = INFINITY
    cdef double c, d
    cdef int k = n - 1
    cdef int j
    dist[n] = 0.0
    e[k] = tp[k]
    c = e[k] / r[k * n + k]
    a[k] = <long>floor(c + 0.5)
    step[k] = 1 if c >= a[k] else -1
    while True:
        d = dist[k + 1] + (e[k] - r[k * n + k] * a[k]) ** 2
        if d < bestdist:
            if k == 0:
                bestdist = d
                for j in range(n):
                    best[j] = a[j]
                a[k] += step[k]
                step[k] = -step[k] - (1 if step[k] > 0 else -1)
            else:
                dist[k] = d
                k -= 1
                e[k] = tp[k]
                for j in range(k + 1, n):
                    e[k] -= r[k * n + j] * a[j]
                c = e[k] / r[k * n + k]
                a[k] = <long>floor(c + 0.5)
                step[k] = 1 if c >= a[k] else -1
        else:
            k += 1
            if k == n:
                return bestdist
            a[k] += step[k]
            step[k] = -step[k] - (1 if step[k] > 0 else -1)


cdef int _one_trial(u64 k0, u64 k1, u64 t, int dim, int nsyn, int decoder,
                    const double* noise_std,
                    const double* mmeas, const double* mstor,
                    const double* windows,
                    const double* chimap,
                    const double* med_reduced, const double* med_qt,
                    const double* med_r,
                    const double* fz, const double* corr_z,
                    const double* corr_l, const double* lam_reduced,
                    const double* wh_qt, const double* wh_r,
                    int nrel, const double* relvecs,
                    const double* relthr) noexcept nogil:
    cdef double xi[MAXDIM]
    cdef double z[MAXSYN]
    cdef double s[MAXSYN]
    cdef double work[MAXSYN]
    cdef double tp[MAXSYN]
    cdef double corr[MAXSYN]
    cdef long coef[MAXSYN]
    cdef double acc, w, proj
    cdef int i, j

    _trial_normals(k0, k1, t, dim, xi)
    for i in range(dim):
        xi[i] *= noise_std[i]
    for j in range(nsyn):
        acc = 0.0
        for i in range(dim):
            acc += mmeas[j * dim + i] * xi[i]
        w = windows[j]
        z[j] = acc - w * floor(acc / w + 0.5)
        acc = 0.0
        for i in range(dim):
            acc += mstor[j * dim + i] * xi[i]
        s[j] = acc

    if decoder == 0:
        for j in range(nsyn):  # chi = chimap @ z
            acc = 0.0
            for i in range(nsyn):
                acc += chimap[j * nsyn + i] * z[i]
            work[j] = acc
        for j in range(nsyn):  # tp = Q^T chi
            acc = 0.0
            for i in range(nsyn):
                acc += med_qt[j * nsyn + i] * work[i]
            tp[j] = acc
        _se_closest(med_r, tp, nsyn, coef)
        for j in range(nsyn):  # correction = chi - reduced^T coef
            acc = work[j]
            for i in range(nsyn):
                acc -= coef[i] * med_reduced[i * nsyn + j]
            corr[j] = acc
    else:
        for j in range(nsyn):  # target = fz @ z
            acc = 0.0
            for i in range(nsyn):
                acc += fz[j * nsyn + i] * z[i]
            work[j] = acc
        for j in range(nsyn):
            acc = 0.0
            for i in range(nsyn):
                acc += wh_qt[j * nsyn + i] * work[i]
            tp[j] = acc
        _se_closest(wh_r, tp, nsyn, coef)
        for j in range(nsyn):  # lambda_m = lam_reduced^T coef
            acc = 0.0
            for i in range(nsyn):
                acc += coef[i] * lam_reduced[i * nsyn + j]
            work[j] = acc
        for j in range(nsyn):  # correction = corr_z z + corr_l lambda
            acc = 0.0
            for i in range(nsyn):
                acc += corr_z[j * nsyn + i] * z[i] + corr_l[j * nsyn + i] * work[i]
            corr[j] = acc

    for j in range(nsyn):
        s[j] -= corr[j]
    for i in range(nrel):
        proj = 0.0
        for j in range(nsyn):
            proj += relvecs[i * nsyn + j] * s[j]
        if fabs(proj) > relthr[i]:
            return 1
    return 0


def run_cell(plan, long long t0, long long t1, int num_threads=1):
    """Count logical errors over trials [t0, t1) for one experiment cell."""
    cdef double[::1] noise_std = np.ascontiguousarray(plan.noise_std)
    cdef double[:, ::1] mmeas = np.ascontiguousarray(plan.mmeas)
    cdef double[:, ::1] mstor = np.ascontiguousarray(plan.mstor)
    cdef double[::1] windows = np.ascontiguousarray(plan.windows)
    cdef double[:, ::1] chimap = np.ascontiguousarray(plan.chimap)
    cdef double[:, ::1] med_reduced = np.ascontiguousarray(plan.med_reduced)
    cdef double[:, ::1] med_qt = np.ascontiguousarray(plan.med_qt)
    cdef double[:, ::1] med_r = np.ascontiguousarray(plan.med_r)
    cdef double[:, ::1] fz = np.ascontiguousarray(plan.fz)
    cdef double[:, ::1] corr_z = np.ascontiguousarray(plan.corr_z)
    cdef double[:, ::1] corr_l = np.ascontiguousarray(plan.corr_l)
    cdef double[:, ::1] lam_reduced = np.ascontiguousarray(plan.lam_reduced)
    cdef double[:, ::1] wh_qt = np.ascontiguousarray(plan.wh_qt)
    cdef double[:, ::1] wh_r = np.ascontiguousarray(plan.wh_r)
    cdef double[:, ::1] relvecs = np.ascontiguousarray(plan.relvecs)
    cdef double[::1] relthr = np.ascontiguousarray(plan.relthr)
    cdef int dim = plan.dim
    cdef int nsyn = plan.nsyn
    cdef int nrel = relvecs.shape[0]
    cdef int decoder = plan.decoder
    cdef u64 k0 = plan.key0
    cdef u64 k1 = plan.key1
    cdef long long t
    cdef long errors = 0

    if dim > MAXDIM or nsyn > MAXSYN or nrel > MAXREL:
        raise ValueError("cell dimensions exceed compiled kernel limits")

    for t in prange(t0, t1, nogil=True, schedule="static",
                    num_threads=num_threads):
        errors += _one_trial(
            k0, k1, <u64>t, dim, nsyn, decoder,
            &noise_std[0], &mmeas[0, 0], &mstor[0, 0], &windows[0],
            &chimap[0, 0], &med_reduced[0, 0], &med_qt[0, 0], &med_r[0, 0],
            &fz[0, 0], &corr_z[0, 0], &corr_l[0, 0], &lam_reduced[0, 0],
            &wh_qt[0, 0], &wh_r[0, 0], nrel, &relvecs[0, 0], &relthr[0])
    return int(errors)


def trial_normals(key0, key1, trials, int n):
    """Debug/test hook: the kernel's normals for given trial indices."""
    trials = np.asarray(trials, dtype=np.uint64)
    out = np.empty((trials.size, n))
    cdef double[:, ::1] out_mv = out
    cdef u64[::1] t_mv = trials
    cdef u64 k0 = key0, k1 = key1
    cdef Py_ssize_t i
    for i in range(t_mv.shape[0]):
        _trial_normals(k0, k1, t_mv[i], n, &out_mv[i, 0])
    return out
