"""Counter-based random streams (Philox4x64-10) for reproducible trials.

Every Monte-Carlo trial derives its Gaussian draws from
philox(key, counter=(trial_index, block, 0, 0)) followed by a fixed
Box-Muller transform, so results are independent of batching, threading,
and execution order. The compiled kernel implements the identical scheme
in C; the integer stages agree bit-for-bit across backends.
"""

import numpy as np

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK64 = (1 << 64) - 1
_LOW32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)

_INV_2_53 = 1.0 / 9007199254740992.0  # 2^-53


def splitmix64(x):
    """One splitmix64 step on a python int, mod 2^64."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_key(master_seed, index):
    """A 128-bit philox key from a 64-bit master seed and a stream index."""
    k0 = splitmix64(splitmix64(master_seed & _MASK64) ^ splitmix64(index & _MASK64))
    k1 = splitmix64(k0)
    return k0, k1


def _mulhilo(a, b):
    lo = a * b
    ah, al = a >> _SHIFT32, a & _LOW32
    bh, bl = b >> _SHIFT32, b & _LOW32
    albl = al * bl
    albh = al * bh
    ahbl = ah * bl
    carry = ((albl >> _SHIFT32) + (albh & _LOW32) + (ahbl & _LOW32)) >> _SHIFT32
    hi = ah * bh + (albh >> _SHIFT32) + (ahbl >> _SHIFT32) + carry
    return hi, lo


def philox4x64(key0, key1, c0, c1, c2, c3):
    """Ten Philox4x64 rounds; arguments broadcast as uint64 arrays."""
    k0 = np.uint64(key0)
    k1 = np.uint64(key1)
    x0, x1, x2, x3 = (np.asarray(c, dtype=np.uint64) for c in (c0, c1, c2, c3))
    with np.errstate(over="ignore"):
        for _ in range(10):
            hi0, lo0 = _mulhilo(_M0, x0)
            hi1, lo1 = _mulhilo(_M1, x2)
            x0, x1, x2, x3 = hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0
            k0 = k0 + _W0
            k1 = k1 + _W1
    return x0, x1, x2, x3


def _uniform(x):
    return ((x >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def trial_normals(key0, key1, trials, n):
    """Standard normals for each trial index: shape (len(trials), n)."""
    trials = np.asarray(trials, dtype=np.uint64)
    n_blocks = (n + 3) // 4
    out = np.empty((trials.size, 4 * n_blocks))
    zero = np.zeros_like(trials)
    for b in range(n_blocks):
        x0, x1, x2, x3 = philox4x64(
            key0, key1, trials, np.full_like(trials, b), zero, zero
        )
        for off, (xu, xv) in enumerate(((x0, x1), (x2, x3))):
            u, v = _uniform(xu), _uniform(xv)
            r = np.sqrt(-2.0 * np.log(u))
            th = 2.0 * np.pi * v
            out[:, 4 * b + 2 * off] = r * np.cos(th)
            out[:, 4 * b + 2 * off + 1] = r * np.sin(th)
    return out[:, :n]
