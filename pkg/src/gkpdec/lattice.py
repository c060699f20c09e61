"""GKP codes as lattices.

A code is a full-rank stabilizer basis S (rows s_j, units of ell = sqrt(2*pi))
with symplectic Gram matrix A = S Omega S^T. A must be integral and |det A|
a perfect square d^2; d = 2 encodes a qubit, d = 1 is a qunaught. The logical
(dual) lattice has basis S_perp = A^{-1} S, normalized so that
omega(s_j_perp, s_k) = delta_jk.
"""

from dataclasses import dataclass

import numpy as np

from . import cvp
from .linalg import as_matrix, as_vector, is_integer_unimodular, is_integral
from .symplectic import omega

GRAM_INT_TOL = 1e-9
_COSET_TOL = 1e-8
_NORM_TOL = 1e-9


class NotACodeError(ValueError):
    """The basis does not define a valid GKP code."""


class UnknownCodeError(KeyError):
    """No catalog entry with that name."""


class InvalidBasisChangeError(ValueError):
    """The basis-change matrix is not integer unimodular."""


class NotAQubitError(ValueError):
    """The code does not encode a qubit (d != 2)."""


@dataclass(frozen=True)
class GkpCode:
    name: str
    m: int
    basis: np.ndarray
    gram: np.ndarray
    dual_basis: np.ndarray
    logical_paulis: np.ndarray  # 3 x 2m, rows (x0, y0, z0); None unless d = 2
    distance: float
    relevant_vectors: np.ndarray  # n_rel x 2m, facet vectors of V(dual lattice)
    d_code: int


def relevant_vectors(basis):
    """Voronoi-relevant vectors of the lattice spanned by the rows of basis.

    Uses the coset method: for each of the 2^n - 1 nonzero cosets of L/2L,
    the minimal-norm vectors are found by CVP in 2L; the coset contributes
    its +-pair iff the minimum is attained by exactly one such pair.
    """
    basis = as_matrix(basis, square=True)
    n = basis.shape[0]
    doubled = cvp.ReducedLattice(2.0 * basis)
    out = []
    for bits in range(1, 2**n):
        c = np.array([(bits >> i) & 1 for i in range(n)], dtype=float)
        offset = basis.T @ c
        w = doubled.closest_point(-offset)
        rmin = np.linalg.norm(offset + w)
        hits = doubled.enumerate_within(-offset, rmin + _NORM_TOL)
        minimal = [offset + h for h in hits
                   if np.linalg.norm(offset + h) <= rmin + _NORM_TOL]
        if len(minimal) == 2:
            out.extend(minimal)
    out.sort(key=lambda v: (np.linalg.norm(v), tuple(v)))
    return np.array(out)


def in_voronoi(v, relevant):
    """Closed-cell membership: |v . lam| <= |lam|^2 / 2 + 1e-12 for all
    relevant vectors lam."""
    v = as_vector(v)
    rel = np.asarray(relevant, dtype=float)
    if rel.size == 0:
        return True
    proj = rel @ v
    half = 0.5 * np.sum(rel * rel, axis=1)
    return bool(np.all(np.abs(proj) <= half + 1e-12))


def _coset_key(basis, v, denom=2):
    """Coset of v in Lperp/Lambda, as a tuple of coefficient residues.

    v must lie in the dual lattice; coefficients of v in the stabilizer basis
    are multiples of 1/denom... in general rationals; the residue mod 1,
    snapped to a fixed grid, identifies the coset.
    """
    t = np.linalg.solve(basis.T, v)
    frac = t - np.floor(t + _COSET_TOL)
    frac[np.abs(frac - 1.0) < _COSET_TOL] = 0.0
    return tuple(np.round(frac * 2 * denom).astype(int))


def _canonical_sign(v):
    for x in v:
        if abs(x) > _NORM_TOL:
            return v if x > 0 else -v
    return v


def _extract_logical_paulis(basis, dual_basis, distance):
    """Minimal-norm representatives of the three nontrivial cosets of
    Lperp/Lambda, ordered (x0, y0, z0).

    Deterministic rules: per coset, keep the minimal-norm vectors, sign-fix
    each (+first-nonzero), and take the lexicographically largest. z0 is the
    coset whose stabilizer-basis coefficients vanish mod 1 on the odd-index
    (q-type) generators; x0 is the shorter of the two remaining (ties broken
    lexicographically); y0 is the third.
    """
    cosets = {}
    radius = distance * (1 + 1e-9)
    while len(cosets) < 3:
        for v in cvp.shortest_vectors(dual_basis, radius):
            t = np.linalg.solve(basis.T, v)
            if is_integral(t, _COSET_TOL):
                continue  # in Lambda: trivial coset
            key = _coset_key(basis, v)
            cosets.setdefault(key, []).append(v)
        radius *= 1.5
        if radius > 100 * distance:
            raise NotACodeError("could not find three nontrivial cosets")

    reps = {}
    for key, vecs in cosets.items():
        norms = [np.linalg.norm(v) for v in vecs]
        lo = min(norms)
        cands = {tuple(_canonical_sign(v)) for v, nv in zip(vecs, norms)
                 if nv <= lo + _NORM_TOL}
        reps[key] = np.array(max(cands))

    keys = list(reps)
    z_keys = [k for k in keys if all(r == 0 for r in k[0::2])]
    if len(z_keys) == 1:
        z_key = z_keys[0]
    else:
        z_key = min(keys)  # fallback: no/ambiguous q-type pattern
    rest = [k for k in keys if k != z_key]
    rest.sort(key=lambda k: (round(np.linalg.norm(reps[k]) / _NORM_TOL),
                             tuple(-reps[k])))
    x_key, y_key = rest[0], rest[1]
    return np.vstack([reps[x_key], reps[y_key], reps[z_key]])


def make_code(name, basis):
    """Construct a GkpCode with all derived fields from a stabilizer basis."""
    basis = as_matrix(basis, square=True)
    n = basis.shape[0]
    if n % 2:
        raise NotACodeError("basis dimension must be even")
    m = n // 2
    o = omega(m)
    gram = basis @ o @ basis.T
    if not is_integral(gram, GRAM_INT_TOL):
        raise NotACodeError(f"symplectic Gram matrix of {name!r} is not integral")
    gram = np.round(gram)
    det = abs(np.linalg.det(gram))
    d_code = int(round(np.sqrt(det)))
    if d_code < 1 or abs(det - d_code**2) > 1e-6:
        raise NotACodeError(f"|det A| = {det:.6g} is not a perfect square")
    dual_basis = np.linalg.solve(gram, basis)
    rel = relevant_vectors(dual_basis)
    distance = float(np.linalg.norm(rel[0])) if len(rel) else np.inf
    paulis = None
    if d_code == 2:
        paulis = _extract_logical_paulis(basis, dual_basis, distance)
    return GkpCode(
        name=name,
        m=m,
        basis=basis,
        gram=gram,
        dual_basis=dual_basis,
        logical_paulis=paulis,
        distance=distance,
        relevant_vectors=rel,
        d_code=d_code,
    )


def logical_pauli_matrix(code):
    """The 3 x 2m matrix P with rows (x0, y0, z0); requires a qubit code."""
    if code.d_code != 2:
        raise NotAQubitError(f"{code.name!r} encodes d = {code.d_code}, not a qubit")
    return code.logical_paulis


def pauli_residue(code, v):
    """rho(v) = P Omega v mod 1, reduced elementwise into [-1/2, 1/2)."""
    v = as_vector(v)
    p = logical_pauli_matrix(code)
    r = p @ omega(code.m) @ v
    return r - np.floor(r + 0.5)


def apply_basis_change(code, r):
    """Replace the stabilizer basis by r @ S for integer unimodular r."""
    r = as_matrix(r, square=True)
    if not is_integer_unimodular(r):
        raise InvalidBasisChangeError("basis change must be integer unimodular")
    return make_code(code.name, np.round(r) @ code.basis)


def _catalog_bases(eta):
    c3 = 2.0 / 3.0 ** 0.25
    return {
        "square": np.sqrt(2.0) * np.eye(2),
        "rectangular": np.sqrt(2.0) * np.diag([eta, 1.0 / eta]),
        "hexagonal": c3 * np.array([[1.0, 0.0], [-0.5, np.sqrt(3.0) / 2.0]]),
        "tesseract": 2.0 ** 0.25 * np.array(
            [
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 2.0 ** -0.5, 0.0, 2.0 ** -0.5],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 2.0 ** -0.5, 0.0, -(2.0 ** -0.5)],
            ]
        ),
        "d4": np.array(
            [
                [1.0, 0.0, 1.0, 0.0],
                [1.0, 0.0, 0.0, -1.0],
                [0.0, 1.0, -1.0, 0.0],
                [1.0, 0.0, 0.0, 1.0],
            ]
        ),
        "qunaught": np.diag([eta, 1.0 / eta]),
    }


# Quadrature-symmetric basis changes: s1 -> s1 + s2 for the hexagonal code,
# s4 -> s4 - s1 - s3 for D4, spreading each quadrature over the stabilizers.
_QSYM_R = {
    "hexagonal_qsym": ("hexagonal", np.array([[1, 1], [0, 1]])),
    "d4_qsym": (
        "d4",
        np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [-1, 0, -1, 1]]),
    ),
}

CATALOG_NAMES = (
    "square",
    "rectangular",
    "hexagonal",
    "tesseract",
    "d4",
    "qunaught",
    "hexagonal_qsym",
    "d4_qsym",
)


def catalog(name, eta=1.0):
    """Construct a named catalog code; eta applies to the rectangular and
    qunaught families."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if name in _QSYM_R:
        base_name, r = _QSYM_R[name]
        base = make_code(name, _catalog_bases(eta)[base_name])
        changed = apply_basis_change(base, r)
        return changed
    bases = _catalog_bases(eta)
    if name not in bases:
        raise UnknownCodeError(
            f"unknown code {name!r}; known: {', '.join(CATALOG_NAMES)}"
        )
    return make_code(name, bases[name])
