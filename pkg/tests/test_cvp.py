import numpy as np
import pytest

from gkpdec.cvp import (
    RankError,
    ReducedLattice,
    closest_point,
    closest_point_bruteforce,
    lll_reduce,
    shortest_vectors,
)


def test_lll_identity_unchanged():
    reduced, transform = lll_reduce(np.eye(3))
    assert np.array_equal(reduced, np.eye(3))
    assert np.array_equal(transform, np.eye(3))


def test_lll_finds_short_vector():
    basis = np.array([[4.0, 1.0], [1.0, 1.0]])
    reduced, transform = lll_reduce(basis)
    assert np.linalg.norm(reduced[0]) == pytest.approx(np.sqrt(2.0))
    assert np.allclose(transform @ basis, reduced)


def test_lll_preserves_determinant_and_unimodularity():
    rng = np.random.default_rng(2)
    for _ in range(10):
        basis = rng.integers(-5, 6, size=(4, 4)).astype(float)
        if abs(np.linalg.det(basis)) < 0.5:
            continue
        reduced, transform = lll_reduce(basis)
        assert abs(np.linalg.det(reduced)) == pytest.approx(
            abs(np.linalg.det(basis)), rel=1e-9
        )
        assert abs(abs(np.linalg.det(transform.astype(float))) - 1.0) < 1e-9


def test_lll_rejects_rank_deficient():
    with pytest.raises(RankError):
        lll_reduce(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_closest_point_rounding_case():
    assert np.allclose(closest_point(np.eye(2), [0.3, 0.7]), [0.0, 1.0])


def test_closest_point_zero_target():
    assert np.allclose(closest_point(np.eye(3), np.zeros(3)), np.zeros(3))


def test_closest_point_hexagonal_case():
    basis = np.array([[1.0, 0.0], [0.5, np.sqrt(3.0) / 2.0]])
    got = closest_point(basis, [0.9, 0.2])
    brute = closest_point_bruteforce(basis, [0.9, 0.2], 3)
    assert np.allclose(got, [1.0, 0.0])
    assert np.allclose(got, brute)


def test_bruteforce_half_open_case():
    assert np.allclose(
        closest_point_bruteforce(np.eye(2), [0.5 - 1e-9, 0.0], 2), [0.0, 0.0]
    )


def test_bruteforce_zero_bound():
    assert np.allclose(
        closest_point_bruteforce(np.eye(2), [5.0, 5.0], 0), [0.0, 0.0]
    )


def random_basis(rng, dim, min_singular=0.5):
    # conditioning floor keeps the brute-force coefficient bound (6) a true
    # superset of the optimum for targets in [-1, 1]^dim
    while True:
        basis = rng.uniform(-1.0, 1.0, size=(dim, dim))
        if np.linalg.svd(basis, compute_uv=False).min() >= min_singular:
            return basis


@pytest.mark.parametrize("dim", [2, 4])
def test_closest_point_matches_bruteforce(dim):
    rng = np.random.default_rng(100 + dim)
    lat_count = 20
    per_basis = 25  # 500 instances per dim, batched per basis
    for _ in range(lat_count):
        basis = random_basis(rng, dim)
        lat = ReducedLattice(basis)
        for _ in range(per_basis):
            target = rng.uniform(-1.0, 1.0, size=dim)
            fast = lat.closest_point(target)
            brute = closest_point_bruteforce(basis, target, 6)
            d_fast = np.linalg.norm(fast - target)
            d_brute = np.linalg.norm(brute - target)
            assert abs(d_fast - d_brute) < 1e-9


def test_closest_point_invariant_under_prereduction():
    rng = np.random.default_rng(8)
    basis = np.array([[3.0, 1.0, 0.0, 0.2], [1.0, 2.0, 0.3, 0.0],
                      [0.0, 0.4, 1.0, 2.0], [2.0, 0.0, 1.0, 1.0]])
    reduced, _ = lll_reduce(basis)
    for _ in range(20):
        t = rng.uniform(-2, 2, size=4)
        d1 = np.linalg.norm(closest_point(basis, t) - t)
        d2 = np.linalg.norm(closest_point(reduced, t) - t)
        assert d1 == pytest.approx(d2, abs=1e-9)


def test_closest_point_lattice_membership():
    rng = np.random.default_rng(12)
    basis = rng.uniform(-1, 1, size=(4, 4)) + 2 * np.eye(4)
    for _ in range(50):
        t = rng.uniform(-3, 3, size=4)
        w = closest_point(basis, t)
        coeffs = np.linalg.solve(basis.T, w)
        assert np.max(np.abs(coeffs - np.round(coeffs))) < 1e-9


def test_shortest_vectors_square_dual():
    basis = np.eye(2) / np.sqrt(2.0)
    vecs = shortest_vectors(basis, 0.8)
    assert len(vecs) == 4
    assert all(np.linalg.norm(v) == pytest.approx(2**-0.5) for v in vecs)


def test_shortest_vectors_d4_dual():
    from gkpdec.lattice import catalog

    dual = catalog("d4").dual_basis
    vecs = shortest_vectors(dual, 1.05)
    assert len(vecs) == 24
    assert all(np.linalg.norm(v) == pytest.approx(1.0) for v in vecs)


def test_shortest_vectors_below_minimum_empty():
    assert shortest_vectors(np.eye(2), 0.5) == []


def test_shortest_vectors_sorted():
    vecs = shortest_vectors(np.eye(2), 2.0)
    norms = [np.linalg.norm(v) for v in vecs]
    assert norms == sorted(norms)
