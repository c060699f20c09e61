import numpy as np
import pytest

from gkpdec.noise import (
    NOISE_FLOOR,
    InvalidParameterError,
    NoiseModel,
    db_to_sigma2_over_2pi,
    gamma0,
    sample_shift,
    sigma2_over_2pi_to_db,
)


def test_gamma0_noisy_all_equal():
    g = gamma0(2 * np.pi * 0.004, True, 2)
    assert g.shape == (12, 12)
    assert np.allclose(np.diag(g), 2 * np.pi * 0.004)
    assert np.allclose(g - np.diag(np.diag(g)), 0.0)


def test_gamma0_noisy_zero_sigma_is_exactly_zero():
    g = gamma0(0.0, True, 1)
    assert np.all(g == 0.0)


def test_gamma0_noiseless_aux_floor():
    s2 = 0.01
    g = gamma0(s2, False, 1)
    assert np.allclose(np.diag(g)[:2], s2)
    assert np.allclose(np.diag(g)[2:], NOISE_FLOOR)


def test_gamma0_rejects_negative():
    with pytest.raises(InvalidParameterError):
        gamma0(-0.1, True, 1)


def test_sample_shift_zero_cov_returns_mean():
    mean = np.arange(6.0)
    model = NoiseModel(mean, np.zeros((6, 6)))
    rng = np.random.default_rng(0)
    assert np.array_equal(sample_shift(model, rng), mean)


def test_sample_shift_deterministic_per_seed():
    model = NoiseModel(np.zeros(6), gamma0(0.01, True, 1))
    a = sample_shift(model, np.random.default_rng(42))
    b = sample_shift(model, np.random.default_rng(42))
    assert np.array_equal(a, b)


def test_sample_shift_zero_variance_coordinates_exact():
    cov = np.diag([0.1, 0.0, 0.2, 0.0])
    model = NoiseModel(np.zeros(4), cov)
    xi = sample_shift(model, np.random.default_rng(1))
    assert xi[1] == 0.0 and xi[3] == 0.0
    assert xi[0] != 0.0 and xi[2] != 0.0


def test_sample_shift_statistics():
    s2 = 0.02
    cov = np.diag(np.full(6, s2))
    cov[0, 1] = cov[1, 0] = 0.5 * s2
    model = NoiseModel(np.zeros(6), cov)
    rng = np.random.default_rng(7)
    n = 200_000
    samples = np.array([sample_shift(model, rng) for _ in range(n)])
    emp = samples.T @ samples / n
    # 3-sigma band on variances: var of sample variance = 2 s2^2 / n
    band = 3.0 * s2 * np.sqrt(2.0 / n)
    assert np.max(np.abs(np.diag(emp) - s2)) < band
    assert abs(emp[0, 1] - 0.5 * s2) < band
    assert np.max(np.abs(samples.mean(axis=0))) < 3.0 * np.sqrt(s2 / n)


def test_db_conversion_11db():
    assert db_to_sigma2_over_2pi(11.0) == pytest.approx(
        10.0 ** -1.1 / (4.0 * np.pi), abs=1e-12
    )
    assert db_to_sigma2_over_2pi(11.0) == pytest.approx(0.006321, abs=5e-7)
    # lands inside the standard noise grid
    assert 0.002 < db_to_sigma2_over_2pi(11.0) < 0.010


def test_db_conversion_10db():
    # Delta^2 = 0.05, grid value 0.05 / (2 pi)
    assert db_to_sigma2_over_2pi(10.0) == pytest.approx(
        0.05 / (2.0 * np.pi), abs=1e-12
    )


def test_db_round_trip():
    for db in (3.0, 9.9, 11.0, 15.5):
        assert sigma2_over_2pi_to_db(db_to_sigma2_over_2pi(db)) == pytest.approx(
            db, abs=1e-12
        )
