import numpy as np
import pytest

from gkpdec.circuit import build_circuit
from gkpdec.decoders import (
    Syndrome,
    chi_from_syndrome,
    cormed_decode,
    cormed_precompute,
    gamma_inverse_blocks,
    measurement_lattice_basis,
    med_decode,
)
from gkpdec.lattice import catalog, in_voronoi, pauli_residue
from gkpdec.montecarlo import simulate_measurement
from gkpdec.noise import ELL, NoiseModel, gamma0, sample_shift

ALL_CODES = ("square", "hexagonal", "tesseract", "d4")


def storage_error(circuit, xi_g):
    xi = np.zeros(6 * circuit.m)
    xi[: 2 * circuit.m] = xi_g
    return xi


def test_chi_zero_syndrome():
    code = catalog("square")
    circ = build_circuit(code, "h")
    chi = chi_from_syndrome(code, circ, Syndrome(np.zeros(2)))
    assert np.allclose(chi, 0.0)


def test_chi_recovers_injected_error_square_raw():
    code = catalog("square")
    circ = build_circuit(code, "h")
    syn, _ = simulate_measurement(circ, storage_error(circ, [0.1, -0.05]))
    assert np.allclose(syn.z, 2 * np.pi * np.sqrt(2) * np.array([-0.05, -0.1]))
    chi = chi_from_syndrome(code, circ, syn)
    assert np.allclose(chi, [0.1, -0.05], atol=1e-12)


def test_chi_roundtrip_all_codes_both_scalings():
    rng = np.random.default_rng(3)
    for name in ALL_CODES:
        code = catalog(name)
        for scaling in ("h", "hprime"):
            circ = build_circuit(code, scaling)
            xi_g = rng.uniform(-0.05, 0.05, size=2 * code.m)
            syn, _ = simulate_measurement(circ, storage_error(circ, xi_g))
            chi = chi_from_syndrome(code, circ, syn)
            assert np.allclose(chi, xi_g, atol=1e-10)


def test_chi_undetectable_dual_vector():
    # a dual-lattice storage error lands the syndrome on the lattice period
    code = catalog("square")
    circ = build_circuit(code, "h")
    syn, _ = simulate_measurement(
        circ, storage_error(circ, [2.0 ** -0.5, 0.0])
    )
    assert np.max(np.abs(syn.z)) < 1e-9
    assert np.allclose(chi_from_syndrome(code, circ, syn), 0.0, atol=1e-9)


def test_med_zero_syndrome():
    code = catalog("square")
    circ = build_circuit(code, "hprime")
    assert np.allclose(med_decode(code, circ, Syndrome(np.zeros(2))), 0.0)


def test_med_exact_recovery_in_cell():
    code = catalog("square")
    circ = build_circuit(code, "hprime")
    xi_g = np.array([0.1, -0.05])
    syn, shift = simulate_measurement(circ, storage_error(circ, xi_g))
    xibar = med_decode(code, circ, syn)
    assert np.linalg.norm(shift - xibar) < 1e-9


def test_med_out_of_cell_is_logical():
    code = catalog("square")
    circ = build_circuit(code, "hprime")
    xi_g = np.array([0.9 * code.distance, 0.0])
    syn, shift = simulate_measurement(circ, storage_error(circ, xi_g))
    xibar = med_decode(code, circ, syn)
    residual = shift - xibar
    assert not np.allclose(residual, 0.0, atol=1e-6)
    assert np.max(np.abs(pauli_residue(code, residual))) > 0.2


def test_med_output_in_voronoi_cell():
    rng = np.random.default_rng(6)
    for name in ALL_CODES:
        code = catalog(name)
        circ = build_circuit(code, "hprime")
        model = NoiseModel(np.zeros(6 * code.m), gamma0(0.01, True, code.m))
        for _ in range(100):
            syn, _ = simulate_measurement(circ, sample_shift(model, rng))
            xibar = med_decode(code, circ, syn)
            assert in_voronoi(xibar, code.relevant_vectors)


def test_cormed_context_invariants():
    for name in ALL_CODES:
        code = catalog(name)
        circ = build_circuit(code, "hprime")
        m = code.m
        g0 = gamma0(0.004, True, m)
        ctx = cormed_precompute(circ, g0)
        # Gbar from the Gamma^{-1} block decomposition matches F^T F
        gam_g, gam, gam_m = gamma_inverse_blocks(ctx.gamma, m)
        gbar = gam_m - gam.T @ np.linalg.solve(gam_g, gam)
        assert np.max(np.abs(ctx.f.T @ ctx.f - gbar)) < 1e-10
        assert np.max(np.abs(ctx.correction_map + np.linalg.solve(gam_g, gam))) < 1e-10
        eigs = np.linalg.eigvalsh(0.5 * (gbar + gbar.T))
        assert eigs.min() > 0
        # storage block of Gamma under the noiseless floor is sigma^2 I
        ctx0 = cormed_precompute(circ, gamma0(0.004, False, m))
        assert np.max(np.abs(ctx0.gamma[: 2 * m, : 2 * m] - 0.004 * np.eye(2 * m))) < 1e-7


def test_lambda_m_basis_diag_eta():
    code = catalog("square")
    circ_h = build_circuit(code, "h")
    assert np.allclose(measurement_lattice_basis(circ_h), ELL * np.eye(2))
    circ_hp = build_circuit(code, "hprime")
    assert np.allclose(measurement_lattice_basis(circ_hp), np.eye(2) / np.sqrt(2))


def test_lambda_m_basis_reference_circuit():
    from gkpdec.circuit import square_reference_circuit

    ref = square_reference_circuit()
    # q-measured aux has spacing eta_1, p-measured aux has spacing 1/eta_2
    assert np.allclose(measurement_lattice_basis(ref), np.eye(2) / np.sqrt(2))


def test_whitening_identity():
    rng = np.random.default_rng(8)
    code = catalog("d4")
    circ = build_circuit(code, "hprime")
    ctx = cormed_precompute(circ, gamma0(0.006, True, 2))
    gbar = ctx.f.T @ ctx.f
    for _ in range(50):
        u = rng.standard_normal(4)
        assert np.linalg.norm(ctx.f @ u) ** 2 == pytest.approx(
            u @ gbar @ u, rel=1e-9
        )


def test_cormed_zero_syndrome():
    code = catalog("square")
    circ = build_circuit(code, "hprime")
    ctx = cormed_precompute(circ, gamma0(0.004, True, 1))
    assert np.allclose(cormed_decode(ctx, Syndrome(np.zeros(2))), 0.0)


def test_cormed_translation_covariance():
    rng = np.random.default_rng(10)
    for name in ("square", "d4"):
        code = catalog(name)
        circ = build_circuit(code, "hprime")
        ctx = cormed_precompute(circ, gamma0(0.006, True, code.m))
        lam_basis = ctx.lambda_m_basis
        for _ in range(50):
            z = rng.uniform(-0.5, 0.5, size=2 * code.m) * ELL
            shift = (rng.integers(-2, 3, size=2 * code.m) @ lam_basis) * ELL
            a = cormed_decode(ctx, Syndrome(z))
            b = cormed_decode(ctx, Syndrome(z + shift))
            assert np.max(np.abs(a - b)) < 1e-9


def test_cormed_agrees_with_med_under_noiseless_floor():
    rng = np.random.default_rng(11)
    n = 20_000
    for name in ALL_CODES:
        code = catalog(name)
        circ = build_circuit(code, "hprime")
        g0 = gamma0(0.01, False, code.m)
        ctx = cormed_precompute(circ, g0)
        model = NoiseModel(np.zeros(6 * code.m), g0)
        disagree = 0
        for _ in range(n):
            xi = sample_shift(model, rng)
            syn, shift = simulate_measurement(circ, xi)
            med_err = not in_voronoi(
                shift - med_decode(code, circ, syn), code.relevant_vectors
            )
            cm_err = not in_voronoi(
                shift - cormed_decode(ctx, syn), code.relevant_vectors
            )
            disagree += med_err != cm_err
        assert disagree <= n * 0.001


def test_cormed_smaller_mean_residual_than_med():
    rng = np.random.default_rng(12)
    code = catalog("square")
    circ = build_circuit(code, "hprime")
    g0 = gamma0(0.004, True, 1)
    ctx = cormed_precompute(circ, g0)
    model = NoiseModel(np.zeros(6), g0)
    med_norms, cm_norms = [], []
    for _ in range(5_000):
        xi = sample_shift(model, rng)
        syn, shift = simulate_measurement(circ, xi)
        med_norms.append(np.linalg.norm(shift - med_decode(code, circ, syn)))
        cm_norms.append(np.linalg.norm(shift - cormed_decode(ctx, syn)))
    assert np.mean(cm_norms) < np.mean(med_norms)
