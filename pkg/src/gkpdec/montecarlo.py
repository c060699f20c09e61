"""Monte-Carlo logical-error-rate experiments.

One trial: sample a shift on all 3m modes, push it through the Steane
circuit, reduce the measured values into their modular windows, decode
(MED or COR-MED), and test whether the net storage displacement stays in
the logical Voronoi cell. Cells aggregate trials into a PLEstimate with a
Wilson 95% interval.

Trials are indexed, and every trial's randomness comes from a counter-based
stream keyed by (cell seed, trial index), so a cell's result is a pure
function of (master_seed, cell_index, n_trials) no matter how many threads
or batches execute it. The compiled kernel (gkpdec._core) is used when
available; gkpdec._mc_python is the pure-NumPy fallback. Set
GKPDEC_BACKEND=python|compiled to override, GKPDEC_THREADS to cap workers.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _mc_python
from ._philox import derive_key
from .circuit import build_circuit
from .cvp import ReducedLattice
from .decoders import (
    Syndrome,
    cormed_decode,
    cormed_precompute,
    med_decode,
)
from .lattice import GkpCode, catalog, in_voronoi, pauli_residue
from .noise import ELL, gamma0, sample_shift
from .symplectic import omega

try:
    from . import _core
except ImportError:  # compiled kernel not built; fall back to NumPy
    _core = None

DECODERS = ("med", "cor-med")

WILSON_Z = 1.959963984540054  # two-sided 95%


def available_backends():
    return ("compiled", "python") if _core is not None else ("python",)


def default_backend():
    env = os.environ.get("GKPDEC_BACKEND")
    if env:
        if env not in ("compiled", "python"):
            raise ValueError(f"GKPDEC_BACKEND must be compiled|python, got {env!r}")
        if env == "compiled" and _core is None:
            raise RuntimeError("compiled backend requested but gkpdec._core is missing")
        return env
    return "compiled" if _core is not None else "python"


def default_threads():
    env = os.environ.get("GKPDEC_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


@dataclass(frozen=True)
class TrialOutcome:
    logical_error: bool
    residual_norm: float
    pauli_class: np.ndarray


@dataclass(frozen=True)
class PLEstimate:
    code: str
    decoder: str
    scaling: str
    noisy_aux: bool
    sigma2_over_2pi: float
    trials: int
    errors: int
    p_l: float
    ci_low: float
    ci_high: float
    seed: int


def wilson_interval(errors, trials, z=WILSON_Z):
    """Wilson score interval; well-behaved at zero error counts."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    p = errors / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    # clamp away round-off so ci_low <= p_l <= ci_high holds exactly
    return float(min(max(0.0, center - half), p)), float(max(min(1.0, center + half), p))


def simulate_measurement(circuit, xi):
    """Propagate a shift through the circuit and measure the auxiliaries.

    Returns (Syndrome, storage shift): z = ell * Pi_m Tbar xi reduced
    componentwise into [-w_j/2, w_j/2), and xi_TG = Pi_G Tbar xi.
    """
    xi = np.asarray(xi, dtype=float)
    if xi.size != 6 * circuit.m:
        raise ValueError(f"xi must have length {6 * circuit.m}")
    propagated = circuit.tbar.mat @ xi
    z = ELL * (circuit.maps.pi_m @ propagated)
    w = circuit.windows
    z -= w * np.floor(z / w + 0.5)
    return Syndrome(z), circuit.maps.pi_g @ propagated


def run_trial(code, circuit, decoder, ctx, noise_model, rng):
    """One reference-path trial; the batch kernels replicate this logic."""
    xi = sample_shift(noise_model, rng)
    syn, storage_shift = simulate_measurement(circuit, xi)
    if decoder == "med":
        correction = med_decode(code, circuit, syn)
    elif decoder == "cor-med":
        correction = cormed_decode(ctx, syn)
    else:
        raise ValueError(f"unknown decoder {decoder!r}")
    residual = storage_shift - correction
    return TrialOutcome(
        logical_error=not in_voronoi(residual, code.relevant_vectors),
        residual_norm=float(np.linalg.norm(residual)),
        pauli_class=pauli_residue(code, residual),
    )


@dataclass
class CellPlan:
    """Precomputed arrays consumed by the batch kernels."""

    dim: int
    nsyn: int
    decoder: int  # 0 med, 1 cor-med
    key0: int
    key1: int
    noise_std: np.ndarray
    mmeas: np.ndarray
    mstor: np.ndarray
    windows: np.ndarray
    # med path
    chimap: np.ndarray
    med_reduced: np.ndarray
    med_qt: np.ndarray
    med_r: np.ndarray
    # cor-med path
    fz: np.ndarray
    corr_z: np.ndarray
    corr_l: np.ndarray
    lam_reduced: np.ndarray
    wh_reduced: np.ndarray
    wh_qt: np.ndarray
    wh_r: np.ndarray
    # classification
    relvecs: np.ndarray
    relthr: np.ndarray


def _resolve_code(code):
    return code if isinstance(code, GkpCode) else catalog(code)


def build_cell_plan(code, decoder, sigma2_over_2pi, seed_key, scaling="hprime",
                    noisy_aux=True, circuit=None):
    """Assemble the kernel inputs for one experiment cell."""
    code = _resolve_code(code)
    if decoder not in DECODERS:
        raise ValueError(f"unknown decoder {decoder!r}; expected one of {DECODERS}")
    if circuit is None:
        circuit = build_circuit(code, scaling)
    m = code.m
    g0 = gamma0(sigma2_over_2pi, noisy_aux, m)
    t = circuit.tbar.mat
    rel = code.relevant_vectors
    dummy = np.eye(2 * m)

    chimap = fz = corr_z = corr_l = lam_reduced = dummy
    med_reduced = med_qt = med_r = wh_reduced = wh_qt = wh_r = dummy
    if decoder == "med":
        lat = ReducedLattice(code.dual_basis)
        chimap = -omega(m) @ np.linalg.solve(
            code.basis, np.diag(1.0 / (ELL * circuit.nu))
        )
        med_reduced, med_qt, med_r = lat.reduced, lat.q.T.copy(), lat.r
    else:
        ctx = cormed_precompute(circuit, g0)
        fz = -ctx.f / ELL
        corr_z = ctx.correction_map / ELL
        corr_l = ctx.correction_map
        lam_reduced = ctx._lambda_reduced
        wh_reduced = ctx._search.reduced
        wh_qt, wh_r = ctx._search.q.T.copy(), ctx._search.r

    k0, k1 = seed_key
    return CellPlan(
        dim=6 * m,
        nsyn=2 * m,
        decoder=0 if decoder == "med" else 1,
        key0=k0,
        key1=k1,
        noise_std=np.sqrt(np.diag(g0)),
        mmeas=ELL * (circuit.maps.pi_m @ t),
        mstor=circuit.maps.pi_g @ t,
        windows=circuit.windows,
        chimap=chimap,
        med_reduced=med_reduced,
        med_qt=med_qt,
        med_r=med_r,
        fz=fz,
        corr_z=corr_z,
        corr_l=corr_l,
        lam_reduced=lam_reduced,
        wh_reduced=wh_reduced,
        wh_qt=wh_qt,
        wh_r=wh_r,
        relvecs=rel,
        relthr=0.5 * np.sum(rel * rel, axis=1) + 1e-12,
    )


def run_cell(plan, n_trials, backend=None, threads=None):
    """Dispatch a prepared cell to the selected kernel backend."""
    backend = backend or default_backend()
    threads = threads or default_threads()
    if backend == "compiled":
        if _core is None:
            raise RuntimeError("compiled backend unavailable")
        return _core.run_cell(plan, 0, n_trials, threads)
    return _mc_python.run_cell(plan, 0, n_trials)


def estimate_pl(code, decoder, sigma2_over_2pi, n_trials, master_seed, *,
                scaling="hprime", noisy_aux=True, cell_index=0,
                threads=None, backend=None):
    """Logical-error probability for one (code, decoder, sigma^2) cell."""
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    code = _resolve_code(code)
    key = derive_key(master_seed, cell_index)
    plan = build_cell_plan(code, decoder, sigma2_over_2pi, key,
                           scaling=scaling, noisy_aux=noisy_aux)
    errors = run_cell(plan, n_trials, backend=backend, threads=threads)
    lo, hi = wilson_interval(errors, n_trials)
    return PLEstimate(
        code=code.name,
        decoder=decoder,
        scaling=scaling,
        noisy_aux=noisy_aux,
        sigma2_over_2pi=float(sigma2_over_2pi),
        trials=int(n_trials),
        errors=int(errors),
        p_l=errors / n_trials,
        ci_low=lo,
        ci_high=hi,
        seed=key[0],
    )


def sweep(codes, decoders, sigma2_grid, n_trials, master_seed, *,
          scaling="hprime", noisy_aux=True, threads=None, backend=None):
    """One PLEstimate per (code, decoder, sigma^2) cell, deterministic cell
    seeds derived from (master_seed, cell_index) in enumeration order."""
    grid = [float(s) for s in sigma2_grid]
    if not grid:
        raise ValueError("sigma2 grid must be nonempty")
    results = []
    cell_index = 0
    for code in codes:
        for decoder in decoders:
            for s2 in grid:
                results.append(
                    estimate_pl(code, decoder, s2, n_trials, master_seed,
                                scaling=scaling, noisy_aux=noisy_aux,
                                cell_index=cell_index, threads=threads,
                                backend=backend)
                )
                cell_index += 1
    return results
