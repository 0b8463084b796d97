import math

import numpy as np
import pytest

from hybrid_blockade import solver
from hybrid_blockade.errors import ConvergenceTimeout, UndefinedObservableError
from hybrid_blockade.model import ModelVariant, SystemParams, build_hamiltonian, collapse_operators
from hybrid_blockade.operators import HilbertConfig, basis_index


def dense_liouvillian(H, c_ops):
    # reference built from explicit Kronecker products
    D = H.shape[0]
    eye = np.eye(D)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    for c, rate in c_ops:
        cdc = c.conj().T @ c
        L += rate * (np.kron(c, c.conj()) - 0.5 * np.kron(cdc, eye) - 0.5 * np.kron(eye, cdc.T))
    return L


def test_sparse_liouvillian_matches_kronecker_reference(hpb_params):
    cfg = HilbertConfig(n_cav=4)
    H = build_hamiltonian(hpb_params, config=cfg)
    c_ops = collapse_operators(hpb_params, config=cfg)
    np.testing.assert_allclose(solver.liouvillian(H, c_ops).toarray(), dense_liouvillian(H, c_ops), atol=1e-13)


def test_liouvillian_reproduces_matrix_rhs(hpb_params):
    rng = np.random.default_rng(3)
    H = build_hamiltonian(hpb_params)
    c_ops = collapse_operators(hpb_params)
    X = rng.normal(size=H.shape) + 1j * rng.normal(size=H.shape)
    vec = solver.liouvillian(H, c_ops) @ X.ravel()
    np.testing.assert_allclose(vec.reshape(H.shape), solver.lindblad_rhs(H, c_ops, X), atol=1e-11)


def test_undriven_steady_state_is_vacuum():
    cfg = HilbertConfig()
    dm = solver.steady_state(SystemParams(eta=0.0), config=cfg)
    np.testing.assert_allclose(dm.entries, solver.vacuum(cfg), atol=1e-12)


def test_steady_state_is_physical(hpb_params):
    dm = solver.steady_state(hpb_params)
    assert dm.residual < 1e-10
    assert dm.trace_error < 1e-10
    assert dm.hermiticity_error < 1e-10
    assert dm.min_eigenvalue >= solver.POSITIVITY_TOL
    assert not dm.entries.flags.writeable


def test_solver_agrees_with_time_evolution(hpb_params):
    rho = solver.steady_state(hpb_params).entries
    ref, drift = solver.evolve_trajectory(hpb_params)
    assert np.max(np.abs(rho - ref.entries)) < 1e-7
    assert drift < 1e-9


def test_evolution_of_undriven_system_stays_vacuum():
    cfg = HilbertConfig()
    dm = solver.evolve_to_steady(SystemParams(eta=0.0), config=cfg)
    np.testing.assert_allclose(dm.entries, solver.vacuum(cfg), atol=1e-14)


def test_evolution_timeout_carries_partial_state(hpb_params):
    with pytest.raises(ConvergenceTimeout) as info:
        solver.evolve_to_steady(hpb_params, t_max=1.0, chunk=0.5)
    assert info.value.residual > 1e-12
    assert info.value.state is not None


def test_vacuum_observables():
    cfg = HilbertConfig()
    obs = solver.observables(solver.vacuum(cfg), cfg)
    assert obs.mean_photon == 0.0
    assert not obs.g2_defined
    np.testing.assert_array_equal(obs.pn, [1, 0, 0, 0, 0])


def test_hpb_point_observables(hpb_params):
    dm, obs = solver.solve_point(hpb_params)
    assert 1e-3 <= obs.mean_photon <= 1e-2
    assert 1e-5 < obs.g2_zero < 1e-3
    assert obs.pn.sum() == pytest.approx(1.0, abs=1e-12)
    assert obs.pn[2] < 1e-3 * obs.pn[1]


def test_photon_statistics_ignore_drive_phase(hpb_params):
    cfg = HilbertConfig()
    ref = solver.observables(solver.steady_state(hpb_params, config=cfg), cfg)
    rot = solver.observables(solver.steady_state(hpb_params, config=cfg, drive_phase=math.pi / 2), cfg)
    assert rot.g2_zero == pytest.approx(ref.g2_zero, rel=1e-9)
    assert rot.mean_photon == pytest.approx(ref.mean_photon, rel=1e-9)


def test_uncoupled_qubits_leave_cavity_dark():
    # the drive acts on the qubits only
    _, obs = solver.solve_point(SystemParams(g1=0.0, g2=0.0, eta=0.1))
    assert obs.mean_photon < 1e-30
    assert not obs.g2_defined


def test_truncation_check_examples():
    conv, drift = solver.truncation_check(SystemParams(eta=0.0))
    assert conv and drift == 0.0
    conv, _ = solver.truncation_check(SystemParams(eta=0.1, Delta=5.0, delta=20.0))
    assert conv
    conv, _ = solver.truncation_check(SystemParams(eta=5.0, Delta=0.0, delta=0.0), config=HilbertConfig(n_cav=3))
    assert not conv


def test_radiance_with_decoupled_second_qubit():
    p = SystemParams(g1=10.0, g2=0.0, Delta=3.0, delta=1.0, eta=0.1)
    n2 = solver.solve_point(p)[1].mean_photon
    n11 = solver.solve_point(p, ModelVariant.SINGLE_QUBIT_1)[1].mean_photon
    n12 = solver.solve_point(p, ModelVariant.SINGLE_QUBIT_2)[1].mean_photon
    assert n2 == pytest.approx(n11, rel=1e-9)
    assert n12 < 1e-30
    assert solver.radiance_witness(p) == pytest.approx(-n12 / (n11 + n12), abs=1e-9)


def test_radiance_undefined_without_reference_emission():
    with pytest.raises(UndefinedObservableError):
        solver.radiance_from_means(1.0, 0.0, 0.0)


def test_single_qubit_populations_sum_to_one():
    dm, obs = solver.solve_point(SystemParams(Delta=2.0, eta=0.5), ModelVariant.SINGLE_QUBIT_2)
    cfg = ModelVariant.SINGLE_QUBIT_2.config()
    assert dm.entries.shape == (cfg.dim, cfg.dim)
    p_excited = sum(dm.entries[basis_index(("e", n), cfg), basis_index(("e", n), cfg)].real for n in range(5))
    assert 0 < p_excited < 0.5
