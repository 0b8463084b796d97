import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybrid_blockade import analytics as an
from hybrid_blockade.errors import (
    DomainError,
    NumericalError,
    ParameterError,
    PoleError,
    UndefinedObservableError,
)
from hybrid_blockade.model import SystemParams, build_hamiltonian
from hybrid_blockade.operators import HilbertConfig, basis_index

ONE = [("e", "g", 0), ("g", "e", 0), ("g", "g", 1)]
TWO = [("e", "e", 0), ("e", "g", 1), ("g", "e", 1), ("g", "g", 2)]


def block_spectrum(p: SystemParams, labels, n: int) -> np.ndarray:
    """Eigenvalues of an excitation block of the undriven Hamiltonian, shifted to the Delta = 0 frame."""
    cfg = HilbertConfig(n_cav=4)
    H = build_hamiltonian(p.replace(eta=0.0, Delta=0.0), config=cfg)
    idx = [basis_index(lbl, cfg) for lbl in labels]
    return np.linalg.eigvalsh(H[np.ix_(idx, idx)])


def test_symmetric_roots():
    p = SystemParams(g1=10.0, g2=10.0, delta=0.0)
    s = math.sqrt(2) * 10
    np.testing.assert_allclose(an.single_excitation_roots(p), [-s, 0, s], atol=1e-10)
    np.testing.assert_allclose(an.two_excitation_roots(p), [-math.sqrt(3) * s, 0, 0, math.sqrt(3) * s], atol=1e-10)
    assert an.two_excitation_roots(p)[1:3].tolist() == [0.0, 0.0]


def test_decoupled_first_qubit():
    p = SystemParams(g1=0.0, g2=7.0, delta=3.0)
    np.testing.assert_allclose(an.single_excitation_roots(p), [-7, 3, 7], atol=1e-12)
    np.testing.assert_allclose(an.ela_branches(3.0, p), [-7, 3, 7], atol=1e-12)


def test_roots_match_blocks_at_reference_point():
    p = SystemParams(g1=10.0, g2=10.0, delta=5.0)
    np.testing.assert_allclose(an.single_excitation_roots(p), block_spectrum(p, ONE, 1), atol=1e-9)
    np.testing.assert_allclose(an.two_excitation_roots(p), block_spectrum(p, TWO, 2), atol=1e-9)


def test_far_detuned_qubit_decouples():
    # qubit 1 drops out: one-excitation root at delta, two-excitation roots at
    # delta plus the qubit-2/cavity splitting
    p = SystemParams(g1=10.0, g2=10.0, delta=1000.0)
    np.testing.assert_allclose(an.two_excitation_roots(p), block_spectrum(p, TWO, 2), atol=1e-9)
    np.testing.assert_allclose(an.single_excitation_roots(p), block_spectrum(p, ONE, 1), atol=1e-9)
    one = an.single_excitation_roots(p)
    assert abs(one[2] - p.delta) < 2 * p.g1**2 / p.delta
    np.testing.assert_allclose(one[:2], [-p.g2, p.g2], atol=2 * p.g1**2 / p.delta)
    two = an.two_excitation_roots(p)
    np.testing.assert_allclose(two[2:] - p.delta, [-p.g2, p.g2], atol=2 * p.g1**2 / p.delta)


@settings(max_examples=60, deadline=None)
@given(g1=st.floats(0, 30), g2=st.floats(0, 30), delta=st.floats(-60, 60))
def test_roots_match_diagonalization(g1, g2, delta):
    p = SystemParams(g1=g1, g2=g2, delta=delta)
    np.testing.assert_allclose(an.single_excitation_roots(p), block_spectrum(p, ONE, 1), atol=1e-9)
    np.testing.assert_allclose(an.two_excitation_roots(p), block_spectrum(p, TWO, 2), atol=1e-9)
    assert an.dressed_spectrum(p).max_residual < 1e-9


def test_real_roots_reject_complex_spectrum():
    with pytest.raises(NumericalError):
        an.real_polynomial_roots([1.0, 0.0, 1.0])
    with pytest.raises(ParameterError):
        an.real_polynomial_roots([0.0, 0.0])


def test_hpb_point_lies_on_a_resonance_branch(hpb_params):
    branches = an.ela_branches(hpb_params.delta, hpb_params)
    assert np.min(np.abs(branches - hpb_params.Delta)) < 0.025 * hpb_params.g1


def test_dark_state_has_no_photon_component():
    p = SystemParams(g1=10.0, g2=10.0, delta=0.0)
    assert an.cavity_weight(0.0, p) < 1e-20
    assert an.cavity_weight(math.sqrt(200), p) == pytest.approx(0.5)


def test_undriven_amplitudes_vanish():
    state = an.amplitude_steady_state(SystemParams(eta=0.0, Delta=3.0, delta=7.0))
    assert not np.any(state.as_array())


def test_weak_drive_amplitudes_small(hpb_params):
    state = an.amplitude_steady_state(hpb_params.replace(eta=0.01))
    assert abs(state.c_gg1) < 0.1 and abs(state.c_gg2) < 0.1
    assert an.truncated_g2(state) < 1e-3


def test_strong_drive_warns(hpb_params):
    with pytest.warns(UserWarning):
        an.amplitude_steady_state(hpb_params.replace(eta=1.0))


def test_closed_form_zero_lines():
    for k in (2, 3, 4):
        assert an.analytic_cgg2(SystemParams(Delta=7.3, delta=k * 7.3, eta=0.01)) == 0.0


def test_closed_form_needs_symmetric_coupling():
    with pytest.raises(ParameterError):
        an.analytic_cgg2(SystemParams(g1=10.0, g2=12.0, Delta=3.0, delta=1.0))


def test_closed_form_pole_is_named():
    p = SystemParams(g1=10.0, g2=10.0, delta=5.0)
    eps = an.single_excitation_roots(p)[2]
    with pytest.raises(PoleError, match="one-excitation"):
        an.analytic_cgg2(p.replace(Delta=eps, eta=0.01))


def test_two_photon_factor_matches_quartic():
    g, d = 10.0, 7.0
    for D in (-3.0, 2.0, 11.0):
        two_photon, _ = an.pole_factors(D, d, g)
        assert 2 * two_photon == pytest.approx(np.polyval(an.two_excitation_poly(d, g, g), 2 * D))


def test_closed_form_matches_amplitudes_at_strong_coupling():
    # the closed form is lossless; at g = 10 kappa this point lies a few
    # linewidths from a two-photon resonance, at g = 100 kappa it does not
    g = 100.0
    p = SystemParams(g1=g, g2=g, Delta=0.8 * g, delta=2.0 * g, eta=0.01)
    exact = an.amplitude_steady_state(p).c_gg2
    assert abs(abs(exact) - abs(an.analytic_cgg2(p))) < 0.05 * abs(an.analytic_cgg2(p))


def test_closed_form_validity_margin():
    assert not an.closed_form_valid(SystemParams(Delta=8.0, delta=20.0))
    assert an.closed_form_valid(SystemParams(g1=100.0, g2=100.0, Delta=150.0, delta=-60.0))


def test_truncated_g2_undefined_without_single_photons():
    state = an.AmplitudeState(0.1, 0.1, 0.0, 0.0, 0.0, 0.0, 0.01)
    with pytest.raises(UndefinedObservableError, match="interference"):
        an.truncated_g2(state)
    assert an.truncated_g2(an.AmplitudeState(0, 0, 0.01, 0, 0, 0, 0)) == 0.0


def test_near_singular_amplitude_system_is_reported():
    # lossless system driven at the dark-state resonance
    p = SystemParams(g1=10.0, g2=10.0, delta=0.0, Delta=0.0, eta=0.01, gamma=0.0, kappa=1e-14)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(NumericalError, match="singular .* near the"):
            an.amplitude_steady_state(p)


def test_trajectory_values():
    x, y = an.hpb_trajectory(1.0, "primary")
    assert (x, y) == pytest.approx((0.8165, 3.2660), abs=1e-4)
    assert y == pytest.approx(4 * x, rel=1e-14)
    x, y = an.hpb_trajectory(1.0, an.Branch.SECONDARY)
    assert (x, y) == pytest.approx((0.7071, 2.1213), abs=1e-4)
    assert y == pytest.approx(3 * x, rel=1e-14)


@pytest.mark.parametrize("K, branch", [(0.0, "primary"), (-1.0, "primary"), (0.7, "secondary"), (0.5, "secondary")])
def test_trajectory_domain(K, branch):
    with pytest.raises(DomainError):
        an.hpb_trajectory(K, branch)


@given(K=st.floats(0.75, 5.0))
def test_secondary_branch_on_three_delta_line(K):
    x, y = an.hpb_trajectory(K, "secondary")
    assert y == pytest.approx(3 * x)


def test_trajectory_params_keep_base_fields():
    p = an.hpb_params(2.0, "primary", SystemParams(g1=10.0, eta=0.05, gamma=0.5))
    assert (p.g1, p.g2, p.eta, p.gamma) == (10.0, 20.0, 0.05, 0.5)
