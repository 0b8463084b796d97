import numpy as np
import pytest
from hypothesis import given, strategies as st

from hybrid_blockade.errors import DimensionError
from hybrid_blockade.operators import (
    HilbertConfig,
    annihilation,
    basis_index,
    basis_labels,
    basis_state,
    dag,
    embed,
    ladder_operators,
    sigma_minus,
)


def test_annihilation_matrix_elements():
    a = annihilation(4)
    assert a.shape == (4, 4)
    np.testing.assert_allclose(np.diag(a, 1), np.sqrt([1, 2, 3]))
    assert np.count_nonzero(a) == 3


def test_annihilation_rejects_tiny_space():
    with pytest.raises(DimensionError):
        annihilation(1)


def test_sigma_minus_lowers_excited_state():
    sm = sigma_minus()
    g, e = np.array([1, 0]), np.array([0, 1])
    np.testing.assert_array_equal(sm @ e, g)
    np.testing.assert_array_equal(sm @ g, [0, 0])


def test_config_validation():
    with pytest.raises(DimensionError):
        HilbertConfig(n_cav=2)
    with pytest.raises(DimensionError):
        HilbertConfig(qubit_count=3)
    assert HilbertConfig(n_cav=5).dim == 20
    assert HilbertConfig(n_cav=5, qubit_count=1).dim == 10


def test_embedded_operators_on_different_slots_commute():
    cfg = HilbertConfig(n_cav=4)
    a, (s1, s2) = ladder_operators(cfg)
    for x, y in [(a, s1), (a, s2), (s1, s2), (dag(a), s1), (s1, dag(s2))]:
        np.testing.assert_allclose(x @ y - y @ x, 0, atol=1e-14)


def test_embed_checks_slot_and_shape():
    cfg = HilbertConfig(n_cav=4)
    with pytest.raises(DimensionError):
        embed(sigma_minus(), 3, cfg)
    with pytest.raises(DimensionError):
        embed(annihilation(4), 0, cfg)


def test_ladder_operators_are_read_only():
    a, _ = ladder_operators(HilbertConfig())
    with pytest.raises(ValueError):
        a[0, 0] = 1.0


def test_cavity_index_runs_fastest():
    cfg = HilbertConfig(n_cav=5)
    assert basis_index(("g", "g", 0), cfg) == 0
    assert basis_index(("g", "g", 1), cfg) == 1
    assert basis_index(("g", "e", 0), cfg) == 5
    assert basis_index(("e", "g", 0), cfg) == 10


def test_annihilation_acts_on_labelled_states():
    cfg = HilbertConfig(n_cav=5)
    a, (s1, _) = ladder_operators(cfg)
    np.testing.assert_allclose(a @ basis_state(("e", "g", 2), cfg), np.sqrt(2) * basis_state(("e", "g", 1), cfg))
    np.testing.assert_allclose(s1 @ basis_state(("e", "g", 2), cfg), basis_state(("g", "g", 2), cfg))


@given(n_cav=st.integers(3, 8), qubits=st.sampled_from([1, 2]))
def test_label_index_round_trip(n_cav, qubits):
    cfg = HilbertConfig(n_cav=n_cav, qubit_count=qubits)
    labels = basis_labels(cfg)
    assert len(labels) == cfg.dim
    assert [basis_index(lbl, cfg) for lbl in labels] == list(range(cfg.dim))


@given(n_cav=st.integers(3, 8))
def test_commutator_is_identity_below_cutoff(n_cav):
    a = annihilation(n_cav)
    comm = a @ dag(a) - dag(a) @ a
    expected = np.eye(n_cav)
    expected[-1, -1] = 1 - n_cav  # truncation artefact in the top Fock state
    np.testing.assert_allclose(comm, expected, atol=1e-12)
