import json

import pytest

from hybrid_blockade import solver, validation
from hybrid_blockade.model import SystemParams

CHECKS = ["steady_state_residual", "solver_vs_oracle", "polynomial_vs_diagonalization",
          "amplitudes_vs_closed_form", "qdi_zero_lines", "truncated_g2_convergence",
          "trajectory_local_minima"]


@pytest.fixture(scope="module")
def default_report():
    return validation.validate()


def test_one_record_per_check(default_report):
    assert [r.name for r in default_report] == CHECKS
    for r in default_report:
        record = json.loads(json.dumps(r.as_dict()))
        assert set(record) == {"check", "passed", "value", "detail"}


def test_default_build_passes(default_report):
    failed = {r.name: r.detail for r in default_report if not r.passed}
    assert not failed


def test_corrupted_liouvillian_fails_residual_check(monkeypatch):
    original = solver.liouvillian_triplets
    monkeypatch.setattr(solver, "liouvillian_triplets", lambda H, c_ops: original(-H, c_ops))
    report = {r.name: r for r in validation.validate()}
    assert not report["steady_state_residual"].passed
    assert "residual" in report["steady_state_residual"].detail
    assert report["polynomial_vs_diagonalization"].passed


def test_regime_points_are_distinct_and_labelled():
    points = validation.regime_points()
    assert len(points) == 10
    assert len({label for label, _ in points}) == 10
    assert len({p for _, p in points}) == 10
    assert all(p.g1 == p.g2 == 10.0 and p.eta == 0.1 for _, p in points)


def test_block_eigenvalues_symmetric_case():
    ev = validation.block_eigenvalues(SystemParams(delta=0.0), validation.TWO_EXCITATION)
    assert ev == pytest.approx([-24.494897427831784, 0.0, 0.0, 24.494897427831784], abs=1e-10)
