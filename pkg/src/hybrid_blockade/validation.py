"""Self-checks cross-validating the solver, the analytics and the model.

Each check returns a :class:`CheckResult`; :func:`validate` runs them all and
never raises, so a broken component shows up as a failed, named check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytics as an
from . import solver
from .model import ModelVariant, SystemParams, build_hamiltonian
from .operators import HilbertConfig, basis_index

ONE_EXCITATION = (("e", "g", 0), ("g", "e", 0), ("g", "g", 1))
TWO_EXCITATION = (("e", "e", 0), ("e", "g", 1), ("g", "e", 1), ("g", "g", 2))
TRAJECTORY_K = (1.0, 1.5, 2.0, 2.5, 3.0)


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    value: float = math.nan

    def as_dict(self) -> dict:
        value = None if math.isnan(self.value) else float(self.value)
        return {"check": self.name, "passed": bool(self.passed), "value": value, "detail": self.detail}


def regime_points(g: float = 10.0, eta: float = 0.1, gamma: float = 1.0) -> list[tuple[str, SystemParams]]:
    """Ten reference points covering blockade regimes at symmetric coupling."""
    base = SystemParams(g1=g, g2=g, eta=eta, gamma=gamma)
    hpb = math.sqrt(2 / 3) * g
    sec = math.sqrt(0.5) * g
    cpb_low = float(an.ela_branches(-3 * g, base)[0])
    cpb_top = float(an.ela_branches(2 * g, base)[2])
    return [
        ("hpb_primary", base.replace(Delta=hpb, delta=4 * hpb)),
        ("hpb_secondary", base.replace(Delta=sec, delta=3 * sec)),
        ("cpb_resonant_delta0", base.replace(Delta=-math.sqrt(2) * g, delta=0.0)),
        ("cpb_lower_branch", base.replace(Delta=cpb_low, delta=-3 * g)),
        ("cpb_upper_branch", base.replace(Delta=cpb_top, delta=2 * g)),
        ("upb_3Delta", base.replace(Delta=-0.9 * g, delta=-2.7 * g)),
        ("upb_4Delta", base.replace(Delta=-1.1 * g, delta=-4.4 * g)),
        ("qdi_2Delta_valley", base.replace(Delta=0.5 * g, delta=1.0 * g)),
        ("dark_state", base.replace(Delta=0.0, delta=0.0)),
        ("far_detuned", base.replace(Delta=2.5 * g, delta=-1.0 * g)),
    ]


def block_eigenvalues(params: SystemParams, labels) -> np.ndarray:
    """Eigenvalues of an excitation block of the undriven Hamiltonian (``Delta = 0`` frame)."""
    config = HilbertConfig(n_cav=3, qubit_count=2)
    H = build_hamiltonian(params.replace(eta=0.0, Delta=0.0), ModelVariant.TWO_QUBIT, config)
    idx = [basis_index(lbl, config) for lbl in labels]
    return np.linalg.eigvalsh(H[np.ix_(idx, idx)])


def check_solver_vs_oracle(points, tol: float = 1e-7) -> CheckResult:
    worst = 0.0
    for label, p in points:
        rho = solver.steady_state(p).entries
        ref = solver.evolve_to_steady(p).entries
        worst = max(worst, float(np.max(np.abs(rho - ref))))
    return CheckResult("solver_vs_oracle", worst < tol,
                       f"max |rho_LU - rho_evolved| = {worst:.2e} (tol {tol:g}) over {len(points)} points", worst)


def check_steady_state_residual(points, tol: float = 1e-10) -> CheckResult:
    bad = []
    worst = 0.0
    for label, p in points:
        dm = solver.steady_state(p)
        worst = max(worst, dm.residual)
        if (dm.residual >= tol or dm.trace_error >= 1e-10 or dm.hermiticity_error >= 1e-10
                or dm.min_eigenvalue < solver.POSITIVITY_TOL):
            bad.append(label)
    return CheckResult("steady_state_residual", not bad,
                       f"max residual {worst:.2e}; unphysical at {bad}" if bad else f"max residual {worst:.2e}",
                       worst)


def check_polynomial_vs_diagonalization(n: int = 100, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        p = SystemParams(g1=rng.uniform(0, 20), g2=rng.uniform(0, 20), delta=rng.uniform(-40, 40))
        worst = max(worst,
                    float(np.max(np.abs(an.single_excitation_roots(p) - block_eigenvalues(p, ONE_EXCITATION)))),
                    float(np.max(np.abs(an.two_excitation_roots(p) - block_eigenvalues(p, TWO_EXCITATION)))))
    return CheckResult("polynomial_vs_diagonalization", worst < tol,
                       f"max root deviation {worst:.2e} over {n} random (delta, g1, g2)", worst)


def check_amplitudes_vs_closed_form(n: int = 50, seed: int = 1, rel: float = 0.05) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst, used = 0.0, 0
    while used < n:
        g = rng.uniform(20, 300)
        D = g * rng.uniform(-2.5, 2.5)
        p = SystemParams(g1=g, g2=g, Delta=D, delta=D * rng.uniform(-6, 6), eta=0.01)
        if not an.closed_form_valid(p):
            continue
        exact = an.amplitude_steady_state(p).c_gg2
        approx = an.analytic_cgg2(p)
        worst = max(worst, abs(abs(exact) - abs(approx)) / abs(approx))
        used += 1
    return CheckResult("amplitudes_vs_closed_form", worst < rel,
                       f"max relative |C_gg2| deviation {worst:.2e} over {n} valid points", worst)


def weak_drive_points(g: float = 10.0, gamma: float = 1.0) -> list[SystemParams]:
    base = SystemParams(g1=g, g2=g, gamma=gamma)
    hpb = math.sqrt(2 / 3) * g
    return [
        base.replace(Delta=hpb, delta=4 * hpb),
        base.replace(Delta=0.5 * g, delta=1.2 * g),
        base.replace(Delta=1.2 * g, delta=3.0 * g),
        base.replace(Delta=-0.8 * g, delta=0.5 * g),
        base.replace(Delta=0.3 * g, delta=-1.0 * g, g2=1.5 * g),
    ]


def weak_drive_error(p: SystemParams, eta: float) -> float:
    q = p.replace(eta=eta)
    full = solver.solve_point(q, n_cav=6)[1].g2_zero
    return abs(an.truncated_g2(an.amplitude_steady_state(q)) - full) / full


def check_truncated_g2_convergence(points=None) -> CheckResult:
    points = points or weak_drive_points()
    bad = []
    worst = 0.0
    for k, p in enumerate(points):
        e_weak, e_strong = weak_drive_error(p, 0.01), weak_drive_error(p, 0.05)
        worst = max(worst, e_weak)
        if not (e_weak < 0.1 and e_weak < e_strong):
            bad.append(k)
    return CheckResult("truncated_g2_convergence", not bad,
                       f"max relative error at eta=0.01: {worst:.2e}; failing points {bad}", worst)


def trajectory_minimum_margins(base: SystemParams, K_values=TRAJECTORY_K, step: float = 0.02):
    """``(K, branch, g2 at point, min g2 at Delta * (1 +- step))`` along both series.

    The perturbation keeps ``delta / Delta`` fixed.
    """
    out = []
    for branch in an.Branch:
        for K in K_values:
            p = an.hpb_params(K, branch, base)
            g2 = solver.solve_point(p)[1].g2_zero
            nb = min(solver.solve_point(p.replace(Delta=p.Delta * f, delta=p.delta * f))[1].g2_zero
                     for f in (1 - step, 1 + step))
            out.append((K, branch.value, g2, nb))
    return out


def check_trajectory_minima(base: SystemParams) -> CheckResult:
    rows = trajectory_minimum_margins(base)
    bad = [(K, b) for K, b, g2, nb in rows if not g2 < nb]
    return CheckResult("trajectory_local_minima", not bad,
                       f"not a local g2 minimum under +-2% Delta: {bad}" if bad else "all points are local minima",
                       float(len(bad)))


def check_qdi_zero_lines(n: int = 50, seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    nonzero = 0
    for D in rng.uniform(0.1, 50, n):
        for k in (2, 3, 4):
            p = SystemParams(g1=10.0, g2=10.0, Delta=float(D), delta=float(k * D), eta=0.01)
            nonzero += an.analytic_cgg2(p) != 0.0
    return CheckResult("qdi_zero_lines", nonzero == 0, f"{nonzero} non-zero closed-form values on QDI lines")


def validate(base: SystemParams | None = None) -> list[CheckResult]:
    """Run every check; ``base`` supplies ``g1``, ``eta`` and ``gamma``."""
    base = base or SystemParams()
    points = regime_points(base.g1, base.eta, base.gamma)
    checks = [
        lambda: check_steady_state_residual(points),
        lambda: check_solver_vs_oracle(points[:3]),
        check_polynomial_vs_diagonalization,
        check_amplitudes_vs_closed_form,
        check_qdi_zero_lines,
        lambda: check_truncated_g2_convergence(weak_drive_points(base.g1, base.gamma)),
        lambda: check_trajectory_minima(base.replace(g2=base.g1)),
    ]
    names = ["steady_state_residual", "solver_vs_oracle", "polynomial_vs_diagonalization",
             "amplitudes_vs_closed_form", "qdi_zero_lines", "truncated_g2_convergence",
             "trajectory_local_minima"]
    results = []
    for name, check in zip(names, checks):
        try:
            results.append(check())
        except Exception as exc:  # a crashing check is a failed check
            results.append(CheckResult(name, False, f"{type(exc).__name__}: {exc}"))
    return results
