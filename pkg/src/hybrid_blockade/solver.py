"""Steady state of the Lindblad master equation and derived photon statistics.

Density matrices are vectorised row-major (``rho.ravel()``), so that
``vec(A rho B) = kron(A, B.T) @ vec(rho)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp

from .errors import (
    ConvergenceTimeout,
    NumericalError,
    PositivityError,
    SingularSystemError,
    UndefinedObservableError,
)
from .model import ModelVariant, SystemParams, build_hamiltonian, collapse_operators
from .operators import HilbertConfig, basis_index, dag, ladder_operators

POSITIVITY_TOL = -1e-8
G2_UNDEFINED_BELOW = 1e-14
TRUNCATION_DRIFT_TOL = 1e-6


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray
    residual: float
    min_eigenvalue: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace_error(self) -> float:
        return abs(np.trace(self.entries) - 1.0)

    @property
    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - dag(self.entries))))


@dataclass(frozen=True)
class Observables:
    mean_photon: float
    g2_zero: float  # NaN when undefined
    pn: np.ndarray = field(repr=False)
    radiance: float | None = None

    @property
    def g2_defined(self) -> bool:
        return not math.isnan(self.g2_zero)


# -- superoperators -----------------------------------------------------------

def lindblad_generator(H: np.ndarray, c_ops):
    """Function ``rho -> d rho / dt`` evaluated in matrix form.

    Uses ``A rho + rho A^+ + sum_k rate_k c_k rho c_k^+`` with the
    non-Hermitian ``A = -i H - sum_k rate_k c_k^+ c_k / 2``.
    """
    A = -1j * np.asarray(H, dtype=complex)
    jumps = []
    for c, rate in c_ops:
        A = A - 0.5 * rate * (dag(c) @ c)
        jumps.append((rate * np.asarray(c), dag(c)))
    Ad = dag(A)

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = A @ rho + rho @ Ad
        for c, cd in jumps:
            out += c @ rho @ cd
        return out

    return rhs


def lindblad_rhs(H: np.ndarray, c_ops, rho: np.ndarray) -> np.ndarray:
    """``d rho / dt`` evaluated directly in matrix form."""
    return lindblad_generator(H, c_ops)(rho)


def liouvillian(H: np.ndarray, c_ops) -> sp.csr_matrix:
    """Sparse Liouvillian acting on row-major vectorised density matrices."""
    D = H.shape[0]
    rows, cols, vals = liouvillian_triplets(H, c_ops)
    return sp.csr_matrix((vals, (rows, cols)), shape=(D * D, D * D))


def liouvillian_triplets(H: np.ndarray, c_ops):
    # COO entries; duplicates are summed on conversion
    D = H.shape[0]
    idx = np.arange(D)
    A = -1j * np.asarray(H, dtype=complex)
    for c, rate in c_ops:
        A = A - 0.5 * rate * (dag(c) @ c)
    rows, cols, vals = [], [], []

    # kron(A, I) + kron(I, conj(A)) without materialising the Kronecker products
    i, k = np.nonzero(A)
    rows += [(i[:, None] * D + idx).ravel(), (idx[:, None] * D + i).ravel()]
    cols += [(k[:, None] * D + idx).ravel(), (idx[:, None] * D + k).ravel()]
    vals += [np.repeat(A[i, k], D), np.tile(A[i, k].conj(), D)]

    for c, rate in c_ops:
        i, k = np.nonzero(c)
        rows.append((i[:, None] * D + i[None, :]).ravel())
        cols.append((k[:, None] * D + k[None, :]).ravel())
        vals.append(rate * np.outer(c[i, k], c[i, k].conj()).ravel())
    return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)


def _finish(rho: np.ndarray, H, c_ops, check_positive: bool = True) -> DensityMatrix:
    residual = float(np.max(np.abs(lindblad_rhs(H, c_ops, rho))))
    min_eig = float(np.linalg.eigvalsh(0.5 * (rho + dag(rho)))[0])
    if check_positive and min_eig < POSITIVITY_TOL:
        raise PositivityError(
            f"steady state has eigenvalue {min_eig:.3e} < {POSITIVITY_TOL:g}; "
            "the Fock truncation is probably too small, increase n_cav"
        )
    rho.flags.writeable = False
    return DensityMatrix(entries=rho, residual=residual, min_eigenvalue=min_eig)


def solve_liouvillian(H: np.ndarray, c_ops) -> np.ndarray:
    """Solve ``L rho = 0`` with ``Tr rho = 1`` by trace-row replacement and LU.

    The equation for ``rho[0, 0]`` is replaced by the trace functional.
    """
    D = H.shape[0]
    rows, cols, vals = liouvillian_triplets(H, c_ops)
    keep = rows != 0
    diag = np.arange(D) * (D + 1)
    rows = np.concatenate([rows[keep], np.zeros(D, dtype=rows.dtype)])
    cols = np.concatenate([cols[keep], diag])
    vals = np.concatenate([vals[keep], np.ones(D, dtype=complex)])
    M = sp.csc_matrix((vals, (rows, cols)), shape=(D * D, D * D))
    b = np.zeros(D * D, dtype=complex)
    b[0] = 1.0
    try:
        x = spla.splu(M).solve(b)
    except RuntimeError as exc:
        raise SingularSystemError(
            f"Liouvillian has more than a one-dimensional null space ({exc}); "
            "the steady state is not unique"
        ) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("steady-state solve produced non-finite entries")
    return x.reshape(D, D)


def steady_state(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    drive_phase: float = 0.0,
) -> DensityMatrix:
    config = config or variant.config()
    H = build_hamiltonian(params, variant, config, drive_phase=drive_phase)
    c_ops = collapse_operators(params, variant, config)
    rho = solve_liouvillian(H, c_ops)
    dm = _finish(rho, H, c_ops)
    scale = max(1.0, float(np.max(np.abs(H))), max(r for _, r in c_ops))
    if dm.residual > 1e-6 * scale:
        raise SingularSystemError(
            f"steady-state residual {dm.residual:.3e} is not small; "
            "the Liouvillian is (nearly) singular beyond its trace mode"
        )
    return dm


def vacuum(config: HilbertConfig) -> np.ndarray:
    psi = np.zeros(config.dim, dtype=complex)
    psi[basis_index(("g",) * config.qubit_count + (0,), config)] = 1.0
    return np.outer(psi, psi.conj())


def evolve_to_steady(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    t_max: float = 2000.0,
    tol: float = 1e-12,
    chunk: float = 5.0,
    rtol: float = 1e-12,
    atol: float = 1e-15,
) -> DensityMatrix:
    """Integrate the master equation from the vacuum until ``max|d rho/dt| < tol``.

    Independent of :func:`steady_state`: the right-hand side is evaluated in
    matrix form and no vectorised Liouvillian is ever built.
    """
    return evolve_trajectory(params, variant, config, t_max, tol, chunk, rtol, atol)[0]


def evolve_trajectory(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    t_max: float = 2000.0,
    tol: float = 1e-12,
    chunk: float = 5.0,
    rtol: float = 1e-12,
    atol: float = 1e-15,
) -> tuple[DensityMatrix, float]:
    """Like :func:`evolve_to_steady`, also returning the largest trace drift."""
    if t_max <= 0 or tol <= 0:
        raise ValueError("t_max and tol must be positive")
    config = config or variant.config()
    H = build_hamiltonian(params, variant, config)
    c_ops = collapse_operators(params, variant, config)
    D = config.dim

    generator = lindblad_generator(H, c_ops)

    def rhs(_t, y):
        return generator(y.reshape(D, D)).ravel()

    rho = vacuum(config)
    t = 0.0
    trace_drift = 0.0
    residual = float(np.max(np.abs(generator(rho))))
    while residual >= tol:
        if t >= t_max:
            raise ConvergenceTimeout(
                f"t_max={t_max} reached with residual {residual:.3e} >= {tol:g}",
                residual=residual,
                state=rho,
            )
        t_end = min(t + chunk, t_max)
        sol = solve_ivp(
            rhs, (t, t_end), rho.ravel(), method="DOP853", rtol=rtol, atol=atol,
            t_eval=np.linspace(t, t_end, 6),
        )
        if not sol.success:
            raise NumericalError(f"time integration failed: {sol.message}")
        traces = sol.y.reshape(D, D, -1).trace(axis1=0, axis2=1)
        trace_drift = max(trace_drift, float(np.max(np.abs(traces - 1.0))))
        rho = sol.y[:, -1].reshape(D, D)
        t = t_end
        residual = float(np.max(np.abs(generator(rho))))
    return _finish(rho.copy(), H, c_ops, check_positive=False), trace_drift


# -- observables --------------------------------------------------------------

def photon_distribution(rho: np.ndarray, config: HilbertConfig) -> np.ndarray:
    """Cavity Fock populations after tracing out the qubits."""
    diag = np.real(np.diagonal(np.asarray(rho))).reshape(-1, config.n_cav)
    return diag.sum(axis=0)


def observables(rho: DensityMatrix | np.ndarray, config: HilbertConfig) -> Observables:
    entries = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho)
    a, _ = ladder_operators(config)
    ad = dag(a)
    mean = float(np.real(np.trace(ad @ a @ entries)))
    second = float(np.real(np.trace(ad @ ad @ a @ a @ entries)))
    g2 = second / mean**2 if mean > G2_UNDEFINED_BELOW else math.nan
    return Observables(mean_photon=mean, g2_zero=g2, pn=photon_distribution(entries, config))


def solve_point(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    n_cav: int = 5,
) -> tuple[DensityMatrix, Observables]:
    config = variant.config(n_cav)
    dm = steady_state(params, variant, config)
    return dm, observables(dm, config)


def radiance_from_means(two_qubit: float, single_1: float, single_2: float) -> float:
    denom = single_1 + single_2
    if denom < G2_UNDEFINED_BELOW:
        raise UndefinedObservableError(
            f"radiance witness undefined: single-qubit reference emission {denom:.3e} vanishes"
        )
    return (two_qubit - denom) / denom


def radiance_witness(params: SystemParams, config: HilbertConfig | None = None) -> float:
    """Excess two-qubit emission over the sum of the single-qubit references.

    ``R > 1`` is hyperradiance, ``R < 0`` subradiance.
    """
    n_cav = (config or HilbertConfig()).n_cav
    means = [
        solve_point(params, variant, n_cav)[1].mean_photon
        for variant in (ModelVariant.TWO_QUBIT, ModelVariant.SINGLE_QUBIT_1, ModelVariant.SINGLE_QUBIT_2)
    ]
    return radiance_from_means(*means)


def _relative_drift(x: float, y: float) -> float:
    if math.isnan(x) and math.isnan(y):
        return 0.0
    if math.isnan(x) or math.isnan(y):
        return math.inf
    if x == y:
        return 0.0
    return abs(x - y) / max(abs(x), abs(y))


def truncation_check(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    base: Observables | None = None,
) -> tuple[bool, float]:
    """Compare ``<a^+a>`` and ``g2(0)`` at ``n_cav`` and ``n_cav + 3``.

    ``base`` may carry already computed observables at ``config.n_cav``.
    """
    config = config or variant.config()
    if base is None:
        base = solve_point(params, variant, config.n_cav)[1]
    bigger = solve_point(params, variant, config.n_cav + 3)[1]
    drift = max(
        _relative_drift(base.mean_photon, bigger.mean_photon),
        _relative_drift(base.g2_zero, bigger.g2_zero),
    )
    return drift < TRUNCATION_DRIFT_TOL, drift
