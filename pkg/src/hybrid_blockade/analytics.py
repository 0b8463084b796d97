"""Closed-form and weak-drive results for the two-qubit cavity.

* dressed-state energies of the one- and two-excitation manifolds, from their
  characteristic polynomials (companion-matrix roots);
* resonance branches of the drive detuning;
* the weak-drive amplitude equations truncated at two excitations;
* the lossless closed form of the two-photon amplitude for ``g1 == g2`` and
  its interference zeros at ``delta = 2, 3, 4 x Delta``;
* the hybrid-blockade trajectories as a function of ``K = g2 / g1``.

Energies ``eps`` are measured from ``j * omega_0`` in the ``j``-excitation
manifold, in units of ``kappa``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import companion

from .errors import DomainError, NumericalError, ParameterError, PoleError, UndefinedObservableError
from .model import SystemParams

REALNESS_TOL = 1e-9
WEAK_DRIVE_WARN = 0.05
SQRT2 = math.sqrt(2.0)


# -- polynomial roots -----------------------------------------------------------

def single_excitation_poly(delta: float, g1: float, g2: float) -> np.ndarray:
    """Coefficients (highest power first) of ``(e - d)(e^2 - g2^2) - g1^2 e``."""
    return np.array([1.0, -delta, -(g1**2 + g2**2), delta * g2**2])


def two_excitation_poly(delta: float, g1: float, g2: float) -> np.ndarray:
    s1, s2 = g1**2, g2**2
    return np.array([
        1.0,
        -2.0 * delta,
        delta**2 - 3.0 * (s1 + s2),
        delta * (3.0 * s1 + 4.0 * s2),
        -2.0 * delta**2 * s2 + 2.0 * (s1 - s2) ** 2,
    ])


def _newton(coeffs: np.ndarray, z: complex, steps: int = 8) -> complex:
    deriv = np.polyder(coeffs)
    best, best_val = z, abs(np.polyval(coeffs, z))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(steps):
            dp = np.polyval(deriv, z)
            if dp == 0:
                break
            z = z - np.polyval(coeffs, z) / dp
            val = abs(np.polyval(coeffs, z))
            if not np.isfinite(val):
                break  # a step off a flat region; keep the best iterate
            if val < best_val:
                best, best_val = z, val
    return best


def real_polynomial_roots(coeffs) -> np.ndarray:
    """All roots of a real polynomial known to have a real spectrum, ascending.

    Roots are eigenvalues of the companion matrix, polished by Newton steps.
    Exact zero roots (vanishing trailing coefficients) are returned exactly.
    Near-double roots, which the eigenvalue solver resolves only to about the
    square root of machine precision, are re-split from the quadratic Taylor
    expansion around the stationary point between them.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if c.size == 0:
        raise ParameterError("zero polynomial has no well-defined roots")
    c = c / c[0]
    n_zero = c.size - np.trim_zeros(c, "b").size
    c = np.trim_zeros(c, "b")
    roots = list(np.linalg.eigvals(companion(c))) if c.size > 1 else []
    roots = [_newton(c, r) for r in roots]

    scale = max([1e-300] + [abs(r) for r in roots])
    roots.sort(key=lambda r: r.real)
    d1, d2 = np.polyder(c), np.polyder(c, 2)
    i = 0
    while i < len(roots) - 1:
        if abs(roots[i] - roots[i + 1]) < 1e-6 * scale:
            # split the pair with the local quadratic around the stationary point
            z = _newton(d1, 0.5 * (roots[i] + roots[i + 1]).real + 0j).real
            curv = np.polyval(d2, z)
            t2 = -2.0 * np.polyval(c, z) / curv if curv != 0 else 0.0
            t = math.sqrt(t2) if t2 > 0 else 0.0
            roots[i], roots[i + 1] = (_newton(c, z - t + 0j), _newton(c, z + t + 0j)) if t else (z + 0j, z + 0j)
            i += 2
        else:
            i += 1

    bad = [r for r in roots if abs(r.imag) >= REALNESS_TOL]
    if bad:
        raise NumericalError(
            f"polynomial with Hermitian origin produced complex roots {bad}; this is a bug"
        )
    return np.sort(np.array([r.real for r in roots] + [0.0] * n_zero))


def relative_residual(coeffs, root: float) -> float:
    """``|p(root)|`` normalised by the magnitude of its largest term."""
    coeffs = np.asarray(coeffs, dtype=float)
    coeffs = coeffs / coeffs[0]
    powers = root ** np.arange(len(coeffs) - 1, -1, -1)
    return abs(np.dot(coeffs, powers)) / max(np.max(np.abs(coeffs * powers)), 1e-300)


@dataclass(frozen=True)
class DressedSpectrum:
    delta: float
    g1: float
    g2: float
    single_excitation: np.ndarray
    two_excitation: np.ndarray

    @property
    def max_residual(self) -> float:
        res = [relative_residual(single_excitation_poly(self.delta, self.g1, self.g2), r)
               for r in self.single_excitation]
        res += [relative_residual(two_excitation_poly(self.delta, self.g1, self.g2), r)
                for r in self.two_excitation]
        return max(res)


def single_excitation_roots(params: SystemParams) -> np.ndarray:
    return real_polynomial_roots(single_excitation_poly(params.delta, params.g1, params.g2))


def two_excitation_roots(params: SystemParams) -> np.ndarray:
    return real_polynomial_roots(two_excitation_poly(params.delta, params.g1, params.g2))


def dressed_spectrum(params: SystemParams) -> DressedSpectrum:
    return DressedSpectrum(
        delta=params.delta,
        g1=params.g1,
        g2=params.g2,
        single_excitation=single_excitation_roots(params),
        two_excitation=two_excitation_roots(params),
    )


def ela_branches(delta: float, params: SystemParams) -> np.ndarray:
    """Drive detunings resonant with the three one-excitation dressed states."""
    return single_excitation_roots(params.replace(delta=delta))


def single_excitation_block(params: SystemParams) -> np.ndarray:
    """Undriven Hamiltonian on ``(|eg0>, |ge0>, |gg1>)``, energies from ``omega_0``."""
    g1, g2 = params.g1, params.g2
    return np.array([[params.delta, 0.0, g1], [0.0, 0.0, g2], [g1, g2, 0.0]])


def dressed_state(eps: float, params: SystemParams) -> np.ndarray:
    """Normalised one-excitation eigenvector at energy ``eps``, basis ``(eg0, ge0, gg1)``."""
    M = single_excitation_block(params) - eps * np.eye(3)
    _, _, vh = np.linalg.svd(M)
    v = vh[-1].conj()
    return v / np.linalg.norm(v)


def cavity_weight(eps: float, params: SystemParams) -> float:
    """Photon component ``|<gg1|psi>|^2`` of the dressed state at ``eps``."""
    return float(abs(dressed_state(eps, params)[2]) ** 2)


# -- weak-drive amplitudes -------------------------------------------------------

AMPLITUDE_LABELS = ("eg0", "ge0", "gg1", "ee0", "eg1", "ge1", "gg2")


@dataclass(frozen=True)
class AmplitudeState:
    """Steady two-excitation amplitudes with ``C_gg0`` fixed to 1."""

    c_eg0: complex
    c_ge0: complex
    c_gg1: complex
    c_ee0: complex
    c_eg1: complex
    c_ge1: complex
    c_gg2: complex

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, "c_" + k) for k in AMPLITUDE_LABELS])


def complex_detunings(params: SystemParams) -> tuple[complex, complex, complex]:
    """``(qubit 1, qubit 2, cavity)`` detunings with their half-widths as imaginary parts."""
    q1 = -(params.Delta - params.delta) - 0.5j * params.gamma
    q2 = -params.Delta - 0.5j * params.gamma
    c = -params.Delta - 0.5j * params.kappa
    return q1, q2, c


def amplitude_matrix(params: SystemParams) -> tuple[np.ndarray, np.ndarray]:
    """Stationarity conditions ``M x = b`` for the amplitudes in ``AMPLITUDE_LABELS`` order."""
    q1, q2, c = complex_detunings(params)
    g1, g2, eta = params.g1, params.g2, params.eta
    s = SQRT2
    M = np.array([
        [q1, 0, g1, eta, 0, 0, 0],
        [0, q2, g2, eta, 0, 0, 0],
        [g1, g2, c, 0, eta, eta, 0],
        [eta, eta, 0, q1 + q2, g2, g1, 0],
        [0, 0, eta, g2, q1 + c, 0, s * g1],
        [0, 0, eta, g1, 0, q2 + c, s * g2],
        [0, 0, 0, 0, s * g1, s * g2, 2 * c],
    ], dtype=complex)
    # the C_gg0 = 1 terms move to the right-hand side
    b = -np.array([eta, eta, 0, 0, 0, 0, 0], dtype=complex)
    return M, b


def nearest_condition(params: SystemParams) -> str:
    """Human-readable name of the analytic condition closest to ``params``."""
    D, d = params.Delta, params.delta
    candidates = {f"QDI line delta={k}*Delta": abs(d - k * D) / max(k, 1) for k in (2, 3, 4)}
    for i, eps in enumerate(single_excitation_roots(params)):
        candidates[f"one-excitation resonance Delta=eps1[{i}]"] = abs(D - eps)
    for i, eps in enumerate(two_excitation_roots(params)):
        candidates[f"two-photon resonance 2*Delta=eps2[{i}]"] = abs(2 * D - eps) / 2
    return min(candidates, key=candidates.get)


def amplitude_steady_state(params: SystemParams) -> AmplitudeState:
    if params.eta > WEAK_DRIVE_WARN * params.kappa:
        warnings.warn(
            f"eta={params.eta} is not small compared with the decay rates; "
            "the two-excitation truncation may be inaccurate",
            stacklevel=2,
        )
    M, b = amplitude_matrix(params)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > 1e13:
        raise NumericalError(
            f"amplitude equations are singular (condition {cond:.2e}) near the "
            f"{nearest_condition(params)}"
        )
    return AmplitudeState(*np.linalg.solve(M, b))


def truncated_g2(state: AmplitudeState) -> float:
    """``2 |C_gg2|^2 / |C_gg1|^4``, valid at weak drive."""
    if abs(state.c_gg1) <= 1e-14:
        raise UndefinedObservableError(
            "C_gg1 vanishes: single-photon excitation is blocked by interference "
            "(the delta = 2*Delta channel), so g2(0) is undefined"
        )
    return 2.0 * abs(state.c_gg2) ** 2 / abs(state.c_gg1) ** 4


# -- closed form for symmetric coupling --------------------------------------------

def pole_factors(Delta: float, delta: float, g: float) -> tuple[float, float]:
    """The two factors of the closed-form denominator.

    The first vanishes on a two-photon resonance ``2 Delta = eps2`` and the
    second on a one-excitation resonance ``Delta = eps1``.
    """
    two_photon = (8 * Delta**4 - 8 * delta * Delta**3 + 2 * delta**2 * Delta**2
                  - 12 * g**2 * Delta**2 + 7 * delta * g**2 * Delta - delta**2 * g**2)
    one_photon = Delta**3 - delta * Delta**2 - 2 * g**2 * Delta + delta * g**2
    return two_photon, one_photon


def analytic_cgg2(params: SystemParams, pole_tol: float = 1e-12) -> float:
    """Lossless closed form of ``C_gg2`` for ``g1 == g2``.

    Exactly zero on the interference lines ``delta = 2, 3, 4 x Delta``.
    """
    if params.g1 != params.g2:
        raise ParameterError(f"closed form requires g1 == g2, got {params.g1} != {params.g2}")
    D, d, g, eta = params.Delta, params.delta, params.g1, params.eta
    numer = -SQRT2 * eta**2 * g**2 * (d - 2 * D) * (d - 3 * D) * (d - 4 * D)
    if numer == 0.0:
        return 0.0
    two_photon, one_photon = pole_factors(D, d, g)
    scale = max(abs(D), abs(d), g)
    if abs(two_photon) <= pole_tol * scale**4:
        raise PoleError("closed form diverges on a two-photon resonance 2*Delta = eps2")
    if abs(one_photon) <= pole_tol * scale**3:
        raise PoleError("closed form diverges on a one-excitation resonance Delta = eps1")
    return numer / (2.0 * two_photon * one_photon)


def condition_distance(params: SystemParams) -> float:
    """Smallest distance (in rate units) from any zero line or resonance of the closed form."""
    D, d = params.Delta, params.delta
    dists = [abs(D), abs(d)] + [abs(d - k * D) for k in (2, 3, 4)]
    dists += [abs(D - e) for e in single_excitation_roots(params)]
    dists += [abs(2 * D - e) for e in two_excitation_roots(params)]
    return min(dists)


def closed_form_valid(params: SystemParams, margin: float = 10.0) -> bool:
    """Whether the lossless closed form should track the lossy amplitudes.

    Requires every detuning combination entering the closed form to exceed
    ``margin`` linewidths; being 10 linewidths from ``Delta = 0`` alone is
    not enough near the zero lines and poles.
    """
    return condition_distance(params) >= margin * max(params.kappa, params.gamma)


# -- hybrid-blockade trajectories ---------------------------------------------------

class Branch(enum.Enum):
    PRIMARY = "primary"
    SECONDARY = "secondary"


def hpb_trajectory(K: float, branch: Branch | str) -> tuple[float, float]:
    """``(Delta / g1, delta / g1)`` of the hybrid-blockade point at ``K = g2 / g1``.

    The primary series sits where ``delta = Delta (1 + 1/K)^2``, the secondary
    on the ``delta = 3 Delta`` interference line.
    """
    branch = Branch(branch)
    if not K > 0:
        raise DomainError(f"K must be positive, got {K}")
    if branch is Branch.PRIMARY:
        x = math.sqrt(2 * K**3 / (2 * K + 1))
        return x, x * (1 + 1 / K) ** 2
    if K**2 <= 0.5:
        raise DomainError(f"secondary branch needs K > 1/sqrt(2), got K={K}")
    x = math.sqrt(K**2 - 0.5)
    return x, 3 * x


def hpb_params(K: float, branch: Branch | str, base: SystemParams) -> SystemParams:
    """Physical parameters of the trajectory point, keeping ``g1``, ``eta`` and ``gamma`` of ``base``."""
    x, y = hpb_trajectory(K, branch)
    return base.replace(g2=K * base.g1, Delta=x * base.g1, delta=y * base.g1)
