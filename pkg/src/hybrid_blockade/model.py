"""Rotating-frame Hamiltonian and dissipators of the driven two-qubit cavity.

All rates and detunings are expressed in units of the cavity decay rate
``kappa`` (which is therefore 1 by default).
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ParameterError
from .operators import HilbertConfig, dag, ladder_operators


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven system, in units of ``kappa``.

    ``delta`` is the qubit-qubit detuning (qubit 1 minus qubit 2) and
    ``Delta`` the drive detuning from the common cavity / qubit-2 frequency.
    """

    g1: float = 10.0
    g2: float = 10.0
    delta: float = 0.0
    Delta: float = 0.0
    eta: float = 0.1
    kappa: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            value = getattr(self, f.name)
            if not math.isfinite(value):
                raise ParameterError(f"{f.name} must be finite, got {value}")
        if self.kappa <= 0:
            raise ParameterError(f"kappa must be positive, got {self.kappa}")
        for name in ("gamma", "g1", "g2", "eta"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be non-negative, got {getattr(self, name)}")

    def replace(self, **changes) -> SystemParams:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)

    @property
    def K(self) -> float:
        """Coupling ratio ``g2 / g1``."""
        return self.g2 / self.g1 if self.g1 else math.inf


class ModelVariant(enum.Enum):
    TWO_QUBIT = "two_qubit"
    SINGLE_QUBIT_1 = "single_qubit_1"
    SINGLE_QUBIT_2 = "single_qubit_2"

    @property
    def qubit_count(self) -> int:
        return 2 if self is ModelVariant.TWO_QUBIT else 1

    def qubits(self) -> tuple[int, ...]:
        """Physical qubit numbers (1 and/or 2) present in this variant."""
        return {
            ModelVariant.TWO_QUBIT: (1, 2),
            ModelVariant.SINGLE_QUBIT_1: (1,),
            ModelVariant.SINGLE_QUBIT_2: (2,),
        }[self]

    def config(self, n_cav: int = 5) -> HilbertConfig:
        return HilbertConfig(n_cav=n_cav, qubit_count=self.qubit_count)


def _check_config(variant: ModelVariant, config: HilbertConfig) -> None:
    if config.qubit_count != variant.qubit_count:
        raise DimensionError(
            f"{variant.name} needs qubit_count={variant.qubit_count}, config has {config.qubit_count}"
        )


def _qubit_terms(params: SystemParams) -> dict[int, tuple[float, float]]:
    # physical qubit -> (rotating-frame detuning, cavity coupling)
    return {1: (params.delta - params.Delta, params.g1), 2: (-params.Delta, params.g2)}


def build_hamiltonian(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    drive_phase: float = 0.0,
) -> np.ndarray:
    """Hamiltonian in the frame rotating at the drive frequency (hbar = 1).

    The drive acts on the qubits only. ``drive_phase`` rotates the drive
    amplitude to ``eta * exp(i phi)``; photon statistics must not depend on it.
    """
    config = config or variant.config()
    _check_config(variant, config)
    a, sms = ladder_operators(config)
    ad = dag(a)
    H = -params.Delta * (ad @ a)
    drive = params.eta * np.exp(1j * drive_phase)
    terms = _qubit_terms(params)
    for sm, q in zip(sms, variant.qubits()):
        detuning, g = terms[q]
        sp = dag(sm)
        H = H + detuning * (sp @ sm) + g * (sp @ a + sm @ ad) + drive * sp + np.conj(drive) * sm
    return 0.5 * (H + dag(H))


def collapse_operators(
    params: SystemParams,
    variant: ModelVariant = ModelVariant.TWO_QUBIT,
    config: HilbertConfig | None = None,
    gammas: dict[int, float] | None = None,
) -> list[tuple[np.ndarray, float]]:
    """Jump operators with their rates, cavity first.

    Each entry ``(c, rate)`` contributes ``rate * (c rho c^+ - {c^+ c, rho} / 2)``.
    Zero-rate channels are dropped. ``gammas`` overrides the shared qubit decay
    rate per physical qubit.
    """
    config = config or variant.config()
    _check_config(variant, config)
    a, sms = ladder_operators(config)
    rates = {q: params.gamma for q in (1, 2)}
    if gammas:
        rates.update(gammas)
    if any(r < 0 for r in rates.values()):
        raise ParameterError(f"negative decay rate in {rates}")
    ops = [(a, params.kappa)]
    for sm, q in zip(sms, variant.qubits()):
        if rates[q] > 0:
            ops.append((sm, rates[q]))
    return ops


def excitation_number(config: HilbertConfig) -> np.ndarray:
    """Total excitation number ``a^+ a + sum_j sigma_j^+ sigma_j^-``."""
    a, sms = ladder_operators(config)
    N = dag(a) @ a
    for sm in sms:
        N = N + dag(sm) @ sm
    return N
