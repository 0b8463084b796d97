"""Dense operator primitives on the composite qubit(s) x cavity space.

Basis convention, used everywhere in the package: subsystems are ordered
``(qubit 1, qubit 2, cavity)`` (``(qubit, cavity)`` when only one qubit is
present), each qubit in the basis ``(g, e)`` and the cavity in the Fock basis
``0 .. n_cav - 1``. Composite indices are lexicographic in that order, i.e. the
cavity index runs fastest.

Operators are plain ``complex128`` numpy arrays. Everything returned from
this module is read-only so that cached operators can be shared freely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import DimensionError

QUBIT_LABELS = ("g", "e")


@dataclass(frozen=True)
class HilbertConfig:
    """Subsystem layout and cavity truncation."""

    n_cav: int = 5
    qubit_count: int = 2

    def __post_init__(self):
        if self.qubit_count not in (1, 2):
            raise DimensionError(f"qubit_count must be 1 or 2, got {self.qubit_count}")
        if self.n_cav < 3:
            raise DimensionError(
                f"n_cav={self.n_cav} too small: Fock states 0, 1, 2 are required"
            )

    @property
    def dims(self) -> tuple[int, ...]:
        return (2,) * self.qubit_count + (self.n_cav,)

    @property
    def dim(self) -> int:
        return 2**self.qubit_count * self.n_cav

    @property
    def cavity_slot(self) -> int:
        return self.qubit_count

    def with_ncav(self, n_cav: int) -> HilbertConfig:
        return HilbertConfig(n_cav=n_cav, qubit_count=self.qubit_count)


def _frozen(m: np.ndarray) -> np.ndarray:
    m.flags.writeable = False
    return m


def annihilation(n_cav: int) -> np.ndarray:
    """Truncated bosonic lowering operator with ``sqrt(n)`` on the superdiagonal."""
    if n_cav < 2:
        raise DimensionError(f"annihilation operator needs n_cav >= 2, got {n_cav}")
    return _frozen(np.diag(np.sqrt(np.arange(1, n_cav, dtype=float)), 1).astype(complex))


def sigma_minus() -> np.ndarray:
    """Qubit lowering operator ``|g><e|`` in the ``(g, e)`` basis."""
    return _frozen(np.array([[0, 1], [0, 0]], dtype=complex))


def dag(op: np.ndarray) -> np.ndarray:
    return op.conj().T


def embed(op: np.ndarray, slot: int, config: HilbertConfig) -> np.ndarray:
    """Return ``I x ... x op x ... x I`` acting on subsystem ``slot``."""
    dims = config.dims
    if not 0 <= slot < len(dims):
        raise DimensionError(f"slot {slot} out of range for {len(dims)} subsystems")
    op = np.asarray(op, dtype=complex)
    if op.shape != (dims[slot], dims[slot]):
        raise DimensionError(
            f"operator of shape {op.shape} does not fit slot {slot} of dimension {dims[slot]}"
        )
    out = np.ones((1, 1), dtype=complex)
    for k, d in enumerate(dims):
        out = np.kron(out, op if k == slot else np.eye(d, dtype=complex))
    return _frozen(out)


@lru_cache(maxsize=None)
def ladder_operators(config: HilbertConfig) -> tuple[np.ndarray, tuple[np.ndarray, ...]]:
    """Cavity ``a`` and the qubit lowering operators, embedded in the full space."""
    a = embed(annihilation(config.n_cav), config.cavity_slot, config)
    sms = tuple(embed(sigma_minus(), j, config) for j in range(config.qubit_count))
    return a, sms


def basis_labels(config: HilbertConfig) -> list[tuple]:
    """Labels such as ``('e', 'g', 0)`` for every composite index, in index order."""
    factors = [QUBIT_LABELS] * config.qubit_count + [range(config.n_cav)]
    return list(product(*factors))


def basis_index(label: tuple, config: HilbertConfig) -> int:
    """Composite index of a label like ``('e', 'g', 1)``."""
    if len(label) != config.qubit_count + 1:
        raise DimensionError(f"label {label!r} does not match {config}")
    *qubits, n = label
    if not 0 <= n < config.n_cav:
        raise DimensionError(f"Fock index {n} outside truncation {config.n_cav}")
    idx = 0
    for q in qubits:
        idx = idx * 2 + QUBIT_LABELS.index(q)
    return idx * config.n_cav + n


def basis_state(label: tuple, config: HilbertConfig) -> np.ndarray:
    v = np.zeros(config.dim, dtype=complex)
    v[basis_index(label, config)] = 1.0
    return v
