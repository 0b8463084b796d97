"""Steady-state photon statistics of a driven two-qubit cavity QED system."""

__version__ = "0.1.0"
