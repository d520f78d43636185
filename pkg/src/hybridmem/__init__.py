"""Flux-qubit / NV-ensemble quantum memory simulator."""

__version__ = "0.1.0"
