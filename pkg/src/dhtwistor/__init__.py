"""Rank-one Deligne-Hitchin twistor spaces of logarithmic connections,
computed explicitly: circular coordinates, the twistor line, the weight-two
Tate structure T(1, log), the model over P^1 - {0, oo}, lattice bookkeeping
for general (X, D), and the harmonic-bundle dictionary."""

from . import circle, harmonic, lattice, moduli, sphere, tate

__version__ = "0.1.0"

__all__ = ["circle", "harmonic", "lattice", "moduli", "sphere", "tate"]
