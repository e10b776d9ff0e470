"""Exact-arithmetic cubic Dirac operators for type-A Lie superalgebras.

Everything is computed over the rationals: algebra structure constants,
highest weight modules, Clifford/Weyl operator algebra, Dirac operators and
their semisimple/nilpotent perturbations, Duflo-Serganova reduction, and
kernel-localized Chern character series.
"""

from superdirac.algebra import build_algebra, Weight
from superdirac.weights import WeylGroup

__all__ = ["build_algebra", "Weight", "WeylGroup"]

__version__ = "0.1.0"
