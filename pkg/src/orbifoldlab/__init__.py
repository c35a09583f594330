"""Exact arithmetic for cyclic orbifolds of lattice vertex algebras."""

from .cyclo import CyclotomicNumber, root_of_unity, unit_phase
from .qseries import PuiseuxSeries

__version__ = "0.1.0"

__all__ = [
    "CyclotomicNumber",
    "PuiseuxSeries",
    "root_of_unity",
    "unit_phase",
    "__version__",
]
