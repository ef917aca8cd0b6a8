"""Computations for the generalised Fermat equation over real cyclotomic fields.

Exact arithmetic in Q(zeta_n)^+, cyclotomic units, modularity criteria,
Frey curves, irreducibility bounds and an eigenform elimination sieve.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .cyclotomic import FieldElement, RealCyclotomicField, build_field, norm, split_prime, theta

__all__ = [
    "FieldElement",
    "RealCyclotomicField",
    "__version__",
    "build_field",
    "norm",
    "split_prime",
    "theta",
]
