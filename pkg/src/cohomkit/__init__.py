"""Exact cohomology of nilmanifold and solvmanifold models.

Left-invariant forms on a Lie group reduce cohomology to finite linear
algebra over the rationals.  This package computes Bott-Chern, Aeppli,
Dolbeault and de Rham numbers of complex models, the symplectic cohomologies
of symplectic models, and checks the relations between them.
"""

__version__ = "0.1.0"
