"""Exact big-rational algebra over the radical tower of the Cassini family.

Submodules
----------
mpoly
    Sparse multivariate polynomials and polynomial fractions over Q in the
    variables (r, eps, c0, P, L), graded-lexicographic term order.
radext
    The quadratic-radical extension ring generated by
    s = sqrt(1 + 4*eps^2*r^2), t = sqrt(s - eps^2 - r^2), w = sqrt(s - eps^2),
    with exact differentiation in r.
theorem
    Symbolic construction of the Cassini shape-equation residual, radical
    clearing into four polynomial components, comparison against the shipped
    reference transcription, and the exact contradiction argument showing no
    oval with positive biconcavity is an equilibrium.
"""

from .mpoly import MPoly, PolyFrac
from .radext import RadExpr, differentiate
from .theorem import (
    build_residual_symbolic,
    build_u_symbolic,
    cassini_u3_callback,
    clear_radicals,
    close_degenerate_branches,
    compare_to_reference,
    solve_h3_system,
    verify_theorem_symbolic,
)

__all__ = [
    "MPoly",
    "PolyFrac",
    "RadExpr",
    "differentiate",
    "build_u_symbolic",
    "build_residual_symbolic",
    "clear_radicals",
    "compare_to_reference",
    "solve_h3_system",
    "close_degenerate_branches",
    "verify_theorem_symbolic",
    "cassini_u3_callback",
]
