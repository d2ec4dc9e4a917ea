"""Axisymmetric Helfrich-Canham membrane machinery.

Profile-curve geometry (Cassini ovals, spheres), the shape-equation residual
in three printed forms, exact radical-polynomial verification that no oval
with positive biconcavity is an equilibrium, surface-energy quadrature with
best-fit parameter estimation, and the two-branch constant-mean-curvature
cell model.
"""

__version__ = "0.1.0"

from .errors import (
    DerivativeUnavailable,
    DomainError,
    IdenticallyZero,
    InfeasibleJunction,
    MemshapeError,
    NonpositiveRadius,
    OpenProfile,
    OutOfRange,
    QuadratureFailure,
    ResidueInT,
    SingularAxis,
    VerticalTangent,
)
from .geometry import (
    SIGN_CONVENTION,
    CassiniOval,
    CurvaturePoint,
    ProfileCurve,
    RadialDomain,
    SphereProfile,
    cassini_u,
    cassini_u1_u2,
    cassini_z,
    curvature_point,
    domain_of,
)
from .residuals import (
    MembraneParams,
    ResidualReport,
    residual_psi_form,
    residual_report,
    residual_third_order,
    residual_u_form,
    resolve_sign_convention,
    sphere_el_residual,
    sphere_solve,
    solve_pressure_for_sphere,
)
from .energy import (
    EnergyBreakdown,
    FitResult,
    enclosed_volume,
    energy_sweep,
    fit_parameters,
    fit_sweep,
    helfrich_energy,
    surface_area,
)
from .cmc import CMCBranch, CompositeProfile, branch_psi, build_composite, composite_metrics

__all__ = [
    "__version__",
    "SIGN_CONVENTION",
    "MemshapeError",
    "DomainError",
    "SingularAxis",
    "VerticalTangent",
    "DerivativeUnavailable",
    "NonpositiveRadius",
    "IdenticallyZero",
    "QuadratureFailure",
    "ResidueInT",
    "OutOfRange",
    "InfeasibleJunction",
    "OpenProfile",
    "RadialDomain",
    "CassiniOval",
    "SphereProfile",
    "ProfileCurve",
    "CurvaturePoint",
    "cassini_z",
    "cassini_u",
    "cassini_u1_u2",
    "curvature_point",
    "domain_of",
    "MembraneParams",
    "ResidualReport",
    "residual_u_form",
    "residual_psi_form",
    "residual_third_order",
    "residual_report",
    "resolve_sign_convention",
    "sphere_el_residual",
    "sphere_solve",
    "solve_pressure_for_sphere",
    "EnergyBreakdown",
    "FitResult",
    "surface_area",
    "enclosed_volume",
    "helfrich_energy",
    "fit_parameters",
    "energy_sweep",
    "fit_sweep",
    "CMCBranch",
    "CompositeProfile",
    "branch_psi",
    "build_composite",
    "composite_metrics",
]
