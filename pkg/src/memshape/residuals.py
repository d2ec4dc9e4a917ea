"""Numerical evaluation of the axisymmetric shape equation.

Three printed forms of the residual are implemented independently and never
algebraically reconciled:

* ``u_form``      -- second order in the slope u = dz/dr (the form the exact
                     radical algebra mirrors),
* ``psi_form``    -- second order in the tangent angle psi,
* ``third_order`` -- the full Euler-Lagrange expansion, third order in psi.

All three vanish identically on spheres whose parameters satisfy the
constraint quadratic (see :func:`sphere_el_residual`), which is the main
property test tying them together.

The third-order expression is derived exactly from

    2*Lap(H) + (2H - c0)*(2H^2 - 2K + c0*H) + P - 2*L*H = 0

with the axisymmetric H, K and surface Laplacian; four terms of the commonly
printed variant are corrected here (a missing dpsi/dr factor, the sign of the
c0 cross term, a missing 1/r on the tension term, and sin^2 -> sin^3 in the
r^-3 term) -- the printed variant does not vanish on constrained spheres,
this derivation does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import (
    DomainError,
    DerivativeUnavailable,
    IdenticallyZero,
    NonpositiveRadius,
    VerticalTangent,
)
from .geometry import SIGN_CONVENTION, CassiniOval, ProfileCurve

FORMS = ("u_form", "psi_form", "third_order")

_FORM_ALIASES = {
    "u": "u_form",
    "u_form": "u_form",
    "psi": "psi_form",
    "psi_form": "psi_form",
    "third": "third_order",
    "third_order": "third_order",
}

#: Frozen orientation mapping for the sphere constraints, established by
#: direct Euler-Lagrange substitution:
#:   "I"  <->  H = -1/a  <->  psi = +arcsin(r/a):  P a^2 + (c0^2+2L) a + 2 c0 = 0
#:   "II" <->  H = +1/a  <->  psi = -arcsin(r/a):  P a^2 - (c0^2+2L) a + 2 c0 = 0
ORIENTATIONS = ("I", "II")


def canonical_form(form: str) -> str:
    try:
        return _FORM_ALIASES[form]
    except KeyError:
        raise ValueError(f"unknown residual form {form!r}; use one of {FORMS}") from None


def canonical_orientation(orientation) -> str:
    if orientation in ORIENTATIONS:
        return orientation
    if orientation == +1:
        return "I"
    if orientation == -1:
        return "II"
    raise ValueError(f"orientation must be 'I', 'II', +1 or -1, got {orientation!r}")


@dataclass(frozen=True)
class MembraneParams:
    """Physical parameter bundle: bending rigidity beta, spontaneous curvature
    c0, normalized tension lambda_bar = lambda/beta and normalized pressure
    p_bar = dP/beta."""

    beta: float = 1.0
    c0: float = 0.0
    lambda_bar: float = 0.0
    p_bar: float = 0.0

    def __post_init__(self):
        if not (self.beta > 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")
        for name in ("c0", "lambda_bar", "p_bar"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def to_json(self) -> dict:
        return {
            "beta": self.beta,
            "c0": self.c0,
            "lambda_bar": self.lambda_bar,
            "p_bar": self.p_bar,
        }


def _psi_derivatives(u: float, u1: float, u2: float, sigma: int):
    """(psi, psi', psi'') from the slope and its derivatives."""
    v = 1.0 + u * u
    psi = sigma * math.atan(u)
    dpsi = sigma * u1 / v
    d2psi = sigma * (u2 * v - 2.0 * u * u1 * u1) / (v * v)
    return psi, dpsi, d2psi


def residual_u_form(
    profile: ProfileCurve, params: MembraneParams, r: float
) -> float:
    """Shape-equation residual in the slope variable, term by term:

    -5 u u'^2/(2(1+u^2)^3) + u''/(1+u^2)^2 - u/(2r^2) (1 + 1/(1+u^2))
    + u'/(r (1+u^2)^2) - c0^2 u/2 - c0 u^2/(r sqrt(1+u^2))
    - P r sqrt(1+u^2)/2 - L u
    """
    if not profile.domain.interior(r):
        raise DomainError(f"r={r} outside the open domain")
    u = profile.u(r)
    u1 = profile.u1(r)
    u2 = profile.u2(r)
    v = 1.0 + u * u
    root = math.sqrt(v)
    return (
        -2.5 * u * u1 * u1 / v**3
        + u2 / (v * v)
        - (u / (2.0 * r * r)) * (1.0 + 1.0 / v)
        + u1 / (r * v * v)
        - 0.5 * params.c0**2 * u
        - params.c0 * u * u / (r * root)
        - 0.5 * params.p_bar * r * root
        - params.lambda_bar * u
    )


def residual_psi_form(
    profile: ProfileCurve,
    params: MembraneParams,
    r: float,
    sigma: Optional[int] = None,
) -> float:
    """Shape-equation residual in the tangent angle, term by term:

    cos^2 psi''  - sin cos/2 (psi')^2 - sin/(2 r^2 cos) - sin cos/(2 r^2)
    - c0^2 sin/(2 cos) + cos^2 psi'/r - c0 sin^2/(r cos) - P r/(2 cos)
    - L sin/cos
    """
    sig = SIGN_CONVENTION if sigma is None else sigma
    if not profile.domain.interior(r):
        raise DomainError(f"r={r} outside the open domain")
    psi, dpsi, d2psi = _psi_derivatives(profile.u(r), profile.u1(r), profile.u2(r), sig)
    c = math.cos(psi)
    s = math.sin(psi)
    if abs(c) <= 1e-12:
        raise VerticalTangent(f"cos(psi) = {c} at r={r}")
    return (
        c * c * d2psi
        - 0.5 * s * c * dpsi * dpsi
        - s / (2.0 * r * r * c)
        - s * c / (2.0 * r * r)
        - 0.5 * params.c0**2 * s / c
        + c * c * dpsi / r
        - params.c0 * s * s / (r * c)
        - 0.5 * params.p_bar * r / c
        - params.lambda_bar * s / c
    )


def residual_third_order(
    profile: ProfileCurve,
    params: MembraneParams,
    r: float,
    sigma: Optional[int] = None,
    fd_fallback: bool = True,
) -> float:
    """Full Euler-Lagrange residual, third order in psi.

    Needs u'''; profiles without it fall back to a centered difference of u''
    with step 1e-4 * domain width when ``fd_fallback`` is set, otherwise
    :class:`DerivativeUnavailable` propagates.
    """
    sig = SIGN_CONVENTION if sigma is None else sigma
    if not profile.domain.interior(r):
        raise DomainError(f"r={r} outside the open domain")
    u = profile.u(r)
    u1 = profile.u1(r)
    u2 = profile.u2(r)
    try:
        u3 = profile.u3(r)
    except DerivativeUnavailable:
        if not fd_fallback:
            raise
        h = 1e-4 * profile.domain.width
        lo, hi = r - h, r + h
        if not (profile.domain.interior(lo) and profile.domain.interior(hi)):
            raise DomainError(f"finite-difference stencil leaves the domain at r={r}")
        u3 = (profile.u2(hi) - profile.u2(lo)) / (2.0 * h)

    v = 1.0 + u * u
    psi = sig * math.atan(u)
    dpsi = sig * u1 / v
    d2psi = sig * (u2 * v - 2.0 * u * u1 * u1) / (v * v)
    d3psi = sig * (
        u3 * v * v - 6.0 * u * u1 * u2 * v - 2.0 * u1**3 * v + 8.0 * u * u * u1**3
    ) / (v**3)

    c = math.cos(psi)
    s = math.sin(psi)
    c0 = params.c0
    bracket = (
        0.5 * c0 * c0
        + 2.0 * c0 * s / r
        + s * s / (2.0 * r * r)
        + params.lambda_bar
        - (s * s - c * c) / (r * r)
    )
    return (
        -(c**3) * d3psi
        + 4.0 * s * c * c * dpsi * d2psi
        - (2.0 * c**3 / r) * d2psi
        - c * (s * s - 0.5 * c * c) * dpsi**3
        + (7.0 * s * c * c / (2.0 * r)) * dpsi * dpsi
        + bracket * c * dpsi
        + params.p_bar
        + params.lambda_bar * s / r
        - s**3 / (2.0 * r**3)
        + 0.5 * c0 * c0 * s / r
        - s * c * c / r**3
    )


_FORM_FUNCS = {
    "u_form": residual_u_form,
    "psi_form": residual_psi_form,
    "third_order": residual_third_order,
}


def residual_at(
    profile: ProfileCurve, params: MembraneParams, r: float, form: str
) -> float:
    return _FORM_FUNCS[canonical_form(form)](profile, params, r)


@dataclass
class ResidualReport:
    """Residual values on a grid, with norms and evaluation metadata."""

    form: str
    params: MembraneParams
    grid: List[float]
    residuals: List[float]
    sup_norm: float
    l2_norm: float
    sign_convention: int = SIGN_CONVENTION
    notes: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "form": self.form,
            "params": self.params.to_json(),
            "sup_norm": self.sup_norm,
            "l2_norm": self.l2_norm,
            "sign_convention": self.sign_convention,
            "n_points": len(self.grid),
            **self.notes,
        }


def chebyshev_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Chebyshev-Gauss nodes mapped to [lo, hi], sorted increasing."""
    k = np.arange(n)
    nodes = np.cos((2 * k + 1) * np.pi / (2 * n))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes)


def residual_report(
    profile: ProfileCurve,
    params: MembraneParams,
    form: str = "u_form",
    n_points: int = 64,
    margin: float = 0.05,
) -> ResidualReport:
    """Evaluate one residual form on a Chebyshev grid over the margined domain."""
    form = canonical_form(form)
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    lo, hi = profile.domain.margined(margin)
    grid = chebyshev_grid(lo, hi, n_points)
    func = _FORM_FUNCS[form]
    residuals = np.empty(n_points)
    weights = np.empty(n_points)
    for i, r in enumerate(grid):
        try:
            residuals[i] = func(profile, params, float(r))
        except (DomainError, VerticalTangent) as exc:
            raise type(exc)(f"{exc} (grid point r={r})") from exc
        u = profile.u(float(r))
        weights[i] = 2.0 * math.pi * r * math.sqrt(1.0 + u * u)
    sup = float(np.max(np.abs(residuals)))
    l2 = float(math.sqrt(max(np.trapezoid(weights * residuals**2, grid), 0.0)))
    return ResidualReport(
        form=form,
        params=params,
        grid=[float(r) for r in grid],
        residuals=[float(v) for v in residuals],
        sup_norm=sup,
        l2_norm=l2,
        notes={"margin": margin},
    )


# ---------------------------------------------------------------------------
# spheres
# ---------------------------------------------------------------------------


def sphere_el_residual(a: float, params: MembraneParams, orientation="I") -> float:
    """Euler-Lagrange residual of a sphere of radius a.

    Substitutes H = -1/a (orientation "I") or H = +1/a (orientation "II"),
    K = 1/a^2 and Lap(H) = 0 into the shape equation; equals
    (P a^2 +/- (c0^2 + 2 L) a + 2 c0)/a^2.
    """
    if a <= 0:
        raise NonpositiveRadius(f"sphere radius must be positive, got {a}")
    orient = canonical_orientation(orientation)
    h = -1.0 / a if orient == "I" else 1.0 / a
    K = 1.0 / (a * a)
    c0, lam, p = params.c0, params.lambda_bar, params.p_bar
    return (2.0 * h - c0) * (2.0 * h * h - 2.0 * K + c0 * h) + p - 2.0 * lam * h


def sphere_constraint_coeffs(params: MembraneParams, orientation="I"):
    """(A, B, C) of the constraint A a^2 + B a + C = 0 for sphere radii."""
    orient = canonical_orientation(orientation)
    sign = 1.0 if orient == "I" else -1.0
    return params.p_bar, sign * (params.c0**2 + 2.0 * params.lambda_bar), 2.0 * params.c0


def sphere_solve(params: MembraneParams, orientation="I") -> List[float]:
    """Positive radii solving the sphere constraint for the given orientation.

    Degenerate P = 0 handled as linear; the 0 = 0 case raises
    :class:`IdenticallyZero` because every radius is then admissible.
    """
    A, B, C = sphere_constraint_coeffs(params, orientation)
    if A == 0 and B == 0 and C == 0:
        raise IdenticallyZero("constraint degenerates to 0 = 0; every radius works")
    if A == 0:
        if B == 0:
            return []
        root = -C / B
        return [root] if root > 0 else []
    disc = B * B - 4.0 * A * C
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    roots = sorted({(-B - sq) / (2 * A), (-B + sq) / (2 * A)})
    return [r for r in roots if r > 0]


def solve_pressure_for_sphere(
    a: float, c0: float, lambda_bar: float, orientation="I"
) -> float:
    """P making the sphere of radius a an equilibrium, from the constraint."""
    if a <= 0:
        raise NonpositiveRadius(f"sphere radius must be positive, got {a}")
    orient = canonical_orientation(orientation)
    sign = 1.0 if orient == "I" else -1.0
    return -(sign * (c0 * c0 + 2.0 * lambda_bar) * a + 2.0 * c0) / (a * a)


# ---------------------------------------------------------------------------
# sign-convention harness
# ---------------------------------------------------------------------------

_HARNESS_SAMPLES = (
    (0.3, 0.55, MembraneParams(c0=0.7, lambda_bar=-0.4, p_bar=1.3)),
    (0.6, 0.40, MembraneParams(c0=-1.1, lambda_bar=0.8, p_bar=-0.5)),
    (0.9, 0.75, MembraneParams(c0=0.2, lambda_bar=1.5, p_bar=0.9)),
    (1.1, 0.90, MembraneParams(c0=1.4, lambda_bar=-0.9, p_bar=2.0)),
)


def resolve_sign_convention(samples=_HARNESS_SAMPLES) -> int:
    """Pick the sigma in psi = sigma*atan(u) that makes the psi-form agree
    with the u-form on the Cassini family; ties are impossible in practice.

    The selected value must equal :data:`memshape.geometry.SIGN_CONVENTION`
    (asserted by the test suite) and is echoed into all output metadata.
    """
    scores = {}
    for sigma in (+1, -1):
        worst = 0.0
        for eps, r, params in samples:
            profile = CassiniOval(eps)
            if not profile.domain.interior(r):
                continue
            ref = residual_u_form(profile, params, r)
            got = residual_psi_form(profile, params, r, sigma=sigma)
            worst = max(worst, abs(got - ref) / (1.0 + abs(ref)))
        scores[sigma] = worst
    return min(scores, key=scores.get)
