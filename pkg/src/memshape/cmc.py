"""Piecewise constant-mean-curvature axisymmetric profiles.

With H held constant, the mean-curvature relation
H = -(cos(psi) psi' + sin(psi)/r)/2 integrates once to

    sin(psi) = -H*r + C/r,

the backbone of this module: an inner branch with C = 0 (regular at the
axis, a spherical cap or cup) joins an outer branch (nodoid-like) with slope
continuity at an inflection circle, producing the classic two-branch cell
profile.  The two branch curvatures are kappa0 +/- amplitude, so the bending
energy density (2H - c0)^2 is piecewise constant and equals 4*amplitude^2
when c0 = 2*kappa0.

Heights are integrated through dz/dr = -tan(psi), which points the caps of a
negative-curvature family upward; curvature checks always evaluate the
branch's own psi(r), so they are independent of that orientation choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

from scipy.integrate import quad

from .errors import InfeasibleJunction, OpenProfile, OutOfRange, QuadratureFailure
from .residuals import MembraneParams
from .energy import EnergyBreakdown

_RIM_TOL = 1e-12


def _stable_quadratic_roots(a: float, b: float, c: float):
    """Real roots of a x^2 + b x + c, stable against cancellation; None if complex."""
    if a == 0.0:
        if b == 0.0:
            return None
        return (-c / b, -c / b)
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return None
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else 0.5 * sq
    if q == 0.0:
        return (0.0, 0.0)
    return (q / a, c / q)


def _eval_factored(a: float, b: float, c: float, roots, r: float) -> float:
    """a r^2 + b r + c, through the roots when they are real (cancellation-free)."""
    if roots is None:
        return (a * r + b) * r + c
    r1, r2 = roots
    if a == 0.0:
        return b * (r - r1)
    return a * (r - r1) * (r - r2)


@dataclass(frozen=True)
class CMCBranch:
    """One constant-H branch: sin(psi) = -h_const*r + c_int/r on r_range.

    cos^2(psi) factors exactly as (h r^2 + r - c)(-h r^2 + r + c)/r^2, which
    is how it is evaluated: near a vertical tangent the direct 1 - sin^2
    cancels catastrophically, the factored form does not.
    """

    h_const: float
    c_int: float
    r_range: Tuple[float, float]

    def _factor_data(self):
        h, c = self.h_const, self.c_int
        plus = (h, 1.0, -c)  # roots where sin(psi) = +1
        minus = (-h, 1.0, c)  # roots where sin(psi) = -1
        return (
            (*plus, _stable_quadratic_roots(*plus)),
            (*minus, _stable_quadratic_roots(*minus)),
        )

    def sin_psi(self, r: float) -> float:
        if self.c_int == 0.0:
            f = -self.h_const * r
        else:
            f = -self.h_const * r + self.c_int / r
        if abs(f) > 1.0 + 1e-12:
            raise OutOfRange(
                f"|sin(psi)| = {abs(f)} > 1 at r={r} on branch H={self.h_const}"
            )
        return min(1.0, max(-1.0, f))

    def cos_sq_psi(self, r: float) -> float:
        (ap, bp, cp, rp), (am, bm, cm, rm) = self._factor_data()
        val = _eval_factored(ap, bp, cp, rp, r) * _eval_factored(am, bm, cm, rm, r)
        return max(val / (r * r), 0.0)

    def psi(self, r: float) -> float:
        return math.asin(self.sin_psi(r))

    def dpsi_dr(self, r: float) -> float:
        cos_psi = math.sqrt(self.cos_sq_psi(r))
        if cos_psi == 0.0:
            raise OutOfRange(f"vertical tangent at r={r}; dpsi/dr diverges")
        fprime = -self.h_const - self.c_int / (r * r)
        return fprime / cos_psi

    def mean_curvature_check(self, r: float) -> float:
        """Evaluate H = -(cos(psi) psi' + sin(psi)/r)/2; equals h_const."""
        f = self.sin_psi(r)
        fprime = -self.h_const - self.c_int / (r * r)
        return -0.5 * (fprime + f / r)

    def tan_psi(self, r: float) -> float:
        cos_psi = math.sqrt(self.cos_sq_psi(r))
        if cos_psi == 0.0:
            raise OutOfRange(f"vertical tangent at r={r}")
        return self.sin_psi(r) / cos_psi

    def sec_psi(self, r: float) -> float:
        cos_psi = math.sqrt(self.cos_sq_psi(r))
        if cos_psi == 0.0:
            raise OutOfRange(f"vertical tangent at r={r}")
        return 1.0 / cos_psi

    def rim_factor(self, rim: float):
        """Split cos^2(psi) = (rim - r) * A(r) around a vertical tangent.

        Returns the smooth positive factor A; tau-substituted integrands then
        divide by sqrt(A) instead of cos(psi), cancelling the rim square root
        analytically."""
        for a, b, c, roots in self._factor_data():
            if roots is None:
                continue
            for own, sibling in (roots, roots[::-1]):
                if abs(own - rim) <= 1e-9 * max(abs(rim), 1.0):
                    other_quad = [
                        (a2, b2, c2, r2)
                        for a2, b2, c2, r2 in self._factor_data()
                        if (a2, b2, c2) != (a, b, c)
                    ][0]

                    def factor(r: float, a=a, b=b, sibling=sibling, other=other_quad):
                        if a == 0.0:
                            lead = -b  # linear case: p = b (r - rim)
                        else:
                            lead = -a * (r - sibling)
                        val = lead * _eval_factored(*other, r) / (r * r)
                        return max(val, 0.0)

                    return factor
        raise ArithmeticError(f"r = {rim} is not a vertical tangent of this branch")


def branch_psi(branch: CMCBranch, r: float) -> float:
    """Tangent angle on a branch (principal arcsin branch)."""
    lo, hi = branch.r_range
    if not (lo <= r <= hi):
        raise OutOfRange(f"r={r} outside branch range [{lo}, {hi}]")
    return branch.psi(r)


def _rim_radius(h: float, c: float, start: float) -> Optional[float]:
    """Smallest r > start with |sin(psi)| = 1 on the branch (h, c).

    -h r + c/r = q  <=>  h r^2 + q r - c = 0 for q = +/-1; exact quadratic
    roots, verified to 1e-12."""
    candidates = []
    for q in (1.0, -1.0):
        if h == 0.0:
            if q * c > 0:
                candidates.append(q * c)
            continue
        disc = q * q + 4.0 * h * c
        if disc < 0:
            continue
        sq = math.sqrt(disc)
        for root in ((-q + sq) / (2.0 * h), (-q - sq) / (2.0 * h)):
            if root > start + _RIM_TOL:
                candidates.append(root)
    if not candidates:
        return None
    rim = min(candidates)
    f = -h * rim + c / rim
    if abs(abs(f) - 1.0) > 1e-10:
        raise ArithmeticError(f"rim solve failed: |sin psi| = {abs(f)} at r = {rim}")
    return rim


class CompositeProfile:
    """Inner cap/cup plus outer nodoid-like branch, C^1 at the junction.

    The half profile z(r) is anchored at the closing rim (z = 0 there) when
    the outer branch reaches a vertical tangent; the full surface is the
    union of the half profile and its equatorial mirror image.
    """

    def __init__(
        self,
        inner: CMCBranch,
        outer: CMCBranch,
        r_inflection: float,
        r_rim: Optional[float],
    ):
        self.inner = inner
        self.outer = outer
        self.r_inflection = r_inflection
        self.r_rim = r_rim
        self._z_junction: Optional[float] = None
        self._rim_factor_fn = None

    @property
    def closes(self) -> bool:
        return self.r_rim is not None

    def branch_at(self, r: float) -> CMCBranch:
        return self.inner if r <= self.r_inflection else self.outer

    def _rim_factor(self):
        if self._rim_factor_fn is None:
            self._rim_factor_fn = self.outer.rim_factor(self.r_rim)
        return self._rim_factor_fn

    def _z_outer(self, r: float) -> float:
        """z on the outer branch, rim-anchored: z(r) = int_r^rim tan(psi).

        Under rho = rim - tau^2 with cos^2 = (rim - rho) A(rho) the integrand
        2 tau tan(psi) becomes 2 sin(psi)/sqrt(A), smooth up to the rim."""
        if self.r_rim is None:
            raise OpenProfile("outer branch never reaches a vertical tangent")
        rim = self.r_rim
        span = rim - r
        if span <= 0.0:
            return 0.0
        A = self._rim_factor()

        def integrand(tau: float) -> float:
            rho = rim - tau * tau
            return 2.0 * self.outer.sin_psi(rho) / math.sqrt(A(rho))

        val, err = quad(
            integrand,
            0.0,
            math.sqrt(span),
            epsabs=1e-13,
            epsrel=1e-11,
            limit=200,
        )
        if err > max(1e-10, 1e-8 * abs(val)):
            raise QuadratureFailure(f"height integral error {err:.2e} at r={r}")
        return val

    def _z_at_junction(self) -> float:
        if self._z_junction is None:
            self._z_junction = self._z_outer(self.r_inflection)
        return self._z_junction

    def z_upper(self, r: float) -> float:
        """Half-profile height; z = 0 at the rim, continuous at the junction."""
        if r > self.r_inflection:
            return self._z_outer(r)
        z_j = self._z_at_junction()
        if r == self.r_inflection:
            return z_j
        val, err = quad(
            lambda rho: self.inner.tan_psi(rho),
            r,
            self.r_inflection,
            epsabs=1e-13,
            epsrel=1e-11,
            limit=200,
        )
        if err > max(1e-10, 1e-8 * abs(val)):
            raise QuadratureFailure(f"height integral error {err:.2e} at r={r}")
        return z_j + val

    def export_rows(self, n_inner: int = 40, n_outer: int = 40) -> List[dict]:
        """Profile samples (r, z_upper, z_lower, branch_id, psi, H).

        The junction radius appears once per branch id so slope continuity is
        visible in the output."""
        if self.r_rim is None:
            raise OpenProfile("cannot export an open profile without truncation")
        rows = []
        r_j = self.r_inflection
        for i in range(n_inner):
            r = r_j * (i + 1) / n_inner
            rows.append(self._row(r, self.inner, "inner"))
        for i in range(n_outer):
            r = r_j + (self.r_rim * (1.0 - 1e-9) - r_j) * i / (n_outer - 1)
            rows.append(self._row(r, self.outer, "outer"))
        return rows

    def _row(self, r: float, branch: CMCBranch, branch_id: str) -> dict:
        z = self.z_upper(r)
        return {
            "r": r,
            "z_upper": z,
            "z_lower": -z,
            "branch_id": branch_id,
            "psi": branch.psi(r),
            "H": branch.h_const,
        }


def build_composite(
    kappa0: float,
    a: float,
    r_inflection: float,
    inner_sign: int = +1,
) -> CompositeProfile:
    """Join the two constant-H branches H = kappa0 +/- a with C^1 contact.

    The inner branch (regular at the axis, C = 0) takes H = kappa0 +
    inner_sign*a; the outer takes the other sign, with its first-integral
    constant C = (H_out - H_in) * r_inflection^2 chosen so sin(psi) is
    continuous at the junction.  Curvature (psi') jumps there by design.
    """
    if r_inflection <= 0:
        raise ValueError(f"r_inflection must be positive, got {r_inflection}")
    if inner_sign not in (+1, -1):
        raise ValueError("inner_sign must be +1 or -1")
    h_in = kappa0 + inner_sign * a
    h_out = kappa0 - inner_sign * a
    sin_j = -h_in * r_inflection
    if abs(sin_j) > 1.0:
        raise InfeasibleJunction(
            f"|sin(psi)| = {abs(sin_j)} > 1 at the junction r = {r_inflection}"
        )
    c_out = (h_out - h_in) * r_inflection**2
    rim = _rim_radius(h_out, c_out, r_inflection)
    inner = CMCBranch(h_const=h_in, c_int=0.0, r_range=(0.0, r_inflection))
    outer = CMCBranch(
        h_const=h_out,
        c_int=c_out,
        r_range=(r_inflection, rim if rim is not None else math.inf),
    )
    return CompositeProfile(inner, outer, r_inflection, rim)


def _quad_checked(f, a, b, label: str):
    val, err = quad(f, a, b, epsabs=1e-12, epsrel=1e-11, limit=200)
    if err > max(1e-9, 1e-7 * abs(val)):
        raise QuadratureFailure(f"{label}: error estimate {err:.2e}")
    return val, err


def composite_metrics(
    profile: CompositeProfile,
    params: Optional[MembraneParams] = None,
    truncation: Optional[float] = None,
) -> EnergyBreakdown:
    """Area, volume and bending energy of the closed composite surface.

    Area integrates 2*pi*r*sec(psi) per branch (mirror-doubled); volume uses
    the parts identity int 4 pi r z dr = int 2 pi r^2 tan(psi) dr, valid
    because z vanishes at the rim; both rim integrals are desingularized
    through cos^2 = (rim - r) A(r).  Bending uses the piecewise-constant
    branch curvatures: beta * sum_b (2 H_b - c0)^2 * area_b.  Raises
    :class:`OpenProfile` when the outer branch does not close and no
    truncation radius is supplied.
    """
    if params is None:
        params = MembraneParams()
    rim = profile.r_rim
    if rim is None:
        if truncation is None:
            raise OpenProfile(
                "composite does not close; supply a truncation radius for metrics"
            )
        rim = truncation
        profile = CompositeProfile(
            profile.inner, profile.outer, profile.r_inflection, rim
        )

    r_j = profile.r_inflection
    inner, outer = profile.inner, profile.outer
    A = outer.rim_factor(rim)
    tau_max = math.sqrt(rim - r_j)

    area_inner_half, err_ai = _quad_checked(
        lambda r: 2.0 * math.pi * r * inner.sec_psi(r), 0.0, r_j, "inner area"
    )

    def outer_area_integrand(tau: float) -> float:
        rho = rim - tau * tau
        return 2.0 * (2.0 * math.pi * rho) / math.sqrt(A(rho))

    area_outer_half, err_ao = _quad_checked(
        outer_area_integrand, 0.0, tau_max, "outer area"
    )
    area_inner = 2.0 * area_inner_half
    area_outer = 2.0 * area_outer_half
    area = area_inner + area_outer

    vol_inner, err_vi = _quad_checked(
        lambda r: 2.0 * math.pi * r * r * inner.tan_psi(r), 0.0, r_j, "inner volume"
    )

    def outer_volume_integrand(tau: float) -> float:
        rho = rim - tau * tau
        return 2.0 * (2.0 * math.pi * rho * rho) * outer.sin_psi(rho) / math.sqrt(A(rho))

    vol_outer, err_vo = _quad_checked(
        outer_volume_integrand, 0.0, tau_max, "outer volume"
    )
    volume = vol_inner + vol_outer

    beta, c0 = params.beta, params.c0
    bending = beta * (
        (2.0 * inner.h_const - c0) ** 2 * area_inner
        + (2.0 * outer.h_const - c0) ** 2 * area_outer
    )
    total = bending + beta * params.lambda_bar * area + beta * params.p_bar * volume
    err_area = 2.0 * (err_ai + err_ao)
    return EnergyBreakdown(
        bending=bending,
        area=area,
        volume=volume,
        total=total,
        quad_error={
            "area": err_area,
            "volume": err_vi + err_vo,
            "bending": abs(beta) * max(
                (2.0 * inner.h_const - c0) ** 2, (2.0 * outer.h_const - c0) ** 2
            ) * err_area,
            "total": 1e-10 * max(abs(total), 1.0),
        },
    )
