"""Axisymmetric profile curves and their pointwise curvature quantities.

A profile curve is the graph z(r) of the upper half of an axisymmetric
surface; rotating it about the z axis generates the surface.  Everything
here is parametrized by the radial coordinate r, never by arclength.

Sign convention
---------------
The tangent angle is computed from the slope u = dz/dr as

    psi = SIGN_CONVENTION * atan(u)

The module default ``SIGN_CONVENTION = +1`` is the value selected by the
cross-consistency harness in :mod:`memshape.residuals` (the choice that
makes the psi-form and the u-form of the shape-equation residual agree
identically on the Cassini family).  Under it the upper branch of the
unit circle carries H = +1, K = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, DerivativeUnavailable, SingularAxis

#: Resolved sign sigma in psi = sigma * atan(dz/dr).  See module docstring.
SIGN_CONVENTION = 1

_AXIS_EPS = 1e-300


@dataclass(frozen=True)
class RadialDomain:
    """Open radial interval of definition, (r_min, r_max).

    ``closed_at_min`` marks the axis endpoint r = 0 of the flattened family
    (epsilon < 1), where z and its derivatives are regular even though
    curvature quantities with 1/r factors need their analytic limits.
    """

    r_min: float
    r_max: float
    closed_at_min: bool = False

    @property
    def width(self) -> float:
        return self.r_max - self.r_min

    def contains(self, r: float) -> bool:
        if self.closed_at_min:
            return self.r_min <= r < self.r_max
        return self.r_min < r < self.r_max

    def interior(self, r: float) -> bool:
        return self.r_min < r < self.r_max

    def margined(self, margin: float) -> tuple[float, float]:
        """Sub-interval shrunk by ``margin`` (fraction of the width) per end."""
        if not 0.0 < margin < 0.5:
            raise ValueError(f"margin must lie in (0, 0.5), got {margin}")
        w = self.width
        return self.r_min + margin * w, self.r_max - margin * w


def domain_of(epsilon: float) -> RadialDomain:
    """Radial domain of the Cassini profile with the given biconcavity.

    (0, sqrt(1+eps^2)) while the curve crosses the axis (eps < 1); once the
    oval splits (eps >= 1) the inner endpoint moves to sqrt(eps^2 - 1).
    The axis endpoint is closed for z/u evaluation but curvatures at r = 0
    are served only through their analytic limits.
    """
    if epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    r_max = math.sqrt(1.0 + epsilon * epsilon)
    if epsilon < 1.0:
        return RadialDomain(0.0, r_max, closed_at_min=True)
    return RadialDomain(math.sqrt(epsilon * epsilon - 1.0), r_max, closed_at_min=False)


def _st(r: float, epsilon: float) -> tuple[float, float]:
    """Inner radical s = sqrt(1+4*eps^2*r^2) and outer radical t = sqrt(s-eps^2-r^2).

    Raises DomainError when the outer argument is not strictly positive,
    which is exactly the interior of the domain of definition.
    """
    a = epsilon * epsilon
    s = math.sqrt(1.0 + 4.0 * a * r * r)
    arg = s - a - r * r
    if arg <= 0.0:
        raise DomainError(
            f"outer square-root argument {arg} is not positive at r={r}, epsilon={epsilon}"
        )
    return s, math.sqrt(arg)


def cassini_z(r: float, epsilon: float, branch: int = +1) -> float:
    """Height of the Cassini profile, branch * sqrt(sqrt(4*eps^2*r^2+1) - eps^2 - r^2)."""
    if branch not in (+1, -1):
        raise ValueError("branch must be +1 (upper) or -1 (lower)")
    dom = domain_of(epsilon)
    if not dom.contains(r):
        raise DomainError(f"r={r} outside the radial domain ({dom.r_min}, {dom.r_max})")
    _, t = _st(r, epsilon)
    return branch * t


def cassini_u(r: float, epsilon: float) -> float:
    """Upper-branch slope u = dz/dr = r*(2*eps^2 - s)/(s*t)."""
    dom = domain_of(epsilon)
    if not dom.contains(r):
        raise DomainError(f"r={r} outside the radial domain ({dom.r_min}, {dom.r_max})")
    a = epsilon * epsilon
    s, t = _st(r, epsilon)
    return r * (2.0 * a - s) / (s * t)


# Closed forms for u' and u'' on the upper branch.  Terms are
# coeff(a) * r^k * (2a - s)^m * s^-p * t^-q with a = eps^2; each table is the
# derivative of the previous one under  s' = 4ar/s,  t' = u.
_U1_TERMS = (
    (0, 1, 1, 1, lambda a: 1.0),
    (2, 0, 2, 1, lambda a: -4.0 * a),
    (2, 1, 3, 1, lambda a: -4.0 * a),
    (2, 2, 2, 3, lambda a: -1.0),
)

_U2_TERMS = (
    (1, 0, 2, 1, lambda a: -12.0 * a),
    (1, 1, 3, 1, lambda a: -12.0 * a),
    (1, 2, 2, 3, lambda a: -3.0),
    (3, 0, 4, 1, lambda a: 48.0 * a * a),
    (3, 1, 3, 3, lambda a: 12.0 * a),
    (3, 1, 5, 1, lambda a: 48.0 * a * a),
    (3, 2, 4, 3, lambda a: 12.0 * a),
    (3, 3, 3, 5, lambda a: 3.0),
)


def _eval_terms(terms, r: float, epsilon: float) -> float:
    a = epsilon * epsilon
    s, t = _st(r, epsilon)
    m2 = 2.0 * a - s
    total = 0.0
    for k, m, p, q, coeff in terms:
        total += coeff(a) * r**k * m2**m / (s**p * t**q)
    return total


def cassini_u1_u2(r: float, epsilon: float) -> tuple[float, float]:
    """Analytic first and second derivatives of the upper-branch slope."""
    dom = domain_of(epsilon)
    if not dom.contains(r):
        raise DomainError(f"r={r} outside the radial domain ({dom.r_min}, {dom.r_max})")
    return _eval_terms(_U1_TERMS, r, epsilon), _eval_terms(_U2_TERMS, r, epsilon)


class ProfileCurve:
    """Evaluation interface shared by every profile.

    Concrete profiles provide z, the slope u = dz/dr, and its derivatives
    u1 = u', u2 = u'' (u3 = u''' where available) on an open radial domain.
    """

    domain: RadialDomain
    branch: int = +1

    def z(self, r: float) -> float:
        raise NotImplementedError

    def u(self, r: float) -> float:
        raise NotImplementedError

    def u1(self, r: float) -> float:
        raise NotImplementedError

    def u2(self, r: float) -> float:
        raise NotImplementedError

    def u3(self, r: float) -> float:
        raise DerivativeUnavailable(f"{type(self).__name__} has no third derivative")

    def has_u3(self) -> bool:
        try:
            mid = 0.5 * (self.domain.r_min + self.domain.r_max)
            self.u3(mid)
            return True
        except DerivativeUnavailable:
            return False


class CassiniOval(ProfileCurve):
    """Cassini profile of biconcavity epsilon (epsilon = 0 is the unit circle).

    All curvature work uses the upper branch; the lower branch is its mirror
    image and only enters area/volume quadrature.
    """

    def __init__(self, epsilon: float, branch: int = +1):
        if epsilon < 0:
            raise DomainError(f"epsilon must be >= 0, got {epsilon}")
        if branch not in (+1, -1):
            raise ValueError("branch must be +1 (upper) or -1 (lower)")
        self.epsilon = float(epsilon)
        self.branch = branch
        self.domain = domain_of(self.epsilon)
        self._u3_fn = None

    @property
    def eccentricity(self) -> float:
        """e = 1/epsilon, the reciprocal shape ratio of the oval family."""
        if self.epsilon == 0.0:
            raise ZeroDivisionError("eccentricity is undefined at epsilon = 0")
        return 1.0 / self.epsilon

    def z(self, r: float) -> float:
        return cassini_z(r, self.epsilon, self.branch)

    def u(self, r: float) -> float:
        return self.branch * cassini_u(r, self.epsilon)

    def u1(self, r: float) -> float:
        return self.branch * cassini_u1_u2(r, self.epsilon)[0]

    def u2(self, r: float) -> float:
        return self.branch * cassini_u1_u2(r, self.epsilon)[1]

    def u3(self, r: float) -> float:
        # Exact closed form exported by the radical-algebra layer; imported
        # lazily so geometry stays usable without it.
        if self._u3_fn is None:
            from .exact.theorem import cassini_u3_callback

            self._u3_fn = cassini_u3_callback()
        if not self.domain.interior(r):
            raise DomainError(f"r={r} outside the open domain")
        return self.branch * self._u3_fn(r, self.epsilon)


class SphereProfile(ProfileCurve):
    """Hemisphere graph z = z0 + branch*sqrt(a^2 - r^2) of radius a."""

    def __init__(self, radius: float = 1.0, branch: int = +1, z0: float = 0.0):
        if radius <= 0:
            raise DomainError(f"radius must be positive, got {radius}")
        self.radius = float(radius)
        self.branch = branch
        self.z0 = float(z0)
        self.domain = RadialDomain(0.0, self.radius, closed_at_min=True)

    def _g(self, r: float) -> float:
        arg = self.radius * self.radius - r * r
        if arg <= 0.0:
            raise DomainError(f"r={r} outside the hemisphere of radius {self.radius}")
        return math.sqrt(arg)

    def z(self, r: float) -> float:
        return self.z0 + self.branch * self._g(r)

    def u(self, r: float) -> float:
        return -self.branch * r / self._g(r)

    def u1(self, r: float) -> float:
        a2 = self.radius * self.radius
        return -self.branch * a2 / self._g(r) ** 3

    def u2(self, r: float) -> float:
        a2 = self.radius * self.radius
        return -self.branch * 3.0 * a2 * r / self._g(r) ** 5

    def u3(self, r: float) -> float:
        a2 = self.radius * self.radius
        return -self.branch * 3.0 * a2 * (a2 + 4.0 * r * r) / self._g(r) ** 7


@dataclass(frozen=True)
class CurvaturePoint:
    """Tangent angle and curvatures of a profile at one radius.

    H and K are exactly recomputable from (psi, dpsi_dr, r):

        H = -(cos(psi)*dpsi_dr + sin(psi)/r) / 2
        K = cos(psi)*sin(psi)*dpsi_dr / r

    with sin(psi)/r replaced by its limit dpsi_dr at the axis.
    """

    r: float
    psi: float
    dpsi_dr: float
    H: float
    K: float

    @property
    def k1(self) -> float:
        """Meridional principal curvature cos(psi) * dpsi/dr."""
        return math.cos(self.psi) * self.dpsi_dr

    @property
    def k2(self) -> float:
        """Azimuthal principal curvature sin(psi)/r (axis limit: dpsi/dr)."""
        if abs(self.r) < _AXIS_EPS:
            return self.dpsi_dr
        return math.sin(self.psi) / self.r


def curvature_point(
    profile: ProfileCurve,
    r: float,
    *,
    axis_limit: bool = False,
    sigma: int | None = None,
) -> CurvaturePoint:
    """Tangent angle psi, dpsi/dr, mean and Gaussian curvature at radius r.

    Quantities carrying 1/r factors are evaluated through their analytic
    limits at r = 0, and only when ``axis_limit`` is set; a plain request at
    the axis raises :class:`SingularAxis`.
    """
    sig = SIGN_CONVENTION if sigma is None else sigma
    if sig not in (+1, -1):
        raise ValueError("sigma must be +1 or -1")
    if r == 0.0:
        if not axis_limit:
            raise SingularAxis("r = 0 needs axis_limit=True (removable singularity)")
        if not profile.domain.closed_at_min or profile.domain.r_min != 0.0:
            raise DomainError("this profile does not reach the axis")
        u1 = profile.u1(0.0)
        dpsi = sig * u1  # u(0) = 0 for profiles regular at the axis
        return CurvaturePoint(r=0.0, psi=0.0, dpsi_dr=dpsi, H=-dpsi, K=dpsi * dpsi)
    if not profile.domain.interior(r):
        raise DomainError(f"r={r} outside the open domain")
    u = profile.u(r)
    u1 = profile.u1(r)
    one = 1.0 + u * u
    psi = sig * math.atan(u)
    dpsi = sig * u1 / one
    cos_psi = math.cos(psi)
    sin_psi = math.sin(psi)
    H = -0.5 * (cos_psi * dpsi + sin_psi / r)
    K = cos_psi * sin_psi * dpsi / r
    return CurvaturePoint(r=r, psi=psi, dpsi_dr=dpsi, H=H, K=K)
