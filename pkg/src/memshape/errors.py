"""Exception hierarchy shared by all memshape modules."""


class MemshapeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MemshapeError, ValueError):
    """A radial coordinate lies outside the profile's domain of definition."""


class SingularAxis(DomainError):
    """Evaluation exactly at r = 0 requested without the axis-limit flag."""


class VerticalTangent(DomainError):
    """cos(psi) vanished within tolerance; the residual form divides by it."""


class DerivativeUnavailable(MemshapeError):
    """The profile cannot supply the requested derivative order."""


class NonpositiveRadius(MemshapeError, ValueError):
    """A sphere radius must be strictly positive."""


class IdenticallyZero(MemshapeError):
    """The sphere constraint degenerates to 0 = 0: every radius is admissible."""


class QuadratureFailure(MemshapeError, RuntimeError):
    """Adaptive quadrature did not reach its error target."""


class ResidueInT(MemshapeError):
    """Clearing radicals left a nonzero component on a t-bearing basis element."""


class OutOfRange(MemshapeError, ValueError):
    """|sin(psi)| exceeded 1 on a constant-mean-curvature branch."""


class InfeasibleJunction(MemshapeError):
    """Slope continuity at the junction would require |sin(psi)| > 1."""


class OpenProfile(MemshapeError):
    """The composite profile does not close and no truncation radius was given."""
