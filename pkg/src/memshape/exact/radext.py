"""Exact arithmetic in the radical tower of the Cassini family.

The ring is Q(r, eps, c0, P, L) extended by three square roots,

    s = sqrt(1 + 4*eps^2*r^2)
    t = sqrt(s - eps^2 - r^2)        (the profile height itself)
    w = sqrt(s - eps^2)

reduced so that no radical carries an exponent above one.  An element is
stored as eight PolyFrac components indexed by (i, j, k) in {0,1}^3 for the
basis monomials s^i t^j w^k; denominators stay radical free because every
construction rationalizes through the conjugation factors

    S2 = s^2            = 1 + 4*eps^2*r^2
    Q1 = (s-e2-r^2) conj -> 1 - eps^2 + r^2
    Q2 =                    1 + eps^2 - r^2
    Q3 = (s-e2) conj     -> 1 + 4*eps^2*r^2 - eps^4

Differentiation in r follows the chain rules ds/dr = 4*eps^2*r/s,
dt/dr = r*(2*eps^2 - s)/(s*t), dw/dr = 2*eps^2*r/(s*w).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .mpoly import MPoly, PolyFrac, frac_sqrt, register_cancel_factor

Basis = Tuple[int, int, int]

_R = MPoly.var("r")
_EPS = MPoly.var("eps")
_A = MPoly.var("eps", 2)  # eps^2, the natural parameter of the family

#: s^2 as a plain polynomial.
S2_POLY = MPoly.one() + 4 * _A * _R * _R
#: (s - eps^2 - r^2)(s + eps^2 + r^2) = Q1 * Q2.
Q1_POLY = MPoly.one() - _A + _R * _R
Q2_POLY = MPoly.one() + _A - _R * _R
#: (s - eps^2)(s + eps^2) = S2 - eps^4.
Q3_POLY = S2_POLY - _A * _A

for _f in (S2_POLY, Q1_POLY, Q2_POLY, Q3_POLY):
    register_cancel_factor(_f)

#: t^2 and w^2 expressed as constant + s parts: x^2 = base + s_coeff * s.
_T2_BASE = -(_A + _R * _R)
_W2_BASE = -_A


def _reduce_basis(i: int, j: int, k: int) -> list:
    """Rewrite s^i t^j w^k (i,j,k possibly 2) on the reduced basis.

    Returns [(basis, MPoly multiplier), ...].
    """
    parts = [((i, j, k), MPoly.one())]
    if j >= 2:
        parts = [
            ((i, j - 2, k), m * _T2_BASE) for (i, j, k), m in parts
        ] + [((i + 1, j - 2, k), m) for (i, j, k), m in parts]
        parts = [((pi, pj, pk), m) for (pi, pj, pk), m in parts]
    out = []
    for (pi, pj, pk), m in parts:
        if pk >= 2:
            out.append(((pi, pj, pk - 2), m * _W2_BASE))
            out.append(((pi + 1, pj, pk - 2), m))
        else:
            out.append(((pi, pj, pk), m))
    final = []
    for (pi, pj, pk), m in out:
        while pi >= 2:
            pi -= 2
            m = m * S2_POLY
        final.append(((pi, pj, pk), m))
    return final


_MUL_TABLE: Dict[Tuple[Basis, Basis], list] = {}
for _i1 in (0, 1):
    for _j1 in (0, 1):
        for _k1 in (0, 1):
            for _i2 in (0, 1):
                for _j2 in (0, 1):
                    for _k2 in (0, 1):
                        _MUL_TABLE[((_i1, _j1, _k1), (_i2, _j2, _k2))] = _reduce_basis(
                            _i1 + _i2, _j1 + _j2, _k1 + _k2
                        )


class RadExpr:
    """Element of the radical tower: eight PolyFrac components on s^i t^j w^k."""

    __slots__ = ("components",)

    def __init__(self, components: Optional[Dict[Basis, PolyFrac]] = None):
        self.components: Dict[Basis, PolyFrac] = {}
        if components:
            for basis, frac in components.items():
                frac = PolyFrac.coerce(frac)
                if not frac.is_zero:
                    self.components[basis] = frac

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "RadExpr":
        return cls()

    @classmethod
    def one(cls) -> "RadExpr":
        return cls({(0, 0, 0): PolyFrac.one()})

    @classmethod
    def scalar(cls, value) -> "RadExpr":
        return cls({(0, 0, 0): PolyFrac.coerce(value)})

    @classmethod
    def variable(cls, name: str) -> "RadExpr":
        return cls.scalar(MPoly.var(name))

    @classmethod
    def radical(cls, which: str) -> "RadExpr":
        basis = {"s": (1, 0, 0), "t": (0, 1, 0), "w": (0, 0, 1)}[which]
        return cls({basis: PolyFrac.one()})

    # -- predicates -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.components

    def component(self, basis: Basis) -> PolyFrac:
        return self.components.get(basis, PolyFrac.zero())

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MPoly, PolyFrac)):
            other = RadExpr.scalar(other)
        if not isinstance(other, RadExpr):
            return NotImplemented
        keys = set(self.components) | set(other.components)
        return all(self.component(b) == other.component(b) for b in keys)

    def __hash__(self):
        raise TypeError("RadExpr is not hashable")

    # -- ring operations --------------------------------------------------------

    def __add__(self, other) -> "RadExpr":
        if isinstance(other, (int, Fraction, MPoly, PolyFrac)):
            other = RadExpr.scalar(other)
        out = dict(self.components)
        for basis, frac in other.components.items():
            acc = out.get(basis)
            acc = frac if acc is None else acc + frac
            if acc.is_zero:
                out.pop(basis, None)
            else:
                out[basis] = acc
        res = RadExpr.__new__(RadExpr)
        res.components = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "RadExpr":
        res = RadExpr.__new__(RadExpr)
        res.components = {b: -f for b, f in self.components.items()}
        return res

    def __sub__(self, other) -> "RadExpr":
        if isinstance(other, (int, Fraction, MPoly, PolyFrac)):
            other = RadExpr.scalar(other)
        return self + (-other)

    def __rsub__(self, other) -> "RadExpr":
        return (-self) + other

    def __mul__(self, other) -> "RadExpr":
        if isinstance(other, (int, Fraction, MPoly, PolyFrac)):
            scalar = PolyFrac.coerce(other)
            if scalar.is_zero:
                return RadExpr.zero()
            res = RadExpr.__new__(RadExpr)
            res.components = {b: f * scalar for b, f in self.components.items()}
            return res
        if not isinstance(other, RadExpr):
            return NotImplemented
        out: Dict[Basis, PolyFrac] = {}
        for b1, f1 in self.components.items():
            for b2, f2 in other.components.items():
                f12 = f1 * f2
                for basis, mult in _MUL_TABLE[(b1, b2)]:
                    term = f12 * mult if not mult.is_one else f12
                    acc = out.get(basis)
                    acc = term if acc is None else acc + term
                    if acc.is_zero:
                        out.pop(basis, None)
                    else:
                        out[basis] = acc
        res = RadExpr.__new__(RadExpr)
        res.components = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "RadExpr":
        if n < 0:
            return self.inverse() ** (-n)
        result = RadExpr.one()
        for _ in range(n):
            result = result * self
        return result

    # -- conjugation and inversion -----------------------------------------------

    def conj(self, which: str) -> "RadExpr":
        """Negate one radical.  For 's' the element must be free of t and w,
        since those radicals depend on s."""
        axis = {"s": 0, "t": 1, "w": 2}[which]
        if which == "s" and any(b[1] or b[2] for b in self.components):
            raise ValueError("s-conjugation is only defined on the s-subring")
        res = RadExpr.__new__(RadExpr)
        res.components = {
            b: (-f if b[axis] else f) for b, f in self.components.items()
        }
        return res

    def inverse(self) -> "RadExpr":
        """Exact inverse by successive conjugation (norm descent w -> t -> s)."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        y1 = self.conj("w")
        p1 = self * y1
        y2 = p1.conj("t")
        p2 = p1 * y2
        y3 = p2.conj("s")
        p3 = p2 * y3
        extras = {b: f for b, f in p3.components.items() if b != (0, 0, 0)}
        if extras:
            raise ArithmeticError("norm descent failed to reach the base field")
        norm = p3.component((0, 0, 0))
        if norm.is_zero:
            raise ZeroDivisionError("zero divisor encountered during inversion")
        return (y1 * y2 * y3) * norm.inverse()

    # -- differentiation -----------------------------------------------------------

    def deriv(self) -> "RadExpr":
        """Exact d/dr in the tower."""
        out = RadExpr.zero()
        for basis, frac in self.components.items():
            dfrac = frac.deriv("r")
            if not dfrac.is_zero:
                out = out + RadExpr({basis: dfrac})
            i, j, k = basis
            if i:
                out = out + (_DS * RadExpr({(0, j, k): frac}))
            if j:
                out = out + (_DT * RadExpr({(i, 0, k): frac}))
            if k:
                out = out + (_DW * RadExpr({(i, j, 0): frac}))
        return out

    # -- evaluation ------------------------------------------------------------------

    @staticmethod
    def _radical_values(r: float, eps: float) -> Tuple[float, float, float]:
        a = eps * eps
        s = math.sqrt(1.0 + 4.0 * a * r * r)
        t_sq = s - a - r * r
        w_sq = s - a
        if t_sq <= 0 or w_sq <= 0:
            raise ValueError(f"point (r={r}, eps={eps}) is outside the radical domain")
        return s, math.sqrt(t_sq), math.sqrt(w_sq)

    def eval_float(self, r: float, eps: float, c0: float = 0.0, P: float = 0.0, L: float = 0.0) -> float:
        vals = (r, eps, c0, P, L)
        s, t, w = self._radical_values(r, eps)
        total = 0.0
        for (i, j, k), frac in self.components.items():
            total += frac.eval_float(vals) * s**i * t**j * w**k
        return total

    def eval_exact(self, r, eps, c0=0, P=0, L=0):
        """Evaluate at rational arguments, collapsing radicals that are rational.

        Returns a dict mapping surviving radical monomials (subset of
        ('s','t','w')) to exact Fraction coefficients; the value of the
        expression is the sum of coeff * prod(radical values).  An empty
        dict means exact zero.
        """
        vals = tuple(Fraction(v) for v in (r, eps, c0, P, L))
        rq, aq = vals[0], vals[1] * vals[1]
        s_sq = 1 + 4 * aq * rq * rq
        s_rat = frac_sqrt(s_sq)
        rad_sq = {"s": s_sq}
        rat_val = {"s": s_rat}
        if s_rat is not None:
            t_sq = s_rat - aq - rq * rq
            w_sq = s_rat - aq
            rad_sq["t"], rad_sq["w"] = t_sq, w_sq
            rat_val["t"] = frac_sqrt(t_sq)
            rat_val["w"] = frac_sqrt(w_sq)
        else:
            rat_val["t"] = rat_val["w"] = None

        out: Dict[tuple, Fraction] = {}
        for (i, j, k), frac in self.components.items():
            coeff = frac.eval_frac(vals)
            key = []
            for name, p in zip(("s", "t", "w"), (i, j, k)):
                if not p:
                    continue
                rv = rat_val.get(name)
                if rv is not None:
                    coeff *= rv
                else:
                    key.append(name)
            key = tuple(key)
            acc = out.get(key, Fraction(0)) + coeff
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        names = []
        for (i, j, k), frac in sorted(self.components.items()):
            mono = "".join(n for n, p in zip("stw", (i, j, k)) if p) or "1"
            names.append(f"[{mono}] {frac}")
        return "  +  ".join(names)

    def __repr__(self) -> str:
        return f"RadExpr({len(self.components)} components)"


def differentiate(x: RadExpr) -> RadExpr:
    """Exact d/dr of a tower element (module-level convenience)."""
    return x.deriv()


def _build_ds() -> RadExpr:
    # ds/dr = 4*eps^2*r/s = 4*eps^2*r*s / S2
    return RadExpr({(1, 0, 0): PolyFrac(4 * _A * _R, S2_POLY)})


def _build_dt() -> RadExpr:
    # dt/dr = r (2 eps^2 - s) / (s t), rationalized through Q1*Q2:
    #   component t : r (eps^2 - r^2) / (Q1 Q2)
    #   component st: r (2 eps^4 - 2 eps^2 r^2 - 1) / (S2 Q1 Q2)
    r2 = _R * _R
    return RadExpr(
        {
            (0, 1, 0): PolyFrac(_R * (_A - r2), Q1_POLY * Q2_POLY),
            (1, 1, 0): PolyFrac(
                _R * (2 * _A * _A - 2 * _A * r2 - MPoly.one()),
                S2_POLY * Q1_POLY * Q2_POLY,
            ),
        }
    )


def _build_dw() -> RadExpr:
    # dw/dr = 2*eps^2*r/(s w), rationalized through Q3:
    #   component w : 2 eps^2 r / Q3
    #   component sw: 2 eps^4 r / (S2 Q3)
    return RadExpr(
        {
            (0, 0, 1): PolyFrac(2 * _A * _R, Q3_POLY),
            (1, 0, 1): PolyFrac(2 * _A * _A * _R, S2_POLY * Q3_POLY),
        }
    )


_DS = _build_ds()
_DT = _build_dt()
_DW = _build_dw()
