"""Sparse exact multivariate polynomials over Q and their fractions.

Variables are fixed as (r, eps, c0, P, L) in that order; exponent vectors are
5-tuples of non-negative ints.  Coefficients are :class:`fractions.Fraction`
throughout, so arithmetic is exact.  The canonical term order is graded
lexicographic, which makes equality representation equality.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

VARS = ("r", "eps", "c0", "P", "L")
NVARS = len(VARS)
VAR_INDEX = {name: i for i, name in enumerate(VARS)}

Exps = tuple  # 5-tuple of ints
Scalar = Union[int, Fraction]

_ZERO_EXPS = (0,) * NVARS


def _grlex_key(exps: Exps) -> tuple:
    return (sum(exps), exps)


class MPoly:
    """Polynomial in (r, eps, c0, P, L) with exact rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms: dict = {}
        if terms:
            for exps, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    self.terms[exps] = c

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "MPoly":
        return cls()

    @classmethod
    def one(cls) -> "MPoly":
        return cls({_ZERO_EXPS: Fraction(1)})

    @classmethod
    def const(cls, value: Scalar) -> "MPoly":
        return cls({_ZERO_EXPS: Fraction(value)})

    @classmethod
    def var(cls, name: str, power: int = 1) -> "MPoly":
        exps = [0] * NVARS
        exps[VAR_INDEX[name]] = power
        return cls({tuple(exps): Fraction(1)})

    @classmethod
    def monomial(cls, coeff: Scalar, **powers: int) -> "MPoly":
        exps = [0] * NVARS
        for name, p in powers.items():
            exps[VAR_INDEX[name]] = p
        return cls({tuple(exps): Fraction(coeff)})

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_one(self) -> bool:
        return self.terms == {_ZERO_EXPS: Fraction(1)}

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        out = dict(self.terms)
        for exps, c in other.terms.items():
            acc = out.get(exps, Fraction(0)) + c
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        res = MPoly.__new__(MPoly)
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        res = MPoly.__new__(MPoly)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            other = MPoly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if q == 0:
                return MPoly.zero()
            res = MPoly.__new__(MPoly)
            res.terms = {e: c * q for e, c in self.terms.items()}
            return res
        if not isinstance(other, MPoly):
            return NotImplemented
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc = out.get(e, Fraction(0)) + c1 * c2
                if acc:
                    out[e] = acc
                else:
                    out.pop(e, None)
        res = MPoly.__new__(MPoly)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- structure -----------------------------------------------------------

    def sorted_terms(self) -> list:
        """Terms in decreasing graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def leading(self) -> tuple:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def degree(self, var: Optional[str] = None) -> int:
        if self.is_zero:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = VAR_INDEX[var]
        return max(e[i] for e in self.terms)

    def coeff_of(self, var: str, power: int) -> "MPoly":
        """Coefficient of var**power, as a polynomial in the other variables."""
        i = VAR_INDEX[var]
        out = {}
        for exps, c in self.terms.items():
            if exps[i] == power:
                reduced = list(exps)
                reduced[i] = 0
                out[tuple(reduced)] = c
        return MPoly(out)

    def deriv(self, var: str = "r") -> "MPoly":
        i = VAR_INDEX[var]
        out = {}
        for exps, c in self.terms.items():
            p = exps[i]
            if p == 0:
                continue
            reduced = list(exps)
            reduced[i] = p - 1
            key = tuple(reduced)
            out[key] = out.get(key, Fraction(0)) + c * p
        return MPoly(out)

    def subs_var(self, var: str, value) -> "MPoly":
        """Substitute a polynomial or rational value for one variable."""
        i = VAR_INDEX[var]
        if isinstance(value, (int, Fraction)):
            value = MPoly.const(value)
        result = MPoly.zero()
        powers: dict = {0: MPoly.one()}

        def value_pow(p: int) -> "MPoly":
            if p not in powers:
                powers[p] = value_pow(p - 1) * value
            return powers[p]

        for exps, c in self.terms.items():
            reduced = list(exps)
            p = reduced[i]
            reduced[i] = 0
            base = MPoly({tuple(reduced): c})
            result = result + (base * value_pow(p) if p else base)
        return result

    # -- evaluation ----------------------------------------------------------

    def eval_frac(self, values: Iterable[Scalar]) -> Fraction:
        vals = [Fraction(v) for v in values]
        total = Fraction(0)
        for exps, c in self.terms.items():
            term = c
            for v, p in zip(vals, exps):
                if p:
                    term *= v**p
            total += term
        return total

    def eval_float(self, values: Iterable[float]) -> float:
        vals = list(values)
        total = 0.0
        for exps, c in self.terms.items():
            term = float(c)
            for v, p in zip(vals, exps):
                if p:
                    term *= v**p
            total += term
        return total

    # -- content and exact division -------------------------------------------

    def content(self) -> Fraction:
        """Signed rational content: gcd of numerators over lcm of denominators,
        carrying the sign of the graded-lex leading coefficient."""
        if self.is_zero:
            return Fraction(1)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        if self.leading()[1] < 0:
            content = -content
        return content

    def primitive(self) -> tuple:
        """(primitive part, content) with primitive part having coprime integer
        coefficients and positive leading coefficient."""
        c = self.content()
        if c == 1:
            return self, Fraction(1)
        return self * (1 / c), c

    def div_exact(self, divisor: "MPoly") -> Optional["MPoly"]:
        """Exact polynomial quotient, or None when the division has a remainder."""
        if divisor.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero:
            return MPoly.zero()
        d_exps, d_coeff = divisor.leading()
        rem = dict(self.terms)
        quot: dict = {}
        while rem:
            exps = max(rem, key=_grlex_key)
            diff = tuple(a - b for a, b in zip(exps, d_exps))
            if any(x < 0 for x in diff):
                return None
            c = rem[exps] / d_coeff
            quot[diff] = quot.get(diff, Fraction(0)) + c
            for e2, c2 in divisor.terms.items():
                e = tuple(a + b for a, b in zip(diff, e2))
                acc = rem.get(e, Fraction(0)) - c * c2
                if acc:
                    rem[e] = acc
                else:
                    rem.pop(e, None)
        return MPoly(quot)

    def monomial_content(self) -> Exps:
        """Per-variable minimum exponent across all terms."""
        if self.is_zero:
            return _ZERO_EXPS
        mins = [min(e[i] for e in self.terms) for i in range(NVARS)]
        return tuple(mins)

    def shift_down(self, exps: Exps) -> "MPoly":
        """Divide by the monomial with the given exponents (must divide exactly)."""
        out = {}
        for e, c in self.terms.items():
            reduced = tuple(a - b for a, b in zip(e, exps))
            if any(x < 0 for x in reduced):
                raise ValueError("monomial does not divide the polynomial")
            out[reduced] = c
        return MPoly(out)

    # -- display -------------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for exps, c in self.sorted_terms():
            factors = [str(c)]
            for name, p in zip(VARS, exps):
                if p == 1:
                    factors.append(name)
                elif p > 1:
                    factors.append(f"{name}^{p}")
            parts.append("*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"MPoly({self})"


class PolyFrac:
    """Quotient of two MPoly values, kept exact and lightly reduced.

    Reduction cancels the common monomial content, normalizes the denominator
    to a primitive polynomial with positive leading coefficient, attempts full
    cancellation, and divides out any registered irreducible factors shared by
    numerator and denominator.  Registered factors are the conjugation
    polynomials that radical arithmetic introduces; see
    :func:`register_cancel_factor`.
    """

    __slots__ = ("num", "den")

    CANCEL_FACTORS: list = []

    def __init__(self, num, den=None, _normalized: bool = False):
        if isinstance(num, (int, Fraction)):
            num = MPoly.const(num)
        if den is None:
            den = MPoly.one()
        elif isinstance(den, (int, Fraction)):
            den = MPoly.const(den)
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        self.num = num
        self.den = den
        if not _normalized:
            self._normalize()

    def _normalize(self) -> None:
        if self.num.is_zero:
            self.den = MPoly.one()
            return
        if not self.den.is_one:
            # common monomial factor
            mn = self.num.monomial_content()
            md = self.den.monomial_content()
            common = tuple(min(a, b) for a, b in zip(mn, md))
            if any(common):
                self.num = self.num.shift_down(common)
                self.den = self.den.shift_down(common)
            # full cancellation
            q = self.num.div_exact(self.den)
            if q is not None:
                self.num, self.den = q, MPoly.one()
            else:
                for f in PolyFrac.CANCEL_FACTORS:
                    while True:
                        qd = self.den.div_exact(f)
                        if qd is None:
                            break
                        qn = self.num.div_exact(f)
                        if qn is None:
                            break
                        self.num, self.den = qn, qd
        # primitive positive denominator
        self.den, scale = self.den.primitive()
        if scale != 1:
            self.num = self.num * (1 / scale)

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "PolyFrac":
        return cls(MPoly.zero(), MPoly.one(), _normalized=True)

    @classmethod
    def one(cls) -> "PolyFrac":
        return cls(MPoly.one(), MPoly.one(), _normalized=True)

    @staticmethod
    def coerce(value) -> "PolyFrac":
        if isinstance(value, PolyFrac):
            return value
        if isinstance(value, MPoly):
            return PolyFrac(value, MPoly.one(), _normalized=True)
        return PolyFrac(MPoly.const(value), MPoly.one(), _normalized=True)

    # -- predicates -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_one(self) -> bool:
        return self.num == self.den

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, MPoly)):
            other = PolyFrac.coerce(other)
        if not isinstance(other, PolyFrac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        raise TypeError("PolyFrac is not hashable")

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other) -> "PolyFrac":
        other = PolyFrac.coerce(other)
        if self.den == other.den:
            return PolyFrac(self.num + other.num, self.den)
        return PolyFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "PolyFrac":
        return PolyFrac(-self.num, self.den, _normalized=True)

    def __sub__(self, other) -> "PolyFrac":
        return self + (-PolyFrac.coerce(other))

    def __rsub__(self, other) -> "PolyFrac":
        return PolyFrac.coerce(other) + (-self)

    def __mul__(self, other) -> "PolyFrac":
        other = PolyFrac.coerce(other)
        if self.is_zero or other.is_zero:
            return PolyFrac.zero()
        return PolyFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PolyFrac":
        other = PolyFrac.coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero fraction")
        return PolyFrac(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "PolyFrac":
        return PolyFrac.coerce(other) / self

    def inverse(self) -> "PolyFrac":
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero fraction")
        return PolyFrac(self.den, self.num)

    def deriv(self, var: str = "r") -> "PolyFrac":
        if self.den.is_one:
            return PolyFrac(self.num.deriv(var), MPoly.one(), _normalized=True)
        dn = self.num.deriv(var) * self.den - self.num * self.den.deriv(var)
        return PolyFrac(dn, self.den * self.den)

    # -- evaluation -----------------------------------------------------------

    def eval_frac(self, values) -> Fraction:
        den = self.den.eval_frac(values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.eval_frac(values) / den

    def eval_float(self, values) -> float:
        return self.num.eval_float(values) / self.den.eval_float(values)

    def __str__(self) -> str:
        if self.den.is_one:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"PolyFrac({self})"


def register_cancel_factor(poly: MPoly) -> None:
    """Register an irreducible polynomial for numerator/denominator cancellation."""
    if not any(poly == f for f in PolyFrac.CANCEL_FACTORS):
        PolyFrac.CANCEL_FACTORS.append(poly)


def frac_sqrt(value: Fraction) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        return None
    num = math.isqrt(value.numerator)
    den = math.isqrt(value.denominator)
    if num * num == value.numerator and den * den == value.denominator:
        return Fraction(num, den)
    return None
