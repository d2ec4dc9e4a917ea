import math
import random
from fractions import Fraction

import pytest

from memshape.exact.mpoly import MPoly, PolyFrac, frac_sqrt
from memshape.exact.radext import RadExpr, differentiate


def random_mpoly(rng, max_terms=2, max_deg=1):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exps = tuple(rng.randint(0, max_deg) if i < 2 else 0 for i in range(5))
        terms[exps] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return MPoly(terms)


def random_radexpr(rng, max_components=3):
    basis_pool = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (0, 1, 1)]
    chosen = rng.sample(basis_pool, rng.randint(1, max_components))
    comps = {b: PolyFrac.coerce(random_mpoly(rng)) for b in chosen}
    return RadExpr(comps)


class TestMPoly:
    def test_addition_is_exact(self):
        rng = random.Random(1)
        for _ in range(200):
            a, b = random_mpoly(rng), random_mpoly(rng)
            assert (a + b) - b == a

    def test_multiplication_distributes(self):
        rng = random.Random(2)
        for _ in range(100):
            a, b, c = (random_mpoly(rng) for _ in range(3))
            assert a * (b + c) == a * b + a * c

    def test_exact_division(self):
        rng = random.Random(3)
        for _ in range(100):
            a, b = random_mpoly(rng), random_mpoly(rng)
            prod = a * b
            if b.is_zero:
                continue
            q = prod.div_exact(b)
            assert q == a

    def test_inexact_division_returns_none(self):
        r = MPoly.var("r")
        eps = MPoly.var("eps")
        assert (r * r + 1).div_exact(eps) is None

    def test_coefficient_extraction(self):
        r = MPoly.var("r")
        c0 = MPoly.var("c0")
        p = 3 * r**5 * c0 - Fraction(1, 2) * r**3 + r * c0
        assert p.coeff_of("r", 5) == 3 * c0
        assert p.coeff_of("r", 3) == MPoly.const(Fraction(-1, 2))
        assert p.coeff_of("r", 1) == c0
        assert p.coeff_of("r", 2).is_zero

    def test_substitution(self):
        r, eps, P = MPoly.var("r"), MPoly.var("eps"), MPoly.var("P")
        p = 2 * P * eps**2 - 40 * MPoly.var("c0") * eps**4
        sub = p.subs_var("P", 20 * MPoly.var("c0") * eps**2)
        assert sub.is_zero

    def test_derivative(self):
        r = MPoly.var("r")
        p = r**3 - 2 * r
        assert p.deriv("r") == 3 * r**2 - 2

    def test_content_and_primitive(self):
        r = MPoly.var("r")
        p = 6 * r**2 - 4 * r
        prim, content = p.primitive()
        assert content == 2
        assert prim == 3 * r**2 - 2 * r

    def test_frac_sqrt(self):
        assert frac_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert frac_sqrt(Fraction(3, 4)) is None
        assert frac_sqrt(Fraction(-1)) is None


class TestPolyFrac:
    def test_cancellation_through_registered_factors(self):
        from memshape.exact.radext import S2_POLY

        r = MPoly.var("r")
        f = PolyFrac(S2_POLY * r, S2_POLY * 2)
        assert f.den.is_one or f.den == MPoly.const(2)
        assert f == PolyFrac(r, 2)

    def test_field_laws(self):
        rng = random.Random(4)
        for _ in range(100):
            a, b = random_mpoly(rng), random_mpoly(rng)
            d1, d2 = random_mpoly(rng), random_mpoly(rng)
            if d1.is_zero or d2.is_zero:
                continue
            x, y = PolyFrac(a, d1), PolyFrac(b, d2)
            assert (x + y) - y == x
            if not y.is_zero:
                assert (x / y) * y == x

    def test_derivative_quotient_rule(self):
        r = MPoly.var("r")
        f = PolyFrac(r * r, r + 1)
        df = f.deriv("r")
        # d/dr [r^2/(r+1)] = (r^2 + 2r)/(r+1)^2
        assert df == PolyFrac(r * r + 2 * r, (r + 1) ** 2)


class TestRadExpr:
    def test_radical_squares_reduce(self):
        s = RadExpr.radical("s")
        t = RadExpr.radical("t")
        w = RadExpr.radical("w")
        from memshape.exact.radext import S2_POLY

        a = MPoly.var("eps") ** 2
        r2 = MPoly.var("r") ** 2
        assert s * s == RadExpr.scalar(S2_POLY)
        assert t * t == (s - RadExpr.scalar(a) - RadExpr.scalar(r2))
        assert w * w == (s - RadExpr.scalar(a))

    def test_ring_laws_randomized(self):
        rng = random.Random(7)
        for _ in range(60):
            x, y, z = (random_radexpr(rng) for _ in range(3))
            assert x * (y + z) == x * y + x * z
            assert (x * y) * z == x * (y * z)

    def test_reduction_idempotent(self):
        # products are reduced on construction; multiplying by one must not
        # change the representation
        rng = random.Random(8)
        for _ in range(40):
            x = random_radexpr(rng)
            assert x * RadExpr.one() == x

    def test_inverse_roundtrip(self):
        rng = random.Random(9)
        count = 0
        while count < 20:
            x = random_radexpr(rng, max_components=2)
            try:
                inv = x.inverse()
            except ZeroDivisionError:
                continue
            assert x * inv == RadExpr.one()
            count += 1

    def test_leibniz_rule(self):
        rng = random.Random(10)
        for _ in range(30):
            x, y = random_radexpr(rng), random_radexpr(rng)
            lhs = differentiate(x * y)
            rhs = differentiate(x) * y + x * differentiate(y)
            assert lhs == rhs

    def test_chain_rule_s(self):
        # d/dr sqrt(1+4 eps^2 r^2) = 4 eps^2 r / s = 4 eps^2 r s / S2
        from memshape.exact.radext import S2_POLY

        s = RadExpr.radical("s")
        ds = differentiate(s)
        a = MPoly.var("eps") ** 2
        r = MPoly.var("r")
        expected = RadExpr({(1, 0, 0): PolyFrac(4 * a * r, S2_POLY)})
        assert ds == expected

    def test_constant_derivative_zero(self):
        assert differentiate(RadExpr.variable("c0")).is_zero

    def test_numeric_specialization(self):
        rng = random.Random(11)
        for _ in range(20):
            x = random_radexpr(rng)
            r, eps = 0.63, 0.41
            a = eps * eps
            s = math.sqrt(1 + 4 * a * r * r)
            t = math.sqrt(s - a - r * r)
            w = math.sqrt(s - a)
            direct = 0.0
            for (i, j, k), frac in x.components.items():
                direct += frac.eval_float((r, eps, 0.3, -0.2, 0.9)) * s**i * t**j * w**k
            assert x.eval_float(r, eps, 0.3, -0.2, 0.9) == pytest.approx(direct, rel=1e-13)

    def test_exact_evaluation_collapses_rational_radicals(self):
        # at eps = 0: s = w = 1 exactly; only t survives as a surd
        x = RadExpr.radical("s") + RadExpr.radical("w") + RadExpr.radical("t")
        vals = x.eval_exact(Fraction(1, 2), 0)
        assert vals[()] == 2
        assert vals[("t",)] == 1
