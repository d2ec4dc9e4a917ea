import math

import numpy as np
import pytest

from memshape.errors import DomainError, SingularAxis
from memshape.geometry import (
    SIGN_CONVENTION,
    CassiniOval,
    SphereProfile,
    cassini_u,
    cassini_u1_u2,
    cassini_z,
    curvature_point,
    domain_of,
)


def interior_points(eps, n, rng, margin=0.05):
    dom = domain_of(eps)
    lo, hi = dom.margined(margin)
    return rng.uniform(lo, hi, size=n)


class TestDomain:
    def test_flat_family(self):
        dom = domain_of(0.0)
        assert (dom.r_min, dom.r_max) == (0.0, 1.0)

    def test_lemniscate_boundary(self):
        dom = domain_of(1.0)
        assert dom.r_min == 0.0
        assert dom.r_max == pytest.approx(math.sqrt(2.0), abs=0)

    def test_split_family(self):
        dom = domain_of(2.0)
        assert dom.r_min == pytest.approx(math.sqrt(3.0), abs=1e-15)
        assert dom.r_max == pytest.approx(math.sqrt(5.0), abs=1e-15)

    def test_negative_epsilon_rejected(self):
        with pytest.raises(DomainError):
            domain_of(-0.1)


class TestHeight:
    def test_axis_value(self):
        assert cassini_z(0.0, 0.5) == pytest.approx(math.sqrt(0.75), rel=1e-15)

    def test_circle_value(self):
        assert cassini_z(0.6, 0.0) == pytest.approx(0.8, rel=1e-15)

    def test_lemniscate_point(self):
        assert cassini_z(1.0, 1.0) == pytest.approx(math.sqrt(math.sqrt(5.0) - 2.0), rel=1e-12)

    def test_lower_branch_mirrors(self):
        assert cassini_z(0.4, 0.7, branch=-1) == -cassini_z(0.4, 0.7, branch=+1)

    def test_outside_domain_raises(self):
        with pytest.raises(DomainError):
            cassini_z(1.2, 0.0)
        with pytest.raises(DomainError):
            cassini_z(0.5, 2.0)  # below inner rim for the split family

    def test_even_in_r(self):
        # z depends on r^2 only; the accessible domain is r >= 0, so check
        # the defining expression against manual evaluation
        for eps in (0.3, 0.9):
            for r in (0.1, 0.45):
                a = eps * eps
                s = math.sqrt(1 + 4 * a * r * r)
                assert cassini_z(r, eps) == pytest.approx(math.sqrt(s - a - r * r), rel=1e-15)


class TestSlope:
    def test_axis_slope_zero(self):
        assert cassini_u(0.0, 0.7) == 0.0

    def test_circle_slope(self):
        assert cassini_u(0.6, 0.0) == pytest.approx(-0.75, rel=1e-14)

    def test_slope_matches_height_derivative(self):
        rng = np.random.default_rng(101)
        h = 1e-6
        for eps in (0.0, 0.35, 0.8, 1.0, 1.4):
            for r in interior_points(eps, 20, rng):
                fd = (cassini_z(r + h, eps) - cassini_z(r - h, eps)) / (2 * h)
                assert cassini_u(r, eps) == pytest.approx(fd, rel=1e-8)

    def test_simplified_form_agrees(self):
        # closed form r (2 eps^2 - s)/(s t) vs the two-factor display form
        rng = np.random.default_rng(5)
        for eps in (0.2, 0.6, 1.1):
            for r in interior_points(eps, 10, rng):
                a = eps * eps
                s = math.sqrt(1 + 4 * a * r * r)
                t = math.sqrt(s - a - r * r)
                display = (r / (2 * t)) * (4 * a / s - 2.0)
                assert cassini_u(r, eps) == pytest.approx(display, rel=1e-13)


class TestSlopeDerivatives:
    def test_curvature_derivative_oracles(self):
        # step sizes balance truncation against roundoff: first differences
        # tolerate small h, second differences need h ~ eps_mach^(1/4)
        rng = np.random.default_rng(77)
        h1, h2 = 1e-6, 1e-4
        for eps in (0.0, 0.4, 0.6, 0.95, 1.2):
            for r in interior_points(eps, 20, rng, margin=0.08):
                u1, u2 = cassini_u1_u2(r, eps)
                fd1 = (cassini_u(r + h1, eps) - cassini_u(r - h1, eps)) / (2 * h1)
                fd2 = (
                    cassini_u(r + h2, eps) - 2 * cassini_u(r, eps) + cassini_u(r - h2, eps)
                ) / h2**2
                assert u1 == pytest.approx(fd1, rel=1e-7, abs=1e-8)
                assert u2 == pytest.approx(fd2, rel=1e-5, abs=1e-7)

    def test_axis_second_derivative_vanishes(self):
        # u is odd in r, so u'' must vanish at the axis
        _, u2 = cassini_u1_u2(0.0, 0.7)
        assert u2 == 0.0

    def test_circle_closed_forms(self):
        r = 0.37
        u1, u2 = cassini_u1_u2(r, 0.0)
        g = 1.0 - r * r
        assert u1 == pytest.approx(-g**-1.5, rel=1e-13)
        assert u2 == pytest.approx(-3 * r * g**-2.5, rel=1e-13)


class TestRadicalIdentities:
    def test_core_identity(self):
        # s^2 t^2 + r^2 (s - 2 eps^2)^2 = s - eps^2
        rng = np.random.default_rng(12)
        for _ in range(1000):
            eps = rng.uniform(0.0, 2.0)
            dom = domain_of(eps)
            lo, hi = dom.margined(0.01)
            r = rng.uniform(lo, hi)
            a = eps * eps
            s = math.sqrt(1 + 4 * a * r * r)
            t = math.sqrt(s - a - r * r)
            lhs = s * s * t * t + r * r * (s - 2 * a) ** 2
            assert lhs == pytest.approx(s - a, rel=1e-12)

    def test_slope_norm_identity(self):
        # 1 + u^2 = (s - eps^2)/(s^2 t^2)
        rng = np.random.default_rng(13)
        for _ in range(300):
            eps = rng.uniform(0.0, 1.5)
            dom = domain_of(eps)
            lo, hi = dom.margined(0.02)
            r = rng.uniform(lo, hi)
            a = eps * eps
            s = math.sqrt(1 + 4 * a * r * r)
            t = math.sqrt(s - a - r * r)
            u = cassini_u(r, eps)
            assert 1 + u * u == pytest.approx((s - a) / (s * s * t * t), rel=1e-10)


class TestClosure:
    @pytest.mark.parametrize("eps", [0.0, 0.5, 1.0, 1.6, 2.0])
    def test_vertical_closure(self, eps):
        r_max = domain_of(eps).r_max
        z_edge = cassini_z(r_max * (1 - 1e-12), eps)
        assert abs(z_edge) < 2e-6  # |z| ~ r_max sqrt(2e-12/(1+2 eps^2))
        u_edge = cassini_u(r_max * (1 - 1e-8), eps)
        assert u_edge < -1e3


class TestCurvaturePoint:
    def test_reference_sphere_values(self):
        # profile with psi = arcsin(r): the lower unit hemisphere under the
        # resolved convention; the mean-curvature relation gives H = -1, K = 1
        prof = SphereProfile(1.0, branch=-1)
        cp = curvature_point(prof, 0.5)
        assert cp.psi == pytest.approx(math.asin(0.5), rel=1e-14)
        assert cp.H == pytest.approx(-1.0, rel=1e-12)
        assert cp.K == pytest.approx(1.0, rel=1e-12)
        assert cp.k1 == pytest.approx(1.0, rel=1e-12)
        assert cp.k2 == pytest.approx(1.0, rel=1e-12)

    def test_flat_family_is_unit_sphere(self):
        # upper branch of the unit circle: H = +1, K = +1 under sigma = +1
        prof = CassiniOval(0.0)
        for r in (0.1, 0.5, 0.85):
            cp = curvature_point(prof, r)
            assert cp.H == pytest.approx(SIGN_CONVENTION * 1.0, abs=1e-10)
            assert cp.K == pytest.approx(1.0, abs=1e-10)

    def test_curvatures_recompute_from_fields(self):
        prof = CassiniOval(0.6)
        cp = curvature_point(prof, 0.5)
        H = -0.5 * (math.cos(cp.psi) * cp.dpsi_dr + math.sin(cp.psi) / cp.r)
        K = math.cos(cp.psi) * math.sin(cp.psi) * cp.dpsi_dr / cp.r
        assert cp.H == pytest.approx(H, abs=0)
        assert cp.K == pytest.approx(K, abs=0)

    def test_axis_needs_flag(self):
        prof = CassiniOval(0.5)
        with pytest.raises(SingularAxis):
            curvature_point(prof, 0.0)
        cp = curvature_point(prof, 0.0, axis_limit=True)
        u1 = prof.u1(0.0)
        assert cp.H == pytest.approx(-SIGN_CONVENTION * u1, rel=1e-13)
        assert cp.K == pytest.approx(u1 * u1, rel=1e-13)

    def test_axis_limit_continuity(self):
        prof = CassiniOval(0.8)
        cp0 = curvature_point(prof, 0.0, axis_limit=True)
        cp_eps = curvature_point(prof, 1e-6)
        assert cp_eps.H == pytest.approx(cp0.H, rel=1e-5)
        assert cp_eps.K == pytest.approx(cp0.K, rel=1e-5)

    def test_biconcave_saddle_region(self):
        # for eps > 1/sqrt(2) the surface is dimpled: between the slope
        # maximum and the equator bump u > 0 while u' < 0, so K < 0 there
        prof = CassiniOval(0.8)
        lo, hi = prof.domain.margined(0.02)
        saddle = [
            r
            for r in np.linspace(lo, hi, 200)
            if prof.u(r) > 0 and prof.u1(r) < 0
        ]
        assert saddle, "expected a saddle annulus for a biconcave profile"
        r = saddle[len(saddle) // 2]
        cp = curvature_point(prof, r)
        assert cp.K < 0
        # cross-check against the slope-only expression for K
        u, u1 = prof.u(r), prof.u1(r)
        assert cp.K == pytest.approx(u * u1 / (r * (1 + u * u) ** 2), rel=1e-12)
        # and against a finite-difference evaluation of psi
        h = 1e-6
        psi = lambda rr: SIGN_CONVENTION * math.atan(prof.u(rr))
        dpsi = (psi(r + h) - psi(r - h)) / (2 * h)
        K_fd = math.cos(psi(r)) * math.sin(psi(r)) * dpsi / r
        assert cp.K == pytest.approx(K_fd, rel=1e-8)


class TestThirdDerivative:
    def test_exact_export_against_finite_difference(self):
        rng = np.random.default_rng(303)
        prof = CassiniOval(0.6)
        h = 1e-5 * prof.domain.width
        lo, hi = prof.domain.margined(0.08)
        for r in rng.uniform(lo, hi, size=50):
            fd = (prof.u2(r + h) - prof.u2(r - h)) / (2 * h)
            assert prof.u3(r) == pytest.approx(fd, rel=1e-5, abs=1e-5)

    def test_sphere_u3(self):
        prof = SphereProfile(1.0)
        h = 1e-6
        for r in (0.2, 0.6):
            fd = (prof.u2(r + h) - prof.u2(r - h)) / (2 * h)
            assert prof.u3(r) == pytest.approx(fd, rel=1e-7)
