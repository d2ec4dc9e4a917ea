"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here, nothing is deferred to calibration.
"""

import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from memshape.cli import main
from memshape.energy import fit_parameters, helfrich_energy, surface_area, enclosed_volume
from memshape.errors import ResidueInT
from memshape.exact.mpoly import MPoly
from memshape.exact.theorem import (
    SurdValue,
    cassini_u3_callback,
    clear_radicals,
    compare_to_reference,
    solve_h3_system,
    verify_theorem_symbolic,
)
from memshape.geometry import CassiniOval, SphereProfile, cassini_u, cassini_u1_u2, domain_of
from memshape.residuals import (
    MembraneParams,
    residual_psi_form,
    residual_third_order,
    residual_u_form,
    resolve_sign_convention,
    solve_pressure_for_sphere,
)
from memshape.cmc import build_composite, composite_metrics


def report(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {criterion}" + (f" -- {detail}" if detail else ""))
    assert ok, f"{criterion}: {detail}"


def test_criterion_01_theorem_reproduction_exact():
    start = time.time()
    verdict = verify_theorem_symbolic()
    elapsed = time.time() - start
    sol = verdict.system
    root_a = sol.root_from_r3.quartic
    root_b = sol.root_from_r1.quartic
    exact_ok = root_a == Fraction(2, 51) and isinstance(root_b, SurdValue)
    exact_ok = exact_ok and (root_b.add, root_b.radicand, root_b.den) == (-21, 537, 48)
    # decimal agreement with the published closed forms, 1e-12
    eps_a = sol.root_from_r3.epsilon_float()
    eps_b = sol.root_from_r1.epsilon_float()
    closed_a = (2.0 / 51.0) ** 0.25
    closed_b = 0.5 * ((1.0 / 3.0) * (-21.0 + math.sqrt(537.0))) ** 0.25
    decimals_ok = abs(eps_a - closed_a) < 1e-12 and abs(eps_b - closed_b) < 1e-12
    ok = (
        verdict.verdict == "CONTRADICTION"
        and elapsed < 60.0
        and exact_ok
        and decimals_ok
    )
    report(
        "criterion 1: symbolic verdict CONTRADICTION with exact roots",
        ok,
        f"{elapsed:.2f}s, eps^4 = 2/51 and (-21+sqrt(537))/48",
    )


def test_criterion_02_h_polynomials_match_transcription():
    cleared = clear_radicals()
    rep = compare_to_reference(cleared)
    eps, c0, P = MPoly.var("eps"), MPoly.var("c0"), MPoly.var("P")
    anchor_r5 = cleared.h3.coeff_of("r", 5) == 2 * P * eps**2 - 40 * c0 * eps**4
    h1_00 = cleared.h1.subs_var("c0", Fraction(0)).subs_var("P", Fraction(0))
    anchor_r7 = h1_00.coeff_of("r", 7) == -10 * eps**4
    subst = solve_h3_system(cleared).pressure_substitution == 20 * c0 * eps**2
    ok = rep.all_matched and rep.scale is not None and anchor_r5 and anchor_r7 and subst
    report(
        "criterion 2: H1-H4 match transcription term-for-term",
        ok,
        f"scale={rep.scale}, mismatches={rep.total_mismatches()}",
    )


def test_criterion_03_radical_shape_exact():
    try:
        clear_radicals()
        ok, detail = True, "all four t-bearing components identically zero"
    except ResidueInT as exc:
        ok, detail = False, str(exc)
    report("criterion 3: cleared residual has no t-components", ok, detail)


def test_criterion_04_sphere_equilibria():
    rng = np.random.default_rng(2024)
    start = time.time()
    worst = 0.0
    for _ in range(100):
        a = rng.uniform(0.2, 5.0)
        c0 = rng.uniform(-3.0, 3.0)
        lam = rng.uniform(-3.0, 3.0)
        branch, orientation = (+1, "II") if rng.random() < 0.5 else (-1, "I")
        P = solve_pressure_for_sphere(a, c0, lam, orientation)
        params = MembraneParams(c0=c0, lambda_bar=lam, p_bar=P)
        prof = SphereProfile(a, branch=branch)
        for r in np.linspace(0.05 * a, 0.95 * a, 16):
            for form in (residual_u_form, residual_psi_form, residual_third_order):
                worst = max(worst, abs(form(prof, params, float(r))))
    elapsed = time.time() - start
    ok = worst <= 1e-8 and elapsed < 5.0
    report(
        "criterion 4: all three forms vanish on 100 random constrained spheres",
        ok,
        f"sup={worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_05_cross_form_agreement():
    sigma = resolve_sign_convention()
    rng = np.random.default_rng(777)
    worst = 0.0
    for _ in range(1000):
        eps = rng.uniform(0.0, 1.2)
        prof = CassiniOval(eps)
        lo, hi = prof.domain.margined(0.03)
        r = rng.uniform(lo, hi)
        params = MembraneParams(
            c0=rng.uniform(-2, 2), lambda_bar=rng.uniform(-2, 2), p_bar=rng.uniform(-2, 2)
        )
        a = residual_u_form(prof, params, r)
        b = residual_psi_form(prof, params, r, sigma=sigma)
        worst = max(worst, abs(a - b) / (1.0 + abs(a)))
    ok = worst <= 1e-7 and sigma == 1
    report(
        "criterion 5: psi-form vs u-form on 1000 Cassini samples",
        ok,
        f"worst rel diff {worst:.2e} under sigma={sigma:+d}",
    )


def test_criterion_06_quadrature_anchors():
    timings = {}
    t0 = time.time()
    area, _ = surface_area(CassiniOval(0.0))
    timings["area"] = time.time() - t0
    t0 = time.time()
    vol, _ = enclosed_volume(CassiniOval(0.0))
    timings["volume"] = time.time() - t0
    t0 = time.time()
    bend = helfrich_energy(CassiniOval(0.0), MembraneParams()).bending
    timings["bending"] = time.time() - t0
    ok = (
        abs(area - 4 * math.pi) < 1e-6 * 4 * math.pi
        and abs(vol - 4 * math.pi / 3) < 1e-6 * 4 * math.pi / 3
        and abs(bend - 16 * math.pi) < 1e-6 * 16 * math.pi
        and all(t < 1.0 for t in timings.values())
    )
    report(
        "criterion 6: flat-family anchors 4pi, 4pi/3, 16pi",
        ok,
        f"area={area:.9f}, volume={vol:.9f}, bending={bend:.9f}",
    )


def test_criterion_07_numeric_theorem_shadow():
    start = time.time()
    results = []
    for eps in [round(0.1 * k, 1) for k in range(1, 13)]:
        fr = fit_parameters(eps)
        results.append((eps, fr.l2_residual, fr.quad_error))
    elapsed = time.time() - start
    positive = all(l2 > 0 and l2 * l2 > 10.0 * err for _, l2, err in results)
    ok = positive and elapsed < 120.0
    worst = min(l2 for _, l2, _ in results)
    report(
        "criterion 7: best-fit defect strictly positive on eps in {0.1..1.2}",
        ok,
        f"min l2={worst:.3e}, sweep {elapsed:.1f}s",
    )


def test_criterion_08_derivative_oracles():
    rng = np.random.default_rng(4242)
    u3 = cassini_u3_callback()
    worst = {"u1": 0.0, "u2": 0.0, "u3": 0.0}
    n = 0
    while n < 1000:
        eps = rng.uniform(0.0, 1.2)
        dom = domain_of(eps)
        lo, hi = dom.margined(0.05)
        r = rng.uniform(lo, hi)
        dist = min(r - dom.r_min, dom.r_max - r)
        u1, u2 = cassini_u1_u2(r, eps)
        h1 = min(1e-6, 0.01 * dist)
        fd1 = (cassini_u(r + h1, eps) - cassini_u(r - h1, eps)) / (2 * h1)
        h2 = min(1e-4, 0.01 * dist)
        fd2 = (cassini_u(r + h2, eps) - 2 * cassini_u(r, eps) + cassini_u(r - h2, eps)) / h2**2
        fd3 = (cassini_u1_u2(r + h2, eps)[1] - cassini_u1_u2(r - h2, eps)[1]) / (2 * h2)
        worst["u1"] = max(worst["u1"], abs(u1 - fd1) / (1.0 + abs(fd1)))
        worst["u2"] = max(worst["u2"], abs(u2 - fd2) / (1.0 + abs(fd2)))
        worst["u3"] = max(worst["u3"], abs(u3(r, eps) - fd3) / (1.0 + abs(fd3)))
        n += 1
    ok = worst["u1"] <= 1e-7 and worst["u2"] <= 1e-5 and worst["u3"] <= 1e-3
    report(
        "criterion 8: analytic u', u'', u''' match finite differences",
        ok,
        f"rel errors u'={worst['u1']:.1e}, u''={worst['u2']:.1e}, u'''={worst['u3']:.1e}",
    )


def test_criterion_09_cmc_model():
    comp = build_composite(kappa0=-1.0, a=0.5, r_inflection=0.8)
    h_dev = 0.0
    for r in np.linspace(0.05, 0.79, 12):
        h_dev = max(h_dev, abs(comp.inner.mean_curvature_check(float(r)) - comp.inner.h_const))
    for r in np.linspace(0.81, comp.r_rim * 0.999, 12):
        h_dev = max(h_dev, abs(comp.outer.mean_curvature_check(float(r)) - comp.outer.h_const))
    sphere = composite_metrics(build_composite(kappa0=-1.0, a=0.0, r_inflection=0.8))
    sphere_ok = (
        abs(sphere.area - 4 * math.pi) < 1e-8 * 4 * math.pi
        and abs(sphere.volume - 4 * math.pi / 3) < 1e-8 * 4 * math.pi / 3
    )
    matched = composite_metrics(comp, MembraneParams(c0=-2.0))
    bend_ok = abs(matched.bending - 4 * 0.25 * matched.area) < 1e-8 * matched.bending
    ok = h_dev <= 1e-10 and sphere_ok and bend_ok
    report(
        "criterion 9: constant-H branches, sphere metrics, bending identity",
        ok,
        f"H dev={h_dev:.1e}, bending={matched.bending:.9f} vs 4a^2*A={matched.area:.9f}*1",
    )


def test_criterion_10_cli_determinism(tmp_path):
    argv = [
        "residual",
        "--epsilon",
        "0.5",
        "--c0",
        "0.4",
        "--lambda",
        "-0.2",
        "--pressure",
        "0.9",
        "--n",
        "48",
        "--output",
    ]
    assert main(argv + [str(tmp_path / "one")]) == 0
    assert main(argv + [str(tmp_path / "two")]) == 0
    body1 = (tmp_path / "one.csv").read_bytes()
    body2 = (tmp_path / "two.csv").read_bytes()
    ok = body1 == body2 and len(body1) > 0
    report(
        "criterion 10: identical CLI runs give byte-identical CSV bodies",
        ok,
        f"{len(body1)} bytes",
    )
