"""Tour of the Cassini profile family: domains, heights, slopes, curvatures.

The family is parameterized by the biconcavity eps >= 0.  At eps = 0 the
profile is the unit circle (a round sphere after revolution); the surface
flattens as eps grows, dimples beyond eps = 1/sqrt(2), pinches into a
lemniscate at eps = 1, and splits into a torus-like figure for eps > 1.
"""

import numpy as np

from memshape import CassiniOval, curvature_point, domain_of

print(__doc__)

print("radial domains (open at the rim, axis endpoint closed while eps < 1):")
for eps in (0.0, 0.5, 0.8, 1.0, 1.5, 2.0):
    dom = domain_of(eps)
    print(f"  eps={eps:4.2f}: ({dom.r_min:.6f}, {dom.r_max:.6f})")

print("\nheights and slopes along the upper branch, eps = 0.8:")
oval = CassiniOval(0.8)
lo, hi = oval.domain.margined(0.02)
print(f"  {'r':>6} {'z':>10} {'u=dz/dr':>10} {'u_prime':>10}")
for r in np.linspace(lo, hi, 9):
    print(f"  {r:6.3f} {oval.z(r):10.6f} {oval.u(r):10.4f} {oval.u1(r):10.4f}")

print("\ncurvatures: the dimpled surface has a negative-Gauss saddle annulus")
print(f"  {'r':>6} {'psi':>9} {'H':>9} {'K':>9}")
for r in np.linspace(lo, hi, 9):
    cp = curvature_point(oval, r)
    print(f"  {r:6.3f} {cp.psi:9.4f} {cp.H:9.4f} {cp.K:9.4f}")

print("\nat the axis the 1/r quantities are served through analytic limits:")
cp0 = curvature_point(oval, 0.0, axis_limit=True)
print(f"  r=0 (limit): psi={cp0.psi}, H={cp0.H:.6f}, K={cp0.K:.6f}")

print("\nthe eps = 0 member is the unit sphere: H = +1, K = +1 identically")
circle = CassiniOval(0.0)
for r in (0.2, 0.5, 0.8):
    cp = curvature_point(circle, r)
    print(f"  r={r}: H={cp.H:+.12f}, K={cp.K:+.12f}")
