#!/usr/bin/env python3
"""The regularized copy of a curve and its energy certificates.

Running the entropy flow for a tent-profiled vertical time
h_eps(t) = eps min(t, 1-t) at every node of a curve produces a smoothed
copy with the same endpoints whose entropic action is controlled by

    A(c~) + eps^2 I(c~) <= e^{lam^- eps} A(c) - 2 eps E(c~_1/2)
                           + eps (E(c_0) + E(c_1)).

That single inequality drives everything downstream: it makes c~ a
recovery sequence for the Gamma-convergence of the entropic cost, bounds
the solver warm start, and (applied to geodesics, at order eps) extracts
lambda-convexity of the entropy from contractivity of the flow.  The
script certifies it numerically on the Gaussian geodesic, together with
the two-point estimate it is integrated from.

Run:  python3 demos/recovery_sequence.py
"""

import numpy as np

from entrogeo import Density1DBackend, EntropyKind, GridDensity, HatFunction, geodesic_curve
from entrogeo.regularizer import (
    build,
    discrete_estimate_residual,
    pointwise_estimate_residual,
    recovery_gap,
)

backend = Density1DBackend(EntropyKind.boltzmann())
n, dx, x0 = 256, 22.0 / 256, -10.0
a = GridDensity.gaussian(0.0, 1.0, n, dx, x0)
b = GridDensity.gaussian(2.0, 2.0, n, dx, x0)
base = geodesic_curve(backend, a, b, 64)

print("== the smoothed copy ==")
eps = 0.1
reg = build(backend, base, HatFunction.with_slope(eps))
print(f"  eps = {eps}: endpoints preserved bitwise: "
      f"{reg.tilde.points[0] is base.points[0] and reg.tilde.points[-1] is base.points[-1]}")
mid = reg.tilde.points[32]
ref = GridDensity.gaussian(1.0, np.sqrt(2.25 + eps), n, dx, x0)
print(f"  midpoint after h(1/2) = eps/2 of heat flow vs N(1, 2.25 + eps): "
      f"L1 = {float(np.sum(np.abs(mid.rho - ref.rho)) * dx):.2e}")
sup = max(backend.distance(p, q) for p, q in zip(reg.tilde.points, base.points))
print(f"  uniform distance to the base curve: {sup:.4f} (shrinks like eps)")

print("\n== two-point smoothing estimate over node pairs ==")
worst = max(
    discrete_estimate_residual(backend, reg, i, j)
    for i in range(65) for j in range(i + 1, 65)
)
print(f"  worst residual over all 2080 pairs: {worst:.2e}  (<= 0 up to grid error)")
worst_pw = max(
    pointwise_estimate_residual(backend, reg, i)
    for i in range(1, 64) if abs(i - 32) > 1
)
print(f"  worst pointwise residual (away from the tent kink): {worst_pw:.2e}")

print("\n== integrated recovery bound ==")
print("    eps     RHS - LHS  (nonnegative = certified)")
for e in (0.2, 0.1, 0.05):
    print(f"   {e:5.2f}   {recovery_gap(backend, base, e):+.4e}")
print("  the bound closes as eps -> 0: the smoothed geodesics realize the")
print("  Gamma-limsup inequality for the entropic cost")
