"""Entropic regularization of curves and its energy certificates.

Given a curve ``c`` and a vertical-time profile ``h >= 0`` vanishing at the
endpoints, the regularized copy runs the entropy flow for time ``h(t)`` at
every node:

    c~_t = S_{h(t)} c_t .

Smoothing each node separately costs kinetic energy in a precisely
quantified way.  This module evaluates the defect of those estimates on a
backend, three energy certificates plus the convexity extraction:

* ``discrete_estimate_residual``  the exact two-point inequality relating
  the chord of ``c~`` between any two times to the chord of ``c``, the
  slope at the more-smoothed node, and the entropy increment,
* ``pointwise_estimate_residual`` its differential (central-difference)
  version ``1/2|c~'|^2 + 1/2 h'^2 |dE|^2(c~) + h' dE(c~)/dt
  <= 1/2 e^{-2 lam h} |c'|^2``,
* ``recovery_gap``  the integrated bound for the tent profile
  ``h_eps(t) = eps min(t, 1-t)``:
  ``A(c~) + eps^2 I(c~) <= e^{lam^- eps} A(c) - 2 eps E(c~_{1/2})
  + eps (E(c_0) + E(c_1))``, which also shows the regularized geodesic is an
  eps-good competitor for the Schrodinger problem (Gamma-limsup bound),
* ``convexity_certificate``  lambda-convexity of the entropy along
  backend geodesics, the property the regularization machinery extracts
  from contractivity of the flow.

Residuals are ``LHS - RHS`` for the inequalities (so defects are positive)
and ``RHS - LHS`` for the recovery bound (gap should be nonnegative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .core import (
    Curve,
    HatFunction,
    SpaceBackend,
    fisher_action,
    kinetic_action,
)
from .errors import DomainError, EndpointEntropyInfinite

__all__ = [
    "RegularizedCurve",
    "build",
    "convexity_certificate",
    "discrete_estimate_residual",
    "pointwise_estimate_residual",
    "recovery_gap",
]

HProfile = Union[HatFunction, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class RegularizedCurve:
    """A base curve, its vertical-time profile, and the smoothed copy."""

    base: Curve
    h: np.ndarray
    tilde: Curve

    @property
    def times(self) -> np.ndarray:
        return self.base.times


def _h_values(h: HProfile, times: np.ndarray) -> np.ndarray:
    if isinstance(h, HatFunction):
        vals = h.on_grid(times)
    else:
        vals = np.asarray(h, dtype=float).copy()
        if vals.shape != times.shape:
            raise DomainError("per-node h values must match the time grid")
    if np.any(vals < 0):
        raise DomainError("vertical times h must be nonnegative")
    return vals


def build(backend: SpaceBackend, base: Curve, h: HProfile) -> RegularizedCurve:
    """Flow every node of ``base`` for its vertical time ``h(t_i)``.

    Nodes with ``h = 0`` are reused as-is, so vanishing endpoint profiles
    preserve the endpoints bitwise.
    """
    hv = _h_values(h, base.times)
    pts = [
        p if hi == 0.0 else backend.flow(p, float(hi))
        for p, hi in zip(base.points, hv)
    ]
    hv.setflags(write=False)
    return RegularizedCurve(base, hv, Curve(base.times, pts))


def _cosh_coef(lam: float, dh: float) -> float:
    """(e^{lam dh} + e^{-lam dh} - 2) / (2 lam^2), with its lam -> 0 limit."""
    if abs(lam) < 1e-8:
        return 0.5 * dh * dh
    return (math.exp(lam * dh) + math.exp(-lam * dh) - 2.0) / (2.0 * lam * lam)


def _exp_coef(lam: float, dh_plus: float, dt_plus: float) -> float:
    """(1 - e^{-lam (h+ - h-)}) / (lam (t+ - t-)), with its lam -> 0 limit."""
    if abs(lam) < 1e-8:
        return dh_plus / dt_plus
    return (1.0 - math.exp(-lam * dh_plus)) / (lam * dt_plus)


def discrete_estimate_residual(backend: SpaceBackend, reg: RegularizedCurve,
                               i: int, j: int) -> Optional[float]:
    """LHS - RHS of the exact two-point smoothing estimate for nodes i < j.

    Returns ``None`` (not applicable) when the slope at the more-smoothed
    node is infinite while the vertical times differ, the one case the
    estimate's ``inf * 0 = 0`` convention does not cover.  When both
    vertical times vanish the inequality degenerates to the trivial
    equality ``d(c_1, c_0)^2 <= d(c_1, c_0)^2`` and the residual is zero.
    """
    N = reg.times.size - 1
    if not 0 <= i < j <= N:
        raise DomainError(f"need 0 <= i < j <= {N}, got ({i}, {j})")
    lam = backend.lam
    t0, t1 = float(reg.times[i]), float(reg.times[j])
    h0, h1 = float(reg.h[i]), float(reg.h[j])
    dt = t1 - t0

    if h1 >= h0:
        ip, im = j, i
    else:
        ip, im = i, j
    hp, hm = (h1, h0) if h1 >= h0 else (h0, h1)
    tp, tm = float(reg.times[ip]), float(reg.times[im])

    slope_p = backend.slope(reg.tilde.points[ip])
    if math.isinf(slope_p):
        if h0 == h1:
            slope_term = 0.0  # the inf * 0 = 0 convention
        else:
            return None
    else:
        slope_term = slope_p**2 * _cosh_coef(lam, h1 - h0) / (dt * dt)

    d_tilde = backend.distance(reg.tilde.points[i], reg.tilde.points[j])
    e1 = backend.entropy(reg.tilde.points[j])
    e0 = backend.entropy(reg.tilde.points[i])
    if h0 == h1:
        energy_term = 0.0  # exponential factor vanishes with h+ = h-
    else:
        energy_term = _exp_coef(lam, hp - hm, tp - tm) * (e1 - e0) / dt

    lhs = 0.5 * (d_tilde / dt) ** 2 + slope_term + energy_term
    d_base = backend.distance(reg.base.points[i], reg.base.points[j])
    rhs = 0.5 * math.exp(-lam * (h0 + h1)) * (d_base / dt) ** 2
    return lhs - rhs


def pointwise_estimate_residual(backend: SpaceBackend, reg: RegularizedCurve,
                                i: int) -> float:
    """Central-difference residual of the differential smoothing estimate
    at interior node ``i`` (speed, entropy derivative, and h' all over the
    span ``[t_{i-1}, t_{i+1}]``)."""
    N = reg.times.size - 1
    if not 0 < i < N:
        raise DomainError(f"need an interior node, got {i} of 0..{N}")
    lam = backend.lam
    span = float(reg.times[i + 1] - reg.times[i - 1])
    speed_tilde = backend.distance(reg.tilde.points[i - 1], reg.tilde.points[i + 1]) / span
    hprime = (reg.h[i + 1] - reg.h[i - 1]) / span
    dedt = (
        backend.entropy(reg.tilde.points[i + 1])
        - backend.entropy(reg.tilde.points[i - 1])
    ) / span
    lhs = (
        0.5 * speed_tilde**2
        + 0.5 * hprime**2 * backend.slope(reg.tilde.points[i]) ** 2
        + hprime * dedt
    )
    speed_base = backend.distance(reg.base.points[i - 1], reg.base.points[i + 1]) / span
    rhs = 0.5 * math.exp(-2.0 * lam * float(reg.h[i])) * speed_base**2
    return lhs - rhs


def recovery_gap(backend: SpaceBackend, base: Curve, eps: float) -> float:
    """RHS - LHS of the integrated recovery bound for ``h(t) = eps min(t, 1-t)``.

    LHS is the entropic action of the regularized curve, RHS the bound
    ``e^{lam^- eps} A(c) - 2 eps E(c~_{1/2}) + eps (E(c_0) + E(c_1))``.
    A nonnegative gap certifies the recovery sequence used both in the
    Gamma-limsup argument and as the solver warm start.
    """
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    e_ends = [backend.entropy(base.points[0]), backend.entropy(base.points[-1])]
    if not all(map(math.isfinite, e_ends)):
        raise EndpointEntropyInfinite(
            "recovery bound needs finite endpoint entropies; mollify first"
        )
    kin_base = kinetic_action(backend, base)
    if eps == 0.0:
        return 0.0
    reg = build(backend, base, HatFunction.with_slope(eps))
    lhs = kinetic_action(backend, reg.tilde) + eps**2 * fisher_action(backend, reg.tilde)
    lam_minus = max(-backend.lam, 0.0)
    mid = reg.tilde.points[base.node_nearest(0.5)]
    rhs = (
        math.exp(lam_minus * eps) * kin_base
        - 2.0 * eps * backend.entropy(mid)
        + eps * (e_ends[0] + e_ends[1])
    )
    return rhs - lhs


def convexity_certificate(backend: SpaceBackend, x, y, theta_grid) -> float:
    """Worst violation of lambda-convexity of E along the backend geodesic:

        E(g_theta) <= (1-theta) E(x) + theta E(y)
                      - lam/2 theta (1-theta) d(x, y)^2 .
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    if np.any((theta_grid < 0) | (theta_grid > 1)):
        raise DomainError("theta grid must lie in [0, 1]")
    lam = backend.lam
    ex, ey = backend.entropy(x), backend.entropy(y)
    d2 = backend.distance(x, y) ** 2
    worst = -math.inf
    for th in theta_grid:
        th = float(th)
        if th == 0.0 or th == 1.0:
            worst = max(worst, 0.0)
            continue
        e_mid = backend.entropy(backend.geodesic(x, y, th))
        bound = (1 - th) * ex + th * ey - 0.5 * lam * th * (1 - th) * d2
        worst = max(worst, e_mid - bound)
    return worst
