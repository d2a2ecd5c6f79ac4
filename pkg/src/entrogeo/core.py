"""Discrete curves, space backends, and the three action functionals.

A *backend* bundles the data of a metric space ``(X, d)`` together with an
entropy functional ``E``, its metric slope ``|dE|``, and the EVI_lambda
gradient-flow semigroup ``S_t`` of ``E``.  Curves are finite time grids on
``[0, 1]`` carrying one state per node.  On top of these the module defines

* the kinetic action  ``A(c)  = 1/2 * sum d(c_i, c_{i+1})^2 / dt_i``
  (discrete 2-energy, the Riemann-sum form of ``1/2 int |c'|^2 dt``),
* the Fisher action   ``I(c)  = trapezoid of 1/2 |dE|^2(c_t)``,
* the entropic action ``A_eps = A + eps^2 * I``,

whose minimization over curves with fixed endpoints is the dynamical
Schrodinger problem solved in :mod:`entrogeo.solver`.

All values here are immutable after construction and every operation is a
pure function, so everything is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidCurve, SlopeUndefined

__all__ = [
    "Curve",
    "FisherQuadrature",
    "HatFunction",
    "SpaceBackend",
    "fisher_action",
    "fisher_quadrature",
    "kinetic_action",
    "hat_eval",
    "schrodinger_action",
]


class SpaceBackend:
    """Contract every concrete state space implements.

    ``lam`` is the contraction parameter of the EVI flow: the semigroup
    satisfies ``d(S_t x, S_t y) <= exp(-lam * t) * d(x, y)``.  Subclasses
    provide the five geometric operations below; all must be pure and
    ``flow(x, 0)`` must return ``x`` unchanged.
    """

    lam: float = 0.0

    def distance(self, a, b) -> float:
        raise NotImplementedError

    def geodesic(self, a, b, theta: float):
        raise NotImplementedError

    def entropy(self, x) -> float:
        raise NotImplementedError

    def slope(self, x) -> float:
        raise NotImplementedError

    def flow(self, x, s: float):
        raise NotImplementedError

    def check_point(self, x) -> None:
        """Raise InvalidCurve if ``x`` is not a state of this space."""
        raise NotImplementedError

    def same_space(self, a, b) -> bool:
        """Whether two points share payload kind and shape."""
        raise NotImplementedError


@dataclass(frozen=True)
class Curve:
    """A time grid ``0 = t_0 < ... < t_N = 1`` with one point per node."""

    times: np.ndarray
    points: tuple

    def __init__(self, times, points):
        times = np.asarray(times, dtype=float)
        points = tuple(points)
        if times.ndim != 1 or times.size < 2:
            raise InvalidCurve("need at least two time nodes")
        if times[0] != 0.0 or times[-1] != 1.0:
            raise InvalidCurve("time grid must start at 0 and end at 1 exactly")
        if np.any(np.diff(times) <= 0):
            raise InvalidCurve("time grid must be strictly increasing")
        if len(points) != times.size:
            raise InvalidCurve(
                f"{len(points)} points for {times.size} time nodes"
            )
        times.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    @staticmethod
    def uniform(points: Sequence) -> "Curve":
        """Curve on the uniform grid with ``len(points)`` nodes."""
        pts = tuple(points)
        return Curve(np.linspace(0.0, 1.0, len(pts)), pts)

    @property
    def n_intervals(self) -> int:
        return self.times.size - 1

    def node_nearest(self, t: float) -> int:
        return int(np.argmin(np.abs(self.times - t)))


def geodesic_curve(backend: SpaceBackend, x, y, n_intervals: int) -> Curve:
    """Constant-speed backend geodesic sampled on a uniform grid."""
    ts = np.linspace(0.0, 1.0, n_intervals + 1)
    pts = [x] + [backend.geodesic(x, y, t) for t in ts[1:-1]] + [y]
    return Curve(ts, pts)


def _check_curve(backend: SpaceBackend, curve: Curve) -> None:
    first = curve.points[0]
    backend.check_point(first)
    for p in curve.points[1:]:
        if not backend.same_space(first, p):
            raise InvalidCurve("curve mixes points from different state spaces")


def kinetic_action(backend: SpaceBackend, curve: Curve) -> float:
    """Discrete 2-energy ``1/2 sum_i d(c_i, c_{i+1})^2 / dt_i``.

    For a constant-speed geodesic this equals ``1/2 d(c_0, c_1)^2`` on any
    grid; for arbitrary curves it dominates that value (Cauchy-Schwarz).
    """
    _check_curve(backend, curve)
    dts = np.diff(curve.times)
    total = 0.0
    for i, dt in enumerate(dts):
        chord = backend.distance(curve.points[i], curve.points[i + 1])
        total += chord * chord / dt
    return 0.5 * total


@dataclass(frozen=True)
class FisherQuadrature:
    """Fisher action value plus a flag for dropped infinite-slope endpoints."""

    value: float
    endpoints_dropped: bool


def fisher_quadrature(backend: SpaceBackend, curve: Curve) -> FisherQuadrature:
    """Trapezoid quadrature of ``1/2 |dE|^2`` along the curve.

    Endpoint slopes may legitimately be infinite (the differential estimate
    behind this functional only controls the open interval); in that case
    the corresponding trapezoid weight is dropped and flagged.  An infinite
    slope at an interior node makes the action itself infinite.
    """
    _check_curve(backend, curve)
    ts = curve.times
    slopes = np.empty(ts.size)
    for i, p in enumerate(curve.points):
        s = backend.slope(p)
        if math.isnan(s) or s < 0:
            raise SlopeUndefined(f"slope undefined at node {i}")
        slopes[i] = s
    weights = np.zeros(ts.size)
    dts = np.diff(ts)
    weights[:-1] += 0.5 * dts
    weights[1:] += 0.5 * dts

    dropped = False
    for i in (0, ts.size - 1):
        if math.isinf(slopes[i]):
            weights[i] = 0.0
            slopes[i] = 0.0
            dropped = True
    if np.any(np.isinf(slopes[1:-1])):
        return FisherQuadrature(math.inf, dropped)
    return FisherQuadrature(0.5 * float(np.sum(weights * slopes**2)), dropped)


def fisher_action(backend: SpaceBackend, curve: Curve) -> float:
    """Halved Fisher information ``1/2 int |dE|^2(c_t) dt`` (trapezoid)."""
    return fisher_quadrature(backend, curve).value


def schrodinger_action(backend: SpaceBackend, curve: Curve, eps: float) -> float:
    """Entropic action ``A + eps^2 * I`` of the dynamical Schrodinger problem."""
    if eps < 0:
        raise DomainError(f"eps must be nonnegative, got {eps}")
    kin = kinetic_action(backend, curve)
    if eps == 0.0:
        return kin
    return kin + eps * eps * fisher_action(backend, curve)


@dataclass(frozen=True)
class HatFunction:
    """Piecewise-linear bump ``t -> eps * H_theta(t)`` on ``[0, 1]``.

    ``H_theta`` rises linearly from 0 at ``t = 0`` to 1 at ``t = theta`` and
    falls back to 0 at ``t = 1``, so the peak value is ``eps`` and
    ``int_0^1 eps * H_theta = eps / 2`` for every ``theta``.  These bumps are
    the vertical-time profiles used to regularize curves by running the
    entropy flow for time ``h(t)`` at each node.
    """

    eps: float
    theta: float = 0.5

    def __post_init__(self):
        if self.eps < 0:
            raise DomainError(f"hat height must be nonnegative, got {self.eps}")
        if not 0.0 < self.theta < 1.0:
            raise DomainError(f"hat peak must lie in (0, 1), got {self.theta}")

    @staticmethod
    def with_slope(eps: float) -> "HatFunction":
        """The symmetric tent ``t -> eps * min(t, 1 - t)`` with side slopes
        ``+-eps``: peak ``eps / 2`` at ``theta = 1/2``.  This is the profile
        of the canonical recovery sequence, so naming it by its slope avoids
        the factor-of-two trap between peak height and side slope."""
        if eps < 0:
            raise DomainError(f"slope scale must be nonnegative, got {eps}")
        return HatFunction(eps=0.5 * eps, theta=0.5)

    def __call__(self, t: float) -> float:
        return hat_eval(self, t)

    def on_grid(self, times: np.ndarray) -> np.ndarray:
        return np.array([hat_eval(self, float(t)) for t in np.asarray(times)])


def hat_eval(h: HatFunction, t: float) -> float:
    """Evaluate ``eps * H_theta`` at ``t in [0, 1]``."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"hat functions live on [0, 1], got t={t}")
    if t <= h.theta:
        return h.eps * t / h.theta
    return h.eps * (1.0 - t) / (1.0 - h.theta)
