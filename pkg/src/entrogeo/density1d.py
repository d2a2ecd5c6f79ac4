"""Probability densities on a 1D grid with Wasserstein-2 geometry.

States are piecewise-constant densities on a uniform grid over an interval
(with no-flux walls) or a circle (periodic).  The W2 distance and geodesics
are computed through quantile functions: for piecewise-constant densities
with a positive floor the CDF is strictly increasing and piecewise linear,
so its inverse is piecewise linear as well and

    W2(a, b)^2 = int_0^1 |Qa(u) - Qb(u)|^2 du

is integrated *exactly* segment by segment (the integrand is quadratic
between merged quantile breakpoints).  On the circle the distance is
minimized over all n cut positions by brute force.

Two entropy functionals are supported, with their slopes and flows:

* Boltzmann      E = int rho log rho,  slope^2 = int (rho'/rho)^2 rho
  (the Fisher information), flow = heat equation  d_s rho = rho_xx,
* power law m>1  E = int rho^m/(m-1),  slope^2 = int |(U'(rho))'|^2 rho,
  flow = porous medium equation  d_s rho = (rho^m)_xx.

Both flows contract W2 with lambda = 0 on these flat domains.  Heat steps
are backward Euler with substep <= dx^2/2; the porous medium uses a
lagged-coefficient semi-implicit scheme.  Densities are clamped to the
floor and renormalized after every substep (log rho and 1/rho would blow
up otherwise).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .core import SpaceBackend
from .errors import DomainError, FlowDiverged, GridMismatch, InvalidCurve

__all__ = [
    "DENSITY_FLOOR",
    "Density1DBackend",
    "EntropyKind",
    "GridDensity",
    "entropy",
    "flow",
    "slope",
    "w2_distance",
    "w2_geodesic",
    "density_from_csv",
    "density_to_csv",
]

DENSITY_FLOOR = 1e-12

_BOUNDARIES = ("periodic", "no-flux")


def _project(rho: np.ndarray, dx: float, floor: float) -> np.ndarray:
    """Clamp to the floor and renormalize to unit mass.

    The second clamp fixes the values the renormalization pushed below the
    floor; the mass defect it reintroduces is O(n * floor * dx * 1e-9),
    far below the 1e-12 mass tolerance.
    """
    out = np.maximum(rho, floor)
    out = out / (out.sum() * dx)
    return np.maximum(out, floor)


@dataclass(frozen=True)
class GridDensity:
    """Unit-mass density on ``n`` cells of width ``dx`` starting at ``x0``."""

    rho: np.ndarray
    dx: float
    x0: float = 0.0
    boundary: str = "no-flux"
    floor: float = DENSITY_FLOOR

    def __init__(self, rho, dx, x0=0.0, boundary="no-flux",
                 floor=DENSITY_FLOOR, normalize=False):
        rho = np.asarray(rho, dtype=float).copy()
        if rho.ndim != 1 or rho.size < 2:
            raise DomainError("density needs a 1D array with >= 2 cells")
        if dx <= 0 or floor <= 0:
            raise DomainError("dx and floor must be positive")
        if boundary not in _BOUNDARIES:
            raise DomainError(f"boundary must be one of {_BOUNDARIES}")
        if normalize:
            rho = _project(rho, dx, floor)
        else:
            if np.any(rho < floor):
                raise DomainError("density below floor; pass normalize=True")
            mass = rho.sum() * dx
            if abs(mass - 1.0) > 1e-12:
                raise DomainError(f"density mass {mass!r} != 1")
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "dx", float(dx))
        object.__setattr__(self, "x0", float(x0))
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "floor", float(floor))

    @property
    def n(self) -> int:
        return self.rho.size

    @property
    def length(self) -> float:
        return self.n * self.dx

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.n) + 0.5) * self.dx

    @property
    def edges(self) -> np.ndarray:
        return self.x0 + np.arange(self.n + 1) * self.dx

    def with_rho(self, rho: np.ndarray) -> "GridDensity":
        return GridDensity(rho, self.dx, self.x0, self.boundary,
                           self.floor, normalize=True)

    def same_grid(self, other: "GridDensity") -> bool:
        return (
            isinstance(other, GridDensity)
            and self.n == other.n
            and self.boundary == other.boundary
            and math.isclose(self.dx, other.dx, rel_tol=1e-12, abs_tol=0.0)
            and math.isclose(self.x0, other.x0, rel_tol=0.0, abs_tol=1e-12 * self.length)
        )

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_function(fn: Callable[[np.ndarray], np.ndarray], n: int, dx: float,
                      x0: float = 0.0, boundary: str = "no-flux",
                      floor: float = DENSITY_FLOOR) -> "GridDensity":
        centers = x0 + (np.arange(n) + 0.5) * dx
        return GridDensity(fn(centers), dx, x0, boundary, floor, normalize=True)

    @staticmethod
    def gaussian(mean: float, sigma: float, n: int, dx: float, x0: float = 0.0,
                 boundary: str = "no-flux", floor: float = DENSITY_FLOOR) -> "GridDensity":
        if sigma <= 0:
            raise DomainError("sigma must be positive")
        pdf = lambda x: np.exp(-0.5 * ((x - mean) / sigma) ** 2) / (sigma * math.sqrt(2 * math.pi))
        return GridDensity.from_function(pdf, n, dx, x0, boundary, floor)

    @staticmethod
    def uniform(n: int, dx: float, x0: float = 0.0, boundary: str = "no-flux",
                floor: float = DENSITY_FLOOR) -> "GridDensity":
        L = n * dx
        return GridDensity(np.full(n, 1.0 / L), dx, x0, boundary, floor)

    @staticmethod
    def point_mass(cell: int, n: int, dx: float, x0: float = 0.0,
                   boundary: str = "no-flux", floor: float = DENSITY_FLOOR) -> "GridDensity":
        """All mass in one cell (up to the floor): the sharpest grid state."""
        rho = np.full(n, floor)
        rho[cell] = 1.0 / dx
        return GridDensity(rho, dx, x0, boundary, floor, normalize=True)


@dataclass(frozen=True)
class EntropyKind:
    """Selector for the entropy functional: Boltzmann or power law U_m."""

    name: str
    m: Optional[float] = None

    def __post_init__(self):
        if self.name == "boltzmann":
            if self.m is not None:
                raise DomainError("boltzmann entropy takes no exponent")
        elif self.name == "porous_medium":
            if self.m is None or self.m <= 1.0:
                raise DomainError("porous medium exponent must satisfy m > 1")
        else:
            raise DomainError(f"unknown entropy kind {self.name!r}")

    @staticmethod
    def boltzmann() -> "EntropyKind":
        return EntropyKind("boltzmann")

    @staticmethod
    def porous_medium(m: float) -> "EntropyKind":
        return EntropyKind("porous_medium", float(m))


# -- quantile machinery ----------------------------------------------------

def _cdf_nodes(d: GridDensity, rho: Optional[np.ndarray] = None):
    """Breakpoints ``(F_edges, x_edges)`` of the piecewise-linear quantile."""
    r = d.rho if rho is None else rho
    F = np.empty(d.n + 1)
    F[0] = 0.0
    np.cumsum(r * d.dx, out=F[1:])
    F /= F[-1]
    return F, d.edges


def _pairwise_quantile_l2sq(Fa, xa, Fb, xb) -> float:
    """Exact ``int_0^1 (Qa - Qb)^2 du`` for two piecewise-linear quantiles."""
    U = np.union1d(Fa, Fb)
    qa = np.interp(U, Fa, xa)
    qb = np.interp(U, Fb, xb)
    g = qa - qb
    du = np.diff(U)
    g0 = g[:-1]
    g1 = g[1:]
    # difference is linear per segment, so its square integrates exactly
    return float(np.sum(du * (g0 * g0 + g0 * g1 + g1 * g1) / 3.0))


def _rolled_cdf_nodes(d: GridDensity, cut: int):
    """CDF of the circle density unrolled onto ``[x0 + cut*dx, x0 + cut*dx + L]``."""
    r = np.roll(d.rho, -cut)
    F = np.empty(d.n + 1)
    F[0] = 0.0
    np.cumsum(r * d.dx, out=F[1:])
    F /= F[-1]
    x = (d.x0 + cut * d.dx) + np.arange(d.n + 1) * d.dx
    return F, x


def _require_same_grid(a: GridDensity, b: GridDensity):
    if not a.same_grid(b):
        raise GridMismatch("densities live on different grids")


def w2_distance(a: GridDensity, b: GridDensity) -> float:
    """Wasserstein-2 distance between two densities on the same grid."""
    _require_same_grid(a, b)
    if a.boundary == "no-flux":
        Fa, xa = _cdf_nodes(a)
        Fb, xb = _cdf_nodes(b)
        return math.sqrt(max(_pairwise_quantile_l2sq(Fa, xa, Fb, xb), 0.0))
    best = math.inf
    for cut in range(a.n):
        Fa, xa = _rolled_cdf_nodes(a, cut)
        Fb, xb = _rolled_cdf_nodes(b, cut)
        best = min(best, _pairwise_quantile_l2sq(Fa, xa, Fb, xb))
    return math.sqrt(max(best, 0.0))


def _best_cut(a: GridDensity, b: GridDensity) -> int:
    best, kbest = math.inf, 0
    for cut in range(a.n):
        Fa, xa = _rolled_cdf_nodes(a, cut)
        Fb, xb = _rolled_cdf_nodes(b, cut)
        v = _pairwise_quantile_l2sq(Fa, xa, Fb, xb)
        if v < best:
            best, kbest = v, cut
    return kbest


def _interval_geodesic_masses(Fa, xa, Fb, xb, theta: float, edges: np.ndarray):
    """Cell masses of the displacement interpolant with quantile
    ``(1-theta) Qa + theta Qb``, binned exactly onto ``edges``."""
    U = np.union1d(Fa, Fb)
    q = (1.0 - theta) * np.interp(U, Fa, xa) + theta * np.interp(U, Fb, xb)
    # q is strictly increasing, so this inverts it exactly edge by edge
    F_edges = np.interp(edges, q, U, left=0.0, right=1.0)
    return np.diff(F_edges)


def w2_geodesic(a: GridDensity, b: GridDensity, theta: float) -> GridDensity:
    """Displacement interpolation, re-binned to the common grid."""
    _require_same_grid(a, b)
    if not 0.0 <= theta <= 1.0:
        raise DomainError(f"theta must lie in [0, 1], got {theta}")
    if a.boundary == "no-flux":
        Fa, xa = _cdf_nodes(a)
        Fb, xb = _cdf_nodes(b)
        masses = _interval_geodesic_masses(Fa, xa, Fb, xb, theta, a.edges)
        return a.with_rho(masses / a.dx)
    cut = _best_cut(a, b)
    Fa, xa = _rolled_cdf_nodes(a, cut)
    Fb, xb = _rolled_cdf_nodes(b, cut)
    edges = xa
    masses = _interval_geodesic_masses(Fa, xa, Fb, xb, theta, edges)
    return a.with_rho(np.roll(masses, cut) / a.dx)


# -- entropy and slope -----------------------------------------------------

def entropy(kind: EntropyKind, d: GridDensity) -> float:
    r = d.rho
    if kind.name == "boltzmann":
        return float(np.sum(r * np.log(r)) * d.dx)
    m = kind.m
    return float(np.sum(r**m) * d.dx / (m - 1.0))


def _uprime(kind: EntropyKind, r: np.ndarray) -> np.ndarray:
    if kind.name == "boltzmann":
        return np.log(r) + 1.0
    m = kind.m
    return (m / (m - 1.0)) * r ** (m - 1.0)


def _with_ghosts(g: np.ndarray, boundary: str) -> np.ndarray:
    if boundary == "periodic":
        return np.concatenate([g[-1:], g, g[:1]])
    # reflecting ghosts: the no-flux wall sees zero gradient
    return np.concatenate([g[:1], g, g[-1:]])


def slope(kind: EntropyKind, d: GridDensity) -> float:
    """Metric slope of the entropy: ``sqrt( sum |D U'(rho)|^2 rho dx )``.

    ``D`` is the central difference on the cell centers.  For the Boltzmann
    entropy this is the square root of the discrete Fisher information.
    """
    g = _with_ghosts(_uprime(kind, d.rho), d.boundary)
    dg = (g[2:] - g[:-2]) / (2.0 * d.dx)
    val = float(np.sum(dg * dg * d.rho) * d.dx)
    return math.sqrt(max(val, 0.0))


# -- gradient flows --------------------------------------------------------

def _laplacian(n: int, dx: float, boundary: str, coeff: Optional[np.ndarray] = None):
    """Divergence-form operator ``div(a grad .)`` with face coefficients.

    ``coeff`` holds the n face values (periodic) or n-1 interior face values
    (no-flux); ``None`` means unit coefficients, i.e. the plain Laplacian.
    Rows sum to zero, so the implicit steps conserve mass exactly.
    """
    inv2 = 1.0 / (dx * dx)
    if boundary == "periodic":
        a = np.ones(n) if coeff is None else coeff  # face i sits between cells i and i+1
        lower = a * inv2
        diag = -(a + np.roll(a, 1)) * inv2
        mat = sp.diags([diag], [0], shape=(n, n), format="lil")
        idx = np.arange(n)
        mat[idx, (idx + 1) % n] += lower
        mat[(idx + 1) % n, idx] += lower
        return mat.tocsc()
    a = np.ones(n - 1) if coeff is None else coeff
    main = np.zeros(n)
    main[:-1] -= a * inv2
    main[1:] -= a * inv2
    off = a * inv2
    return sp.diags([off, main, off], [-1, 0, 1], format="csc")


def _face_values(r: np.ndarray, boundary: str) -> np.ndarray:
    if boundary == "periodic":
        return 0.5 * (r + np.roll(r, -1))
    return 0.5 * (r[:-1] + r[1:])


def flow(kind: EntropyKind, d: GridDensity, s: float) -> GridDensity:
    """Entropy gradient flow for time ``s``: heat or porous-medium equation."""
    if s < 0:
        raise DomainError("flow time must be nonnegative")
    if s == 0.0:
        return d
    n, dx = d.n, d.dx
    eye = sp.identity(n, format="csc")

    if kind.name == "boltzmann":
        cap = 0.5 * dx * dx
        nsub = max(1, int(math.ceil(s / cap)))
        ds = s / nsub
        lu = spla.splu(eye - ds * _laplacian(n, dx, d.boundary))
        r = d.rho.copy()
        for _ in range(nsub):
            r = lu.solve(r)
            if not np.all(np.isfinite(r)):
                raise FlowDiverged("heat step produced non-finite density")
            r = _project(r, dx, d.floor)
        return d.with_rho(r)

    m = kind.m
    cap = dx * dx / (m * float(np.max(d.rho)) ** (m - 1.0))
    nsub = max(1, int(math.ceil(s / cap)))
    ds = s / nsub
    r = d.rho.copy()
    for _ in range(nsub):
        a = m * _face_values(r, d.boundary) ** (m - 1.0)
        lu = spla.splu(eye - ds * _laplacian(n, dx, d.boundary, a))
        r = lu.solve(r)
        if not np.all(np.isfinite(r)):
            raise FlowDiverged("porous-medium step produced non-finite density")
        r = _project(r, dx, d.floor)
    return d.with_rho(r)


class Density1DBackend(SpaceBackend):
    """Wasserstein-2 space over a 1D grid with a chosen entropy (lambda = 0)."""

    def __init__(self, kind: EntropyKind):
        self.kind = kind
        self.lam = 0.0

    def distance(self, a, b) -> float:
        return w2_distance(a, b)

    def geodesic(self, a, b, theta: float):
        return w2_geodesic(a, b, theta)

    def entropy(self, x) -> float:
        return entropy(self.kind, x)

    def slope(self, x) -> float:
        return slope(self.kind, x)

    def flow(self, x, s: float):
        return flow(self.kind, x, s)

    def check_point(self, x) -> None:
        if not isinstance(x, GridDensity):
            raise InvalidCurve(f"expected GridDensity, got {type(x).__name__}")

    def same_space(self, a, b) -> bool:
        return isinstance(a, GridDensity) and a.same_grid(b)


# -- CSV ingestion ---------------------------------------------------------

def density_to_csv(d: GridDensity, path) -> None:
    """Write ``x,rho`` rows (cell centers) with full float precision."""
    with open(path, "w", newline="") as fh:
        fh.write("x,rho\n")
        for x, r in zip(d.centers, d.rho):
            fh.write(f"{x:.17g},{r:.17g}\n")


def density_from_csv(path, boundary: str = "no-flux",
                     floor: float = DENSITY_FLOOR) -> GridDensity:
    """Read ``x,rho`` rows on a uniform grid back into a density."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 2:
        raise DomainError("density CSV needs two columns of at least two rows")
    x, r = data[:, 0], data[:, 1]
    steps = np.diff(x)
    dx = float(steps[0])
    if dx <= 0 or np.any(np.abs(steps - dx) > 1e-9 * dx):
        raise DomainError("density CSV grid must be uniform and increasing")
    return GridDensity(r, dx, x0=float(x[0]) - 0.5 * dx, boundary=boundary,
                       floor=floor, normalize=True)
