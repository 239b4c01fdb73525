"""Discrete differential geometry of surfaces of revolution.

A membrane surface is obtained by rotating a planar generating curve
gamma = (x, y), y >= 0, about the x-axis.  Curves are stored as nodes on a
uniform parameter grid and are expected to be parametrised with nearly
constant speed; ``reparametrize_constant_speed`` restores that property
after nodes have moved.

Conventions: curves run "left to right" (x nondecreasing), so the unit
sphere sampled as (-cos t, sin t) has principal curvatures +1.  All
quadrature is trapezoidal, all differencing is second order (centered in
the interior, one-sided at the ends).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import (
    DegenerateLength,
    NegativeY,
    NonMonotoneX,
    PoleTangentNotPerpendicular,
)

#: relative chord-speed deviation below which a curve counts as constant speed
SPEED_TOL = 1e-3
#: pole rule applies where y is below this many arclength grid spacings
POLE_TOL = 2.0
#: largest |x'|/|gamma'| tolerated where the curve meets the axis
PERP_TOL = 0.2

_MONO_SLACK = 1e-12


@dataclass(frozen=True)
class Curve:
    """Generating curve sampled on a uniform parameter grid.

    ``nodes[i]`` is gamma(t_i) with t_i = i * param_length / N.  ``speed``
    is the nominal |gamma'| (polyline length / param_length).
    """

    nodes: np.ndarray
    param_length: float
    speed: float

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def x(self) -> np.ndarray:
        return self.nodes[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.nodes[:, 1]

    @property
    def n(self) -> int:
        """Number of cells (nodes are indexed 0..n)."""
        return self.nodes.shape[0] - 1

    @property
    def dt(self) -> float:
        """Parameter grid spacing."""
        return self.param_length / self.n

    @property
    def length(self) -> float:
        return self.speed * self.param_length

    def arclength(self) -> np.ndarray:
        """Cumulative polyline arclength of the nodes."""
        chords = np.linalg.norm(np.diff(self.nodes, axis=0), axis=1)
        return np.concatenate(([0.0], np.cumsum(chords)))

    def is_closed(self, tol: float = 1e-9) -> bool:
        scale = max(1.0, float(np.max(np.abs(self.nodes))))
        return bool(self.y[0] < tol * scale and self.y[-1] < tol * scale)


@dataclass(frozen=True)
class AngleField:
    """Tangent angle per node, lifted continuously."""

    phi: np.ndarray


@dataclass(frozen=True)
class CurvatureField:
    """Principal curvatures and derived quantities per node."""

    kappa1: np.ndarray
    kappa2: np.ndarray
    mean: np.ndarray   # H = kappa1 + kappa2
    gauss: np.ndarray  # K = kappa1 * kappa2
    b_sq: np.ndarray   # |B|^2 = kappa1^2 + kappa2^2


@dataclass(frozen=True)
class MeasureWeights:
    """Trapezoidal quadrature weights for the surface measure and length."""

    area_w: np.ndarray    # weight for d(mu) = 2 pi q y dt
    length_w: np.ndarray  # weight for dL = q dt


@dataclass(frozen=True)
class SurfaceMeasures:
    weights: MeasureWeights
    length: float
    area: float
    enclosed_volume: float


def _diff1(vals: np.ndarray, h: float) -> np.ndarray:
    """Centered first difference, second-order one-sided at the ends."""
    d = np.empty_like(vals)
    d[1:-1] = (vals[2:] - vals[:-2]) / (2.0 * h)
    d[0] = (-3.0 * vals[0] + 4.0 * vals[1] - vals[2]) / (2.0 * h)
    d[-1] = (3.0 * vals[-1] - 4.0 * vals[-2] + vals[-3]) / (2.0 * h)
    return d


def _diff2(vals: np.ndarray, h: float) -> np.ndarray:
    """Centered second difference, second-order one-sided at the ends."""
    d = np.empty_like(vals)
    d[1:-1] = (vals[2:] - 2.0 * vals[1:-1] + vals[:-2]) / (h * h)
    d[0] = (2.0 * vals[0] - 5.0 * vals[1] + 4.0 * vals[2] - vals[3]) / (h * h)
    d[-1] = (2.0 * vals[-1] - 5.0 * vals[-2] + 4.0 * vals[-3] - vals[-4]) / (h * h)
    return d


def trapezoid_factors(n_nodes: int) -> np.ndarray:
    c = np.ones(n_nodes)
    c[0] = c[-1] = 0.5
    return c


def build_curve(points, param_length: float = 1.0) -> Curve:
    """Validate a node list and wrap it as a :class:`Curve`.

    Raises ``DegenerateLength`` for a curve of zero length, ``NegativeY``
    if any node lies below the axis and ``NonMonotoneX`` if x decreases.
    """
    nodes = np.asarray(points, dtype=float)
    if nodes.ndim != 2 or nodes.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array of (x, y) pairs")
    if param_length <= 0:
        raise ValueError("param_length must be positive")
    chords = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
    total = float(np.sum(chords))
    scale = max(1.0, float(np.max(np.abs(nodes))) if nodes.size else 1.0)
    if total <= 1e-14 * scale:
        raise DegenerateLength(f"polyline length {total:g} is degenerate")
    if nodes.shape[0] < 3:
        raise ValueError("need at least 3 points")
    y = nodes[:, 1]
    if np.any(y < -1e-12 * scale):
        raise NegativeY(f"min y = {y.min():g}")
    nodes = nodes.copy()
    nodes[:, 1] = np.maximum(y, 0.0)
    dx = np.diff(nodes[:, 0])
    if np.any(dx < -_MONO_SLACK * scale):
        i = int(np.argmin(dx))
        raise NonMonotoneX(f"x decreases by {-dx[i]:g} at node {i}")
    return Curve(nodes=nodes, param_length=float(param_length), speed=total / param_length)


def speed_deviation(c: Curve) -> float:
    """Max relative deviation of the per-cell chord speed from the nominal speed."""
    chords = np.linalg.norm(np.diff(c.nodes, axis=0), axis=1)
    local = chords / c.dt
    return float(np.max(np.abs(local - c.speed)) / c.speed)


def reparametrize_constant_speed(c: Curve) -> Curve:
    """Redistribute nodes so consecutive chords have uniform arclength.

    The polyline image is preserved up to monotone (PCHIP) interpolation
    error; endpoints are fixed.
    """
    s = c.arclength()
    total = s[-1]
    # strictly increasing abscissae are required by the interpolator
    eps = 1e-15 * max(total, 1.0)
    s = np.maximum.accumulate(s + eps * np.arange(len(s)))
    targets = np.linspace(0.0, s[-1], c.n + 1)
    ix = PchipInterpolator(s, c.x)
    iy = PchipInterpolator(s, c.y)
    nodes = np.column_stack([ix(targets), np.maximum(iy(targets), 0.0)])
    nodes[0] = c.nodes[0]
    nodes[-1] = c.nodes[-1]
    new_total = float(np.sum(np.linalg.norm(np.diff(nodes, axis=0), axis=1)))
    return Curve(nodes=nodes, param_length=c.param_length, speed=new_total / c.param_length)


def angle_function(c: Curve) -> AngleField:
    """Tangent angle phi = atan2(y', x') per node, lifted continuously."""
    h = c.dt
    xp = _diff1(c.x, h)
    yp = _diff1(c.y, h)
    phi = np.unwrap(np.arctan2(yp, xp))
    return AngleField(phi=phi)


def curvatures(c: Curve) -> CurvatureField:
    """Principal curvatures of the surface of revolution.

    kappa1 = (-y'' x' + x'' y') / |gamma'|^3 is the curvature of the
    generating curve, kappa2 = x' / (y |gamma'|) the rotational curvature.
    At nodes closer to the axis than ``POLE_TOL`` arclength spacings the
    rotational curvature is replaced by kappa1 (smooth-pole limit).
    """
    h = c.dt
    xp = _diff1(c.x, h)
    yp = _diff1(c.y, h)
    xpp = _diff2(c.x, h)
    ypp = _diff2(c.y, h)
    s = np.hypot(xp, yp)
    s = np.maximum(s, 1e-300)
    kappa1 = (-ypp * xp + xpp * yp) / s**3

    thresh = POLE_TOL * c.speed * h
    pole = c.y < thresh
    for idx in (0, -1):
        if pole[idx] and abs(xp[idx]) / s[idx] > PERP_TOL:
            raise PoleTangentNotPerpendicular(
                f"|x'|/|gamma'| = {abs(xp[idx]) / s[idx]:.3f} at axis endpoint"
            )
    y_safe = np.where(pole, 1.0, c.y)
    kappa2 = np.where(pole, kappa1, xp / (y_safe * s))
    mean = kappa1 + kappa2
    gauss = kappa1 * kappa2
    return CurvatureField(kappa1=kappa1, kappa2=kappa2, mean=mean, gauss=gauss,
                          b_sq=kappa1**2 + kappa2**2)


def measures(c: Curve) -> SurfaceMeasures:
    """Quadrature weights plus length, area and enclosed volume.

    Area weights discretise d(mu) = 2 pi q y dt, the enclosed volume is
    pi * integral of x' y^2 dt (same trapezoidal rule).
    """
    h = c.dt
    cf = trapezoid_factors(c.n + 1)
    area_w = 2.0 * np.pi * c.speed * h * c.y * cf
    length_w = c.speed * h * cf
    xp = _diff1(c.x, h)
    volume = float(np.pi * h * np.sum(cf * xp * c.y**2))
    return SurfaceMeasures(
        weights=MeasureWeights(area_w=area_w, length_w=length_w),
        length=float(np.sum(length_w)),
        area=float(np.sum(area_w)),
        enclosed_volume=volume,
    )


def subrange_area_weights(c: Curve, start: int, stop: int) -> np.ndarray:
    """Area weights for the restriction to nodes[start:stop] (trapezoid on
    the subinterval).  Returns a full-length vector that is zero outside."""
    w = np.zeros(c.n + 1)
    cf = trapezoid_factors(stop - start)
    w[start:stop] = 2.0 * np.pi * c.speed * c.dt * c.y[start:stop] * cf
    return w
