"""Material laws: double-well potential, phase-dependent spontaneous
curvature and rigidities, and the derived line-tension constants."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator

from .errors import NonvanishingWell


@dataclass(frozen=True)
class DoubleWell:
    """Nonnegative potential vanishing exactly at u = +-1."""

    kind: str
    w: Callable
    dw: Callable


def quartic_well() -> DoubleWell:
    return DoubleWell(
        kind="quartic",
        w=lambda u: (1.0 - np.asarray(u, dtype=float) ** 2) ** 2,
        dw=lambda u: -4.0 * np.asarray(u, dtype=float) * (1.0 - np.asarray(u, dtype=float) ** 2),
    )


def scaled_well(base: DoubleWell, factor: float) -> DoubleWell:
    return DoubleWell(
        kind=f"{base.kind}*{factor:g}",
        w=lambda u: factor * base.w(u),
        dw=lambda u: factor * base.dw(u),
    )


def well_from_samples(u_samples, w_samples) -> DoubleWell:
    """Tabulated well; monotone-safe interpolation, clamped to >= 0."""
    interp = PchipInterpolator(np.asarray(u_samples, float), np.asarray(w_samples, float))
    deriv = interp.derivative()
    return DoubleWell(
        kind="tabulated",
        w=lambda u: np.maximum(interp(u), 0.0),
        dw=lambda u: deriv(u),
    )


@dataclass(frozen=True)
class MaterialModel:
    """Bending rigidities, spontaneous curvature and well, with the derived
    line tensions sigma (proper interfaces) and sigma_hat (kink pricing)."""

    well: DoubleWell
    hs: Callable
    dhs: Callable
    k: Callable
    dk: Callable
    k_gauss: Callable
    dk_gauss: Callable
    c0: float
    sigma: float
    sigma_hat: float
    sigma_plus: float
    sigma_minus: float

    def hs_sup(self) -> float:
        u = np.linspace(-self.c0, self.c0, 4001)
        return float(np.max(np.abs(self.hs(u))))


def sigma_constants(well: DoubleWell) -> tuple[float, float]:
    """Line tensions: sigma = int_{-1}^{1} 2 sqrt(W), sigma_hat = 2 sqrt(W(0))."""
    _check_vanishing(well)
    val, _ = quad(lambda s: 2.0 * np.sqrt(max(float(well.w(s)), 0.0)), -1.0, 1.0,
                  epsabs=1e-10, epsrel=1e-10, limit=200)
    return float(val), float(2.0 * np.sqrt(float(well.w(0.0))))


def split_sigma(well: DoubleWell) -> tuple[float, float]:
    """One-sided line tensions (sigma_plus, sigma_minus) for asymmetric wells."""
    _check_vanishing(well)
    plus, _ = quad(lambda s: 2.0 * np.sqrt(max(float(well.w(s)), 0.0)), 0.0, 1.0,
                   epsabs=1e-10, epsrel=1e-10, limit=200)
    minus, _ = quad(lambda s: 2.0 * np.sqrt(max(float(well.w(s)), 0.0)), -1.0, 0.0,
                    epsabs=1e-10, epsrel=1e-10, limit=200)
    return float(plus), float(minus)


def _check_vanishing(well: DoubleWell) -> None:
    for u0 in (-1.0, 1.0):
        if float(well.w(u0)) > 1e-12:
            raise NonvanishingWell(f"W({u0:+g}) = {float(well.w(u0)):g} > 1e-12")


def _const(value: float) -> Callable:
    return lambda u: np.full_like(np.asarray(u, dtype=float), value)


def default_hs(u):
    """Quintic Hermite interpolant with values 2 at +1 and 1 at -1 and flat
    first and second derivatives there; constant outside [-1, 1]."""
    u = np.asarray(u, dtype=float)
    uc = np.clip(u, -1.0, 1.0)
    return 1.5 + (15.0 * uc - 10.0 * uc**3 + 3.0 * uc**5) / 16.0


def default_dhs(u):
    u = np.asarray(u, dtype=float)
    inside = np.abs(u) <= 1.0
    uc = np.clip(u, -1.0, 1.0)
    return np.where(inside, 15.0 * (1.0 - uc**2) ** 2 / 16.0, 0.0)


def make_model(
    well: DoubleWell | None = None,
    hs: Callable | None = None,
    dhs: Callable | None = None,
    k: Callable | float = 1.0,
    dk: Callable | None = None,
    k_gauss: Callable | float = -1.0,
    dk_gauss: Callable | None = None,
    c0: float = 10.0,
) -> MaterialModel:
    """Assemble a material model; scalars are promoted to constant laws and
    missing derivatives of user callables fall back to central differences."""
    well = well or quartic_well()
    if hs is None:
        hs, dhs = default_hs, default_dhs
    elif dhs is None:
        dhs = _fd(hs)
    if not callable(k):
        k, dk = _const(float(k)), _const(0.0)
    elif dk is None:
        dk = _fd(k)
    if not callable(k_gauss):
        k_gauss, dk_gauss = _const(float(k_gauss)), _const(0.0)
    elif dk_gauss is None:
        dk_gauss = _fd(k_gauss)
    sigma, sigma_hat = sigma_constants(well)
    sp, sm = split_sigma(well)
    return MaterialModel(
        well=well, hs=hs, dhs=dhs, k=k, dk=dk, k_gauss=k_gauss, dk_gauss=dk_gauss,
        c0=float(c0), sigma=sigma, sigma_hat=sigma_hat, sigma_plus=sp, sigma_minus=sm,
    )


def _fd(f: Callable, step: float = 1e-6) -> Callable:
    return lambda u: (np.asarray(f(np.asarray(u, float) + step))
                      - np.asarray(f(np.asarray(u, float) - step))) / (2.0 * step)


def make_default_model() -> MaterialModel:
    """W quartic, k = 1, k_G = -1, quintic-Hermite spontaneous curvature
    (2 in the u=+1 phase, 1 in the u=-1 phase), C0 = 10."""
    return make_model()


@dataclass(frozen=True)
class RigidityReport:
    """Sampled checks of the rigidity inequalities on [-C0, C0]."""

    k_inf: float
    k_gauss_sup: float
    combined_inf: float          # inf of k + k_G / 2
    k_positive: bool
    gauss_negative: bool
    combined_positive: bool
    delta: float                 # largest delta with (1 - delta) k >= -k_G / 2
    pointwise_bound: float       # C = (1-delta)/delta * sup(k * hs^2), if delta > 0

    @property
    def all_ok(self) -> bool:
        return self.k_positive and self.gauss_negative and self.combined_positive


def validate_rigidities(model: MaterialModel, n_samples: int = 10_000) -> RigidityReport:
    """Check inf k > 0, sup k_G < 0 and inf(k + k_G/2) > 0 on a u-grid, and
    report the largest admissible delta for the pointwise curvature bound."""
    u = np.linspace(-model.c0, model.c0, n_samples)
    ku = np.asarray(model.k(u), dtype=float)
    kg = np.asarray(model.k_gauss(u), dtype=float)
    k_inf = float(np.min(ku))
    kg_sup = float(np.max(kg))
    comb = float(np.min(ku + kg / 2.0))
    delta = float(1.0 - np.max(-kg / (2.0 * ku))) if k_inf > 0 else 0.0
    delta = max(delta, 0.0)
    if 0.0 < delta < 1.0:
        bound = (1.0 - delta) / delta * float(np.max(ku * np.asarray(model.hs(u)) ** 2))
    else:
        bound = np.inf
    return RigidityReport(
        k_inf=k_inf,
        k_gauss_sup=kg_sup,
        combined_inf=comb,
        k_positive=k_inf > 0.0,
        gauss_negative=kg_sup < 0.0,
        combined_positive=comb > 0.0,
        delta=delta,
        pointwise_bound=bound,
    )
