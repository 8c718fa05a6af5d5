"""Arbitrary-dimension linear experiments on radial spectral profiles.

A radial profile samples v_hat(r) on a log-spaced grid of radial
frequencies.  Norms come from the radial Plancherel identity

    ||f||_{H^s}^2 = sigma_{n-1} * Int r^{2s+n-1} |v_hat(r)|^2 dr,

with sigma_{n-1} = 2 pi^{n/2} / Gamma(n/2) the unit-sphere area, evaluated
by composite trapezoid on the log abscissa (uniform relative accuracy for
power-law integrands).  The dimension n is an ordinary real parameter, so
decay rates can be probed in any dimension without a grid.  The low end of
the default grid (r_min = 1e-6) supplies the low-frequency continuum that
produces algebraic decay, which no periodic box can.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_function

from .errors import AccuracyError, ContractError, DomainError, InsufficientDataError
from .propagators import heat_multiplier, kernel_entries

DEFAULT_R_MIN = 1e-6
DEFAULT_R_MAX = 1e3
DEFAULT_POINTS = 4096
DEFAULT_FIT_WINDOW = (1e2, 1e4)


def sphere_surface(n: float) -> float:
    """Surface measure of the unit sphere in dimension n (real n >= 1)."""
    return 2.0 * np.pi ** (n / 2.0) / gamma_function(n / 2.0)


def log_radial_grid(r_min: float = DEFAULT_R_MIN, r_max: float = DEFAULT_R_MAX,
                    points: int = DEFAULT_POINTS) -> np.ndarray:
    if not (0 < r_min < r_max):
        raise DomainError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    return np.geomspace(r_min, r_max, points)


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial spectral function r -> v_hat(r) in dimension ``dim``."""

    dim: float
    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim}")
        r = np.asarray(self.r, dtype=float)
        if r.ndim != 1 or r.size < 8:
            raise ContractError("radial grid must be a 1-d array with >= 8 points")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise ContractError("radial grid must be strictly increasing with r[0] > 0")
        values = np.asarray(self.values, dtype=np.complex128)
        if values.shape != r.shape:
            raise ContractError(
                f"values shape {values.shape} does not match grid {r.shape}")
        if not np.isfinite(values).all():
            raise ContractError("profile values must be finite")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "values", values)

    def with_values(self, values: np.ndarray) -> "RadialProfile":
        return RadialProfile(self.dim, self.r, values)


def power_law_profile(dim: float, exponent: float,
                      r: np.ndarray | None = None, cutoff: float = 1.0) -> RadialProfile:
    """v_hat(r) = r^-exponent on (0, cutoff], zero beyond."""
    r = log_radial_grid() if r is None else np.asarray(r, dtype=float)
    values = np.where(r <= cutoff, r ** (-exponent), 0.0)
    return RadialProfile(dim, r, values.astype(np.complex128))


def gaussian_profile(dim: float, width: float = 1.0,
                     r: np.ndarray | None = None) -> RadialProfile:
    """v_hat(r) = exp(-(width * r)^2)."""
    r = log_radial_grid() if r is None else np.asarray(r, dtype=float)
    return RadialProfile(dim, r, np.exp(-(width * r) ** 2).astype(np.complex128))


@dataclass(frozen=True)
class DecayCurve:
    """Norm history of an evolved profile at fixed order s and data index gamma."""

    times: np.ndarray
    norms: np.ndarray
    s: float
    gamma: float
    kind: str = "damped"

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        norms = np.asarray(self.norms, dtype=float)
        if times.shape != norms.shape:
            raise ContractError("times and norms must have matching shapes")
        if np.any(times < 0) or np.any(np.diff(times) <= 0):
            raise ContractError("times must be nonnegative and strictly increasing")
        if np.any(norms < 0):
            raise ContractError("norms must be nonnegative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "norms", norms)

    def csv_rows(self):
        for t, norm in zip(self.times, self.norms):
            yield t, norm, self.s, self.gamma, self.kind


@dataclass(frozen=True)
class RateFit:
    """Least-squares slope of log(norm) against log(1 + t) over a window."""

    slope: float
    intercept: float
    t_lo: float
    t_hi: float
    residual: float

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept,
                "t_lo": self.t_lo, "t_hi": self.t_hi, "residual": self.residual}


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _log_integrand(profile: RadialProfile, s: float) -> np.ndarray:
    # integrand against d(log r): r * (r^{2s+n-1} |v|^2)
    return profile.r ** (2.0 * s + profile.dim) * np.abs(profile.values) ** 2


def _check_tail(g: np.ndarray, where: str) -> None:
    peak = float(np.max(g))
    if peak == 0.0:
        return
    if where == "outer":
        edge, inner = g[-1], g[-3]
    else:
        edge, inner = g[0], g[2]
    if edge > inner and edge > 1e-12 * peak:
        raise AccuracyError(
            f"norm integrand grows toward the {where} end of the radial grid "
            f"(edge {edge:.3e} vs interior {inner:.3e}); the integral is not "
            "captured by the represented range")


def norm_radial(profile: RadialProfile, s: float) -> float:
    """Radial Plancherel norm of order s; rejects divergent integrands."""
    g = _log_integrand(profile, s)
    _check_tail(g, "inner")
    _check_tail(g, "outer")
    integral = np.trapezoid(g, x=np.log(profile.r))
    return float(np.sqrt(sphere_surface(profile.dim) * integral))


# ---------------------------------------------------------------------------
# evolutions
# ---------------------------------------------------------------------------

def _check_pair(v0: RadialProfile, v1: RadialProfile) -> None:
    if v0.dim != v1.dim or v0.r.shape != v1.r.shape or not np.array_equal(v0.r, v1.r):
        raise ContractError("profiles must share dimension and radial grid")


def _check_initial_norms(v0: RadialProfile, v1: RadialProfile,
                         s: float, gamma: float) -> None:
    # bad data (divergent at either grid end) should fail fast, not mid-curve
    for profile in (v0, v1):
        norm_radial(profile, s)
        norm_radial(profile, -gamma)


def evolve_damped(v0: RadialProfile, v1: RadialProfile, times: np.ndarray,
                  s: float, gamma: float) -> DecayCurve:
    """Damped-wave norm history: v_hat(t) = k00(t, r) v0 + k01(t, r) v1."""
    _check_pair(v0, v1)
    _check_initial_norms(v0, v1, s, gamma)
    times = np.asarray(times, dtype=float)
    norms = np.empty_like(times)
    for i, t in enumerate(times):
        k00, k01, _, _ = kernel_entries(float(t), v0.r)
        evolved = v0.with_values(k00 * v0.values + k01 * v1.values)
        norms[i] = norm_radial(evolved, s)
    return DecayCurve(times, norms, s, gamma, kind="damped")


def evolve_heat(v0: RadialProfile, v1: RadialProfile, times: np.ndarray,
                s: float, gamma: float) -> DecayCurve:
    """Heat-flow norm history with merged data: w_hat(t) = e^{-r^2 t}(v0 + v1)."""
    _check_pair(v0, v1)
    _check_initial_norms(v0, v1, s, gamma)
    times = np.asarray(times, dtype=float)
    merged = v0.values + v1.values
    norms = np.empty_like(times)
    for i, t in enumerate(times):
        evolved = v0.with_values(heat_multiplier(float(t), v0.r) * merged)
        norms[i] = norm_radial(evolved, s)
    return DecayCurve(times, norms, s, gamma, kind="heat")


def diffusion_difference(v0: RadialProfile, v1: RadialProfile, times: np.ndarray,
                         s: float, gamma: float) -> DecayCurve:
    """Norm history of the damped-wave/heat difference (the parabolic gain)."""
    _check_pair(v0, v1)
    _check_initial_norms(v0, v1, s, gamma)
    times = np.asarray(times, dtype=float)
    merged = v0.values + v1.values
    norms = np.empty_like(times)
    for i, t in enumerate(times):
        k00, k01, _, _ = kernel_entries(float(t), v0.r)
        diff = k00 * v0.values + k01 * v1.values - heat_multiplier(float(t), v0.r) * merged
        norms[i] = norm_radial(v0.with_values(diff), s)
    return DecayCurve(times, norms, s, gamma, kind="difference")


# ---------------------------------------------------------------------------
# rate fitting
# ---------------------------------------------------------------------------

def fit_rate(curve: DecayCurve, window: tuple[float, float] = DEFAULT_FIT_WINDOW
             ) -> RateFit:
    """Fit log(norm) ~ slope * log(1 + t) + intercept over the window."""
    t_lo, t_hi = window
    if t_lo >= t_hi:
        raise DomainError(f"fit window must satisfy t_lo < t_hi, got {window}")
    mask = (curve.times >= t_lo) & (curve.times <= t_hi)
    count = int(np.count_nonzero(mask))
    if count < 8:
        raise InsufficientDataError(
            f"fit window [{t_lo}, {t_hi}] contains {count} samples; need >= 8")
    norms = curve.norms[mask]
    if np.any(norms <= 0):
        raise DomainError("rate fit requires strictly positive norms in the window")
    x = np.log1p(curve.times[mask])
    y = np.log(norms)
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return RateFit(float(slope), float(intercept), float(t_lo), float(t_hi), residual)
