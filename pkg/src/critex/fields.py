"""Periodic-grid fields, unitary transforms, and homogeneous Sobolev norms.

Fields live on a cubic periodic box [-L/2, L/2)^dim sampled with N points
per axis.  The spectral coefficients are scaled so that Parseval holds with
unit constant against the physical norm

    ||f||_{L2}^2 = sum_x |f(x)|^2 (L/N)^dim  =  sum_k |c_k|^2,

which makes the zero-order homogeneous norm equal the L2 norm on mean-zero
fields.  Homogeneous norms of negative order exclude the k = 0 mode and
demand a nearly mean-free field: on the torus the continuum norm diverges
for nonzero mean, so the bias of dropping the single discrete zero mode is
made explicit instead of hidden.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .errors import ContractError, DomainError

ZERO_MODE_TOLERANCE = 1e-10  # relative zero-mode mass allowed by negative orders


@dataclass(frozen=True)
class GridSpec:
    """Cubic periodic grid: ``dim`` axes, edge ``length``, ``points`` per axis.

    The mode with integer index m (per axis, m in [-N/2, N/2)) carries the
    wavenumber k = 2*pi*m/length.
    """

    dim: int
    length: float
    points: int

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise DomainError(f"grid dimension must be 1, 2 or 3, got {self.dim}")
        if self.length <= 0:
            raise DomainError(f"box edge must be positive, got {self.length}")
        n = self.points
        if n < 8 or n & (n - 1) != 0:
            raise DomainError(f"points per axis must be a power of two >= 8, got {n}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def spacing(self) -> float:
        return self.length / self.points

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim


@lru_cache(maxsize=32)
def axis_coordinates(grid: GridSpec) -> np.ndarray:
    """Physical coordinates of one axis, measured from the box center."""
    n = grid.points
    return (np.arange(n) - n // 2) * grid.spacing


@lru_cache(maxsize=32)
def axis_wavenumbers(grid: GridSpec) -> np.ndarray:
    """Wavenumbers of one axis in FFT layout."""
    return 2.0 * np.pi * np.fft.fftfreq(grid.points, d=grid.spacing)


@lru_cache(maxsize=32)
def wavenumber_magnitude(grid: GridSpec) -> np.ndarray:
    """|k| on the full frequency grid, FFT layout."""
    k = axis_wavenumbers(grid)
    if grid.dim == 1:
        return np.abs(k)
    mesh = np.meshgrid(*([k] * grid.dim), indexing="ij")
    return np.sqrt(sum(m * m for m in mesh))


@lru_cache(maxsize=32)
def dealias_mask(grid: GridSpec) -> np.ndarray:
    """Two-thirds rule mask: keep per-axis integer modes |m| <= N/3."""
    n = grid.points
    m = np.fft.fftfreq(n, d=1.0 / n)  # integer mode indices
    keep = np.abs(m) <= n / 3.0
    if grid.dim == 1:
        return keep
    mesh = np.meshgrid(*([keep] * grid.dim), indexing="ij")
    out = mesh[0]
    for other in mesh[1:]:
        out = out & other
    return out


@dataclass(frozen=True)
class SpectrumField:
    """Complex Fourier coefficients of a real field on a periodic grid.

    Coefficients are stored in numpy FFT layout and obey Hermitian symmetry
    coeff(-k) = conj(coeff(k)) whenever the physical field is real.  Entries
    must be finite unless the field is explicitly flagged ``diverged``.
    """

    grid: GridSpec
    coeffs: np.ndarray
    diverged: bool = False

    def __post_init__(self):
        if self.coeffs.shape != self.grid.shape:
            raise ContractError(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}")
        if self.coeffs.dtype != np.complex128:
            object.__setattr__(self, "coeffs", self.coeffs.astype(np.complex128))
        if not self.diverged and not np.isfinite(self.coeffs).all():
            raise ContractError("non-finite coefficients in a field not flagged diverged")

    def is_hermitian(self, tol: float = 1e-12) -> bool:
        c = self.coeffs
        flipped = _reversed_conj(c)
        scale = np.max(np.abs(c)) or 1.0
        return bool(np.max(np.abs(c - flipped)) <= tol * scale)


def _reversed_conj(c: np.ndarray) -> np.ndarray:
    # coeff(-k) in FFT layout is c[(-i) % N, ...]: axis reversal with wrap at 0
    idx = tuple(np.concatenate(([0], np.arange(n - 1, 0, -1))) for n in c.shape)
    return np.conj(c[np.ix_(*idx)] if c.ndim > 1 else c[idx[0]])


@dataclass(frozen=True)
class NormOrder:
    """Sobolev order: ``s`` (negative allowed) and homogeneous/inhomogeneous."""

    s: float
    homogeneous: bool = True


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _forward_coeffs(samples: np.ndarray, grid: GridSpec) -> np.ndarray:
    scale = grid.length ** (grid.dim / 2.0) / grid.points ** grid.dim
    return np.fft.fftn(samples) * scale


def _inverse_samples(coeffs: np.ndarray, grid: GridSpec) -> np.ndarray:
    scale = grid.length ** (grid.dim / 2.0) / grid.points ** grid.dim
    return np.fft.ifftn(coeffs / scale)


def transform_forward(samples: np.ndarray, grid: GridSpec) -> SpectrumField:
    """Unitary forward transform of real physical samples."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != grid.shape:
        raise ContractError(
            f"sample shape {samples.shape} does not match grid {grid.shape}")
    return SpectrumField(grid, _forward_coeffs(samples, grid))


def transform_inverse(field: SpectrumField) -> np.ndarray:
    """Inverse transform back to real physical samples.

    Raises if the spectrum is visibly non-Hermitian (imaginary residue
    above 1e-8 of the field magnitude).
    """
    out = _inverse_samples(field.coeffs, field.grid)
    mag = np.max(np.abs(out.real))
    imag = np.max(np.abs(out.imag))
    if mag > 0 and imag > 1e-8 * mag:
        raise ContractError(
            f"inverse transform produced imaginary residue {imag:.3e} vs magnitude {mag:.3e}; "
            "spectrum is not Hermitian")
    return out.real.copy()


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------

def _l2_norm_sq(coeffs: np.ndarray) -> float:
    return float(np.sum(np.abs(coeffs) ** 2))


def sobolev_norm(field: SpectrumField, order: NormOrder | float) -> float:
    """Sobolev norm of the given order under the unitary convention.

    Homogeneous orders sum |k|^(2s) |c_k|^2 over k != 0; negative orders
    additionally require the zero mode to carry at most ``ZERO_MODE_TOLERANCE``
    of the field's L2 mass (remove the mean first if this trips).
    Inhomogeneous orders use the weight (1 + |k|^2)^s including k = 0.
    """
    if not isinstance(order, NormOrder):
        order = NormOrder(float(order))
    c = field.coeffs
    kmag = wavenumber_magnitude(field.grid)

    if not order.homogeneous:
        return float(np.sqrt(np.sum((1.0 + kmag ** 2) ** order.s * np.abs(c) ** 2)))

    l2 = np.sqrt(_l2_norm_sq(c))
    zero_index = (0,) * field.grid.dim
    if order.s < 0:
        zero_mass = abs(c[zero_index])
        if l2 > 0 and zero_mass > ZERO_MODE_TOLERANCE * l2:
            raise DomainError(
                f"zero mode carries {zero_mass:.3e} of L2 mass {l2:.3e}: homogeneous "
                f"negative orders require a mean-free field; remove the mean first")
    if order.s == 0:
        zero_mass_sq = abs(c[zero_index]) ** 2
        return float(np.sqrt(max(_l2_norm_sq(c) - zero_mass_sq, 0.0)))
    with np.errstate(divide="ignore"):
        weights = kmag ** (2.0 * order.s)
    weights[zero_index] = 0.0
    return float(np.sqrt(np.sum(weights * np.abs(c) ** 2)))


def l2_norm(field: SpectrumField) -> float:
    """Physical L2 norm (includes the mean mode)."""
    return float(np.sqrt(_l2_norm_sq(field.coeffs)))


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

def _radius_squared(grid: GridSpec) -> np.ndarray:
    x = axis_coordinates(grid)
    if grid.dim == 1:
        return x * x
    mesh = np.meshgrid(*([x] * grid.dim), indexing="ij")
    return sum(m * m for m in mesh)


def make_initial_data(kind: str, grid: GridSpec, **params) -> np.ndarray:
    """Build physical initial data on the grid, centered in the box.

    Kinds:
      ``gaussian(amplitude, width)``       A * exp(-|x|^2 / (2 width^2))
      ``critical_tail(amplitude, gamma)``  A * <x>^-(n/2+gamma) / log(e + |x|),
                                           the profile sitting exactly at the
                                           integrability edge of the order
                                           -gamma norm
      ``single_mode(mode, amplitude)``     A * cos(2 pi m x_1 / L)
    """
    if kind == "gaussian":
        amplitude = params.pop("amplitude", 1.0)
        width = params.pop("width", 1.0)
        _reject_extra(params)
        if amplitude <= 0 or width <= 0:
            raise DomainError(
                f"gaussian needs positive amplitude and width, got {amplitude}, {width}")
        return amplitude * np.exp(-_radius_squared(grid) / (2.0 * width * width))

    if kind == "critical_tail":
        amplitude = params.pop("amplitude", 1.0)
        gamma = params.pop("gamma")
        _reject_extra(params)
        if amplitude <= 0:
            raise DomainError(f"critical_tail needs positive amplitude, got {amplitude}")
        if gamma <= 0:
            raise DomainError(f"critical_tail needs positive gamma, got {gamma}")
        r2 = _radius_squared(grid)
        bracket = np.sqrt(1.0 + r2)
        return amplitude * bracket ** (-(grid.dim / 2.0 + gamma)) \
            / np.log(np.e + np.sqrt(r2))

    if kind == "single_mode":
        mode = params.pop("mode")
        amplitude = params.pop("amplitude", 1.0)
        _reject_extra(params)
        if amplitude <= 0:
            raise DomainError(f"single_mode needs positive amplitude, got {amplitude}")
        mode = int(mode)
        if not (1 <= mode < grid.points // 2):
            raise DomainError(f"mode index must lie in [1, N/2), got {mode}")
        x = axis_coordinates(grid)
        wave = amplitude * np.cos(2.0 * np.pi * mode * x / grid.length)
        if grid.dim == 1:
            return wave
        shape = [1] * grid.dim
        shape[0] = grid.points
        return np.broadcast_to(wave.reshape(shape), grid.shape).copy()

    raise DomainError(f"unknown initial data kind {kind!r}")


def _reject_extra(params: dict) -> None:
    if params:
        raise DomainError(f"unexpected parameters: {sorted(params)}")


# ---------------------------------------------------------------------------
# binary serialization
# ---------------------------------------------------------------------------

_HEADER = struct.Struct("<qqd")  # dim, points, length


def save_field(field: SpectrumField, path: str | Path) -> None:
    """Write a field as header {dim, N, L} plus (re, im) float64 pairs.

    All values little-endian, coefficients in row-major frequency order.
    """
    data = np.ascontiguousarray(field.coeffs, dtype="<c16")
    with open(path, "wb") as handle:
        handle.write(_HEADER.pack(field.grid.dim, field.grid.points, field.grid.length))
        handle.write(data.tobytes())


def load_field(path: str | Path) -> SpectrumField:
    with open(path, "rb") as handle:
        dim, points, length = _HEADER.unpack(handle.read(_HEADER.size))
        grid = GridSpec(dim=dim, length=length, points=points)
        raw = handle.read()
    expected = points ** dim * 16
    if len(raw) != expected:
        raise ContractError(
            f"field payload has {len(raw)} bytes, expected {expected}")
    coeffs = np.frombuffer(raw, dtype="<c16").astype(np.complex128).reshape(grid.shape)
    return SpectrumField(grid, coeffs)
