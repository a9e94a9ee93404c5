"""Periodic position grid, its conjugate wavenumber grid and spectral helpers.

Conventions
-----------
Positions are ``r_i = i * dr`` for ``i in [0, n)``.  Phase-space wavenumbers
carry the scale parameter: ``k_j = 2*pi*eps*j/L`` for ``j in [-n/2, n/2)``,
stored in centred order.  The separation grid of the Wigner transform is
``y_m = m * dr`` for ``m in [-n/2, n/2)`` (also centred), so that
``k_j * y_m / eps = 2*pi*j*m/n`` and the ``e^{i k y / eps}`` kernel is an
ordinary length-``n`` DFT.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft

_SPLIT_NORMS = (0.5, 1.0 / math.sqrt(2.0))


@dataclass(frozen=True)
class SimParams:
    """Physical constants and the Feshbach-Villars normalisation."""

    epsilon: float = 1.0
    c: float = 1.0
    omega_p0: float = 1.0
    split_norm: float = 0.5

    def __post_init__(self):
        for name in ("epsilon", "c", "omega_p0"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value!r}")
        if not any(abs(self.split_norm - s) < 1e-15 for s in _SPLIT_NORMS):
            raise ValueError(
                f"split_norm must be 1/2 or 1/sqrt(2), got {self.split_norm!r}"
            )

    def h0(self, k):
        """Free symbol c^2 k^2 / omega_p0."""
        return self.c**2 * np.asarray(k) ** 2 / self.omega_p0


def _frozen(a):
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GridPair:
    n: int
    length: float
    epsilon: float
    dr: float = field(init=False)
    dk: float = field(init=False)
    r_values: np.ndarray = field(init=False, repr=False)
    k_values: np.ndarray = field(init=False, repr=False)
    y_values: np.ndarray = field(init=False, repr=False)
    kappa: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        n, L, eps = self.n, self.length, self.epsilon
        set_ = object.__setattr__
        set_(self, "dr", L / n)
        set_(self, "dk", 2.0 * np.pi * eps / L)
        idx = np.arange(-n // 2, n // 2)
        set_(self, "r_values", _frozen(np.arange(n) * (L / n)))
        set_(self, "k_values", _frozen(idx * (2.0 * np.pi * eps / L)))
        set_(self, "y_values", _frozen(idx * (L / n)))
        # field wavenumbers (no eps) in standard FFT order
        set_(self, "kappa", _frozen(2.0 * np.pi * sfft.fftfreq(n, d=L / n)))

    @property
    def shape(self):
        """Phase-space array shape, axes ``(k, r)``."""
        return (self.n, self.n)

    @property
    def k_max(self):
        return np.pi * self.epsilon * self.n / self.length

    @property
    def kappa_nyquist(self):
        return np.pi * self.n / self.length

    def kappa_half(self):
        """Non-negative wavenumbers matching an ``rfft`` along r."""
        return 2.0 * np.pi * sfft.rfftfreq(self.n, d=self.dr)

    def y_half(self):
        """Non-negative separations matching an ``rfft`` along k."""
        return np.arange(self.n // 2 + 1) * self.dr

    def index_of_k(self, k, tol=1e-9):
        """Centred index of an on-grid wavenumber, or ``None`` if off-grid."""
        j = k / self.dk
        jr = int(round(j))
        if abs(j - jr) > tol or not (-self.n // 2 <= jr < self.n // 2):
            return None
        return jr + self.n // 2

    def same_as(self, other):
        return (
            self is other
            or (
                self.n == other.n
                and self.length == other.length
                and self.epsilon == other.epsilon
            )
        )


def build_grid(n, length, params):
    """Build the position grid and its conjugate wavenumber grid.

    ``n`` must be even and at least 4; powers of two are fastest but not
    required.
    """
    if isinstance(n, bool) or int(n) != n:
        raise ValueError(f"n must be an integer, got {n!r}")
    n = int(n)
    if n < 4 or n % 2:
        raise ValueError(f"n must be even and >= 4, got {n}")
    if not (np.isfinite(length) and length > 0):
        raise ValueError(f"length must be positive, got {length!r}")
    return GridPair(n=n, length=float(length), epsilon=float(params.epsilon))


def check_same_grid(*grids):
    first = grids[0]
    for g in grids[1:]:
        if not first.same_as(g):
            from .errors import GridMismatchError

            raise GridMismatchError(
                f"grid mismatch: (n={first.n}, L={first.length}, eps={first.epsilon})"
                f" vs (n={g.n}, L={g.length}, eps={g.epsilon})"
            )


def check_field_shape(grid, *arrays):
    from .errors import GridMismatchError

    for a in arrays:
        if np.shape(a) != (grid.n,):
            raise GridMismatchError(
                f"field of shape {np.shape(a)} does not live on an n={grid.n} grid"
            )


# spectral helpers ----------------------------------------------------------


def _shift_factors(grid, shifts):
    """Fourier multipliers ``e^{i kappa s}`` with a cosine Nyquist column."""
    shifts = np.asarray(shifts, dtype=float)
    phase = np.exp(1j * np.multiply.outer(shifts, grid.kappa))
    nyq = grid.n // 2
    phase[..., nyq] = np.cos(shifts * grid.kappa_nyquist)
    return phase


def spectral_shift(values, grid, shifts):
    """Trigonometric interpolation of a periodic sample at ``r_i + s``.

    Returns an array of shape ``(len(shifts), n)``; row ``m`` holds the values
    at ``r_values + shifts[m]``.  Exact for data without Nyquist content and
    for integer multiples of ``dr``.
    """
    values = np.asarray(values)
    coef = sfft.fft(values)
    out = sfft.ifft(coef[None, :] * _shift_factors(grid, shifts), axis=-1)
    if np.isrealobj(values):
        return out.real
    return out


def evaluate_trig(values, grid, x):
    """Trigonometric interpolant of grid samples evaluated at points ``x``."""
    values = np.asarray(values)
    x = np.asarray(x, dtype=float)
    coef = sfft.fft(values) / grid.n
    kap = grid.kappa
    basis = np.exp(1j * np.multiply.outer(x, kap))
    basis[..., grid.n // 2] = np.cos(x * grid.kappa_nyquist)
    out = basis @ coef
    if np.isrealobj(values):
        return out.real
    return out


def spectral_derivative(values, grid, order=1, axis=-1):
    """``d^order/dr^order`` along ``axis`` via the FFT; Nyquist zeroed for odd orders."""
    values = np.asarray(values)
    n = grid.n
    if np.isrealobj(values):
        kap = grid.kappa_half()
        mult = (1j * kap) ** order
        if order % 2:
            mult[-1] = 0.0
        shape = [1] * values.ndim
        shape[axis] = mult.size
        coef = sfft.rfft(values, axis=axis)
        return sfft.irfft(coef * mult.reshape(shape), n=n, axis=axis)
    mult = (1j * grid.kappa) ** order
    if order % 2:
        mult[n // 2] = 0.0
    shape = [1] * values.ndim
    shape[axis] = n
    return sfft.ifft(sfft.fft(values, axis=axis) * mult.reshape(shape), axis=axis)


def k_derivative(values, grid, order=1):
    """``d^order/dk^order`` along axis 0 of a real ``(k, r)`` field.

    The k axis is periodic with period ``n * dk``; the conjugate variable is
    ``y / eps``.  The centred storage order cancels between forward and
    inverse transforms, so no reordering is needed.
    """
    values = np.asarray(values, dtype=float)
    mult = (1j * grid.y_half() / grid.epsilon) ** order
    if order % 2:
        mult[-1] = 0.0
    coef = sfft.rfft(values, axis=0)
    return sfft.irfft(coef * mult[:, None], n=grid.n, axis=0)


def dealias(values, grid):
    """Two-thirds rule: drop Fourier modes with ``|m| > n/3``."""
    coef = sfft.fft(values)
    m = np.abs(np.rint(grid.kappa / (2.0 * np.pi / grid.length)))
    coef[m > grid.n / 3.0] = 0.0
    out = sfft.ifft(coef)
    return out.real if np.isrealobj(values) else out
