"""Phase-space operators: advection, the nonlocal free symbol, Moyal sine and cosine.

Fields over phase space are real arrays of shape ``(n_k, n_r)`` with the k
axis in centred order.  The Moyal operators are diagonal in the separation
variable ``y``: with ``F(y) = dk * sum_j exp(-i k_j y/eps) f(k_j)``,

    sine:    multiply by (w(r - y/2) - w(r + y/2)) / (2 i eps omega_p0)
    cosine:  multiply by (w(r + y/2) + w(r - y/2)) / (2 omega_p0)

and transform back.  ``rfft`` along the centred k axis is used directly: the
``(-1)^m`` phases from the storage offset cancel between the forward and
inverse transform because the multipliers are diagonal in ``m``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .grid import k_derivative, spectral_derivative
from .medium import medium_sample
from .wigner import y_to_k

TRIGS = ("sine", "cosine")
MODES = ("spectral-exact", "kernel-table", "series")


def advect_D(f, grid, params):
    """``(c^2/omega_p0) k df/dr`` with a spectral r-derivative."""
    k = grid.k_values[:, None]
    return (params.c**2 / params.omega_p0) * k * spectral_derivative(f, grid, 1, axis=1)


def h0hat_apply(f, grid, params):
    """``(c^2/omega_p0) (k^2 f - (eps^2/4) d^2f/dr^2)``."""
    k2 = grid.k_values[:, None] ** 2
    lap = spectral_derivative(f, grid, 2, axis=1)
    return (params.c**2 / params.omega_p0) * (k2 * f - 0.25 * params.epsilon**2 * lap)


@dataclass(frozen=True, eq=False)
class MoyalOperatorSpec:
    trig: str
    mode: str
    medium: object
    params: object
    grid: object
    order: int = 0

    def __post_init__(self):
        if self.trig not in TRIGS:
            raise ValueError(f"trig must be one of {TRIGS}, got {self.trig!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"series order must be a non-negative integer, got {self.order!r}")
        if self.params.epsilon != self.grid.epsilon:
            raise ValueError("params.epsilon differs from the grid's epsilon")


def moyal_multipliers(medium, grid, params, t=None):
    """Sine and cosine multipliers on the non-negative separations ``y = q dr``.

    Returns ``(m_sine, m_cosine)`` of shape ``(n/2 + 1, n_r)``; ``m_sine`` is
    purely imaginary and stored as a complex array.  With ``t=None`` the
    spatial part only is returned (modulation factor 1).
    """
    n = grid.n
    half = n // 2
    if medium is None or medium.is_zero:
        z = np.zeros((half + 1, n))
        return z.astype(complex), z
    if t is None:
        plus = medium.spatial_shifted(grid, 0.5 * grid.y_values)
        minus = medium.spatial_shifted(grid, -0.5 * grid.y_values)
    else:
        plus = medium_sample(medium, grid, t, "+y/2")
        minus = medium_sample(medium, grid, t, "-y/2")
    wp0, eps = params.omega_p0, params.epsilon
    # centred row half + q holds y = q dr; row 0 holds the Nyquist separation -L/2
    p = np.empty((half + 1, n))
    m = np.empty((half + 1, n))
    p[:half] = plus[half:]
    m[:half] = minus[half:]
    p[half] = plus[0]
    m[half] = minus[0]
    m_sine = (m - p) / (2j * eps * wp0)
    m_sine[half] = 0.0  # y = +L/2 and -L/2 coincide; the odd part cancels
    m_cos = (p + m) / (2.0 * wp0)
    return m_sine, m_cos


def _apply_multiplier(f, mult, grid):
    coef = sfft.rfft(f, axis=0)
    return sfft.irfft(coef * mult, n=grid.n, axis=0)


def moyal_kernel(medium, grid, params, t=0.0):
    """Tabulated convolution kernels ``(K_sine, K_cosine)`` over ``(k, r)``.

    Both come from one complex kernel
    ``G(k, r) = (1/(2 pi eps)) sum_y dy exp(i k y/eps) w(r - y/2)/omega_p0``:
    ``K_cosine = Re G`` and ``K_sine = Im G / eps``.  Applying either is a
    periodic convolution in k, ``(K * f)(k) = dk sum_k' K(k - k', r) f(k', r)``.
    """
    minus = medium_sample(medium, grid, t, "-y/2") / params.omega_p0
    g = minus.astype(complex)
    # the Nyquist separation stands for both +L/2 and -L/2
    plus_nyq = medium_sample(medium, grid, t, "+y/2")[0] / params.omega_p0
    g[0] = 0.5 * (minus[0] + plus_nyq)
    G = y_to_k(g, grid)
    return G.imag / params.epsilon, G.real


def _convolve_k(kernel, f, grid):
    n = grid.n
    p = np.arange(n)
    idx = (p[:, None] - p[None, :] + n // 2) % n
    out = np.empty_like(f, dtype=float)
    for i in range(n):
        out[:, i] = kernel[idx, i] @ f[:, i]
    return grid.dk * out


def _series_apply(spec, f, t):
    grid, params, medium = spec.grid, spec.params, spec.medium
    eps, wp0 = params.epsilon, params.omega_p0
    mod = medium.modulation_at(t)
    out = np.zeros_like(f, dtype=float)
    for j in range(spec.order + 1):
        n_der = 2 * j + 1 if spec.trig == "sine" else 2 * j
        coeff = (-1) ** j * (eps / 2.0) ** n_der / math.factorial(n_der)
        if spec.trig == "sine":
            coeff /= eps
        dw = mod * medium.spatial_derivative(grid, n_der)
        df = k_derivative(f, grid, n_der) if n_der else f
        out += coeff * dw[None, :] * df
    return out / wp0


def moyal_apply(spec, f, t=0.0):
    """Apply the Moyal sine or cosine operator of ``spec.medium`` to ``f``."""
    f = np.asarray(f, dtype=float)
    if f.shape != spec.grid.shape:
        from .errors import GridMismatchError

        raise GridMismatchError(f"field shape {f.shape} does not match grid {spec.grid.shape}")
    medium = spec.medium
    if medium is None or medium.is_zero:
        return np.zeros_like(f)
    if spec.mode == "series":
        return _series_apply(spec, f, t)
    if spec.mode == "kernel-table":
        k_sine, k_cos = moyal_kernel(medium, spec.grid, spec.params, t)
        return _convolve_k(k_sine if spec.trig == "sine" else k_cos, f, spec.grid)
    m_sine, m_cos = moyal_multipliers(medium, spec.grid, spec.params, t)
    return _apply_multiplier(f, m_sine if spec.trig == "sine" else m_cos, spec.grid)


def classical_sine(f, medium, grid, params, t=0.0):
    """Leading term ``(dw/dr / (2 omega_p0)) df/dk`` of the sine operator."""
    dw = medium.modulation_at(t) * medium.spatial_derivative(grid, 1)
    return dw[None, :] * k_derivative(f, grid, 1) / (2.0 * params.omega_p0)
