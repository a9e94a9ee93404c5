"""Prescribed plasma-frequency perturbations and their grid samples.

Every profile factorises as ``spatial(r) * modulation(t)``.  Periodic kinds
are sampled on the grid and shifted spectrally; the windowed polynomial
(``linear-ramp``) is evaluated analytically in unwrapped coordinates and
refuses points outside its window.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.fft as sfft

from .errors import AliasingError, WindowError
from .grid import evaluate_trig, spectral_derivative, spectral_shift

_BANDLIMIT_TOL = 1e-12


@dataclass(frozen=True)
class CosineModulation:
    """``offset + amplitude * cos(omega * t + phase)``."""

    offset: float = 1.0
    amplitude: float = 0.0
    omega: float = 0.0
    phase: float = 0.0

    def __call__(self, t):
        return self.offset + self.amplitude * math.cos(self.omega * t + self.phase)


@dataclass(frozen=True)
class MediumProfile:
    modulation: Optional[Callable[[float], float]] = field(default=None, kw_only=True)
    time_domain: Optional[tuple] = field(default=None, kw_only=True)

    kind = "abstract"
    periodic = True

    def modulation_at(self, t):
        if self.time_domain is not None:
            t0, t1 = self.time_domain
            if not (t0 - 1e-12 <= t <= t1 + 1e-12):
                raise ValueError(
                    f"t={t} outside the medium time domain [{t0}, {t1}]"
                )
        if self.modulation is None:
            return 1.0
        return float(self.modulation(t))

    @property
    def is_zero(self):
        return False

    @property
    def is_uniform(self):
        return False

    # subclasses provide the spatial part
    def spatial_samples(self, grid):
        raise NotImplementedError

    def spatial_shifted(self, grid, offsets):
        """Spatial part at ``r_i + offsets[m]``, shape ``(len(offsets), n)``."""
        return spectral_shift(self.spatial_samples(grid), grid, offsets)

    def spatial_derivative(self, grid, order):
        if order == 0:
            return self.spatial_samples(grid)
        return spectral_derivative(self.spatial_samples(grid), grid, order)

    def max_abs(self, grid, t0=0.0, t1=0.0, samples=257):
        peak = float(np.max(np.abs(self.spatial_samples(grid))))
        if self.modulation is None:
            return peak
        ts = np.linspace(t0, t1, samples) if t1 > t0 else np.array([t0])
        return peak * max(abs(self.modulation_at(float(t))) for t in ts)


@dataclass(frozen=True)
class ConstantMedium(MediumProfile):
    value: float = 0.0

    kind = "constant"

    @property
    def is_zero(self):
        return self.value == 0.0

    @property
    def is_uniform(self):
        return True

    def spatial_samples(self, grid):
        return np.full(grid.n, float(self.value))

    def spatial_shifted(self, grid, offsets):
        return np.full((len(offsets), grid.n), float(self.value))

    def spatial_derivative(self, grid, order):
        if order == 0:
            return self.spatial_samples(grid)
        return np.zeros(grid.n)


@dataclass(frozen=True)
class SinusoidMedium(MediumProfile):
    """``amplitude * sin(2 pi r / wavelength + phase)``."""

    amplitude: float = 0.0
    wavelength: float = 1.0
    phase: float = 0.0

    kind = "sinusoid"

    def _check(self, grid):
        m = grid.length / self.wavelength
        if abs(m - round(m)) > 1e-9 * max(1.0, abs(m)):
            raise AliasingError(
                f"sinusoid wavelength {self.wavelength} is not a divisor of the "
                f"period {grid.length}"
            )
        if abs(round(m)) >= grid.n // 2:
            raise AliasingError(
                f"sinusoid mode {round(m)} is at or above the Nyquist mode {grid.n // 2}"
            )

    def evaluate(self, x):
        return self.amplitude * np.sin(2.0 * np.pi * np.asarray(x) / self.wavelength + self.phase)

    def spatial_samples(self, grid):
        self._check(grid)
        return self.evaluate(grid.r_values)

    def spatial_derivative(self, grid, order):
        self._check(grid)
        q = 2.0 * np.pi / self.wavelength
        arg = q * grid.r_values + self.phase + order * np.pi / 2.0
        return self.amplitude * q**order * np.sin(arg)


@dataclass(frozen=True)
class GaussianBump(MediumProfile):
    """Periodised ``amplitude * exp(-(r - center)^2 / (2 width^2))``."""

    amplitude: float = 0.0
    center: float = 0.0
    width: float = 1.0

    kind = "gaussian-bump"

    def _check(self, grid):
        tail = math.exp(-0.5 * (grid.kappa_nyquist * self.width) ** 2)
        if tail > _BANDLIMIT_TOL:
            raise AliasingError(
                f"gaussian-bump width {self.width} is not resolved: spectral tail "
                f"{tail:.2e} at the Nyquist wavenumber"
            )

    def evaluate(self, x, period):
        x = np.asarray(x, dtype=float)
        images = np.arange(-3, 4) * period
        d = x[..., None] - self.center - images
        return self.amplitude * np.exp(-0.5 * (d / self.width) ** 2).sum(axis=-1)

    def spatial_samples(self, grid):
        self._check(grid)
        return self.evaluate(grid.r_values, grid.length)


@dataclass(frozen=True, eq=False)
class TabulatedMedium(MediumProfile):
    """Samples of one spatial period, uniformly spaced from ``r = 0``."""

    values: np.ndarray = None

    kind = "tabulated"

    def spatial_samples(self, grid):
        vals = np.asarray(self.values, dtype=float)
        m = vals.size
        coef = sfft.rfft(vals) / m
        scale = max(float(np.max(np.abs(coef))), 1e-300)
        half = grid.n // 2
        if m % 2 == 0 and abs(coef[-1]) > 1e-10 * scale:
            raise AliasingError("tabulated medium has content at its own Nyquist mode")
        if coef.size - 1 >= half and np.any(np.abs(coef[half:]) > 1e-10 * scale):
            raise AliasingError(
                "tabulated medium has content at or above the grid Nyquist mode"
            )
        out = np.zeros(half + 1, dtype=complex)
        keep = min(coef.size, half)
        if m % 2 == 0:
            keep = min(keep, coef.size - 1)
        out[:keep] = coef[:keep]
        return sfft.irfft(out * grid.n, n=grid.n)


@dataclass(frozen=True)
class LinearRamp(MediumProfile):
    """``offset + slope*(x - origin) + curvature*(x - origin)^2`` on a window.

    Not periodic: evaluated in unwrapped coordinates, and only inside
    ``window = (lo, hi)``.  The optional quadratic term exists for
    series-termination checks of degree-2 media.
    """

    slope: float = 0.0
    offset: float = 0.0
    curvature: float = 0.0
    origin: float = 0.0
    window: tuple = (-math.inf, math.inf)

    kind = "linear-ramp"
    periodic = False

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.window
        if np.any(x < lo - 1e-12) or np.any(x > hi + 1e-12):
            raise WindowError(
                f"linear-ramp evaluated on [{x.min():.4g}, {x.max():.4g}], "
                f"outside its window [{lo}, {hi}]"
            )
        d = x - self.origin
        return self.offset + self.slope * d + self.curvature * d * d

    def derivative(self, x, order):
        x = np.asarray(x, dtype=float)
        d = x - self.origin
        if order == 0:
            return self.evaluate(x)
        self.evaluate(x)
        if order == 1:
            return self.slope + 2.0 * self.curvature * d
        if order == 2:
            return np.full_like(d, 2.0 * self.curvature)
        return np.zeros_like(d)

    def spatial_samples(self, grid):
        return self.evaluate(grid.r_values)

    def spatial_shifted(self, grid, offsets):
        return self.evaluate(np.add.outer(np.asarray(offsets, float), grid.r_values))

    def spatial_derivative(self, grid, order):
        return self.derivative(grid.r_values, order)


def medium_spatial_at(profile, grid, x):
    """Spatial part at arbitrary points (used by independent oracles)."""
    if isinstance(profile, LinearRamp):
        return profile.evaluate(x)
    if isinstance(profile, SinusoidMedium):
        profile._check(grid)
        return profile.evaluate(x)
    if isinstance(profile, GaussianBump):
        profile._check(grid)
        return profile.evaluate(x, grid.length)
    if isinstance(profile, ConstantMedium):
        return np.full(np.shape(x), float(profile.value))
    return evaluate_trig(profile.spatial_samples(grid), grid, x)


_SHIFTS = {None: 0, "none": 0, "+y/2": 1, "-y/2": -1, 1: 1, -1: -1, 0: 0}


def medium_sample(profile, grid, t, shift=None):
    """Sample the perturbation at time ``t``.

    ``shift=None`` returns values on ``r_values``.  ``shift='+y/2'`` (or
    ``'-y/2'``) returns the table ``w(r_i +/- y_m/2, t)`` with shape
    ``(n_y, n_r)``, rows following the centred ``y_values``.
    """
    try:
        sign = _SHIFTS[shift]
    except (KeyError, TypeError):
        raise ValueError(f"shift must be one of None, '+y/2', '-y/2'; got {shift!r}")
    mod = profile.modulation_at(t)
    if sign == 0:
        return mod * profile.spatial_samples(grid)
    offsets = sign * 0.5 * grid.y_values
    return mod * profile.spatial_shifted(grid, offsets)
