"""Closed-form fields: plane waves, their superposition and Gaussian packets.

A wave of wavenumber ``k`` on branch ``+1`` is ``exp(i(k r - omega t)/eps)``
with ``omega = sqrt(c^2 k^2 + omega_p0^2) > 0``; branch ``-1`` flips the sign of
the frequency.  Backward propagation on the positive branch is expressed by a
negative ``k``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AliasingError
from .feshbach_villars import TwoComponentField
from .wigner import PhaseSpaceDensities


def dispersion_omega(k, params):
    """Free dispersion ``sqrt(c^2 k^2 + omega_p0^2)``."""
    return np.sqrt(params.c**2 * np.asarray(k, dtype=float) ** 2 + params.omega_p0**2)


def plane_wave(amplitude, k, grid, params, t=0.0, branch=1):
    """``(Phi, dPhi/dt)`` of one plane wave; ``k`` must be on the grid."""
    _check_wave_k(grid, k, "k")
    eps = params.epsilon
    omega = branch * float(dispersion_omega(k, params))
    Phi = amplitude * np.exp(1j * (k * grid.r_values - omega * t) / eps)
    return Phi, (-1j * omega / eps) * Phi


def gaussian_packet(amplitude, center, width, k0, grid, params, t=0.0, branch=1, tail_tol=1e-12):
    """Periodised Gaussian envelope times a carrier, with a single-branch time derivative.

    The time derivative is built mode by mode from the free dispersion so that
    the packet lies on one frequency branch.  The envelope must be resolved:
    its spectral tail at the Nyquist wavenumber must stay below ``tail_tol``.
    """
    eps = params.epsilon
    kappa0 = k0 / eps
    if np.exp(-0.5 * ((grid.kappa_nyquist - abs(kappa0)) * width) ** 2) > tail_tol:
        raise AliasingError(
            f"packet width {width} at k0={k0} is not resolved on n={grid.n}"
        )
    images = np.arange(-3, 4) * grid.length
    d = grid.r_values[:, None] - center - images
    env = np.exp(-0.5 * (d / width) ** 2).sum(axis=1)
    Phi = amplitude * env * np.exp(1j * kappa0 * (grid.r_values - center))
    coef = np.fft.fft(Phi)
    omega = branch * dispersion_omega(eps * grid.kappa, params)
    Phi_t = np.fft.ifft(coef * np.exp(-1j * omega * t / eps))
    dPhi = np.fft.ifft(coef * np.exp(-1j * omega * t / eps) * (-1j * omega / eps))
    return Phi_t, dPhi


def _check_wave_k(grid, k, name):
    j = grid.index_of_k(k)
    if j is None:
        raise AliasingError(f"{name}={k:.6g} is not on the k grid (dk={grid.dk:.6g})")
    if j == 0:
        # the Nyquist sample (-1)^i interpolates as a cosine, not as a travelling wave
        raise AliasingError(f"{name}={k:.6g} sits on the Nyquist node -k_max")


@dataclass(frozen=True, eq=False)
class TwoWaveSpec:
    amp0: float
    amp1: float
    k0: float
    k1: float
    grid: object
    params: object

    def __post_init__(self):
        g = self.grid
        _check_wave_k(g, self.k0, "k0")
        _check_wave_k(g, self.k1, "k1")
        mid = 0.5 * (self.k0 + self.k1)
        if g.index_of_k(mid) is None:
            raise AliasingError(
                f"(k0+k1)/2={mid:.6g} is not on the k grid (dk={g.dk:.6g}); "
                "choose the period so both waves and their midpoint are grid nodes"
            )

    @property
    def omega0(self):
        return float(dispersion_omega(self.k0, self.params))

    @property
    def omega1(self):
        return float(dispersion_omega(self.k1, self.params))

    @property
    def delta_k(self):
        return self.k1 - self.k0

    @property
    def delta_omega(self):
        return self.omega1 - self.omega0

    def eta(self, r, t):
        return (self.delta_k * np.asarray(r) - self.delta_omega * t) / self.params.epsilon

    def waves(self):
        return ((self.amp0, self.k0, self.omega0), (self.amp1, self.k1, self.omega1))


def two_wave_fields(spec, t, params=None):
    """Feshbach-Villars pair of the superposition at time ``t`` (normalisation 1/2)."""
    params = params or spec.params
    grid, eps, wp0 = spec.grid, params.epsilon, params.omega_p0
    phi = np.zeros(grid.n, dtype=complex)
    chi = np.zeros(grid.n, dtype=complex)
    scale = 2.0 * params.split_norm  # 1 for the 1/2 convention
    for amp, k, omega in spec.waves():
        carrier = np.exp(1j * (k * grid.r_values - omega * t) / eps)
        phi += scale * 0.5 * amp * (wp0 + omega) / wp0 * carrier
        chi += scale * 0.5 * amp * (wp0 - omega) / wp0 * carrier
    return TwoComponentField(phi, chi, grid, t)


def two_wave_weights(spec, t, params=None):
    """Closed-form Wigner components as a list of ``(k, w_pp, w_pc, w_cc)``.

    Entries are integrated weights (Delta-k sums) at each of the three peaks,
    as functions over r: arrays of length n.
    """
    params = params or spec.params
    wp0 = params.omega_p0
    r = spec.grid.r_values
    scale = (2.0 * params.split_norm) ** 2
    out = []
    ones = np.ones_like(r)
    for amp, k, omega in spec.waves():
        a2 = amp * amp
        out.append((
            k,
            scale * a2 * (omega + wp0) ** 2 / (4 * wp0**2) * ones,
            -scale * a2 * params.c**2 * k**2 / (4 * wp0**2) * ones + 0j,
            scale * a2 * (omega - wp0) ** 2 / (4 * wp0**2) * ones,
        ))
    (a0, k0, w0), (a1, k1, w1) = spec.waves()
    eta = spec.eta(r, t)
    ce = np.cos(eta)
    pref = scale * a0 * a1 / (4 * wp0**2)
    # conj(wave_a) x wave_b lands at (k_a + k_b)/2 with phase exp(+i eta) for a=0, b=1
    w_pp = pref * 2 * (wp0 + w0) * (wp0 + w1) * ce
    w_cc = pref * 2 * (wp0 - w0) * (wp0 - w1) * ce
    w_pc = pref * (
        (wp0 + w0) * (wp0 - w1) * np.exp(1j * eta) + (wp0 + w1) * (wp0 - w0) * np.exp(-1j * eta)
    )
    out.append((0.5 * (k0 + k1), w_pp, w_pc, w_cc))
    return out


def two_wave_wigner(spec, t, params=None, grid=None):
    """Discrete closed-form densities ``W0..W3`` of the superposition."""
    params = params or spec.params
    grid = grid or spec.grid
    shape = grid.shape
    w_pp = np.zeros(shape)
    w_pc = np.zeros(shape, dtype=complex)
    w_cc = np.zeros(shape)
    for k, pp, pc, cc in two_wave_weights(spec, t, params):
        j = grid.index_of_k(k)
        w_pp[j] += pp.real / grid.dk
        w_pc[j] += pc / grid.dk
        w_cc[j] += cc.real / grid.dk
    return PhaseSpaceDensities(
        w0=w_pp - w_cc,
        w1=2.0 * w_pc.imag,
        w2=2.0 * w_pc.real,
        w3=w_pp + w_cc,
        grid=grid,
        t=t,
    )
