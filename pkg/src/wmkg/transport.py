"""RK4 integration of the four coupled real phase-space transport equations.

With ``A = W2 + W3``, ``P = (D - S) W0 - (H + C) W1 / eps``:

    dW0/dt = -(D - S) A
    dW1/dt = (H + C) A / eps + 2 omega_p0 W2 / eps
    dW2/dt = P - 2 omega_p0 W1 / eps
    dW3/dt = -P

where ``D`` is k-weighted advection, ``S``/``C`` the Moyal sine/cosine of
the medium and ``H`` the nonlocal free symbol.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.fft as sfft

from .errors import SolverAbort, StabilityError
from .moyal import moyal_multipliers
from .wigner import PhaseSpaceDensities

RK4_IMAG_LIMIT = 2.8


@dataclass(frozen=True)
class SolverControls:
    dt: Optional[float]
    t_end: float
    cfl_safety: float = 0.9
    observer_stride: int = 1

    def __post_init__(self):
        if not (0 < self.cfl_safety <= 1):
            raise ValueError(f"cfl_safety must lie in (0, 1], got {self.cfl_safety}")
        if self.t_end < 0:
            raise ValueError(f"t_end must be non-negative, got {self.t_end}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.observer_stride) != self.observer_stride or self.observer_stride < 1:
            raise ValueError(f"observer_stride must be a positive integer, got {self.observer_stride}")


@dataclass
class TransportState:
    densities: PhaseSpaceDensities
    t: float = 0.0
    step_count: int = 0


@dataclass
class Trajectory:
    """Snapshots collected by an integrator, plus the final state."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    final: object = None
    dt: float = 0.0
    nsteps: int = 0


def medium_peak(medium, grid, t0=0.0, t1=0.0):
    if medium is None or medium.is_zero:
        return 0.0
    return medium.max_abs(grid, t0, t1)


def stability_limit(grid, params, medium=None, t0=0.0, t1=0.0):
    """Largest RK4 step allowed by the spectral-radius bound of the transport operator."""
    eps, c, wp0 = params.epsilon, params.c, params.omega_p0
    k_max = grid.k_max
    w_max = medium_peak(medium, grid, t0, t1)
    lam = (2.0 * params.h0(k_max) + 2.0 * wp0 + 2.0 * w_max / wp0) / eps
    lam += (c**2 / wp0) * k_max * grid.kappa_nyquist
    return RK4_IMAG_LIMIT / lam


def resolve_step(controls, limit, solver):
    """Pick ``(dt, nsteps)`` that lands exactly on ``t_end`` within the gate."""
    allowed = controls.cfl_safety * limit
    if controls.dt is None:
        target = allowed
    else:
        if controls.dt > allowed * (1 + 1e-12):
            raise StabilityError(controls.dt, allowed, solver)
        target = controls.dt
    if controls.t_end == 0:
        return target, 0
    nsteps = max(1, math.ceil(controls.t_end / target - 1e-9))
    return controls.t_end / nsteps, nsteps


class TransportOperator:
    """Right-hand side with precomputed multiplier tables.

    The spatial parts of the Moyal multipliers are built once; time enters
    only through the scalar modulation of the medium.
    """

    def __init__(self, grid, params, medium=None):
        self.grid = grid
        self.params = params
        self.medium = medium
        eps, c, wp0 = params.epsilon, params.c, params.omega_p0
        k = grid.k_values[:, None]
        kap = grid.kappa_half()[None, :]
        self.static = medium is None or medium.is_zero
        # r-Fourier multipliers: advection (Nyquist zeroed) and the nonlocal part of H
        adv = 1j * kap * (c**2 / wp0) * k
        adv[:, -1] = 0.0
        self._adv = adv
        self._lap = (c**2 / wp0) * 0.25 * eps**2 * kap**2 * np.ones_like(k)
        self._lap_eps = self._lap / eps
        self._h_local = (c**2 / wp0) * k**2
        self._h_eps = self._h_local / eps
        if not self.static:
            ms, mc = moyal_multipliers(medium, grid, params)
            self._ms = ms  # purely imaginary
            self._mc = mc.astype(complex)
            self._mc_eps = self._mc / eps

    def rhs_stacked(self, w, t):
        n = self.grid.n
        eps, wp0 = self.params.epsilon, self.params.omega_p0
        w0, w1, w2, w3 = w
        a = w2 + w3

        # r-space parts
        a_r = sfft.rfft(a, axis=1)
        d_a = sfft.irfft(self._adv * a_r, n=n, axis=1)
        h_a = sfft.irfft(self._lap * a_r, n=n, axis=1)
        h_a += self._h_local * a
        q = self._adv * sfft.rfft(w0, axis=1)
        q -= self._lap_eps * sfft.rfft(w1, axis=1)
        p = sfft.irfft(q, n=n, axis=1)
        p -= self._h_eps * w1

        if not self.static:
            mod = self.medium.modulation_at(t)
            if mod != 0.0:
                a_y = sfft.rfft(a, axis=0)
                s_a = self._ms * a_y
                c_a = self._mc * a_y
                q = self._ms * sfft.rfft(w0, axis=0)
                q += self._mc_eps * sfft.rfft(w1, axis=0)
                if mod != 1.0:
                    s_a *= mod
                    c_a *= mod
                    q *= mod
                d_a -= sfft.irfft(s_a, n=n, axis=0)
                h_a += sfft.irfft(c_a, n=n, axis=0)
                p -= sfft.irfft(q, n=n, axis=0)

        out = np.empty_like(w)
        np.negative(d_a, out=out[0])
        np.multiply(w2, 2.0 * wp0, out=out[1])
        out[1] += h_a
        out[1] /= eps
        np.multiply(w1, -2.0 * wp0 / eps, out=out[2])
        out[2] += p
        np.negative(p, out=out[3])
        return out

    def __call__(self, d, t):
        return PhaseSpaceDensities.from_stacked(self.rhs_stacked(d.stacked(), t), self.grid, t)


def transport_rhs(d, medium, params, t=0.0):
    """Time derivative of the four densities at time ``t``."""
    return TransportOperator(d.grid, params, medium)(d, t)


def rk4_step(rhs, y, t, dt):
    k1 = rhs(y, t)
    k2 = rhs(y + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = rhs(y + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = rhs(y + dt * k3, t + dt)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def evolve_transport(
    state,
    medium,
    params,
    controls,
    observers: Sequence[Callable] = (),
):
    """Integrate from ``state`` to ``state.t + controls.t_end``.

    Observers are called as ``obs(state)`` with a copied ``TransportState``
    at the start and every ``observer_stride`` steps (and at the end).
    """
    d = state.densities
    grid = d.grid
    t0 = state.t
    limit = stability_limit(grid, params, medium, t0, t0 + controls.t_end)
    dt, nsteps = resolve_step(controls, limit, "transport")
    op = TransportOperator(grid, params, medium)
    y = d.stacked().astype(float)
    traj = Trajectory(dt=dt, nsteps=nsteps)

    def emit(step, t):
        snap = TransportState(PhaseSpaceDensities.from_stacked(y.copy(), grid, t), t, step)
        traj.times.append(t)
        traj.states.append(snap)
        for obs in observers:
            obs(snap)

    emit(state.step_count, t0)
    for step in range(1, nsteps + 1):
        t = t0 + (step - 1) * dt
        y = rk4_step(op.rhs_stacked, y, t, dt)
        if not np.all(np.isfinite(y)):
            raise SolverAbort(state.step_count + step, t + dt, "transport")
        if step % controls.observer_stride == 0 or step == nsteps:
            emit(state.step_count + step, t0 + step * dt)
    traj.final = traj.states[-1]
    return traj


def charge(d, grid=None):
    """Phase-space integral of ``W0``."""
    grid = grid or d.grid
    return float(np.sum(d.w0) * grid.dk * grid.dr)
