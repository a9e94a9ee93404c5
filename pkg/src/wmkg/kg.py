"""Pseudo-spectral RK4 solver for the variable-mass Klein-Gordon equation.

    eps^2 Phi_tt - eps^2 c^2 Phi_rr + (omega_p0^2 + w(r, t)) Phi = 0

integrated as the first-order system ``(Phi, Pi = Phi_t)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cases import dispersion_omega
from .errors import SolverAbort
from .feshbach_villars import apply_hamiltonian, fv_recombine, fv_split, mass_term
from .grid import check_field_shape, spectral_derivative
from .transport import RK4_IMAG_LIMIT, Trajectory, medium_peak, resolve_step, rk4_step

__all__ = [
    "KGState",
    "dispersion_omega",
    "kg_stability_limit",
    "kg_evolve",
    "kg_energy",
]


@dataclass
class KGState:
    Phi: np.ndarray
    dPhi_dt: np.ndarray
    grid: object
    t: float = 0.0
    step_count: int = 0

    def __post_init__(self):
        self.Phi = np.asarray(self.Phi, dtype=complex)
        self.dPhi_dt = np.asarray(self.dPhi_dt, dtype=complex)
        check_field_shape(self.grid, self.Phi, self.dPhi_dt)


def kg_stability_limit(grid, params, medium=None, t0=0.0, t1=0.0):
    """RK4 limit ``2.8 / nu_max`` with ``nu_max = sqrt(c^2 k_max^2 + omega_p0^2 + max w) / eps``."""
    w_max = medium_peak(medium, grid, t0, t1)
    nu = np.sqrt(params.c**2 * grid.k_max**2 + params.omega_p0**2 + w_max) / params.epsilon
    return RK4_IMAG_LIMIT / nu


def _wave_rhs(grid, params, medium):
    eps, c, wp0 = params.epsilon, params.c, params.omega_p0
    n = grid.n

    def rhs(y, t):
        phi, pi = y[:n], y[n:]
        acc = c**2 * spectral_derivative(phi, grid, 2)
        acc -= (wp0**2 * phi + mass_term(phi, medium, grid, t)) / eps**2
        return np.concatenate([pi, acc])

    return rhs


def _spinor_rhs(grid, params, medium):
    from .feshbach_villars import TwoComponentField

    n = grid.n

    def rhs(y, t):
        d = apply_hamiltonian(TwoComponentField(y[:n], y[n:], grid, t), medium, params, t)
        return np.concatenate([d.phi, d.chi])

    return rhs


def kg_evolve(state, medium, params, controls, observers=(), method="wave"):
    """Advance ``state`` by ``controls.t_end`` with RK4.

    ``method='wave'`` integrates ``(Phi, Phi_t)``; ``method='spinor'``
    integrates the Feshbach-Villars pair and recombines at each snapshot.
    """
    grid = state.grid
    n = grid.n
    t0 = state.t
    limit = kg_stability_limit(grid, params, medium, t0, t0 + controls.t_end)
    dt, nsteps = resolve_step(controls, limit, "kg")
    if method == "wave":
        rhs = _wave_rhs(grid, params, medium)
        y = np.concatenate([state.Phi, state.dPhi_dt])
    elif method == "spinor":
        rhs = _spinor_rhs(grid, params, medium)
        psi = fv_split(state.Phi, state.dPhi_dt, params, grid, t0)
        y = np.concatenate([psi.phi, psi.chi])
    else:
        raise ValueError(f"method must be 'wave' or 'spinor', got {method!r}")

    def to_state(y, t, step):
        if method == "wave":
            return KGState(y[:n].copy(), y[n:].copy(), grid, t, step)
        from .feshbach_villars import TwoComponentField

        Phi, dPhi = fv_recombine(TwoComponentField(y[:n], y[n:], grid, t), params)
        return KGState(Phi, dPhi, grid, t, step)

    traj = Trajectory(dt=dt, nsteps=nsteps)

    def emit(step, t):
        snap = to_state(y, t, step)
        traj.times.append(t)
        traj.states.append(snap)
        for obs in observers:
            obs(snap)

    emit(state.step_count, t0)
    for step in range(1, nsteps + 1):
        t = t0 + (step - 1) * dt
        y = rk4_step(rhs, y, t, dt)
        if not np.all(np.isfinite(y)):
            raise SolverAbort(state.step_count + step, t + dt, "kg")
        if step % controls.observer_stride == 0 or step == nsteps:
            emit(state.step_count + step, t0 + step * dt)
    traj.final = traj.states[-1]
    return traj


def kg_energy(state, medium, params, grid=None):
    """``sum dr [eps^2 |Phi_t|^2 + eps^2 c^2 |Phi_r|^2 + omega_p^2 |Phi|^2]``.

    The medium part uses the same dealiased product as the solver, so this is
    the quantity the semi-discrete system conserves.
    """
    grid = grid or state.grid
    eps, c = params.epsilon, params.c
    grad = spectral_derivative(state.Phi, grid, 1)
    dens = (
        eps**2 * np.abs(state.dPhi_dt) ** 2
        + (eps * c) ** 2 * np.abs(grad) ** 2
        + params.omega_p0**2 * np.abs(state.Phi) ** 2
    )
    if medium is not None and not medium.is_zero:
        dens = dens + (np.conj(state.Phi) * mass_term(state.Phi, medium, grid, state.t)).real
    return float(np.sum(dens) * grid.dr)
