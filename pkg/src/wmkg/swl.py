"""Short-wavelength limit: local frequency frame, forward/backward action densities.

In the limit the Wigner matrix is brought to diagonal form by the pointwise
similarity ``U = exp(-zeta tau1)`` with ``zeta = log(omega/omega_p0)/2``; the
diagonal carries ``(f, -g)`` where ``f`` and ``g`` are the positive- and
negative-frequency action densities.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverAbort
from .grid import k_derivative, spectral_derivative
from .medium import medium_sample
from .transport import RK4_IMAG_LIMIT, Trajectory, resolve_step, rk4_step
from .wigner import PhaseSpaceDensities

FORCE_MODES = ("printed", "canonical")


@dataclass(frozen=True, eq=False)
class SWLFrame:
    omega_local: np.ndarray
    zeta: np.ndarray
    R: np.ndarray
    grid: object
    t: float = 0.0


@dataclass(frozen=True, eq=False)
class ActionDensities:
    f: np.ndarray
    g: np.ndarray
    grid: object
    t: float = 0.0


def _w_tilde(medium, grid, t):
    if medium is None or medium.is_zero:
        return np.zeros(grid.n)
    return medium_sample(medium, grid, t)


def local_omega(grid, params, medium=None, t=0.0):
    """``sqrt(c^2 k^2 + omega_p0^2 + w(r, t))`` over ``(k, r)``."""
    k2 = grid.k_values[:, None] ** 2
    w2 = params.c**2 * k2 + params.omega_p0**2 + _w_tilde(medium, grid, t)[None, :]
    if np.any(w2 <= 0):
        raise ValueError("local frequency squared is not positive; the medium is overdense")
    return np.sqrt(w2)


def swl_frame(grid, params, medium=None, t=0.0):
    omega = local_omega(grid, params, medium, t)
    R = omega / params.omega_p0
    return SWLFrame(omega, 0.5 * np.log(R), R, grid, t)


def swl_diagonalize(W, frame):
    """``W' = U^{-1} W U`` pointwise, and the largest off-diagonal magnitude of ``W'``.

    Returns ``(w_prime, residual)`` with ``w_prime`` of shape ``(n_k, n_r, 2, 2)``.
    """
    M = W.matrix()
    ch = np.cosh(frame.zeta)[..., None, None]
    sh = np.sinh(frame.zeta)[..., None, None]
    eye = np.eye(2)
    tau1 = np.array([[0.0, 1.0], [1.0, 0.0]])
    U = ch * eye - sh * tau1
    U_inv = ch * eye + sh * tau1
    Wp = U_inv @ M @ U
    residual = float(np.max(np.abs(Wp[..., 0, 1]) + np.abs(Wp[..., 1, 0]))) if Wp.size else 0.0
    return Wp, residual


def _ab(R):
    return (R * R + 1.0) / (2.0 * R), (R * R - 1.0) / (2.0 * R)


def extract_fg(d, frame):
    """Forward/backward densities and the per-node constraint residual."""
    a, b = _ab(frame.R)
    diff = d.w0
    tot = a * d.w3 + b * d.w2
    residual = a * d.w2 + b * d.w3
    return ActionDensities(0.5 * (tot + diff), 0.5 * (tot - diff), d.grid, d.t), residual


def compose_from_fg(actions, frame, w1=None):
    """Densities satisfying the algebraic constraints for given ``(f, g)``.

    ``W1`` defaults to zero; pass a first-order correction to start on the
    slow manifold of the full transport system.
    """
    a, b = _ab(frame.R)
    s = actions.f + actions.g
    w1 = np.zeros_like(s) if w1 is None else np.asarray(w1, dtype=float)
    return PhaseSpaceDensities(actions.f - actions.g, w1, -b * s, a * s, actions.grid, actions.t)


def wave_action(w_ff, frame, params):
    """``J = 2 omega W_PhiPhi / c^2``."""
    return 2.0 * frame.omega_local * np.asarray(w_ff) / params.c**2


class ActionAdvection:
    """Right-hand side of the forward/backward action equations.

    ``force='printed'`` uses ``d_r w / (2 omega_p0)`` in advective form;
    ``force='canonical'`` uses ``d_r omega = d_r w / (2 omega)`` in flux form,
    which conserves the totals of ``f`` and ``g`` exactly.
    """

    def __init__(self, grid, params, medium=None, force="printed"):
        if force not in FORCE_MODES:
            raise ValueError(f"force must be one of {FORCE_MODES}, got {force!r}")
        self.grid, self.params, self.medium, self.force = grid, params, medium, force
        self.static = medium is None or medium.is_zero
        if not self.static:
            self._w = medium.spatial_samples(grid)
            self._dw = medium.spatial_derivative(grid, 1)

    def coefficients(self, t):
        grid, params = self.grid, self.params
        k = grid.k_values[:, None]
        if self.static:
            omega = local_omega(grid, params)
            return params.c**2 * k / omega, np.zeros((1, grid.n))
        mod = self.medium.modulation_at(t)
        k2 = k**2
        omega = np.sqrt(params.c**2 * k2 + params.omega_p0**2 + mod * self._w[None, :])
        dw = mod * self._dw[None, :]
        denom = params.omega_p0 if self.force == "printed" else omega
        return params.c**2 * k / omega, dw / (2.0 * denom)

    def _one(self, f, v, force):
        grid = self.grid
        if self.force == "canonical":
            out = -spectral_derivative(v * f, grid, 1, axis=1)
            if np.any(force):
                out += k_derivative(force * f, grid, 1)
            return out
        out = -v * spectral_derivative(f, grid, 1, axis=1)
        if np.any(force):
            out += force * k_derivative(f, grid, 1)
        return out

    def rhs_stacked(self, y, t):
        v, force = self.coefficients(t)
        return np.stack([self._one(y[0], v, force), self._one(y[1], -v, -force)])

    def stability_limit(self, t0=0.0, t1=0.0):
        grid, params = self.grid, self.params
        v, _ = self.coefficients(t0)
        lam = float(np.max(np.abs(v))) * grid.kappa_nyquist
        if not self.static:
            peak = float(np.max(np.abs(self._dw)))
            mod = self.medium.max_abs(grid, t0, t1) / max(float(np.max(np.abs(self._w))), 1e-300)
            denom = params.omega_p0
            if self.force == "canonical":
                denom = float(np.min(local_omega(grid, params, self.medium, t0)))
            lam += mod * peak / (2.0 * denom) * grid.length / (2.0 * params.epsilon)
        return RK4_IMAG_LIMIT / lam


def action_rhs(actions, medium, params, t=None, force="printed"):
    """``(df/dt, dg/dt)`` as an :class:`ActionDensities`."""
    t = actions.t if t is None else t
    adv = ActionAdvection(actions.grid, params, medium, force)
    out = adv.rhs_stacked(np.stack([actions.f, actions.g]), t)
    return ActionDensities(out[0], out[1], actions.grid, t)


def slow_manifold_w1(actions, medium, params, force="canonical"):
    """First-order ``W1 = -(eps/(2 omega)) d(f + g)/dt`` for a static medium."""
    rates = action_rhs(actions, medium, params, force=force)
    omega = local_omega(actions.grid, params, medium, actions.t)
    return -(params.epsilon / (2.0 * omega)) * (rates.f + rates.g)


def advect_action(actions, medium, params, controls, force="printed", observers=()):
    """RK4 integration of the action equations over ``controls.t_end``."""
    grid = actions.grid
    t0 = actions.t
    adv = ActionAdvection(grid, params, medium, force)
    limit = adv.stability_limit(t0, t0 + controls.t_end)
    dt, nsteps = resolve_step(controls, limit, f"swl advection ({force})")
    y = np.stack([actions.f, actions.g]).astype(float)
    traj = Trajectory(dt=dt, nsteps=nsteps)

    def emit(t):
        snap = ActionDensities(y[0].copy(), y[1].copy(), grid, t)
        traj.times.append(t)
        traj.states.append(snap)
        for obs in observers:
            obs(snap)

    emit(t0)
    for step in range(1, nsteps + 1):
        t = t0 + (step - 1) * dt
        y = rk4_step(adv.rhs_stacked, y, t, dt)
        if not np.all(np.isfinite(y)):
            raise SolverAbort(step, t + dt, "swl")
        if step % controls.observer_stride == 0 or step == nsteps:
            emit(t0 + step * dt)
    traj.final = traj.states[-1]
    return traj
