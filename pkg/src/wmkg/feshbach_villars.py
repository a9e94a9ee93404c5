"""Two-component (Feshbach-Villars) form of the variable-mass wave equation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import check_field_shape, dealias, spectral_derivative
from .medium import medium_sample


@dataclass(frozen=True, eq=False)
class TwoComponentField:
    phi: np.ndarray
    chi: np.ndarray
    grid: object
    t: float = 0.0

    def __post_init__(self):
        check_field_shape(self.grid, self.phi, self.chi)


@dataclass(frozen=True, eq=False)
class TwoByTwoConstants:
    tau0: np.ndarray
    tau1: np.ndarray
    tau2: np.ndarray
    tau3: np.ndarray

    def __iter__(self):
        return iter((self.tau0, self.tau1, self.tau2, self.tau3))


PAULI = TwoByTwoConstants(
    tau0=np.array([[1, 0], [0, 1]], dtype=complex),
    tau1=np.array([[0, 1], [1, 0]], dtype=complex),
    tau2=np.array([[0, -1j], [1j, 0]], dtype=complex),
    tau3=np.array([[1, 0], [0, -1]], dtype=complex),
)


def fv_split(Phi, dPhi_dt, params, grid, t=0.0):
    """(Phi, dPhi/dt) -> (phi, chi) with phi, chi = N (Phi +/- i eps/omega_p0 dPhi/dt)."""
    Phi = np.asarray(Phi, dtype=complex)
    dPhi_dt = np.asarray(dPhi_dt, dtype=complex)
    check_field_shape(grid, Phi, dPhi_dt)
    N = params.split_norm
    drift = (1j * params.epsilon / params.omega_p0) * dPhi_dt
    return TwoComponentField(N * (Phi + drift), N * (Phi - drift), grid, t)


def fv_recombine(psi, params):
    """Inverse of :func:`fv_split`; returns ``(Phi, dPhi_dt)``."""
    two_n = 2.0 * params.split_norm
    Phi = (psi.phi + psi.chi) / two_n
    dPhi_dt = (params.omega_p0 / (1j * params.epsilon)) * (psi.phi - psi.chi) / two_n
    return Phi, dPhi_dt


def mass_term(values, medium, grid, t):
    """``w(r, t) * values`` with two-thirds dealiasing for non-uniform media.

    Both the input and the product are truncated, ``P(w P values)``, which keeps
    the operator symmetric so the discrete KG energy is conserved.
    """
    if medium is None or medium.is_zero:
        return np.zeros_like(values)
    w = medium_sample(medium, grid, t)
    if medium.is_uniform:
        return w * values
    return dealias(w * dealias(values, grid), grid)


def apply_hamiltonian(psi, medium, params, t):
    """Time derivative ``(1/(i eps)) H_m Psi``.

    ``H_m Psi = (tau3 + i tau2)/(2 omega_p0) (-eps^2 c^2 lap + w) Psi + omega_p0 tau3 Psi``.
    Since ``(tau3 + i tau2)`` maps ``(u, v)`` to ``(u + v, -(u + v))`` only the
    sum ``phi + chi`` needs the spatial operator.
    """
    grid = psi.grid
    eps, c, wp0 = params.epsilon, params.c, params.omega_p0
    s = psi.phi + psi.chi
    op = -(eps * c) ** 2 * spectral_derivative(s, grid, 2) + mass_term(s, medium, grid, t)
    op = op / (2.0 * wp0)
    scale = 1.0 / (1j * eps)
    return TwoComponentField(
        scale * (op + wp0 * psi.phi),
        scale * (-op - wp0 * psi.chi),
        grid,
        psi.t,
    )
