"""Discrete 2x2 Wigner matrix of a two-component field and its real densities.

The discrete transform of a pair ``(a, b)`` is

    W_ab(k_j, r_i) = dr/(2 pi eps) * sum_m exp(i k_j y_m / eps)
                     * conj(a(r_i + y_m/2)) * b(r_i - y_m/2)

with ``y_m`` on the centred periodic separation grid and half-node values
obtained by trigonometric interpolation.  The single node ``y = -L/2`` stands
for both ends of the separation range and carries the average of the two.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft

from .errors import ReferenceZeroError
from .grid import _shift_factors, check_field_shape, check_same_grid


@dataclass(frozen=True, eq=False)
class WignerMatrixField:
    w_pp: np.ndarray
    w_pc: np.ndarray
    w_cc: np.ndarray
    grid: object
    t: float = 0.0

    def matrix(self):
        """Stored components as the FV-Hermitian matrix, shape ``(n_k, n_r, 2, 2)``."""
        out = np.empty(self.w_pp.shape + (2, 2), dtype=complex)
        out[..., 0, 0] = self.w_pp
        out[..., 0, 1] = -np.conj(self.w_pc)
        out[..., 1, 0] = self.w_pc
        out[..., 1, 1] = -self.w_cc
        return out


@dataclass(frozen=True, eq=False)
class PhaseSpaceDensities:
    w0: np.ndarray
    w1: np.ndarray
    w2: np.ndarray
    w3: np.ndarray
    grid: object
    t: float = 0.0

    def stacked(self):
        return np.stack([self.w0, self.w1, self.w2, self.w3])

    @classmethod
    def from_stacked(cls, arr, grid, t=0.0):
        return cls(arr[0], arr[1], arr[2], arr[3], grid, t)

    @classmethod
    def zeros(cls, grid, t=0.0):
        z = np.zeros(grid.shape)
        return cls(z, z.copy(), z.copy(), z.copy(), grid, t)


def _half_shifted(values, grid, sign):
    """``values(r_i + sign * y_m / 2)`` for all centred ``y_m``: shape ``(n_y, n_r)``."""
    coef = sfft.fft(np.asarray(values, dtype=complex))
    return sfft.ifft(coef[None, :] * _shift_factors(grid, sign * 0.5 * grid.y_values), axis=1)


def _shift_pair(values, grid):
    return _half_shifted(values, grid, +1), _half_shifted(values, grid, -1)


def _correlation(a_pair, b_pair):
    """``conj(a(r + y/2)) b(r - y/2)`` with the Nyquist row symmetrised.

    Row 0 (``y = -L/2``) also represents ``y = +L/2``; averaging the two keeps
    self-correlations Hermitian in ``y`` and hence the diagonal transforms real.
    """
    a_plus, a_minus = a_pair
    b_plus, b_minus = b_pair
    corr = np.conj(a_plus) * b_minus
    corr[0] = 0.5 * (corr[0] + np.conj(a_minus[0]) * b_plus[0])
    return corr


def y_to_k(table, grid):
    """``dr/(2 pi eps) * sum_m exp(i k_j y_m/eps) table[m]`` along axis 0 (centred in and out)."""
    std = sfft.ifftshift(table, axes=0)
    out = sfft.ifft(std, axis=0) * (grid.n * grid.dr / (2.0 * np.pi * grid.epsilon))
    return sfft.fftshift(out, axes=0)


def k_to_y(table, grid):
    """``dk * sum_j exp(-i k_j y_m/eps) table[j]`` along axis 0; inverse of :func:`y_to_k`."""
    std = sfft.ifftshift(table, axes=0)
    out = sfft.fft(std, axis=0) * grid.dk
    return sfft.fftshift(out, axes=0)


def cross_wigner(a, b, grid):
    """Discrete ``W_ab(k, r)`` with ``conj(a)`` at ``r + y/2`` and ``b`` at ``r - y/2``."""
    check_field_shape(grid, a, b)
    a_pair = _shift_pair(a, grid)
    b_pair = a_pair if b is a else _shift_pair(b, grid)
    return y_to_k(_correlation(a_pair, b_pair), grid)


def wigner_scalar(Phi, grid):
    """Real Wigner function of a single complex field."""
    return cross_wigner(Phi, Phi, grid).real


def wigner_matrix(psi, grid=None, params=None):
    """Wigner matrix components ``W_phiphi``, ``W_phichi``, ``W_chichi`` of ``psi``."""
    if grid is None:
        grid = psi.grid
    check_same_grid(grid, psi.grid)
    phi = _shift_pair(psi.phi, grid)
    chi = _shift_pair(psi.chi, grid)
    w_pp = y_to_k(_correlation(phi, phi), grid)
    w_pc = y_to_k(_correlation(phi, chi), grid)
    w_cc = y_to_k(_correlation(chi, chi), grid)
    return WignerMatrixField(w_pp, w_pc, w_cc, grid, psi.t)


def decompose_real(W, tol=1e-9):
    """Expand ``W`` in the real densities ``W0..W3``.

    Raises ``ValueError`` when the diagonal components carry an imaginary
    residue above ``tol`` relative to their scale, which only happens when the
    transform upstream is broken.
    """
    scale = max(float(np.max(np.abs(W.w_pp))), float(np.max(np.abs(W.w_cc))), 1e-300)
    residue = max(float(np.max(np.abs(W.w_pp.imag))), float(np.max(np.abs(W.w_cc.imag))))
    if residue > tol * scale:
        raise ValueError(
            f"imaginary residue {residue:.3e} in diagonal Wigner components"
        )
    pp, cc = W.w_pp.real, W.w_cc.real
    return PhaseSpaceDensities(
        w0=pp - cc,
        w1=2.0 * W.w_pc.imag,
        w2=2.0 * W.w_pc.real,
        w3=pp + cc,
        grid=W.grid,
        t=W.t,
    )


def recompose(d):
    """Inverse of :func:`decompose_real`."""
    return WignerMatrixField(
        w_pp=(d.w3 + d.w0 + 0j) / 2.0,
        w_pc=(d.w2 + 1j * d.w1) / 2.0,
        w_cc=(d.w3 - d.w0 + 0j) / 2.0,
        grid=d.grid,
        t=d.t,
    )


def w_phiphi(d):
    """``W2 + W3``: the Wigner function of ``phi + chi``."""
    return d.w2 + d.w3


def reconstruct_field(w_ff, r_ref, phi0, grid, params=None, threshold=1e-10):
    """Recover the field whose Wigner function is ``w_ff``, up to a constant phase.

    The inverse k-transform gives the correlation ``C(y, r) = conj(F(r + y/2)) F(r - y/2)``.
    Pairing each node with the reference node gives
    ``F(r) = C(r_ref - r, (r + r_ref)/2) / sqrt(C(0, r_ref))``, which fixes
    ``F(r_ref)`` real-positive; ``phi0`` rotates the result.  ``r_ref`` is
    snapped to the nearest grid node.
    """
    n, dr = grid.n, grid.dr
    corr = k_to_y(np.asarray(w_ff, dtype=complex), grid)  # (n_y, n_r)
    i_ref = int(round(r_ref / dr)) % n
    norm = corr[n // 2, i_ref].real
    field_scale = float(np.sqrt(np.max(np.abs(corr[n // 2].real)))) if corr.size else 0.0
    if not (norm > threshold * max(field_scale, 1e-300) ** 2 and norm > 0):
        raise ReferenceZeroError(
            f"reference node r={i_ref * dr:.6g} is a field zero: "
            f"|F(r_ref)|^2 = {norm:.3e} is below the threshold"
        )

    # separation index m = i_ref - i wrapped into [-n/2, n/2); midpoint in units of dr
    i = np.arange(n)
    m = (i_ref - i + n // 2) % n - n // 2
    mid = (i_ref - m / 2.0) * dr  # = (r_i_image + r_ref)/2

    # trigonometric interpolation of each needed row along r at its midpoint
    rows = corr[m + n // 2]  # (n, n_r)
    coef = sfft.fft(rows, axis=1) / n
    basis = np.exp(1j * mid[:, None] * grid.kappa[None, :])
    basis[:, n // 2] = np.cos(mid * grid.kappa_nyquist)
    values = np.sum(coef * basis, axis=1) / np.sqrt(norm)

    # The antipodal node comes from the symmetrised y = -L/2 row, which keeps
    # only Re[conj(F(r_ref)) F]; its imaginary part follows from the absence
    # of Nyquist content, sum_i (-1)^i F_i = 0.
    i_anti = (i_ref + n // 2) % n
    sign = (-1.0) ** i
    rest = np.sum(np.delete(sign * values, i_anti))
    values[i_anti] = values[i_anti].real + 1j * (-sign[i_anti] * rest).imag
    return values * np.exp(1j * phi0)
