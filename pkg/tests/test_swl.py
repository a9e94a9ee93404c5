import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmkg.cases import plane_wave
from wmkg.feshbach_villars import fv_split
from wmkg.grid import SimParams, build_grid
from wmkg.medium import LinearRamp, SinusoidMedium
from wmkg.swl import (
    ActionAdvection,
    ActionDensities,
    advect_action,
    compose_from_fg,
    extract_fg,
    local_omega,
    swl_diagonalize,
    swl_frame,
    wave_action,
)
from wmkg.transport import SolverControls
from wmkg.wigner import WignerMatrixField, decompose_real, w_phiphi, wigner_matrix

from conftest import SQRT3, TWO_WAVE_L


def _wave(k, branch=1):
    p = SimParams()
    g = build_grid(64, TWO_WAVE_L * 2, p)
    Phi, dPhi = plane_wave(1.0, k, g, p, branch=branch)
    return p, g, wigner_matrix(fv_split(Phi, dPhi, p, g))


def test_diagonalize_forward_wave():
    p, g, W = _wave(SQRT3)
    frame = swl_frame(g, p)
    j = g.index_of_k(SQRT3)
    np.testing.assert_allclose(frame.zeta[j], 0.5 * math.log(2.0), atol=1e-15)
    Wp, residual = swl_diagonalize(W, frame)
    assert residual * g.dk <= 1e-12
    peak = Wp[j] * g.dk
    np.testing.assert_allclose(peak[:, 0, 0], 2.0, atol=1e-12)
    np.testing.assert_allclose(peak[:, 1, 1], 0.0, atol=1e-12)
    M = W.matrix()[j] * g.dk
    np.testing.assert_allclose(np.trace(peak, axis1=1, axis2=2), np.trace(M, axis1=1, axis2=2), atol=1e-12)
    np.testing.assert_allclose(np.linalg.det(peak), np.linalg.det(M), atol=1e-12)


def test_diagonalize_zero():
    g = build_grid(8, 1.0, SimParams())
    z = np.zeros(g.shape, dtype=complex)
    Wp, residual = swl_diagonalize(WignerMatrixField(z, z, z, g), swl_frame(g, SimParams()))
    assert not np.any(Wp) and residual == 0.0


@given(st.integers(0, 2**32 - 1))
def test_identity_at_rest_wavenumber(seed):
    rng = np.random.default_rng(seed)
    p = SimParams()
    g = build_grid(8, 2.0, p)

    def rand(cplx):
        a = rng.normal(size=g.shape)
        return a + 1j * rng.normal(size=g.shape) if cplx else a + 0j

    W = WignerMatrixField(rand(False), rand(True), rand(False), g)
    frame = swl_frame(g, p)
    j = g.index_of_k(0.0)
    assert np.all(frame.zeta[j] == 0.0)
    Wp, _ = swl_diagonalize(W, frame)
    np.testing.assert_allclose(Wp[j], W.matrix()[j], atol=1e-15)


def test_extract_forward_wave():
    p, g, W = _wave(SQRT3)
    a, residual = extract_fg(decompose_real(W), swl_frame(g, p))
    j = g.index_of_k(SQRT3)
    np.testing.assert_allclose(a.f[j] * g.dk, 2.0, atol=1e-12)
    np.testing.assert_allclose(a.g * g.dk, 0.0, atol=1e-12)
    assert np.max(np.abs(residual)) * g.dk <= 1e-12


def test_backward_propagating_wave_is_forward_action():
    # negative k on the positive-frequency branch
    p, g, W = _wave(-SQRT3)
    a, residual = extract_fg(decompose_real(W), swl_frame(g, p))
    j = g.index_of_k(-SQRT3)
    np.testing.assert_allclose(a.f[j] * g.dk, 2.0, atol=1e-12)
    np.testing.assert_allclose(a.g * g.dk, 0.0, atol=1e-12)
    assert np.max(np.abs(residual)) * g.dk <= 1e-12


def test_negative_frequency_wave_is_backward_action():
    p, g, W = _wave(SQRT3, branch=-1)
    d = decompose_real(W)
    a, residual = extract_fg(d, swl_frame(g, p))
    j = g.index_of_k(SQRT3)
    np.testing.assert_allclose(d.w0[j] * g.dk, -2.0, atol=1e-12)
    np.testing.assert_allclose(a.f * g.dk, 0.0, atol=1e-12)
    np.testing.assert_allclose(a.g[j] * g.dk, 2.0, atol=1e-12)
    assert np.max(np.abs(residual)) * g.dk <= 1e-12


def test_frame_properties():
    p = SimParams()
    g = build_grid(16, 4.0, p)
    frame = swl_frame(g, p, SinusoidMedium(0.5, 4.0))
    assert np.all(frame.R > 0)
    assert np.all(local_omega(g, p) >= p.omega_p0)
    with pytest.raises(ValueError):
        local_omega(g, p, SinusoidMedium(2.0, 4.0))


def _centroid(x, w):
    return float(np.sum(x * w) / np.sum(w))


def test_free_advection_group_velocity():
    p = SimParams()
    g = build_grid(128, TWO_WAVE_L * 8, p)
    K, R = np.meshgrid(g.k_values, g.r_values, indexing="ij")
    r0 = 12.0
    f0 = np.exp(-0.5 * ((K - SQRT3) / 0.3) ** 2 - 0.5 * ((R - r0) / 2.0) ** 2)
    a0 = ActionDensities(f0, np.zeros_like(f0), g)
    out = advect_action(a0, None, p, SolverControls(None, 5.0)).final
    j = g.index_of_k(SQRT3)
    shift = _centroid(g.r_values, out.f[j]) - _centroid(g.r_values, f0[j])
    assert abs(shift - 5.0 * SQRT3 / 2) <= 1e-6


def test_ramp_k_centroid_drift():
    p = SimParams()
    L = 16.0
    g = build_grid(64, L, p)
    ramp = LinearRamp(0.2, window=(0.0, L))
    f0 = np.outer(np.exp(-0.5 * ((g.k_values - 1.0) / 1.0) ** 2), np.ones(g.n))
    a0 = ActionDensities(f0, np.zeros_like(f0), g)
    traj = advect_action(a0, ramp, p, SolverControls(None, 3.0, observer_stride=5), force="printed")
    for t, s in zip(traj.times, traj.states):
        kc = _centroid(g.k_values[:, None], s.f)
        assert kc == pytest.approx(1.0 - 0.1 * t, abs=1e-9)


def test_zero_action_stays_zero():
    p = SimParams()
    g = build_grid(16, 4.0, p)
    z = np.zeros(g.shape)
    out = advect_action(ActionDensities(z, z, g), SinusoidMedium(0.2, 4.0), p, SolverControls(None, 1.0)).final
    assert not np.any(out.f) and not np.any(out.g)


def test_canonical_totals_conserved():
    p = SimParams(epsilon=0.2)
    L = 16.0
    g = build_grid(64, L, p)
    K, R = np.meshgrid(g.k_values, g.r_values, indexing="ij")
    f0 = np.exp(-0.5 * ((K - 1.0) / 0.3) ** 2 - 0.5 * ((R - 5.0) / 1.5) ** 2)
    g0 = np.exp(-0.5 * ((K + 0.5) / 0.3) ** 2 - 0.5 * ((R - 10.0) / 1.5) ** 2)
    out = advect_action(ActionDensities(f0, g0, g), SinusoidMedium(0.3, L), p,
                        SolverControls(None, 4.0), force="canonical").final
    assert abs(out.f.sum() - f0.sum()) / f0.sum() <= 1e-10
    assert abs(out.g.sum() - g0.sum()) / g0.sum() <= 1e-10


def test_invalid_force_mode():
    g = build_grid(8, 1.0, SimParams())
    with pytest.raises(ValueError):
        ActionAdvection(g, SimParams(), None, force="hamiltonian")


def test_wave_action_single_wave():
    p, g, W = _wave(SQRT3)
    frame = swl_frame(g, p)
    d = decompose_real(W)
    wff = w_phiphi(d)
    J = wave_action(wff, frame, p)
    j = g.index_of_k(SQRT3)
    np.testing.assert_allclose(J[j] * g.dk, 4.0, atol=1e-12)
    a, _ = extract_fg(d, frame)
    np.testing.assert_allclose((frame.R * wff)[j] * g.dk, 2.0, atol=1e-12)
    np.testing.assert_allclose(a.f + a.g, frame.R * wff, atol=1e-12)


def test_wave_action_trivial_cases():
    p = SimParams()
    g = build_grid(16, 2 * np.pi, p)
    frame = swl_frame(g, p)
    assert not np.any(wave_action(np.zeros(g.shape), frame, p))
    wff = np.zeros(g.shape)
    j = g.index_of_k(0.0)
    wff[j] = 1.0 / g.dk
    np.testing.assert_allclose(wave_action(wff, frame, p)[j] * g.dk, 2.0, atol=1e-14)


@given(st.integers(0, 2**32 - 1))
def test_two_routes_to_total_action(seed):
    rng = np.random.default_rng(seed)
    p = SimParams(epsilon=0.3)
    g = build_grid(16, 4.0, p)
    frame = swl_frame(g, p, SinusoidMedium(0.4, 4.0))
    a0 = ActionDensities(rng.random(g.shape), rng.random(g.shape), g)
    d = compose_from_fg(a0, frame)
    a, residual = extract_fg(d, frame)
    np.testing.assert_allclose(a.f, a0.f, atol=1e-12)
    np.testing.assert_allclose(a.g, a0.g, atol=1e-12)
    assert np.max(np.abs(residual)) <= 1e-12
    np.testing.assert_allclose(a.f + a.g, frame.R * w_phiphi(d), atol=1e-12)
