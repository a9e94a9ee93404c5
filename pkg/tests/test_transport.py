import math

import numpy as np
import pytest
from scipy.linalg import expm

from wmkg.cases import TwoWaveSpec, gaussian_packet, two_wave_wigner
from wmkg.errors import SolverAbort, StabilityError
from wmkg.feshbach_villars import fv_split
from wmkg.grid import SimParams, build_grid
from wmkg.medium import GaussianBump
from wmkg.transport import (
    SolverControls,
    TransportState,
    charge,
    evolve_transport,
    stability_limit,
    transport_rhs,
)
from wmkg.wigner import PhaseSpaceDensities, decompose_real, wigner_matrix

from conftest import SQRT3, TWO_WAVE_L


def _single_wave(n=64, mult=2):
    p = SimParams()
    g = build_grid(n, TWO_WAVE_L * mult, p)
    return p, g, two_wave_wigner(TwoWaveSpec(1.0, 0.0, SQRT3, 0.0, g, p), 0.0)


def test_single_wave_rhs_vanishes():
    p, g, d = _single_wave()
    j = g.index_of_k(SQRT3)
    np.testing.assert_allclose(d.w0[j] * g.dk, 2.0, atol=1e-14)
    np.testing.assert_allclose(d.w2[j] * g.dk, -1.5, atol=1e-14)
    np.testing.assert_allclose(d.w3[j] * g.dk, 2.5, atol=1e-14)
    rhs = transport_rhs(d, None, p)
    scale = np.max(np.abs(d.w3))
    for comp in (rhs.w0, rhs.w1, rhs.w2, rhs.w3):
        assert np.max(np.abs(comp)) <= 1e-13 * scale


def test_zero_densities_rhs():
    p = SimParams()
    g = build_grid(16, 4.0, p)
    rhs = transport_rhs(PhaseSpaceDensities.zeros(g), GaussianBump(0.1, 2.0, 0.8), p)
    assert not np.any(rhs.stacked())


def test_two_wave_cross_term_rhs():
    p = SimParams()
    g = build_grid(64, TWO_WAVE_L * 2, p)
    spec = TwoWaveSpec(1.0, 1.0, SQRT3, 0.0, g, p)
    d = two_wave_wigner(spec, 0.0)
    j = g.index_of_k(SQRT3 / 2)
    eta = spec.eta(g.r_values, 0.0)
    np.testing.assert_allclose(d.w1[j] * g.dk, np.sin(eta), atol=1e-14)
    np.testing.assert_allclose(d.w2[j] * g.dk, -np.cos(eta), atol=1e-14)
    np.testing.assert_allclose(d.w3[j] * g.dk, 3 * np.cos(eta), atol=1e-14)
    rhs = transport_rhs(d, None, p)
    np.testing.assert_allclose(rhs.w1[j] * g.dk, np.cos(eta), atol=1e-12)
    # matches the time derivative of the closed form
    h = 1e-5
    fd = (two_wave_wigner(spec, h).stacked() - two_wave_wigner(spec, -h).stacked()) / (2 * h)
    np.testing.assert_allclose(rhs.stacked() * g.dk, fd * g.dk, atol=1e-8)


def test_free_wave_stationary_over_1000_steps():
    p, g, d = _single_wave(n=32, mult=1)
    dt = 0.9 * stability_limit(g, p)
    traj = evolve_transport(TransportState(d), None, p, SolverControls(dt, 1000 * dt))
    assert traj.nsteps == 1000
    y0, y1 = d.stacked(), traj.final.densities.stacked()
    assert np.linalg.norm(y1 - y0) / np.linalg.norm(y0) <= 1e-10


def test_two_wave_evolution_tracks_closed_form():
    p = SimParams()
    g = build_grid(32, TWO_WAVE_L, p)
    spec = TwoWaveSpec(1.0, 1.0, SQRT3, 0.0, g, p)
    t_end = 2 * math.pi
    traj = evolve_transport(TransportState(two_wave_wigner(spec, 0.0)), None, p,
                            SolverControls(None, t_end))
    exact = two_wave_wigner(spec, t_end).stacked()
    got = traj.final.densities.stacked()
    assert np.max(np.abs(got - exact)) * g.dk <= 1e-8


def test_dt_above_gate_rejected():
    p, g, d = _single_wave(n=16, mult=1)
    limit = stability_limit(g, p)
    with pytest.raises(StabilityError):
        evolve_transport(TransportState(d), None, p, SolverControls(limit, 1.0))


def test_gate_formula():
    p = SimParams(epsilon=0.5, c=2.0, omega_p0=1.5)
    g = build_grid(32, 10.0, p)
    med = GaussianBump(0.4, 5.0, 1.0)
    kmax = math.pi * 0.5 * 32 / 10.0
    lam = (2 * 4 * kmax**2 / 1.5 + 2 * 1.5 + 2 * 0.4 / 1.5) / 0.5 + (4 / 1.5) * kmax * (2 * math.pi * 32 / 20.0)
    assert stability_limit(g, p, med) == pytest.approx(2.8 / lam, rel=1e-6)


def test_nan_aborts():
    p = SimParams()
    g = build_grid(16, 4.0, p)
    d = PhaseSpaceDensities.zeros(g)
    d.w0[3, 3] = np.nan
    with pytest.raises(SolverAbort):
        evolve_transport(TransportState(d), None, p, SolverControls(None, 0.1))


def test_controls_validation():
    with pytest.raises(ValueError):
        SolverControls(-1.0, 1.0)
    with pytest.raises(ValueError):
        SolverControls(None, 1.0, cfl_safety=1.5)
    with pytest.raises(ValueError):
        SolverControls(None, 1.0, observer_stride=0)


def test_observer_snapshots():
    p, g, d = _single_wave(n=16, mult=1)
    seen = []
    traj = evolve_transport(TransportState(d), None, p, SolverControls(None, 0.5, observer_stride=3),
                            observers=[lambda s: seen.append(s.step_count)])
    assert seen[0] == 0 and seen[-1] == traj.nsteps
    assert all(b - a <= 3 for a, b in zip(seen, seen[1:]))
    assert traj.times[-1] == pytest.approx(0.5, abs=1e-14)


def test_charge_examples():
    p, g, d = _single_wave()
    assert charge(d) == pytest.approx(2 * g.length, rel=1e-13)
    assert charge(PhaseSpaceDensities.zeros(g)) == 0.0


def test_charge_conserved_in_medium():
    p = SimParams()
    g = build_grid(64, 32.0, p)
    Phi, dPhi = gaussian_packet(1.0, 10.0, 2.0, 1.0, g, p)
    d = decompose_real(wigner_matrix(fv_split(Phi, dPhi, p, g)))
    traj = evolve_transport(TransportState(d), GaussianBump(0.2, 16.0, 2.0), p,
                            SolverControls(None, 2.0, observer_stride=10))
    q = np.array([charge(s.densities) for s in traj.states])
    assert np.max(np.abs(q - q[0])) / abs(q[0]) <= 1e-10


def _free_matrix(k, kap, p):
    eps, wp0 = p.epsilon, p.omega_p0
    d = 1j * kap * p.c**2 / wp0 * k
    h = p.c**2 / wp0 * (k**2 + eps**2 * kap**2 / 4)
    return np.array([
        [0, 0, -d, -d],
        [0, 0, (h + 2 * wp0) / eps, h / eps],
        [d, -(h + 2 * wp0) / eps, 0, 0],
        [-d, h / eps, 0, 0],
    ], dtype=complex)


def test_free_space_matches_matrix_exponential():
    p = SimParams(epsilon=0.7)
    g = build_grid(16, 2 * math.pi, p)
    rng = np.random.default_rng(11)
    y0 = np.zeros((4,) + g.shape)
    rows = [g.index_of_k(x) for x in (-0.7, 0.0, 0.7, 1.4)]
    r = g.r_values
    for c in range(4):
        for j in rows:
            a = rng.normal(size=3)
            y0[c, j] = a[0] + a[1] * np.cos(r) + a[2] * np.sin(2 * r)
    t_end, dt = 1.0, 2.5e-4
    traj = evolve_transport(TransportState(PhaseSpaceDensities.from_stacked(y0, g)), None, p,
                            SolverControls(dt, t_end))
    coef = np.fft.fft(y0, axis=2)
    out = np.empty_like(coef)
    for j in range(g.n):
        for m in range(g.n):
            out[:, j, m] = expm(_free_matrix(g.k_values[j], g.kappa[m], p) * t_end) @ coef[:, j, m]
    exact = np.fft.ifft(out, axis=2).real
    got = traj.final.densities.stacked()
    assert np.linalg.norm(got - exact) / np.linalg.norm(exact) <= 1e-10
