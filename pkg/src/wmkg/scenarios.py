"""Reference experiments shared by the scripts and the acceptance suite."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cases import gaussian_packet
from .feshbach_villars import fv_split
from .grid import SimParams, build_grid
from .kg import KGState, kg_energy, kg_evolve
from .medium import SinusoidMedium
from .moyal import MoyalOperatorSpec, classical_sine, moyal_apply
from .swl import (
    ActionDensities,
    advect_action,
    compose_from_fg,
    extract_fg,
    slow_manifold_w1,
    swl_frame,
)
from .transport import SolverControls, TransportState, charge, evolve_transport, stability_limit
from .wigner import decompose_real, w_phiphi, wigner_matrix, wigner_scalar


def fit_order(xs, ys):
    """Least-squares slope of ``log(ys)`` against ``log(xs)``."""
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


@dataclass(frozen=True)
class OracleSetup:
    n: int = 256
    length: float = 128.0
    medium_amplitude: float = 0.1
    medium_wavelength: float = 32.0
    center: float = 40.0
    width: float = 3.0
    k0: float = 1.0
    t_end: float = 10.0
    kg_substeps: int = 4
    kg_dt_max: float = 0.006


@dataclass
class OracleResult:
    n: int
    l2_rel: float
    charge_drift: float
    energy_drift: float
    transport_steps: int
    kg_steps: int
    times: list = field(default_factory=list)
    l2_series: list = field(default_factory=list)


def oracle_equivalence(setup=OracleSetup(), snapshots=1):
    """Wigner transform of the KG trajectory against the transport trajectory.

    The transport run uses 0.9 of its stability gate.  The KG run takes an
    integer number of substeps per transport step, at least ``kg_substeps``
    and enough to keep its step under ``kg_dt_max``, so snapshots coincide
    and the RK4 energy error (which scales as dt^5) stays below 1e-9.  About
    ``snapshots`` comparisons are made after the initial one.
    """
    params = SimParams()
    grid = build_grid(setup.n, setup.length, params)
    medium = SinusoidMedium(setup.medium_amplitude, setup.medium_wavelength)
    Phi, dPhi = gaussian_packet(1.0, setup.center, setup.width, setup.k0, grid, params,
                                tail_tol=1e-6)
    d0 = decompose_real(wigner_matrix(fv_split(Phi, dPhi, params, grid)))
    dt = 0.9 * stability_limit(grid, params, medium)
    nsteps = math.ceil(setup.t_end / dt)
    dt = setup.t_end / nsteps
    stride = max(1, nsteps // snapshots)
    sub = max(setup.kg_substeps, math.ceil(dt / setup.kg_dt_max))
    tr = evolve_transport(TransportState(d0), medium, params,
                          SolverControls(dt, setup.t_end, observer_stride=stride))
    kg = kg_evolve(KGState(Phi, dPhi, grid), medium, params,
                   SolverControls(dt / sub, setup.t_end, observer_stride=stride * sub))
    series = []
    for s_tr, s_kg in zip(tr.states, kg.states):
        a = wigner_scalar(s_kg.Phi, grid)
        b = w_phiphi(s_tr.densities)
        series.append(float(np.linalg.norm(a - b) / np.linalg.norm(a)))
    q = [charge(s.densities) for s in tr.states]
    e = [kg_energy(s, medium, params) for s in kg.states]
    return OracleResult(
        n=setup.n,
        l2_rel=series[-1],
        charge_drift=abs(q[-1] - q[0]) / abs(q[0]),
        energy_drift=max(abs(x - e[0]) for x in e) / e[0],
        transport_steps=tr.nsteps,
        kg_steps=kg.nsteps,
        times=list(tr.times),
        l2_series=series,
    )


@dataclass(frozen=True)
class SWLSetup:
    length: float = 16.0
    medium_amplitude: float = 0.3
    k0: float = 1.0
    sigma_k: float = 0.2
    r0: float = 5.0
    sigma_r: float = 1.2
    t_end: float = 4.0
    slow_manifold: bool = True


# epsilon -> n keeping k_max = pi eps n / L fixed
SWL_LADDER = ((0.2, 64), (0.1, 128), (0.05, 256))


@dataclass
class SWLResult:
    epsilon: float
    n: int
    deviation: dict
    totals_drift: dict
    g_leak: float
    w1_amplitude: float
    transport_charge_drift: float


def swl_deviation(epsilon, n, setup=SWLSetup(), forces=("canonical", "printed")):
    """Full transport versus the short-wavelength action equations.

    The initial densities are built from a phase-space Gaussian ``f`` with
    ``g = 0`` and evolved both ways; the deviation is the relative L2 norm of
    the difference of ``f`` at ``t_end``.
    """
    params = SimParams(epsilon=epsilon)
    grid = build_grid(n, setup.length, params)
    medium = SinusoidMedium(setup.medium_amplitude, setup.length)
    K, R = np.meshgrid(grid.k_values, grid.r_values, indexing="ij")
    f0 = np.exp(-0.5 * ((K - setup.k0) / setup.sigma_k) ** 2
                - 0.5 * ((R - setup.r0) / setup.sigma_r) ** 2)
    a0 = ActionDensities(f0, np.zeros_like(f0), grid)
    frame = swl_frame(grid, params, medium)
    w1 = slow_manifold_w1(a0, medium, params) if setup.slow_manifold else None
    d0 = compose_from_fg(a0, frame, w1)
    tr = evolve_transport(TransportState(d0), medium, params, SolverControls(None, setup.t_end))
    final = tr.final.densities
    fT, _ = extract_fg(final, frame)
    dev, drift = {}, {}
    for force in forces:
        sw = advect_action(a0, medium, params, SolverControls(None, setup.t_end), force=force)
        dev[force] = float(np.linalg.norm(fT.f - sw.final.f) / np.linalg.norm(sw.final.f))
        drift[force] = (
            abs(sw.final.f.sum() - f0.sum()) / abs(f0.sum()),
            abs(sw.final.g.sum() - a0.g.sum()),
        )
    q0, q1 = charge(d0), charge(final)
    return SWLResult(
        epsilon=epsilon,
        n=n,
        deviation=dev,
        totals_drift=drift,
        g_leak=float(np.linalg.norm(fT.g) / np.linalg.norm(fT.f)),
        w1_amplitude=float(np.max(np.abs(final.w1)) / np.max(np.abs(final.w3))),
        transport_charge_drift=abs(q1 - q0) / abs(q0),
    )


CLASSICAL_LADDER = ((0.4, 128), (0.2, 256), (0.1, 512), (0.05, 1024))


def classical_limit_errors(ladder=CLASSICAL_LADDER, amplitude=0.3):
    """L2 distance between the sine operator and its leading term, per epsilon."""
    out = []
    for eps, n in ladder:
        params = SimParams(epsilon=eps)
        grid = build_grid(n, 2 * np.pi, params)
        medium = SinusoidMedium(amplitude, 2 * np.pi)
        K, R = np.meshgrid(grid.k_values, grid.r_values, indexing="ij")
        f = np.exp(-0.5 * ((K - 0.5) / 2.0) ** 2) * (1 + 0.5 * np.cos(R))
        exact = moyal_apply(MoyalOperatorSpec("sine", "spectral-exact", medium, params, grid), f)
        lead = classical_sine(f, medium, grid, params)
        out.append(float(np.sqrt(np.sum((exact - lead) ** 2) * grid.dk * grid.dr)))
    return out
