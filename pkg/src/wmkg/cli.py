"""Command-line front end: ``wmkg <command> --config run.yaml [--out DIR]``.

Exit status: 0 success, 2 configuration error (the message names the key),
3 solver abort (the message names the step).
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
import scipy.fft as sfft

from .cases import TwoWaveSpec, dispersion_omega, gaussian_packet, plane_wave, two_wave_weights, two_wave_wigner
from .config import ConfigError, load_config
from .errors import AliasingError, GridMismatchError, SolverAbort, StabilityError, WindowError
from .feshbach_villars import fv_split
from .io import Axis, write_field, write_table_csv, write_binary
from .kg import KGState, kg_energy, kg_evolve, kg_stability_limit
from .swl import advect_action, extract_fg, swl_frame
from .transport import SolverControls, TransportState, charge, evolve_transport, stability_limit
from .wigner import decompose_real, wigner_matrix, w_phiphi

COMMANDS = ("wigner", "evolve-wigner", "evolve-kg", "evolve-swl", "compare", "case-two-wave")


# scenario construction -------------------------------------------------------


def initial_fields(cfg, grid):
    init = cfg.initial
    params = cfg.params
    if init is None:
        raise ConfigError("initial", "this command needs an initial condition")
    if init.kind == "plane-waves":
        Phi = np.zeros(grid.n, dtype=complex)
        dPhi = np.zeros(grid.n, dtype=complex)
        for i, w in enumerate(init.waves):
            try:
                a, b = plane_wave(w.amplitude, w.k, grid, params, branch=w.branch)
            except AliasingError as exc:
                raise ConfigError(f"initial.waves[{i}].k", str(exc)) from None
            Phi += a
            dPhi += b
        return Phi, dPhi
    if init.kind == "gaussian-packet":
        try:
            return gaussian_packet(init.amplitude, init.center, init.width, init.k0, grid, params,
                                   branch=init.branch)
        except AliasingError as exc:
            raise ConfigError("initial.width", str(exc)) from None
    Phi = init.Phi
    if Phi.shape != (grid.n,):
        raise ConfigError("initial.file", f"{Phi.size} samples for an n={grid.n} grid")
    if init.dPhi_dt is not None:
        return Phi, init.dPhi_dt
    omega = init.branch * dispersion_omega(params.epsilon * grid.kappa, params)
    return Phi, np.fft.ifft(np.fft.fft(Phi) * (-1j * omega / params.epsilon))


def _controls(cfg, limit, solver_name):
    s = cfg.solver
    if s.dt is not None and s.dt > s.cfl_safety * limit * (1 + 1e-12):
        raise ConfigError(
            "solver.dt",
            f"dt={s.dt:.6g} exceeds the {solver_name} stability limit "
            f"{s.cfl_safety * limit:.6g} (cfl_safety x gate)",
        )
    return SolverControls(s.dt, s.t_end, s.cfl_safety, s.observer_stride)


def _checked_limits(cfg, grid):
    medium, params, t1 = cfg.medium, cfg.params, cfg.solver.t_end
    try:
        return (stability_limit(grid, params, medium, 0.0, t1),
                kg_stability_limit(grid, params, medium, 0.0, t1))
    except (AliasingError, WindowError, ValueError) as exc:
        raise ConfigError("medium", str(exc)) from None


# output helpers --------------------------------------------------------------


class Writer:
    def __init__(self, cfg, grid, out_dir, formats):
        self.cfg, self.grid = cfg, grid
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.formats = formats
        self.written = []

    def _t_axis(self, times):
        dt = times[1] - times[0] if len(times) > 1 else 0.0
        return Axis("t", times[0], dt)

    def field(self, name, times, stack):
        g = self.grid
        axes = [self._t_axis(times), Axis("k", g.k_values[0], g.dk), Axis("r", 0.0, g.dr)]
        self.written += write_field(self.dir, name, np.asarray(stack), axes, self.formats)

    def series(self, name, times, values):
        self.written += write_field(self.dir, name, np.asarray(values, float),
                                    [self._t_axis(times)], self.formats)

    def times(self, times):
        self.written += write_field(self.dir, "times", np.asarray(times, float),
                                    [Axis("snapshot", 0.0, 1.0)], self.formats)

    def wants(self, q):
        return q in self.cfg.outputs.quantities


def _write_density_outputs(w, times, dens, frame=None):
    """Fields derived from a list of PhaseSpaceDensities snapshots."""
    for i, name in enumerate(("W0", "W1", "W2", "W3")):
        if w.wants(name):
            w.field(name, times, [d.stacked()[i] for d in dens])
    if w.wants("W_PhiPhi"):
        w.field("W_PhiPhi", times, [w_phiphi(d) for d in dens])
    if frame is not None and any(w.wants(q) for q in ("f", "g", "J", "residuals")):
        fg = [extract_fg(d, frame) for d in dens]
        if w.wants("f"):
            w.field("f", times, [a.f for a, _ in fg])
        if w.wants("g"):
            w.field("g", times, [a.g for a, _ in fg])
        if w.wants("J"):
            p = w.cfg.params
            w.field("J", times, [2 * p.omega_p0 * (a.f + a.g) / p.c**2 for a, _ in fg])
        if w.wants("residuals"):
            w.series("constraint_residual", times, [float(np.max(np.abs(r))) for _, r in fg])
    if w.wants("charge"):
        w.series("charge", times, [charge(d) for d in dens])


def _densities_of(Phi, dPhi, cfg, grid, t=0.0):
    return decompose_real(wigner_matrix(fv_split(Phi, dPhi, cfg.params, grid, t)))


# commands --------------------------------------------------------------------


def cmd_wigner(cfg, grid, w):
    Phi, dPhi = initial_fields(cfg, grid)
    d = _densities_of(Phi, dPhi, cfg, grid)
    frame = swl_frame(grid, cfg.params, cfg.medium, 0.0)
    w.times([0.0])
    _write_density_outputs(w, [0.0], [d], frame)


def cmd_evolve_wigner(cfg, grid, w):
    lim, _ = _checked_limits(cfg, grid)
    controls = _controls(cfg, lim, "transport")
    Phi, dPhi = initial_fields(cfg, grid)
    d = _densities_of(Phi, dPhi, cfg, grid)
    traj = evolve_transport(TransportState(d), cfg.medium, cfg.params, controls)
    dens = [s.densities for s in traj.states]
    frame = swl_frame(grid, cfg.params, cfg.medium, 0.0)
    w.times(traj.times)
    _write_density_outputs(w, traj.times, dens, frame)


def cmd_evolve_kg(cfg, grid, w):
    _, lim = _checked_limits(cfg, grid)
    controls = _controls(cfg, lim, "kg")
    Phi, dPhi = initial_fields(cfg, grid)
    traj = kg_evolve(KGState(Phi, dPhi, grid), cfg.medium, cfg.params, controls,
                     method=cfg.solver.method)
    w.times(traj.times)
    needs_dens = any(w.wants(q) for q in ("W0", "W1", "W2", "W3", "W_PhiPhi", "f", "g", "J",
                                           "residuals", "charge"))
    if needs_dens:
        dens = [_densities_of(s.Phi, s.dPhi_dt, cfg, grid, s.t) for s in traj.states]
        frame = swl_frame(grid, cfg.params, cfg.medium, 0.0)
        _write_density_outputs(w, traj.times, dens, frame)
    if w.wants("energy"):
        w.series("energy", traj.times, [kg_energy(s, cfg.medium, cfg.params) for s in traj.states])


def cmd_evolve_swl(cfg, grid, w):
    Phi, dPhi = initial_fields(cfg, grid)
    d = _densities_of(Phi, dPhi, cfg, grid)
    frame = swl_frame(grid, cfg.params, cfg.medium, 0.0)
    actions, residual = extract_fg(d, frame)
    s = cfg.solver
    controls = SolverControls(s.dt, s.t_end, s.cfl_safety, s.observer_stride)
    try:
        traj = advect_action(actions, cfg.medium, cfg.params, controls, force=cfg.swl.force)
    except StabilityError as exc:
        raise ConfigError("solver.dt", str(exc)) from None
    times = traj.times
    w.times(times)
    if w.wants("f"):
        w.field("f", times, [a.f for a in traj.states])
    if w.wants("g"):
        w.field("g", times, [a.g for a in traj.states])
    if w.wants("J"):
        p = cfg.params
        w.field("J", times, [2 * p.omega_p0 * (a.f + a.g) / p.c**2 for a in traj.states])
    if w.wants("charge"):
        cell = grid.dk * grid.dr
        w.series("charge", times, [float(np.sum(a.f - a.g) * cell) for a in traj.states])
        w.series("f_total", times, [float(np.sum(a.f) * cell) for a in traj.states])
        w.series("g_total", times, [float(np.sum(a.g) * cell) for a in traj.states])
    if w.wants("residuals"):
        w.series("constraint_residual", [0.0], [float(np.max(np.abs(residual)))])


def cmd_compare(cfg, grid, w):
    lim_t, lim_k = _checked_limits(cfg, grid)
    controls = _controls(cfg, min(lim_t, lim_k), "transport/kg")
    if controls.dt is None:
        # one shared step so both trajectories are sampled at identical times
        shared = controls.cfl_safety * min(lim_t, lim_k)
        controls = SolverControls(shared, controls.t_end, controls.cfl_safety,
                                  controls.observer_stride)
    Phi, dPhi = initial_fields(cfg, grid)
    kg = kg_evolve(KGState(Phi, dPhi, grid), cfg.medium, cfg.params, controls,
                   method=cfg.solver.method)
    tr = evolve_transport(TransportState(_densities_of(Phi, dPhi, cfg, grid)), cfg.medium,
                          cfg.params, controls)
    times = tr.times
    rows = {"t": [], "l2_abs": [], "l2_rel": [], "charge": [], "energy": []}
    w_kg, w_tr = [], []
    for s_kg, s_tr in zip(kg.states, tr.states):
        a = w_phiphi(_densities_of(s_kg.Phi, s_kg.dPhi_dt, cfg, grid, s_kg.t))
        b = w_phiphi(s_tr.densities)
        diff = float(np.sqrt(np.sum((a - b) ** 2) * grid.dk * grid.dr))
        ref = float(np.sqrt(np.sum(a**2) * grid.dk * grid.dr))
        rows["t"].append(s_tr.t)
        rows["l2_abs"].append(diff)
        rows["l2_rel"].append(diff / ref if ref > 0 else 0.0)
        rows["charge"].append(charge(s_tr.densities))
        rows["energy"].append(kg_energy(s_kg, cfg.medium, cfg.params))
        w_kg.append(a)
        w_tr.append(b)
    write_table_csv(w.dir / "compare_l2.csv", rows)
    w.written.append(w.dir / "compare_l2.csv")
    if "bin" in w.formats:
        table = np.column_stack([rows[c] for c in ("t", "l2_abs", "l2_rel", "charge", "energy")])
        path = w.dir / "compare_l2.bin"
        write_binary(path, table, [Axis("snapshot", 0.0, 1.0), Axis("column", 0.0, 1.0)])
        w.written.append(path)
    if w.wants("W_PhiPhi"):
        w.field("W_PhiPhi_kg", times, w_kg)
        w.field("W_PhiPhi_transport", times, w_tr)


def cmd_case_two_wave(cfg, grid, w):
    c = cfg.case
    try:
        spec = TwoWaveSpec(c.amp0, c.amp1, c.k0, c.k1, grid, cfg.params)
    except AliasingError as exc:
        raise ConfigError("case.k0", str(exc)) from None
    times = list(c.times)
    dens = [two_wave_wigner(spec, t) for t in times]
    w.times(times)
    _write_density_outputs(w, times, dens, swl_frame(grid, cfg.params, None, 0.0))
    rows = {"t": [], "r": [], "w1_cross_weight": [], "sin_eta": []}
    for t in times:
        (_, _, pc, _) = two_wave_weights(spec, t)[2]
        eta = spec.eta(grid.r_values, t)
        rows["t"] += [t] * grid.n
        rows["r"] += list(grid.r_values)
        rows["w1_cross_weight"] += list(2.0 * pc.imag)
        rows["sin_eta"] += list(np.sin(eta))
    write_table_csv(w.dir / "w1_cross_peak.csv", rows)
    w.written.append(w.dir / "w1_cross_peak.csv")


HANDLERS = {
    "wigner": cmd_wigner,
    "evolve-wigner": cmd_evolve_wigner,
    "evolve-kg": cmd_evolve_kg,
    "evolve-swl": cmd_evolve_swl,
    "compare": cmd_compare,
    "case-two-wave": cmd_case_two_wave,
}


def build_parser():
    p = argparse.ArgumentParser(prog="wmkg", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", required=True, help="YAML run configuration")
    p.add_argument("--out", help="output directory (overrides outputs.directory)")
    p.add_argument("--threads", type=int, default=1, help="FFT worker threads")
    p.add_argument("--format", choices=("csv", "bin", "both"),
                   help="output format (overrides outputs.formats)")
    return p


def run(cfg, command, out_dir=None, formats=None, threads=1):
    grid = cfg.build_grid()
    if formats is None:
        formats = cfg.outputs.formats
    w = Writer(cfg, grid, out_dir or cfg.outputs.directory, tuple(formats))
    with sfft.set_workers(max(1, int(threads))):
        HANDLERS[command](cfg, grid, w)
    return w.written


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print("config error: --threads: must be at least 1", file=sys.stderr)
        return 2
    formats = None
    if args.format:
        formats = ("csv", "bin") if args.format == "both" else (args.format,)
    try:
        cfg = load_config(args.config)
        base = Path(args.config).parent
        out = args.out or str(base / cfg.outputs.directory)
        written = run(cfg, args.command, out, formats, args.threads)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (AliasingError, WindowError, GridMismatchError) as exc:
        print(f"config error: medium: {exc}", file=sys.stderr)
        return 2
    except SolverAbort as exc:
        print(f"solver abort: {exc}", file=sys.stderr)
        return 3
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
