"""Two interfering plane waves: numerical Wigner densities against closed form.

Evolves the superposition with the transport solver and prints, at a few
times, the mismatch with the analytic densities and the W1 interference
amplitude at the midpoint wavenumber.
"""
import numpy as np

from wmkg.cases import TwoWaveSpec, two_wave_fields, two_wave_wigner
from wmkg.grid import SimParams, build_grid
from wmkg.transport import SolverControls, TransportState, evolve_transport
from wmkg.wigner import decompose_real, wigner_matrix

K0 = np.sqrt(3.0)
LENGTH = 4.0 * np.pi / K0


def main():
    params = SimParams()
    grid = build_grid(32, LENGTH, params)
    spec = TwoWaveSpec(1.0, 1.0, K0, 0.0, grid, params)
    d0 = decompose_real(wigner_matrix(two_wave_fields(spec, 0.0)))
    traj = evolve_transport(TransportState(d0), None, params,
                            SolverControls(None, 2 * np.pi, observer_stride=25))
    j_mid = grid.index_of_k(0.5 * K0)
    states = traj.states
    for s in states[::max(1, len(states) // 8)] + [states[-1]]:
        exact = two_wave_wigner(spec, s.t)
        err = max(np.max(np.abs(getattr(s.densities, f"w{i}") - getattr(exact, f"w{i}")))
                  for i in range(4))
        w1 = s.densities.w1[j_mid] * grid.dk
        print(f"t={s.t:6.3f}  max density error {err:.2e}  "
              f"W1 weight at k0/2: [{w1.min():+.3f}, {w1.max():+.3f}]")


if __name__ == "__main__":
    main()
