"""Short-wavelength limit: deviation of the action equations from full transport.

Runs the epsilon ladder for both force forms, fits the convergence order and
reports how the forced W1 amplitude scales with epsilon.
"""
import argparse

from wmkg.scenarios import SWL_LADDER, SWLSetup, fit_order, swl_deviation


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--no-slow-manifold", action="store_true",
                    help="start with W1 = 0 instead of its slow-manifold value")
    args = ap.parse_args()
    setup = SWLSetup(slow_manifold=not args.no_slow_manifold)
    forces = ("canonical", "printed")
    runs = [swl_deviation(eps, n, setup, forces) for eps, n in SWL_LADDER]
    eps = [r.epsilon for r in runs]
    print(f"{'eps':>6} {'n':>5} " + " ".join(f"{f:>12}" for f in forces) + f" {'g leak':>10} {'W1/W3':>10}")
    for r in runs:
        cols = " ".join(f"{r.deviation[f]:12.3e}" for f in forces)
        print(f"{r.epsilon:6.3f} {r.n:5d} {cols} {r.g_leak:10.3e} {r.w1_amplitude:10.3e}")
    for f in forces:
        order = fit_order(eps, [r.deviation[f] for r in runs])
        f_drift = max(r.totals_drift[f][0] for r in runs)
        g_drift = max(r.totals_drift[f][1] for r in runs)
        print(f"{f}: order {order:.2f}, f total drift {f_drift:.2e}, g total drift {g_drift:.2e}")
    print(f"W1 amplitude slope in epsilon: {fit_order(eps, [r.w1_amplitude for r in runs]):.3f}")
    print(f"max transport charge drift: {max(r.transport_charge_drift for r in runs):.2e}")


if __name__ == "__main__":
    main()
