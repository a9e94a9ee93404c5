"""Compare the Wigner transform of a KG run with a direct transport run.

Prints the relative L2 mismatch of W_PhiPhi over time on a fine and a coarse
grid, plus the conservation diagnostics of both solvers.
"""
import argparse
import time

from wmkg.scenarios import OracleSetup, oracle_equivalence


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[128, 256])
    ap.add_argument("--snapshots", type=int, default=5)
    args = ap.parse_args()
    for n in args.n:
        setup = OracleSetup(n=n)
        t0 = time.perf_counter()
        res = oracle_equivalence(setup, snapshots=args.snapshots)
        elapsed = time.perf_counter() - t0
        print(f"n={n}: transport steps {res.transport_steps}, KG steps {res.kg_steps}, {elapsed:.1f} s")
        for t, e in zip(res.times, res.l2_series):
            print(f"  t={t:7.3f}  rel L2 {e:.3e}")
        print(f"  charge drift {res.charge_drift:.2e}, KG energy drift {res.energy_drift:.2e}")


if __name__ == "__main__":
    main()
