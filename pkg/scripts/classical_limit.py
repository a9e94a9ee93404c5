"""Distance between the exact Moyal sine operator and its leading classical term."""
from wmkg.scenarios import CLASSICAL_LADDER, classical_limit_errors, fit_order


def main():
    errs = classical_limit_errors()
    for (eps, n), e in zip(CLASSICAL_LADDER, errs):
        print(f"eps={eps:5.3f} n={n:5d}  L2 error {e:.3e}")
    print(f"fitted order: {fit_order([eps for eps, _ in CLASSICAL_LADDER], errs):.3f}")


if __name__ == "__main__":
    main()
