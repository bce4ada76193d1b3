"""Print heat-trace coefficients and the remainder decay for a few charges."""
import argparse

from hopflap.heat import heat_trace_asymptotic, heat_trace_coefficients, heat_trace_direct
from hopflap.specialfns import fraction_str


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ks", type=int, nargs="+", default=[0, 1, 2, 3])
    ap.add_argument("--order", type=int, default=5)
    args = ap.parse_args()
    for k in args.ks:
        exp = heat_trace_coefficients(k, args.order)
        print(f"k={k}: " + "  ".join(f"t^{p}:{fraction_str(exp.coefficient(p))}"
                                     for p in range(-1, args.order + 1)))
        gaps = [abs(heat_trace_direct(k, t) - heat_trace_asymptotic(k, t, args.order))
                for t in (0.1, 0.05, 0.025)]
        print(f"      remainder at t=0.1,0.05,0.025: " + ", ".join(f"{g:.3e}" for g in gaps)
              + f"; ratios {gaps[0] / gaps[1]:.1f}, {gaps[1] / gaps[2]:.1f}")


if __name__ == "__main__":
    main()
