"""Heat-flux error of the slab fixtures against the series-resistance solution.

    python3 scripts/slab_convergence.py --dp 0.002 0.001 0.0005
"""

import argparse
import time

from sphtherm.particles import ResolutionSpec
from sphtherm.pipeline import simulate_file
from sphtherm.solver import SolverConfig

FIXTURES = "fixtures"
HEIGHT = 0.05  # m

# fixture -> analytic flux in W/m^2 for 20 K across R_si + sum(d/k) + R_se
ANALYTIC = {
    "slab.yaml": 20.0 / (0.13 + 0.02 / 0.13 + 0.04),
    "two_layer_slab.yaml": 20.0 / (0.13 + 0.01 / 0.13 + 0.01 / 0.035 + 0.04),
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dp", type=float, nargs="+", default=[0.002, 0.001, 0.0005])
    ap.add_argument("--kernel", default="quintic_spline")
    ap.add_argument("--h-over-dp", type=float, default=1.3)
    args = ap.parse_args()

    print(f"{'case':<22}{'dp':>10}{'particles':>11}{'steps':>9}{'flux':>11}{'error %':>10}{'time s':>9}")
    for name, exact in ANALYTIC.items():
        for dp in args.dp:
            t0 = time.perf_counter()
            sim = simulate_file(f"{FIXTURES}/{name}", ResolutionSpec(dp, args.h_over_dp, args.kernel), SolverConfig())
            flux = sim.report.q_internal / HEIGHT
            print(
                f"{name:<22}{dp:>10g}{len(sim.particles):>11}{sim.state.steps_taken:>9}"
                f"{flux:>11.4f}{100 * (flux - exact) / exact:>10.3f}{time.perf_counter() - t0:>9.1f}"
            )


if __name__ == "__main__":
    main()
