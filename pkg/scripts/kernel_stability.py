"""dt * lambda_max of the conduction operator for each kernel family.

Forward Euler is stable for dt * lambda_max <= 2. The step is the diffusion
limit 0.5 h^2 / k on an insulated square lattice.

    python3 scripts/kernel_stability.py --h-over-dp 1.2 1.3 1.5
"""

import argparse

import numpy as np
from scipy.sparse.linalg import eigsh

from sphtherm.kernels import FAMILIES, KernelSpec
from sphtherm.particles import build_neighborhoods, make_particles
from sphtherm.solver import HeatOperator, diffusion_dt


def lattice(n, dp):
    g = (np.arange(n) + 0.5) * dp
    return np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--h-over-dp", type=float, nargs="+", default=[1.2, 1.3, 1.5])
    ap.add_argument("--n", type=int, default=30, help="lattice is n x n")
    ap.add_argument("--k", type=float, default=1.0)
    args = ap.parse_args()

    dp = 1e-3
    print(f"{'kernel':<16}{'h/dp':>6}{'dt*lambda':>11}  stable")
    for family in sorted(FAMILIES):
        for ratio in args.h_over_dp:
            spec = KernelSpec(ratio * dp, family)
            ps = build_neighborhoods(make_particles(lattice(args.n, dp), args.k, dp * dp), spec)
            lam = -eigsh(HeatOperator(ps).laplacian, k=1, which="SA", return_eigenvectors=False)[0]
            x = diffusion_dt(spec.h, args.k) * lam
            print(f"{family:<16}{ratio:>6g}{x:>11.3f}  {'yes' if x <= 2 else 'no'}")


if __name__ == "__main__":
    main()
