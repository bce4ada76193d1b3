"""Convergence of the Green-kernel quadrature with grid size and node rule.

The kernel blows up like 1/theta at coincident points; a Gauss rule in
theta absorbs the sin(theta) Haar density, which makes it converge much
faster than the default rule in cos(theta).
"""
import numpy as np

from hopflap.green import green_apply_quadrature
from hopflap.quadrature import haar_grid
from hopflap.su2 import random_elements
from hopflap.wigner import RepIndex, wigner_t


def worst_error(k, grid, g, max_m=2):
    worst = 0.0
    for M in range(max_m + 1):
        l2 = 2 * M + abs(k)
        for n2 in range(-l2, l2 + 1, 2):
            idx = RepIndex(l2, k, n2)
            val = green_apply_quadrature(k, lambda x: wigner_t(idx, x), g, grid)
            target = wigner_t(idx, g) / (l2 + 1)
            worst = max(worst, abs(val - target) / abs(target))
    return worst


if __name__ == "__main__":
    g = random_elements(1, 7)[0]
    print(f"{'grid':>18} {'k=1':>10} {'k=2':>10}")
    for rule in ("cos", "theta"):
        for n in (8, 16, 32, 64):
            grid = haar_grid(n, n, 2 * n, rule)
            errs = [worst_error(k, grid, g) for k in (1, 2)]
            print(f"{grid.describe():>18} " + " ".join(f"{e:10.2e}" for e in errs))
