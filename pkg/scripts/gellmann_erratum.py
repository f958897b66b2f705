"""Compare the printed qutrit closed-form bound with the determinant bound.

For each a^2 on a grid, reports over the valid (alpha, beta) points:
the largest amount by which each reading of the printed closed form
exceeds the variance product, and the largest product - det gap.
"""

import argparse
import math

import numpy as np

from varprod.bounds import gellmann_printed_bound, gram_det_bound
from varprod.observables import gellmann_set, moment_table
from varprod.states import StateError, qutrit_from_params


def scan(a2: float, steps: int, obs) -> dict:
    a = math.sqrt(a2)
    out = {"valid": 0, "printed": -math.inf, "sin2beta": -math.inf, "det_gap": -math.inf}
    grid = np.linspace(0, 2 * math.pi, steps)
    for alpha in grid:
        for beta in grid:
            try:
                rho = qutrit_from_params(a, alpha, beta)
            except StateError:
                continue
            t = moment_table(rho, obs)
            out["valid"] += 1
            out["det_gap"] = max(out["det_gap"], t.product - gram_det_bound(t))
            for reading in ("printed", "sin2beta"):
                excess = gellmann_printed_bound(a, alpha, beta, reading) - t.product
                out[reading] = max(out[reading], excess)
    return out


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--steps", type=int, default=50)
    p.add_argument("--a2", type=float, nargs="*", default=[0.1, 0.2, 1 / 3, 0.4, 0.5])
    args = p.parse_args(argv)
    obs = gellmann_set()
    print(f"{'a^2':>8} {'valid':>6} {'printed-prod':>14} {'sin2b-prod':>14} {'prod-det':>12}")
    for a2 in args.a2:
        r = scan(a2, args.steps, obs)
        if not r["valid"]:
            print(f"{a2:8.4f} {0:6d}  (no valid points)")
            continue
        print(f"{a2:8.4f} {r['valid']:6d} {r['printed']:14.4e} {r['sin2beta']:14.4e} {r['det_gap']:12.4e}")


if __name__ == "__main__":
    main()
