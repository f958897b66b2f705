"""Write the CSV data behind the three figures.

    python scripts/reproduce_figures.py --out-dir figures
"""

import argparse
from pathlib import Path

from varprod.sweeps import SweepSpec, write_sweep

DEFAULT_STEPS = {"fig1": 360, "fig2": 50, "fig3": 360}


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--a2", type=float, default=1.0 / 3.0, help="qutrit parameter a^2")
    args = p.parse_args(argv)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for fig, steps in DEFAULT_STEPS.items():
        rows = write_sweep(SweepSpec(fig, steps, {"a2": args.a2}), out / f"{fig}.csv")
        valid = sum(1 for r in rows if r.get("valid", True))
        print(f"{fig}: {len(rows)} rows ({valid} valid) -> {out / f'{fig}.csv'}")


if __name__ == "__main__":
    main()
