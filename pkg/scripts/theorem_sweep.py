"""Oracle sweeps for the three existence theorems plus the sharpness constructions.

    python scripts/theorem_sweep.py --jobs 4
"""

import argparse
import sys

from transversal import oracle
from transversal.cli import main as cli_main
from transversal.constructions import hexagon_family, pm_blocks_family, two_blocks_family

SWEEPS = [
    ("3", "2", "6", "50"),
    ("4", "4", "6", "25"),
    ("5", "2", "7", "50"),
]


def sharpness():
    rows = [(f"two_blocks({n}) hamiltonian", oracle.find_rainbow_hamiltonian(two_blocks_family(n)))
            for n in (4, 6)]
    rows += [(f"pm_blocks({n}) perfect matching", oracle.find_rainbow_perfect_matching(pm_blocks_family(n)))
             for n in (4, 5, 6)]
    rows += [(f"hexagon {length}-cycle", oracle.find_rainbow_cycle(hexagon_family(), length))
             for length in (4, 6)]
    for name, res in rows:
        print(f"{name:<32} {res.status:<8} nodes={res.nodes}")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seed", default="11")
    parser.add_argument("--jobs", default="1")
    args = parser.parse_args()
    worst = 0
    for theorem, lo, hi, trials in SWEEPS:
        print(f"== theorem {theorem}, n = {lo}..{hi}, {trials} trials per n")
        code = cli_main(["verify-theorem", "--theorem", theorem, "--n-min", lo, "--n-max", hi,
                         "--trials", trials, "--seed", args.seed, "--jobs", args.jobs])
        worst = max(worst, code)
    print("== sharpness")
    sharpness()
    return worst


if __name__ == "__main__":
    sys.exit(main())
