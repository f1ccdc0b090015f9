"""Measure how often the proof-guided moves alone (no oracle fallback) stall.

    python scripts/stall_rate.py --n-min 3 --n-max 7 --trials 100 --seed 0
"""

import argparse
from collections import Counter
from dataclasses import dataclass

from transversal.generators import GenSpec, derive_seed, random_near_miss_family, random_valid_family
from transversal.solver import NO_MOVE, solve


@dataclass(frozen=True)
class StallConfig:
    n_min: int = 3
    n_max: int = 6
    trials: int = 50
    seed: int = 0
    near_miss: bool = False


def targets_for(n):
    return ["ham"] + [f"cycle:{length}" for length in range(4, 2 * n - 1, 2)] + ["pm"]


def measure(cfg: StallConfig):
    rows = []
    for n in range(cfg.n_min, cfg.n_max + 1):
        for target in targets_for(n):
            stalls, stall_states, moves = 0, Counter(), Counter()
            for t in range(cfg.trials):
                seed = derive_seed(derive_seed(cfg.seed, n), t)
                spec = GenSpec(n, n if target == "pm" else 2 * n, 0, seed)
                family = random_near_miss_family(spec) if cfg.near_miss else random_valid_family(spec)
                res = solve(family, target, fallback=False, seed=seed)
                moves.update(k for k, v in res.stats.items() if k.endswith(".fired") for _ in range(v))
                if res.outcome == NO_MOVE:
                    stalls += 1
                    stall_states[res.stall] += 1
            rows.append((n, target, stalls, cfg.trials, stall_states, moves))
    return rows


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-min", type=int, default=3)
    parser.add_argument("--n-max", type=int, default=6)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--near-miss", action="store_true", help="one-edge-short families instead")
    parser.add_argument("--verbose", action="store_true", help="also list fired moves")
    cfg_args = parser.parse_args()
    cfg = StallConfig(cfg_args.n_min, cfg_args.n_max, cfg_args.trials, cfg_args.seed, cfg_args.near_miss)
    print(f"{'n':>2} {'target':<9} {'stalls':>7}  stall states")
    for n, target, stalls, trials, states, moves in measure(cfg):
        detail = ", ".join(f"{k} x{v}" for k, v in states.most_common(3))
        print(f"{n:>2} {target:<9} {stalls:>3}/{trials:<3}  {detail}")
        if cfg_args.verbose:
            print("   fired: " + ", ".join(f"{k[:-6]} x{v}" for k, v in sorted(moves.items())))


if __name__ == "__main__":
    main()
