"""How often does the nearest-pair step recover deg h3 as noise grows?

    python3 scripts/degree_recovery.py --trials 50 --rho 0.05
"""

import argparse
import dataclasses
from collections import Counter
from dataclasses import dataclass

from oregcrd import bench


@dataclass
class Config:
    trials: int = 50
    rho: float = 0.05
    seed: int = 7
    deltas: tuple = (0.0, 1e-4, 1e-3, 1e-2, 1e-1)


def sweep(cfg: Config):
    print(f"{'protocol':>10} {'delta':>7}  exact  lower  higher  trivial")
    for protocol in bench.PROTOCOLS:
        for delta in cfg.deltas:
            exp = bench.ExperimentConfig(protocol=protocol, trials=cfg.trials, rho=cfg.rho, delta=delta, seed=cfg.seed)
            tally = Counter()
            for i in range(cfg.trials):
                rec = bench.run_trial(exp, i)
                if rec.trivial:
                    tally["trivial"] += 1
                elif rec.degree == rec.expected_degree:
                    tally["exact"] += 1
                else:
                    tally["lower" if rec.degree < rec.expected_degree else "higher"] += 1
            print(
                f"{protocol:>10} {delta:>7g}  {tally['exact']:>5}  {tally['lower']:>5}"
                f"  {tally['higher']:>6}  {tally['trivial']:>7}"
            )


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--trials", type=int, default=Config.trials)
    p.add_argument("--rho", type=float, default=Config.rho)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--deltas", type=float, nargs="+", default=list(Config.deltas))
    a = p.parse_args()
    sweep(Config(a.trials, a.rho, a.seed, tuple(a.deltas)))
