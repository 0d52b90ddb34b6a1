"""Run the perturbation grid for both protocols and compare with the reference tables.

    python3 scripts/reproduce_tables.py --trials 100 --out results/
"""

import argparse
import dataclasses
from dataclasses import dataclass
from pathlib import Path

from oregcrd import bench

# reference means at rho = 0.5 (f, g, f_w, g_w) and trivial counts
REF_MEANS = {
    "bounded": {
        0.5: (0.022653, 0.025051, 0.023507, 0.023625),
        0.1: (0.010184, 0.011490, 0.009629, 0.010082),
        0.01: (0.006653, 0.005394, 0.005647, 0.005647),
        0.001: (0.006625, 0.004582, 0.006277, 0.004317),
    },
    "normalized": {
        0.5: (0.015880, 0.016359, 0.010584, 0.011577),
        0.1: (0.017043, 0.025312, 0.012524, 0.019487),
        0.01: (0.005987, 0.006851, 0.004263, 0.005996),
        0.001: (0.003778, 0.004416, 0.003556, 0.003213),
    },
}
REF_TRIVIAL = {
    "bounded": {0.5: (9, 3, 3, 0), 0.05: (95, 42, 0, 2)},
    "normalized": {0.5: (6, 0, 2, 1), 0.05: (86, 22, 2, 1)},
}


@dataclass
class Config:
    trials: int = 100
    seed: int = 0
    rhos: tuple = (0.5, 0.05)
    deltas: tuple = (0.5, 0.1, 0.01, 0.001)
    workers: int = 1
    out: str = "results"


def run(cfg: Config):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    for protocol in bench.PROTOCOLS:
        results = []
        for rho in cfg.rhos:
            for delta in cfg.deltas:
                exp = bench.ExperimentConfig(protocol=protocol, trials=cfg.trials, rho=rho, delta=delta, seed=cfg.seed)
                results.append(bench.run_suite(exp, cfg.workers))
        (out / f"{protocol}.csv").write_text(bench.to_csv(results))
        (out / f"{protocol}.json").write_text(bench.to_json(results))
        print(f"== {protocol}")
        print(f"{'rho':>5} {'delta':>6} {'qty':>4} {'mean':>10} {'ref':>10} {'ratio':>6}   trivial (ref)")
        for res in results:
            rho, delta = res.config.rho, res.config.delta
            ref_t = REF_TRIVIAL[protocol].get(rho)
            ref_t = ref_t[cfg.deltas.index(delta)] if ref_t and delta in cfg.deltas[:4] else "-"
            refs = REF_MEANS[protocol].get(delta) if rho == 0.5 else None
            for i, q in enumerate(("f", "g", "f_w", "g_w")):
                mean = res.stats[q].mean
                ref = refs[i] if refs else float("nan")
                ratio = max(mean / ref, ref / mean) if refs else float("nan")
                tail = f"   {res.trivial_count:>3} ({ref_t})" if i == 0 else ""
                print(f"{rho:>5g} {delta:>6g} {q:>4} {mean:>10.5f} {ref:>10.5f} {ratio:>6.2f}{tail}")


def parse_args() -> Config:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for f in dataclasses.fields(Config):
        if isinstance(f.default, tuple):
            p.add_argument(f"--{f.name}", type=float, nargs="+", default=f.default)
        else:
            p.add_argument(f"--{f.name}", type=type(f.default), default=f.default)
    ns = p.parse_args()
    return Config(**{k: tuple(v) if isinstance(v, list) else v for k, v in vars(ns).items()})


if __name__ == "__main__":
    run(parse_args())
