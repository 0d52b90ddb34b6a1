"""Randomised perturbation experiments.

Each trial draws three random factors ``h1, h2, h3``, forms ``f = h1*h3`` and
``g = h2*h3``, adds uniform noise of norm ``delta`` to each, then asks for the
nearest pair with a nontrivial GCRD at search radius ``rho``.  The distances
``|f - f~|`` and ``|g - g~|`` (for both reconstruction modes) are summarised
over the trials that found a GCRD; the others are counted as trivial.

Two protocols differ only in how the products are scaled: ``bounded``
normalises every coefficient polynomial of every factor, ``normalized``
scales each product to unit norm.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .approx import ReconstructionMode, nearest_pair
from .errors import OreGcrdError
from .ore import DiffPoly, normalize, ore_mul
from .polynomial import Poly

PROTOCOLS = ("bounded", "normalized")
QUANTITIES = {
    ReconstructionMode.FIRST_ROW: ("f", "g"),
    ReconstructionMode.WEIGHTED: ("f_w", "g_w"),
}
CSV_COLUMNS = ("rho", "delta", "reconstruction", "max", "mean", "stddev", "trivial_count", "trials")


@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str = "bounded"
    trials: int = 100
    rho: float = 0.5
    delta: float = 0.01
    seed: int = 0
    # None runs both reconstructions
    mode: ReconstructionMode | None = None
    deg_d: tuple[int, int] = (1, 2)
    deg_t: tuple[int, int] = (0, 2)
    # the nearest-pair step sees the noisy operators as generated
    normalize_inputs: bool = False

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ValueError(f"protocol must be one of {PROTOCOLS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.rho > 0:
            raise ValueError("rho must be positive")
        if not self.delta >= 0:
            raise ValueError("delta must be non-negative")
        if self.mode is not None:
            object.__setattr__(self, "mode", ReconstructionMode(self.mode))
        lo, hi = self.deg_d
        if not 1 <= lo <= hi:
            raise ValueError("D-degree range must satisfy 1 <= low <= high")
        lo, hi = self.deg_t
        if not 0 <= lo <= hi:
            raise ValueError("t-degree range must satisfy 0 <= low <= high")

    @property
    def modes(self) -> tuple[ReconstructionMode, ...]:
        return tuple(ReconstructionMode) if self.mode is None else (self.mode,)


@dataclass(frozen=True)
class QuantityStats:
    max: float
    mean: float
    stddev: float

    @classmethod
    def of(cls, values) -> QuantityStats:
        if len(values) == 0:
            return cls(math.nan, math.nan, math.nan)
        a = np.asarray(values, dtype=float)
        return cls(float(a.max()), float(a.mean()), float(a.std()))


@dataclass(frozen=True)
class TrialRecord:
    index: int
    outcome: str  # "found", "coprime", or the failure class name
    degree: int = 0
    expected_degree: int = 0
    perturbations: dict = field(default_factory=dict)

    @property
    def trivial(self) -> bool:
        return self.outcome != "found"


@dataclass(frozen=True)
class TrialStats:
    config: ExperimentConfig
    stats: dict  # quantity name -> QuantityStats
    trivial_count: int
    trials_used: int
    log: tuple = ()

    def rows(self):
        for name, st in self.stats.items():
            yield {
                "rho": self.config.rho,
                "delta": self.config.delta,
                "reconstruction": name,
                "max": st.max,
                "mean": st.mean,
                "stddev": st.stddev,
                "trivial_count": self.trivial_count,
                "trials": self.config.trials,
            }


# -- instance generation --------------------------------------------------

def random_factor(rng: np.random.Generator, deg_d=(1, 2), deg_t=(0, 2)) -> DiffPoly:
    """Coefficients uniform on [-1, 1]; degrees uniform over the given ranges."""
    dd = int(rng.integers(deg_d[0], deg_d[1] + 1))
    dt = int(rng.integers(deg_t[0], deg_t[1] + 1))
    return DiffPoly(tuple(Poly(tuple(rng.uniform(-1, 1, dt + 1))) for _ in range(dd + 1)))


def normalize_coefficients(h: DiffPoly) -> DiffPoly:
    """Scale every nonzero coefficient polynomial to unit norm."""
    return h.map(lambda c: c if c.is_zero() else c.scale(1 / np.linalg.norm(c.coeffs)))


def add_uniform_noise(f: DiffPoly, delta: float, rng: np.random.Generator) -> DiffPoly:
    """Perturb every present coefficient by i.i.d. uniform noise of total norm ``delta``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0 or f.is_zero():
        return f
    noise = [rng.uniform(-1, 1, len(c.coeffs)) for c in f.coeffs]
    nrm = math.sqrt(math.fsum(float(x @ x) for x in noise))
    return DiffPoly(
        tuple(Poly(tuple(np.asarray(c.coeffs) + (delta / nrm) * x)) for c, x in zip(f.coeffs, noise))
    )


def make_instance(cfg: ExperimentConfig, rng: np.random.Generator):
    """Returns ``(f, g, h3)`` with noise already applied to ``f`` and ``g``."""
    h1, h2, h3 = (random_factor(rng, cfg.deg_d, cfg.deg_t) for _ in range(3))
    if cfg.protocol == "bounded":
        h1, h2, h3 = map(normalize_coefficients, (h1, h2, h3))
        f, g = ore_mul(h1, h3), ore_mul(h2, h3)
    else:
        f, g = normalize(ore_mul(h1, h3)), normalize(ore_mul(h2, h3))
    return add_uniform_noise(f, cfg.delta, rng), add_uniform_noise(g, cfg.delta, rng), h3


def trial_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def run_trial(cfg: ExperimentConfig, index: int) -> TrialRecord:
    rng = trial_rng(cfg.seed, index)
    f, g, h3 = make_instance(cfg, rng)
    try:
        near = nearest_pair(f, g, cfg.rho, cfg.modes, normalize=cfg.normalize_inputs)
    except OreGcrdError as exc:
        return TrialRecord(index, type(exc).__name__, expected_degree=h3.deg_d)
    if near.coprime:
        return TrialRecord(index, "coprime", expected_degree=h3.deg_d)
    perts = {}
    for mode in cfg.modes:
        qf, qg = QUANTITIES[mode]
        perts[qf], perts[qg] = near.perturbations[mode]
    return TrialRecord(index, "found", near.degree, h3.deg_d, perts)


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("ORE_GCRD_THREADS", "1")))
    except ValueError:
        return 1


def summarize(cfg: ExperimentConfig, records) -> TrialStats:
    records = sorted(records, key=lambda r: r.index)
    used = [r for r in records if not r.trivial]
    names = [q for mode in cfg.modes for q in QUANTITIES[mode]]
    stats = {q: QuantityStats.of([r.perturbations[q] for r in used]) for q in names}
    return TrialStats(cfg, stats, len(records) - len(used), len(used), tuple(records))


def run_suite(cfg: ExperimentConfig, workers: int | None = None) -> TrialStats:
    """Run ``cfg.trials`` independent trials; results do not depend on ``workers``."""
    workers = _worker_count() if workers is None else workers
    idx = range(cfg.trials)
    if workers <= 1:
        records = [run_trial(cfg, i) for i in idx]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, [cfg] * cfg.trials, idx, chunksize=8))
    return summarize(cfg, records)


def run_bounded_suite(cfg: ExperimentConfig, workers: int | None = None) -> TrialStats:
    if cfg.protocol != "bounded":
        raise ValueError("run_bounded_suite needs protocol='bounded'")
    return run_suite(cfg, workers)


def run_normalized_suite(cfg: ExperimentConfig, workers: int | None = None) -> TrialStats:
    if cfg.protocol != "normalized":
        raise ValueError("run_normalized_suite needs protocol='normalized'")
    return run_suite(cfg, workers)


# -- output ---------------------------------------------------------------

def to_csv(results) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for res in results:
        for row in res.rows():
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def to_json(results, include_log: bool = True) -> str:
    docs = []
    for res in results:
        cfg = asdict(res.config)
        cfg["mode"] = None if res.config.mode is None else res.config.mode.value
        doc = {
            "config": cfg,
            "trivial_count": res.trivial_count,
            "trials_used": res.trials_used,
            "stats": {k: asdict(v) for k, v in res.stats.items()},
        }
        if include_log:
            doc["log"] = [asdict(r) for r in res.log]
        docs.append(doc)
    return json.dumps(docs, indent=2)


def to_text(results) -> str:
    lines = []
    head = f"{'rho':>6} {'delta':>7} {'quantity':>8} {'max':>12} {'mean':>12} {'stddev':>12} {'trivial':>8}"
    lines.append(head)
    for res in results:
        for row in res.rows():
            lines.append(
                f"{row['rho']:>6g} {row['delta']:>7g} {row['reconstruction']:>8} "
                f"{row['max']:>12.6g} {row['mean']:>12.6g} {row['stddev']:>12.6g} "
                f"{row['trivial_count']:>4}/{row['trials']}"
            )
    return "\n".join(lines)
