"""Config parsing, replicate runs and CSV artifacts."""
from __future__ import annotations

import csv
import dataclasses
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .grid import (
    GaParams,
    Grid,
    evaluate_generation,
    genome_classes,
    next_generation,
    population_stats,
)
from .payoff import PayoffParams, Scheme

log = logging.getLogger(__name__)

BOTH = "both"
PAPER_SNAPSHOTS = (1, 100, 500, 1000, 1500, 2000, 2500, 3000, 3500, 4000, 4500, 5000)

STATS_HEADER = (
    "generation",
    "very_coop_pct",
    "coop_pct",
    "good_pct",
    "okay_pct",
    "dishonest_pct",
    "very_dishonest_pct",
    "mean_theta",
    "mean_fitness",
    "coop_move_fraction",
)
METRICS = STATS_HEADER[1:]
SHARE_COLUMNS = STATS_HEADER[1:7]
COOPERATIVE_SHARE_COLUMNS = ("very_coop_pct", "coop_pct", "good_pct", "okay_pct")
GRID_HEADER = ("row", "col", "genome", "coop_count", "defect_count", "theta", "fitness", "class")


def fmt(x):
    """Fixed 6-decimal rendering used in every emitted CSV."""
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


@dataclass(frozen=True)
class ExperimentConfig:
    grid_width: int = 50
    grid_height: int = 50
    generations: int = 5000
    rounds_per_match: int = 100
    scheme: str = BOTH
    goods_value: float = 1.0
    mutation_rate: float = 0.001
    crossover_rate: float = 0.5
    replicates: int = 10
    base_seed: int = 0
    snapshot_generations: tuple = PAPER_SNAPSHOTS
    output_dir: str = "results"
    workers: int = 1
    dump_grids: bool = False

    def __post_init__(self):
        if self.scheme != BOTH:
            try:
                object.__setattr__(self, "scheme", Scheme(self.scheme).value)
            except ValueError:
                raise ConfigError(f"scheme: unknown scheme {self.scheme!r}", key="scheme") from None
        object.__setattr__(self, "snapshot_generations", tuple(self.snapshot_generations))
        _validate(self)

    @property
    def schemes(self):
        if self.scheme == BOTH:
            return (Scheme.NON_INCENTIVE, Scheme.PRO_INCENTIVE)
        return (Scheme(self.scheme),)

    def payoff_params(self, scheme):
        return PayoffParams(Scheme(scheme), self.goods_value)

    def ga_params(self):
        return GaParams(self.crossover_rate, self.mutation_rate, self.rounds_per_match)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def _validate(cfg):
    def fail(key, msg):
        raise ConfigError(f"{key}: {msg}", key=key)

    for key in ("grid_width", "grid_height"):
        if getattr(cfg, key) < 3:
            fail(key, "must be >= 3")
    for key in ("generations", "rounds_per_match", "replicates", "workers"):
        if getattr(cfg, key) < 1:
            fail(key, "must be >= 1")
    if not cfg.goods_value > 0:
        fail("goods_value", "must be > 0")
    for key in ("mutation_rate", "crossover_rate"):
        if not 0.0 <= getattr(cfg, key) <= 1.0:
            fail(key, "must be a probability in [0, 1]")
    if not (0 <= cfg.base_seed and cfg.base_seed + cfg.replicates - 1 < 2**64):
        fail("base_seed", "must be in [0, 2**64 - replicates]")
    snaps = cfg.snapshot_generations
    if any(b <= a for a, b in zip(snaps, snaps[1:])):
        fail("snapshot_generations", "must be strictly ascending")
    if snaps and (snaps[0] < 1 or snaps[-1] > cfg.generations):
        fail("snapshot_generations", f"must lie in [1, {cfg.generations}]")


def _parse_int(text):
    return int(text.replace("_", ""))


def _parse_bool(text):
    low = text.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_scheme(text):
    text = text.lower()
    if text == BOTH:
        return BOTH
    return Scheme(text).value


def _parse_snapshots(text):
    return tuple(_parse_int(part) for part in text.replace(",", " ").split())


_PARSERS = {
    "grid_width": _parse_int,
    "grid_height": _parse_int,
    "generations": _parse_int,
    "rounds_per_match": _parse_int,
    "scheme": _parse_scheme,
    "goods_value": float,
    "mutation_rate": float,
    "crossover_rate": float,
    "replicates": _parse_int,
    "base_seed": _parse_int,
    "snapshot_generations": _parse_snapshots,
    "output_dir": str,
    "workers": _parse_int,
    "dump_grids": _parse_bool,
}


def load_config(text):
    """Parse ``key = value`` lines (``#`` starts a comment) into a config.

    Missing keys keep their defaults. If ``snapshot_generations`` is not
    given, the default snapshot list is clipped to the run length.
    """
    values, lines = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{key}: bad value {value!r} ({exc})", lineno) from None
        lines[key] = lineno

    if "snapshot_generations" not in values:
        gens = values.get("generations", ExperimentConfig.generations)
        values["snapshot_generations"] = tuple(g for g in PAPER_SNAPSHOTS if g <= gens)
    try:
        return ExperimentConfig(**values)
    except ConfigError as exc:
        raise ConfigError(str(exc), lines.get(exc.key), key=exc.key) from None


def load_config_file(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return load_config(text)


# -- running ------------------------------------------------------------------


@dataclass
class ReplicateResult:
    scheme: str
    replicate: int
    seed: int
    stats: list
    grids: dict = field(default_factory=dict)  # generation -> evaluated Grid


def run_replicate(cfg, scheme, replicate):
    """One full evolutionary run; seed is ``base_seed + replicate``."""
    seed = cfg.base_seed + replicate
    rng = np.random.default_rng(seed)
    params = cfg.payoff_params(scheme)
    ga = cfg.ga_params()
    snaps = set(cfg.snapshot_generations)
    grid = Grid.random(cfg.grid_width, cfg.grid_height, rng)
    stats, grids = [], {}
    for gen in range(1, cfg.generations + 1):
        grid = evaluate_generation(grid, params, ga)
        stats.append(population_stats(grid, gen))
        if cfg.dump_grids and gen in snaps:
            grids[gen] = grid
        if gen < cfg.generations:
            grid = next_generation(grid, ga, rng)
        if gen % 500 == 0:
            log.info("%s replicate %d: generation %d, mean theta %.4f",
                     Scheme(scheme).value, replicate, gen, stats[-1].mean_theta)
    return ReplicateResult(Scheme(scheme).value, replicate, seed, stats, grids)


def _run_all(cfg, schemes):
    jobs = [(s, r) for s in schemes for r in range(cfg.replicates)]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(jobs))) as pool:
            futures = {job: pool.submit(run_replicate, cfg, *job) for job in jobs}
            results = {job: fut.result() for job, fut in futures.items()}
    else:
        results = {job: run_replicate(cfg, *job) for job in jobs}
    return {s: [results[(s, r)] for r in range(cfg.replicates)] for s in schemes}


# -- artifacts ----------------------------------------------------------------


def _write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def stats_rows(stats):
    return [[s.generation, *(fmt(x) for x in s.as_row()[1:])] for s in stats]


def _as_matrix(stats):
    """Per-replicate metrics at CSV precision, shape (generations, metrics)."""
    return np.array([[float(v) for v in row[1:]] for row in stats_rows(stats)])


def aggregate(replicates):
    """Mean and sample std (n-1) per generation, from the 6-decimal values."""
    mats = np.stack([_as_matrix(r.stats) for r in replicates])
    mean = mats.mean(axis=0)
    std = mats.std(axis=0, ddof=1) if len(replicates) > 1 else np.zeros_like(mean)
    gens = [s.generation for s in replicates[0].stats]
    return gens, mean, std


def grid_rows(grid):
    thetas = grid.thetas()
    classes = genome_classes(grid.genomes)
    rows = []
    for i in range(grid.size):
        r, c = divmod(i, grid.width)
        rows.append([
            r,
            c,
            "".join(map(str, grid.genomes[i].tolist())),
            int(grid.coop[i]),
            int(grid.defect[i]),
            fmt(thetas[i]),
            fmt(grid.fitness[i]),
            classes[i].label,
        ])
    return rows


def write_grid_csv(path, grid):
    return _write_csv(Path(path), GRID_HEADER, grid_rows(grid))


def _cooperative_share(values):
    idx = [METRICS.index(c) for c in COOPERATIVE_SHARE_COLUMNS]
    return float(sum(values[i] for i in idx))


def _write_scheme(cfg, scheme_dir, replicates):
    paths = []
    for res in replicates:
        paths.append(_write_csv(scheme_dir / f"stats_rep{res.replicate:02d}.csv",
                                STATS_HEADER, stats_rows(res.stats)))

    gens, mean, std = aggregate(replicates)
    agg_header = ["generation"] + [f"{m}_{k}" for m in METRICS for k in ("mean", "std")]
    agg_rows = []
    for g, mu, sd in zip(gens, mean, std):
        row = [g]
        for a, b in zip(mu, sd):
            row += [fmt(a), fmt(b)]
        agg_rows.append(row)
    paths.append(_write_csv(scheme_dir / "stats_mean.csv", agg_header, agg_rows))

    snaps = set(cfg.snapshot_generations)
    snap_rows = []
    for res in replicates:
        snap_rows += [[res.replicate, *row] for row in stats_rows(res.stats) if row[0] in snaps]
    snap_rows += [["mean", g, *(fmt(x) for x in mu)] for g, mu in zip(gens, mean) if g in snaps]
    paths.append(_write_csv(scheme_dir / "snapshots.csv", ("replicate", *STATS_HEADER), snap_rows))

    if cfg.dump_grids:
        for res in replicates:
            for gen, grid in sorted(res.grids.items()):
                paths.append(write_grid_csv(
                    scheme_dir / "grids" / f"rep{res.replicate:02d}_gen{gen:05d}.csv", grid))

    theta_col = METRICS.index("mean_theta")
    finals = [_as_matrix(r.stats)[-1] for r in replicates]
    final_thetas = [f[theta_col] for f in finals]
    summary = {
        "scheme": replicates[0].scheme,
        "replicates": len(replicates),
        "seeds": [r.seed for r in replicates],
        "generations": cfg.generations,
        "final_generation": gens[-1],
        "final_mean_theta": round(float(mean[-1][theta_col]), 6),
        "final_mean_theta_std": round(float(std[-1][theta_col]), 6),
        "final_mean_theta_per_replicate": [round(t, 6) for t in final_thetas],
        "final_cooperative_share_pct": round(_cooperative_share(mean[-1]), 6),
        "final_class_shares_pct": {
            col: round(float(mean[-1][METRICS.index(col)]), 6) for col in SHARE_COLUMNS
        },
    }
    summary_path = scheme_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    paths.append(summary_path)
    return paths, summary


@dataclass
class RunArtifacts:
    output_dir: Path
    paths: list
    summaries: dict  # scheme value -> summary dict
    results: dict = field(default_factory=dict, repr=False)


def run_experiment(cfg, schemes=None):
    """Run every replicate for each scheme and write the per-scheme artifacts."""
    schemes = tuple(Scheme(s) for s in (schemes or cfg.schemes))
    out = Path(cfg.output_dir)
    results = _run_all(cfg, schemes)
    paths, summaries = [], {}
    for scheme in schemes:
        p, summary = _write_scheme(cfg, out / scheme.value, results[scheme])
        paths += p
        summaries[scheme.value] = summary
    return RunArtifacts(out, paths, summaries, results)


def compare_schemes(cfg):
    """Run both schemes from identical seeds and join their per-generation means."""
    non, pro = Scheme.NON_INCENTIVE, Scheme.PRO_INCENTIVE
    artifacts = run_experiment(cfg, (non, pro))
    results = artifacts.results
    cols = SHARE_COLUMNS + ("mean_theta",)
    idx = [METRICS.index(c) for c in cols]
    gens, mean_non, _ = aggregate(results[non])
    _, mean_pro, _ = aggregate(results[pro])
    header = ["generation"] + [f"{s.value}_{c}" for s in (non, pro) for c in cols]
    rows = [
        [g, *(fmt(mn[i]) for i in idx), *(fmt(mp[i]) for i in idx)]
        for g, mn, mp in zip(gens, mean_non, mean_pro)
    ]
    out = Path(cfg.output_dir)
    artifacts.paths.append(_write_csv(out / "comparison.csv", header, rows))

    s_non, s_pro = artifacts.summaries[non.value], artifacts.summaries[pro.value]
    comparison = {
        "final_mean_theta": {non.value: s_non["final_mean_theta"], pro.value: s_pro["final_mean_theta"]},
        "theta_difference": round(s_pro["final_mean_theta"] - s_non["final_mean_theta"], 6),
        "final_cooperative_share_pct": {
            non.value: s_non["final_cooperative_share_pct"],
            pro.value: s_pro["final_cooperative_share_pct"],
        },
    }
    path = out / "comparison_summary.json"
    path.write_text(json.dumps(comparison, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    artifacts.paths.append(path)
    return artifacts
