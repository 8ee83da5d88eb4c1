import csv
import json

import numpy as np
import pytest

from coopgame.errors import ConfigError
from coopgame.experiment import (
    GRID_HEADER,
    PAPER_SNAPSHOTS,
    STATS_HEADER,
    ExperimentConfig,
    compare_schemes,
    fmt,
    load_config,
    run_experiment,
)

SMALL = """
# tiny run
grid_width = 5
grid_height = 5
generations = 2
rounds_per_match = 10
replicates = 1
"""


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def small_config(tmp_path, **changes):
    return load_config(SMALL).replace(output_dir=str(tmp_path), **changes)


def test_empty_config_is_paper_default():
    cfg = load_config("")
    assert (cfg.grid_width, cfg.grid_height) == (50, 50)
    assert cfg.generations == 5000
    assert cfg.rounds_per_match == 100
    assert cfg.mutation_rate == 0.001
    assert cfg.crossover_rate == 0.5
    assert cfg.replicates == 10
    assert cfg.goods_value == 1.0
    assert cfg.snapshot_generations == PAPER_SNAPSHOTS
    assert cfg == ExperimentConfig()


def test_single_override():
    cfg = load_config("grid_width = 20")
    assert (cfg.grid_width, cfg.grid_height) == (20, 50)


def test_default_snapshots_clip_to_run_length():
    cfg = load_config("generations = 500")
    assert cfg.snapshot_generations == (1, 100, 500)


def test_comments_and_lists():
    cfg = load_config("scheme = pro_incentive  # only one\nsnapshot_generations = 1, 3,5\ngenerations=5")
    assert cfg.scheme == "pro_incentive"
    assert cfg.snapshot_generations == (1, 3, 5)


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("mutation_rate = 1.5", 1, "mutation_rate"),
        ("\n\ngrid_width 20", 3, "key = value"),
        ("colour = red", 1, "unknown key"),
        ("generations = ten", 1, "generations"),
        ("generations = 10\ngenerations = 11", 2, "duplicate"),
        ("grid_height = 2", 1, "grid_height"),
        ("generations = 10\nsnapshot_generations = 5, 20", 2, "snapshot"),
        ("snapshot_generations = 3, 2", 1, "ascending"),
        ("scheme = maybe", 1, "scheme"),
        ("replicates = 0", 1, "replicates"),
        ("base_seed = -1", 1, "base_seed"),
    ],
)
def test_validation_errors_carry_line(text, line, fragment):
    with pytest.raises(ConfigError) as err:
        load_config(text)
    assert err.value.line == line
    assert fragment in str(err.value)
    assert f"line {line}" in str(err.value)


def test_fmt():
    assert fmt(1 / 3) == "0.333333"
    assert fmt(-0.0000001) == "0.000000"
    assert fmt(2) == "2.000000"


def test_stats_csv_shape(tmp_path):
    cfg = small_config(tmp_path, scheme="pro_incentive")
    art = run_experiment(cfg)
    rows = read_csv(tmp_path / "pro_incentive" / "stats_rep00.csv")
    assert tuple(rows[0]) == STATS_HEADER
    assert len(rows) == 1 + 2
    assert [r[0] for r in rows[1:]] == ["1", "2"]
    for row in rows[1:]:
        assert all(len(x.split(".")[1]) == 6 for x in row[1:])
        assert sum(float(x) for x in row[1:7]) == pytest.approx(100, abs=0.01)
    assert set(art.summaries) == {"pro_incentive"}


def test_aggregate_is_mean_of_replicates(tmp_path):
    cfg = small_config(tmp_path, scheme="non_incentive", replicates=3, generations=4)
    run_experiment(cfg)
    d = tmp_path / "non_incentive"
    reps = [np.array(read_csv(d / f"stats_rep{r:02d}.csv")[1:], dtype=float) for r in range(3)]
    agg = read_csv(d / "stats_mean.csv")
    header, body = agg[0], np.array(agg[1:], dtype=float)
    stack = np.stack(reps)
    for j, col in enumerate(STATS_HEADER[1:], start=1):
        mean = body[:, header.index(f"{col}_mean")]
        std = body[:, header.index(f"{col}_std")]
        # 6-decimal output bounds the recomputation error by half a unit in the last place
        assert np.allclose(mean, stack[:, :, j].mean(axis=0), rtol=0, atol=5e-7 + 1e-12)
        assert np.allclose(std, stack[:, :, j].std(axis=0, ddof=1), rtol=0, atol=5e-7 + 1e-12)


def test_snapshots_and_summary(tmp_path):
    cfg = small_config(tmp_path, scheme="pro_incentive", replicates=2, generations=3,
                       snapshot_generations=(1, 3))
    run_experiment(cfg)
    d = tmp_path / "pro_incentive"
    rows = read_csv(d / "snapshots.csv")
    assert rows[0] == ["replicate", *STATS_HEADER]
    assert [(r[0], r[1]) for r in rows[1:]] == [("0", "1"), ("0", "3"), ("1", "1"), ("1", "3"),
                                                ("mean", "1"), ("mean", "3")]
    summary = json.loads((d / "summary.json").read_text())
    final = [float(read_csv(d / f"stats_rep{r:02d}.csv")[-1][STATS_HEADER.index("mean_theta")])
             for r in range(2)]
    assert summary["final_mean_theta_per_replicate"] == final
    assert summary["final_mean_theta"] == pytest.approx(np.mean(final), abs=1e-6)
    assert summary["seeds"] == [cfg.base_seed, cfg.base_seed + 1]


def test_grid_dump(tmp_path):
    cfg = small_config(tmp_path, scheme="pro_incentive", dump_grids=True, snapshot_generations=(2,))
    art = run_experiment(cfg)
    dumps = [p for p in art.paths if "grids" in str(p)]
    assert len(dumps) == 1
    rows = read_csv(dumps[0])
    assert tuple(rows[0]) == GRID_HEADER
    assert len(rows) == 1 + 25
    first = rows[1]
    assert (first[0], first[1]) == ("0", "0")
    assert len(first[2]) == 71 and set(first[2]) <= {"0", "1"}
    assert int(first[3]) + int(first[4]) == 8 * 10


def test_compare_shares_initial_population(tmp_path):
    cfg = small_config(tmp_path, generations=3, replicates=2)
    compare_schemes(cfg)
    non = read_csv(tmp_path / "non_incentive" / "stats_rep01.csv")
    pro = read_csv(tmp_path / "pro_incentive" / "stats_rep01.csv")
    assert non[1][1:7] == pro[1][1:7]
    comp = read_csv(tmp_path / "comparison.csv")
    assert len(comp) == 1 + 3
    assert comp[0][:2] == ["generation", "non_incentive_very_coop_pct"]
    assert "pro_incentive_mean_theta" in comp[0]
    summary = json.loads((tmp_path / "comparison_summary.json").read_text())
    assert set(summary["final_mean_theta"]) == {"non_incentive", "pro_incentive"}


def _snapshot(d):
    return {p.relative_to(d): p.read_bytes() for p in sorted(d.rglob("*")) if p.is_file()}


def test_replicate_order_and_workers_do_not_change_output(tmp_path):
    cfg = small_config(tmp_path / "serial", replicates=3, generations=3)
    compare_schemes(cfg)
    compare_schemes(cfg.replace(output_dir=str(tmp_path / "parallel"), workers=3))
    assert _snapshot(tmp_path / "serial") == _snapshot(tmp_path / "parallel")
