import json
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from haltonclt.cli import (
    ConfigError,
    ExperimentConfig,
    build_config,
    emit_histogram,
    main,
    parse_config_file,
    run_clt,
    run_verify,
    sample_point,
)


def test_sample_point_deterministic():
    cfg = ExperimentConfig(primes=(2, 3), y=(F(1, 3), F(2, 5)), n=256, seed=9)
    a = sample_point(cfg)
    b = sample_point(cfg)
    assert a.values == b.values and a.depths == b.depths


def test_sample_point_guard_invariant():
    for seed in range(20):
        cfg = ExperimentConfig(primes=(2, 3, 5), y=(F(1, 3),) * 3, n=100, seed=seed)
        x = sample_point(cfg)
        assert x.guard == 100
        for p, d, v in zip((2, 3, 5), x.depths, x.values):
            assert p**d >= 4 * 100
            assert 100 <= v < p**d - 100


def test_sample_point_seeds_distinct():
    seen = set()
    for seed in range(100):
        cfg = ExperimentConfig(
            primes=(2, 3, 5), y=(F(1, 3),) * 3, n=1024, seed=seed
        )
        seen.add(sample_point(cfg).values)
    assert len(seen) == 100


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig(primes=(2,), y=(F(1, 3), F(1, 5)))
    with pytest.raises(ConfigError):
        ExperimentConfig(y=(F(3, 2),))
    with pytest.raises(ConfigError):
        ExperimentConfig(n=1)
    # base-2 rational corner rejected only under the feasibility guarantee
    ExperimentConfig(y=(F(1, 4),))
    with pytest.raises(ConfigError):
        ExperimentConfig(y=(F(1, 4),), require_feasible=True)


def test_config_file_and_overrides(tmp_path):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "# comment\nprimes = 2, 3\ny = 1/5, 2/5\nN = 128\nseed = 5\nkappa1 = 2/3\n"
    )
    entries = parse_config_file(cfg_file)
    assert entries["y"] == "1/5, 2/5"

    class Args:
        config = str(cfg_file)
        seed = 11
        N = None
        out = None
        primes = None
        y = None

    cfg = build_config(Args())
    assert cfg.primes == (2, 3)
    assert cfg.y == (F(1, 5), F(2, 5))
    assert cfg.n == 128
    assert cfg.seed == 11  # flag wins over file


def test_run_clt_smallest_horizon():
    cfg = ExperimentConfig(primes=(2,), y=(F(1, 3),), n=2, seed=1)
    record = run_clt(cfg)
    assert record["stats"]["N"] == 2
    assert record["version"]


def test_run_clt_deterministic_record(tmp_path):
    cfg = dict(primes=(2,), y=(F(1, 3),), n=512, seed=42)
    a = run_clt(ExperimentConfig(**cfg))
    b = run_clt(ExperimentConfig(**cfg))
    a.pop("timings")
    b.pop("timings")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_record_json_round_trip(tmp_path):
    cfg = ExperimentConfig(
        primes=(2, 3), y=(F(1, 5), F(2, 5)), n=256, seed=7, out=tmp_path
    )
    record = run_clt(cfg)
    loaded = json.loads((tmp_path / "record.json").read_text())
    assert json.dumps(loaded, sort_keys=True) == json.dumps(record, sort_keys=True)
    assert set(loaded) == {
        "config", "point", "stats", "condition", "window", "timings", "version",
    }


def test_series_csv_round_trip(tmp_path):
    from haltonclt.cli import read_series_csv

    cfg = ExperimentConfig(primes=(2,), y=(F(1, 3),), n=64, seed=3, out=tmp_path)
    run_clt(cfg)
    rows = read_series_csv(tmp_path / "series.csv")
    assert len(rows) == 64
    assert rows[0]["k"] == "0" and rows[0]["count"] == "0"
    for row in rows:
        num, den = int(row["discrepancy_num"]), int(row["discrepancy_den"])
        assert float(row["discrepancy_float"]) == num / den


def test_infeasible_corner_downgrades_window():
    record = run_clt(ExperimentConfig(primes=(2,), y=(F(1, 4),), n=64, seed=1))
    assert record["window"] == {"applicable": False}
    assert record["stats"]["ks_distance"] >= 0


def test_identically_zero_series_runs_gracefully():
    # y = 1/2 balances every window exactly, so D(k) == 0 for all k
    import math

    record = run_clt(ExperimentConfig(primes=(2,), y=(F(1, 2),), n=64, seed=1))
    assert record["stats"]["H_ddot"] == 0
    assert math.isnan(record["stats"]["ks_distance"])
    assert record["window"] == {"applicable": False}


def test_emit_histogram_zero_samples():
    rows = emit_histogram(np.zeros(50), 8)
    assert len(rows) == 8
    observed = [r[2] for r in rows]
    assert sum(observed) == 50
    hot = [r for r in rows if r[2] > 0]
    assert len(hot) == 1 and hot[0][0] <= 0 < hot[0][1]


def test_emit_histogram_conservation_and_expected_total():
    rng = np.random.default_rng(2)
    z = rng.normal(size=5000) * 1.8  # some samples outside [-4, 4]
    rows = emit_histogram(z, 16)
    assert sum(r[2] for r in rows) == 5000
    assert abs(sum(r[3] for r in rows) - 5000) <= 1e-3 * 5000


def test_emit_histogram_bad_bins():
    with pytest.raises(ValueError):
        emit_histogram(np.zeros(4), 1)


def test_run_verify_unknown_suite():
    assert run_verify("nonsense") == 2


def test_run_verify_suites_pass(tmp_path):
    for suite in ("fast-vs-naive", "roundtrip"):
        assert run_verify(suite, seed=1, out=tmp_path) == 0
        assert (tmp_path / f"verify_{suite}.txt").exists()


def test_main_clt_and_histogram(tmp_path, capsys):
    out = tmp_path / "run"
    rc = main(
        ["clt", "--primes", "2", "--y", "1/3", "--N", "128", "--seed", "4",
         "--out", str(out)]
    )
    assert rc == 0
    assert (out / "record.json").exists()
    assert (out / "series.csv").exists()
    rc = main(["histogram", "--out", str(out), "--bins", "12"])
    assert rc == 0
    lines = (out / "histogram.csv").read_text().splitlines()
    assert lines[0] == "bin_left,bin_right,observed,expected"
    assert len(lines) == 13


def test_main_halton_stdout(capsys):
    assert main(["halton", "--N", "3", "--primes", "2,3"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[1].split("\t") == ["1", "1/2", "1/3"]


def test_main_condition_exit_codes():
    assert main(["condition", "--primes", "2", "--y", "1/3"]) == 0
    assert main(["condition", "--primes", "2", "--y", "1/2"]) == 1


def test_main_config_error_exit_code(capsys):
    assert main(["clt", "--primes", "2", "--y", "3/2"]) == 2


def test_main_discrepancy(tmp_path):
    out = tmp_path / "d"
    rc = main(
        ["discrepancy", "--primes", "2", "--y", "1/3", "--N", "32",
         "--seed", "2", "--out", str(out)]
    )
    assert rc == 0
    assert (out / "series.csv").exists()
