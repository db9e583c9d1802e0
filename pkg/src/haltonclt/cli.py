"""Command-line front end: config parsing, seeded sampling, experiment runs.

Configs are line-oriented ``key = value`` text with exact rational literals
("y = 1/3, 2/5"), so no decimal float ever feeds the exact arithmetic.  All
outputs are deterministic functions of (config, seed) except the timing
fields.

Exit codes: 0 pass, 1 verification failure, 2 precondition/config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, prod
from pathlib import Path

import numpy as np

from . import spectral
from .discrepancy import (
    BoxTarget,
    crt_frame,
    discrepancy_series,
    fast_two_sided_discrepancy,
    two_sided_discrepancy_naive,
)
from .kernel import PrimeBasis, format_rational, parse_rational, truncate
from .odometer import (
    DigitPoint,
    forward_orbit_from_zero,
    halton,
    inverse_step,
    jump,
    step,
)
from .rng import CounterRng
from .temporal import (
    ConditionReport,
    TemporalStats,
    condition_check,
    normal_cdf,
    normalize_and_test,
    temporal_moments,
    theorem_window,
)

VERSION = "0.1.0"


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    primes: tuple[int, ...] = (2,)
    y: tuple[Fraction, ...] = (Fraction(1, 3),)
    n: int = 2**14
    seed: int = 0
    kappa1: Fraction = Fraction(2, 3)
    depth: int | None = None  # truncation-depth override for the fast counter
    out: Path | None = None
    subsample: int | None = None
    require_feasible: bool = False

    def __post_init__(self):
        self.basis = PrimeBasis(self.primes)
        if len(self.y) != self.basis.s:
            raise ConfigError("y dimension must match the prime basis")
        for v in self.y:
            if not 0 < v < 1:
                raise ConfigError(f"y coordinates must lie in (0,1), got {v}")
        if self.n < 2:
            raise ConfigError("N must be >= 2")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed must be an unsigned 64-bit integer")
        if not 0 < self.kappa1 <= 1:
            raise ConfigError("kappa1 must lie in (0,1]")
        if self.require_feasible:
            for v, p in zip(self.y, self.primes):
                if gcd(v.denominator, p) != 1:
                    raise ConfigError(
                        f"y={v} is base-{p} rational; the digit condition "
                        "cannot hold (denominator shares a factor with the base)"
                    )


def parse_config_file(path: Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line: {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    entries: dict[str, str] = {}
    if getattr(args, "config", None):
        entries = parse_config_file(Path(args.config))
    kwargs = {}
    if "primes" in entries:
        kwargs["primes"] = tuple(int(t) for t in entries["primes"].split(","))
    if "y" in entries:
        kwargs["y"] = tuple(parse_rational(t) for t in entries["y"].split(","))
    for key in ("N", "seed", "depth", "subsample"):
        if key in entries:
            kwargs[key.lower() if key != "N" else "n"] = int(entries[key])
    if "kappa1" in entries:
        kwargs["kappa1"] = parse_rational(entries["kappa1"])
    if "out" in entries:
        kwargs["out"] = Path(entries["out"])
    if "require_feasible" in entries:
        kwargs["require_feasible"] = entries["require_feasible"].lower() in (
            "1", "true", "yes",
        )
    # flags override the file
    if getattr(args, "seed", None) is not None:
        kwargs["seed"] = args.seed
    if getattr(args, "N", None) is not None:
        kwargs["n"] = args.N
    if getattr(args, "out", None) is not None:
        kwargs["out"] = Path(args.out)
    if getattr(args, "primes", None):
        kwargs["primes"] = tuple(int(t) for t in args.primes.split(","))
    if getattr(args, "y", None):
        kwargs["y"] = tuple(parse_rational(t) for t in args.y.split(","))
    return ExperimentConfig(**kwargs)


def sample_point(config: ExperimentConfig) -> DigitPoint:
    """Seed-deterministic initial point with an N-step guard window.

    Per coordinate (in basis order): depth D_i is minimal with p_i**D_i >= 4N,
    and V_i is uniform on [N, p_i**D_i - N) by top-bits rejection from the
    counter-based generator.  The excluded range keeps every |k| <= N jump
    carry-free.
    """
    rng = CounterRng(config.seed)
    n = config.n
    depths = []
    values = []
    for p in config.basis.primes:
        d = 1
        while p**d < 4 * n:
            d += 1
        span = p**d - 2 * n
        values.append(n + rng.below(span))
        depths.append(d)
    return DigitPoint(config.basis, tuple(depths), tuple(values), guard=n)


def _rational_field(x: Fraction) -> dict:
    return {"exact": format_rational(x), "float": float(x)}


def _stats_dict(stats: TemporalStats) -> dict:
    return {
        "N": stats.n,
        "H_dot": stats.h_dot,
        "H_ddot": stats.h_ddot,
        "ks_distance": stats.ks_distance,
        "mean": stats.mean,
        "variance": stats.variance,
        "skewness": stats.skewness,
        "excess_kurtosis": stats.excess_kurtosis,
        "scaled_rms": stats.scaled_rms,
    }


def _condition_dict(report: ConditionReport) -> dict:
    return {
        "kappa1": _rational_field(report.kappa1),
        "densities": [_rational_field(d) for d in report.densities],
        "kappa2": _rational_field(report.kappa2),
        "kappa3": report.kappa3,
        "feasible": report.feasible,
    }


def run_clt(config: ExperimentConfig) -> dict:
    """Full pipeline; returns the RunRecord and writes JSON/CSV if out is set."""
    t0 = time.perf_counter()
    point = sample_point(config)
    box = BoxTarget.create(config.basis, config.y)
    series = discrepancy_series(point, box, config.n)
    t_series = time.perf_counter() - t0

    h_dot, h_ddot = temporal_moments(series)
    if h_ddot > 0:
        stats = normalize_and_test(series, h_ddot, s=config.basis.s)
    else:
        # identically-zero discrepancy (e.g. dyadic y = 1/2); no CLT statistics
        stats = TemporalStats(
            n=series.n, h_dot=float(h_dot), h_ddot=0.0, ks_distance=float("nan"),
            mean=0.0, variance=0.0, skewness=float("nan"),
            excess_kurtosis=float("nan"), scaled_rms=0.0,
        )
    condition = condition_check(box, config.kappa1)
    if condition.feasible:
        lower, upper, kappa3 = theorem_window(
            config.basis, float(config.kappa1), float(condition.kappa2)
        )
        stats = stats.with_window(lower, upper)
        window = {
            "applicable": True,
            "lower": lower,
            "upper": upper,
            "kappa3": kappa3,
            "scaled_rms": stats.scaled_rms,
            "in_window": lower <= stats.scaled_rms <= upper,
        }
    else:
        window = {"applicable": False}
    elapsed = time.perf_counter() - t0

    record = {
        "config": {
            "primes": list(config.primes),
            "y": [format_rational(v) for v in config.y],
            "N": config.n,
            "seed": config.seed,
            "kappa1": format_rational(config.kappa1),
        },
        "point": {
            "values": [str(v) for v in point.values],
            "depths": list(point.depths),
            "guard": point.guard,
        },
        "stats": _stats_dict(stats),
        "condition": _condition_dict(condition),
        "window": window,
        "timings": {"series_seconds": t_series, "total_seconds": elapsed},
        "version": VERSION,
    }
    if config.out is not None:
        config.out.mkdir(parents=True, exist_ok=True)
        (config.out / "record.json").write_text(
            json.dumps(record, indent=2, sort_keys=True) + "\n"
        )
        write_series_csv(config.out / "series.csv", series)
    return record


def write_series_csv(path: Path, series) -> None:
    vol = series.volume
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["k", "count", "discrepancy_num", "discrepancy_den", "discrepancy_float"]
        )
        for k in range(series.n):
            d = series.counts[k] - 2 * k * vol
            writer.writerow(
                [k, series.counts[k], d.numerator, d.denominator, repr(float(d))]
            )


def read_series_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def emit_histogram(samples: np.ndarray, bins: int) -> list[tuple]:
    """Equal-width bins over [-4,4]; out-of-range samples clip into end bins.

    Rows: (bin_left, bin_right, observed, expected), expected from the normal
    CDF so its column total is N * (Phi(4) - Phi(-4)).
    """
    if bins < 2:
        raise ValueError("need at least 2 bins")
    samples = np.asarray(samples, dtype=np.float64)
    n = len(samples)
    if n == 0:
        raise ValueError("no samples")
    edges = np.linspace(-4.0, 4.0, bins + 1)
    idx = np.clip(np.searchsorted(edges, samples, side="right") - 1, 0, bins - 1)
    observed = np.bincount(idx, minlength=bins)
    expected = n * (normal_cdf(edges[1:]) - normal_cdf(edges[:-1]))
    return [
        (float(edges[i]), float(edges[i + 1]), int(observed[i]), float(expected[i]))
        for i in range(bins)
    ]


# ---------------------------------------------------------------------------
# verification suites


def _verify_fast_vs_naive(rng: CounterRng, report: list) -> bool:
    ok = True
    for primes in ((2,), (2, 3), (3, 5)):
        basis = PrimeBasis(primes)
        for _ in range(20):
            depth_m = 1 + rng.below(6)
            L = 1 + rng.below(256)
            depths, values = [], []
            for p in basis.primes:
                d = max(depth_m, 1)
                while p**d < 4 * L:
                    d += 1
                depths.append(d)
                values.append(L + rng.below(p**d - 2 * L))
            x = DigitPoint(basis, tuple(depths), tuple(values), guard=L)
            y = tuple(
                Fraction(1 + rng.below(98), 100) for _ in primes
            )
            box = BoxTarget.create(basis, y)
            fast = fast_two_sided_discrepancy(x, box, L, depth_m)
            naive = two_sided_discrepancy_naive(
                x, box, L, corner=box.truncated(depth_m)
            )
            case_ok = fast == naive
            ok &= case_ok
            report.append(
                f"fast-vs-naive primes={primes} L={L} m={depth_m} "
                f"fast={fast} naive={naive} {'ok' if case_ok else 'FAIL'}"
            )
    return ok


def _random_frame(rng: CounterRng, basis: PrimeBasis, cap: int):
    while True:
        r = tuple(1 + rng.below(6) for _ in basis.primes)
        if basis.modulus(r) <= cap:
            break
    L = 1 + rng.below(512)
    depths, values = [], []
    for p, ri in zip(basis.primes, r):
        d = ri
        while p**d < 4 * L:
            d += 1
        depths.append(d)
        values.append(L + rng.below(p**d - 2 * L))
    x = DigitPoint(basis, tuple(depths), tuple(values), guard=L)
    y = tuple(Fraction(1 + rng.below(98), 100) for _ in basis.primes)
    box = BoxTarget.create(basis, y)
    return crt_frame(basis, r, x, box), box, L


def _verify_fourier_cells(rng: CounterRng, report: list) -> bool:
    ok = True
    for primes in ((2,), (2, 3), (3, 5)):
        basis = PrimeBasis(primes)
        for _ in range(10):
            frame, box, L = _random_frame(rng, basis, 4096)
            direct = float(spectral.cell_sum_direct(frame, box, L))
            fourier = spectral.cell_sum_fourier(frame, box, L)
            err = abs(fourier.real - direct) + abs(fourier.imag)
            case_ok = err <= 1e-9
            ok &= case_ok
            report.append(
                f"fourier-cells primes={primes} r={frame.r} L={L} err={err:.3e} "
                f"{'ok' if case_ok else 'FAIL'}"
            )
    return ok


def _verify_orthogonality(rng: CounterRng, report: list) -> bool:
    ok = True
    for primes in ((2,), (3,), (2, 3)):
        basis = PrimeBasis(primes)
        box = BoxTarget.create(
            basis, tuple(Fraction(1, 3) if p != 3 else Fraction(2, 5) for p in primes)
        )
        for mu in (2, 3, 4):
            for _ in range(8):
                r_list = []
                for _ in range(mu):
                    while True:
                        r = tuple(1 + rng.below(4) for _ in primes)
                        if basis.modulus(r) <= 256:
                            r_list.append(r)
                            break
                m_list = []
                for r in r_list:
                    p_r = basis.modulus(r)
                    m = 0
                    while m == 0:
                        m = rng.below(p_r) - (p_r - 1) // 2
                    m_list.append(m)
                expect = spectral.character_expectation_bruteforce(
                    basis, r_list, m_list, box
                )
                delta = spectral.orthogonality_delta(basis, r_list, m_list)
                err = abs(expect - delta)
                case_ok = err <= 1e-10
                ok &= case_ok
                report.append(
                    f"orthogonality primes={primes} mu={mu} err={err:.3e} "
                    f"{'ok' if case_ok else 'FAIL'}"
                )
    return ok


def _verify_halton(report: list) -> bool:
    basis = PrimeBasis((2, 3, 5))
    ok = True
    for k, point in enumerate(forward_orbit_from_zero(basis, 10**4)):
        if point != halton(k, basis):
            ok = False
            report.append(f"halton k={k} FAIL")
    report.append(f"halton identity k<10^4 {'ok' if ok else 'FAIL'}")
    return ok


def _verify_roundtrip(rng: CounterRng, report: list) -> bool:
    basis = PrimeBasis((2, 3, 5))
    ok = True
    for _ in range(2000):
        guard = 2
        depths, values = [], []
        for p in basis.primes:
            d = 1 + rng.below(8)
            while p**d < 2 * guard + 1:
                d += 1
            depths.append(d)
            values.append(guard + rng.below(p**d - 2 * guard))
        x = DigitPoint(basis, tuple(depths), tuple(values), guard=guard)
        if inverse_step(step(x)).values != x.values:
            ok = False
        if step(inverse_step(x)).values != x.values:
            ok = False
    report.append(f"roundtrip 2000 points {'ok' if ok else 'FAIL'}")
    return ok


VERIFY_SUITES = ("fourier-cells", "orthogonality", "fast-vs-naive", "halton", "roundtrip")


def run_verify(suite: str, seed: int = 1, out: Path | None = None) -> int:
    """Run one named verification suite; 0 on pass, 1 on failure, 2 on bad name."""
    if suite not in VERIFY_SUITES:
        print(f"unknown suite {suite!r}; choose from {VERIFY_SUITES}", file=sys.stderr)
        return 2
    rng = CounterRng(seed)
    report: list[str] = []
    if suite == "fast-vs-naive":
        ok = _verify_fast_vs_naive(rng, report)
    elif suite == "fourier-cells":
        ok = _verify_fourier_cells(rng, report)
    elif suite == "orthogonality":
        ok = _verify_orthogonality(rng, report)
    elif suite == "halton":
        ok = _verify_halton(report)
    else:
        ok = _verify_roundtrip(rng, report)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"verify_{suite}.txt").write_text("\n".join(report) + "\n")
    print(f"{suite}: {'PASS' if ok else 'FAIL'} ({len(report)} cases)")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argparse front end


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="path to key=value config file")
    p.add_argument("--seed", type=int, default=None, help="64-bit seed")
    p.add_argument("--N", type=int, default=None, help="time horizon")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--primes", default=None, help="comma-separated prime basis")
    p.add_argument("--y", default=None, help="comma-separated rational corner")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="haltonclt",
        description="Odometer orbits, exact local discrepancy, temporal-CLT checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("clt", "discrepancy", "condition"):
        sp = sub.add_parser(name)
        _add_common(sp)

    sp = sub.add_parser("halton")
    sp.add_argument("--N", type=int, default=16)
    sp.add_argument("--primes", default="2,3")
    sp.add_argument("--out", default=None)

    sp = sub.add_parser("histogram")
    sp.add_argument("--out", required=True, help="directory of a previous clt run")
    sp.add_argument("--bins", type=int, default=32)

    sp = sub.add_parser("verify")
    sp.add_argument("suite", choices=VERIFY_SUITES)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    try:
        if args.command == "verify":
            out = Path(args.out) if args.out else None
            return run_verify(args.suite, seed=args.seed, out=out)

        if args.command == "halton":
            basis = PrimeBasis(tuple(int(t) for t in args.primes.split(",")))
            rows = [
                [k] + [format_rational(c) for c in halton(k, basis)]
                for k in range(args.N)
            ]
            if args.out:
                outdir = Path(args.out)
                outdir.mkdir(parents=True, exist_ok=True)
                with open(outdir / "halton.csv", "w", newline="") as fh:
                    writer = csv.writer(fh)
                    writer.writerow(["k"] + [f"phi_{p}" for p in basis.primes])
                    writer.writerows(rows)
            else:
                for row in rows:
                    print("\t".join(str(c) for c in row))
            return 0

        if args.command == "histogram":
            outdir = Path(args.out)
            record = json.loads((outdir / "record.json").read_text())
            rows = read_series_csv(outdir / "series.csv")
            h_ddot = record["stats"]["H_ddot"]
            samples = np.array(
                [float(r["discrepancy_float"]) for r in rows]
            ) / h_ddot
            hist = emit_histogram(samples, args.bins)
            with open(outdir / "histogram.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["bin_left", "bin_right", "observed", "expected"])
                writer.writerows(hist)
            print(f"wrote {outdir / 'histogram.csv'}")
            return 0

        config = build_config(args)

        if args.command == "condition":
            box = BoxTarget.create(config.basis, config.y)
            report = condition_check(box, config.kappa1)
            print(json.dumps(_condition_dict(report), indent=2))
            return 0 if report.feasible else 1

        if args.command == "discrepancy":
            point = sample_point(config)
            box = BoxTarget.create(config.basis, config.y)
            series = discrepancy_series(point, box, config.n)
            if config.out is not None:
                config.out.mkdir(parents=True, exist_ok=True)
                write_series_csv(config.out / "series.csv", series)
                print(f"wrote {config.out / 'series.csv'}")
            else:
                print(f"D(N-1) = {series.value(config.n - 1)}")
            return 0

        # clt
        record = run_clt(config)
        printable = {k: v for k, v in record.items() if k != "timings"}
        print(json.dumps(printable, indent=2, sort_keys=True))
        return 0

    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
