"""Temporal statistics of the discrepancy series and the digit-condition check.

The time window k = 0 .. N-1 is the sampling ensemble: the temporal mean and
root mean square are accumulated exactly over the series' integer
representation, converted to floating point once at the end.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import log2, pi, sqrt

import numpy as np

from .discrepancy import BoxTarget, DiscrepancySeries
from .kernel import PrimeBasis

# Normal CDF via the Abramowitz-Stegun 26.2.17 polynomial in
# t = 1/(1 + 0.2316419 x); absolute error below 7.5e-8.  Implemented here
# (rather than taken from a library) so every port reproduces identical
# acceptance numbers from the same coefficient table.
_AS_P = 0.2316419
_AS_B = (0.319381530, -0.356563782, 1.781477937, -1.821255978, 1.330274429)


def normal_cdf(x: np.ndarray | float) -> np.ndarray | float:
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    t = 1.0 / (1.0 + _AS_P * ax)
    poly = t * (
        _AS_B[0]
        + t * (_AS_B[1] + t * (_AS_B[2] + t * (_AS_B[3] + t * _AS_B[4])))
    )
    pdf = np.exp(-0.5 * ax * ax) / sqrt(2.0 * pi)
    upper = 1.0 - pdf * poly
    out = np.where(x >= 0, upper, 1.0 - upper)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TemporalStats:
    """Summary of one discrepancy series against the Gaussian limit."""

    n: int
    h_dot: float
    h_ddot: float
    ks_distance: float
    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float
    scaled_rms: float
    window_lower: float | None = None
    window_upper: float | None = None

    def with_window(self, lower: float, upper: float) -> "TemporalStats":
        return replace(self, window_lower=lower, window_upper=upper)


@dataclass(frozen=True)
class ConditionReport:
    """The digit-condition constants for one corner at a chosen kappa1."""

    kappa1: Fraction
    densities: tuple[Fraction, ...]
    kappa2: Fraction
    kappa3: float
    feasible: bool


def exact_moments(series: DiscrepancySeries) -> tuple[Fraction, Fraction]:
    """(mean of D(k), mean of D(k)^2), both exact."""
    num, den = series.volume.numerator, series.volume.denominator
    n = series.n
    s1 = 0
    s2 = 0
    for k, c in enumerate(series.counts):
        d_scaled = c * den - 2 * k * num  # D(k) * den
        s1 += d_scaled
        s2 += d_scaled * d_scaled
    return Fraction(s1, n * den), Fraction(s2, n * den * den)


def temporal_moments(series: DiscrepancySeries) -> tuple[Fraction, float]:
    """H_dot (exact) and H_ddot (float square root of the exact mean square)."""
    if series.n < 1:
        raise ValueError("empty series")
    mean, mean_sq = exact_moments(series)
    return mean, sqrt(mean_sq)


def ks_normal(samples: np.ndarray) -> float:
    """Kolmogorov-Smirnov distance of the empirical CDF to the standard normal."""
    z = np.sort(np.asarray(samples, dtype=np.float64))
    n = len(z)
    if n == 0:
        raise ValueError("no samples")
    cdf = normal_cdf(z)
    hi = np.arange(1, n + 1) / n - cdf
    lo = cdf - np.arange(0, n) / n
    return float(max(hi.max(), lo.max()))


def normalize_and_test(
    series: DiscrepancySeries, h_ddot: float, s: int = 1
) -> TemporalStats:
    """Normalize D(k) by the temporal RMS and compare to the standard normal."""
    if h_ddot <= 0:
        raise ValueError("degenerate normalizer")
    z = series.float_values() / h_ddot
    mean = float(z.mean())
    var = float(z.var())
    sd = sqrt(var) if var > 0 else 1.0
    skew = float(((z - mean) ** 3).mean()) / sd**3
    kurt = float(((z - mean) ** 4).mean()) / sd**4 - 3.0
    h_dot_exact, _ = temporal_moments(series)
    return TemporalStats(
        n=series.n,
        h_dot=float(h_dot_exact),
        h_ddot=h_ddot,
        ks_distance=ks_normal(z),
        mean=mean,
        variance=var,
        skewness=skew,
        excess_kurtosis=kurt,
        scaled_rms=scaled_rms(h_ddot, series.n, s),
    )


def scaled_rms(h_ddot: float, n: int, s: int) -> float:
    """H_ddot / (log2 N)^(s/2), the quantity the variance window bounds."""
    return h_ddot / log2(n) ** (s / 2)


def condition_check(box: BoxTarget, kappa1: Fraction) -> ConditionReport:
    """Exact per-period density of digit positions passing the tail condition.

    A position j qualifies when the j-th digit of y_i is >= 1 and the exact
    fractional part of y_i * p_i**j is <= 1 - kappa1.  For eventually periodic
    expansions the liminf density equals the density over one period past the
    preperiod.
    """
    kappa1 = Fraction(kappa1)
    if not 0 < kappa1 <= 1:
        raise ValueError("kappa1 must lie in (0, 1]")
    densities = []
    for i, p in enumerate(box.basis.primes):
        exp = box.expansions[i]
        y = box.y[i]
        a, b = len(exp.preperiod), len(exp.period)
        hits = 0
        for j in range(a + 1, a + b + 1):
            if exp.digit_at(j) < 1:
                continue
            tail = Fraction(y.numerator * p**j % y.denominator, y.denominator)
            if tail <= 1 - kappa1:
                hits += 1
        densities.append(Fraction(hits, b))
    kappa2 = min(densities)
    s = box.basis.s
    p0 = box.basis.p0
    kappa3 = (
        pi**-2 * float(p0) ** (-6 - s) * 2.0**-s * float(kappa1) ** (2 * s)
        * float(kappa2) ** s
    )
    return ConditionReport(
        kappa1=kappa1,
        densities=tuple(densities),
        kappa2=kappa2,
        kappa3=kappa3,
        feasible=kappa2 > 0,
    )


def theorem_window(
    basis: PrimeBasis, kappa1: float, kappa2: float
) -> tuple[float, float, float]:
    """(lower, upper, kappa3) bounding H_ddot / (log2 N)^(s/2) asymptotically."""
    kappa1, kappa2 = float(kappa1), float(kappa2)
    if not (0 < kappa1 <= 1 and 0 < kappa2 <= 1):
        raise ValueError("kappa constants must lie in (0, 1]")
    s = basis.s
    p0 = float(basis.p0)
    lower = (1 / pi) * p0 ** (-4 - s / 2) * 2 ** (-s / 2) * kappa1**s * kappa2 ** (s / 2)
    upper = 7 * p0 ** (1 + s / 2)
    kappa3 = pi**-2 * p0 ** (-6 - s) * 2.0**-s * kappa1 ** (2 * s) * kappa2**s
    return lower, upper, kappa3


def variance_growth_fit(points: list[tuple[int, float]]) -> float:
    """Least-squares exponent of H_ddot against log2 N (expected about s/2).

    `points` are (N, H_ddot) pairs at increasing horizons; the fit is of
    log H_ddot on log log2 N.
    """
    if len(points) < 3:
        raise ValueError("need at least 3 horizons")
    ns = [n for n, _ in points]
    if any(b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("horizons must be strictly increasing")
    xs = np.log([log2(n) for n, _ in points])
    ys = np.log([h for _, h in points])
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)
