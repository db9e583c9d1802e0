"""Two-sided local discrepancy of odometer orbits against corner boxes.

Two independent algorithms compute the same quantity:

* a naive membership counter that walks the orbit window and compares each
  point against the box corner with exact rational arithmetic, and
* a fast counter that decomposes the (digit-truncated) box into elementary
  intervals, turns multidimensional digit-prefix matching into one congruence
  mod P_r via the Chinese Remainder Theorem, and counts residues in the index
  window in closed form.

The fast counter computes the discrepancy of the *truncated* corner exactly;
truncation at depth m with p_i**m > 2L costs at most s in absolute value.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Sequence

import numpy as np

from .kernel import (
    DigitExpansion,
    PrimeBasis,
    count_residue_in_range,
    crt_inverses,
    digit_expansion,
    digit_reverse,
    truncate,
)
from .odometer import DigitPoint, GuardExhausted, jump


@dataclass(frozen=True)
class BoxTarget:
    """The corner y of the box [0,y_1) x ... x [0,y_s), with digit expansions."""

    basis: PrimeBasis
    y: tuple[Fraction, ...]
    expansions: tuple[DigitExpansion, ...]

    @classmethod
    def create(cls, basis: PrimeBasis, y: Sequence[Fraction]) -> "BoxTarget":
        y = tuple(Fraction(v) for v in y)
        if len(y) != basis.s:
            raise ValueError("corner dimension must match basis")
        for v in y:
            if not 0 < v < 1:
                raise ValueError(f"corner coordinates must lie in (0,1), got {v}")
        exps = tuple(digit_expansion(v, p) for v, p in zip(y, basis.primes))
        return cls(basis, y, exps)

    @property
    def volume(self) -> Fraction:
        return prod(self.y, start=Fraction(1))

    def digit(self, i: int, j: int) -> int:
        return self.expansions[i].digit_at(j)

    def truncated(self, m: int) -> tuple[Fraction, ...]:
        """Coordinatewise truncation [y_i]_m."""
        return tuple(
            truncate(v, p, m) for v, p in zip(self.y, self.basis.primes)
        )


def in_box(z: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """Half-open membership: z_i < y_i for every coordinate, exactly."""
    return all(zi < yi for zi, yi in zip(z, y))


def two_sided_discrepancy_naive(
    x: DigitPoint, box: BoxTarget, L: int, corner: Sequence[Fraction] | None = None
) -> Fraction:
    """D over the window k = -L .. L-1, by explicit membership tests.

    `corner` optionally replaces the box corner (used to test truncated
    corners against the fast counter).
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    if L > x.guard:
        raise GuardExhausted(f"L={L} exceeds guard {x.guard}")
    target = tuple(corner) if corner is not None else box.y
    count = 0
    for k in range(-L, L):
        if in_box(jump(x, k).coordinates(), target):
            count += 1
    return count - 2 * L * prod(target, start=Fraction(1))


@dataclass(frozen=True)
class CrtFrame:
    """Per multi-index r: modulus, CRT inverses, and combined V values."""

    basis: PrimeBasis
    r: tuple[int, ...]
    p_r: int
    m_inv: tuple[int, ...]
    v_rx: int
    v_ry: int

    def cofactor(self, i: int) -> int:
        return self.p_r // self.basis.primes[i] ** self.r[i]


def _combine(basis: PrimeBasis, r: Sequence[int], m_inv, residues, p_r: int) -> int:
    total = 0
    for i, (p, ri) in enumerate(zip(basis.primes, r)):
        total += m_inv[i] * (p_r // p**ri) * residues[i]
    return total % p_r


def crt_frame(
    basis: PrimeBasis, r: Sequence[int], x: DigitPoint, box: BoxTarget
) -> CrtFrame:
    """Build the CRT frame turning prefix matching at depth r into one congruence."""
    r = tuple(r)
    if any(ri < 1 for ri in r):
        raise ValueError("all r_i must be >= 1")
    if any(ri > d for ri, d in zip(r, x.depths)):
        raise ValueError(f"r={r} exceeds stored depths {x.depths}")
    p_r = basis.modulus(r)
    m_inv = crt_inverses(basis, r)
    v_x = [x.v_mod(i, ri) for i, ri in enumerate(r)]
    v_y = []
    for i, (p, ri) in enumerate(zip(basis.primes, r)):
        v = 0
        for j in range(1, ri + 1):
            v += box.digit(i, j) * p ** (j - 1)
        v_y.append(v)
    return CrtFrame(
        basis,
        r,
        p_r,
        m_inv,
        _combine(basis, r, m_inv, v_x, p_r),
        _combine(basis, r, m_inv, v_y, p_r),
    )


def v_ryb(frame: CrtFrame, box: BoxTarget, b: Sequence[int]) -> int:
    """V_{r,y,b}: y-digits below depth r_i plus offset digit b_i at depth r_i."""
    basis = frame.basis
    residues = []
    for i, (p, ri) in enumerate(zip(basis.primes, frame.r)):
        v = b[i] * p ** (ri - 1)
        for j in range(1, ri):
            v += box.digit(i, j) * p ** (j - 1)
        residues.append(v)
    return _combine(basis, frame.r, frame.m_inv, residues, frame.p_r)


def fast_two_sided_discrepancy(
    x: DigitPoint, box: BoxTarget, L: int, m: int
) -> Fraction:
    """D of the depth-m truncated corner over k = -L .. L-1, by residue counting.

    Sums, over multi-indices r in [1,m]^s and digit offsets b_i < y_{i,r_i},
    the number of k in the window hitting the elementary interval, minus the
    expected count 2L * prod [y_i]_m.  Exact.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    if L > x.guard:
        raise GuardExhausted(f"L={L} exceeds guard {x.guard}")
    if m < 1:
        raise ValueError("truncation depth must be >= 1")
    if any(m > d for d in x.depths):
        raise ValueError(f"depth m={m} exceeds stored depths {x.depths}")
    basis = x.basis
    count = 0
    for r in product(range(1, m + 1), repeat=basis.s):
        digits = [box.digit(i, ri) for i, ri in enumerate(r)]
        if any(d == 0 for d in digits):
            continue
        frame = crt_frame(basis, r, x, box)
        for b in product(*(range(d) for d in digits)):
            a = (v_ryb(frame, box, b) - frame.v_rx) % frame.p_r
            count += count_residue_in_range(-L, L - 1, a, frame.p_r)
    vol = prod(box.truncated(m), start=Fraction(1))
    return count - 2 * L * vol


class DigitReverser:
    """Chunked digit reversal for one (base, depth) pair.

    Splits a reversed-digit value into chunks of `c` digits and reverses each
    chunk through a precomputed table; depth is padded up to a multiple of c
    (padding digits are zero, so the reversed value is just scaled by the pad).
    """

    def __init__(self, p: int, depth: int, chunk_digits: int | None = None):
        if chunk_digits is None:
            chunk_digits = 1
            while p ** (chunk_digits + 1) <= 4096:
                chunk_digits += 1
        c = chunk_digits
        n_chunks = -(-depth // c)
        self.p = p
        self.depth = depth
        self.padded_depth = n_chunks * c
        self.chunk_mod = p**c
        table = np.array(
            [digit_reverse(v, p, c) for v in range(self.chunk_mod)], dtype=np.int64
        )
        # weight of chunk t: reversed chunk lands at digit offset padded - c*(t+1)
        self.divisors = [self.chunk_mod**t for t in range(n_chunks)]
        self.weights = [
            p ** (self.padded_depth - c * (t + 1)) for t in range(n_chunks)
        ]
        self.table = table

    def reverse(self, v: int) -> int:
        """Reversed-digit value at the padded depth."""
        out = 0
        for div, w in zip(self.divisors, self.weights):
            out += int(self.table[(v // div) % self.chunk_mod]) * w
        return out

    def reverse_array(self, v: np.ndarray) -> np.ndarray:
        out = np.zeros_like(v)
        for div, w in zip(self.divisors, self.weights):
            out += self.table[(v // div) % self.chunk_mod] * w
        return out


@dataclass(frozen=True)
class DiscrepancySeries:
    """D(k) for k = 0 .. N-1, stored as integer counts plus the exact volume.

    D(k) = counts[k] - 2k * volume; counts[k] is the number of window points
    inside the box, so the rational value is reconstructed exactly on read.
    """

    n: int
    counts: tuple[int, ...]
    volume: Fraction

    def value(self, k: int) -> Fraction:
        return self.counts[k] - 2 * k * self.volume

    def values(self) -> list[Fraction]:
        return [self.value(k) for k in range(self.n)]

    def float_values(self) -> np.ndarray:
        num, den = self.volume.numerator, self.volume.denominator
        counts = np.array(self.counts, dtype=np.float64)
        k = np.arange(self.n, dtype=np.float64)
        return counts - 2.0 * k * (num / den)


def _membership_flags(x: DigitPoint, box: BoxTarget, n: int) -> np.ndarray:
    """flags[k] = (points joined at window size k+1 inside the box), summed.

    Entry k counts how many of the two new points jump(x, k) and
    jump(x, -k-1) lie in the box (0, 1, or 2).
    """
    s = x.basis.s
    fwd = np.ones(n, dtype=bool)
    bwd = np.ones(n, dtype=bool)
    use_numpy = True
    for i in range(s):
        p = x.basis.primes[i]
        rev = DigitReverser(p, x.depths[i])
        y = box.y[i]
        rhs = y.numerator * p**rev.padded_depth
        den = y.denominator
        max_rev = p**rev.padded_depth - 1
        if max_rev * den >= 2**62 or rhs >= 2**62 or x.values[i] + n >= 2**62:
            use_numpy = False
            break
    if use_numpy:
        ks = np.arange(n, dtype=np.int64)
        for i in range(s):
            p = x.basis.primes[i]
            rev = DigitReverser(p, x.depths[i])
            y = box.y[i]
            rhs = y.numerator * p**rev.padded_depth
            den = y.denominator
            fwd &= rev.reverse_array(x.values[i] + ks) * den < rhs
            bwd &= rev.reverse_array(x.values[i] - 1 - ks) * den < rhs
        return fwd.astype(np.int64) + bwd.astype(np.int64)
    # big-integer fallback, identical semantics
    flags = np.zeros(n, dtype=np.int64)
    revs = [DigitReverser(p, d) for p, d in zip(x.basis.primes, x.depths)]
    rhss = [
        y.numerator * p**rev.padded_depth
        for y, p, rev in zip(box.y, x.basis.primes, revs)
    ]
    dens = [y.denominator for y in box.y]
    for k in range(n):
        f = all(
            revs[i].reverse(x.values[i] + k) * dens[i] < rhss[i] for i in range(s)
        )
        b = all(
            revs[i].reverse(x.values[i] - 1 - k) * dens[i] < rhss[i]
            for i in range(s)
        )
        flags[k] = int(f) + int(b)
    return flags


def discrepancy_series(x: DigitPoint, box: BoxTarget, n: int) -> DiscrepancySeries:
    """The full temporal series D(k), k = 0 .. N-1, computed incrementally.

    Growing the window from k to k+1 adds the two points jump(x, k) and
    jump(x, -k-1); counts are cumulative sums of their memberships.
    """
    if n < 1:
        raise ValueError("N must be >= 1")
    if n > x.guard:
        raise GuardExhausted(f"N={n} exceeds guard {x.guard}")
    flags = _membership_flags(x, box, n)
    counts = np.concatenate(([0], np.cumsum(flags[: n - 1])))
    return DiscrepancySeries(n, tuple(int(c) for c in counts), box.volume)
