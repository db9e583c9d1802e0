"""Exact rational and digit arithmetic.

Everything here is big-integer / `fractions.Fraction` arithmetic; no floats.
Rationals in [0,1) always use the canonical base-q expansion (the one that
terminates, never an infinite tail of digit q-1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Sequence


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeBasis:
    """The distinct primes fixing every digit base, and their product."""

    primes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if not self.primes:
            raise ValueError("basis needs at least one prime")
        if len(set(self.primes)) != len(self.primes):
            raise ValueError(f"primes must be pairwise distinct: {self.primes}")
        for p in self.primes:
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")

    @property
    def s(self) -> int:
        return len(self.primes)

    @property
    def p0(self) -> int:
        return prod(self.primes)

    def modulus(self, r: Sequence[int]) -> int:
        """Product of p_i**r_i over the coordinates."""
        if len(r) != self.s:
            raise ValueError("multi-index length mismatch")
        return prod(p ** ri for p, ri in zip(self.primes, r))


@dataclass(frozen=True)
class DigitExpansion:
    """Eventually periodic base-q expansion of a rational in [0,1).

    ``preperiod + period * inf`` read left to right are the digits after the
    radix point.  Terminating values carry the single-digit period (0,).
    """

    base: int
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be >= 2")
        if not self.period:
            raise ValueError("period must be nonempty (use (0,) for terminating)")
        for d in self.preperiod + self.period:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    def digit_at(self, j: int) -> int:
        """The j-th digit (1-indexed), reading into the period cyclically."""
        if j < 1:
            raise ValueError("digit positions are 1-indexed")
        if j <= len(self.preperiod):
            return self.preperiod[j - 1]
        return self.period[(j - len(self.preperiod) - 1) % len(self.period)]

    def digits(self, r: int) -> list[int]:
        """First r digits."""
        return [self.digit_at(j) for j in range(1, r + 1)]

    def value(self) -> Fraction:
        """Exact rational the expansion represents."""
        q = self.base
        a = len(self.preperiod)
        b = len(self.period)
        head = 0
        for d in self.preperiod:
            head = head * q + d
        tail = 0
        for d in self.period:
            tail = tail * q + d
        # head/q^a + tail/(q^a (q^b - 1))
        return Fraction(head, q**a) + Fraction(tail, q**a * (q**b - 1))


def digit_expansion(x: Fraction, q: int) -> DigitExpansion:
    """Canonical eventually periodic base-q expansion of x in [0,1).

    Long division on remainders; the cycle is found when a remainder repeats.
    """
    x = Fraction(x)
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0,1), got {x}")
    if q < 2:
        raise ValueError("base must be >= 2")
    den = x.denominator
    rem = x.numerator
    seen: dict[int, int] = {}
    digits: list[int] = []
    while rem not in seen:
        seen[rem] = len(digits)
        d, rem = divmod(rem * q, den)
        digits.append(d)
    cut = seen[rem]
    pre = tuple(digits[:cut])
    per = tuple(digits[cut:])
    return DigitExpansion(q, pre, per)


def truncate(x: Fraction, q: int, r: int) -> Fraction:
    """[x]_r: the rational made of the first r base-q digits of x."""
    if r < 0:
        raise ValueError("depth must be >= 0")
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0,1), got {x}")
    # floor(x * q^r) / q^r, exact
    scaled = x.numerator * q**r // x.denominator
    return Fraction(scaled, q**r)


def v_value(x: Fraction | DigitExpansion, q: int, r: int) -> int:
    """Reversed-digit value of the first r digits: sum of x_j * q**(j-1)."""
    if r < 1:
        raise ValueError("depth must be >= 1")
    if isinstance(x, DigitExpansion):
        if x.base != q:
            raise ValueError("expansion base mismatch")
        digits = x.digits(r)
    else:
        digits = digit_expansion(Fraction(x), q).digits(r)
    v = 0
    for j, d in enumerate(digits):
        v += d * q**j
    return v


def digit_reverse(v: int, q: int, r: int) -> int:
    """Reverse the r base-q digits of v (v < q**r)."""
    if not 0 <= v < q**r:
        raise ValueError("value out of digit range")
    out = 0
    for _ in range(r):
        v, d = divmod(v, q)
        out = out * q + d
    return out


def crt_inverses(basis: PrimeBasis, r: Sequence[int]) -> tuple[int, ...]:
    """CRT cofactor inverses: M_i with M_i * (P_r / p_i**r_i) == 1 mod p_i**r_i."""
    if len(r) != basis.s:
        raise ValueError("multi-index length mismatch")
    if any(ri < 1 for ri in r):
        raise ValueError("all exponents must be >= 1")
    p_r = basis.modulus(r)
    out = []
    for p, ri in zip(basis.primes, r):
        m = p**ri
        out.append(pow(p_r // m, -1, m))
    return tuple(out)


def count_residue_in_range(lo: int, hi: int, a: int, m: int) -> int:
    """#{k in [lo, hi] : k == a mod m}, empty ranges allowed."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    if lo > hi + 1:
        raise ValueError("lo must be <= hi + 1")
    if lo > hi:
        return 0
    return (hi - a) // m - (lo - 1 - a) // m


def parse_rational(text: str) -> Fraction:
    """Parse an exact rational literal 'num/den' or a plain integer."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"
