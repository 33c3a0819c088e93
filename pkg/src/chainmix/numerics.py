"""Exact-rational and log-domain scalar arithmetic plus combinatorial primitives.

Two numeric regimes coexist everywhere in this package: exact rationals
(``fractions.Fraction``) for verification oracles at small sizes, and
signed log-magnitude doubles (:class:`LogScalar`) for production curves at
population sizes where factorial-heavy formulas overflow doubles.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

Rational = Union[int, Fraction]
Scalar = Union[int, Fraction, float]
State = tuple[int, ...]

_LOG_ZERO = float("-inf")


def rising_factorial(a: Scalar, k: int) -> Scalar:
    """a(a+1)...(a+k-1); returns 1 for k = 0.

    Works for int, Fraction and float ``a``; the result follows the input
    type.  A zero factor (negative-integer ``a`` with large enough ``k``)
    yields exact 0, never an error.
    """
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    out = 1
    for i in range(k):
        out *= a + i
    return out


def falling_factorial(a: Scalar, k: int) -> Scalar:
    """a(a-1)...(a-k+1); returns 1 for k = 0."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    out = 1
    for i in range(k):
        out *= a - i
    return out


def multinomial_coefficient(counts: Sequence[int]) -> int:
    """|x|! / prod(x_i!) for a composition x, as an exact integer."""
    total = 0
    out = 1
    for c in counts:
        if c < 0:
            raise ValueError(f"negative count {c}")
        total += c
        out *= math.comb(total, c)
    return out


def iter_compositions(total: int, d: int,
                      caps: Sequence[int] | None = None) -> Iterator[State]:
    """Yield compositions of ``total`` into ``d`` parts in colexicographic order.

    With ``caps`` given, only compositions with ``x_i <= caps[i]`` are
    produced (the bounded lattice); infeasible caps yield nothing.
    """
    if d < 1:
        raise ValueError("need at least one part")
    if total < 0:
        return
    if d == 1:
        if caps is None or total <= caps[0]:
            yield (total,)
        return
    head_caps = None if caps is None else caps[:-1]
    last_max = total if caps is None else min(total, caps[-1])
    for last in range(last_max + 1):
        for head in iter_compositions(total - last, d - 1, head_caps):
            yield head + (last,)


def enumerate_compositions(total: int, d: int,
                           caps: Sequence[int] | None = None) -> list[State]:
    """Materialized :func:`iter_compositions`; the canonical state indexing."""
    return list(iter_compositions(total, d, caps))


def count_compositions(total: int, d: int) -> int:
    """|{x in N_0^d : sum x = total}| = C(total + d - 1, d - 1)."""
    return math.comb(total + d - 1, d - 1)


def count_bounded_compositions(n: int, caps: Sequence[int]) -> int:
    """Number of compositions of ``n`` into len(caps) parts with x_i <= caps[i]."""
    if n < 0:
        return 0
    if all(c >= n for c in caps):
        return count_compositions(n, len(caps))
    ways = [1] + [0] * n
    for c in caps:
        acc = list(ways)
        # sliding window: new[t] = sum_{k=0..min(c,t)} ways[t-k]
        run = 0
        for t in range(n + 1):
            run += ways[t]
            if t > c:
                run -= ways[t - c - 1]
            acc[t] = run
        ways = acc
    return ways[n]


def check_composition(counts: Sequence[int], total: int | None = None,
                      caps: Sequence[int] | None = None) -> State:
    """Validate and normalize a composition; raises ValueError on violation."""
    x = tuple(int(c) for c in counts)
    if any(c != int(c) for c in counts) or any(c < 0 for c in x):
        raise ValueError(f"composition entries must be nonnegative integers: {counts}")
    if total is not None and sum(x) != total:
        raise ValueError(f"composition {x} does not sum to {total}")
    if caps is not None:
        if len(caps) != len(x):
            raise ValueError("caps length mismatch")
        for c, cap in zip(x, caps):
            if c > cap:
                raise ValueError(f"composition {x} exceeds caps {tuple(caps)}")
    return x


def is_rational(value) -> bool:
    return isinstance(value, (int, Fraction))


@dataclass(frozen=True)
class LogScalar:
    """A real number stored as sign and natural-log magnitude.

    sign is -1, 0 or +1; ``log_magnitude`` is -inf exactly when sign is 0.
    Safe for products of thousands of factorial-scale factors.
    """
    sign: int
    log_magnitude: float

    @classmethod
    def zero(cls) -> "LogScalar":
        return cls(0, _LOG_ZERO)

    @classmethod
    def one(cls) -> "LogScalar":
        return cls(1, 0.0)

    @classmethod
    def from_float(cls, x: float) -> "LogScalar":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_fraction(cls, q: Rational) -> "LogScalar":
        q = Fraction(q)
        if q == 0:
            return cls.zero()
        # math.log accepts arbitrary-precision ints, so huge exact values
        # convert without overflowing through float.
        return cls(1 if q > 0 else -1, math.log(abs(q.numerator)) - math.log(q.denominator))

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_magnitude)

    def __mul__(self, other: "LogScalar") -> "LogScalar":
        s = self.sign * other.sign
        if s == 0:
            return LogScalar.zero()
        return LogScalar(s, self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogScalar") -> "LogScalar":
        if other.sign == 0:
            raise ZeroDivisionError("LogScalar division by zero")
        if self.sign == 0:
            return LogScalar.zero()
        return LogScalar(self.sign * other.sign,
                         self.log_magnitude - other.log_magnitude)

    def __add__(self, other: "LogScalar") -> "LogScalar":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_magnitude >= other.log_magnitude else (other, self)
        diff = lo.log_magnitude - hi.log_magnitude
        if self.sign == other.sign:
            return LogScalar(self.sign, hi.log_magnitude + math.log1p(math.exp(diff)))
        rest = -math.expm1(diff)
        if rest <= 0.0:
            return LogScalar.zero()
        return LogScalar(hi.sign, hi.log_magnitude + math.log(rest))

    def __pow__(self, k: int) -> "LogScalar":
        if self.sign == 0:
            return LogScalar.one() if k == 0 else LogScalar.zero()
        return LogScalar(self.sign if k % 2 else 1, self.log_magnitude * k)


def log_rising(a: float, k: int) -> LogScalar:
    """LogScalar value of the rising factorial a(a+1)...(a+k-1)."""
    if k == 0:
        return LogScalar.one()
    if a > 0:
        return LogScalar(1, math.lgamma(a + k) - math.lgamma(a))
    sign = 1
    logmag = 0.0
    for i in range(k):
        f = a + i
        if f == 0:
            return LogScalar.zero()
        if f < 0:
            sign = -sign
        logmag += math.log(abs(f))
    return LogScalar(sign, logmag)


def log_falling(a: float, k: int) -> LogScalar:
    """LogScalar value of the falling factorial a(a-1)...(a-k+1)."""
    if k == 0:
        return LogScalar.one()
    if a - k + 1 > 0:
        return LogScalar(1, math.lgamma(a + 1) - math.lgamma(a - k + 1))
    sign = 1
    logmag = 0.0
    for i in range(k):
        f = a - i
        if f == 0:
            return LogScalar.zero()
        if f < 0:
            sign = -sign
        logmag += math.log(abs(f))
    return LogScalar(sign, logmag)


def log_comb(n: int, k: int) -> float:
    """log C(n, k) for integers 0 <= k <= n."""
    if k < 0 or k > n:
        return _LOG_ZERO
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def kahan_sum(values: Iterable[float]) -> float:
    """Compensated summation; order-stable to ~1 ulp of the true sum."""
    total = 0.0
    carry = 0.0
    for v in values:
        y = v - carry
        t = total + y
        carry = (t - total) - y
        total = t
    return total
