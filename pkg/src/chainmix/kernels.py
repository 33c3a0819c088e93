"""Degree-n kernel polynomials h_n(x, y) for the four stationary families.

h_n is the degree-n reproducing kernel: the bilinear sum of any orthonormal
polynomial basis of exact degree n.  The general bilinear (alternating) sums
are evaluated exactly for rational parameters; diagonal starts N*e_i have
closed forms that stay cheap at population sizes in the tens of thousands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numerics import (LogScalar, Scalar, check_composition, count_compositions,
                       falling_factorial, is_rational, iter_compositions, log_comb,
                       log_falling, log_rising, multinomial_coefficient,
                       rising_factorial)

DM = "dirichlet_multinomial"
HYPERGEOMETRIC = "hypergeometric"
DIRICHLET = "dirichlet"
MULTINOMIAL = "multinomial"

# Beyond this N the alternating bilinear sum is combinatorially infeasible;
# only the diagonal closed forms remain available.
GENERAL_KERNEL_MAX_N = 5000


class CapacityError(RuntimeError):
    """Requested computation exceeds the configured exact-size limits."""


@dataclass(frozen=True)
class KernelFamily:
    """Stationary family tag plus its parameters.

    Exactly one of the four constructors should be used; the same object also
    identifies the matching orthogonal polynomial system (Hahn, negative-cap
    Hahn, Jacobi, Krawtchouk respectively).
    """
    tag: str
    n_total: int | None = None
    alpha: tuple[Scalar, ...] | None = None
    caps: tuple[int, ...] | None = None
    p: tuple[Scalar, ...] | None = None

    @classmethod
    def dirichlet_multinomial(cls, n_total: int, alpha: Sequence[Scalar]) -> "KernelFamily":
        alpha = tuple(alpha)
        if any(a <= 0 for a in alpha):
            raise ValueError("alpha entries must be positive")
        return cls(DM, n_total=n_total, alpha=alpha)

    @classmethod
    def hypergeometric(cls, n_total: int, caps: Sequence[int]) -> "KernelFamily":
        caps = tuple(int(c) for c in caps)
        if any(c <= 0 for c in caps):
            raise ValueError("caps must be positive integers")
        if not 0 < n_total < sum(caps):
            raise ValueError("need 0 < N < |caps|")
        return cls(HYPERGEOMETRIC, n_total=n_total, caps=caps)

    @classmethod
    def dirichlet(cls, alpha: Sequence[Scalar]) -> "KernelFamily":
        alpha = tuple(alpha)
        if any(a <= 0 for a in alpha):
            raise ValueError("alpha entries must be positive")
        return cls(DIRICHLET, alpha=alpha)

    @classmethod
    def multinomial(cls, n_total: int, p: Sequence[Scalar]) -> "KernelFamily":
        p = tuple(p)
        if any(v <= 0 for v in p):
            raise ValueError("p entries must be positive")
        return cls(MULTINOMIAL, n_total=n_total, p=p)

    @property
    def dim(self) -> int:
        for v in (self.alpha, self.caps, self.p):
            if v is not None:
                return len(v)
        raise AssertionError("family carries no parameters")


def _signed_alpha(family: KernelFamily) -> tuple[Scalar, ...]:
    if family.tag == HYPERGEOMETRIC:
        return tuple(Fraction(-c) for c in family.caps)
    return tuple(Fraction(a) if is_rational(a) else float(a) for a in family.alpha)


def _xi_dm(m: int, x, y, alpha, inner_caps) -> Scalar:
    """Inner sum of the alternating kernel formula, degree-m block."""
    atot = sum(alpha)
    n_total = sum(x)
    denom = rising_factorial(atot + n_total, m) ** 2
    total = 0
    for ell in iter_compositions(m, len(alpha), inner_caps):
        t = Fraction(multinomial_coefficient(ell)) * rising_factorial(atot, m)
        for ai, li, xi, yi in zip(alpha, ell, x, y):
            t = t * rising_factorial(ai + xi, li) * rising_factorial(ai + yi, li) \
                / rising_factorial(ai, li)
        total += t
    return total / denom


def _kernel_discrete_dm(family: KernelFamily, n: int, x, y) -> Scalar:
    alpha = _signed_alpha(family)
    atot = sum(alpha)
    n_total = family.n_total
    inner_caps = family.caps if family.tag == HYPERGEOMETRIC else None
    pref = (atot + 2 * n - 1) * rising_factorial(atot + n_total, n) \
        / falling_factorial(Fraction(n_total), n)
    total = 0
    for m in range(n + 1):
        coeff = Fraction((-1) ** (n - m)) * rising_factorial(atot + m, n - 1) \
            / (math.factorial(m) * math.factorial(n - m))
        total += coeff * _xi_dm(m, x, y, alpha, inner_caps)
    return pref * total


def _kernel_dirichlet(family: KernelFamily, n: int, w, z) -> float:
    alpha = [float(a) for a in family.alpha]
    atot = sum(alpha)
    wv = [float(v) for v in w]
    zv = [float(v) for v in z]
    total = 0.0
    for m in range(n + 1):
        xi = 0.0
        for ell in iter_compositions(m, len(alpha)):
            t = multinomial_coefficient(ell) * rising_factorial(atot, m)
            for ai, li, wi, zi in zip(alpha, ell, wv, zv):
                t = t * (wi * zi) ** li / rising_factorial(ai, li)
            xi += t
        total += ((-1) ** (n - m)) * rising_factorial(atot + m, n - 1) \
            / (math.factorial(m) * math.factorial(n - m)) * xi
    return (atot + 2 * n - 1) * total


def _kernel_multinomial(family: KernelFamily, n: int, x, y) -> Scalar:
    p = tuple(Fraction(v) if is_rational(v) else float(v) for v in family.p)
    n_total = family.n_total
    exact = all(is_rational(v) for v in p)
    total = Fraction(0) if exact else 0.0
    for m in range(n + 1):
        denom = falling_factorial(Fraction(n_total), m) ** 2
        xi = Fraction(0) if exact else 0.0
        for ell in iter_compositions(m, len(p), tuple(min(xi_, yi_) for xi_, yi_ in zip(x, y))):
            t = Fraction(multinomial_coefficient(ell))
            for pi, li, xi_, yi_ in zip(p, ell, x, y):
                t = t * falling_factorial(xi_, li) * falling_factorial(yi_, li) / (pi ** li)
            xi += t / denom
        total += Fraction((-1) ** (n - m) * math.comb(n_total, m) * math.comb(n_total - m, n - m)) * xi
    return total


def kernel(family: KernelFamily, n: int, x, y) -> Scalar:
    """h_n(x, y) by the family's alternating bilinear sum; exact when rational.

    For discrete families ``x`` and ``y`` are compositions of N (bounded by
    the caps for the hypergeometric family); for the Dirichlet family they
    are simplex points.  Degree 0 is identically 1.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return Fraction(1) if family.tag != DIRICHLET else 1.0
    if family.tag == DIRICHLET:
        return _kernel_dirichlet(family, n, x, y)
    if family.n_total > GENERAL_KERNEL_MAX_N:
        raise CapacityError(
            f"general kernel sum infeasible at N = {family.n_total} "
            f"(limit {GENERAL_KERNEL_MAX_N}); only diagonal starts are supported there")
    if n > family.n_total:
        raise ValueError(f"degree {n} exceeds N = {family.n_total}")
    caps = family.caps if family.tag == HYPERGEOMETRIC else None
    x = check_composition(x, total=family.n_total, caps=caps)
    y = check_composition(y, total=family.n_total, caps=caps)
    if family.tag == MULTINOMIAL:
        return _kernel_multinomial(family, n, x, y)
    return _kernel_discrete_dm(family, n, x, y)


def kernel_diag_start(family: KernelFamily, n: int, i: int) -> Scalar:
    """Closed form of h_n at the pure-color diagonal.

    Discrete families: h_n(N e_i, N e_i); Dirichlet: h_n(e_i, e_i).  For the
    hypergeometric family the state N e_i requires caps[i] >= N.
    """
    v = log_kernel_diag_start(family, n, i)
    if family.tag == DIRICHLET:
        return v.to_float()
    alpha = _signed_alpha(family) if family.tag != MULTINOMIAL else None
    if family.tag == MULTINOMIAL:
        p = family.p
        if all(is_rational(q) for q in p):
            pi = Fraction(p[i])
            return Fraction(math.comb(family.n_total, n)) * ((1 - pi) / pi) ** n
        return v.to_float()
    if not all(is_rational(a) for a in alpha):
        return v.to_float()
    if n == 0:
        return Fraction(1)
    atot = sum(alpha)
    n_total = family.n_total
    return (Fraction(math.comb(n_total, n)) * (atot + 2 * n - 1)
            * rising_factorial(atot, n - 1) * rising_factorial(atot - alpha[i], n)
            / (rising_factorial(atot + n_total, n) * rising_factorial(alpha[i], n)))


def log_kernel_diag_start(family: KernelFamily, n: int, i: int) -> LogScalar:
    """LogScalar version of :func:`kernel_diag_start`; O(1) per degree."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return LogScalar.one()
    d = family.dim
    if not 0 <= i < d:
        raise ValueError(f"color index {i} out of range")
    if family.tag == MULTINOMIAL:
        pi = float(family.p[i])
        if n > family.n_total:
            return LogScalar.zero()
        return LogScalar(1, log_comb(family.n_total, n) + n * math.log((1 - pi) / pi))
    if family.tag == HYPERGEOMETRIC:
        caps = family.caps
        if caps[i] < family.n_total:
            raise ValueError(
                f"diagonal start needs caps[{i}] >= N ({caps[i]} < {family.n_total})")
        n_total = family.n_total
        if n > n_total:
            return LogScalar.zero()
        ltot = sum(caps)
        out = LogScalar(1, log_comb(n_total, n))
        out = out * LogScalar.from_float(ltot - 2 * n + 1)
        out = out * log_falling(float(ltot), n - 1) * log_falling(float(ltot - caps[i]), n)
        out = out / (log_falling(float(ltot - n_total), n) * log_falling(float(caps[i]), n))
        return out
    alpha = [float(a) for a in family.alpha]
    atot = sum(alpha)
    if family.tag == DIRICHLET:
        out = LogScalar.from_float(atot + 2 * n - 1)
        out = out * log_rising(atot, n - 1) * log_rising(atot - alpha[i], n)
        return out / (LogScalar(1, math.lgamma(n + 1)) * log_rising(alpha[i], n))
    if n > family.n_total:
        return LogScalar.zero()
    n_total = family.n_total
    out = LogScalar(1, log_comb(n_total, n)) * LogScalar.from_float(atot + 2 * n - 1)
    out = out * log_rising(atot, n - 1) * log_rising(atot - alpha[i], n)
    return out / (log_rising(atot + n_total, n) * log_rising(alpha[i], n))
