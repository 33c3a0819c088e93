"""Multivariate orthogonal polynomial evaluators and their squared norms.

Four systems: Hahn (orthogonal for Dirichlet-multinomial weights, and for the
multivariate hypergeometric when the concentration parameters are negated
integer caps), Krawtchouk (multinomial), shifted Jacobi (Dirichlet) and
Hermite (Gaussian).  Discrete families evaluate exactly in Fractions when the
parameters are rational.

The product construction composes univariate factors with a shifted "virtual"
population M_j that can drop below the argument; each factor is therefore
assembled with its (-M)_(n) prefactor folded into the series, which removes
the spurious 0/0 that a bare hypergeometric-series evaluation hits there.
Series terms whose numerator contains an exact zero factor are zero (they
vanish identically as a function of the parameters), which also covers the
negative-parameter system on the bounded lattice.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .distributions import DirichletParams, SimplexPoint
from .numerics import (Scalar, falling_factorial, is_rational, iter_compositions,
                       rising_factorial)

MultiIndex = tuple[int, ...]


def degree(n: MultiIndex) -> int:
    return sum(n)


def multi_indices(d: int, deg: int) -> list[MultiIndex]:
    """All (d-1)-long index vectors of total degree ``deg``, colex order."""
    if d < 2:
        raise ValueError("need d >= 2 colors")
    return list(iter_compositions(deg, d - 1))


def _exactify(values: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(Fraction(v) if is_rational(v) else float(v) for v in values)


def _alphas(params) -> tuple[Scalar, ...]:
    if isinstance(params, DirichletParams):
        return _exactify(params.alpha)
    return _exactify(tuple(params))


def _ps(p) -> tuple[Scalar, ...]:
    if isinstance(p, SimplexPoint):
        return _exactify(p.p)
    return _exactify(tuple(p))


def hahn_uni(n: int, x: int, N: int, a: Scalar, b: Scalar) -> Scalar:
    """Univariate Hahn polynomial Q_n(x; N, a, b), terminating series of n+1 terms.

    Raises ValueError if a denominator factor vanishes while the running
    numerator is still nonzero (possible only for negative-integer ``a``
    with ``n`` too large for the bounded support).
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    one = Fraction(1) if is_rational(a) and is_rational(b) else 1.0
    total = one
    num = one
    den = one
    for j in range(1, n + 1):
        num = num * (-n + j - 1) * (n + a + b - 1 + j - 1) * (-x + j - 1)
        if num == 0:
            break
        den = den * (a + j - 1) * (-N + j - 1) * j
        if den == 0:
            raise ValueError(
                f"Hahn series hits a pole at term {j} (n={n}, x={x}, N={N}, a={a}, b={b})")
        total += num / den
    return total


def _hahn_factor(n: int, x: int, M: int, a: Scalar, b: Scalar) -> Scalar:
    """(-M)_(n) * Q_n(x; M, a, b) with the pole at (-M)_(j) = 0 removed."""
    one = Fraction(1) if is_rational(a) and is_rational(b) else 1.0
    total = one * rising_factorial(-M, n)
    num = one
    for j in range(1, n + 1):
        num = num * (-n + j - 1) * (n + a + b - 1 + j - 1) * (-x + j - 1)
        if num == 0:
            break
        den = rising_factorial(a, j) * math.factorial(j)
        if den == 0:
            raise ValueError(
                f"Hahn factor pole: (a)_({j}) = 0 with nonzero numerator (a={a}, n={n}, x={x})")
        total += num * rising_factorial(-M + j, n - j) / den
    return total


def hahn_multi(n: MultiIndex, x: Sequence[int], N: int, params) -> Scalar:
    """Product-form multivariate Hahn polynomial on compositions of N.

    ``params`` may be a DirichletParams, a positive rational sequence, or a
    sequence of negated integer caps for the hypergeometric system.
    """
    alpha = _alphas(params)
    d = len(alpha)
    if len(n) != d - 1:
        raise ValueError(f"index must have length d-1 = {d - 1}")
    if len(x) != d:
        raise ValueError("state must have length d")
    deg = sum(n)
    if deg > N:
        raise ValueError(f"total degree {deg} exceeds N = {N}")
    out = Fraction((-1) ** deg) / falling_factorial(Fraction(N), deg)
    xprev = 0
    for j in range(1, d):
        ntail = sum(n[j:])
        atail = sum(alpha[j:])
        M = N - xprev - ntail
        out = out * _hahn_factor(n[j - 1], x[j - 1], M, alpha[j - 1], atail + 2 * ntail)
        xprev += x[j - 1]
    return out


def hahn_norm2(n: MultiIndex, N: int, params) -> Scalar:
    """Squared norm of hahn_multi under its orthogonality weight."""
    alpha = _alphas(params)
    d = len(alpha)
    deg = sum(n)
    atot = sum(alpha)
    out = rising_factorial(atot + N, deg) / (
        falling_factorial(Fraction(N), deg) * rising_factorial(atot, 2 * deg))
    for j in range(1, d):
        nj = n[j - 1]
        ntail_j = sum(n[j - 1:])
        ntail = sum(n[j:])
        atail_j = sum(alpha[j - 1:])
        atail = sum(alpha[j:])
        out = out * (rising_factorial(atail_j + ntail_j + ntail - 1, nj)
                     * rising_factorial(atail + 2 * ntail, nj)
                     * math.factorial(nj)) / rising_factorial(alpha[j - 1], nj)
    return out


def _krawtchouk_factor(n: int, x: int, M: int, p: Scalar) -> Scalar:
    """(-M)_(n) * K_n(x; M, p), same pole removal as the Hahn factor."""
    one = Fraction(1) if is_rational(p) else 1.0
    total = one * rising_factorial(-M, n)
    num = one
    for j in range(1, n + 1):
        num = num * (-n + j - 1) * (-x + j - 1)
        if num == 0:
            break
        total += num * rising_factorial(-M + j, n - j) / (p ** j * math.factorial(j))
    return total


def krawtchouk_multi(n: MultiIndex, x: Sequence[int], N: int, p) -> Scalar:
    """Product-form multivariate Krawtchouk polynomial on compositions of N."""
    pv = _ps(p)
    d = len(pv)
    if len(n) != d - 1:
        raise ValueError(f"index must have length d-1 = {d - 1}")
    deg = sum(n)
    if deg > N:
        raise ValueError(f"total degree {deg} exceeds N = {N}")
    out = Fraction((-1) ** deg) / falling_factorial(Fraction(N), deg)
    xprev = 0
    for j in range(1, d):
        ntail = sum(n[j:])
        ptail = sum(pv[j - 1:])
        M = N - xprev - ntail
        out = out * _krawtchouk_factor(n[j - 1], x[j - 1], M, pv[j - 1] / ptail)
        xprev += x[j - 1]
    return out


def krawtchouk_norm2(n: MultiIndex, N: int, p) -> Scalar:
    """Squared norm of krawtchouk_multi under the multinomial weight."""
    pv = _ps(p)
    d = len(pv)
    deg = sum(n)
    out = 1 / falling_factorial(Fraction(N), deg)
    for j in range(1, d):
        nj = n[j - 1]
        ptail_j = sum(pv[j - 1:])
        ptail = sum(pv[j:])
        out = out * (ptail_j ** nj) * (ptail ** nj) * math.factorial(nj) / (pv[j - 1] ** nj)
    return out


def jacobi_uni(n: int, z: Scalar, a: Scalar, b: Scalar) -> Scalar:
    """Shifted Jacobi polynomial on [0, 1], beta(a, b)-orthogonal."""
    total = 1 if is_rational(z) and is_rational(a) and is_rational(b) else 1.0
    num = total
    for j in range(1, n + 1):
        num = num * (-n + j - 1) * (n + a + b - 1 + j - 1) * z
        total += num / (rising_factorial(a, j) * math.factorial(j))
    return total


def jacobi_multi(n: MultiIndex, z, params) -> float:
    """Product-form multivariate Jacobi polynomial on the simplex.

    At |z^j| = 0 the factor is 0 for n_j >= 1 and 1 for n_j = 0 (the
    polynomial limit of |z^j|^{n_j} J_{n_j}).
    """
    alpha = _alphas(params)
    zv = [float(v) for v in _ps(z)]
    d = len(alpha)
    if len(n) != d - 1:
        raise ValueError(f"index must have length d-1 = {d - 1}")
    out = 1.0
    for j in range(1, d):
        nj = n[j - 1]
        ztail = sum(zv[j - 1:])
        if ztail == 0.0:
            if nj == 0:
                continue
            return 0.0
        ntail = sum(n[j:])
        atail = float(sum(alpha[j:]))
        out *= ztail ** nj * float(jacobi_uni(nj, zv[j - 1] / ztail,
                                              float(alpha[j - 1]), atail + 2 * ntail))
    return out


def jacobi_norm2(n: MultiIndex, params) -> float:
    """Squared norm of jacobi_multi under the Dirichlet weight."""
    alpha = [float(a) for a in _alphas(params)]
    d = len(alpha)
    deg = sum(n)
    atot = sum(alpha)
    out = 1.0 / rising_factorial(atot, 2 * deg)
    for j in range(1, d):
        nj = n[j - 1]
        ntail_j = sum(n[j - 1:])
        ntail = sum(n[j:])
        atail_j = sum(alpha[j - 1:])
        atail = sum(alpha[j:])
        out *= (rising_factorial(atail_j + ntail_j + ntail - 1, nj)
                * rising_factorial(atail + 2 * ntail, nj)
                * math.factorial(nj)) / rising_factorial(alpha[j - 1], nj)
    return out


_HERMITE_SERIES_MAX = 30


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x).

    The explicit alternating sum is used through n = 30; beyond that the
    three-term recurrence H_{k+1} = 2x H_k - 2k H_{k-1} is more stable.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n <= _HERMITE_SERIES_MAX:
        total = 0.0
        for k in range(n // 2 + 1):
            total += ((-1) ** k * (2.0 * x) ** (n - 2 * k)
                      / (math.factorial(k) * math.factorial(n - 2 * k)))
        return math.factorial(n) * total
    prev, cur = 1.0, 2.0 * x
    for k in range(1, n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
    return cur


def hermite_square_gf(x: float, t: float) -> float:
    """Closed form of sum_n H_n(x)^2 t^n / (2^n n!) for |t| < 1."""
    if abs(t) >= 1.0:
        raise ValueError(f"|t| must be < 1, got {t}")
    return math.exp(2.0 * x * x * t / (1.0 + t)) / math.sqrt(1.0 - t * t)
