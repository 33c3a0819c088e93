"""Stationary laws of the chains: pmfs/densities, samplers, and RNG streams.

Evaluators return exact ``Fraction`` values whenever every parameter is
rational (int or Fraction) and floats otherwise.  Samplers draw from a
splittable counter-based stream created by :func:`make_stream`; streams are
never shared between callers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .numerics import (Rational, Scalar, check_composition, is_rational,
                       multinomial_coefficient, rising_factorial)


@dataclass(frozen=True)
class DirichletParams:
    """Positive concentration vector (alpha_1, ..., alpha_d)."""
    alpha: tuple[Scalar, ...]

    def __init__(self, alpha: Sequence[Scalar]):
        object.__setattr__(self, "alpha", tuple(alpha))
        if not self.alpha:
            raise ValueError("alpha must be nonempty")
        if any(a <= 0 for a in self.alpha):
            raise ValueError(f"alpha entries must be positive: {self.alpha}")

    @property
    def total(self) -> Scalar:
        return sum(self.alpha)

    def __len__(self) -> int:
        return len(self.alpha)


@dataclass(frozen=True)
class SimplexPoint:
    """Probability vector; entries nonnegative, summing to 1 within 1e-12."""
    p: tuple[Scalar, ...]

    def __init__(self, p: Sequence[Scalar]):
        object.__setattr__(self, "p", tuple(p))
        if any(v < 0 for v in self.p):
            raise ValueError(f"simplex entries must be nonnegative: {self.p}")
        if abs(float(sum(self.p)) - 1.0) > 1e-12:
            raise ValueError(f"simplex point sums to {float(sum(self.p))}, not 1")

    def __len__(self) -> int:
        return len(self.p)


@dataclass(frozen=True, eq=False)
class GaussianParams:
    """Mean vector and SPD covariance; Cholesky factor cached at construction."""
    mean: np.ndarray
    cov: np.ndarray
    chol: np.ndarray

    def __init__(self, mean, cov):
        mean = np.asarray(mean, dtype=float)
        cov = np.asarray(cov, dtype=float)
        if cov.shape != (mean.size, mean.size):
            raise ValueError("covariance shape does not match mean")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > 1e-12 * scale:
            raise ValueError("covariance is not symmetric within 1e-12")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "chol", np.linalg.cholesky(cov))


def _alpha_tuple(params) -> tuple[Scalar, ...]:
    if isinstance(params, DirichletParams):
        return params.alpha
    return tuple(params)


def _p_tuple(p) -> tuple[Scalar, ...]:
    if isinstance(p, SimplexPoint):
        return p.p
    return tuple(p)


def pmf_dirichlet_multinomial(x: Sequence[int], params) -> Scalar:
    """C(N; x) prod (alpha_i)_(x_i) / (|alpha|)_(N) at composition x."""
    alpha = _alpha_tuple(params)
    x = check_composition(x)
    if len(x) != len(alpha):
        raise ValueError("dimension mismatch")
    n = sum(x)
    out = multinomial_coefficient(x)
    if not all(is_rational(a) for a in alpha):
        return math.exp(log_pmf_dirichlet_multinomial(x, alpha))
    out = Fraction(out)
    for xi, ai in zip(x, alpha):
        out *= rising_factorial(Fraction(ai), xi)
    return out / rising_factorial(Fraction(sum(alpha)), n)


def log_pmf_dirichlet_multinomial(x: Sequence[int], params) -> float:
    """Log of the Dirichlet-multinomial pmf; safe at N in the tens of thousands."""
    alpha = [float(a) for a in _alpha_tuple(params)]
    n = sum(x)
    atot = sum(alpha)
    out = math.lgamma(n + 1) - math.lgamma(atot + n) + math.lgamma(atot)
    for xi, ai in zip(x, alpha):
        out += math.lgamma(ai + xi) - math.lgamma(ai) - math.lgamma(xi + 1)
    return out


def pmf_multinomial(x: Sequence[int], p) -> Scalar:
    """C(N; x) prod p_i^{x_i}; exact when p is rational."""
    pv = _p_tuple(p)
    x = check_composition(x)
    if len(x) != len(pv):
        raise ValueError("dimension mismatch")
    out = multinomial_coefficient(x)
    if all(is_rational(v) for v in pv):
        out = Fraction(out)
        for xi, pi in zip(x, pv):
            out *= Fraction(pi) ** xi
        return out
    return float(out) * math.prod(float(pi) ** xi for xi, pi in zip(x, pv))


def pmf_hypergeometric(x: Sequence[int], n: int, caps: Sequence[int]) -> Fraction:
    """prod C(l_i, x_i) / C(|l|, N): composition law of a without-replacement draw."""
    x = check_composition(x, total=n, caps=caps)
    num = 1
    for cap, xi in zip(caps, x):
        num *= math.comb(cap, xi)
    return Fraction(num, math.comb(sum(caps), n))


def pdf_dirichlet(z, params) -> float:
    """Dirichlet density at an interior simplex point."""
    alpha = [float(a) for a in _alpha_tuple(params)]
    zv = [float(v) for v in _p_tuple(z)]
    if len(zv) != len(alpha):
        raise ValueError("dimension mismatch")
    logc = math.lgamma(sum(alpha)) - sum(math.lgamma(a) for a in alpha)
    out = logc
    for zi, ai in zip(zv, alpha):
        if zi == 0.0:
            if ai < 1.0:
                raise ValueError("density diverges at a zero coordinate with alpha < 1")
            if ai > 1.0:
                return 0.0
        else:
            out += (ai - 1.0) * math.log(zi)
    return math.exp(out)


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent counter-based stream keyed by (seed, *key).

    Philox streams seeded through SeedSequence are statistically independent
    across distinct keys, so (seed, replica, step) style keys give
    reproducible parallel Monte Carlo without sharing state.
    """
    return np.random.Generator(np.random.Philox(seed=np.random.SeedSequence([seed, *key])))


def sample_dirichlet(params, rng: np.random.Generator) -> np.ndarray:
    """One simplex draw via the gamma-ratio construction."""
    alpha = np.array([float(a) for a in _alpha_tuple(params)])
    g = rng.gamma(alpha)
    while g.sum() == 0.0:  # only reachable for tiny alphas
        g = rng.gamma(alpha)
    return g / g.sum()


def sample_multinomial(n: int, p, rng: np.random.Generator) -> tuple[int, ...]:
    pv = np.array([float(v) for v in _p_tuple(p)])
    return tuple(int(c) for c in rng.multinomial(n, pv / pv.sum()))


def sample_dirichlet_multinomial(n: int, params, rng: np.random.Generator) -> tuple[int, ...]:
    """Sequential reinforced draws: weight alpha + (count so far), unit increments."""
    alpha = [float(a) for a in _alpha_tuple(params)]
    counts = [0] * len(alpha)
    weights = np.array(alpha, dtype=float)
    for _ in range(n):
        i = _categorical(weights, rng)
        counts[i] += 1
        weights[i] += 1.0
    return tuple(counts)


def sample_hypergeometric(n: int, caps: Sequence[int], rng: np.random.Generator) -> tuple[int, ...]:
    """Composition of n balls drawn without replacement from a pool of caps."""
    if n > sum(caps):
        raise ValueError("cannot draw more balls than the pool holds")
    counts = []
    remaining = sum(caps)
    left = n
    for cap in caps[:-1]:
        remaining -= cap
        k = int(rng.hypergeometric(cap, remaining, left)) if left > 0 else 0
        counts.append(k)
        left -= k
    counts.append(left)
    return tuple(counts)


def sample_gaussian(params: GaussianParams, rng: np.random.Generator) -> np.ndarray:
    return params.mean + params.chol @ rng.standard_normal(params.mean.size)


def _categorical(weights: np.ndarray, rng: np.random.Generator) -> int:
    u = rng.random() * weights.sum()
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if u < acc:
            return i
    return len(weights) - 1


@dataclass(frozen=True)
class Multinomial:
    n: int
    p: tuple[Scalar, ...]

    def sample(self, rng):
        return sample_multinomial(self.n, self.p, rng)


@dataclass(frozen=True)
class DirichletMultinomial:
    n: int
    alpha: tuple[Scalar, ...]

    def sample(self, rng):
        return sample_dirichlet_multinomial(self.n, self.alpha, rng)


@dataclass(frozen=True)
class MultivariateHypergeometric:
    n: int
    caps: tuple[int, ...]

    def sample(self, rng):
        return sample_hypergeometric(self.n, self.caps, rng)


@dataclass(frozen=True)
class Dirichlet:
    alpha: tuple[Scalar, ...]

    def sample(self, rng):
        return sample_dirichlet(self.alpha, rng)


@dataclass(frozen=True, eq=False)
class Gaussian:
    params: GaussianParams

    def sample(self, rng):
        return sample_gaussian(self.params, rng)


def sample(distribution, rng: np.random.Generator):
    """Draw once from any of the five supported stationary laws."""
    return distribution.sample(rng)
