"""Exact chi-square distance curves, closed-form mixing bounds and solvers.

The central identity: chi-square distance after l steps from start x equals
sum_n beta_n^{2l} h_n(x, x) over degrees n >= 1.  Pure-color starts use the
O(1)-per-degree diagonal kernel closed forms; general starts go through the
full kernel sums (exact, capacity-limited).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chains import (BLDownUp, BLLevel, BLUpDown, Ehrenfest, FiniteChainSpec,
                     GibbsDM, Hubbell, Moran, NormalAR, PolyaDownUp, PolyaLevel,
                     PolyaUpDown, check_state, dimension, stationary_family)
from .kernels import kernel, kernel_diag_start, log_kernel_diag_start
from .numerics import LogScalar, Scalar, State, is_rational, kahan_sum
from .spectra import eigenvalue_of_degree, max_degree, normal_ar_spectrum

EXACT_CURVE_MAX_N = 64
_TERM_CUTOFF = 1e-18
_EXP_OVERFLOW = 700.0


@dataclass(frozen=True)
class ChiSquareCurve:
    spec: FiniteChainSpec
    start: State
    points: tuple[tuple[int, float], ...]


def _pure_color_index(spec: FiniteChainSpec, x: State) -> int | None:
    n = spec.n_total
    for i, v in enumerate(x):
        if v == n:
            return i
    return None


def _spec_is_rational(spec: FiniteChainSpec) -> bool:
    if isinstance(spec, (PolyaLevel, PolyaDownUp, PolyaUpDown, GibbsDM)):
        return all(is_rational(a) for a in spec.alpha)
    if isinstance(spec, (Moran, Hubbell)):
        return is_rational(spec.m) and all(is_rational(v) for v in spec.p)
    if isinstance(spec, Ehrenfest):
        return all(is_rational(v) for v in spec.p)
    return True  # Bernoulli-Laplace families carry integer caps only


def _diag_values_exact(spec: FiniteChainSpec, i: int) -> list[Scalar]:
    family = stationary_family(spec)
    return [kernel_diag_start(family, n, i) for n in range(1, max_degree(spec) + 1)]


def _diag_values_general(spec: FiniteChainSpec, x: State) -> list[Scalar]:
    family = stationary_family(spec)
    return [kernel(family, n, x, x) for n in range(1, max_degree(spec) + 1)]


def chisq_exact(spec: FiniteChainSpec, start, l: int, exact: bool | None = None) -> Scalar:
    """Chi-square distance to stationarity after l steps from ``start``.

    ``exact=True`` forces Fraction arithmetic end to end (rational
    parameters only); ``exact=None`` picks it automatically at small N.  The
    float path evaluates terms in the log domain with compensated summation.
    """
    if l < 0:
        raise ValueError("need l >= 0")
    x = check_state(spec, start)
    if exact is None:
        exact = _spec_is_rational(spec) and spec.n_total <= EXACT_CURVE_MAX_N
    if exact and not _spec_is_rational(spec):
        raise ValueError("exact evaluation needs rational parameters")
    i = _pure_color_index(spec, x)

    if exact:
        diags = _diag_values_exact(spec, i) if i is not None else _diag_values_general(spec, x)
        total = Fraction(0)
        for n, h in enumerate(diags, start=1):
            total += Fraction(eigenvalue_of_degree(spec, n)) ** (2 * l) * Fraction(h)
        return total

    if i is None:
        # general starts reuse the exact kernel values (capacity-limited) but
        # accumulate in floats
        diags = [float(v) for v in _diag_values_general(spec, x)]
        terms = []
        for n, h in enumerate(diags, start=1):
            b = float(eigenvalue_of_degree(spec, n))
            terms.append((b * b) ** l * h)
        return kahan_sum(terms)

    family = stationary_family(spec)
    terms = []
    total = 0.0
    for n in range(1, max_degree(spec) + 1):
        b = float(eigenvalue_of_degree(spec, n))
        if b == 0.0 and l > 0:
            continue
        log_h = log_kernel_diag_start(family, n, i)
        if log_h.sign == 0:
            continue
        log_term = 2 * l * math.log(abs(b)) if l else 0.0
        log_term += log_h.log_magnitude
        if log_term > _EXP_OVERFLOW:
            return math.inf
        term = math.exp(log_term)
        terms.append(term)
        total += term
        # scan upward; once terms decay below the cutoff the tail cannot
        # re-enter at fixed l because beta_n^2l h_n is eventually decreasing
        if total > 0 and term < _TERM_CUTOFF * total and n >= 2 and terms[-2] > term:
            break
    return kahan_sum(terms)


def chisq_curve(spec: FiniteChainSpec, start, l_max: int,
                exact: bool | None = None) -> ChiSquareCurve:
    x = check_state(spec, start)
    pts = tuple((l, float(chisq_exact(spec, x, l, exact=exact))) for l in range(l_max + 1))
    return ChiSquareCurve(spec, x, pts)


def chisq_normal_ar(a_matrix, sigma, x, l: int) -> float:
    """Chi-square distance of the reversible normal AR chain from start x."""
    if l < 1:
        raise ValueError("need l >= 1 (the point start has infinite chi-square)")
    spectrum = normal_ar_spectrum(a_matrix, sigma)
    z = spectrum.whiten(x)
    lam2l = spectrum.lambdas ** (2 * l)
    expo = float(np.sum(z * z * lam2l / (1.0 + lam2l)))
    if expo > _EXP_OVERFLOW:
        return math.inf
    log_den = 0.5 * float(np.sum(np.log1p(-lam2l * lam2l)))
    return math.exp(expo - log_den) - 1.0


def tv_upper(chisq: float) -> float:
    """Total-variation upper bound sqrt(chi-square)/2."""
    if chisq < 0:
        raise ValueError("chi-square distance cannot be negative")
    return math.sqrt(float(chisq)) / 2.0


@dataclass(frozen=True)
class MixingBound:
    """Step thresholds bracketing the cutoff, with their guaranteed levels.

    For l >= upper_threshold the chain satisfies chisq <= upper_level; for
    l <= lower_threshold it satisfies chisq >= lower_level.  ``upper_valid``
    flags parameter ranges where the upper statement applies.
    """
    family: str
    c: float
    upper_threshold: float
    upper_level: float
    lower_threshold: float
    lower_level: float
    rate: float
    upper_valid: bool = True


def _moran_like_bound(name: str, n_total: int, atot: float, a_i: float,
                      rate: float, c: float) -> MixingBound:
    base = 3.0 * max(2.0, atot)
    up = (math.log(base * (n_total / (n_total + atot)) * max((atot - a_i) / a_i, 1.0)) + c) / rate
    lo = (math.log(base * n_total * (atot - a_i) / ((n_total + atot) * a_i)) - c) / rate
    return MixingBound(name, c, up, math.exp(-c), lo, math.exp(c) / 6.0, rate)


def mixing_bounds(spec, start, c: float) -> MixingBound:
    """The closed-form upper/lower mixing thresholds for a pure-color start.

    ``start`` is N e_i for a finite chain (the zero vector for NormalAR);
    ``c`` shifts along the cutoff, guarantee levels depending on the family.
    """
    if c < 0:
        raise ValueError("need c >= 0")
    if isinstance(spec, NormalAR):
        if np.any(np.asarray(start, dtype=float) != 0.0):
            raise ValueError("the NormalAR bounds require start 0")
        spectrum = normal_ar_spectrum(spec.a_matrix, spec.sigma)
        lam1 = float(np.max(np.abs(spectrum.lambdas)))
        d = spec.sigma.shape[0]
        if lam1 == 0.0:
            return MixingBound("normal_ar", c, 1.0, 10 * math.exp(-c), 0.0,
                               math.exp(c) / 4.0, math.inf)
        rate = -4.0 * math.log(lam1)
        return MixingBound("normal_ar", c, (math.log(2.0) + c) / rate, 10 * math.exp(-c),
                           (math.log(2.0) - c) / rate, math.exp(c) / 4.0, rate,
                           upper_valid=c >= math.log(d / 2.0))

    x = check_state(spec, start)
    i = _pure_color_index(spec, x)
    if i is None:
        raise ValueError("mixing bounds require a pure-color start N*e_i")
    n_total = spec.n_total

    if isinstance(spec, Moran):
        atot = float(sum(spec.alpha))
        a_i = float(spec.alpha[i])
        rate = -2.0 * math.log(1.0 - atot / (n_total * (n_total + atot)))
        return _moran_like_bound("moran", n_total, atot, a_i, rate, c)
    if isinstance(spec, Hubbell):
        atot = float(sum(spec.alpha))
        a_i = float(spec.alpha[i])
        rate = -2.0 * math.log(1.0 - atot / (n_total * (n_total + atot - 1)))
        return _moran_like_bound("hubbell", n_total, atot, a_i, rate, c)
    if isinstance(spec, GibbsDM):
        atot = float(sum(spec.alpha))
        a_i = float(spec.alpha[i])
        base = 3.0 * max(2.0, atot)
        lr = math.log(n_total / (n_total + atot))
        up = -0.5 * ((math.log(base * max((atot - a_i) / a_i, 1.0)) + c) / lr + 1.0)
        lo = -0.5 * ((math.log(base * (atot - a_i) / a_i) - c) / lr + 1.0)
        return MixingBound("gibbs_dm", c, up, math.exp(-c), lo, math.exp(c) / 6.0, -2.0 * lr)
    if isinstance(spec, BLDownUp):
        caps = spec.caps
        if caps[i] < n_total:
            raise ValueError(
                f"the down-up bound needs caps[{i}] >= N ({caps[i]} < {n_total})")
        ltot = sum(caps)
        beta1 = (n_total - spec.s) * (ltot - n_total) / (n_total * (ltot - n_total + spec.s))
        rate = -2.0 * math.log(beta1)
        num = math.log(ltot * n_total * (ltot - caps[i]) / ((ltot - n_total) * caps[i]))
        return MixingBound("bl_down_up", c, (num + c) / rate, 2.0 * math.exp(-c),
                           (num - c) / rate, math.exp(c) / 2.0, rate)
    if isinstance(spec, Ehrenfest):
        p_i = float(spec.p[i])
        num = math.log(n_total * (1.0 - p_i) / p_i)
        if spec.s == n_total:
            # one-step stationarity; any l >= 1 satisfies the upper level
            return MixingBound("ehrenfest", c, 1.0, math.exp(math.exp(-c)) - 1.0,
                               0.0, math.exp(c), math.inf)
        rate = -2.0 * math.log(1.0 - spec.s / n_total)
        return MixingBound("ehrenfest", c, (num + c) / rate, math.exp(math.exp(-c)) - 1.0,
                           (num - c) / rate, math.exp(c), rate)
    raise TypeError(f"no closed-form mixing bound for {type(spec).__name__}")


def remark_estimate(spec, i: int = 0) -> float:
    """Large-population necessary-and-sufficient step estimate at c = 0.

    This is the first-order simplification of the corresponding bound: the
    log prefactor with N/(N+|alpha|) dropped, divided by the linearized
    spectral-gap rate.  It is the quantity the worked examples report.
    """
    if isinstance(spec, (Moran, Hubbell, GibbsDM)):
        atot = float(sum(spec.alpha))
        a_i = float(spec.alpha[i])
        num = math.log(3.0 * max(2.0, atot) * max((atot - a_i) / a_i, 1.0))
        n_total = spec.n_total
        if isinstance(spec, Moran):
            return num * n_total * (n_total + atot) / (2.0 * atot)
        if isinstance(spec, Hubbell):
            return num * n_total * (n_total + atot - 1.0) / (2.0 * atot)
        return num * (n_total + atot) / (2.0 * atot)
    if isinstance(spec, BLDownUp):
        ltot = sum(spec.caps)
        n_total = spec.n_total
        num = math.log(ltot * n_total * (ltot - spec.caps[i]) / ((ltot - n_total) * spec.caps[i]))
        return num * n_total * (ltot - n_total + spec.s) / (2.0 * spec.s * ltot)
    if isinstance(spec, Ehrenfest):
        p_i = float(spec.p[i])
        return math.log(spec.n_total * (1.0 - p_i) / p_i) * spec.n_total / (2.0 * spec.s)
    raise TypeError(f"no remark estimate for {type(spec).__name__}")


def steps_to_epsilon(spec: FiniteChainSpec, start, eps: float,
                     exact: bool | None = None) -> int:
    """Smallest l with chisq_exact(spec, start, l) <= eps.

    Exponential bracketing then bisection, then a linear walk-back so ties
    resolve to the smaller l even if the curve is locally flat.
    """
    if eps <= 0:
        raise ValueError("need eps > 0")
    x = check_state(spec, start)
    val = lambda l: chisq_exact(spec, x, l, exact=exact)
    if val(0) <= eps:
        return 0
    hi = 1
    while val(hi) > eps:
        hi *= 2
        if hi > 10 ** 9:
            raise RuntimeError("no crossing found below 1e9 steps")
    lo = hi // 2  # chisq(lo) > eps
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if val(mid) <= eps:
            hi = mid
        else:
            lo = mid
    while hi > 1 and val(hi - 1) <= eps:
        hi -= 1
    return hi
