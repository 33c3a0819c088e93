"""Closed-form spectra for every chain family and verification against oracles.

Eigenvalues come with the degree they belong to and the dimension of that
degree's eigenspace.  ``verify_eigenfunctions`` checks K q = beta q residuals
state by state (exactly, for rational parameters) and that the formula
eigenvalue multiset equals the spectrum of the brute-force matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .chains import (BLDownUp, BLLevel, BLUpDown, Ehrenfest, FiniteChainSpec,
                     GibbsDM, Hubbell, Moran, NormalAR, PolyaDownUp, PolyaLevel,
                     PolyaUpDown, build_transition_matrix, dimension,
                     normal_ar_check, state_space_size, stationary_family)
from .kernels import CapacityError, HYPERGEOMETRIC, MULTINOMIAL
from .numerics import (Scalar, count_bounded_compositions, falling_factorial,
                       is_rational, rising_factorial)
from .orthopoly import hahn_multi, krawtchouk_multi, multi_indices

_BL = (BLLevel, BLDownUp, BLUpDown)


@dataclass(frozen=True)
class SpectralTerm:
    degree: int
    value: Scalar
    multiplicity: int


def _exact_or_float(v: Scalar) -> Scalar:
    return v if is_rational(v) else float(v)


def _polya_level_value(n: int, n_total: int, s: int, atot: Scalar) -> Scalar:
    forms = []
    for swap in (False, True):
        total = 0
        for k in range(n + 1):
            a, b = (n - k, k) if swap else (k, n - k)
            total += (Fraction(math.comb(n, k))
                      * falling_factorial(Fraction(n_total - s), a)
                      * falling_factorial(Fraction(s), b)
                      / (falling_factorial(Fraction(n_total), a)
                         * rising_factorial(n_total + atot, b)))
        forms.append(total)
    if forms[0] != forms[1]:
        raise AssertionError(f"the two level-model eigenvalue forms disagree at n={n}")
    return forms[0]


def _bl_level_value(n: int, n_total: int, s: int, ltot: int) -> Fraction:
    forms = []
    for swap in (False, True):
        total = Fraction(0)
        for k in range(n + 1):
            a, b = (n - k, k) if swap else (k, n - k)
            total += (Fraction(math.comb(n, k))
                      * falling_factorial(Fraction(n_total - s), a)
                      * falling_factorial(Fraction(s), b)
                      / (falling_factorial(Fraction(n_total), a)
                         * falling_factorial(Fraction(ltot - n_total), b)))
        forms.append(total)
    if forms[0] != forms[1]:
        raise AssertionError(f"the two level-model eigenvalue forms disagree at n={n}")
    return forms[0]


def eigenvalue_of_degree(spec: FiniteChainSpec, n: int) -> Scalar:
    """beta_n for degree n, exact for rational parameters."""
    nt = spec.n_total
    if isinstance(spec, PolyaLevel):
        return _exact_or_float(_polya_level_value(n, nt, spec.s, sum(spec.alpha)))
    if isinstance(spec, GibbsDM):
        return _exact_or_float(
            falling_factorial(Fraction(nt), n) / rising_factorial(nt + sum(spec.alpha), n))
    if isinstance(spec, PolyaDownUp):
        atot = sum(spec.alpha)
        return _exact_or_float(
            falling_factorial(Fraction(nt - spec.s), n) * rising_factorial(nt + atot, n)
            / (falling_factorial(Fraction(nt), n) * rising_factorial(nt - spec.s + atot, n)))
    if isinstance(spec, PolyaUpDown):
        atot = sum(spec.alpha)
        return _exact_or_float(
            falling_factorial(Fraction(nt), n) * rising_factorial(nt + spec.s + atot, n)
            / (falling_factorial(Fraction(nt + spec.s), n) * rising_factorial(nt + atot, n)))
    if isinstance(spec, Moran):
        atot = sum(spec.alpha)
        return _exact_or_float(1 - Fraction(n) * (atot + n - 1) / (nt * (nt + atot)))
    if isinstance(spec, Hubbell):
        atot = sum(spec.alpha)
        return _exact_or_float(1 - Fraction(n) * (n + atot - 1) / (nt * (nt + atot - 1)))
    if isinstance(spec, BLLevel):
        return _bl_level_value(n, nt, spec.s, sum(spec.caps))
    if isinstance(spec, BLDownUp):
        ltot = sum(spec.caps)
        return (falling_factorial(Fraction(nt - spec.s), n)
                * falling_factorial(Fraction(ltot - nt), n)
                / (falling_factorial(Fraction(nt), n)
                   * falling_factorial(Fraction(ltot - nt + spec.s), n)))
    if isinstance(spec, BLUpDown):
        ltot = sum(spec.caps)
        return (falling_factorial(Fraction(nt), n)
                * falling_factorial(Fraction(ltot - nt - spec.s), n)
                / (falling_factorial(Fraction(nt + spec.s), n)
                   * falling_factorial(Fraction(ltot - nt), n)))
    if isinstance(spec, Ehrenfest):
        return falling_factorial(Fraction(nt - spec.s), n) / falling_factorial(Fraction(nt), n)
    raise TypeError(f"no closed-form spectrum for {type(spec).__name__}")


def degree_multiplicity(spec: FiniteChainSpec, n: int) -> int:
    """Dimension of the degree-n eigenspace.

    For chains on the full composition lattice this is C(d+n-2, n).  On the
    bounded lattice the polynomial degree filtration saturates, and the
    increment |X_{n,caps}| - |X_{n-1,caps}| (zero past min(N, |caps|-N))
    is what matches the matrix spectrum.
    """
    d = dimension(spec)
    if isinstance(spec, _BL):
        nmax = min(spec.n_total, sum(spec.caps) - spec.n_total)
        if n > nmax:
            return 0
        cur = count_bounded_compositions(n, spec.caps)
        prev = count_bounded_compositions(n - 1, spec.caps) if n else 0
        return cur - prev
    return math.comb(d + n - 2, n)


def max_degree(spec: FiniteChainSpec) -> int:
    if isinstance(spec, _BL):
        return min(spec.n_total, sum(spec.caps) - spec.n_total)
    return spec.n_total


def eigenvalues(spec: FiniteChainSpec) -> list[SpectralTerm]:
    """The full spectrum as (degree, beta_n, multiplicity) terms.

    Multiplicities sum to the state-space size; beta_0 = 1 always.
    """
    out = []
    for n in range(max_degree(spec) + 1):
        mult = degree_multiplicity(spec, n)
        if mult > 0:
            out.append(SpectralTerm(n, eigenvalue_of_degree(spec, n), mult))
    return out


def _eigenfunction_basis(spec: FiniteChainSpec) -> Callable:
    family = stationary_family(spec)
    if family.tag == MULTINOMIAL:
        return lambda nvec, x: krawtchouk_multi(nvec, x, spec.n_total, spec.p)
    if family.tag == HYPERGEOMETRIC:
        neg = tuple(Fraction(-c) for c in spec.caps)
        return lambda nvec, x: hahn_multi(nvec, x, spec.n_total, neg)
    return lambda nvec, x: hahn_multi(nvec, x, spec.n_total, family.alpha)


@dataclass(frozen=True)
class EigenReport:
    ok: bool
    max_residual: float
    residual_exact_zero: bool
    multiset_ok: bool
    checked_indices: int
    first_failure: str | None


def verify_eigenfunctions(spec: FiniteChainSpec, max_n: int,
                          max_states: int = 2000,
                          eigenvalue_override: Callable[[int], Scalar] | None = None) -> EigenReport:
    """Check K q_n = beta_|n| q_n for every index with |n| <= max_n.

    Residuals are exact rationals for rational parameters, so the report can
    assert exact zero.  Also compares the formula eigenvalue multiset with
    the numerically diagonalized matrix within 1e-10.
    """
    if state_space_size(spec) > max_states:
        raise CapacityError(
            f"state space of size {state_space_size(spec)} exceeds cap {max_states}")
    states, matrix = build_transition_matrix(spec)
    basis = _eigenfunction_basis(spec)
    d = dimension(spec)
    betafun = eigenvalue_override or (lambda n: eigenvalue_of_degree(spec, n))

    worst = 0
    exact = True
    checked = 0
    failure = None
    for n in range(min(max_n, max_degree(spec)) + 1):
        beta = betafun(n)
        for nvec in multi_indices(d, n):
            q = [basis(nvec, x) for x in states]
            checked += 1
            for irow, row in enumerate(matrix):
                lhs = sum(pr * qv for pr, qv in zip(row, q) if pr)
                resid = lhs - beta * q[irow]
                if resid != 0:
                    exact = False
                    mag = abs(float(resid))
                    if mag > worst:
                        worst = mag
                    if failure is None and mag > 1e-10:
                        failure = (f"residual {float(resid):g} at n={nvec}, "
                                   f"state={states[irow]}")

    formula = sorted((float(t.value) for t in eigenvalues(spec) for _ in range(t.multiplicity)),
                     reverse=True)
    numeric = sorted(np.linalg.eigvals(np.array(
        [[float(v) for v in row] for row in matrix])).real.tolist(), reverse=True)
    multiset_ok = (len(formula) == len(numeric)
                   and max(abs(a - b) for a, b in zip(formula, numeric)) <= 1e-10)
    if not multiset_ok and failure is None:
        failure = "eigenvalue multiset mismatch vs matrix spectrum"
    ok = multiset_ok and (exact or worst <= 1e-10) and failure is None
    return EigenReport(ok, float(worst), exact, multiset_ok, checked, failure)


@dataclass(frozen=True, eq=False)
class NormalARSpectrum:
    """Eigenstructure of the whitened update matrix Sigma^{-1/2} A Sigma^{1/2}."""
    lambdas: np.ndarray          # sorted by |lambda| descending
    transform: np.ndarray        # orthogonal P, columns are eigenvectors
    sigma_root: np.ndarray
    sigma_root_inv: np.ndarray

    def product_eigenvalue(self, nvec: Sequence[int]) -> float:
        if len(nvec) != self.lambdas.size:
            raise ValueError("index length must equal the dimension")
        return float(np.prod(self.lambdas ** np.asarray(nvec)))

    def whiten(self, x) -> np.ndarray:
        """z = P^T Sigma^{-1/2} x, the coordinates of the decoupled chain."""
        return self.transform.T @ (self.sigma_root_inv @ np.asarray(x, dtype=float))


def normal_ar_spectrum(a_matrix, sigma) -> NormalARSpectrum:
    """Symmetric eigendecomposition of the whitened AR update.

    Requires the chain to be reversible (A Sigma = Sigma A^T) with spectral
    radius below 1; raises ValueError otherwise.
    """
    a_matrix = np.asarray(a_matrix, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    check = normal_ar_check(a_matrix, sigma, sigma - a_matrix @ sigma @ a_matrix.T)
    if not check.reversible:
        raise ValueError("A Sigma != Sigma A^T: symmetric decomposition invalid")
    if not check.spectral_radius_ok:
        raise ValueError(f"spectral radius {check.spectral_radius} >= 1")
    evals, evecs = np.linalg.eigh(sigma)
    if np.min(evals) <= 0:
        raise ValueError("Sigma is not positive definite")
    root = (evecs * np.sqrt(evals)) @ evecs.T
    root_inv = (evecs / np.sqrt(evals)) @ evecs.T
    sym = root_inv @ a_matrix @ root
    sym = 0.5 * (sym + sym.T)  # reversibility guarantees symmetry; kill roundoff
    lam, p = np.linalg.eigh(sym)
    order = np.argsort(-np.abs(lam))
    return NormalARSpectrum(lam[order], p[:, order], root, root_inv)
