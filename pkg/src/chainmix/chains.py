"""Transition kernels, single-step samplers and brute-force matrix oracles.

Ten finite composition-valued families plus the multivariate normal
autoregressive process.  Finite-family transition rows are enumerated from
the mini-step decomposition (uniform removal then reinforced/without-
replacement/independent reinsertion), so they are exact rationals whenever
the parameters are rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .distributions import (pmf_dirichlet_multinomial, pmf_hypergeometric,
                            pmf_multinomial, sample_dirichlet,
                            sample_dirichlet_multinomial, sample_hypergeometric,
                            sample_multinomial)
from .kernels import DM, HYPERGEOMETRIC, MULTINOMIAL, CapacityError, KernelFamily
from .numerics import (Rational, Scalar, State, check_composition,
                       count_bounded_compositions, count_compositions,
                       enumerate_compositions, is_rational)

TRANSITION_ROW_MAX_STATES = 200_000
MATRIX_MAX_STATES = 5000


def _rationalize(values) -> tuple[Scalar, ...]:
    return tuple(Fraction(v) if is_rational(v) else float(v) for v in values)


def _check_prob_vector(p) -> None:
    if any(v <= 0 for v in p):
        raise ValueError("probability entries must be positive")
    total = sum(p)
    if is_rational(total):
        if total != 1:
            raise ValueError(f"probabilities sum to {total}, not 1")
    elif abs(float(total) - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {float(total)}, not 1")


@dataclass(frozen=True)
class PolyaLevel:
    """Mark s removals, then s reinforced draws, then remove the marked."""
    n_total: int
    alpha: tuple[Scalar, ...]
    s: int

    def __init__(self, n_total, alpha, s):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "alpha", _rationalize(alpha))
        object.__setattr__(self, "s", int(s))
        if any(a <= 0 for a in self.alpha):
            raise ValueError("alpha entries must be positive")
        if not 0 <= self.s <= self.n_total:
            raise ValueError("need 0 <= s <= N")


@dataclass(frozen=True)
class PolyaDownUp:
    """Remove s uniformly, then s reinforced draws."""
    n_total: int
    alpha: tuple[Scalar, ...]
    s: int

    def __init__(self, n_total, alpha, s):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "alpha", _rationalize(alpha))
        object.__setattr__(self, "s", int(s))
        if any(a <= 0 for a in self.alpha):
            raise ValueError("alpha entries must be positive")
        if not 0 <= self.s <= self.n_total:
            raise ValueError("need 0 <= s <= N")


@dataclass(frozen=True)
class PolyaUpDown:
    """s reinforced draws first, then remove s uniformly from the N + s."""
    n_total: int
    alpha: tuple[Scalar, ...]
    s: int

    def __init__(self, n_total, alpha, s):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "alpha", _rationalize(alpha))
        object.__setattr__(self, "s", int(s))
        if any(a <= 0 for a in self.alpha):
            raise ValueError("alpha entries must be positive")
        if not 0 <= self.s <= self.n_total:
            raise ValueError("need 0 <= s <= N")


@dataclass(frozen=True)
class Moran:
    """Uniform death + uniform reproduction (possibly the same individual) + mutation."""
    n_total: int
    m: Scalar
    p: tuple[Scalar, ...]

    def __init__(self, n_total, m, p):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "m", Fraction(m) if is_rational(m) else float(m))
        object.__setattr__(self, "p", _rationalize(p))
        if not 0 < self.m < 1:
            raise ValueError("need 0 < m < 1")
        _check_prob_vector(self.p)

    @property
    def alpha(self) -> tuple[Scalar, ...]:
        return tuple(self.n_total * self.m * pi / (1 - self.m) for pi in self.p)


@dataclass(frozen=True)
class Hubbell:
    """Moran variant where the reproducer is drawn from the N - 1 survivors."""
    n_total: int
    m: Scalar
    p: tuple[Scalar, ...]

    def __init__(self, n_total, m, p):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "m", Fraction(m) if is_rational(m) else float(m))
        object.__setattr__(self, "p", _rationalize(p))
        if self.n_total < 2:
            raise ValueError("need N >= 2")
        if not 0 < self.m < 1:
            raise ValueError("need 0 < m < 1")
        _check_prob_vector(self.p)

    @property
    def alpha(self) -> tuple[Scalar, ...]:
        return tuple((self.n_total - 1) * self.m * pi / (1 - self.m) for pi in self.p)


@dataclass(frozen=True)
class GibbsDM:
    """Marginal composition chain of the Dirichlet/multinomial Gibbs sampler."""
    n_total: int
    alpha: tuple[Scalar, ...]

    def __init__(self, n_total, alpha):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "alpha", _rationalize(alpha))
        if any(a <= 0 for a in self.alpha):
            raise ValueError("alpha entries must be positive")


@dataclass(frozen=True)
class BLLevel:
    """Swap s balls between the two urns simultaneously."""
    caps: tuple[int, ...]
    n_total: int
    s: int

    def __init__(self, caps, n_total, s):
        object.__setattr__(self, "caps", tuple(int(c) for c in caps))
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "s", int(s))
        if any(c <= 0 for c in self.caps):
            raise ValueError("caps must be positive")
        if not 0 < self.n_total < sum(self.caps):
            raise ValueError("need 0 < N < |caps|")
        if not 0 <= self.s <= min(self.n_total, sum(self.caps) - self.n_total):
            raise ValueError("need 0 <= s <= min(N, |caps| - N)")


@dataclass(frozen=True)
class BLDownUp:
    """Move s left-to-right, then s back from the enlarged right urn."""
    caps: tuple[int, ...]
    n_total: int
    s: int

    def __init__(self, caps, n_total, s):
        object.__setattr__(self, "caps", tuple(int(c) for c in caps))
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "s", int(s))
        if any(c <= 0 for c in self.caps):
            raise ValueError("caps must be positive")
        if not 0 < self.n_total < sum(self.caps):
            raise ValueError("need 0 < N < |caps|")
        if not 0 <= self.s <= self.n_total:
            raise ValueError("need 0 <= s <= N")


@dataclass(frozen=True)
class BLUpDown:
    """Move s right-to-left, then s back from the enlarged left urn."""
    caps: tuple[int, ...]
    n_total: int
    s: int

    def __init__(self, caps, n_total, s):
        object.__setattr__(self, "caps", tuple(int(c) for c in caps))
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "s", int(s))
        if any(c <= 0 for c in self.caps):
            raise ValueError("caps must be positive")
        if not 0 < self.n_total < sum(self.caps):
            raise ValueError("need 0 < N < |caps|")
        if not 0 <= self.s <= min(self.n_total, sum(self.caps) - self.n_total):
            raise ValueError("need 0 <= s <= min(N, |caps| - N)")


@dataclass(frozen=True)
class Ehrenfest:
    """Pick s of the N balls uniformly and redistribute them independently by p."""
    n_total: int
    p: tuple[Scalar, ...]
    s: int

    def __init__(self, n_total, p, s):
        object.__setattr__(self, "n_total", int(n_total))
        object.__setattr__(self, "p", _rationalize(p))
        object.__setattr__(self, "s", int(s))
        _check_prob_vector(self.p)
        if not 0 <= self.s <= self.n_total:
            raise ValueError("need 0 <= s <= N")


@dataclass(frozen=True, eq=False)
class NormalAR:
    """X_t = A X_{t-1} + xi_t with xi ~ N(0, Sigma - A Sigma A^T)."""
    a_matrix: np.ndarray
    sigma: np.ndarray

    def __init__(self, a_matrix, sigma):
        a_matrix = np.asarray(a_matrix, dtype=float)
        sigma = np.asarray(sigma, dtype=float)
        if a_matrix.shape != sigma.shape or a_matrix.ndim != 2:
            raise ValueError("A and Sigma must be square matrices of equal size")
        scale = max(1.0, float(np.max(np.abs(sigma))))
        if np.max(np.abs(sigma - sigma.T)) > 1e-12 * scale:
            raise ValueError("Sigma must be symmetric")
        np.linalg.cholesky(sigma)  # SPD check
        object.__setattr__(self, "a_matrix", a_matrix)
        object.__setattr__(self, "sigma", sigma)

    @property
    def noise_cov(self) -> np.ndarray:
        return self.sigma - self.a_matrix @ self.sigma @ self.a_matrix.T


FiniteChainSpec = Union[PolyaLevel, PolyaDownUp, PolyaUpDown, Moran, Hubbell,
                        GibbsDM, BLLevel, BLDownUp, BLUpDown, Ehrenfest]
ChainSpec = Union[FiniteChainSpec, NormalAR]

_POLYA_FAMILY = (PolyaLevel, PolyaDownUp, PolyaUpDown, Moran, Hubbell, GibbsDM)
_BL_FAMILY = (BLLevel, BLDownUp, BLUpDown)


def dimension(spec: ChainSpec) -> int:
    if isinstance(spec, _POLYA_FAMILY):
        return len(spec.alpha) if not isinstance(spec, (Moran, Hubbell)) else len(spec.p)
    if isinstance(spec, _BL_FAMILY):
        return len(spec.caps)
    if isinstance(spec, Ehrenfest):
        return len(spec.p)
    return spec.sigma.shape[0]


def state_space_size(spec: FiniteChainSpec) -> int:
    if isinstance(spec, _BL_FAMILY):
        return count_bounded_compositions(spec.n_total, spec.caps)
    return count_compositions(spec.n_total, dimension(spec))


def state_space(spec: FiniteChainSpec) -> list[State]:
    """All states in colexicographic order; the canonical matrix indexing."""
    caps = spec.caps if isinstance(spec, _BL_FAMILY) else None
    return enumerate_compositions(spec.n_total, dimension(spec), caps)


def check_state(spec: FiniteChainSpec, x) -> State:
    caps = spec.caps if isinstance(spec, _BL_FAMILY) else None
    return check_composition(x, total=spec.n_total, caps=caps)


def stationary_family(spec: FiniteChainSpec) -> KernelFamily:
    """The stationary law of the chain, as a kernel/orthogonality family."""
    if isinstance(spec, _POLYA_FAMILY):
        return KernelFamily.dirichlet_multinomial(spec.n_total, spec.alpha)
    if isinstance(spec, _BL_FAMILY):
        return KernelFamily.hypergeometric(spec.n_total, spec.caps)
    if isinstance(spec, Ehrenfest):
        return KernelFamily.multinomial(spec.n_total, spec.p)
    raise TypeError(f"no finite stationary family for {type(spec).__name__}")


def stationary_pmf(spec: FiniteChainSpec, x) -> Scalar:
    family = stationary_family(spec)
    if family.tag == DM:
        return pmf_dirichlet_multinomial(x, family.alpha)
    if family.tag == HYPERGEOMETRIC:
        return pmf_hypergeometric(x, family.n_total, family.caps)
    return pmf_multinomial(x, family.p)


def _pmf_mvhyp(y: State, pool: State, s: int) -> Fraction:
    num = 1
    for p_i, y_i in zip(pool, y):
        num *= math.comb(p_i, y_i)
    return Fraction(num, math.comb(sum(pool), s))


def _add(row: dict, key: State, value) -> None:
    row[key] = row.get(key, 0) + value


def transition_row(spec: FiniteChainSpec, x, max_states: int = TRANSITION_ROW_MAX_STATES) -> dict[State, Scalar]:
    """One-step transition probabilities out of x, as a sparse map.

    Exact rationals summing to 1 exactly for rational parameters.  Raises
    CapacityError when the chain's state space exceeds ``max_states``.
    """
    if state_space_size(spec) > max_states:
        raise CapacityError(
            f"state space of size {state_space_size(spec)} exceeds cap {max_states}")
    x = check_state(spec, x)
    d = len(x)
    s = getattr(spec, "s", None)
    row: dict[State, Scalar] = {}

    if isinstance(spec, Moran):
        n = spec.n_total
        stay = Fraction(1)
        for j in range(d):
            if x[j] == 0:
                continue
            for i in range(d):
                if i == j:
                    continue
                # sum_k (x_k/N) m_{ki} = (1-m) x_i / N + m p_i
                pr = Fraction(x[j], n) * ((1 - spec.m) * Fraction(x[i], n) + spec.m * spec.p[i])
                if pr == 0:
                    continue
                tgt = tuple(v + (t == i) - (t == j) for t, v in enumerate(x))
                _add(row, tgt, pr)
                stay -= pr
        _add(row, x, stay)
        return row

    if isinstance(spec, Hubbell):
        n = spec.n_total
        stay = Fraction(1)
        for j in range(d):
            if x[j] == 0:
                continue
            for i in range(d):
                if i == j:
                    continue
                m_ji = spec.m * spec.p[i]  # j != i so the (1-m) identity part drops
                sum_k = (1 - spec.m) * x[i] + spec.m * spec.p[i] * n
                pr = Fraction(x[j], n) * (sum_k - m_ji) / (n - 1)
                if pr == 0:
                    continue
                tgt = tuple(v + (t == i) - (t == j) for t, v in enumerate(x))
                _add(row, tgt, pr)
                stay -= pr
        _add(row, x, stay)
        return row

    if isinstance(spec, GibbsDM):
        w = tuple(a + xi for a, xi in zip(spec.alpha, x))
        for y in enumerate_compositions(spec.n_total, d):
            row[y] = pmf_dirichlet_multinomial(y, w)
        return row

    if isinstance(spec, PolyaLevel):
        for y in enumerate_compositions(s, d, x):
            py = _pmf_mvhyp(y, x, s)
            w = tuple(a + xi for a, xi in zip(spec.alpha, x))
            for z in enumerate_compositions(s, d):
                tgt = tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
                _add(row, tgt, py * pmf_dirichlet_multinomial(z, w))
        return row

    if isinstance(spec, PolyaDownUp):
        for y in enumerate_compositions(s, d, x):
            py = _pmf_mvhyp(y, x, s)
            w = tuple(a + xi - yi for a, xi, yi in zip(spec.alpha, x, y))
            for z in enumerate_compositions(s, d):
                tgt = tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
                _add(row, tgt, py * pmf_dirichlet_multinomial(z, w))
        return row

    if isinstance(spec, PolyaUpDown):
        w = tuple(a + xi for a, xi in zip(spec.alpha, x))
        for z in enumerate_compositions(s, d):
            pz = pmf_dirichlet_multinomial(z, w)
            pool = tuple(xi + zi for xi, zi in zip(x, z))
            for y in enumerate_compositions(s, d, pool):
                tgt = tuple(pl - yi for pl, yi in zip(pool, y))
                _add(row, tgt, pz * _pmf_mvhyp(y, pool, s))
        return row

    if isinstance(spec, BLLevel):
        right = tuple(c - xi for c, xi in zip(spec.caps, x))
        for y in enumerate_compositions(s, d, x):
            py = _pmf_mvhyp(y, x, s)
            for z in enumerate_compositions(s, d, right):
                tgt = tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
                _add(row, tgt, py * _pmf_mvhyp(z, right, s))
        return row

    if isinstance(spec, BLDownUp):
        for y in enumerate_compositions(s, d, x):
            py = _pmf_mvhyp(y, x, s)
            right = tuple(c - xi + yi for c, xi, yi in zip(spec.caps, x, y))
            for z in enumerate_compositions(s, d, right):
                tgt = tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
                _add(row, tgt, py * _pmf_mvhyp(z, right, s))
        return row

    if isinstance(spec, BLUpDown):
        right = tuple(c - xi for c, xi in zip(spec.caps, x))
        for z in enumerate_compositions(s, d, right):
            pz = _pmf_mvhyp(z, right, s)
            pool = tuple(xi + zi for xi, zi in zip(x, z))
            for y in enumerate_compositions(s, d, pool):
                tgt = tuple(pl - yi for pl, yi in zip(pool, y))
                _add(row, tgt, pz * _pmf_mvhyp(y, pool, s))
        return row

    if isinstance(spec, Ehrenfest):
        for y in enumerate_compositions(s, d, x):
            py = _pmf_mvhyp(y, x, s)
            for z in enumerate_compositions(s, d):
                tgt = tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
                _add(row, tgt, py * pmf_multinomial(z, spec.p))
        return row

    raise TypeError(f"no transition row for {type(spec).__name__}")


def _mvhyp_draw(pool: State, s: int, rng) -> State:
    return sample_hypergeometric(s, pool, rng)


def _categorical_counts(counts, rng) -> int:
    u = rng.random() * sum(counts)
    acc = 0
    for i, c in enumerate(counts):
        acc += c
        if u < acc:
            return i
    return len(counts) - 1


def step(spec: ChainSpec, x, rng: np.random.Generator):
    """Simulate one transition by running the chain's mini-steps."""
    if isinstance(spec, NormalAR):
        x = np.asarray(x, dtype=float)
        chol = np.linalg.cholesky(spec.noise_cov)
        return spec.a_matrix @ x + chol @ rng.standard_normal(x.size)

    x = check_state(spec, x)
    d = len(x)
    s = getattr(spec, "s", None)

    if isinstance(spec, Moran):
        j = _categorical_counts(x, rng)
        k = _categorical_counts(x, rng)
        i = _mutate(k, spec.m, spec.p, rng)
        return tuple(v + (t == i) - (t == j) for t, v in enumerate(x))
    if isinstance(spec, Hubbell):
        j = _categorical_counts(x, rng)
        survivors = tuple(v - (t == j) for t, v in enumerate(x))
        k = _categorical_counts(survivors, rng)
        i = _mutate(k, spec.m, spec.p, rng)
        return tuple(v + (t == i) - (t == j) for t, v in enumerate(x))
    if isinstance(spec, GibbsDM):
        w = [float(a + xi) for a, xi in zip(spec.alpha, x)]
        p = sample_dirichlet(w, rng)
        return sample_multinomial(spec.n_total, p, rng)
    if isinstance(spec, PolyaLevel):
        y = _mvhyp_draw(x, s, rng)
        z = sample_dirichlet_multinomial(s, [a + xi for a, xi in zip(spec.alpha, x)], rng)
        return tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
    if isinstance(spec, PolyaDownUp):
        y = _mvhyp_draw(x, s, rng)
        z = sample_dirichlet_multinomial(
            s, [a + xi - yi for a, xi, yi in zip(spec.alpha, x, y)], rng)
        return tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
    if isinstance(spec, PolyaUpDown):
        z = sample_dirichlet_multinomial(s, [a + xi for a, xi in zip(spec.alpha, x)], rng)
        pool = tuple(xi + zi for xi, zi in zip(x, z))
        y = _mvhyp_draw(pool, s, rng)
        return tuple(pl - yi for pl, yi in zip(pool, y))
    if isinstance(spec, BLLevel):
        right = tuple(c - xi for c, xi in zip(spec.caps, x))
        y = _mvhyp_draw(x, s, rng)
        z = _mvhyp_draw(right, s, rng)
        return tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
    if isinstance(spec, BLDownUp):
        y = _mvhyp_draw(x, s, rng)
        right = tuple(c - xi + yi for c, xi, yi in zip(spec.caps, x, y))
        z = _mvhyp_draw(right, s, rng)
        return tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
    if isinstance(spec, BLUpDown):
        right = tuple(c - xi for c, xi in zip(spec.caps, x))
        z = _mvhyp_draw(right, s, rng)
        pool = tuple(xi + zi for xi, zi in zip(x, z))
        y = _mvhyp_draw(pool, s, rng)
        return tuple(pl - yi for pl, yi in zip(pool, y))
    if isinstance(spec, Ehrenfest):
        y = _mvhyp_draw(x, s, rng)
        z = sample_multinomial(s, spec.p, rng)
        return tuple(xi - yi + zi for xi, yi, zi in zip(x, y, z))
    raise TypeError(f"no step sampler for {type(spec).__name__}")


def _mutate(k: int, m, p, rng) -> int:
    if rng.random() >= float(m):
        return k
    u = rng.random()
    acc = 0.0
    for i, pi in enumerate(p):
        acc += float(pi)
        if u < acc:
            return i
    return len(p) - 1


def build_transition_matrix(spec: FiniteChainSpec,
                            max_states: int = MATRIX_MAX_STATES) -> tuple[list[State], list[list[Scalar]]]:
    """Dense row-stochastic matrix over the colex state ordering."""
    size = state_space_size(spec)
    if size > max_states:
        raise CapacityError(f"state space of size {size} exceeds matrix cap {max_states}")
    states = state_space(spec)
    index = {st: i for i, st in enumerate(states)}
    zero = Fraction(0)
    matrix = []
    for x in states:
        row = [zero] * size
        for y, pr in transition_row(spec, x).items():
            row[index[y]] = pr
        matrix.append(row)
    return states, matrix


def watterson(x: Sequence[int]) -> float:
    """Population homogeneity sum x_i^2 / N^2; equals 1 iff monomorphic."""
    x = check_composition(x)
    n = sum(x)
    if n <= 0:
        raise ValueError("need a nonempty population")
    return float(Fraction(sum(v * v for v in x), n * n))


@dataclass(frozen=True)
class NormalARCheck:
    stationary: bool
    reversible: bool
    spectral_radius_ok: bool
    spectral_radius: float


def normal_ar_check(a_matrix, sigma, noise_cov, tol: float = 1e-10) -> NormalARCheck:
    """Stationarity (V = Sigma - A Sigma A^T), reversibility (A Sigma = Sigma A^T)."""
    a_matrix = np.asarray(a_matrix, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    noise_cov = np.asarray(noise_cov, dtype=float)
    stationary = float(np.max(np.abs(noise_cov - (sigma - a_matrix @ sigma @ a_matrix.T)))) <= tol
    reversible = float(np.max(np.abs(a_matrix @ sigma - sigma @ a_matrix.T))) <= tol
    radius = float(np.max(np.abs(np.linalg.eigvals(a_matrix)))) if a_matrix.size else 0.0
    return NormalARCheck(stationary, reversible, radius < 1.0, radius)


@dataclass(frozen=True, eq=False)
class ImageGibbsModel:
    precision: np.ndarray   # posterior inverse covariance Q
    a_matrix: np.ndarray    # forward+backward sweep operator
    noise_cov: np.ndarray

    @property
    def sigma(self) -> np.ndarray:
        return np.linalg.inv(self.precision)


def image_gibbs_model(delta: float, sigma: float, grid: tuple[int, int]) -> ImageGibbsModel:
    """Reversible two-sweep Gibbs sampler for the lattice image posterior.

    The prior couples 4-neighbor pixels (no wraparound: corners have 2
    neighbors, edges 3, interior 4); observations add 1/sigma^2 to the
    diagonal.  The sweep updates pixels in row-major order and back, which in
    AR form gives A = W L^T with W = (D + L^T)^{-1} L (D + L)^{-1}.
    """
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    rows, cols = grid
    npix = rows * cols
    q = np.zeros((npix, npix))
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            neighbors = []
            if r > 0:
                neighbors.append(i - cols)
            if r < rows - 1:
                neighbors.append(i + cols)
            if c > 0:
                neighbors.append(i - 1)
            if c < cols - 1:
                neighbors.append(i + 1)
            q[i, i] = 2.0 * delta * len(neighbors) + 1.0 / sigma ** 2
            for j in neighbors:
                q[i, j] = -2.0 * delta
    diag = np.diag(np.diag(q))
    lower = np.tril(q, -1)
    w = np.linalg.solve(diag + lower.T, lower) @ np.linalg.inv(diag + lower)
    a_matrix = w @ lower.T
    noise = w @ diag @ w.T + np.linalg.solve(diag + lower.T, diag) @ np.linalg.inv(diag + lower)
    return ImageGibbsModel(q, a_matrix, noise)
