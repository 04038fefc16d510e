"""
Finite-N Correlation Kernels
Christoffel-Darboux kernels of the Jacobi, Laguerre and Hermite biorthogonal
ensembles, their weights, and determinantal correlation functions.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg, special

from .errors import DomainError, check_parameters
from .gram import jacobi_coeffs, laguerre_coeffs
from .numerics import exp_sum, log_factorials, signed_power

logger = logging.getLogger(__name__)

FAMILIES = ("jacobi", "laguerre", "hermite")
INTERVALS = {
    "jacobi": (0.0, 1.0),
    "laguerre": (0.0, math.inf),
    "hermite": (-math.inf, math.inf),
}
# x^2 is clamped here so the Laguerre pieces of the Hermite kernel stay in their domain
SQUARE_FLOOR = 1e-300


@dataclass(frozen=True)
class EnsembleSpec:
    """One of the three biorthogonal ensembles with N points."""

    family: str
    alpha: float
    theta: float
    n_points: int

    def __post_init__(self):
        family = str(self.family).lower()
        if family not in FAMILIES:
            raise DomainError(f"family must be one of {', '.join(FAMILIES)}")
        object.__setattr__(self, "family", family)
        check_parameters(self.alpha, self.theta, self.n_points)
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def interval(self) -> Tuple[float, float]:
        return INTERVALS[self.family]

    def contains(self, x: float) -> bool:
        lo, hi = self.interval
        if self.family == "hermite":
            return math.isfinite(x) and (x != 0 or self.alpha >= 0)
        return lo < x < hi

    def kernel(self, x: float, y: float) -> float:
        return kernel(self, x, y)

    def weight(self, x: float) -> float:
        return weight(self, x)

    def with_n(self, n_points: int) -> "EnsembleSpec":
        return EnsembleSpec(self.family, self.alpha, self.theta, n_points)

    def as_dict(self) -> dict:
        return {"family": self.family, "alpha": self.alpha, "theta": self.theta, "n_points": self.n_points}


@dataclass
class KernelMatrix:
    """Kernel values [K_N(x_i, x_j)] at a set of points."""

    values: np.ndarray
    points: List[float] = field(default_factory=list)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (len(self.points), len(self.points)):
            raise DomainError("kernel matrix dimension must match the number of points")
        if not np.all(np.isfinite(self.values)):
            raise DomainError("kernel matrix has non-finite entries")

    def determinant(self) -> float:
        if not self.points:
            return 1.0
        return float(linalg.det(self.values))


def weight(spec: EnsembleSpec, x: float) -> float:
    """
    Ensemble weight function.

    Args:
        spec (EnsembleSpec): Ensemble
        x (float): Point inside the ensemble's interval

    Returns:
        float: x^a (Jacobi), x^a e^-x (Laguerre), |x|^a e^-x^2 (Hermite)
    """
    if not spec.contains(x):
        lo, hi = spec.interval
        raise DomainError(f"point {x!r} is outside the {spec.family} interval ({lo}, {hi})")
    if spec.family == "jacobi":
        return x ** spec.alpha
    if spec.family == "laguerre":
        return x ** spec.alpha * math.exp(-x)
    return abs(x) ** spec.alpha * math.exp(-x * x)


def _log_monomials(x: float, exponents: np.ndarray) -> np.ndarray:
    if x == 0:
        return np.where(exponents == 0, 0.0, -np.inf)
    return exponents * math.log(x)


def _paired_sum(signs: np.ndarray, log_mags: np.ndarray) -> float:
    live = np.isfinite(log_mags) & (signs != 0)
    return exp_sum(signs[live], log_mags[live])


def kernel_jacobi(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Jacobi kernel sum_{k,l} c_kl x^(k-1) y^(theta(l-1)).

    Each signed-log coefficient is paired with the log of its monomial
    before exponentiation.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument in [0, 1]
        y (float): Second argument in [0, 1]

    Returns:
        float: K_N^Jac(x, y)
    """
    if not (0 <= x <= 1 and 0 <= y <= 1):
        raise DomainError("Jacobi kernel arguments must lie in [0, 1]")
    coeffs = jacobi_coeffs(float(alpha), float(theta), int(n))
    powers = np.arange(int(n), dtype=float)
    log_terms = (coeffs.log_mags + _log_monomials(x, powers)[:, None]
                 + _log_monomials(y, theta * powers)[None, :])
    return _paired_sum(coeffs.signs, log_terms)


@lru_cache(maxsize=64)
def laguerre_kernel_table(alpha: float, theta: float, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Signs and log-magnitudes of the (k, i) coefficients of the Laguerre kernel."""
    check_parameters(alpha, theta, n)
    n = int(n)
    k = np.arange(n, dtype=float)[:, None]
    i = np.arange(n, dtype=float)[None, :]
    log_fact = log_factorials(n)
    a = (i + alpha + 1) / theta
    log_mags = (math.log(theta) + special.gammaln(n + a) - special.gammaln(a)
                - special.gammaln(alpha + theta * k + 1)
                - log_fact[:, None] - log_fact[::-1][:, None] - log_fact[None, :]
                - np.log(alpha + theta * k + i + 1))
    signs = np.where((np.arange(n)[:, None] + np.arange(n)[None, :]) % 2 == 1, -1, 1).astype(np.int8)
    signs.setflags(write=False)
    log_mags.setflags(write=False)
    return signs, log_mags


def _log_truncated_exponentials(y: float, n: int) -> np.ndarray:
    """log sum_{s<=m} y^s/s! for m = 0..n-1."""
    s = np.arange(n, dtype=float)
    return np.logaddexp.accumulate(_log_monomials(y, s) - log_factorials(n))


def kernel_laguerre(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Laguerre kernel with theta-powers in the first argument.

    The inner sum over r is carried as y^i times a truncated exponential.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument, >= 0
        y (float): Second argument, >= 0

    Returns:
        float: K_N^Lag(x, y)
    """
    if not (x >= 0 and y >= 0):
        raise DomainError("Laguerre kernel arguments must be >= 0")
    n = int(n)
    signs, log_mags = laguerre_kernel_table(float(alpha), float(theta), n)
    powers = np.arange(n, dtype=float)
    log_tail = _log_truncated_exponentials(y, n)[::-1]   # index i -> E_{N-1-i}(y)
    log_terms = (log_mags + _log_monomials(x, theta * powers)[:, None]
                 + (_log_monomials(y, powers) + log_tail)[None, :])
    return _paired_sum(signs, log_terms)


def kernel_laguerre_via_gram(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Laguerre kernel assembled from the inverse of the transformed Gram matrix.

    K(x, y) = sum_{k,l} c~_kl x^(theta(k-1)) sum_{s<l} (l-1)!/(l-1-s)! y^(N-s-1).
    """
    if not (x >= 0 and y >= 0):
        raise DomainError("Laguerre kernel arguments must be >= 0")
    n = int(n)
    coeffs = laguerre_coeffs(float(alpha), float(theta), n)
    log_fact = log_factorials(n)
    inner = np.empty(n)
    for l in range(n):
        s = np.arange(l + 1, dtype=float)
        inner[l] = np.logaddexp.reduce(log_fact[l] - log_fact[l - s.astype(int)]
                                       + _log_monomials(y, n - s - 1))
    log_terms = (coeffs.log_mags + _log_monomials(x, theta * np.arange(n, dtype=float))[:, None]
                 + inner[None, :])
    return _paired_sum(coeffs.signs, log_terms)


def hermite_orders(n: int) -> Tuple[int, int]:
    """Number of even- and odd-index terms in an N-term Hermite kernel."""
    return (n + 1) // 2, n // 2


def kernel_hermite(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Hermite kernel by parity decomposition into two Laguerre kernels.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of points
        x (float): First argument
        y (float): Second argument

    Returns:
        float: K^Lag_E((a-1)/2)(x^2, y^2) + x^theta y K^Lag_O((a+theta)/2)(x^2, y^2)
    """
    check_parameters(alpha, theta, n)
    even_n, odd_n = hermite_orders(int(n))
    x2 = max(x * x, SQUARE_FLOOR)
    y2 = max(y * y, SQUARE_FLOOR)
    value = kernel_laguerre((alpha - 1) / 2, theta, even_n, x2, y2)
    if odd_n and x != 0 and y != 0:
        value += signed_power(x, theta) * y * kernel_laguerre((alpha + theta) / 2, theta, odd_n, x2, y2)
    return value


def kernel(spec: EnsembleSpec, x: float, y: float) -> float:
    """Finite-N kernel of the ensemble described by spec."""
    if spec.family == "jacobi":
        return kernel_jacobi(spec.alpha, spec.theta, spec.n_points, x, y)
    if spec.family == "laguerre":
        return kernel_laguerre(spec.alpha, spec.theta, spec.n_points, x, y)
    return kernel_hermite(spec.alpha, spec.theta, spec.n_points, x, y)


def kernel_matrix(spec: EnsembleSpec, points: Sequence[float]) -> KernelMatrix:
    points = [float(p) for p in points]
    values = [[kernel(spec, xi, xj) for xj in points] for xi in points]
    return KernelMatrix(np.array(values).reshape(len(points), len(points)), points)


def correlation(spec: EnsembleSpec, points: Sequence[float]) -> float:
    """
    k-point correlation function prod w(x_i) det[K_N(x_i, x_j)].

    Args:
        spec (EnsembleSpec): Ensemble
        points (list): k <= N points inside the interval

    Returns:
        float: Correlation value
    """
    points = [float(p) for p in points]
    if len(points) > spec.n_points:
        raise DomainError(f"at most {spec.n_points} points allowed for N = {spec.n_points}")
    weights = math.prod(weight(spec, p) for p in points)
    return weights * kernel_matrix(spec, points).determinant()


def one_point(spec: EnsembleSpec, x: float) -> float:
    """Density of points w(x) K_N(x, x)."""
    return weight(spec, x) * kernel(spec, x, x)
