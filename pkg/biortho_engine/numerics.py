"""
Numerical Building Blocks
Log-gamma, signed-log arithmetic, Pochhammer symbols, compensated series
summation and weighted quadrature shared by every other module.
"""

import logging
import math
from dataclasses import asdict, dataclass, replace
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Tuple

import numpy as np
from scipy import integrate, special

from .errors import AccuracyError, DomainError, EvaluationError

logger = logging.getLogger(__name__)

MACHINE_EPSILON = float(np.finfo(float).eps)
# exp() of anything above this overflows a double
LOG_FLOAT_MAX = 709.0
MIN_QUADRATURE_ORDER = 16
MAX_QUADRATURE_ORDER = 1024


@dataclass(frozen=True)
class SeriesConfig:
    """Tolerances governing every series and quadrature evaluation."""

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10000
    tail_window: int = 3

    def __post_init__(self):
        if not self.rel_tol >= 10 * MACHINE_EPSILON:
            raise DomainError(f"rel_tol must be >= {10 * MACHINE_EPSILON:.3g}")
        if not self.abs_tol >= 0:
            raise DomainError("abs_tol must be >= 0")
        if int(self.tail_window) != self.tail_window or self.tail_window < 1:
            raise DomainError("tail_window must be a positive integer")
        if int(self.max_terms) != self.max_terms or self.max_terms < self.tail_window:
            raise DomainError("max_terms must be an integer >= tail_window")

    def as_dict(self) -> dict:
        return asdict(self)

    def loosened(self, rel_tol: float, abs_tol: Optional[float] = None) -> "SeriesConfig":
        """Copy with a looser tolerance (never tighter than this one)."""
        return replace(self,
                       rel_tol=max(self.rel_tol, rel_tol),
                       abs_tol=self.abs_tol if abs_tol is None else max(self.abs_tol, abs_tol))


DEFAULT_CONFIG = SeriesConfig()


@dataclass(frozen=True)
class SignedLogValue:
    """A real number stored as sign and natural log of its magnitude."""

    sign: int
    log_mag: float = 0.0

    @classmethod
    def from_real(cls, x: float) -> "SignedLogValue":
        if x == 0:
            return ZERO
        if not math.isfinite(x):
            raise DomainError("cannot represent a non-finite value in signed-log form")
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_mag > LOG_FLOAT_MAX:
            raise EvaluationError("signed-log value overflows a double", 0)
        return self.sign * math.exp(self.log_mag)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        return multiply(self, other)

    def __truediv__(self, other: "SignedLogValue") -> "SignedLogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by a signed-log zero")
        if self.sign == 0:
            return ZERO
        return SignedLogValue(self.sign * other.sign, self.log_mag - other.log_mag)

    def __add__(self, other: "SignedLogValue") -> "SignedLogValue":
        return add(self, other)

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_mag)


ZERO = SignedLogValue(0, 0.0)
ONE = SignedLogValue(1, 0.0)


def multiply(a: SignedLogValue, b: SignedLogValue) -> SignedLogValue:
    if a.sign == 0 or b.sign == 0:
        return ZERO
    return SignedLogValue(a.sign * b.sign, a.log_mag + b.log_mag)


def add(a: SignedLogValue, b: SignedLogValue) -> SignedLogValue:
    if a.sign == 0:
        return b
    if b.sign == 0:
        return a
    hi, lo = (a, b) if a.log_mag >= b.log_mag else (b, a)
    ratio = math.exp(lo.log_mag - hi.log_mag)
    if hi.sign == lo.sign:
        return SignedLogValue(hi.sign, hi.log_mag + math.log1p(ratio))
    if ratio == 1.0:
        return ZERO
    return SignedLogValue(hi.sign, hi.log_mag + math.log1p(-ratio))


def log_gamma(x: float) -> float:
    """
    Natural log of the Gamma function for positive arguments.

    Args:
        x (float): Positive, finite argument

    Returns:
        float: ln Gamma(x)
    """
    if not (math.isfinite(x) and x > 0):
        raise DomainError("log_gamma requires a positive finite argument")
    return float(special.gammaln(x))


def recip_gamma(x: float) -> float:
    """1/Gamma(x); exactly 0 at the poles x = 0, -1, -2, ..."""
    if not math.isfinite(x):
        raise DomainError("recip_gamma requires a finite argument")
    return float(special.rgamma(x))


def log_pochhammer(a: float, m: int) -> SignedLogValue:
    """
    Rising factorial (a)_m = a(a+1)...(a+m-1) in signed-log form.

    Args:
        a (float): Base
        m (int): Number of factors, m >= 0

    Returns:
        SignedLogValue: Exact sign, log-magnitude from Gamma ratios
    """
    if int(m) != m or m < 0:
        raise DomainError("m must be a nonnegative integer")
    m = int(m)
    if m == 0:
        return ONE
    if a > 0:
        return SignedLogValue(1, float(special.gammaln(a + m) - special.gammaln(a)))
    if a == math.floor(a) and -a < m:
        # one factor is exactly zero
        return ZERO
    if a + m - 1 < 0:
        # every factor negative: |(a)_m| = Gamma(1-a)/Gamma(1-a-m)
        return SignedLogValue(-1 if m % 2 else 1,
                              float(special.gammaln(1 - a) - special.gammaln(1 - a - m)))
    negatives = int(math.ceil(-a))
    log_neg = special.gammaln(1 - a) - special.gammaln(1 - a - negatives)
    log_pos = special.gammaln(a + m) - special.gammaln(a + negatives)
    return SignedLogValue(-1 if negatives % 2 else 1, float(log_neg + log_pos))


def log_rising(a, m: int) -> np.ndarray:
    """Vectorized log (a)_m for positive a."""
    a = np.asarray(a, dtype=float)
    if m <= 64:
        # summing factor logs is more accurate than a gammaln difference here
        return np.sum(np.log(a[..., None] + np.arange(m)), axis=-1)
    return special.gammaln(a + m) - special.gammaln(a)


def log_factorials(n: int) -> np.ndarray:
    """log(0!), ..., log((n-1)!) from exact integer factorials."""
    values = np.empty(n)
    acc = 1
    for i in range(n):
        if i > 1:
            acc *= i
        values[i] = math.log(acc)
    return values


def exp_sum(signs: np.ndarray, log_mags: np.ndarray) -> float:
    """Sum sign*exp(log_mag) with exact (fsum) accumulation."""
    signs = np.asarray(signs, dtype=float).ravel()
    log_mags = np.asarray(log_mags, dtype=float).ravel()
    live = signs != 0
    if not np.any(live):
        return 0.0
    peak = float(np.max(log_mags[live]))
    if peak > LOG_FLOAT_MAX:
        raise EvaluationError("paired term overflows a double", int(np.argmax(np.where(live, log_mags, -np.inf))))
    return math.fsum((signs[live] * np.exp(log_mags[live])).tolist())


class SeriesResult(NamedTuple):
    value: float
    terms_used: int
    converged: bool


def sum_series(terms: Callable[[int], float], config: Optional[SeriesConfig] = None) -> SeriesResult:
    """
    Compensated summation of terms(0), terms(1), ... with a tail-window stop.

    Exact zeros before the first nonzero term are skipped, so a series that
    opens on poles of 1/Gamma is not mistaken for a converged zero.

    Args:
        terms (callable): Index -> term value
        config (SeriesConfig): Tolerances, DEFAULT_CONFIG when omitted

    Returns:
        SeriesResult: (value, terms_used, converged)
    """
    config = config or DEFAULT_CONFIG
    total = 0.0
    compensation = 0.0
    small_run = 0
    started = False
    for index in range(config.max_terms):
        term = float(terms(index))
        if not math.isfinite(term):
            raise EvaluationError("non-finite series term", index)
        # exact zeros ahead of the first nonzero term (poles of 1/Gamma) do not count toward the stop
        if not started:
            if term == 0.0:
                continue
            started = True
        # Neumaier step
        t = total + term
        if abs(total) >= abs(term):
            compensation += (total - t) + term
        else:
            compensation += (term - t) + total
        total = t
        if abs(term) <= max(config.abs_tol, config.rel_tol * abs(total + compensation)):
            small_run += 1
            if small_run >= config.tail_window:
                return SeriesResult(total + compensation, index + 1, True)
        else:
            small_run = 0
    logger.debug("series exhausted %d terms without converging", config.max_terms)
    return SeriesResult(total + compensation, config.max_terms, False)


@lru_cache(maxsize=256)
def jacobi_nodes(order: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on (0,1) for the weight t**alpha."""
    x, w = special.roots_jacobi(order, 0.0, alpha)
    nodes = (1.0 + x) / 2.0
    weights = w * 2.0 ** (-alpha - 1.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=256)
def laguerre_nodes(order: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on (0,inf) for the weight t**alpha * exp(-t)."""
    nodes, weights = special.roots_genlaguerre(order, alpha)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _evaluate(f: Callable, nodes: np.ndarray, vectorized: bool) -> np.ndarray:
    if vectorized:
        values = np.asarray(f(nodes), dtype=float)
        return np.broadcast_to(values, nodes.shape)
    return np.array([float(f(t)) for t in nodes])


def gauss_jacobi_unit(f: Callable, alpha: float, order: int, vectorized: bool = True) -> float:
    """Fixed-order rule for the integral of f(t) t**alpha over (0,1)."""
    nodes, weights = jacobi_nodes(int(order), float(alpha))
    return math.fsum((weights * _evaluate(f, nodes, vectorized)).tolist())


def gauss_laguerre_weighted(f: Callable, alpha: float, order: int, vectorized: bool = True) -> float:
    """Fixed-order rule for the integral of f(t) t**alpha exp(-t) over (0,inf)."""
    nodes, weights = laguerre_nodes(int(order), float(alpha))
    return math.fsum((weights * _evaluate(f, nodes, vectorized)).tolist())


def integrate_weighted(f: Callable, alpha: float, config: Optional[SeriesConfig] = None,
                       vectorized: bool = True,
                       min_order: int = MIN_QUADRATURE_ORDER,
                       max_order: int = MAX_QUADRATURE_ORDER) -> float:
    """
    Integral of f(t) * t**alpha over (0,1) with the weight built into the rule.

    The Gauss-Jacobi order is doubled until two successive orders agree.

    Args:
        f (callable): Integrand without the weight
        alpha (float): Weight exponent, > -1
        config (SeriesConfig): Tolerances
        vectorized (bool): Whether f accepts a numpy array of nodes

    Returns:
        float: The weighted integral
    """
    if not alpha > -1:
        raise DomainError("alpha must be > -1")
    config = config or DEFAULT_CONFIG
    order = min_order
    previous = gauss_jacobi_unit(f, alpha, order, vectorized)
    while order < max_order:
        order *= 2
        current = gauss_jacobi_unit(f, alpha, order, vectorized)
        if not math.isfinite(current):
            raise EvaluationError("non-finite quadrature value", order)
        if abs(current - previous) <= max(config.abs_tol, config.rel_tol * abs(current)):
            logger.debug("quadrature converged at order %d", order)
            return current
        previous = current
    raise AccuracyError(f"Gauss-Jacobi refinement did not converge by order {max_order}",
                        previous, max_order)


def _cutoff(f: Callable, alpha: float, start: float = 8.0, limit: float = 1e4) -> float:
    """Point beyond which |f(t)| t**alpha stays below 1e-16 of its sampled peak."""
    length = start
    peak = 0.0
    while length <= limit:
        grid = np.linspace(0.0, length, 257)[1:]
        magnitude = np.array([abs(float(f(t))) for t in grid]) * grid ** alpha
        peak = max(peak, float(np.max(magnitude)))
        if magnitude[-1] <= 1e-16 * peak and magnitude[-8:].max() <= 1e-14 * peak:
            return length
        length *= 1.5
    raise AccuracyError("integrand does not decay on the half line", peak)


def integrate_half_line(f: Callable, alpha: float, config: Optional[SeriesConfig] = None) -> float:
    """
    Integral of f(t) * t**alpha over (0, inf) for rapidly decaying f.

    The interval is truncated where the integrand falls below 1e-16 of its
    peak; the endpoint weight is handled by QUADPACK's algebraic rule.

    Args:
        f (callable): Scalar integrand without the weight
        alpha (float): Weight exponent, > -1
        config (SeriesConfig): Tolerances

    Returns:
        float: The weighted integral
    """
    if not alpha > -1:
        raise DomainError("alpha must be > -1")
    config = config or DEFAULT_CONFIG
    length = _cutoff(f, alpha)
    rel_tol = max(config.rel_tol, 50 * MACHINE_EPSILON)
    result = integrate.quad(lambda t: float(f(t)), 0.0, length, weight='alg', wvar=(alpha, 0.0),
                            epsabs=max(config.abs_tol, 1e-300), epsrel=rel_tol,
                            limit=400, full_output=1)
    value, error = result[0], result[1]
    if len(result) > 3 and error > max(config.abs_tol, rel_tol * abs(value)) * 10:
        raise AccuracyError(f"QUADPACK: {result[3]}", value)
    logger.debug("half-line quadrature on [0, %.3g], error estimate %.3g", length, error)
    return float(value)


def integrate_signed_line(f: Callable, alpha: float, config: Optional[SeriesConfig] = None) -> float:
    """Integral of f(t) * |t|**alpha over the real line, folded onto (0, inf)."""
    return integrate_half_line(lambda t: float(f(t)) + float(f(-t)), alpha, config)


def signed_power(x, theta: float):
    """sign(x)*|x|**theta, odd and increasing in x."""
    x = np.asarray(x, dtype=float)
    result = np.sign(x) * np.abs(x) ** theta
    return float(result) if result.ndim == 0 else result
