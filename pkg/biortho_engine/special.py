"""
Special Functions and Limit Kernels
Wright generalized Bessel function, the hard-edge and bulk limit kernels,
and the classical Bessel and sine kernels they reduce to.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np
from scipy import special

from .errors import AccuracyError, DomainError, check_parameters
from .numerics import (DEFAULT_CONFIG, MACHINE_EPSILON, SeriesConfig, integrate_weighted,
                       signed_power, sum_series)

logger = logging.getLogger(__name__)

# a near-diagonal Bessel-kernel pair is evaluated at its midpoint
DIAGONAL_BAND = 1e-6
# relative digit loss of the alternating series before switching to quadrature
CANCELLATION_LIMIT = 1e6

LIMIT_METHODS = ("auto", "series", "quadrature")

# extended-precision kernels: significant digits, guard digits and tail window
EXTENDED_DIGITS = 40
EXTENDED_GUARD_DIGITS = 10
EXTENDED_TAIL_WINDOW = 3


@dataclass(frozen=True)
class LimitKernelParams:
    """(alpha, theta) of a limit kernel."""

    alpha: float
    theta: float

    def __post_init__(self):
        check_parameters(self.alpha, self.theta)

    def hermite_even(self) -> "LimitKernelParams":
        return LimitKernelParams((self.alpha - 1) / 2, self.theta)

    def hermite_odd(self) -> "LimitKernelParams":
        return LimitKernelParams((self.alpha + self.theta) / 2, self.theta)


def _log_abs_recip_gamma(z: np.ndarray):
    """(sign, log|1/Gamma(z)|); sign 0 at the poles."""
    z = np.asarray(z, dtype=float)
    pole = (z <= 0) & (z == np.floor(z))
    with np.errstate(divide="ignore", invalid="ignore"):
        sign = np.where(pole, 0.0, special.gammasgn(np.where(pole, 0.5, z)))
        log_mag = np.where(pole, 0.0, -special.gammaln(np.where(pole, 0.5, z)))
    return sign, log_mag


def _log_power(x: float, exponents: np.ndarray) -> np.ndarray:
    """log(x**e) for x >= 0 with 0**0 = 1."""
    if x == 0:
        return np.where(exponents == 0, 0.0, -np.inf)
    return exponents * math.log(x)


def wright_terms(a: float, b: float, x: float, m: np.ndarray) -> np.ndarray:
    """Terms (-x)^m / (m! Gamma(a + b m)) for an array of indices."""
    m = np.asarray(m, dtype=float)
    sign, log_rg = _log_abs_recip_gamma(a + b * m)
    log_mag = _log_power(abs(x), m) - special.gammaln(m + 1) + log_rg
    parity = np.where((m % 2 == 1) & (x > 0), -1.0, 1.0)
    with np.errstate(over="ignore"):
        return np.where(sign == 0, 0.0, parity * sign * np.exp(log_mag))


def wright_bessel(a: float, b: float, x: float, config: Optional[SeriesConfig] = None) -> float:
    """
    Wright generalized Bessel function J_{a,b}(x) = sum (-x)^m / (m! Gamma(a+bm)).

    Args:
        a (float): First parameter (any real)
        b (float): Second parameter, > 0
        x (float): Finite argument
        config (SeriesConfig): Tolerances

    Returns:
        float: J_{a,b}(x)
    """
    if not b > 0:
        raise DomainError("b must be > 0")
    if not math.isfinite(x):
        raise DomainError("x must be finite")
    config = config or DEFAULT_CONFIG
    if x == 0:
        return float(special.rgamma(a))
    result = sum_series(lambda m: float(wright_terms(a, b, x, m)), config)
    if not result.converged:
        raise AccuracyError("Wright series did not converge", result.value, result.terms_used)
    return result.value


def wright_bessel_array(a: float, b: float, xs, config: Optional[SeriesConfig] = None) -> np.ndarray:
    """J_{a,b} on an array of arguments; the term count grows until every row has converged."""
    if not b > 0:
        raise DomainError("b must be > 0")
    config = config or DEFAULT_CONFIG
    xs = np.asarray(xs, dtype=float)
    flat = xs.ravel()
    count = 32
    while True:
        m = np.arange(count, dtype=float)
        sign, log_rg = _log_abs_recip_gamma(a + b * m)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_x = np.log(np.abs(flat))[:, None]
            log_pow = np.where(m[None, :] == 0, 0.0, m[None, :] * log_x)
        parity = np.where((m[None, :] % 2 == 1) & (flat[:, None] > 0), -1.0, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            terms = np.where(sign[None, :] == 0, 0.0,
                             parity * sign[None, :] * np.exp(log_pow - special.gammaln(m + 1)[None, :]
                                                             + log_rg[None, :]))
        terms = np.nan_to_num(terms, nan=0.0)
        partial = np.sum(terms, axis=1)
        tail = np.abs(terms[:, -config.tail_window:])
        bound = np.maximum(config.abs_tol, config.rel_tol * np.abs(partial))
        if np.all(np.isfinite(terms)) and np.all(tail <= bound[:, None]):
            values = np.array([math.fsum(row) for row in terms.tolist()])
            return values.reshape(xs.shape)
        if count >= config.max_terms:
            raise AccuracyError("Wright series did not converge on the array", float(partial[0]), count)
        count = min(2 * count, config.max_terms)


def _diagonal_series(p: LimitKernelParams, x: float, y: float, config: SeriesConfig):
    """Double series summed along diagonals k + l = d; returns (value, absolute sum)."""
    alpha, theta = p.alpha, p.theta
    log_theta = math.log(theta)
    diagonals = []

    def diagonal(d: int) -> float:
        k = np.arange(d + 1, dtype=float)
        l = d - k
        log_mag = (_log_power(x, k) + _log_power(y, theta * l) + log_theta
                   - special.gammaln(k + 1) - special.gammaln((alpha + 1 + k) / theta)
                   - special.gammaln(l + 1) - special.gammaln(alpha + 1 + theta * l)
                   - np.log(alpha + 1 + k + theta * l))
        # every term on a diagonal carries the sign (-1)^d
        value = math.fsum(np.exp(log_mag).tolist())
        diagonals.append(value)
        return -value if d % 2 else value

    result = sum_series(diagonal, config)
    if not result.converged:
        raise AccuracyError("limit-kernel series did not converge", result.value, result.terms_used)
    return result.value, math.fsum(diagonals)


def _quadrature_kernel(p: LimitKernelParams, x: float, y: float, config: SeriesConfig) -> float:
    alpha, theta = p.alpha, p.theta
    a1, b1 = (alpha + 1) / theta, 1 / theta
    a2, b2 = alpha + 1, theta
    if theta >= 1:
        def integrand(t):
            return (wright_bessel_array(a1, b1, x * t, config)
                    * wright_bessel_array(a2, b2, (y * t) ** theta, config))
        return theta * integrate_weighted(integrand, alpha, config)

    # u = t**theta keeps every power in the integrand at least linear
    def integrand_u(u):
        return (wright_bessel_array(a1, b1, x * u ** (1 / theta), config)
                * wright_bessel_array(a2, b2, y ** theta * u, config))
    return integrate_weighted(integrand_u, (alpha + 1) / theta - 1, config)


def limit_kernel(p: LimitKernelParams, x: float, y: float, method: str = "auto",
                 config: Optional[SeriesConfig] = None) -> float:
    """
    Hard-edge limit kernel K^(alpha,theta)(x, y).

    Args:
        p (LimitKernelParams): Kernel parameters
        x (float): First argument, >= 0
        y (float): Second argument, >= 0 (carries the theta powers)
        method (str): "series", "quadrature", or "auto" (series, switching
            to quadrature when the alternating series loses too many digits)
        config (SeriesConfig): Tolerances

    Returns:
        float: Kernel value
    """
    if method not in LIMIT_METHODS:
        raise DomainError(f"method must be one of {', '.join(LIMIT_METHODS)}")
    if not (x >= 0 and y >= 0):
        raise DomainError("limit kernel arguments must be >= 0")
    config = config or DEFAULT_CONFIG
    if method == "quadrature":
        return _quadrature_kernel(p, x, y, config)
    value, magnitude = _diagonal_series(p, x, y, config)
    if method == "auto" and magnitude * MACHINE_EPSILON > CANCELLATION_LIMIT * config.rel_tol * abs(value):
        logger.warning("limit kernel at (%g, %g): series cancellation too large, using quadrature", x, y)
        return _quadrature_kernel(p, x, y, config)
    return value


def limit_kernel_hermite(p: LimitKernelParams, x: float, y: float, method: str = "auto",
                         config: Optional[SeriesConfig] = None) -> float:
    """
    Bulk limit kernel K^Her(alpha,theta)(x, y) on the whole plane.

    Args:
        p (LimitKernelParams): Kernel parameters
        x (float): First argument
        y (float): Second argument

    Returns:
        float: K^((alpha-1)/2)(x^2, y^2) + x^theta * y * K^((alpha+theta)/2)(x^2, y^2)
    """
    even = limit_kernel(p.hermite_even(), x * x, y * y, method, config)
    if x == 0 or y == 0:
        return even
    odd = limit_kernel(p.hermite_odd(), x * x, y * y, method, config)
    return even + signed_power(x, p.theta) * y * odd


def limit_kernel_extended(alpha, theta, x, y, digits: int = EXTENDED_DIGITS, max_terms: int = 2000):
    """
    Hard-edge limit kernel as an mpmath number, summed at `digits` significant digits.

    Parameters and arguments may be floats or mpmath numbers; they are used
    exactly, so points computed in extended precision (x^theta) keep their
    digits. For determinants of nearly singular kernel matrices.

    Returns:
        mpmath.mpf: K^(alpha,theta)(x, y)
    """
    check_parameters(float(alpha), float(theta))
    if not (x >= 0 and y >= 0):
        raise DomainError("limit kernel arguments must be >= 0")
    with mpmath.workdps(digits + EXTENDED_GUARD_DIGITS):
        alpha, theta, x, y = (mpmath.mpf(v) for v in (alpha, theta, x, y))
        y_theta = y ** theta
        tol = mpmath.mpf(10) ** (-digits)
        # per-index factors x^k / (k! Gamma((alpha+1+k)/theta)) and y^(theta l) / (l! Gamma(alpha+1+theta l))
        left, right = [], []
        total = mpmath.mpf(0)
        quiet = 0
        for d in range(max_terms):
            left.append(x ** d * mpmath.rgamma(d + 1) * mpmath.rgamma((alpha + 1 + d) / theta))
            right.append(y_theta ** d * mpmath.rgamma(d + 1) * mpmath.rgamma(alpha + 1 + theta * d))
            diagonal = mpmath.fsum(left[k] * right[d - k] / (alpha + 1 + k + theta * (d - k))
                                   for k in range(d + 1))
            total += -diagonal if d % 2 else diagonal
            if abs(diagonal) <= tol * abs(total):
                quiet += 1
                if quiet >= EXTENDED_TAIL_WINDOW:
                    return theta * total
            else:
                quiet = 0
    raise AccuracyError("extended-precision limit-kernel series did not converge", float(theta * total),
                        max_terms)


def limit_kernel_hermite_extended(alpha, theta, x, y, digits: int = EXTENDED_DIGITS):
    """Bulk limit kernel in extended precision, assembled like limit_kernel_hermite."""
    with mpmath.workdps(digits + EXTENDED_GUARD_DIGITS):
        alpha, theta, x, y = (mpmath.mpf(v) for v in (alpha, theta, x, y))
        even = limit_kernel_extended((alpha - 1) / 2, theta, x * x, y * y, digits)
        if x == 0 or y == 0:
            return even
        odd = limit_kernel_extended((alpha + theta) / 2, theta, x * x, y * y, digits)
        return even + mpmath.sign(x) * abs(x) ** theta * y * odd


def _bessel_phi(alpha: float, x: float, config: SeriesConfig):
    """phi1(x) = J_alpha(2 sqrt x), its derivative, and phi2 = x phi1'."""
    w = wright_bessel(alpha + 1, 1, x, config)
    w_prime = -wright_bessel(alpha + 2, 1, x, config)
    scale = x ** (alpha / 2)
    phi1 = scale * w
    phi2 = scale * (alpha / 2 * w + x * w_prime)
    return phi1, phi2 / x, phi2


def bessel_kernel(alpha: float, x: float, y: float, config: Optional[SeriesConfig] = None) -> float:
    """
    Classical Bessel kernel (phi1(x) phi2(y) - phi1(y) phi2(x)) / (x - y).

    Args:
        alpha (float): Order, > -1
        x (float): Positive argument
        y (float): Positive argument

    Returns:
        float: Kernel value, continuous across the diagonal
    """
    if not alpha > -1:
        raise DomainError("alpha must be > -1")
    if not (x > 0 and y > 0):
        raise DomainError("Bessel kernel arguments must be > 0")
    config = config or DEFAULT_CONFIG
    if abs(x - y) <= DIAGONAL_BAND * max(1.0, abs(x)):
        mid = (x + y) / 2
        phi1, phi1_prime, _ = _bessel_phi(alpha, mid, config)
        # phi2' = -(1 - alpha^2/(4x)) phi1 from the Bessel equation
        return mid * phi1_prime ** 2 + (1 - alpha * alpha / (4 * mid)) * phi1 ** 2
    phi1_x, _, phi2_x = _bessel_phi(alpha, x, config)
    phi1_y, _, phi2_y = _bessel_phi(alpha, y, config)
    return (phi1_x * phi2_y - phi1_y * phi2_x) / (x - y)


def sine_kernel(xi: float, eta: float) -> float:
    """sin(pi (xi - eta)) / (pi (xi - eta)), equal to 1 on the diagonal."""
    return float(np.sinc(xi - eta))
