"""
Biorthogonal Polynomial Families
General-exponent biorthonormal pairs on [0,1], Konhauser Z/Y polynomials,
the Hermite-type S/T families, and kernels rebuilt from them.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import special

from .errors import DomainError, check_parameters
from .gram import biorthogonalize, jacobi_gram
from .numerics import (SeriesConfig, SignedLogValue, integrate_half_line, integrate_signed_line,
                       signed_power)

logger = logging.getLogger(__name__)

# binomial cancellation in Y_n makes larger degrees unreliable
MAX_KONHAUSER_DEGREE = 12


@dataclass
class ExponentPolynomial:
    """Finite sum of c_i x^{e_i} with real exponents."""

    terms: List[Tuple[SignedLogValue, float]]
    normalization: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = sorted(self.terms, key=lambda term: term[1])
        exponents = [e for _, e in self.terms]
        if any(b <= a for a, b in zip(exponents, exponents[1:])):
            raise DomainError("exponents must be strictly increasing")

    @property
    def exponents(self) -> np.ndarray:
        return np.array([e for _, e in self.terms])

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([c.to_real() for c, _ in self.terms])

    def __call__(self, x: float) -> float:
        if x < 0:
            raise DomainError("exponent polynomials are evaluated at x >= 0")
        if x == 0:
            return math.fsum(c.to_real() for c, e in self.terms if e == 0)
        log_x = math.log(x)
        return math.fsum(c.sign * math.exp(c.log_mag + e * log_x) for c, e in self.terms if c.sign)

    def pair_unit_interval(self, other: "ExponentPolynomial") -> float:
        """Integral over (0,1) of self(x) * other(x), from monomial integrals."""
        values = []
        for c, e in self.terms:
            for d, f in other.terms:
                if e + f <= -1:
                    raise DomainError("pairing integral diverges at 0")
                values.append(c.to_real() * d.to_real() / (e + f + 1))
        return math.fsum(values)


@dataclass
class DensePolynomial:
    """Polynomial with real coefficients in ascending degree."""

    coefficients: Tuple[float, ...]

    def __post_init__(self):
        self.coefficients = tuple(float(c) for c in self.coefficients)
        if any(self.coefficients) and self.coefficients[-1] == 0:
            raise DomainError("leading coefficient must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1 if any(self.coefficients) else -1

    def __call__(self, x):
        return P.polyval(x, self.coefficients)


class HermitePolynomial(NamedTuple):
    """Parity plus radial polynomial in x^2: p(x) = x^s R(x^2)."""

    parity: str
    radial: DensePolynomial

    def __call__(self, x: float) -> float:
        value = self.radial(x * x)
        return x * value if self.parity == "odd" else value


def _check_exponents(a_seq: Sequence[float], b_seq: Sequence[float], n: int):
    if n < 1 or len(a_seq) < n or len(b_seq) < n:
        raise DomainError("need at least n exponents in each sequence")
    for name, seq in (("a", a_seq), ("b", b_seq)):
        for i in range(n):
            for j in range(i + 1, n):
                if seq[i] == seq[j]:
                    raise DomainError(f"{name}_{i + 1} and {name}_{j + 1} must be distinct")
    for i in range(n):
        for j in range(n):
            if not a_seq[i] + b_seq[j] > -1:
                raise DomainError(f"a_{i + 1} + b_{j + 1} must be > -1")


def _pair_member(first: Sequence[float], second: Sequence[float], n: int) -> ExponentPolynomial:
    """n-th member built on exponents `first`, normalized against `second`."""
    norm = first[n - 1] + second[n - 1] + 1
    terms = []
    for i in range(n):
        value = SignedLogValue(1, 0.5 * math.log(norm))
        for k in range(n - 1):
            value = value * SignedLogValue.from_real(first[i] + second[k] + 1)
        for k in range(n):
            if k != i:
                value = value / SignedLogValue.from_real(first[i] - first[k])
        terms.append((value, float(first[i])))
    return ExponentPolynomial(terms, {"norm_squared": norm})


def biortho_pair_general(a_seq: Sequence[float], b_seq: Sequence[float], n: int
                         ) -> Tuple[ExponentPolynomial, ExponentPolynomial]:
    """
    n-th members of the biorthonormal pair built on x^{a_i} and x^{b_i} in L^2([0,1]).

    Args:
        a_seq (list): Exponents of the zeta family
        b_seq (list): Exponents of the psi family
        n (int): One-based member index

    Returns:
        tuple: (zeta_n, psi_n)
    """
    _check_exponents(a_seq, b_seq, n)
    return _pair_member(a_seq, b_seq, n), _pair_member(b_seq, a_seq, n)


def jacobi_pair(alpha: float, theta: float, n: int) -> List[Tuple[ExponentPolynomial, ExponentPolynomial]]:
    """Ensemble biorthonormal functions for a_i = i-1, b_i = theta(i-1) + alpha, i = 1..n."""
    check_parameters(alpha, theta, n)
    a_seq = [float(i) for i in range(n)]
    b_seq = [theta * i + alpha for i in range(n)]
    return [biortho_pair_general(a_seq, b_seq, m) for m in range(1, n + 1)]


def kernel_jacobi_from_pairs(alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """Jacobi kernel sum zeta_i(x) psi_i(y) / y^alpha from the explicit pairs."""
    if not y > 0:
        raise DomainError("y must be > 0 for the pair representation")
    return math.fsum(z(x) * p(y) for z, p in jacobi_pair(alpha, theta, n)) / y ** alpha


@lru_cache(maxsize=256)
def konhauser_Z(alpha: float, theta: float, n: int) -> DensePolynomial:
    """
    Z_n(x) = sum_j binom(n, j) (-1)^j x^j / Gamma(theta j + alpha + 1).

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Degree

    Returns:
        DensePolynomial: Z_n, evaluated at x^theta in the pairing
    """
    check_parameters(alpha, theta)
    if n < 0:
        raise DomainError("degree must be >= 0")
    j = np.arange(n + 1, dtype=float)
    coefficients = special.binom(n, j) * (-1.0) ** j * special.rgamma(theta * j + alpha + 1)
    return DensePolynomial(tuple(coefficients))


def _exact_rising(c: Fraction, m: int) -> Fraction:
    value = Fraction(1)
    for step in range(m):
        value *= c + step
    return value


@lru_cache(maxsize=256)
def konhauser_Y(alpha: float, theta: float, n: int) -> DensePolynomial:
    """
    Y_n(x) = (1/n!) sum_r x^r/r! sum_i (-1)^i binom(r, i) ((i+alpha+1)/theta)_n.

    The alternating inner sum is accumulated in exact rational arithmetic.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Degree, at most 12

    Returns:
        DensePolynomial: Y_n
    """
    check_parameters(alpha, theta)
    if n < 0 or n > MAX_KONHAUSER_DEGREE:
        raise DomainError(f"degree must be between 0 and {MAX_KONHAUSER_DEGREE}")
    a = Fraction(alpha)
    t = Fraction(theta)
    rising = [_exact_rising((i + a + 1) / t, n) for i in range(n + 1)]
    coefficients = []
    for r in range(n + 1):
        inner = sum(((-1) ** i) * math.comb(r, i) * rising[i] for i in range(r + 1))
        coefficients.append(float(inner / (math.factorial(n) * math.factorial(r))))
    return DensePolynomial(tuple(coefficients))


def hermite_S(alpha: float, theta: float, n: int) -> HermitePolynomial:
    """S_{2m} = Z_m^{(a-1)/2}(x^2), S_{2m+1} = x Z_m^{(a+theta)/2}(x^2)."""
    check_parameters(alpha, theta)
    if n % 2 == 0:
        return HermitePolynomial("even", konhauser_Z((alpha - 1) / 2, theta, n // 2))
    return HermitePolynomial("odd", konhauser_Z((alpha + theta) / 2, theta, n // 2))


def hermite_T(alpha: float, theta: float, n: int) -> HermitePolynomial:
    """T_{2m} = Y_m^{(a-1)/2}(x^2), T_{2m+1} = x Y_m^{(a+theta)/2}(x^2)."""
    check_parameters(alpha, theta)
    if n % 2 == 0:
        return HermitePolynomial("even", konhauser_Y((alpha - 1) / 2, theta, n // 2))
    return HermitePolynomial("odd", konhauser_Y((alpha + theta) / 2, theta, n // 2))


def jacobi_polynomials(alpha: float, theta: float, n: int):
    """
    zeta/psi functions of the Jacobi system from Gauss decomposition.

    Returns:
        list: (zeta, psi) pairs as ExponentPolynomial, zeta on x^(j-1), psi on y^(theta(i-1))
    """
    L, U = biorthogonalize(jacobi_gram(alpha, theta, n))
    pairs = []
    for m in range(n):
        zeta_terms = [(SignedLogValue.from_real(U[j, m]), float(j)) for j in range(m + 1) if U[j, m] != 0]
        psi_terms = [(SignedLogValue.from_real(L[m, i]), theta * i) for i in range(m + 1) if L[m, i] != 0]
        pairs.append((ExponentPolynomial(zeta_terms), ExponentPolynomial(psi_terms)))
    return pairs


def kernel_from_polynomials(family: str, alpha: float, theta: float, n: int, x: float, y: float) -> float:
    """
    Kernel sum_{i<N} zeta_i(x) psi_i(y) from the family's polynomial pair.

    Args:
        family (str): "jacobi", "laguerre" or "hermite"
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Number of terms
        x (float): First argument
        y (float): Second argument

    Returns:
        float: The kernel value
    """
    check_parameters(alpha, theta, n)
    family = family.lower()
    if family == "laguerre":
        if not (x >= 0 and y >= 0):
            raise DomainError("Laguerre arguments must be >= 0")
        xt = x ** theta
        return math.fsum(konhauser_Z(alpha, theta, i)(xt) * konhauser_Y(alpha, theta, i)(y)
                         for i in range(n))
    if family == "hermite":
        xt = signed_power(x, theta)
        return math.fsum(hermite_S(alpha, theta, i)(xt) * hermite_T(alpha, theta, i)(y)
                         for i in range(n))
    if family == "jacobi":
        return math.fsum(z(x) * p(y) for z, p in jacobi_polynomials(alpha, theta, n))
    raise DomainError("family must be one of jacobi, laguerre, hermite")


def laguerre_pairing(alpha: float, theta: float, m: int, n: int,
                     config: Optional[SeriesConfig] = None) -> float:
    """Integral over (0,inf) of Z_m(x^theta) Y_n(x) x^alpha e^-x."""
    z = konhauser_Z(alpha, theta, m)
    y = konhauser_Y(alpha, theta, n)
    return integrate_half_line(lambda x: z(x ** theta) * y(x) * math.exp(-x), alpha, config)


def hermite_pairing(alpha: float, theta: float, m: int, n: int,
                    config: Optional[SeriesConfig] = None) -> float:
    """Integral over the real line of S_m(x^theta) T_n(x) |x|^alpha e^-x^2."""
    s = hermite_S(alpha, theta, m)
    t = hermite_T(alpha, theta, n)
    return integrate_signed_line(lambda x: s(signed_power(x, theta)) * t(x) * math.exp(-x * x),
                                 alpha, config)
