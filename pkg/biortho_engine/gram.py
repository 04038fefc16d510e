"""
Gram Matrices and Their Inverses
Cauchy-structured Gram matrices of the Jacobi and Laguerre biorthogonal
systems, their closed-form inverses, and Gauss-decomposition
biorthogonalization of a generic Gram matrix.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np
from scipy import linalg, special

from .errors import DecompositionError, DomainError, SingularityError, check_parameters
from .numerics import LOG_FLOAT_MAX, SignedLogValue, exp_sum, log_factorials, log_rising

logger = logging.getLogger(__name__)

DENSE_INVERSE_MAX_N = 12
PIVOT_THRESHOLD = 1e-13


class CoefficientMatrix:
    """Dense square matrix of signed-log entries."""

    def __init__(self, signs: np.ndarray, log_mags: np.ndarray):
        signs = np.array(signs, dtype=np.int8)
        log_mags = np.array(log_mags, dtype=float)
        if signs.ndim != 2 or signs.shape[0] != signs.shape[1] or signs.shape != log_mags.shape:
            raise DomainError("coefficient matrix must be square with matching sign/log arrays")
        if not np.all(np.isfinite(log_mags[signs != 0])):
            raise DomainError("coefficient matrix entries must be finite")
        log_mags[signs == 0] = 0.0
        signs.setflags(write=False)
        log_mags.setflags(write=False)
        self.signs = signs
        self.log_mags = log_mags

    @property
    def n(self) -> int:
        return self.signs.shape[0]

    def entry(self, k: int, l: int) -> SignedLogValue:
        """Zero-based entry (k, l)."""
        return SignedLogValue(int(self.signs[k, l]), float(self.log_mags[k, l]))

    def to_dense(self) -> np.ndarray:
        if np.any(self.log_mags[self.signs != 0] > LOG_FLOAT_MAX):
            raise DomainError("coefficient matrix overflows double precision; keep it in signed-log form")
        return self.signs * np.exp(self.log_mags)

    def scale_rows(self, log_factors: np.ndarray, signs: np.ndarray = None) -> "CoefficientMatrix":
        """Multiply row k by sign_k * exp(log_factor_k)."""
        row_signs = np.ones(self.n, dtype=np.int8) if signs is None else np.asarray(signs, dtype=np.int8)
        return CoefficientMatrix(self.signs * row_signs[:, None],
                                 self.log_mags + np.asarray(log_factors)[:, None])

    def __repr__(self):
        return f"CoefficientMatrix(n={self.n})"


def signed_log_matmul(left: CoefficientMatrix, right) -> np.ndarray:
    """
    Real-valued product left @ right with exact (fsum) accumulation.

    Args:
        left (CoefficientMatrix): Signed-log left factor
        right: CoefficientMatrix or real matrix

    Returns:
        numpy.ndarray: The product as doubles
    """
    if not isinstance(right, CoefficientMatrix):
        right = np.asarray(right, dtype=float)
        with np.errstate(divide="ignore"):
            right = CoefficientMatrix(np.sign(right), np.where(right == 0, 0.0, np.log(np.abs(right))))
    n = left.n
    product = np.empty((n, right.n))
    for k in range(n):
        for j in range(right.n):
            product[k, j] = exp_sum(left.signs[k, :] * right.signs[:, j],
                                    left.log_mags[k, :] + right.log_mags[:, j])
    return product


@dataclass(frozen=True)
class CauchySystem:
    """Nodes of the Cauchy matrix M_ij = 1 / (A_i + B_j)."""

    A: Tuple[float, ...]
    B: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "A", tuple(float(a) for a in self.A))
        object.__setattr__(self, "B", tuple(float(b) for b in self.B))
        if len(self.A) != len(self.B) or not self.A:
            raise DomainError("A and B must be non-empty and of equal length")
        problems = []
        for name, seq in (("A", self.A), ("B", self.B)):
            for i in range(len(seq)):
                for j in range(i + 1, len(seq)):
                    if seq[i] == seq[j]:
                        problems.append((name, i, j))
        for i, a in enumerate(self.A):
            for j, b in enumerate(self.B):
                if a + b == 0:
                    problems.append(("A+B", i, j))
        if problems:
            raise SingularityError(f"singular Cauchy system at {problems}", problems)

    @property
    def n(self) -> int:
        return len(self.A)

    def matrix(self) -> np.ndarray:
        A = np.asarray(self.A)
        B = np.asarray(self.B)
        return 1.0 / (A[:, None] + B[None, :])


def _log_abs_products(values: np.ndarray, axis: int):
    """Sign and log|.| of the product along an axis."""
    return (np.prod(np.sign(values), axis=axis),
            np.sum(np.log(np.abs(values)), axis=axis))


def cauchy_inverse(system: CauchySystem) -> CoefficientMatrix:
    """
    Closed-form inverse of a Cauchy matrix, entirely in signed-log arithmetic.

    Entry (k, l) is prod_i (B_i+A_l)(A_i+B_k) divided by
    prod_{i!=l}(A_l-A_i) prod_{j!=k}(B_k-B_j) (A_l+B_k).

    Args:
        system (CauchySystem): Validated nodes

    Returns:
        CoefficientMatrix: C with C @ M = M @ C = I
    """
    A = np.asarray(system.A)
    B = np.asarray(system.B)
    n = system.n
    S = A[:, None] + B[None, :]
    sign_r, log_r = _log_abs_products(S, axis=1)      # prod_i (A_l + B_i), indexed by l
    sign_q, log_q = _log_abs_products(S, axis=0)      # prod_i (A_i + B_k), indexed by k
    dA = A[:, None] - A[None, :]
    dB = B[:, None] - B[None, :]
    np.fill_diagonal(dA, 1.0)
    np.fill_diagonal(dB, 1.0)
    sign_da, log_da = _log_abs_products(dA, axis=1)
    sign_db, log_db = _log_abs_products(dB, axis=1)
    # rows k, columns l
    signs = (sign_q[:, None] * sign_r[None, :] * sign_db[:, None] * sign_da[None, :]
             * np.sign(S.T))
    log_mags = (log_q[:, None] + log_r[None, :] - log_db[:, None] - log_da[None, :]
                - np.log(np.abs(S.T)))
    logger.debug("Cauchy inverse of order %d built", n)
    return CoefficientMatrix(signs, log_mags)


def jacobi_gram(alpha: float, theta: float, n: int) -> np.ndarray:
    """
    Gram matrix of the Jacobi biorthogonal system.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Order

    Returns:
        numpy.ndarray: g_ij = 1 / (j + theta (i-1) + alpha), i, j = 1..n
    """
    check_parameters(alpha, theta, n)
    i = np.arange(1, n + 1)[:, None]
    j = np.arange(1, n + 1)[None, :]
    return 1.0 / (j + theta * (i - 1) + alpha)


def jacobi_cauchy_system(alpha: float, theta: float, n: int) -> CauchySystem:
    check_parameters(alpha, theta, n)
    return CauchySystem(tuple(theta * i for i in range(n)), tuple(i + 1 + alpha for i in range(n)))


@lru_cache(maxsize=64)
def jacobi_coeffs(alpha: float, theta: float, n: int) -> CoefficientMatrix:
    """
    Closed-form inverse of the Jacobi Gram matrix.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Order

    Returns:
        CoefficientMatrix: c_kl with sum_l c_kl g_lj = delta_kj
    """
    check_parameters(alpha, theta, n)
    n = int(n)
    k = np.arange(1, n + 1, dtype=float)
    log_fact = log_factorials(n)
    # (k-1)!(N-k)! for k = 1..N
    log_denominator = log_fact + log_fact[::-1]
    row = log_rising((k + alpha) / theta, n) - log_denominator
    col = log_rising(theta * (k - 1) + alpha + 1, n) - log_denominator
    denominators = k[:, None] + theta * (k[None, :] - 1) + alpha
    log_mags = math.log(theta) + row[:, None] + col[None, :] - np.log(denominators)
    parity = (np.arange(n)[:, None] + np.arange(n)[None, :]) % 2
    signs = np.where(parity == 1, -1, 1)
    logger.debug("Jacobi coefficients built for alpha=%g theta=%g n=%d", alpha, theta, n)
    return CoefficientMatrix(signs, log_mags)


def laguerre_cauchy_system(alpha: float, theta: float, n: int) -> CauchySystem:
    check_parameters(alpha, theta, n)
    return CauchySystem(tuple(-float(i) for i in range(n)),
                        tuple(alpha + n + theta * i for i in range(n)))


def laguerre_gram_tilde(alpha: float, theta: float, n: int) -> CoefficientMatrix:
    """
    Transformed Laguerre Gram matrix in signed-log form.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Order

    Returns:
        CoefficientMatrix: Gamma(1+alpha+N+theta(j-1)) / (alpha+N+theta(j-1)-(i-1))
    """
    check_parameters(alpha, theta, n)
    i = np.arange(n, dtype=float)[:, None]
    b = alpha + n + theta * np.arange(n, dtype=float)[None, :]
    log_mags = special.gammaln(1 + b) - np.log(b - i)
    return CoefficientMatrix(np.ones((n, n), dtype=np.int8), np.broadcast_to(log_mags, (n, n)))


@lru_cache(maxsize=64)
def laguerre_coeffs(alpha: float, theta: float, n: int) -> CoefficientMatrix:
    """
    Closed-form inverse of the transformed Laguerre Gram matrix.

    Args:
        alpha (float): Weight exponent, > -1
        theta (float): Power parameter, > 0
        n (int): Order

    Returns:
        CoefficientMatrix: c~_kl with C~ = G~^{-1}
    """
    check_parameters(alpha, theta, n)
    n = int(n)
    k = np.arange(1, n + 1, dtype=float)
    log_fact = log_factorials(n)
    log_denominator = log_fact + log_fact[::-1]
    row = -special.gammaln(1 + alpha + theta * (k - 1)) - log_denominator
    col = log_rising((alpha + n - (k - 1)) / theta, n) - log_denominator
    denominators = alpha + n + theta * (k[:, None] - 1) - (k[None, :] - 1)
    log_mags = math.log(theta) + row[:, None] + col[None, :] - np.log(denominators)
    parity = (n + 1 + np.arange(1, n + 1)[:, None] + np.arange(1, n + 1)[None, :]) % 2
    signs = np.where(parity == 1, -1, 1)
    logger.debug("Laguerre coefficients built for alpha=%g theta=%g n=%d", alpha, theta, n)
    return CoefficientMatrix(signs, log_mags)


def dense_inverse(matrix) -> np.ndarray:
    """
    Generic inverse by partially pivoted LU, used as an oracle for small N.

    Args:
        matrix: Square real matrix of order at most 12

    Returns:
        numpy.ndarray: The inverse
    """
    matrix = np.asarray(matrix, dtype=float)
    if matrix.shape[0] > DENSE_INVERSE_MAX_N:
        raise DomainError(f"dense inversion is only trusted for N <= {DENSE_INVERSE_MAX_N}")
    lu, piv = linalg.lu_factor(matrix)
    return linalg.lu_solve((lu, piv), np.eye(matrix.shape[0]))


def biorthogonalize(gram) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss decomposition G = P Q without pivoting, returning L = P^-1, U = Q^-1.

    Rows of L are coefficient vectors of the psi functions, columns of U
    those of the zeta functions, so that L G U = I.

    Args:
        gram: Square real matrix with nonzero leading principal minors

    Returns:
        tuple: (L lower-triangular, U upper-triangular)
    """
    gram = np.asarray(gram, dtype=float)
    n = gram.shape[0]
    if gram.ndim != 2 or gram.shape[1] != n:
        raise DomainError("Gram matrix must be square")
    threshold = PIVOT_THRESHOLD * np.linalg.norm(gram, ord=np.inf)
    lower = np.eye(n)
    upper = gram.copy()
    for k in range(n):
        pivot = upper[k, k]
        if abs(pivot) <= threshold:
            raise DecompositionError("leading principal minor vanishes", k + 1)
        factors = upper[k + 1:, k] / pivot
        lower[k + 1:, k] = factors
        upper[k + 1:, k:] -= np.outer(factors, upper[k, k:])
        upper[k + 1:, k] = 0.0
    identity = np.eye(n)
    L = linalg.solve_triangular(lower, identity, lower=True, unit_diagonal=True)
    U = linalg.solve_triangular(upper, identity, lower=False)
    return L, U


def gram_residual(coeffs: CoefficientMatrix, gram) -> float:
    """max |C G - I| with compensated accumulation."""
    product = signed_log_matmul(coeffs, gram)
    return float(np.max(np.abs(product - np.eye(coeffs.n))))


def gram_residual_relative(coeffs: CoefficientMatrix, gram) -> float:
    """
    max |C G - I| / (|C| |G|), entrywise.

    Rounding in the entries of C and G alone gives about machine epsilon
    here, whereas the plain residual grows with the condition number.
    """
    gram = np.asarray(gram, dtype=float)
    product = signed_log_matmul(coeffs, gram)
    scale = np.exp(coeffs.log_mags) * (coeffs.signs != 0) @ np.abs(gram)
    return float(np.max(np.abs(product - np.eye(coeffs.n)) / np.maximum(scale, 1e-300)))


def assemble(entries: Sequence[Sequence[SignedLogValue]]) -> CoefficientMatrix:
    """Build a CoefficientMatrix from nested SignedLogValue rows."""
    signs: List[List[int]] = [[v.sign for v in row] for row in entries]
    logs: List[List[float]] = [[v.log_mag for v in row] for row in entries]
    return CoefficientMatrix(np.array(signs), np.array(logs))
