#!/usr/bin/env python3
"""
Tests for Gram matrices, closed-form Cauchy inverses and the Gauss
decomposition.
"""

import numpy as np
from scipy import linalg

from biortho_engine.errors import DecompositionError, DomainError, SingularityError
from biortho_engine.gram import (CauchySystem, CoefficientMatrix, assemble, biorthogonalize, cauchy_inverse,
                                 dense_inverse, gram_residual, gram_residual_relative, jacobi_cauchy_system,
                                 jacobi_coeffs, jacobi_gram, laguerre_cauchy_system, laguerre_coeffs,
                                 laguerre_gram_tilde, signed_log_matmul)
from biortho_engine.numerics import SignedLogValue

PARAMETERS = [(0.0, 1.0), (0.5, 2.0), (1.5, 0.5)]


def test_hilbert_inverse():
    """Test the Cauchy inverse on Hilbert matrices."""
    print("Testing Cauchy inverse of Hilbert matrices...")
    for n in (1, 2, 5, 8, 12):
        system = CauchySystem(tuple(range(n)), tuple(range(1, n + 1)))
        assert np.allclose(system.matrix(), linalg.hilbert(n), rtol=1e-15)
        inverse = cauchy_inverse(system).to_dense()
        exact = linalg.invhilbert(n, exact=True).astype(float)
        assert np.max(np.abs(inverse - exact)) <= 1e-10 * np.max(np.abs(exact))
    print("✓ Hilbert inverse works")


def test_cauchy_singularities():
    """Test that singular Cauchy systems name the offending indices."""
    print("Testing singular Cauchy systems...")
    try:
        CauchySystem((0.0, 1.0, 1.0), (1.0, 2.0, 3.0))
        assert False, "duplicate A should raise"
    except SingularityError as e:
        assert ("A", 1, 2) in e.indices
    try:
        CauchySystem((0.0, -2.0), (1.0, 2.0))
        assert False, "A_i + B_j = 0 should raise"
    except SingularityError as e:
        assert ("A+B", 1, 1) in e.indices
    try:
        CauchySystem((0.0,), (1.0, 2.0))
        assert False, "unequal lengths should raise"
    except DomainError:
        pass
    print("✓ Singular Cauchy systems are rejected")


def test_jacobi_gram():
    """Test the Jacobi Gram matrix and its Cauchy form."""
    print("Testing Jacobi Gram matrix...")
    gram = jacobi_gram(0.5, 2.0, 3)
    assert abs(gram[0, 0] - 1 / 1.5) < 1e-15
    assert abs(gram[2, 1] - 1 / (2 + 4 + 0.5)) < 1e-15
    for alpha, theta in PARAMETERS:
        system = jacobi_cauchy_system(alpha, theta, 5)
        assert np.allclose(system.matrix(), jacobi_gram(alpha, theta, 5), rtol=1e-15)
    print("✓ Jacobi Gram matrix works")


def test_jacobi_inverse():
    """Test the closed-form Jacobi inverse."""
    print("Testing Jacobi inverse...")
    for alpha, theta in PARAMETERS:
        for n in (1, 2, 4, 8, 12):
            coeffs = jacobi_coeffs(alpha, theta, n)
            assert gram_residual_relative(coeffs, jacobi_gram(alpha, theta, n)) < 1e-8
            cauchy = cauchy_inverse(jacobi_cauchy_system(alpha, theta, n)).to_dense()
            dense = coeffs.to_dense()
            assert np.max(np.abs(cauchy - dense)) <= 1e-9 * np.max(np.abs(dense))
        for n in (1, 2, 3, 4):
            assert gram_residual(jacobi_coeffs(alpha, theta, n), jacobi_gram(alpha, theta, n)) < 1e-8
    print("✓ Jacobi inverse works")


def test_laguerre_inverse():
    """Test the closed-form inverse of the transformed Laguerre Gram matrix."""
    print("Testing Laguerre inverse...")
    for alpha, theta in PARAMETERS:
        for n in (1, 2, 4, 8, 12):
            coeffs = laguerre_coeffs(alpha, theta, n)
            gram = laguerre_gram_tilde(alpha, theta, n).to_dense()
            assert gram_residual_relative(coeffs, gram) < 1e-8
        # the Cauchy part of G~ is 1 / (b_j - (i-1))
        system = laguerre_cauchy_system(alpha, theta, 4)
        tilde = laguerre_gram_tilde(alpha, theta, 4).to_dense()
        assert np.allclose(tilde / tilde[0] * system.matrix()[0], system.matrix(), rtol=1e-12)
    print("✓ Laguerre inverse works")


def test_dense_match():
    """Test closed forms against generic LU inversion."""
    print("Testing closed forms against dense inversion...")
    for alpha, theta in PARAMETERS:
        for n in (1, 2, 4, 6):
            closed = jacobi_coeffs(alpha, theta, n).to_dense()
            dense = dense_inverse(jacobi_gram(alpha, theta, n))
            assert np.max(np.abs(closed - dense)) <= 1e-6 * np.max(np.abs(closed))
            closed = laguerre_coeffs(alpha, theta, n).to_dense()
            dense = dense_inverse(laguerre_gram_tilde(alpha, theta, n).to_dense())
            assert np.max(np.abs(closed - dense)) <= 1e-6 * np.max(np.abs(closed))
    try:
        dense_inverse(np.eye(13))
        assert False, "N > 12 should raise"
    except DomainError:
        pass
    print("✓ Dense inversion matches")


def test_biorthogonalize():
    """Test L G U = I with triangular factors."""
    print("Testing Gauss decomposition...")
    gram = jacobi_gram(0.5, 2.0, 4)
    L, U = biorthogonalize(gram)
    assert np.allclose(L, np.tril(L)) and np.allclose(U, np.triu(U))
    assert np.allclose(np.diag(L), 1.0)
    assert np.max(np.abs(L @ gram @ U - np.eye(4))) < 1e-9
    try:
        biorthogonalize(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert False, "vanishing leading minor should raise"
    except DecompositionError as e:
        assert e.order == 1
    try:
        biorthogonalize(np.ones((2, 3)))
        assert False, "non-square input should raise"
    except DomainError:
        pass
    print("✓ Gauss decomposition works")


def test_coefficient_matrix():
    """Test signed-log matrix plumbing."""
    print("Testing CoefficientMatrix...")
    entries = [[SignedLogValue.from_real(2.0), SignedLogValue.from_real(-1.0)],
               [SignedLogValue.from_real(0.0), SignedLogValue.from_real(0.5)]]
    matrix = assemble(entries)
    assert isinstance(matrix, CoefficientMatrix)
    assert matrix.n == 2
    assert np.allclose(matrix.to_dense(), [[2.0, -1.0], [0.0, 0.5]])
    assert matrix.entry(0, 1).sign == -1
    product = signed_log_matmul(matrix, np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert np.allclose(product, [[-1.0, 0.0], [1.5, 2.0]])
    scaled = matrix.scale_rows(np.log(np.array([1.0, 4.0])))
    assert np.allclose(scaled.to_dense(), [[2.0, -1.0], [0.0, 2.0]])
    print("✓ CoefficientMatrix works")


def main():
    """Run all tests."""
    print("🧪 Running Gram matrix tests")
    print("=" * 50)

    try:
        test_hilbert_inverse()
        test_cauchy_singularities()
        test_jacobi_gram()
        test_jacobi_inverse()
        test_laguerre_inverse()
        test_dense_match()
        test_biorthogonalize()
        test_coefficient_matrix()

        print("=" * 50)
        print("✅ All tests passed!")

    except AssertionError as e:
        print(f"❌ Test failed: {e}")
        return 1
    except Exception as e:
        print(f"❌ Unexpected error: {e}")
        return 1

    return 0


if __name__ == "__main__":
    exit(main())
