#!/usr/bin/env python3
"""
Tests for the biorthogonal polynomial families and the kernels rebuilt
from them.
"""

import math

from scipy import special

from biortho_engine.errors import DomainError
from biortho_engine.kernels import kernel_hermite, kernel_jacobi, kernel_laguerre
from biortho_engine.numerics import SeriesConfig, SignedLogValue
from biortho_engine.polynomials import (DensePolynomial, ExponentPolynomial, biortho_pair_general, hermite_pairing,
                                        hermite_S, hermite_T, jacobi_pair, jacobi_polynomials,
                                        kernel_from_polynomials, kernel_jacobi_from_pairs, konhauser_Y,
                                        konhauser_Z, laguerre_pairing)

CONFIG = SeriesConfig(rel_tol=1e-11, abs_tol=1e-13)


def test_general_pair():
    """Test biorthonormality of pairs built on arbitrary exponents."""
    print("Testing general biorthonormal pairs...")
    a_seq = [0.0, 1.0, 2.5, 4.0]
    b_seq = [0.5, 1.7, 3.0, 3.5]
    pairs = [biortho_pair_general(a_seq, b_seq, n) for n in range(1, 5)]
    for m, (zeta, _) in enumerate(pairs):
        for n, (_, psi) in enumerate(pairs):
            expected = 1.0 if m == n else 0.0
            assert abs(zeta.pair_unit_interval(psi) - expected) < 1e-10, (m, n)
    zeta, psi = pairs[2]
    assert list(zeta.exponents) == a_seq[:3]
    assert list(psi.exponents) == b_seq[:3]
    assert zeta.normalization["norm_squared"] == 2.5 + 3.0 + 1
    print("✓ General pairs are biorthonormal")


def test_legendre_pair():
    """Test equal integer exponents give orthonormal shifted Legendre polynomials."""
    print("Testing Legendre reduction...")
    exponents = [float(i) for i in range(6)]
    for n in range(1, 7):
        zeta, psi = biortho_pair_general(exponents, exponents, n)
        for x in (0.1, 0.45, 0.8):
            expected = (2 * n - 1) * special.eval_sh_legendre(n - 1, x) ** 2
            assert abs(zeta(x) * psi(x) - expected) < 1e-9
            assert abs(zeta(x) - psi(x)) < 1e-9
    print("✓ Legendre reduction works")


def test_pair_validation():
    """Test exponent validation of general pairs."""
    print("Testing pair validation...")
    for a_seq, b_seq, n, text in (([0.0, 1.0, 1.0], [0.0, 1.0, 2.0], 3, "a_2 and a_3 must be distinct"),
                                  ([0.0, 1.0], [-1.5, 1.0], 2, "a_1 + b_1 must be > -1"),
                                  ([0.0], [0.0, 1.0], 2, "need at least n exponents")):
        try:
            biortho_pair_general(a_seq, b_seq, n)
            assert False, f"{a_seq}, {b_seq} should be rejected"
        except DomainError as e:
            assert text in str(e)
    print("✓ Pair validation works")


def test_polynomial_types():
    """Test ExponentPolynomial and DensePolynomial invariants."""
    print("Testing polynomial types...")
    one = SignedLogValue.from_real(1.0)
    try:
        ExponentPolynomial([(one, 1.0), (one, 1.0)])
        assert False, "repeated exponents should raise"
    except DomainError:
        pass
    p = ExponentPolynomial([(SignedLogValue.from_real(2.0), 0.5), (SignedLogValue.from_real(-1.0), 0.0)])
    assert list(p.exponents) == [0.0, 0.5]
    assert p(0.0) == -1.0
    assert abs(p(4.0) - 3.0) < 1e-14
    try:
        p(-1.0)
        assert False, "negative x should raise"
    except DomainError:
        pass
    q = DensePolynomial((1.0, -2.0, 3.0))
    assert q.degree == 2
    assert q(2.0) == 9.0
    assert DensePolynomial((0.0,)).degree == -1
    try:
        DensePolynomial((1.0, 0.0))
        assert False, "zero leading coefficient should raise"
    except DomainError:
        pass
    print("✓ Polynomial types work")


def test_jacobi_pairs_and_kernel():
    """Test the Jacobi kernel rebuilt from explicit pairs and from the Gauss decomposition."""
    print("Testing Jacobi kernel from polynomials...")
    for alpha, theta in ((0.0, 1.0), (0.5, 2.0), (1.5, 0.5)):
        for n in (1, 2, 4):
            assert len(jacobi_pair(alpha, theta, n)) == n
            assert len(jacobi_polynomials(alpha, theta, n)) == n
            for x, y in ((0.2, 0.7), (0.6, 0.6), (0.9, 0.3)):
                direct = kernel_jacobi(alpha, theta, n, x, y)
                tolerance = 1e-8 * max(1.0, abs(direct))
                assert abs(kernel_jacobi_from_pairs(alpha, theta, n, x, y) - direct) < tolerance
                assert abs(kernel_from_polynomials("jacobi", alpha, theta, n, x, y) - direct) < tolerance
    try:
        kernel_jacobi_from_pairs(0.0, 1.0, 2, 0.5, 0.0)
        assert False, "y = 0 should raise"
    except DomainError:
        pass
    print("✓ Jacobi kernel from polynomials works")


def test_konhauser_classical():
    """Test theta = 1 against generalized Laguerre polynomials."""
    print("Testing Konhauser classical reduction...")
    alpha = 0.5
    for n in range(6):
        for x in (0.3, 1.0, 4.5):
            laguerre = special.eval_genlaguerre(n, alpha, x)
            assert abs(konhauser_Y(alpha, 1.0, n)(x) - laguerre) < 1e-10
            z = konhauser_Z(alpha, 1.0, n)(x) * special.gamma(n + alpha + 1) / math.factorial(n)
            assert abs(z - laguerre) < 1e-10
    print("✓ Konhauser classical reduction works")


def test_konhauser_degrees():
    """Test degrees and the degree cap of the Konhauser polynomials."""
    print("Testing Konhauser degrees...")
    for n in range(8):
        assert konhauser_Z(0.5, 2.0, n).degree == n
        assert konhauser_Y(0.5, 2.0, n).degree == n
    try:
        konhauser_Y(0.5, 2.0, 13)
        assert False, "degree above 12 should raise"
    except DomainError:
        pass
    print("✓ Konhauser degrees work")


def test_konhauser_biorthonormality():
    """Test the Laguerre pairing of Z_m(x^theta) and Y_n(x)."""
    print("Testing Konhauser biorthonormality...")
    for alpha, theta in ((0.5, 2.0), (1.0, 0.5)):
        for m in range(3):
            for n in range(3):
                expected = 1.0 if m == n else 0.0
                assert abs(laguerre_pairing(alpha, theta, m, n, CONFIG) - expected) < 1e-7, (alpha, theta, m, n)
    print("✓ Konhauser pairs are biorthonormal")


def test_hermite_families():
    """Test parity and the real-line pairing of S and T."""
    print("Testing Hermite S and T families...")
    assert hermite_S(1.0, 0.5, 4).parity == "even"
    assert hermite_T(1.0, 0.5, 3).parity == "odd"
    assert hermite_T(1.0, 0.5, 3)(-0.7) == -hermite_T(1.0, 0.5, 3)(0.7)
    for alpha, theta in ((0.0, 1.0), (1.0, 2.0)):
        for m in range(4):
            for n in range(4):
                expected = 1.0 if m == n else 0.0
                assert abs(hermite_pairing(alpha, theta, m, n, CONFIG) - expected) < 1e-7, (alpha, theta, m, n)
    print("✓ Hermite S and T families work")


def test_kernels_from_polynomials():
    """Test the Laguerre and Hermite kernels as sums of polynomial products."""
    print("Testing kernels from polynomials...")
    for alpha, theta in ((0.5, 2.0), (1.5, 0.5)):
        for n in (1, 3, 5):
            for x, y in ((0.4, 1.3), (2.0, 0.5)):
                direct = kernel_laguerre(alpha, theta, n, x, y)
                rebuilt = kernel_from_polynomials("laguerre", alpha, theta, n, x, y)
                assert abs(rebuilt - direct) < 1e-8 * max(1.0, abs(direct))
            for x, y in ((-0.6, 1.1), (0.9, 0.9), (1.4, -0.2)):
                direct = kernel_hermite(alpha, theta, n, x, y)
                rebuilt = kernel_from_polynomials("hermite", alpha, theta, n, x, y)
                assert abs(rebuilt - direct) < 1e-8 * max(1.0, abs(direct))
    try:
        kernel_from_polynomials("gaussian", 0.0, 1.0, 2, 0.5, 0.5)
        assert False, "unknown family should raise"
    except DomainError:
        pass
    print("✓ Kernels from polynomials work")


def main():
    """Run all tests."""
    print("🧪 Running polynomial tests")
    print("=" * 50)

    try:
        test_general_pair()
        test_legendre_pair()
        test_pair_validation()
        test_polynomial_types()
        test_jacobi_pairs_and_kernel()
        test_konhauser_classical()
        test_konhauser_degrees()
        test_konhauser_biorthonormality()
        test_hermite_families()
        test_kernels_from_polynomials()

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
