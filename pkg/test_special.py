#!/usr/bin/env python3
"""
Tests for Wright's generalized Bessel function and the limit kernels.
"""

import math

import numpy as np
from scipy import special

from biortho_engine.errors import DomainError
from biortho_engine.numerics import SeriesConfig
from biortho_engine.special import (LimitKernelParams, bessel_kernel, limit_kernel, limit_kernel_hermite,
                                    sine_kernel, wright_bessel, wright_bessel_array)


def test_wright_bessel_identity():
    """Test x^(a/2) J_{a+1,1}(x) = J_a(2 sqrt x)."""
    print("Testing Wright-Bessel identity...")
    for a in (0.0, 0.5, 1.0, 2.3):
        for x in (0.1, 1.0, 5.0, 20.0):
            value = x ** (a / 2) * wright_bessel(a + 1, 1, x)
            assert abs(value - special.jv(a, 2 * math.sqrt(x))) < 1e-10, (a, x)
    print("✓ Wright-Bessel identity works")


def test_wright_bessel_values():
    """Test special values, negative arguments and the array evaluator."""
    print("Testing Wright-Bessel values...")
    # J_{1,1}(-x) = sum x^m / m!^2 and J_{a,b}(0) = 1/Gamma(a)
    assert abs(wright_bessel(1.0, 1.0, -1.0) - special.iv(0, 2.0)) < 1e-13
    assert abs(wright_bessel(2.5, 0.7, 0.0) - 1 / special.gamma(2.5)) < 1e-15
    assert wright_bessel(0.0, 1.0, 0.0) == 0.0
    for a, b in ((1.0, 0.5), (1.5, 2.0)):
        for x in (0.2, 1.0, 4.0):
            exact = special.wright_bessel(b, a, x)
            assert abs(wright_bessel(a, b, -x) / exact - 1) < 1e-10
    xs = np.array([0.0, 0.5, 3.0, 12.0])
    array = wright_bessel_array(1.5, 0.5, xs)
    assert array.shape == xs.shape
    for x, value in zip(xs, array):
        assert abs(value - wright_bessel(1.5, 0.5, x)) < 1e-12
    try:
        wright_bessel(1.0, 0.0, 1.0)
        assert False, "b <= 0 should raise"
    except DomainError as e:
        assert "b must be > 0" in str(e)
    print("✓ Wright-Bessel values work")


def test_wright_bessel_pole_parameters():
    """Test negative integer a, where the series opens on poles of 1/Gamma."""
    print("Testing Wright-Bessel at pole parameters...")
    # x^((a-1)/2) J_{a,1}(x) = J_{a-1}(2 sqrt x), and J_{-n} = (-1)^n J_n
    assert abs(wright_bessel(-2.0, 1.0, 1.0) + special.jv(3, 2.0)) < 1e-13
    for x in (0.5, 1.0, 4.0):
        root = 2 * math.sqrt(x)
        assert abs(wright_bessel(-2.0, 1.0, x) + x ** 1.5 * special.jv(3, root)) < 1e-12, x
        assert abs(wright_bessel(-1.0, 1.0, x) - x * special.jv(2, root)) < 1e-12, x
    assert wright_bessel(-2.0, 1.0, 0.0) == 0.0
    print("✓ Wright-Bessel at pole parameters works")


def test_limit_kernel_methods_agree():
    """Test the double series against the integral representation."""
    print("Testing limit kernel series vs quadrature...")
    config = SeriesConfig(rel_tol=1e-11, abs_tol=1e-13)
    for alpha, theta in ((0.0, 1.0), (0.5, 2.0), (1.5, 0.5)):
        p = LimitKernelParams(alpha, theta)
        for x, y in ((0.4, 0.9), (1.5, 0.6), (2.0, 2.0)):
            series = limit_kernel(p, x, y, method="series")
            quadrature = limit_kernel(p, x, y, method="quadrature", config=config)
            assert abs(series - quadrature) <= 1e-9 * max(1.0, abs(series)), (alpha, theta, x, y)
            assert limit_kernel(p, x, y) == series
    print("✓ Limit kernel methods agree")


def test_limit_kernel_at_origin():
    """Test K(0, 0) = theta / (Gamma((a+1)/theta) Gamma(a+1) (a+1))."""
    print("Testing limit kernel at the origin...")
    for alpha, theta in ((0.0, 1.0), (0.5, 2.0), (1.5, 0.5)):
        expected = theta / (special.gamma((alpha + 1) / theta) * special.gamma(alpha + 1) * (alpha + 1))
        value = limit_kernel(LimitKernelParams(alpha, theta), 0.0, 0.0)
        assert abs(value - expected) < 1e-14
    print("✓ Limit kernel at the origin works")


def test_bessel_reduction():
    """Test (xy)^(a/2) K^(a,1)(x, y) against the classical Bessel kernel."""
    print("Testing Bessel-kernel reduction...")
    points = [0.5, 1.3, 2.2, 3.1, 4.0]
    for alpha in (0.0, 0.5, 2.0):
        p = LimitKernelParams(alpha, 1.0)
        for x in points:
            for y in points + [x + 1e-5]:
                value = (x * y) ** (alpha / 2) * limit_kernel(p, x, y)
                assert abs(value - bessel_kernel(alpha, x, y)) < 1e-8, (alpha, x, y)
    print("✓ Bessel-kernel reduction works")


def test_bessel_kernel_diagonal():
    """Test continuity of the Bessel kernel across the diagonal."""
    print("Testing Bessel kernel diagonal...")
    for alpha in (0.0, 1.5):
        on = bessel_kernel(alpha, 2.0, 2.0)
        near = bessel_kernel(alpha, 2.0, 2.0 + 1e-4)
        assert on > 0
        assert abs(on - near) < 1e-3
    try:
        bessel_kernel(0.0, 0.0, 1.0)
        assert False, "x = 0 should raise"
    except DomainError:
        pass
    print("✓ Bessel kernel diagonal works")


def test_sine_reduction():
    """Test K^Her(0,1)(x, y) = sin(2(x-y)) / (pi (x-y))."""
    print("Testing sine-kernel reduction...")
    p = LimitKernelParams(0.0, 1.0)
    grid = np.linspace(-2.0, 2.0, 9)
    for x in grid:
        for y in grid:
            expected = 2 / math.pi * sine_kernel(2 * x / math.pi, 2 * y / math.pi)
            assert abs(limit_kernel_hermite(p, x, y) - expected) < 1e-8, (x, y)
    assert sine_kernel(0.3, 0.3) == 1.0
    print("✓ Sine-kernel reduction works")


def test_hermite_parameters():
    """Test the parity parameters of the bulk kernel."""
    print("Testing Hermite parity parameters...")
    p = LimitKernelParams(1.0, 0.5)
    assert p.hermite_even() == LimitKernelParams(0.0, 0.5)
    assert p.hermite_odd() == LimitKernelParams(0.75, 0.5)
    # even in (x, y) -> (-x, -y) only through the odd part's sign
    value = limit_kernel_hermite(LimitKernelParams(0.5, 2.0), 0.7, -0.4)
    flipped = limit_kernel_hermite(LimitKernelParams(0.5, 2.0), -0.7, 0.4)
    assert abs(value - flipped) < 1e-13
    print("✓ Hermite parity parameters work")


def test_limit_kernel_domain():
    """Test argument and method validation."""
    print("Testing limit kernel domain...")
    p = LimitKernelParams(0.0, 1.0)
    for call in (lambda: limit_kernel(p, -1.0, 1.0), lambda: limit_kernel(p, 1.0, 1.0, method="exact"),
                 lambda: LimitKernelParams(-2.0, 1.0), lambda: LimitKernelParams(0.0, -1.0)):
        try:
            call()
            assert False, "invalid input should raise"
        except DomainError:
            pass
    print("✓ Limit kernel domain checks work")


def main():
    """Run all tests."""
    print("🧪 Running special-function tests")
    print("=" * 50)

    try:
        test_wright_bessel_identity()
        test_wright_bessel_values()
        test_wright_bessel_pole_parameters()
        test_limit_kernel_methods_agree()
        test_limit_kernel_at_origin()
        test_bessel_reduction()
        test_bessel_kernel_diagonal()
        test_sine_reduction()
        test_hermite_parameters()
        test_limit_kernel_domain()

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
