#!/usr/bin/env python3
"""
End-to-end tests of the command-line interface in main.py
"""

import contextlib
import io
import json
import os
import tempfile

import pandas as pd

from biortho_engine import EnsembleSpec, LimitKernelParams, kernel, limit_kernel, limit_kernel_hermite
from biortho_engine.settings import series_config_from_env
from main import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main as cli, parse_grid

SAMPLE_ARGS = ["sample", "--family", "jacobi", "--alpha", "1", "--theta", "2", "--n", "3", "--seed", "7",
               "--steps", "300", "--burn-in", "50", "--thin", "5", "--chains", "2", "--bins", "6"]


def run(argv):
    """Run the CLI and capture (exit code, stdout)."""
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        try:
            code = cli(argv)
        except SystemExit as e:
            code = e.code
    return code, out.getvalue()


def test_kernel_grid():
    """Test a finite-N kernel table on a 4 x 4 grid."""
    print("Testing kernel grid...")
    code, output = run(["kernel", "--family", "laguerre", "--alpha", "0", "--theta", "1", "--n", "5",
                        "--grid", "0.5:2:4"])
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(output))
    assert list(frame.columns) == ["x", "y", "value"]
    assert len(frame) == 16
    print("✓ Kernel grid works")


def test_kernel_values_match_library():
    """Test that printed kernel values are exactly the library's values."""
    print("Testing CLI kernel values against the library...")
    code, output = run(["kernel", "--family", "laguerre", "--alpha", "0.5", "--theta", "2", "--n", "4",
                        "--grid", "0.3:1.7:3"])
    assert code == EXIT_OK
    frame = pd.read_csv(io.StringIO(output), float_precision="round_trip")
    spec = EnsembleSpec("laguerre", 0.5, 2.0, 4)
    axis = parse_grid("0.3:1.7:3")
    expected = [kernel(spec, x, y) for x in axis for y in axis]
    assert list(frame["value"]) == expected

    config = series_config_from_env()
    code, output = run(["kernel", "--limit", "--family", "jacobi", "--alpha", "1", "--theta", "0.5",
                        "--x", "0.7", "--y", "1.9"])
    assert code == EXIT_OK
    value = pd.read_csv(io.StringIO(output), float_precision="round_trip")["value"][0]
    assert value == limit_kernel(LimitKernelParams(1.0, 0.5), 0.7, 1.9, config=config)

    code, output = run(["kernel", "--limit", "--family", "hermite", "--alpha", "0", "--theta", "2",
                        "--x", "-0.4", "--y", "0.8"])
    assert code == EXIT_OK
    value = pd.read_csv(io.StringIO(output), float_precision="round_trip")["value"][0]
    assert value == limit_kernel_hermite(LimitKernelParams(0.0, 2.0), -0.4, 0.8, config=config)
    print("✓ CLI kernel values match the library exactly")


def test_kernel_output_and_manifest():
    """Test a limit-kernel value written to a file with its manifest."""
    print("Testing kernel output file and manifest...")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "limit.csv")
        code, _ = run(["kernel", "--limit", "--family", "jacobi", "--alpha", "0", "--theta", "1",
                       "--x", "1", "--y", "1", "--output", path])
        assert code == EXIT_OK
        frame = pd.read_csv(path)
        assert len(frame) == 1 and frame["value"][0] > 0
        with open(path + ".manifest.json") as f:
            manifest = json.load(f)
        assert manifest["subcommand"] == "kernel"
        assert manifest["params"]["family"] == "jacobi"
        assert manifest["outputs"] == [path]
        assert manifest["duration_seconds"] >= 0
        assert manifest["version"]
    print("✓ Kernel output and manifest work")


def test_usage_errors():
    """Test exit status 2 for malformed and out-of-domain input."""
    print("Testing usage errors...")
    for argv in (["kernel", "--family", "jacobi", "--alpha", "0", "--theta", "1", "--n", "3", "--grid", "0.5:2"],
                 ["kernel", "--family", "jacobi", "--alpha", "-2", "--theta", "1", "--n", "3", "--x", "0.5",
                  "--y", "0.5"],
                 ["kernel", "--family", "jacobi", "--alpha", "0", "--theta", "1", "--x", "0.5", "--y", "0.5"],
                 ["kernel", "--family", "gaussian", "--alpha", "0", "--theta", "1", "--n", "3"],
                 ["verify", "--suite", "numerics", "--rel-tol", "1e-20"]):
        code, _ = run(argv)
        assert code == EXIT_USAGE, argv
    print("✓ Usage errors exit with 2")


def test_verify():
    """Test suite listing, a passing suite and a failing one."""
    print("Testing verify...")
    code, output = run(["verify", "--list"])
    assert code == EXIT_OK
    assert output.split() == ["numerics", "special", "gram", "kernels", "polynomials", "symmetry", "scaling"]
    code, output = run(["verify", "--suite", "numerics"])
    assert code == EXIT_OK
    verdict = json.loads(output)
    assert verdict["passed"] and list(verdict["suites"]) == ["numerics"]
    # five terms cannot sum the exponential series to 1e-12
    code, output = run(["verify", "--suite", "numerics", "--max-terms", "5", "--pretty"])
    assert code == EXIT_FAILED
    assert "❌ exponential_series" in output
    print("✓ Verify works")


def test_verify_all_suites():
    """Test that verify without --suite runs every suite and passes."""
    print("Testing verify over all suites...")
    code, output = run(["verify"])
    verdict = json.loads(output)
    assert list(verdict["suites"]) == ["numerics", "special", "gram", "kernels", "polynomials", "symmetry",
                                       "scaling"]
    failed = [c["name"] for checks in verdict["suites"].values() for c in checks if not c["passed"]]
    assert failed == [], failed
    assert verdict["passed"]
    assert code == EXIT_OK
    print("✓ Verify over all suites passes")


def test_converge():
    """Test a small convergence study and its three output files."""
    print("Testing converge...")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "conv.csv")
        code, output = run(["converge", "--family", "laguerre", "--alpha", "0", "--theta", "1",
                            "--n-list", "10,20", "--grid", "0.5:1.5:2", "--output", path])
        assert code == EXIT_OK
        assert "SCALING-LIMIT CONVERGENCE" in output
        assert len(pd.read_csv(path)) == 8
        with open(os.path.join(tmp, "conv.json")) as f:
            summary = json.load(f)
        assert summary["n_list"] == [10, 20]
        with open(path + ".manifest.json") as f:
            assert len(json.load(f)["outputs"]) == 2
    print("✓ Converge works")


def test_sample_determinism():
    """Test that a seeded run reproduces its sample file byte for byte."""
    print("Testing sample determinism...")
    with tempfile.TemporaryDirectory() as tmp:
        first = os.path.join(tmp, "a.csv")
        second = os.path.join(tmp, "b.csv")
        assert run(SAMPLE_ARGS + ["--output", first])[0] == EXIT_OK
        assert run(SAMPLE_ARGS + ["--output", second])[0] == EXIT_OK
        with open(first) as f, open(second) as g:
            assert f.read() == g.read()
        rho1 = pd.read_csv(first + ".rho1.csv")
        assert list(rho1.columns) == ["bin", "lo", "hi", "empirical", "predicted", "sigma"]
        assert len(rho1) == 6
        with open(first + ".manifest.json") as f:
            manifest = json.load(f)
        assert manifest["seed"] == 7
        assert manifest["outputs"] == [first, first + ".rho1.csv"]
    print("✓ Sampling is reproducible")


def test_sample_binary():
    """Test the binary container and the rho2 table."""
    print("Testing binary samples...")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "samples.bin")
        code, output = run(SAMPLE_ARGS + ["--format", "binary", "--rho2-bins", "3", "--output", path])
        assert code == EXIT_OK
        assert "METROPOLIS SAMPLING" in output
        with open(path, "rb") as f:
            assert f.read(4) == b"BIOE"
        rho2 = pd.read_csv(path + ".rho2.csv")
        assert len(rho2) == 9
    print("✓ Binary samples work")


def main():
    """Run all tests."""
    print("🧪 Running command-line tests")
    print("=" * 50)

    try:
        test_kernel_grid()
        test_kernel_values_match_library()
        test_kernel_output_and_manifest()
        test_usage_errors()
        test_verify()
        test_verify_all_suites()
        test_converge()
        test_sample_determinism()
        test_sample_binary()

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
