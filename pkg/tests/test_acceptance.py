"""End-to-end acceptance battery: seven criteria, one test function each,
so the verbose run shows one pass/fail line per criterion.

Every expected value here was produced by the independent oracle side
(Python-int arithmetic, affine curve arithmetic, Miller-Rabin) and frozen;
the engine under test never generates its own expectations.
"""

import csv
import io
import math
import subprocess
import sys
import time

from etaprime import (
    build_modulus,
    fermat_double_test,
    fermat_eta_test,
    gk_test,
    hk_test,
    jacobi,
    pepin_test,
    select_params,
)
from etaprime.oracle import miller_rabin, verify_step_properties, verify_structure


def test_criterion_1_known_fermat_classification():
    """F_1..F_4 prime and F_5..F_12 composite under all three methods."""
    for k in range(1, 13):
        expected_prime = k <= 4
        assert pepin_test(k).verdict.is_prime == expected_prime, ("pepin", k)
        for fn in (fermat_eta_test, fermat_double_test):
            r = fn(k)
            if k == 1:
                assert r.verdict.status == "not-applicable", (fn.__name__, k)
            else:
                assert r.verdict.is_prime == expected_prime, (fn.__name__, k)
    print("criterion 1: F_1..F_12 classified correctly by pepin/eta/double")


def test_criterion_2_desk_traces():
    """Frozen x-coordinate chains for the tiny worked instances."""
    assert fermat_eta_test(2, with_trace=True).trace == ["5", "4", "1", "0"]
    assert fermat_double_test(2, with_trace=True).trace == ["5", "16"]
    assert gk_test(2, with_trace=True).trace == ["7", "25", "9", "40"]
    print("criterion 2: desk traces match the frozen fixtures")


def test_criterion_3_oracle_agreement_sweep():
    """gk/hk verdicts == Miller-Rabin for k = 2..600; screens == direct
    divisibility for k <= 10^4."""
    mismatches = []
    for k in range(2, 601):
        for form, fn in (("g", gk_test), ("h", hk_test)):
            got = fn(k).verdict.is_prime
            want = miller_rabin(int(build_modulus(form, k).value))
            if got != want:
                mismatches.append((form, k, got, want))
    assert not mismatches, mismatches[:10]
    for k in range(1, 10001):
        g5 = (pow(2, 2 * k + 1, 5) + pow(2, k + 1, 5) + 1) % 5 == 0
        assert g5 == (k % 4 in (0, 3)), k
        h5 = (pow(2, 2 * k + 1, 5) - pow(2, k + 1, 5) + 1) % 5 == 0
        assert h5 == (k % 4 in (1, 2)), k
        if k % 12 == 4:
            assert (pow(2, 2 * k + 1, 13) - pow(2, k + 1, 13) + 1) % 13 == 0, k
    print("criterion 3: 1198 curve verdicts match Miller-Rabin; screens "
          "match divisibility to k = 10^4")


def test_criterion_4_curve_group_structure():
    """#E = p+1-2a for every p == 1 (mod 4) < 10^4 and every fourth-power
    m, plus exact invariant factors at p = 17, 41, 113."""
    r = verify_structure(p_max=10000)
    assert r["ok"], r["mismatches"][:10]
    assert r["structures"][17] == (4, 4)
    assert r["structures"][41] == (4, 8)
    assert r["structures"][113] == (8, 16)
    print("criterion 4: %d (p, m) curve counts and all pinned invariant "
          "factors reproduced" % r["pairs_checked"])


def test_criterion_5_property_suites():
    """i_unit, eta-squared, affine agreement, and reduction properties."""
    r = verify_step_properties(samples=500, seed=11, reduce_samples=30000)
    assert r["ok"], r["failures"][:10]
    # G/H cover k <= 1000; F stops at k = 16 (an F_k operand has 2^k
    # bits, so k = 1000 is not a number this machine can hold)
    assert r["i_unit_checked"] == 16 + 1000 + 1000
    assert r["eta_square_samples"] >= 500
    assert r["eta_affine_samples"] >= 500
    assert r["double_affine_samples"] >= 500
    assert r["reduce_checked"] == 30000  # 10^4 per form
    print("criterion 5: property suites all green "
          "(%d eta samples, %d reductions)"
          % (r["eta_square_samples"], r["reduce_checked"]))


def test_criterion_6_h_table_coverage():
    """Every residue-class row of both parameter tables plus the search
    fallback, with the start-point conditions holding on primes."""
    rows48 = {8: (19, 104), 12: (20, 85), 20: (2, 13), 24: (21, 1799),
              36: (25, 6057), 44: (43, 673)}
    rows144 = {32: (6, 73), 48: (18, 114), 80: (5, 13), 96: (99, 1299),
               128: (65, 26)}
    for k, row in sorted({**rows48, **rows144}.items()):
        p = select_params("h", k)
        assert (int(p.m_root), int(p.x0)) == row, k
        n = build_modulus("h", k)
        r = hk_test(k)
        assert r.verdict.is_prime == miller_rabin(int(n.value)), k
        if miller_rabin(int(n.value)):
            m, x0 = int(p.m_root) ** 4, int(p.x0)
            assert jacobi(x0, n.value) == -1, k
            assert jacobi((x0 ** 3 - m * x0) % int(n.value), n.value) == 1, k
    for k in (144, 288):  # k == 0 (mod 144): search path
        p = select_params("h", k)
        n = build_modulus("h", k)
        m, x0 = int(p.m_root) ** 4, int(p.x0)
        assert jacobi(x0, n.value) == -1, k
        assert jacobi((x0 ** 3 - m * x0) % int(n.value), n.value) == 1, k
        assert hk_test(k).verdict.is_prime == miller_rabin(int(n.value)), k
    print("criterion 6: all 11 table rows and both search-path indices "
          "exercised with valid start conditions")


def test_criterion_7_performance_sanity():
    """Per-step cost grows no worse than quadratically in bit length, and
    the bench CSV is deterministic."""
    sizes = []
    for k in range(8, 13):
        t0 = time.perf_counter()
        r = fermat_eta_test(k)
        elapsed = time.perf_counter() - t0
        assert r.iterations == (1 << k) - 1
        bits = (1 << k) + 1
        sizes.append((math.log(bits), math.log(elapsed / r.iterations)))
    xs = [s[0] for s in sizes]
    ys = [s[1] for s in sizes]
    n = len(sizes)
    xbar, ybar = sum(xs) / n, sum(ys) / n
    slope = sum((x - xbar) * (y - ybar) for x, y in sizes) / sum(
        (x - xbar) ** 2 for x in xs
    )
    assert slope <= 2.25, "per-step cost slope %.2f vs bit length" % slope

    def bench():
        p = subprocess.run(
            [sys.executable, "-m", "etaprime.cli", "bench", "--form", "g",
             "--k", "2..20"],
            capture_output=True, text=True, timeout=570,
        )
        assert p.returncode == 0
        rows = list(csv.reader(io.StringIO(p.stdout)))
        return [r[:4] + r[5:] for r in rows]  # all but elapsed_ms

    assert bench() == bench()
    print("criterion 7: per-step scaling slope within quadratic; "
          "bench CSV deterministic")
