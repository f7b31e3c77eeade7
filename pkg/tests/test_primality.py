"""Test drivers: verdicts, traces, parameter tables, screens, reasons."""

import pytest

from etaprime import (
    Form,
    Natural,
    build_modulus,
    fermat_double_test,
    fermat_eta_test,
    gk_test,
    hk_test,
    jacobi,
    pepin_test,
    run_test,
    select_params,
)
from etaprime.oracle import miller_rabin

# F_1..F_4 prime, F_5..F_8 composite: frozen reference classification
_FERMAT_STATUS = {k: k <= 4 for k in range(1, 9)}


@pytest.mark.parametrize("k", sorted(_FERMAT_STATUS))
def test_pepin_all_small_k(k):
    r = pepin_test(k)
    assert r.verdict.is_prime == _FERMAT_STATUS[k]
    assert r.iterations == (1 << k) - 1
    if not _FERMAT_STATUS[k]:
        assert r.verdict.reason == "pepin-failure"
        assert r.verdict.witness is None


@pytest.mark.parametrize("k", sorted(_FERMAT_STATUS))
def test_eta_all_small_k(k):
    r = fermat_eta_test(k)
    if k == 1:
        assert r.verdict.status == "not-applicable"
        return
    assert r.verdict.is_prime == _FERMAT_STATUS[k]
    if r.verdict.is_prime:
        assert r.iterations == (1 << k) - 1


@pytest.mark.parametrize("k", sorted(_FERMAT_STATUS))
def test_double_all_small_k(k):
    r = fermat_double_test(k)
    if k == 1:
        assert r.verdict.status == "not-applicable"
        return
    assert r.verdict.is_prime == _FERMAT_STATUS[k]
    if r.verdict.is_prime:
        assert r.iterations == (1 << (k - 1)) - 1


def test_na_details_name_the_tiny_prime():
    assert "F_1 = 5" in fermat_eta_test(1).verdict.detail
    assert "F_1 = 5" in fermat_double_test(1).verdict.detail
    assert "G_1 = 13" in gk_test(1).verdict.detail
    assert "H_1 = 5" in hk_test(1).verdict.detail


def test_frozen_trace_f2_eta():
    r = fermat_eta_test(2, with_trace=True)
    assert r.trace == ["5", "4", "1", "0"]
    assert r.iterations == 3


def test_frozen_trace_f2_double():
    r = fermat_double_test(2, with_trace=True)
    assert r.trace == ["5", "16"]
    assert r.iterations == 1


def test_frozen_trace_g2():
    r = gk_test(2, with_trace=True)
    assert r.trace == ["7", "25", "9", "40"]
    # 40 == -1 == -sqrt(m) (mod 41)
    assert r.verdict.is_prime


def test_trace_length_bounded():
    r = fermat_eta_test(8, with_trace=True)  # 255 steps -> 256 states
    assert r.iterations == 255
    assert len(r.trace) == 129
    assert r.trace[64] == "..."
    assert r.trace[0] == "5"
    assert r.trace[-1] != "..."


def test_trace_short_runs_uncapped():
    r = gk_test(9, with_trace=True)
    assert len(r.trace) == r.iterations + 1
    assert "..." not in r.trace


def test_gk_hk_match_miller_rabin_to_60():
    for k in range(2, 61):
        g = gk_test(k)
        assert g.verdict.is_prime == miller_rabin(int(build_modulus("g", k).value)), k
        h = hk_test(k)
        assert h.verdict.is_prime == miller_rabin(int(build_modulus("h", k).value)), k


def test_screen_witnesses_divide():
    for k in (3, 4, 7, 8):  # k == 0,3 (mod 4)
        r = gk_test(k)
        assert r.verdict.reason == "known-divisor"
        assert int(r.verdict.witness) == 5
        assert int(build_modulus("g", k).value) % 5 == 0
        assert r.iterations == 0
    for k in (2, 5, 6, 9):  # k == 1,2 (mod 4)
        r = hk_test(k)
        assert int(r.verdict.witness) == 5
        assert int(build_modulus("h", k).value) % 5 == 0
    for k in (4, 16, 28):  # k == 4 (mod 12)
        r = hk_test(k)
        assert int(r.verdict.witness) == 13
        assert int(build_modulus("h", k).value) % 13 == 0


def test_factor_found_at_driver_level():
    # H_7 = 13 * 41 * 61: a step denominator collides with 13 mid-run
    r = hk_test(7)
    assert r.verdict.is_composite
    assert r.verdict.reason == "factor-found"
    assert int(r.verdict.witness) == 13
    assert r.iterations == 3


def test_midrun_collapse_is_composite_immediately():
    # no small instance collapses organically, so drive the runner with
    # a start already on 2-torsion: x = 1 maps to (0, 0) in one step
    from etaprime import CurveParams, Finite, build_modulus, eta_step, i_unit
    from etaprime.primality import _run_steps

    n = build_modulus("f", 5)
    cp = CurveParams(n, 1)
    iu = i_unit(n)
    state, executed, factor, collapsed, trace = _run_steps(
        lambda s: eta_step(s, cp, iu), n.residue(1), 31, True
    )
    assert collapsed and factor is None
    assert executed == 1
    assert trace == ["1", "0"]


def test_full_run_composite_reason():
    r = fermat_eta_test(5)
    assert r.verdict.is_composite
    assert r.verdict.reason == "nonzero-final"
    assert r.verdict.witness is None
    assert r.iterations == 31


def test_select_params_fermat():
    p = select_params("f", 4)
    assert (int(p.m_root), int(p.x0), p.iterations, p.accept) == (1, 5, 15, "zero")
    with pytest.raises(ValueError):
        select_params("f", 1)


def test_select_params_g_classes():
    assert int(select_params("g", 2).x0) == 7  # k == 2 (mod 4), m = 1
    assert int(select_params("g", 6).x0) == 7
    p = select_params("g", 5)  # k == 1 (mod 4), m = 3^4
    assert (int(p.m_root), int(p.x0)) == (3, 5)
    for k in (3, 4):
        with pytest.raises(ValueError):
            select_params("g", k)


def test_select_params_h_classes():
    p = select_params("h", 3)  # k == 3 (mod 4)
    assert (int(p.m_root), int(p.x0)) == (1, 5)
    for k in (2, 5, 16):  # screened classes
        with pytest.raises(ValueError):
            select_params("h", k)


_H_ROWS_48 = {8: (19, 104), 12: (20, 85), 20: (2, 13), 24: (21, 1799),
              36: (25, 6057), 44: (43, 673)}
_H_ROWS_144 = {32: (6, 73), 48: (18, 114), 80: (5, 13), 96: (99, 1299),
               128: (65, 26)}


@pytest.mark.parametrize("k", sorted(_H_ROWS_48))
def test_h_table_mod48_rows(k):
    p = select_params("h", k)
    assert (int(p.m_root), int(p.x0)) == _H_ROWS_48[k]
    _check_start_conditions("h", k, p)


@pytest.mark.parametrize("k", sorted(_H_ROWS_144))
def test_h_table_mod144_rows(k):
    p = select_params("h", k)
    assert (int(p.m_root), int(p.x0)) == _H_ROWS_144[k]
    _check_start_conditions("h", k, p)


def _check_start_conditions(form, k, p):
    """x0 a QNR and x0^3 - m*x0 a QR: required whenever N is prime."""
    n = build_modulus(form, k)
    if not miller_rabin(int(n.value)):
        return
    m = int(p.m_root) ** 4
    x0 = int(p.x0)
    assert jacobi(x0, n.value) == -1
    assert jacobi((x0 ** 3 - m * x0) % int(n.value), n.value) == 1


def test_h_search_path_k144():
    p = select_params("h", 144)
    n = build_modulus("h", 144)
    m = int(p.m_root) ** 4
    x0 = int(p.x0)
    # the search enforces these unconditionally
    assert jacobi(x0, n.value) == -1
    assert jacobi((x0 ** 3 - m * x0) % int(n.value), n.value) == 1
    assert hk_test(144).verdict.is_prime == miller_rabin(int(n.value))


def test_run_test_auto_dispatch():
    assert run_test("f", 3).method == "double"
    assert run_test("g", 2).method == "eta"
    assert run_test("h", 3).method == "eta"
    assert run_test("f", 3, "pepin").method == "pepin"
    assert run_test(Form.F, 3, "eta").method == "eta"


def test_run_test_rejects_bad_methods():
    with pytest.raises(ValueError):
        run_test("g", 2, "pepin")
    with pytest.raises(ValueError):
        run_test("h", 2, "double")
    with pytest.raises(ValueError):
        run_test("f", 2, "nope")
    with pytest.raises(ValueError):
        run_test("x", 2)


def test_report_shape():
    r = run_test("g", 5)
    assert r.form is Form.G and r.k == 5
    assert r.digits == len(str(int(build_modulus("g", 5).value)))
    assert r.elapsed_s >= 0
    assert r.trace is None  # not requested


def test_witness_always_divides():
    for k in (5, 6, 7, 8):
        r = fermat_eta_test(k)
        if r.verdict.witness is not None:
            n = int(build_modulus("f", k).value)
            w = int(r.verdict.witness)
            assert 1 < w < n and n % w == 0
