"""Paturi formula, pattern matrices, rank facts, embeddings, reports."""

import math

import numpy as np
import pytest

from ccx import pif
from ccx.bounds.fieldmatrix import (
    disj_slice_values,
    eq_slice_values,
    matrix_from_values,
    pif_matrix,
    rank_rational,
    weight_slice_matrix,
)
from ccx.bounds.logrank import all_views, logrank_embedding_bound, verify_embedding
from ccx.bounds.paturi import fkl_predicate, paturi_gamma
from ccx.bounds.pattern import check_pattern_submatrix, pattern_dimensions, pattern_matrix
from ccx.bounds.report import report_bounds
from ccx.errors import NoBound, NoTransition, ParameterError
from ccx.pif import SetIncParams, constant_table, disj_table, eq_table, make_setinc


# ---------------------------------------------------------------------------
# Paturi


def test_paturi_fkl_examples():
    g, adeg = paturi_gamma(fkl_predicate(6, 5))  # k=6, l=5/2
    assert g == 1 and abs(adeg - math.sqrt(30)) < 1e-12
    pred = np.array([1] * 4 + [-1] * 5, dtype=np.int8)
    assert paturi_gamma(pred)[0] == 1
    pred = np.array([-1] + [1] * 8, dtype=np.int8)
    g, adeg = paturi_gamma(pred)
    assert g == 7 and abs(adeg - math.sqrt(8)) < 1e-12


def test_paturi_gamma_equals_k_minus_2l():
    for k in range(1, 21):
        for l2 in range(1, k + 1, 2):
            g, _ = paturi_gamma(fkl_predicate(k, l2))
            assert g == k - l2


def test_paturi_no_transition():
    with pytest.raises(NoTransition):
        paturi_gamma(np.array([1, 1, 1], dtype=np.int8))
    with pytest.raises(NoTransition):
        paturi_gamma(np.array([1, 0, -1], dtype=np.int8))  # gap breaks adjacency


def test_fkl_validation():
    assert fkl_predicate(4, 3).tolist() == [0, -1, 1, 0, 0]
    assert fkl_predicate(2, 1).tolist() == [-1, 1, 0]
    with pytest.raises(ParameterError):
        fkl_predicate(4, 5)  # l > k/2
    with pytest.raises(ParameterError):
        fkl_predicate(4, 2)  # not a half-integer


# ---------------------------------------------------------------------------
# Pattern matrix


def test_pattern_dimensions_and_caps():
    assert pattern_dimensions(4, 2) == (16, 16)
    with pytest.raises(ParameterError):
        pattern_dimensions(4, 3)
    with pytest.raises(ParameterError):
        pattern_dimensions(4, 4)  # block size 1
    with pytest.raises(ParameterError):
        pattern_matrix(24, 2, np.ones(4, dtype=np.int8))  # over the size cap


def test_pattern_constant_function():
    P = pattern_matrix(4, 2, np.full(4, -1, dtype=np.int8))
    assert (P == -1).all()


def test_pattern_submatrix_k23():
    for k in (2, 3):
        for l2 in range(1, k + 1, 2):
            r = check_pattern_submatrix(k, l2)
            assert r["mismatched"] == 0
            assert r["defined"] > 0


# ---------------------------------------------------------------------------
# Rank facts


def test_disj_eq_slice_ranks():
    for n in range(2, 11):
        for k in range(1, min(3, n // 2) + 1):
            c = math.comb(n, k)
            assert matrix_from_values(disj_slice_values(n, k), "zero_one").rank() == c
            assert matrix_from_values(eq_slice_values(n, k), "zero_one").rank() == c
            assert matrix_from_values(disj_slice_values(n, k), "pm1").rank() >= c - 1
            assert matrix_from_values(eq_slice_values(n, k), "pm1").rank() >= c - 1


def test_disj_weight1_is_J_minus_I():
    m = matrix_from_values(disj_slice_values(4, 1), "zero_one")
    assert (np.asarray(m.data, dtype=np.int64) == (np.ones((4, 4)) - np.eye(4))).all()
    assert m.rank() == 4


def test_rank_rational_cross_check():
    vals = disj_slice_values(6, 2)
    m01 = matrix_from_values(vals, "zero_one")
    as_int = np.asarray(m01.data, dtype=np.int64)
    assert rank_rational(as_int) == m01.rank() == 15


def test_weight_slice_of_table_matches_builders():
    f = disj_table(6)
    m = weight_slice_matrix(f, 2, 2, "pm1")
    direct = matrix_from_values(disj_slice_values(6, 2), "pm1")
    assert np.array_equal(np.asarray(m.data), np.asarray(direct.data))


def test_pif_matrix_requires_total_for_pm1():
    part = make_setinc(SetIncParams(4, 2, 2, 2, 2, variant="esetinc"))
    with pytest.raises(ParameterError):
        pif_matrix(part, "pm1")


def test_pif_matrix_rank_of_eq():
    # EQ as a PI function is -1 exactly on the diagonal: full rank
    f = eq_table(6)
    assert pif_matrix(f, "pm1").rank() == 64


# ---------------------------------------------------------------------------
# Embedding bounds


def test_disj8_embeddings():
    f = disj_table(8)
    lb = logrank_embedding_bound(f)
    d1 = [e for e in lb.witnesses if e.kind == "disj1" and e.a == 1 and e.b == 1]
    assert any(e.bound == 7 for e in d1)  # n' - 1 with n' = 8
    assert lb.value >= 7
    for e in lb.witnesses:
        r = verify_embedding(f, e)
        assert r.get("mismatched", 0) == 0


def test_eq8_case3_embedding():
    f = eq_table(8)
    lb = logrank_embedding_bound(f)
    hits = [
        e
        for e in lb.witnesses
        if e.kind == "eq" and (e.a, e.b) == (3, 3) and not (e.view.cx or e.view.cy or e.view.swap)
    ]
    assert any(e.m == 8 and e.w == 3 and e.bound == math.comb(8, 3) - 1 for e in hits)


def test_embedding_bound_is_sound_against_actual_rank():
    for f in (disj_table(7), eq_table(7)):
        lb = logrank_embedding_bound(f)
        assert pif_matrix(f, "pm1").rank() >= lb.value


def test_trivial_function_has_no_bound():
    with pytest.raises(NoBound):
        logrank_embedding_bound(constant_table(5, 1))


def test_views_are_consistent_reindexings():
    f = disj_table(5)
    for view in all_views(f):
        for x in range(32):
            for y in range(0, 32, 5):
                x0, y0 = view.to_original(x, y)
                assert view.table.eval(x, y, 5, 5) == f.eval(x0, y0, 5, 5)


# ---------------------------------------------------------------------------
# Reports


def test_report_disj12():
    f = disj_table(12)
    rep = report_bounds(f, measured_trials=4, include_rank=True)
    assert abs(rep["measure"]["m"] - math.sqrt(7)) < 1e-9
    assert rep["measure"]["witness"] == {"a": 4, "b": 4, "c2": 1, "g2": 1}
    assert rep["certificate_chain"]["reported_bound"] > 0
    assert rep["rank_bounds"]["embedding_bound"] >= 11  # DISJ^1 embedding gives 11
    assert rep["measured_costs"]["pi_protocol"]["mean_bits"] > 0
    assert "paturi" in rep


def test_report_constant():
    rep = report_bounds(constant_table(6, 1), measured_trials=2)
    assert rep["measure"]["m"] == 0 and rep["measure"]["witness"] is None
    assert rep["certificate_chain"] is None


def test_report_esetinc_certificate_value():
    f = make_setinc(SetIncParams(16, 8, 8, 8, 2, variant="esetinc"))
    rep = report_bounds(f, include_rank=False, include_measured=False)
    assert rep["certificate_chain"]["reported_bound"] == 4.0
