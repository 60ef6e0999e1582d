import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from nokequal.cohomology import betti
from nokequal.errors import ParameterOutOfRange, RangeViolation
from nokequal.invariants import (
    betti_closed_form,
    cat_formula,
    hdim_formula,
    invariant_report,
    reports_to_csv,
    reports_to_json,
    tc_formula,
    tcs_formula,
    verify_range,
)


@pytest.mark.parametrize("k,n,expected", [(3, 7, 2), (3, 2, 0), (5, 5, 1)])
def test_cat_formula(k, n, expected):
    assert cat_formula(k, n) == expected


@pytest.mark.parametrize("k,n,expected", [(3, 3, 1), (4, 4, 2), (3, 8, 4), (3, 2, 0)])
def test_tc_formula(k, n, expected):
    assert tc_formula(k, n) == expected


@pytest.mark.parametrize("k,n,s,expected", [
    (3, 3, 3, 2), (4, 4, 5, 5), (3, 6, 3, 6), (3, 2, 4, 0),
])
def test_tcs_formula(k, n, s, expected):
    assert tcs_formula(k, n, s) == expected


def test_tcs_delegates_to_tc_at_s2():
    for k, n in [(3, 3), (4, 4), (3, 7), (3, 2)]:
        assert tcs_formula(k, n, 2) == tc_formula(k, n)


@pytest.mark.parametrize("k,n,expected", [(3, 6, 2), (4, 4, 2), (3, 2, 0)])
def test_hdim_formula(k, n, expected):
    assert hdim_formula(k, n) == expected


def test_betti_closed_form_values():
    assert betti_closed_form(3, 4) == 7
    assert betti_closed_form(3, 5) == 31
    assert betti_closed_form(4, 5) == 9


def test_betti_closed_form_range_guard():
    with pytest.raises(RangeViolation):
        betti_closed_form(3, 6)
    with pytest.raises(RangeViolation):
        betti_closed_form(3, 3)


def test_formula_parameter_guards():
    with pytest.raises(ParameterOutOfRange):
        cat_formula(2, 5)
    with pytest.raises(ParameterOutOfRange):
        tcs_formula(3, 5, 1)


@given(st.integers(3, 6), st.integers(1, 14))
def test_tc_bounded_by_twice_cat(k, n):
    assert tc_formula(k, n) <= 2 * cat_formula(k, n)


@given(st.integers(3, 6), st.integers(1, 14), st.integers(3, 5))
def test_tcs_monotone_in_s(k, n, s):
    assert tcs_formula(k, n, s) <= tcs_formula(k, n, s + 1)


def test_closed_form_matches_enumeration():
    for k in (3, 4):
        for n in range(k + 1, min(2 * k, 10)):
            assert betti(k, n, 1) == betti_closed_form(k, n)


def test_report_all_agree_small_grid():
    for r in verify_range([3], range(4, 8), [2]):
        assert r.all_agree, (r.k, r.n, r.s)


def test_report_sphere_case_note():
    r = invariant_report(4, 4, 2)
    assert r.tc == 2
    zcl = next(c for c in r.certificates if c.name == "zcl_lower")
    assert zcl.status == "skipped"
    assert "sphere" in zcl.note
    assert r.all_agree  # the below-target witness is excluded, not failed


def test_report_odd_sphere_case_passes():
    r = invariant_report(3, 3, 2)
    zcl = next(c for c in r.certificates if c.name == "zcl_lower")
    assert (zcl.value, zcl.status) == (1, "pass")


def test_json_schema():
    reports = verify_range([3], [4, 5], [2])
    data = json.loads(reports_to_json(reports))
    assert {d["n"] for d in data} == {4, 5}
    for d in data:
        assert set(d) == {"k", "n", "s", "cat", "hdim", "tc", "tcs",
                          "betti", "certificates"}
        for c in d["certificates"]:
            assert c["status"] in ("pass", "fail", "skipped")


def test_csv_flattening():
    text = reports_to_csv(verify_range([3], [4], [2]))
    rows = list(csv.DictReader(io.StringIO(text)))
    assert len(rows) == 3  # one row per certificate
    assert rows[0]["k"] == "3" and rows[0]["betti"] == "1 7"
