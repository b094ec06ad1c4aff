from __future__ import annotations

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from homolog.asymptotics import (
    InvariantSequence,
    analyze,
    check_sequence_lemma,
    compare,
    cx_value,
    detect_recurrence,
    estimate_curvature,
    parse_sequence,
    report_dict,
    sup,
)
from homolog.errors import TooShortError

from .sequences import LEMMA_INPUTS, any_sequence, recurrent, true_complexity, true_curvature


@pytest.mark.parametrize(
    "values, cx, curv",
    [
        ([1] * 10, 1, 1),
        (list(range(1, 11)), 2, 1),
        ([n * n for n in range(12)], 3, 1),
        ([2**n for n in range(10)], "inf", 2),
        ([2 ** (n + 1) - 1 for n in range(10)], "inf", 2),
        ([3 ** (n + 1) - 1 for n in range(10)], "inf", 3),
        ([5, 3, 0, 0, 0, 0, 0, 0, 0], 0, 0),
        ([1, 2] * 6, 1, 1),
    ],
)
def test_exact_reports(values, cx, curv):
    r = analyze(values)
    assert r.exact
    assert str(r.cx) == str(cx)
    assert r.curv.value == curv


def test_fibonacci_curvature_is_golden_ratio():
    fib = [1, 1]
    for _ in range(12):
        fib.append(fib[-1] + fib[-2])
    r = analyze(fib)
    assert r.exact and r.cx.kind == "infinite"
    assert compare(r.curv.value, (1 + sympy.sqrt(5)) / 2) == 0


def test_recurrence_with_offset():
    seq = [7, 1, 2, 4, 8, 16, 32, 64, 128, 256]
    assert detect_recurrence(seq) == ((2,), 1)
    assert detect_recurrence(seq, allow_offset=False) != ((2,), 0)


def test_non_recurrent_prefix_is_an_estimate():
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    r = analyze(primes)
    assert not r.exact
    assert r.curv.kind == "estimate" and r.curv.number >= 1
    assert str(r.cx) == ">=2"
    assert "inconclusive: estimator" in r.diagnostics


def test_short_sequences_are_rejected():
    with pytest.raises(TooShortError):
        analyze([1, 2, 3])
    with pytest.raises(TooShortError):
        detect_recurrence([1, 2, 3, 4, 5])


def test_negative_entries_are_rejected():
    with pytest.raises(ValueError):
        InvariantSequence((1, -1, 2))


def test_estimator_is_scale_free():
    est, window = estimate_curvature([5 * 3**n for n in range(12)])
    assert est == pytest.approx(3.0)
    assert window == (8, 11)


def test_compare_and_sup():
    assert compare(sympy.sqrt(2), sympy.Rational(7, 5)) == 1
    assert compare(sympy.oo, 10**9) == 1
    assert compare(sympy.sqrt(8), 2 * sympy.sqrt(2)) == 0
    assert sup(1, sympy.sqrt(3), sympy.Rational(3, 2)) == sympy.sqrt(3)


def test_parse_sequence():
    s = parse_sequence("1\n# comment\n2\n\n3  # trailing\n")
    assert s.values == (1, 2, 3)
    with pytest.raises(ValueError, match="line 2"):
        parse_sequence("1\nx\n")
    with pytest.raises(ValueError, match="negative"):
        parse_sequence("1\n-2\n")


def test_report_dict_is_json_ready():
    import json

    d = report_dict(analyze([2**n for n in range(10)]))
    assert json.loads(json.dumps(d))["curv"]["value"] == "2"


@settings(max_examples=150)
@given(recurrent())
def test_closed_forms_are_recovered_exactly(data):
    values, comps = data
    r = analyze(values)
    assert r.exact
    assert r.curv.value == true_curvature(comps)
    assert cx_value(r) == true_complexity(comps)


@settings(max_examples=150)
@given(any_sequence(), st.integers(1, 50))
def test_scaling_invariance(values, c):
    a, b = analyze(values), analyze([c * v for v in values])
    assert (a.cx, a.curv.kind) == (b.cx, b.curv.kind)
    if a.curv.kind == "exact":
        assert a.curv.value == b.curv.value
    else:
        assert a.curv.number == pytest.approx(b.curv.number)


@settings(max_examples=150)
@given(any_sequence())
def test_eventual_zero_trichotomy(values):
    r = analyze(values)
    w = max(2, -(-len(values) // 3))
    tail_zero = not any(values[-w:])
    assert tail_zero == (r.cx.kind == "exact" and r.cx.value == 0) == (r.curv.number < 1)


@settings(max_examples=100)
@given(recurrent(), recurrent())
def test_monotonicity_of_exact_reports(a, b):
    x, y = a[0], b[0]
    big = tuple(u + v for u, v in zip(x, y))
    rx, rb = analyze(x), analyze(big)
    if rx.exact and rb.exact:
        assert compare(cx_value(rx), cx_value(rb)) <= 0
        assert compare(rx.curv.value, rb.curv.value) <= 0


@pytest.mark.parametrize("lemma", sorted(LEMMA_INPUTS))
@settings(max_examples=40)
@given(data=st.data())
def test_lemmas_hold_on_generated_inputs(lemma, data):
    res = check_sequence_lemma(lemma, data.draw(LEMMA_INPUTS[lemma]()))
    assert res.status != "fail", res.detail


def test_lemma_vacuous_and_prefix_fail_paths():
    # hypothesis broken at n = 1
    res = check_sequence_lemma("domination", {"a": [1, 9, 1, 1, 1, 1, 1], "b": [1] * 7, "w": 1})
    assert (res.status, res.hypothesis, res.index) == ("pass", False, 1)
    # a huge constant hides faster growth on a finite prefix: the tail claim fails
    a = [2**n for n in range(8)]
    b = [n + 1 for n in range(8)]
    res = check_sequence_lemma("domination", {"a": a, "b": b, "w": 1000})
    assert res.status == "fail" and res.hypothesis
    with pytest.raises(KeyError):
        check_sequence_lemma("nope", {})
