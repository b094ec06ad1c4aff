from __future__ import annotations

import pytest
import sympy
from hypothesis import given, strategies as st

from homolog.errors import ConstantTermError, NotMPrimaryError, PolynomialParseError
from homolog.linalg import GF, QQ
from homolog.poly import (
    buchberger,
    deglex_key,
    format_polynomial,
    normal_form,
    parse_polynomial,
    standard_monomials,
)

VARS = ["x", "y", "z"]
P = 101
X, Y, Z = sympy.symbols("x y z")


def as_dict(p) -> dict:
    return {m: int(c) % P for m, c in p.coeffs().items()}


def sympy_dict(expr) -> dict:
    if expr == 0:
        return {}
    poly = sympy.Poly(expr, X, Y, Z, modulus=P)
    return {m: int(c) % P for m, c in poly.terms() if int(c) % P}


terms = st.tuples(st.integers(1, P - 1), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))


@st.composite
def polys(draw, min_terms=1, max_terms=4):
    ts = draw(st.lists(terms, min_size=min_terms, max_size=max_terms))
    ts = [t for t in ts if t[1] + t[2] + t[3] > 0] or [(1, 1, 0, 0)]
    return " + ".join(f"{c}*x^{a}*y^{b}*z^{e}" for c, a, b, e in ts)


def test_parse_and_format_round_trip():
    f = GF(7)
    p = parse_polynomial("3x^2*y - y + 2*x*y*z", VARS, f)
    assert format_polynomial(p, VARS) == "3*x^2*y + 2*x*y*z + 6*y"
    assert parse_polynomial(format_polynomial(p, VARS), VARS, f).coeffs() == p.coeffs()


def test_parse_rationals():
    p = parse_polynomial("x^2 - 5*y", ["x", "y"], QQ)
    assert p.coeffs() == {(2, 0): 1, (0, 1): -5}


@pytest.mark.parametrize(
    "text, column",
    [("x^", 3), ("x + w", 5), ("x ** 2", 4), ("3x^y", 4), ("", 1)],
)
def test_parse_errors_carry_columns(text, column):
    with pytest.raises(PolynomialParseError, match=f"column {column}"):
        parse_polynomial(text, VARS, GF(7))


def test_deglex_order():
    ms = [(0, 2, 0), (1, 0, 0), (1, 1, 0), (2, 0, 0), (0, 0, 1)]
    assert sorted(ms, key=deglex_key) == [(0, 0, 1), (1, 0, 0), (0, 2, 0), (1, 1, 0), (2, 0, 0)]


@given(st.lists(polys(), min_size=1, max_size=3))
def test_groebner_matches_sympy(gens):
    f = GF(P)
    ours = buchberger([parse_polynomial(g, VARS, f) for g in gens])
    theirs = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], X, Y, Z, order="grlex", modulus=P)
    # both are reduced and monic, hence equal as sets
    assert {frozenset(as_dict(g).items()) for g in ours.generators} == {
        frozenset(sympy_dict(g).items()) for g in theirs.exprs
    }


@given(st.lists(polys(), min_size=1, max_size=3), polys(max_terms=6))
def test_normal_form_matches_sympy(gens, target):
    f = GF(P)
    gb = buchberger([parse_polynomial(g, VARS, f) for g in gens])
    nf = normal_form(parse_polynomial(target, VARS, f), gb)
    theirs = sympy.groebner([sympy.sympify(g.replace("^", "**")) for g in gens], X, Y, Z, order="grlex", modulus=P)
    _, rem = theirs.reduce(sympy.sympify(target.replace("^", "**")))
    assert as_dict(nf) == sympy_dict(rem)


def test_standard_monomials_of_complete_intersection():
    gb = buchberger([parse_polynomial(g, ["x", "y"], GF(5)) for g in ["x^2", "y^3"]])
    assert standard_monomials(gb) == [(0, 0), (1, 0), (0, 1), (1, 1), (0, 2), (1, 2)]


def test_standard_monomials_hilbert_function_oracle():
    # (x^2, xy, y^2) + (z^2): staircase of size 1 + 3 + 2*... counted by brute force
    gens = ["x^2", "x*y", "y^2", "z^2"]
    gb = buchberger([parse_polynomial(g, VARS, GF(P)) for g in gens])
    brute = [
        (a, b, c)
        for a in range(3)
        for b in range(3)
        for c in range(3)
        if not any(
            (a, b, c)[0] >= e[0] and (a, b, c)[1] >= e[1] and (a, b, c)[2] >= e[2]
            for e in [(2, 0, 0), (1, 1, 0), (0, 2, 0), (0, 0, 2)]
        )
    ]
    assert sorted(standard_monomials(gb)) == sorted(brute)


def test_not_m_primary():
    gb = buchberger([parse_polynomial("x", ["x", "y"], GF(7))])
    with pytest.raises(NotMPrimaryError):
        standard_monomials(gb)


def test_constant_term_rejected():
    with pytest.raises(ConstantTermError):
        buchberger([parse_polynomial("x*y - 1", ["x", "y"], GF(7))])
