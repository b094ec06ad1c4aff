"""Complexity and curvature of non-negative integer sequences.

A report is exact only when a linear recurrence with integer coefficients
reproduces the whole prefix; then curvature is the dominant root of the
characteristic polynomial and complexity is read off the roots of modulus
one.  Otherwise both values are estimates and callers must treat them as
inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import sympy

from .errors import TooShortError
from .linalg import QQ, solve

INFINITY = math.inf


@dataclass(frozen=True)
class InvariantSequence:
    values: tuple[int, ...]
    label: str = ""

    def __post_init__(self):
        vals = tuple(int(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("invariant sequences are non-negative")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Complexity:
    kind: str  # exact, at_least, infinite, inconclusive
    value: float | int | None = None

    def __str__(self) -> str:
        if self.kind == "infinite":
            return "inf"
        if self.kind == "inconclusive":
            return "?"
        return f"{'>=' if self.kind == 'at_least' else ''}{self.value}"

    @property
    def number(self) -> float:
        """Numeric value for exact reports; infinity for infinite."""
        return INFINITY if self.kind == "infinite" else float(self.value)


@dataclass(frozen=True)
class Curvature:
    kind: str  # exact or estimate
    value: sympy.Expr | float
    window: tuple[int, int] | None = None

    @property
    def number(self) -> float:
        return float(self.value)

    def __str__(self) -> str:
        if self.kind == "exact":
            return str(self.value)
        return f"~{float(self.value):.6g}"


@dataclass(frozen=True)
class AsymptoticsReport:
    cx: Complexity
    curv: Curvature
    recurrence: tuple[int, ...] | None = None
    offset: int = 0
    diagnostics: str = ""

    @property
    def exact(self) -> bool:
        return self.curv.kind == "exact" and self.cx.kind in ("exact", "infinite")


def _values(s) -> tuple[int, ...]:
    if isinstance(s, InvariantSequence):
        return s.values
    return InvariantSequence(tuple(s)).values


def _fit(values: Sequence[int], order: int, offset: int) -> list[Fraction] | None:
    """Coefficients c with a_n = sum c_i a_{n-i} for all n >= offset + order, if any."""
    rows = []
    rhs = []
    for n in range(offset + order, len(values)):
        rows.append([values[n - i] for i in range(1, order + 1)])
        rhs.append(values[n])
    sol = solve(QQ, rows, rhs)
    return None if sol is None else [Fraction(c) for c in sol]


def detect_recurrence(s, *, allow_offset: bool = True) -> tuple[tuple[int, ...], int] | None:
    """Shortest integer recurrence fitting the prefix, as (coefficients, offset).

    Order d is tried upward from 1, at most len/2 - 1.  A fit must leave at
    least d + 2 equations, so a recurrence with d unknowns is checked on at
    least two more entries than it was solved from.  The recurrence must hold
    for every n >= offset + d; offset 0 is tried first.  Recurrences with
    non-integer coefficients are rejected: an integer sequence with a rational
    generating function has an integral minimal recurrence.
    """
    values = _values(s)
    n = len(values)
    if n < 6:
        raise TooShortError(f"recurrence detection needs at least 6 entries, got {n}")
    for order in range(1, n // 2):
        max_offset = n - 2 * order - 2 if allow_offset else 0
        for offset in range(0, max(0, max_offset) + 1):
            coeffs = _fit(values, order, offset)
            if coeffs is None:
                continue
            if all(c.denominator == 1 for c in coeffs):
                return tuple(int(c) for c in coeffs), offset
    return None


@lru_cache(maxsize=4096)
def _spectrum(coeffs: tuple[int, ...]) -> tuple[sympy.Expr, int, bool]:
    """(dominant root, max multiplicity among unit roots, consistent) of x^d - c1 x^(d-1) - ..."""
    x = sympy.Symbol("x")
    poly = sympy.Poly([1] + [-c for c in coeffs], x)
    _, factors = sympy.factor_list(poly)
    rho: sympy.Expr = sympy.Integer(0)
    max_mod = 0.0
    unit_mult = 0
    for f, mult in factors:
        if f.degree() == 1 and f.eval(0) == 0:
            continue  # the factor x
        roots = sympy.real_roots(f)
        if roots:
            top = sup(*roots)
            if compare(top, rho) > 0:
                rho = top
        max_mod = max(max_mod, max(abs(complex(r)) for r in f.nroots(n=30)))
        if f.is_cyclotomic:
            unit_mult = max(unit_mult, mult)
    consistent = abs(float(rho) - max_mod) <= 1e-9 * max(1.0, max_mod)
    return rho, unit_mult, consistent


def estimate_curvature(values: Sequence[int]) -> tuple[float, tuple[int, int]]:
    """Window estimate of limsup a_n^(1/n), scale-free.

    With w = ceil(len/3) and base s = len - 2w, the estimate is the max of
    (a_n / a_s)^(1/(n - s)) over the last w indices.  Dividing by a_s removes
    the constant factor that a_n^(1/n) carries at short lengths.
    """
    n = len(values)
    w = max(2, math.ceil(n / 3))
    s = max(0, n - 2 * w)
    base_idx = next((i for i in range(s, n - w) if values[i] > 0), None)
    window = (n - w, n - 1)
    tail_nonzero = any(values[i] for i in range(n - w, n))
    if base_idx is None:
        est = 0.0
    else:
        base = values[base_idx]
        est = max((values[i] / base) ** (1.0 / (i - base_idx)) for i in range(n - w, n))
    if tail_nonzero:
        est = max(est, 1.0)
    return est, window


def _difference_order(values: Sequence[int], w: int) -> int:
    """Number of successive difference levels that stay positive on the last w entries."""
    seq = list(values[-w:])
    k = 0
    while len(seq) > 1:
        seq = [y - x for x, y in zip(seq, seq[1:])]
        if not all(v > 0 for v in seq):
            break
        k += 1
    return k


def analyze(s) -> AsymptoticsReport:
    values = _values(s)
    n = len(values)
    if n < 4:
        raise TooShortError(f"analysis needs at least 4 entries, got {n}")
    w = max(2, math.ceil(n / 3))
    if all(v == 0 for v in values[-w:]):
        return AsymptoticsReport(
            Complexity("exact", 0), Curvature("exact", sympy.Integer(0)), None, 0, f"last {w} entries vanish"
        )
    found = detect_recurrence(values) if n >= 6 else None
    if found is not None:
        coeffs, offset = found
        rho, unit_mult, consistent = _spectrum(coeffs)
        # the nonzero roots of a monic integer polynomial multiply to a nonzero
        # integer, so rho is 0 (transient only, left to the estimator) or >= 1
        if consistent and rho != 0:
            cx = Complexity("infinite") if compare(rho, 1) > 0 else Complexity("exact", unit_mult)
            return AsymptoticsReport(
                cx, Curvature("exact", rho), coeffs, offset, f"recurrence of order {len(coeffs)} from index {offset}"
            )
        diag = "recurrence rejected: spectrum inconsistent with a non-negative tail"
    else:
        diag = "no integer recurrence on the prefix"
    est, window = estimate_curvature(values)
    k = _difference_order(values, w)
    cx = Complexity("at_least", k + 1) if values[-1] > 0 else Complexity("inconclusive")
    return AsymptoticsReport(cx, Curvature("estimate", est, window), None, 0, f"{diag}; inconclusive: estimator")


# ---------------------------------------------------------------- comparisons


def _as_expr(v) -> sympy.Expr:
    if isinstance(v, sympy.Basic):
        return v
    if isinstance(v, Fraction):
        return sympy.Rational(v.numerator, v.denominator)
    if v == INFINITY:
        return sympy.oo
    return sympy.nsimplify(v, rational=True)


def compare(a, b) -> int:
    """Exact sign of a - b for rationals, algebraic numbers and infinity."""
    a, b = _as_expr(a), _as_expr(b)
    if a == b:
        return 0
    if a is sympy.oo or b is sympy.oo:
        return 1 if a is sympy.oo else -1
    diff = a - b
    approx = sympy.N(diff, 60)
    if abs(approx) > sympy.Float("1e-40"):
        return 1 if approx > 0 else -1
    x = sympy.Symbol("x")
    if sympy.minimal_polynomial(diff, x) == x:
        return 0
    return 1 if sympy.N(diff, 200) > 0 else -1


def sup(*values):
    out = values[0]
    for v in values[1:]:
        if compare(v, out) > 0:
            out = v
    return out


def cx_value(r: AsymptoticsReport):
    return sympy.oo if r.cx.kind == "infinite" else sympy.Integer(r.cx.value)


# ---------------------------------------------------------------- lemma checks


@dataclass(frozen=True)
class LemmaCheck:
    status: str  # pass, fail, inconclusive
    hypothesis: bool
    index: int | None = None
    detail: str = ""
    reports: Mapping[str, AsymptoticsReport] = field(default_factory=dict)


LEMMAS = ("domination", "recursion", "shift_sum", "sum", "laurent")


def check_sequence_lemma(lemma: str, inputs: Mapping) -> LemmaCheck:
    """Check one sequence-calculus lemma on finite prefixes.

    The hypothesis is tested on the prefix; if it fails the check passes
    vacuously.  The conclusion is decided only when every report involved is
    exact; otherwise the result is inconclusive.
    """
    if lemma not in LEMMAS:
        raise KeyError(f"unknown lemma {lemma!r}; expected one of {', '.join(LEMMAS)}")
    return _LEMMA_CHECKS[lemma](inputs)


def _decide(pairs, reports, note="") -> LemmaCheck:
    """pairs: (lhs, rhs, relation) with relation in '<=', '=='."""
    if not all(r.exact for r in reports.values()):
        return LemmaCheck("inconclusive", True, None, "inconclusive: estimator" + note, reports)
    for lhs, rhs, rel in pairs:
        c = compare(lhs, rhs)
        if (rel == "<=" and c > 0) or (rel == "==" and c != 0):
            return LemmaCheck("fail", True, None, f"{lhs} {rel} {rhs} violated{note}", reports)
    return LemmaCheck("pass", True, None, "conclusion holds on exact reports" + note, reports)


def _vacuous(n: int, what: str) -> LemmaCheck:
    return LemmaCheck("pass", False, n, f"vacuous: hypothesis {what} fails at n={n}")


def _check_domination(inp) -> LemmaCheck:
    a, b, w = _values(inp["a"]), _values(inp["b"]), Fraction(inp["w"])
    for n in range(1, min(len(a), len(b))):
        if a[n] > w * (b[n] + b[n - 1]):
            return _vacuous(n, "a_n <= w(b_n + b_{n-1})")
    ra, rb = analyze(a), analyze(b)
    return _decide([(cx_value(ra), cx_value(rb), "<="), (ra.curv.value, rb.curv.value, "<=")], {"a": ra, "b": rb})


def _check_recursion(inp) -> LemmaCheck:
    x, y = _values(inp["x"]), _values(inp["y"])
    a, b = Fraction(inp["a"]), Fraction(inp["b"])
    for n in range(min(len(x) - 1, len(y))):
        if x[n + 1] > b * x[n] + a * y[n]:
            return _vacuous(n, "x_{n+1} <= b x_n + a y_n")
    rx, ry = analyze(x), analyze(y)
    return _decide([(rx.curv.value, sup(_as_expr(b), ry.curv.value), "<=")], {"x": rx, "y": ry})


def _check_shift_sum(inp) -> LemmaCheck:
    x = _values(inp["x"])
    a, b = Fraction(inp["a"]), Fraction(inp["b"])
    if a <= 0 or b <= 0:
        return LemmaCheck("pass", False, None, "vacuous: a and b must be positive")
    y = [a * x[n + 1] + b * x[n] for n in range(len(x) - 1)]
    if any(v.denominator != 1 for v in y):
        scale = math.lcm(*(v.denominator for v in y))
        y = [v * scale for v in y]
    y_int = tuple(int(v) for v in y)
    rx, ry = analyze(x), analyze(y_int)
    return _decide([(ry.curv.value, rx.curv.value, "==")], {"x": rx, "shifted": ry})


def _check_sum(inp) -> LemmaCheck:
    x, y = _values(inp["x"]), _values(inp["y"])
    m = min(len(x), len(y))
    s = tuple(x[i] + y[i] for i in range(m))
    rx, ry, rs = analyze(x[:m]), analyze(y[:m]), analyze(s)
    return _decide(
        [
            (cx_value(rs), sup(cx_value(rx), cx_value(ry)), "<="),
            (rs.curv.value, sup(rx.curv.value, ry.curv.value), "<="),
        ],
        {"x": rx, "y": ry, "sum": rs},
    )


def _check_laurent(inp) -> LemmaCheck:
    a, b = _values(inp["a"]), _values(inp["b"])
    c = [int(v) for v in inp["c"]]
    if not any(c) or any(v < 0 for v in c):
        return LemmaCheck("pass", False, None, "vacuous: P must be nonzero with non-negative coefficients")
    r = len(c) - 1
    usable = min(len(a), len(b) - r)
    for n in range(usable):
        if a[n] != sum(c[i] * b[n + i] for i in range(r + 1)):
            return _vacuous(n, "a_n = sum_i c_i b_{n+i}")
    ra, rb = analyze(a[:usable]), analyze(b)
    return _decide([(cx_value(rb), cx_value(ra), "<="), (rb.curv.value, ra.curv.value, "<=")], {"a": ra, "b": rb})


_LEMMA_CHECKS = {
    "domination": _check_domination,
    "recursion": _check_recursion,
    "shift_sum": _check_shift_sum,
    "sum": _check_sum,
    "laurent": _check_laurent,
}


def parse_sequence(text: str, label: str = "") -> InvariantSequence:
    """One non-negative integer per line; blank lines and `#` comments are skipped."""
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        item = line.split("#", 1)[0].strip()
        if not item:
            continue
        try:
            v = int(item)
        except ValueError:
            raise ValueError(f"line {lineno}: not an integer: {item!r}") from None
        if v < 0:
            raise ValueError(f"line {lineno}: negative value {v}")
        values.append(v)
    return InvariantSequence(tuple(values), label)


def report_dict(r: AsymptoticsReport) -> dict:
    """JSON-ready view of a report."""
    return {
        "cx": {"kind": r.cx.kind, "value": str(r.cx)},
        "curv": {
            "kind": r.curv.kind,
            "value": str(r.curv.value) if r.curv.kind == "exact" else float(r.curv.value),
            "numeric": r.curv.number,
        },
        "recurrence": list(r.recurrence) if r.recurrence is not None else None,
        "offset": r.offset,
        "exact": r.exact,
        "diagnostics": r.diagnostics,
    }


__all__ = [
    "AsymptoticsReport",
    "Complexity",
    "Curvature",
    "InvariantSequence",
    "LEMMAS",
    "LemmaCheck",
    "analyze",
    "check_sequence_lemma",
    "compare",
    "cx_value",
    "detect_recurrence",
    "estimate_curvature",
    "parse_sequence",
    "report_dict",
    "sup",
]
