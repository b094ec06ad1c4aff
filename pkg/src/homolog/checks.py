"""The theorem-check catalog.

Each check evaluates a family of inequalities on one corpus instance.
Finite-level inequalities are compared as exact integers at every index up
to the requested depth.  Statements about complexity or curvature are only
decided when the sequences involved have confirmed exact asymptotics
reports (the same recurrence detected at two consecutive depths); otherwise
the row is undecided and the check is inconclusive.

Check ids follow the catalog names (for example LEM-5-1); `ID(part)`
restricts a check to the rows of one part, e.g. `LEM-5-1(1)`.
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np
import sympy

from .asymptotics import AsymptoticsReport, analyze, check_sequence_lemma, compare, cx_value, sup
from .corpus import CorpusInstance
from .errors import BudgetExceededError, TooShortError, UnknownCheckError
from .homalg import ext_homology, ext_tor_duality_check, pair_sequences
from .modules import (
    ModuleInvariants,
    ModuleRealization,
    direct_sum,
    free_module,
    matlis_dual,
    module_invariants,
    quotient,
    submodule,
    syzygy,
)
from .resolution import betti_sequence

log = logging.getLogger(__name__)

ASYM_MAX_DEPTH = 12
ASYM_CAP = 60_000  # largest k-dimension of a complex term used to extend a sequence


@dataclass(frozen=True)
class EvidenceRow:
    n: int | None  # None for rows about whole sequences
    lhs: object
    rhs: object
    holds: bool | None  # None when undecided
    subject: str = ""
    relation: str = "<="

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "relation": self.relation,
            "holds": self.holds,
            "subject": self.subject,
        }


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (np.integer,)):
        return int(v)
    return _show(v)


@dataclass(frozen=True)
class CheckResult:
    check: str
    instance: str
    depth: int
    status: str  # pass, fail, inconclusive
    evidence: tuple[EvidenceRow, ...]
    ms: float
    diagnostics: tuple[str, ...] = ()

    @property
    def first_violation(self) -> EvidenceRow | None:
        return next((r for r in self.evidence if r.holds is False), None)


# ---------------------------------------------------------------- value helpers


def _show(v) -> str:
    if v is None:
        return "?"
    if v is sympy.oo or v == float("inf"):
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, sympy.Basic):
        return str(sympy.nsimplify(v)) if v.is_Rational else str(v)
    return str(v)


@dataclass
class Quantity:
    """cx or curv of a sequence; value is None unless an exact report was confirmed."""

    name: str
    value: object
    report: AsymptoticsReport | None
    depth: int

    @property
    def text(self) -> str:
        if self.value is not None:
            return _show(self.value)
        if self.report is None:
            return "?"
        if self.name.startswith(("curv", "injcurv", "tcurv")):
            return f"~{self.report.curv.number:.4g}"
        return str(self.report.cx)


class Workspace:
    """Per-instance caches: realizations, invariants, sequences and confirmed reports."""

    def __init__(self, instance: CorpusInstance, depth: int):
        self.instance = instance
        self.depth = depth
        self.ring = instance.ring
        self.k_name = "k" if "k" not in instance.modules else "k~res"
        self.free_name = "R^1"
        self._mods: dict[str, ModuleRealization] = {}
        self._inv: dict[str, ModuleInvariants] = {}
        self._reports: dict[tuple, tuple[AsymptoticsReport | None, int]] = {}
        self.notes: list[str] = []

    # modules

    def subjects(self) -> list[str]:
        return [self.k_name] + self.instance.module_names

    def mod(self, name: str) -> ModuleRealization:
        if name not in self._mods:
            if name == self.k_name:
                self._mods[name] = self.instance.module("k") if self.k_name == "k" else _residue(self)
            elif name == self.free_name:
                self._mods[name] = free_module(self.ring, 1)
            else:
                self._mods[name] = self.instance.module(name)
        return self._mods[name]

    def inv(self, name: str) -> ModuleInvariants:
        if name not in self._inv:
            self._inv[name] = module_invariants(self.mod(name))
        return self._inv[name]

    def dual(self, name: str) -> ModuleRealization:
        m = self.mod(name)
        if "dual" not in m.cache:
            m.cache["dual"] = matlis_dual(m)
        return m.cache["dual"]

    # sequences

    def seq(self, kind: str, a: str, b: str | None = None, depth: int | None = None) -> tuple[int, ...]:
        d = self.depth if depth is None else depth
        if kind == "betti":
            return tuple(betti_sequence(self.mod(a), d))
        if kind == "bass":
            return tuple(betti_sequence(self.dual(a), d))
        if a == self.k_name:
            # Ext^n(k, N) is a vector space of dimension mu^n(N); Tor_n(k, N) has dimension beta_n(N)
            if kind in ("ext_mu", "ext_len"):
                return self.seq("bass", b, None, d)
            return self.seq("betti", b, None, d)
        ps = pair_sequences(self.mod(a), self.mod(b), d)
        return getattr(ps, kind).values

    def ann_exponent(self, kind: str, a: str, b: str) -> int:
        if a == self.k_name:
            return 1 if any(self.seq(kind, a, b)) else 0
        ps = pair_sequences(self.mod(a), self.mod(b), self.depth)
        return getattr(ps, kind).ann_exponent

    def _term_size(self, kind: str, a: str, b: str | None, d: int) -> int:
        """k-dimension of the largest complex term behind seq(kind, a, b, d)."""
        if kind in ("betti", "bass"):
            return self.seq(kind, a, None, d)[d] * self.ring.length
        if a == self.k_name:
            return self._term_size("bass" if kind.startswith("ext") else "betti", b, None, d)
        return self.seq("betti", a, None, d)[d] * max(1, self.mod(b).dim)

    def report(self, kind: str, a: str, b: str | None = None) -> tuple[AsymptoticsReport | None, int]:
        """Analysis of a sequence, extended in depth until a recurrence is confirmed.

        Returns the last report and the depth used.  A report seen exact at
        one depth only is downgraded to an estimate.
        """
        key = (kind, a, b)
        if key in self._reports:
            return self._reports[key]
        d = max(self.depth, 5)
        prev: AsymptoticsReport | None = None
        out: tuple[AsymptoticsReport | None, int] = (None, d)
        while True:
            try:
                values = self.seq(kind, a, b, d)
            except BudgetExceededError as exc:
                self.notes.append(f"{kind}({a},{b}) stopped at depth {d - 1}: {exc}")
                break
            try:
                r = analyze(values)
            except TooShortError:
                break
            if prev is not None and _same(prev, r):
                out = (r, d)
                break
            out = (_unconfirmed(r), d)
            if d >= ASYM_MAX_DEPTH or self._term_size(kind, a, b, d) > ASYM_CAP:
                break
            prev = r if r.exact else None
            d += 1
        self._reports[key] = out
        return out

    def quantity(self, stat: str, kind: str, a: str, b: str | None = None) -> Quantity:
        r, d = self.report(kind, a, b)
        prefix = {"betti": "", "bass": "inj", "ext_mu": "", "tor_mu": "t"}[kind]
        args = a if b is None else f"{a},{b}"
        name = f"{prefix}{stat}({args})"
        if r is None or not r.exact:
            return Quantity(name, None, r, d)
        return Quantity(name, cx_value(r) if stat == "cx" else r.curv.value, r, d)


def _residue(ws: Workspace) -> ModuleRealization:
    from .modules import residue_field

    return residue_field(ws.ring)


def _same(a: AsymptoticsReport, b: AsymptoticsReport) -> bool:
    if not (a.exact and b.exact):
        return False
    return a.recurrence == b.recurrence and a.offset == b.offset and a.cx == b.cx


def _unconfirmed(r: AsymptoticsReport) -> AsymptoticsReport:
    """Strip exactness from a report seen at a single depth only."""
    if not r.exact:
        return r
    from .asymptotics import Complexity, Curvature

    return AsymptoticsReport(
        Complexity("inconclusive"),
        Curvature("estimate", float(r.curv.value)),
        r.recurrence,
        r.offset,
        r.diagnostics + "; awaiting confirmation at the next depth",
    )


# ---------------------------------------------------------------- asymptotic clauses

Term = Callable[[Workspace, dict], object]  # constant (Fraction) or Quantity


@dataclass(frozen=True)
class Clause:
    part: str
    lhs: tuple[Term, ...]  # combined by min
    rhs: tuple[Term, ...]  # combined by sup
    op: str = "<="
    plus: int = 0
    when: Callable[[Workspace, dict], bool] = lambda ws, b: True
    when_text: str = ""


def Q(stat: str, kind: str, *roles: str) -> Term:
    def term(ws: Workspace, b: dict) -> Quantity:
        names = [b[r] for r in roles]
        return ws.quantity(stat, kind, *names)

    return term


def C(fn: Callable[[ModuleInvariants], Fraction]) -> Term:
    return lambda ws, b: Fraction(fn(ws.inv(b["M"])))


def _value(t) -> object:
    return t.value if isinstance(t, Quantity) else t


def _text(t) -> str:
    return t.text if isinstance(t, Quantity) else _show(t)


def eval_clause(ws: Workspace, clause: Clause, binding: dict, subject: str) -> EvidenceRow | None:
    if not clause.when(ws, binding):
        return None
    lhs = [t(ws, binding) for t in clause.lhs]
    rhs = [t(ws, binding) for t in clause.rhs]
    lhs_text = lhs[0].name if isinstance(lhs[0], Quantity) and len(lhs) == 1 else "min"
    lhs_show = ", ".join(_text(t) for t in lhs)
    lhs_show = lhs_show if len(lhs) == 1 else f"min{{{lhs_show}}}"
    rhs_show = ", ".join(_text(t) for t in rhs)
    rhs_show = rhs_show if len(rhs) == 1 else f"sup{{{rhs_show}}}"
    if clause.plus:
        rhs_show = f"{clause.plus}+{rhs_show}"
    label = f"{clause.part} {subject}" + (f" [{clause.when_text}]" if clause.when_text else "")
    lv = [_value(t) for t in lhs]
    rv = [_value(t) for t in rhs]
    known_l = [v for v in lv if v is not None]
    known_r = [v for v in rv if v is not None]
    holds: bool | None = None
    if None not in lv and None not in rv:
        c = compare(_min(lv), sup(*rv) + clause.plus)
        holds = c <= 0 if clause.op == "<=" else c == 0
    elif clause.op == "<=" and known_l and known_r:
        # min(lhs) is at most any known member and sup(rhs) at least any known member
        if compare(_min(known_l), sup(*known_r) + clause.plus) <= 0:
            holds = True
    return EvidenceRow(None, lhs_show, rhs_show, holds, f"{label}: {lhs_text}", clause.op)


def _min(values):
    out = values[0]
    for v in values[1:]:
        if compare(v, out) < 0:
            out = v
    return out


# ---------------------------------------------------------------- invariant helpers


# shorthand predicates on the M role
def _le2mu(ws, b):
    i = ws.inv(b["M"])
    return i.length <= 2 * i.mu


def _lt2mu(ws, b):
    i = ws.inv(b["M"])
    return i.length < 2 * i.mu


def _le2type(ws, b):
    i = ws.inv(b["M"])
    return i.length <= 2 * i.type


def _lt2type(ws, b):
    i = ws.inv(b["M"])
    return i.length < 2 * i.type


def _ge2mu(ws, b):
    i = ws.inv(b["M"])
    return i.length >= 2 * i.mu


def _gt2mu(ws, b):
    i = ws.inv(b["M"])
    return i.length > 2 * i.mu


def _ge2type(ws, b):
    i = ws.inv(b["M"])
    return i.length >= 2 * i.type


def _gt2type(ws, b):
    i = ws.inv(b["M"])
    return i.length > 2 * i.type


def _mM_nonzero(ws, b):
    i = ws.inv(b["M"])
    return i.length > i.mu


def _both(*preds):
    return lambda ws, b: all(p(ws, b) for p in preds)


_curvX = Q("curv", "betti", "X")
_cxX = Q("cx", "betti", "X")
_icurvX = Q("curv", "bass", "X")
_icxX = Q("cx", "bass", "X")
_curvXM = Q("curv", "ext_mu", "X", "M")
_cxXM = Q("cx", "ext_mu", "X", "M")
_tcurvXM = Q("curv", "tor_mu", "X", "M")
_tcxXM = Q("cx", "tor_mu", "X", "M")
_curvMX = Q("curv", "ext_mu", "M", "X")
_cxMX = Q("cx", "ext_mu", "M", "X")
_curvM = Q("curv", "betti", "M")
_cxM = Q("cx", "betti", "M")
_icurvM = Q("curv", "bass", "M")
_icxM = Q("cx", "bass", "M")

_lam_over_mu_1 = C(lambda i: Fraction(i.length, i.mu) - 1)
_lam_over_type_1 = C(lambda i: Fraction(i.length, i.type) - 1)
_mu_over_rest = C(lambda i: Fraction(i.mu, i.length - i.mu))
_type_over_rest = C(lambda i: Fraction(i.type, i.length - i.type))


def _triple(part: str, first, const, pair, le, lt, le_text, lt_text, when=None, when_text=""):
    """(i) sup bound, (ii) 1 + pair bound under `le`, (iii) pair bounds under `lt`."""
    cx_l, curv_l = first
    cx_p, curv_p = pair
    base = when or (lambda ws, b: True)
    return [
        Clause(f"{part}(i)", (curv_l,), (const, curv_p), when=base, when_text=when_text),
        Clause(f"{part}(ii)", (cx_l,), (cx_p,), plus=1, when=_both(base, le), when_text=le_text),
        Clause(f"{part}(iii)", (cx_l,), (cx_p,), when=_both(base, lt), when_text=lt_text),
        Clause(f"{part}(iii)", (curv_l,), (curv_p,), when=_both(base, lt), when_text=lt_text),
    ]


_FINITE_LENGTH_CLAUSES = (
    _triple("(1)", (_cxX, _curvX), _lam_over_mu_1, (_tcxXM, _tcurvXM), _le2mu, _lt2mu, "l<=2mu", "l<2mu")
    + _triple("(2)", (_cxX, _curvX), _lam_over_type_1, (_cxXM, _curvXM), _le2type, _lt2type, "l<=2type", "l<2type")
    + _triple("(3)", (_icxX, _icurvX), _lam_over_mu_1, (_cxMX, _curvMX), _le2mu, _lt2mu, "l<=2mu", "l<2mu")
)

_MIN_MULT_CLAUSES = (
    _triple("(1)", (_cxX, _curvX), _mu_over_rest, (_cxXM, _curvXM), _ge2mu, _gt2mu, "l>=2mu", "l>2mu")
    + _triple("(2)", (_icxX, _icurvX), _lam_over_mu_1, (_cxMX, _curvMX), _le2mu, _lt2mu, "l<=2mu", "l<2mu")
    + _triple("(3)", (_cxX, _curvX), _type_over_rest, (_tcxXM, _tcurvXM), _ge2type, _gt2type, "l>=2type", "l>2type")
    + _triple("(4)", (_icxX, _icurvX), _type_over_rest, (_cxMX, _curvMX), _ge2type, _gt2type, "l>=2type", "l>2type")
)
# parts (i) with a type or mu denominator need mM != 0
_MIN_MULT_CLAUSES = [
    Clause(c.part, c.lhs, c.rhs, c.op, c.plus, _both(c.when, _mM_nonzero), "mM!=0")
    if c.part in ("(1)(i)", "(3)(i)", "(4)(i)")
    else c
    for c in _MIN_MULT_CLAUSES
]

_RESIDUE_CLAUSES = [
    Clause("(1)", (_curvX,), (_lam_over_mu_1, _curvM)),
    Clause("(2)", (_curvX,), (_lam_over_type_1, _icurvM)),
    Clause("(3)", (_cxX,), (_cxM,), plus=1, when=_le2mu, when_text="l<=2mu"),
    Clause("(4)", (_cxX,), (_cxM,), op="==", when=_lt2mu, when_text="l<2mu"),
    Clause("(4)", (_curvX,), (_curvM,), op="==", when=_lt2mu, when_text="l<2mu"),
    Clause("(5)", (_cxX,), (_icxM,), plus=1, when=_le2type, when_text="l<=2type"),
    Clause("(6)", (_cxX,), (_icxM,), op="==", when=_lt2type, when_text="l<2type"),
    Clause("(6)", (_curvX,), (_icurvM,), op="==", when=_lt2type, when_text="l<2type"),
]


def _not_ulrich(ws, b):
    return not ws.inv(b["M"]).is_ulrich


_RESIDUE_MIN_MULT_CLAUSES = [
    Clause("(1)", (_curvX,), (_mu_over_rest, _icurvM), when=_not_ulrich, when_text="not Ulrich"),
    Clause("(2)", (_curvX,), (_type_over_rest, _curvM), when=_not_ulrich, when_text="not Ulrich"),
    Clause("(3)", (_cxX,), (_icxM,), plus=1, when=_ge2mu, when_text="e>=2mu"),
    Clause("(4)", (_cxX,), (_icxM,), op="==", when=_gt2mu, when_text="e>2mu"),
    Clause("(4)", (_curvX,), (_icurvM,), op="==", when=_gt2mu, when_text="e>2mu"),
    Clause("(5)", (_cxX,), (_cxM,), plus=1, when=_ge2type, when_text="e>=2type"),
    Clause("(6)", (_cxX,), (_cxM,), op="==", when=_gt2type, when_text="e>2type"),
    Clause("(6)", (_curvX,), (_curvM,), op="==", when=_gt2type, when_text="e>2type"),
]


# ---------------------------------------------------------------- check bodies


def _pairs(ws: Workspace) -> list[tuple[str, str]]:
    s = ws.subjects()
    return [(x, m) for x in s for m in s]


def _nonzero(ws: Workspace, name: str) -> bool:
    return ws.mod(name).dim > 0


def _clause_rows(ws: Workspace, clauses, bindings) -> list[EvidenceRow]:
    rows = []
    for x, m in bindings:
        if not (_nonzero(ws, x) and _nonzero(ws, m)):
            continue
        for c in clauses:
            row = eval_clause(ws, c, {"X": x, "M": m}, f"X={x} M={m}")
            if row is not None:
                rows.append(row)
    return rows


def _lem_finite_length(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for x, m in _pairs(ws):
        i = ws.inv(m)
        lam, mu, typ = i.length, i.mu, i.type
        if lam == 0:
            continue
        beta = ws.seq("betti", x)
        bass = ws.seq("bass", x)
        tor = ws.seq("tor_len", x, m)
        ext = ws.seq("ext_len", x, m)
        ext_mx = ws.seq("ext_len", m, x)
        s = f"X={x} M={m}"
        for n in range(ws.depth):
            rows.append(_int_row(n, beta[n + 1] * mu, (lam - mu) * beta[n] + tor[n + 1], f"(1) {s}"))
            rows.append(_int_row(n, beta[n + 1] * typ, (lam - typ) * beta[n] + ext[n + 1], f"(2) {s}"))
            rows.append(_int_row(n, bass[n + 1] * mu, (lam - mu) * bass[n] + ext_mx[n + 1], f"(3) {s}"))
    return rows


def _lem_min_mult(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for x, m in _pairs(ws):
        i = ws.inv(m)
        if i.length == 0 or not i.is_min_mult:
            continue
        lam, mu, typ = i.length, i.mu, i.type
        beta = ws.seq("betti", x)
        bass = ws.seq("bass", x)
        tor = ws.seq("tor_len", x, m)
        ext = ws.seq("ext_len", x, m)
        ext_mx = ws.seq("ext_len", m, x)
        s = f"X={x} M={m}"
        for n in range(ws.depth):
            rows.append(_int_row(n, (lam - mu) * beta[n + 1] - mu * beta[n], ext[n + 1], f"(1) {s}"))
            rows.append(_int_row(n, mu * bass[n + 1] - (lam - mu) * bass[n], ext_mx[n + 1], f"(2) {s}"))
            rows.append(_int_row(n, (lam - typ) * beta[n + 1] - typ * beta[n], tor[n + 1], f"(3) {s}"))
            rows.append(_int_row(n, (lam - typ) * bass[n + 1] - typ * bass[n], ext_mx[n + 1], f"(4) {s}"))
    return rows


def _int_row(n: int, lhs: int, rhs: int, subject: str, relation: str = "<=") -> EvidenceRow:
    lhs, rhs = int(lhs), int(rhs)
    holds = lhs <= rhs if relation == "<=" else lhs == rhs
    return EvidenceRow(n, lhs, rhs, holds, subject, relation)


def _prop_finite_length(ws: Workspace) -> list[EvidenceRow]:
    return _clause_rows(ws, _FINITE_LENGTH_CLAUSES, _pairs(ws))


def _thm_cm(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    loewy = ws.ring.loewy
    for x, m in _pairs(ws):
        if not (_nonzero(ws, x) and _nonzero(ws, m)):
            continue
        for kind in ("tor_mu", "ext_mu"):
            h = ws.ann_exponent(kind, x, m)
            rows.append(EvidenceRow(None, h, loewy, h <= loewy, f"ann exponent of {kind[:3]}(X={x},M={m})", "<="))
    # at dimension 0 the multiplicity is the length, so the bounds coincide
    return rows + _clause_rows(ws, _FINITE_LENGTH_CLAUSES, _pairs(ws))


def _cor_residue(ws: Workspace) -> list[EvidenceRow]:
    return _clause_rows(ws, _RESIDUE_CLAUSES, [(ws.k_name, m) for m in ws.subjects()])


def _prop_min_mult(ws: Workspace) -> list[EvidenceRow]:
    pairs = [(x, m) for x, m in _pairs(ws) if ws.inv(m).is_min_mult]
    return _clause_rows(ws, _MIN_MULT_CLAUSES, pairs)


def _cor_min_mult(ws: Workspace) -> list[EvidenceRow]:
    pairs = [(ws.k_name, m) for m in ws.subjects() if ws.inv(m).is_min_mult]
    return _clause_rows(ws, _RESIDUE_MIN_MULT_CLAUSES, pairs)


def _e_mu_type(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects() + [ws.free_name]:
        i = ws.inv(m)
        if i.length == 0:
            continue
        rows.append(_int_row(None, i.mu, i.mult, f"mu<=e M={m}"))
        rows.append(_int_row(None, i.type, i.mult, f"type<=e M={m}"))
        rows.append(
            EvidenceRow(None, i.mult == i.mu, i.mult == i.type, (i.mult == i.mu) == (i.mult == i.type), f"e=mu iff e=type M={m}", "==")
        )
        rows.append(EvidenceRow(None, i.mult == i.mu, i.is_ulrich, (i.mult == i.mu) == i.is_ulrich, f"e=mu iff mM=0 M={m}", "=="))
    return rows


def _direct_sum(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    s = ws.subjects() + [ws.free_name]
    for i, a in enumerate(s):
        for b in s[i:]:
            total = module_invariants(direct_sum(ws.mod(a), ws.mod(b)))
            both = ws.inv(a).is_min_mult and ws.inv(b).is_min_mult
            rows.append(EvidenceRow(None, total.is_min_mult, both, total.is_min_mult == both, f"A={a} B={b}", "=="))
    return rows


def _ulrich_kernel(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects() + [ws.free_name]:
        inv = ws.inv(m)
        if inv.length == 0 or not inv.is_min_mult:
            continue
        mod = ws.mod(m)
        mm = mod.m_image
        candidates = [("mM", mm)] + [(f"k*v{j}", mm[j : j + 1]) for j in range(min(3, mm.shape[0]))]
        for label, rows_ in candidates:
            if rows_.shape[0] == 0:
                continue
            kernel = submodule(mod, rows_)
            image = quotient(mod, rows_)
            same_mu = module_invariants(image).mu == inv.mu
            if not same_mu:
                continue
            k_inv = module_invariants(kernel)
            ok = kernel.dim == 0 or k_inv.is_ulrich
            rows.append(EvidenceRow(None, "Ulrich" if k_inv.is_ulrich else "not Ulrich", "zero or Ulrich", ok, f"M={m} U={label}", "=="))
    return rows


def _matlis(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    kmod = ws.mod(ws.k_name)
    for m in ws.subjects():
        i = ws.inv(m)
        d = module_invariants(ws.dual(m))
        rows.append(_int_row(None, d.length, i.length, f"length M={m}", "=="))
        rows.append(_int_row(None, d.mu, i.type, f"mu(dual)=type M={m}", "=="))
        rows.append(_int_row(None, d.type, i.mu, f"type(dual)=mu M={m}", "=="))
        beta = ws.seq("betti", m)
        for n in range(ws.depth + 1):
            # Bass numbers of the dual through Ext(k, -), Betti numbers through the resolution
            e = ext_homology(kmod, ws.dual(m), n).length
            rows.append(_int_row(n, e, beta[n], f"bass(dual)=betti M={m}", "=="))
        q1 = ws.quantity("cx", "betti", m)
        rows.append(_quantity_eq(_dual_bass_quantity(ws, m, "cx"), q1, f"injcx(dual)=cx M={m}"))
        rows.append(_quantity_eq(_dual_bass_quantity(ws, m, "curv"), ws.quantity("curv", "betti", m), f"injcurv(dual)=curv M={m}"))
    return rows


def _dual_bass_quantity(ws: Workspace, m: str, stat: str) -> Quantity:
    name = f"{m}^v"
    if name not in ws._mods:
        ws._mods[name] = ws.dual(m)
    return ws.quantity(stat, "bass", name)


def _quantity_eq(a: Quantity, b: Quantity, subject: str) -> EvidenceRow:
    if a.value is None or b.value is None:
        return EvidenceRow(None, a.text, b.text, None, subject, "==")
    return EvidenceRow(None, a.text, b.text, compare(a.value, b.value) == 0, subject, "==")


def _ext_tor(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for l, m in _pairs(ws):
        for i, e, t, ok in ext_tor_duality_check(ws.mod(l), ws.mod(m), ws.depth):
            rows.append(EvidenceRow(i, e, t, ok, f"L={l} M={m}", "=="))
    return rows


def _trivial_ext(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects() + [ws.free_name]:
        inv = ws.inv(m)
        if inv.length == 0 or not inv.is_min_mult:
            continue
        b = {"X": m, "M": m}
        for c in (
            Clause("(1)", (_cxM, _icxM), (_cxXM,)),
            Clause("(1)", (_curvM, _icurvM), (_curvXM,)),
        ):
            rows.append(eval_clause(ws, c, b, f"M={m}"))
        q = ws.quantity("cx", "ext_mu", m, m)
        if q.value is None:
            rows.append(EvidenceRow(None, q.text, 0, None, f"(2) M={m}: cx(M,M)", "=="))
            continue
        if q.value != 0:
            continue  # Ext does not vanish eventually: (2) and (3) are vacuous
        free = ws.seq("betti", m)[1] == 0
        dual_free = ws.seq("bass", m)[1] == 0
        rows.append(
            EvidenceRow(None, f"pd {'finite' if free else '?'}, id {'finite' if dual_free else '?'}", "one finite", free or dual_free, f"(2) M={m}", "==")
        )
        labels = ws.instance.labels
        if labels.gorenstein:
            hyper = labels.ci and labels.codim <= 1
            rows.append(EvidenceRow(None, f"ci={labels.ci} codim={labels.codim}", "hypersurface", hyper, f"(3) M={m}", "=="))
    return rows


def _finite_pd_bass(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    ring_bass = ws.seq("bass", ws.free_name)
    two = "R^2"
    if two not in ws._mods:
        ws._mods[two] = free_module(ws.ring, 2)
    for n, v in enumerate(ws.seq("bass", two)):
        rows.append(_int_row(n, v, 2 * ring_bass[n], "bass(R^2)=2 bass(R)", "=="))
    icx_r = ws.quantity("cx", "bass", ws.free_name)
    icurv_r = ws.quantity("curv", "bass", ws.free_name)
    for m in ws.subjects() + [two]:
        if not _nonzero(ws, m):
            continue
        pd = ws.quantity("cx", "betti", m)
        if pd.value is None:
            rows.append(EvidenceRow(None, pd.text, 0, None, f"(1) M={m}: pd finite?", "=="))
        elif pd.value == 0:
            rows.append(_quantity_eq(ws.quantity("cx", "bass", m), icx_r, f"(1) M={m}: injcx"))
            rows.append(_quantity_eq(ws.quantity("curv", "bass", m), icurv_r, f"(1) M={m}: injcurv"))
        idim = ws.quantity("cx", "bass", m)
        if idim.value is None:
            rows.append(EvidenceRow(None, idim.text, 0, None, f"(2) N={m}: id finite?", "=="))
        elif idim.value == 0:
            rows.append(_quantity_eq(ws.quantity("cx", "betti", m), icx_r, f"(2) N={m}: cx"))
            rows.append(_quantity_eq(ws.quantity("curv", "betti", m), icurv_r, f"(2) N={m}: curv"))
    return rows


# characterizations of complete intersections


def _verdict_row(ws: Workspace, q: Quantity, subject: str) -> EvidenceRow:
    """curv <= 1 (or cx finite) against the CI label."""
    ci = ws.instance.labels.ci
    if q.value is None:
        return EvidenceRow(None, q.text, f"ci={ci}", None, subject, "iff")
    verdict = compare(q.value, 1) <= 0 if q.name.startswith(("curv", "injcurv")) else q.value is not sympy.oo
    return EvidenceRow(None, f"{q.name}={q.text}", f"ci={ci}", verdict == ci, subject, "iff")


def _char_ci(ws: Workspace) -> list[EvidenceRow]:
    k = ws.k_name
    curv = ws.quantity("curv", "betti", k)
    rows = [_verdict_row(ws, curv, "curv(k)<=1 iff ci")]
    rows.append(_verdict_row(ws, ws.quantity("cx", "betti", k), "cx(k) finite iff ci"))
    if ws.instance.labels.ci:
        cx = ws.quantity("cx", "betti", k)
        if cx.value is None:
            rows.append(EvidenceRow(None, cx.text, ws.instance.labels.codim, None, "cx(k)=codim", "=="))
        else:
            rows.append(EvidenceRow(None, cx.text, ws.instance.labels.codim, compare(cx.value, ws.instance.labels.codim) == 0, "cx(k)=codim", "=="))
    return rows


def _char_ci_modules(ws: Workspace, min_mult: bool) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects():
        i = ws.inv(m)
        if i.length == 0 or (min_mult and not i.is_min_mult):
            continue
        if min_mult:
            proj = i.length >= 2 * i.type
            inj = i.length >= 2 * i.mu
        else:
            proj = i.length <= 2 * i.mu
            inj = i.length <= 2 * i.type
        if proj:
            rows.append(_verdict_row(ws, ws.quantity("cx", "betti", m), f"(proj) M={m}: cx finite iff ci"))
            rows.append(_verdict_row(ws, ws.quantity("curv", "betti", m), f"(proj) M={m}: curv<=1 iff ci"))
        if inj:
            rows.append(_verdict_row(ws, ws.quantity("cx", "bass", m), f"(inj) M={m}: injcx finite iff ci"))
            rows.append(_verdict_row(ws, ws.quantity("curv", "bass", m), f"(inj) M={m}: injcurv<=1 iff ci"))
    return rows


def _pair_conditions(i_m: ModuleInvariants, i_n: ModuleInvariants, level: str) -> list[str]:
    """Names of the satisfied conditions of the pair characterization at a strictness level."""
    e_m, e_n = i_m.length, i_n.length

    def le(a, b, strict):
        return a < b if strict else a <= b

    def ge(a, b, strict):
        return a > b if strict else a >= b

    out = []
    # each condition: (name, [(kind, strictness index)]) with kinds for M then N
    base = {
        "1": lambda s1, s2: le(e_m, 2 * i_m.mu, s1) and le(e_n, 2 * i_n.type, s2),
        "2": lambda s1, s2: le(e_m, 2 * i_m.mu, s1) and ge(e_n, 2 * i_n.mu, s2) and i_n.is_min_mult,
        "3": lambda s1, s2: ge(e_m, 2 * i_m.type, s1) and i_m.is_min_mult and le(e_n, 2 * i_n.type, s2),
        "4": lambda s1, s2: ge(e_m, 2 * i_m.type, s1) and ge(e_n, 2 * i_n.mu, s2) and i_m.is_min_mult and i_n.is_min_mult,
    }
    for name, cond in base.items():
        if level == "weak" and cond(False, False):
            out.append(name)
        elif level == "mixed":
            if cond(True, False):
                out.append(name + "A" if name in ("2", "3", "4") else name + "B")
            if cond(False, True):
                out.append(name + "B" if name in ("2", "3", "4") else name + "A")
        elif level == "strict" and cond(True, True):
            out.append(name)
    return out


_PAIR_LEVELS = {"CHAR-CI-7-1": ("weak", 2, 2), "CHAR-CI-7-4": ("mixed", 1, 1), "CHAR-CI-7-5": ("strict", 0, 0)}


def _char_ci_pairs(ws: Workspace, check: str) -> list[EvidenceRow]:
    """sup{cx M, injcx M} + sup{injcx N, cx N} <= a + 2 cx(M,N) and the CI equivalences."""
    level, codim_extra, sum_extra = _PAIR_LEVELS[check]
    rows = []
    ci, codim = ws.instance.labels.ci, ws.instance.labels.codim
    for m, n in _pairs(ws):
        if not (_nonzero(ws, m) and _nonzero(ws, n)):
            continue
        conds = _pair_conditions(ws.inv(m), ws.inv(n), level)
        if not conds:
            continue
        s = f"M={m} N={n} cond {'/'.join(conds)}"
        cx_mn = ws.quantity("cx", "ext_mu", m, n)
        curv_mn = ws.quantity("curv", "ext_mu", m, n)
        parts = [ws.quantity("cx", "betti", m), ws.quantity("cx", "bass", m), ws.quantity("cx", "bass", n), ws.quantity("cx", "betti", n)]
        bound = f"{sum_extra}+2*{cx_mn.text}"
        if cx_mn.value is not None and cx_mn.value is sympy.oo:
            rows.append(EvidenceRow(None, "sum", bound, True, f"{s}: sum bound", "<="))
        elif any(p.value is None for p in parts) or cx_mn.value is None:
            rows.append(EvidenceRow(None, "sum", bound, None, f"{s}: sum bound", "<="))
        else:
            total = sup(parts[0].value, parts[1].value) + sup(parts[2].value, parts[3].value)
            rhs = sum_extra + 2 * cx_mn.value
            rows.append(EvidenceRow(None, _show(total), _show(rhs), compare(total, rhs) <= 0, f"{s}: sum bound", "<="))
        rows.append(_verdict_row(ws, cx_mn, f"{s}: cx(M,N) finite iff ci"))
        rows.append(_verdict_row(ws, curv_mn, f"{s}: curv(M,N)<=1 iff ci"))
        if ci:
            if cx_mn.value is None:
                rows.append(EvidenceRow(None, codim, f"{codim_extra}+{cx_mn.text}", None, f"{s}: codim bound", "<="))
            else:
                rhs = codim_extra + cx_mn.value
                rows.append(EvidenceRow(None, codim, _show(rhs), compare(codim, rhs) <= 0, f"{s}: codim bound", "<="))
    return rows


def _ci_tor(ws: Workspace) -> list[EvidenceRow]:
    labels = ws.instance.labels
    if not labels.ci:
        return []
    rows = []
    for m, n in _pairs(ws):
        if not (_nonzero(ws, m) and _nonzero(ws, n)):
            continue
        cm, cn = ws.quantity("cx", "betti", m), ws.quantity("cx", "betti", n)
        t = ws.quantity("cx", "tor_mu", m, n)
        s = f"M={m} N={n}"
        if None in (cm.value, cn.value, t.value):
            rows.append(EvidenceRow(None, f"{cm.text}+{cn.text}-{labels.codim}", t.text, None, f"(1) {s}: lower", "<="))
            rows.append(EvidenceRow(None, t.text, f"min{{{cm.text}, {cn.text}}}", None, f"(1) {s}: upper", "<="))
            continue
        low = cm.value + cn.value - labels.codim
        rows.append(EvidenceRow(None, _show(low), t.text, compare(low, t.value) <= 0, f"(1) {s}: lower", "<="))
        hi = cm.value if compare(cm.value, cn.value) <= 0 else cn.value
        rows.append(EvidenceRow(None, t.text, _show(hi), compare(t.value, hi) <= 0, f"(1) {s}: upper", "<="))
        if labels.codim <= 1 and t.value == 0:
            ok = cm.value == 0 or cn.value == 0
            rows.append(EvidenceRow(None, f"cx {cm.text}, {cn.text}", "one is 0", ok, f"(2) {s}", "=="))
    return rows


# sequence-calculus lemmas on instance sequences


def _lemma_row(ws: Workspace, lemma: str, inputs: dict, subject: str) -> EvidenceRow:
    res = check_sequence_lemma(lemma, inputs)
    holds = {"pass": True, "fail": False}.get(res.status)
    return EvidenceRow(None, res.detail, "hypothesis " + ("holds" if res.hypothesis else "fails"), holds, subject, "lemma")


def _confirmed_depth(ws: Workspace, *keys) -> int | None:
    depths = []
    for key in keys:
        r, d = ws.report(*key)
        if r is None or not r.exact:
            return None
        depths.append(d)
    return max(depths)


def _seq_domination(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    k = ws.k_name
    for m in ws.subjects():
        if not _nonzero(ws, m):
            continue
        d = _confirmed_depth(ws, ("betti", m, None), ("betti", k, None))
        if d is None:
            rows.append(EvidenceRow(None, "?", "?", None, f"M={m}", "lemma"))
            continue
        inputs = {"a": ws.seq("betti", m, None, d), "b": ws.seq("betti", k, None, d), "w": ws.inv(m).length}
        rows.append(_lemma_row(ws, "domination", inputs, f"betti(M) vs betti(k) M={m}"))
    return rows


def _seq_recursion(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for x, m in _pairs(ws):
        i = ws.inv(m)
        if i.length == 0 or not _nonzero(ws, x):
            continue
        d = _confirmed_depth(ws, ("betti", x, None), ("tor_len", x, m))
        if d is None:
            rows.append(EvidenceRow(None, "?", "?", None, f"X={x} M={m}", "lemma"))
            continue
        tor = ws.seq("tor_len", x, m, d)
        inputs = {
            "x": ws.seq("betti", x, None, d),
            "y": tor[1:],
            "a": Fraction(1, i.mu),
            "b": Fraction(i.length - i.mu, i.mu),
        }
        rows.append(_lemma_row(ws, "recursion", inputs, f"betti(X) against Tor lengths X={x} M={m}"))
    return rows


def _seq_shift_sum(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects():
        if not _nonzero(ws, m):
            continue
        d = _confirmed_depth(ws, ("betti", m, None))
        if d is None:
            rows.append(EvidenceRow(None, "?", "?", None, f"M={m}", "lemma"))
            continue
        rows.append(_lemma_row(ws, "shift_sum", {"x": ws.seq("betti", m, None, d + 1), "a": 1, "b": 1}, f"M={m}"))
    return rows


def _seq_sum(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    s = ws.subjects()
    for i, a in enumerate(s):
        for b in s[i + 1 :]:
            name = f"{a}+{b}"
            if name not in ws._mods:
                ws._mods[name] = direct_sum(ws.mod(a), ws.mod(b))
            total = ws.seq("betti", name)
            xa, xb = ws.seq("betti", a), ws.seq("betti", b)
            for n in range(ws.depth + 1):
                rows.append(_int_row(n, total[n], xa[n] + xb[n], f"betti(A+B) A={a} B={b}", "=="))
            d = _confirmed_depth(ws, ("betti", a, None), ("betti", b, None), ("betti", name, None))
            if d is None:
                rows.append(EvidenceRow(None, "?", "?", None, f"A={a} B={b}", "lemma"))
                continue
            rows.append(_lemma_row(ws, "sum", {"x": ws.seq("betti", a, None, d), "y": ws.seq("betti", b, None, d)}, f"A={a} B={b}"))
    return rows


def _seq_laurent(ws: Workspace) -> list[EvidenceRow]:
    rows = []
    for m in ws.subjects():
        if not _nonzero(ws, m):
            continue
        name = f"syz({m})"
        if name not in ws._mods:
            ws._mods[name] = syzygy(ws.mod(m))
        d = _confirmed_depth(ws, ("betti", m, None))
        if d is None:
            rows.append(EvidenceRow(None, "?", "?", None, f"M={m}", "lemma"))
            continue
        inputs = {"a": ws.seq("betti", name, None, d), "b": ws.seq("betti", m, None, d + 1), "c": [0, 1]}
        rows.append(_lemma_row(ws, "laurent", inputs, f"betti(syzygy) against shifted betti M={m}"))
    return rows


# ---------------------------------------------------------------- catalog


@dataclass(frozen=True)
class CheckSpec:
    id: str
    summary: str
    body: Callable[[Workspace], list[EvidenceRow]]


def _spec(id_, summary, body) -> CheckSpec:
    return CheckSpec(id_, summary, body)


CATALOG: dict[str, CheckSpec] = {
    c.id: c
    for c in [
        _spec("SEQ-DOMINATION", "a_n <= w(b_n + b_{n-1}) bounds cx and curv", _seq_domination),
        _spec("SEQ-RECURSION", "x_{n+1} <= b x_n + a y_n bounds curv by sup{b, curv y}", _seq_recursion),
        _spec("SEQ-SHIFT-SUM", "curv(a x_{n+1} + b x_n) = curv(x)", _seq_shift_sum),
        _spec("SEQ-SUM", "cx and curv of a sum are at most the sup", _seq_sum),
        _spec("SEQ-LAURENT", "a_n = sum c_i b_{n+i} bounds cx and curv of b", _seq_laurent),
        _spec("LEM-5-1", "Betti and Bass growth against a finite-length test module", _lem_finite_length),
        _spec("PROP-5-2", "cx and curv bounds from a finite-length test module", _prop_finite_length),
        _spec("THM-5-3", "cx and curv bounds from a CM test module", _thm_cm),
        _spec("COR-5-4", "cx and curv of k against a CM module", _cor_residue),
        _spec("LEM-6-1", "Betti and Bass growth against a module with m^2 M = 0", _lem_min_mult),
        _spec("PROP-6-2", "cx and curv bounds from a module with m^2 M = 0", _prop_min_mult),
        _spec("COR-6-5", "cx and curv of k against a minimal-multiplicity module", _cor_min_mult),
        _spec("THM-4-3", "e >= max{mu, type}; e = mu iff e = type iff Ulrich", _e_mu_type),
        _spec("DIRECT-SUM", "minimal multiplicity of a direct sum", _direct_sum),
        _spec("ULRICH-KERNEL", "kernels of mu-preserving surjections from min-mult modules", _ulrich_kernel),
        _spec("DUAL-3-12", "Matlis duality swaps Betti and Bass data", _matlis),
        _spec("EXT-TOR-DUALITY", "dim Ext^i(L, M^v) = dim Tor_i(L, M)", _ext_tor),
        _spec("THM-6-7", "trivial Ext vanishing for minimal-multiplicity modules", _trivial_ext),
        _spec("PROP-7-7", "finite pd or id pins injcx and cx to those of R", _finite_pd_bass),
        _spec("CHAR-CI", "curv(k) <= 1 iff complete intersection; cx(k) = codim", _char_ci),
        _spec("CHAR-CI-5-6", "CI criteria from a module with e <= 2mu or e <= 2type", lambda ws: _char_ci_modules(ws, False)),
        _spec("CHAR-CI-6-6", "CI criteria from a min-mult module with e >= 2type or e >= 2mu", lambda ws: _char_ci_modules(ws, True)),
        _spec("CHAR-CI-7-1", "pair criterion, weak conditions: codim <= 2 + cx(M,N)", lambda ws: _char_ci_pairs(ws, "CHAR-CI-7-1")),
        _spec("CHAR-CI-7-4", "pair criterion, one strict condition: codim <= 1 + cx(M,N)", lambda ws: _char_ci_pairs(ws, "CHAR-CI-7-4")),
        _spec("CHAR-CI-7-5", "pair criterion, strict conditions: codim <= cx(M,N)", lambda ws: _char_ci_pairs(ws, "CHAR-CI-7-5")),
        _spec("CI-TOR", "Tor complexity bounds over complete intersections", _ci_tor),
    ]
}

_ID = re.compile(r"^([A-Z0-9-]+)(\(\w+\))?$")


def _parse_id(check_id: str) -> tuple[str, str | None]:
    m = _ID.match(check_id.strip())
    if not m or m.group(1) not in CATALOG:
        raise UnknownCheckError(f"unknown check {check_id!r}")
    return m.group(1), m.group(2)


def select_checks(selector: str | Iterable[str]) -> list[str]:
    """Expand `all` or a comma-separated list into validated check ids."""
    if isinstance(selector, str):
        if selector.strip() == "all":
            return list(CATALOG)
        selector = [s for s in selector.split(",") if s.strip()]
    out = []
    for s in selector:
        _parse_id(s)
        out.append(s.strip())
    return out


def workspace(instance: CorpusInstance, depth: int) -> Workspace:
    cache = instance.__dict__.setdefault("_workspaces", {})
    if depth not in cache:
        cache[depth] = Workspace(instance, depth)
    return cache[depth]


def _row_key(r: EvidenceRow):
    return (r.n is None, r.n if r.n is not None else 0, r.subject)


def run_check(check_id: str, instance: CorpusInstance, depth: int = 6) -> CheckResult:
    base, part = _parse_id(check_id)
    spec = CATALOG[base]
    start = time.perf_counter()
    diagnostics: list[str] = []
    try:
        ws = workspace(instance, depth)
        before = len(ws.notes)
        rows = spec.body(ws)
        diagnostics.extend(ws.notes[before:])
    except BudgetExceededError as exc:
        ms = (time.perf_counter() - start) * 1000
        return CheckResult(check_id, instance.name, depth, "inconclusive", (), ms, (f"inconclusive: budget: {exc}",))
    if part is not None:
        rows = [r for r in rows if r.subject.startswith(part)]
    rows = sorted(rows, key=_row_key)
    if any(r.holds is False for r in rows):
        status = "fail"
    elif any(r.holds is None for r in rows):
        status = "inconclusive"
        diagnostics.append("inconclusive: estimator")
    else:
        status = "pass"
    if not rows:
        diagnostics.append("vacuous: no subject satisfies the hypotheses")
    ms = (time.perf_counter() - start) * 1000
    log.debug("%s on %s: %s in %.0f ms", check_id, instance.name, status, ms)
    return CheckResult(check_id, instance.name, depth, status, tuple(rows), ms, tuple(diagnostics))


def run_catalog(instances: Sequence[CorpusInstance], checks: Sequence[str], depth: int = 6) -> list[CheckResult]:
    """Every (instance, check) result, ordered by instance then check."""
    out = []
    for inst in sorted(instances, key=lambda i: i.name):
        for cid in sorted(checks):
            if inst.error is not None:
                out.append(CheckResult(cid, inst.name, depth, "inconclusive", (), 0.0, (f"inconclusive: {inst.error}",)))
                continue
            out.append(run_check(cid, inst, depth))
    return out


__all__ = [
    "CATALOG",
    "CheckResult",
    "EvidenceRow",
    "Workspace",
    "run_catalog",
    "run_check",
    "select_checks",
]
