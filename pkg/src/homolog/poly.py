"""Polynomials over GF(p) or QQ, Buchberger under deglex, normal forms.

Monomials are exponent tuples.  Deglex compares total degree first and
breaks ties lexicographically with x1 > x2 > ...; the sort key is
`(sum(e), e)`.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import ConstantTermError, DegreeCapError, NotMPrimaryError, PolynomialParseError
from .linalg import Field

Monomial = tuple[int, ...]

DEFAULT_DEGREE_CAP = 64


def deglex_key(m: Monomial) -> tuple[int, Monomial]:
    return (sum(m), m)


def divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Polynomial:
    """Immutable sparse polynomial; zero coefficients are never stored."""

    __slots__ = ("field", "nvars", "_c", "_lm")

    def __init__(self, field: Field, nvars: int, coeffs: Mapping[Monomial, object] | None = None):
        self.field = field
        self.nvars = nvars
        c = {}
        for m, v in (coeffs or {}).items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
            v = field.coerce(v)
            if v != 0:
                c[tuple(m)] = v
        self._c = c
        self._lm: Monomial | None = max(c, key=deglex_key) if c else None

    @classmethod
    def _raw(cls, field: Field, nvars: int, c: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.field, p.nvars, p._c = field, nvars, c
        p._lm = max(c, key=deglex_key) if c else None
        return p

    @classmethod
    def monomial(cls, field: Field, m: Monomial, coeff=1) -> "Polynomial":
        return cls(field, len(m), {tuple(m): coeff})

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "Polynomial":
        return cls._raw(field, nvars, {})

    def coeffs(self) -> dict[Monomial, object]:
        return dict(self._c)

    def terms(self) -> list[tuple[object, Monomial]]:
        """(coefficient, monomial) pairs, descending deglex."""
        return [(self._c[m], m) for m in sorted(self._c, key=deglex_key, reverse=True)]

    def coeff(self, m: Monomial):
        return self._c.get(tuple(m), self.field.coerce(0))

    def is_zero(self) -> bool:
        return not self._c

    @property
    def leading_monomial(self) -> Monomial:
        if self._lm is None:
            raise ValueError("zero polynomial has no leading monomial")
        return self._lm

    @property
    def leading_coeff(self):
        return self._c[self.leading_monomial]

    def degree(self) -> int:
        return max((sum(m) for m in self._c), default=-1)

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def _check(self, other: "Polynomial") -> None:
        if other.field != self.field or other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        c = dict(self._c)
        f = self.field
        for m, v in other._c.items():
            s = f.coerce(c.get(m, 0) + v)
            if s:
                c[m] = s
            else:
                c.pop(m, None)
        return Polynomial._raw(f, self.nvars, c)

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def scale(self, a) -> "Polynomial":
        f = self.field
        a = f.coerce(a)
        if a == 0:
            return Polynomial.zero(f, self.nvars)
        return Polynomial._raw(f, self.nvars, {m: f.coerce(v * a) for m, v in self._c.items()})

    def mul_term(self, a, mono: Monomial) -> "Polynomial":
        f = self.field
        a = f.coerce(a)
        if a == 0:
            return Polynomial.zero(f, self.nvars)
        return Polynomial._raw(f, self.nvars, {mono_mul(m, mono): f.coerce(v * a) for m, v in self._c.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = Polynomial.zero(self.field, self.nvars)
        for m, v in other._c.items():
            out = out + self.mul_term(v, m)
        return out

    def monic(self) -> "Polynomial":
        return self.scale(self.field.inv(self.leading_coeff))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Polynomial)
            and other.field == self.field
            and other.nvars == self.nvars
            and other._c == self._c
        )

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self._c.items())))

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"


def format_polynomial(p: Polynomial, variables: Sequence[str] | None = None) -> str:
    names = list(variables) if variables else [f"x{i + 1}" for i in range(p.nvars)]
    if p.is_zero():
        return "0"
    out = []
    for c, m in p.terms():
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
        coeff = str(c)
        if factors:
            body = "*".join(factors) if coeff == "1" else "*".join([coeff] + factors)
        else:
            body = coeff
        out.append(body)
    return " + ".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\^)|(\*)|([+-]))")


def parse_polynomial(text: str, variables: Sequence[str], field: Field) -> Polynomial:
    """Parse `[int][*]var[^exp]` products joined by + and -."""
    index = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    toks: list[tuple[str, str, int]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        if not m or m.end() == pos:
            raise PolynomialParseError(f"unexpected character {stripped[pos]!r} at column {pos + 1}")
        kind = ("int", "var", "pow", "mul", "sign")[m.lastindex - 1]
        toks.append((kind, m.group(m.lastindex), m.start(m.lastindex) + 1))
        pos = m.end()
    if not toks:
        raise PolynomialParseError("empty polynomial at column 1")

    i = 0

    def peek() -> tuple[str, str, int] | None:
        return toks[i] if i < len(toks) else None

    result: dict[Monomial, object] = {}
    first = True
    while i < len(toks):
        sign = 1
        t = peek()
        if t[0] == "sign":
            sign = -1 if t[1] == "-" else 1
            i += 1
        elif not first:
            raise PolynomialParseError(f"expected + or - at column {t[2]}")
        first = False
        coeff = sign
        exps = [0] * n
        seen = False
        while True:
            t = peek()
            if t is None or t[0] == "sign":
                break
            if seen:
                if t[0] == "mul":
                    i += 1
                    t = peek()
                    if t is None:
                        raise PolynomialParseError("dangling '*' at end of input")
                elif not (t[0] == "var"):
                    raise PolynomialParseError(f"unexpected {t[1]!r} at column {t[2]}")
            if t[0] == "int":
                coeff *= int(t[1])
                i += 1
            elif t[0] == "var":
                if t[1] not in index:
                    raise PolynomialParseError(f"unknown variable {t[1]!r} at column {t[2]}")
                v = index[t[1]]
                i += 1
                e = 1
                if peek() is not None and peek()[0] == "pow":
                    caret = peek()[2]
                    i += 1
                    t2 = peek()
                    if t2 is None or t2[0] != "int":
                        where = t2[2] if t2 is not None else caret + 1
                        raise PolynomialParseError(f"expected exponent after '^' at column {where}")
                    e = int(t2[1])
                    i += 1
                exps[v] += e
            else:
                raise PolynomialParseError(f"unexpected {t[1]!r} at column {t[2]}")
            seen = True
        if not seen:
            raise PolynomialParseError("missing term after sign")
        key = tuple(exps)
        result[key] = result.get(key, 0) + coeff
    return Polynomial(field, n, result)


@dataclass(frozen=True)
class GroebnerBasis:
    field: Field
    nvars: int
    generators: tuple[Polynomial, ...]
    order: str = "deglex"

    @property
    def leading_monomials(self) -> list[Monomial]:
        return [g.leading_monomial for g in self.generators]


def _reduce(f: Polynomial, basis: Sequence[Polynomial]) -> Polynomial:
    """Full reduction of f modulo basis (leading coefficients need not be 1)."""
    field = f.field
    work = dict(f._c)
    rem: dict[Monomial, object] = {}
    lms = [(g.leading_monomial, g) for g in basis]
    while work:
        m = max(work, key=deglex_key)
        c = work[m]
        for lm, g in lms:
            if divides(lm, m):
                q = field.coerce(c * field.inv(g.leading_coeff))
                shift = mono_div(m, lm)
                for gm, gv in g._c.items():
                    t = mono_mul(gm, shift)
                    s = field.coerce(work.get(t, 0) - q * gv)
                    if s:
                        work[t] = s
                    else:
                        work.pop(t, None)
                break
        else:
            rem[m] = c
            del work[m]
    return Polynomial._raw(field, f.nvars, rem)


def _spoly(f: Polynomial, g: Polynomial) -> Polynomial:
    lcm = mono_lcm(f.leading_monomial, g.leading_monomial)
    a = f.mul_term(f.field.inv(f.leading_coeff), mono_div(lcm, f.leading_monomial))
    b = g.mul_term(g.field.inv(g.leading_coeff), mono_div(lcm, g.leading_monomial))
    return a - b


def buchberger(gens: Iterable[Polynomial], degree_cap: int = DEFAULT_DEGREE_CAP) -> GroebnerBasis:
    """Reduced monic deglex Groebner basis of an ideal inside the maximal ideal."""
    gens = list(gens)
    if not gens:
        raise ValueError("buchberger needs at least one generator to fix the ring")
    field, nvars = gens[0].field, gens[0].nvars
    for g in gens:
        if g.constant_term() != 0:
            raise ConstantTermError(f"generator {format_polynomial(g)} has a nonzero constant term")
    basis = [g.monic() for g in gens if not g.is_zero()]
    for g in basis:
        if g.degree() > degree_cap:
            raise DegreeCapError(f"generator degree {g.degree()} exceeds cap {degree_cap}")
    pairs = [(i, j) for j in range(len(basis)) for i in range(j)]
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: deglex_key(mono_lcm(basis[ij[0]].leading_monomial, basis[ij[1]].leading_monomial)))
        i, j = pairs.pop(0)
        a, b = basis[i].leading_monomial, basis[j].leading_monomial
        if all(x == 0 or y == 0 for x, y in zip(a, b)):
            continue  # coprime leading monomials
        lcm = mono_lcm(a, b)
        if sum(lcm) > degree_cap:
            raise DegreeCapError(f"S-polynomial degree {sum(lcm)} exceeds cap {degree_cap}")
        r = _reduce(_spoly(basis[i], basis[j]), basis)
        if not r.is_zero():
            basis.append(r.monic())
            k = len(basis) - 1
            pairs.extend((t, k) for t in range(k))
    return GroebnerBasis(field, nvars, tuple(_interreduce(basis)))


def _interreduce(basis: list[Polynomial]) -> list[Polynomial]:
    minimal: list[Polynomial] = []
    for g in sorted(basis, key=lambda p: deglex_key(p.leading_monomial)):
        if not any(divides(h.leading_monomial, g.leading_monomial) for h in minimal):
            minimal.append(g)
    out = []
    for k, g in enumerate(minimal):
        others = minimal[:k] + minimal[k + 1 :]
        tail = g - Polynomial.monomial(g.field, g.leading_monomial, g.leading_coeff)
        out.append((Polynomial.monomial(g.field, g.leading_monomial) + _reduce(tail, others)).monic())
    return out


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    if f.is_zero() or not gb.generators:
        return f
    return _reduce(f, gb.generators)


def standard_monomials(gb: GroebnerBasis) -> list[Monomial]:
    """Monomials outside the leading-term ideal.

    Sorted by ascending degree, then x1 before x2 within a degree, so the
    list starts 1, x1, x2, ...
    """
    lms = gb.leading_monomials
    n = gb.nvars
    for v in range(n):
        if not any(lm[v] > 0 and sum(lm) == lm[v] for lm in lms):
            raise NotMPrimaryError(f"no pure power of variable {v + 1} among the leading monomials")
    start = (0,) * n
    if any(divides(lm, start) for lm in lms):
        return []
    seen = {start}
    queue = deque([start])
    while queue:
        m = queue.popleft()
        for v in range(n):
            nxt = m[:v] + (m[v] + 1,) + m[v + 1 :]
            if nxt in seen or any(divides(lm, nxt) for lm in lms):
                continue
            seen.add(nxt)
            queue.append(nxt)
    return sorted(seen, key=lambda m: (sum(m), tuple(-e for e in m)))


__all__ = [
    "DEFAULT_DEGREE_CAP",
    "GroebnerBasis",
    "Monomial",
    "Polynomial",
    "buchberger",
    "deglex_key",
    "divides",
    "format_polynomial",
    "mono_mul",
    "normal_form",
    "parse_polynomial",
    "standard_monomials",
]
