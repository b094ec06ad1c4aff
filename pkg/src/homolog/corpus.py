"""Corpus files: rings with ground-truth labels and named modules over them.

A corpus is a sequence of `[ring]` and `[module]` sections.  Headers repeat,
which plain TOML forbids, so the text is split on headers and each body is
read as its own TOML document.  Line numbers in errors refer to the file.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Any

import tomli

from .algebra import ArtinAlgebra, build_algebra
from .errors import CorpusError, HomologError, PolynomialParseError
from .linalg import field_for
from .modules import (
    ModulePresentation,
    ModuleRealization,
    free_module,
    matlis_dual,
    realize,
    residue_field,
)
from .poly import parse_polynomial

_HEADER = re.compile(r"^\s*\[(ring|module)\]\s*(#.*)?$")
_RING_KEYS = {"name", "char", "vars", "ideal", "labels"}
_MODULE_KEYS = {"name", "ring", "matrix", "gens", "dual"}
_LABEL_KEYS = {"ci", "codim", "gorenstein", "notes"}


@dataclass(frozen=True)
class Labels:
    ci: bool
    codim: int
    gorenstein: bool
    notes: str = ""


@dataclass(frozen=True)
class RingSpec:
    name: str
    char: int
    vars: tuple[str, ...]
    ideal: tuple[str, ...]
    labels: Labels
    line: int


@dataclass(frozen=True)
class ModuleSpec:
    name: str
    ring: str
    matrix: tuple[tuple[str, ...], ...]
    gens: int | None
    dual: str | None
    line: int


@dataclass(eq=False)
class CorpusInstance:
    """One ring with its modules.  The ring is built on load, modules on demand."""

    spec: RingSpec
    modules: dict[str, ModuleSpec] = field(default_factory=dict)
    error: HomologError | None = None
    _algebra: ArtinAlgebra | None = field(default=None, repr=False)
    _realized: dict[str, ModuleRealization] = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.spec.name

    @property
    def labels(self) -> Labels:
        return self.spec.labels

    @property
    def ring(self) -> ArtinAlgebra:
        if self.error is not None:
            raise self.error
        assert self._algebra is not None
        return self._algebra

    @property
    def module_names(self) -> list[str]:
        return list(self.modules)

    def module(self, name: str) -> ModuleRealization:
        if name in self._realized:
            return self._realized[name]
        if name == "k" and name not in self.modules:
            out = residue_field(self.ring)
        else:
            spec = self.modules[name]
            if spec.dual is not None:
                out = matlis_dual(self.module(spec.dual))
            elif not spec.matrix:
                out = free_module(self.ring, spec.gens or 0)
            else:
                out = realize(ModulePresentation.from_strings(self.ring, spec.matrix, spec.gens))
        self._realized[name] = out
        return out

    @cached_property
    def residue(self) -> ModuleRealization:
        return self.module("k")


# ---------------------------------------------------------------- parsing


def _sections(text: str) -> list[tuple[str, int, str]]:
    """(kind, header line, body) for every section; body keeps its own line count."""
    out: list[tuple[str, int, list[str]]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        m = _HEADER.match(line)
        if m:
            out.append((m.group(1), lineno, []))
            continue
        if out:
            out[-1][2].append(line)
            continue
        stripped = line.split("#", 1)[0].strip()
        if stripped:
            raise CorpusError("content before the first [ring] or [module] header", lineno, 1)
    return [(k, n, "\n".join(body)) for k, n, body in out]


def _key_line(body: str, start: int, key: str) -> int:
    pat = re.compile(rf"^\s*{re.escape(key)}\s*=")
    for i, line in enumerate(body.splitlines(), start=1):
        if pat.match(line):
            return start + i
    return start


def _load_table(body: str, start: int) -> dict[str, Any]:
    try:
        return tomli.loads(body)
    except tomli.TOMLDecodeError as exc:
        line = getattr(exc, "lineno", None)
        col = getattr(exc, "colno", None)
        msg = getattr(exc, "msg", str(exc))
        raise CorpusError(msg, start + line if line else start, col) from None


def _require(table: dict, key: str, kind: type, body: str, start: int, what: str):
    if key not in table:
        raise CorpusError(f"{what} section is missing `{key}`", start, 1)
    value = table[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise CorpusError(f"`{key}` must be {kind.__name__}", _key_line(body, start, key), 1)
    return value


def _string_list(table: dict, key: str, body: str, start: int) -> tuple[str, ...]:
    value = table.get(key, [])
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise CorpusError(f"`{key}` must be a list of strings", _key_line(body, start, key), 1)
    return tuple(value)


def _check_keys(table: dict, allowed: set[str], body: str, start: int, what: str) -> None:
    for key in table:
        if key not in allowed:
            raise CorpusError(f"unknown {what} key `{key}`", _key_line(body, start, key), 1)


def _poly_position(body: str, start: int, text: str) -> tuple[int, int]:
    """Line and column of the quoted string text inside a section body."""
    needle = f'"{text}"'
    for i, line in enumerate(body.splitlines(), start=1):
        col = line.find(needle)
        if col >= 0:
            return start + i, col + 2
    return start, 1


def _check_polynomial(text: str, variables, fld, body: str, start: int) -> None:
    try:
        parse_polynomial(text, variables, fld)
    except PolynomialParseError as exc:
        line, col = _poly_position(body, start, text)
        m = re.search(r"column (\d+)", str(exc))
        raise CorpusError(f"bad polynomial {text!r}: {exc}", line, col + int(m.group(1)) - 1 if m else col) from None


def _ring_spec(table: dict, body: str, start: int) -> RingSpec:
    _check_keys(table, _RING_KEYS, body, start, "ring")
    name = _require(table, "name", str, body, start, "ring")
    char = _require(table, "char", int, body, start, "ring")
    variables = _string_list(table, "vars", body, start)
    ideal = _string_list(table, "ideal", body, start)
    raw = table.get("labels", {})
    if not isinstance(raw, dict):
        raise CorpusError("`labels` must be an inline table", _key_line(body, start, "labels"), 1)
    for key in raw:
        if key not in _LABEL_KEYS:
            raise CorpusError(f"unknown label `{key}`", _key_line(body, start, "labels"), 1)
    labels = Labels(
        ci=bool(raw.get("ci", False)),
        codim=int(raw.get("codim", 0)),
        gorenstein=bool(raw.get("gorenstein", False)),
        notes=str(raw.get("notes", "")),
    )
    try:
        fld = field_for(char)
    except ValueError as exc:
        raise CorpusError(str(exc), _key_line(body, start, "char"), 1) from None
    for g in ideal:
        _check_polynomial(g, variables, fld, body, start)
    return RingSpec(name, char, variables, ideal, labels, start)


def _module_spec(table: dict, body: str, start: int, rings: dict[str, RingSpec]) -> ModuleSpec:
    _check_keys(table, _MODULE_KEYS, body, start, "module")
    name = _require(table, "name", str, body, start, "module")
    ring = _require(table, "ring", str, body, start, "module")
    if ring not in rings:
        raise CorpusError(f"module {name!r} refers to unknown ring {ring!r}", _key_line(body, start, "ring"), 1)
    spec = rings[ring]
    gens = table.get("gens")
    if gens is not None and (isinstance(gens, bool) or not isinstance(gens, int) or gens < 0):
        raise CorpusError("`gens` must be a non-negative integer", _key_line(body, start, "gens"), 1)
    dual = table.get("dual")
    if dual is not None and not isinstance(dual, str):
        raise CorpusError("`dual` must name a module", _key_line(body, start, "dual"), 1)
    raw = table.get("matrix", [])
    if not isinstance(raw, list) or not all(isinstance(r, list) and all(isinstance(e, str) for e in r) for r in raw):
        raise CorpusError("`matrix` must be a list of rows of strings", _key_line(body, start, "matrix"), 1)
    matrix = tuple(tuple(r) for r in raw)
    if dual is None:
        if not matrix and gens is None:
            raise CorpusError("an empty matrix needs `gens`", _key_line(body, start, "matrix"), 1)
        width = gens if gens is not None else len(matrix[0])
        if any(len(r) != width for r in matrix):
            raise CorpusError("every matrix row needs one entry per generator", _key_line(body, start, "matrix"), 1)
    elif matrix or gens is not None:
        raise CorpusError("`dual` cannot be combined with `matrix` or `gens`", _key_line(body, start, "dual"), 1)
    fld = field_for(spec.char)
    for row in matrix:
        for entry in row:
            _check_polynomial(entry, spec.vars, fld, body, start)
    return ModuleSpec(name, ring, matrix, gens, dual, start)


def parse_corpus(text: str) -> list[CorpusInstance]:
    rings: dict[str, RingSpec] = {}
    modules: dict[str, dict[str, ModuleSpec]] = {}
    for kind, start, body in _sections(text):
        table = _load_table(body, start)
        if kind == "ring":
            spec = _ring_spec(table, body, start)
            if spec.name in rings:
                raise CorpusError(f"duplicate ring name {spec.name!r}", _key_line(body, start, "name"), 1)
            rings[spec.name] = spec
            modules[spec.name] = {}
        else:
            mspec = _module_spec(table, body, start, rings)
            if mspec.name in modules[mspec.ring]:
                raise CorpusError(
                    f"duplicate module name {mspec.name!r} in ring {mspec.ring!r}", _key_line(body, start, "name"), 1
                )
            if mspec.dual is not None and mspec.dual not in modules[mspec.ring]:
                raise CorpusError(f"`dual` refers to unknown module {mspec.dual!r}", _key_line(body, start, "dual"), 1)
            modules[mspec.ring][mspec.name] = mspec
    out = []
    for name, spec in rings.items():
        inst = CorpusInstance(spec, modules[name])
        try:
            inst._algebra = build_algebra(spec.char, spec.vars, spec.ideal)
        except HomologError as exc:
            inst.error = exc
        out.append(inst)
    return out


def load_corpus(path: str | Path) -> list[CorpusInstance]:
    """Read a corpus file; `builtin:NAME` selects a built-in corpus."""
    text = str(path)
    if text.startswith("builtin:"):
        return parse_corpus(builtin_corpus(text.split(":", 1)[1]))
    return parse_corpus(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- built-in corpus

_P = 32003

_WORKED_EXAMPLES = """\
# Squares of the x-ideal and of y; M = (y) is isomorphic to R/(y).
[ring]
name = "sq-ideal-b2"
char = {p}
vars = ["x1","x2","y"]
ideal = ["x1^2","x1*x2","x2^2","y^2"]
labels = {{ ci = false, codim = 3, gorenstein = false }}

[module]
name = "M"
ring = "sq-ideal-b2"
matrix = [["y"]]

[ring]
name = "sq-ideal-b3"
char = {p}
vars = ["x1","x2","x3","y"]
ideal = ["x1^2","x1*x2","x1*x3","x2^2","x2*x3","x3^2","y^2"]
labels = {{ ci = false, codim = 4, gorenstein = false }}

[module]
name = "M"
ring = "sq-ideal-b3"
matrix = [["y"]]

# Square-zero maximal ideal; E is the injective hull, the dual of R.
[ring]
name = "m2zero-b2"
char = {p}
vars = ["x","y"]
ideal = ["x^2","x*y","y^2"]
labels = {{ ci = false, codim = 2, gorenstein = false }}

[module]
name = "R"
ring = "m2zero-b2"
matrix = []
gens = 1

[module]
name = "E"
ring = "m2zero-b2"
dual = "R"

[ring]
name = "m2zero-b3"
char = {p}
vars = ["x","y","z"]
ideal = ["x^2","x*y","x*z","y^2","y*z","z^2"]
labels = {{ ci = false, codim = 3, gorenstein = false }}

[module]
name = "R"
ring = "m2zero-b3"
matrix = []
gens = 1

[module]
name = "E"
ring = "m2zero-b3"
dual = "R"

# Hypersurfaces and complete intersections.
[ring]
name = "dual-numbers"
char = 0
vars = ["x"]
ideal = ["x^2"]
labels = {{ ci = true, codim = 1, gorenstein = true }}

[module]
name = "R"
ring = "dual-numbers"
matrix = []
gens = 1

[ring]
name = "ci-x2-y2"
char = 0
vars = ["x","y"]
ideal = ["x^2","y^2"]
labels = {{ ci = true, codim = 2, gorenstein = true }}

[module]
name = "Rx"
ring = "ci-x2-y2"
matrix = [["x"]]

[module]
name = "Rxy"
ring = "ci-x2-y2"
matrix = [["x","y"]]

[ring]
name = "ci-x3"
char = {p}
vars = ["x"]
ideal = ["x^3"]
labels = {{ ci = true, codim = 1, gorenstein = true }}

[module]
name = "Rx2"
ring = "ci-x3"
matrix = [["x^2"]]

[ring]
name = "ci-x2-y3"
char = {p}
vars = ["x","y"]
ideal = ["x^2","y^3"]
labels = {{ ci = true, codim = 2, gorenstein = true }}

[module]
name = "Rx"
ring = "ci-x2-y3"
matrix = [["x"]]

[module]
name = "Ry"
ring = "ci-x2-y3"
matrix = [["y"]]

[ring]
name = "ci-x2-y2-z2"
char = {p}
vars = ["x","y","z"]
ideal = ["x^2","y^2","z^2"]
labels = {{ ci = true, codim = 3, gorenstein = true }}

[module]
name = "Rxy"
ring = "ci-x2-y2-z2"
matrix = [["x"],["y"]]
"""


def _linear_form(rng: random.Random, variables) -> str:
    terms = []
    for v in variables:
        c = rng.randint(-4, 4)
        if c:
            terms.append(f"{c}*{v}")
    if not terms:
        terms.append(f"1*{rng.choice(variables)}")
    return " + ".join(terms).replace("+ -", "- ")


def _quadric(rng: random.Random, variables) -> str:
    terms = []
    for i, u in enumerate(variables):
        for w in variables[i:]:
            c = rng.randint(-4, 4)
            if c:
                terms.append(f"{c}*{u}*{w}")
    if not terms:
        terms.append(f"1*{variables[0]}^2")
    return " + ".join(terms).replace("+ -", "- ")


def _random_sections(seed: int) -> str:
    """Four random homogeneous algebras with cube-zero maximal ideal.

    Two generic quadrics in two variables form a regular sequence, so the
    quotient is a complete intersection of codimension 2 (Hilbert function
    1, 2, 1, hence the cube of the maximal ideal vanishes).  In three
    variables, two quadrics plus all cubics need more than three minimal
    generators, so those quotients are not complete intersections.
    """
    rng = random.Random(seed)
    out = []
    specs = [("rand-ci-1", ["x", "y"]), ("rand-ci-2", ["x", "y"]), ("rand-m3-1", ["x", "y", "z"]), ("rand-m3-2", ["x", "y", "z"])]
    for name, variables in specs:
        while True:
            quads = [_quadric(rng, variables) for _ in range(2)]
            if len(variables) == 2:
                ideal = quads
                expected = 4
            else:
                cubes = [f"{a}*{b}*{c}" for i, a in enumerate(variables) for j, b in enumerate(variables[i:], i) for c in variables[j:]]
                ideal = quads + cubes
                expected = 8
            alg = build_algebra(_P, variables, ideal)
            if alg.length == expected:
                break
        ci = len(variables) == 2
        typ = alg.socle_dimension()
        l1, l2 = _linear_form(rng, variables), _linear_form(rng, variables)
        ideal_txt = ",".join(f'"{g}"' for g in ideal)
        # R / m^2, a cyclic module with square-zero maximal ideal action
        square_rows = ",".join(f'["{a}*{b}"]' for i, a in enumerate(variables) for b in variables[i:])
        vars_txt = ",".join(f'"{v}"' for v in variables)
        out.append(
            f"""
[ring]
name = "{name}"
char = {_P}
vars = [{vars_txt}]
ideal = [{ideal_txt}]
labels = {{ ci = {str(ci).lower()}, codim = {len(variables)}, gorenstein = {str(typ == 1).lower()}, notes = "random, seed {seed}" }}

[module]
name = "C"
ring = "{name}"
matrix = [["{l1}"]]

[module]
name = "P"
ring = "{name}"
matrix = [["{l1}","{l2}"]]

[module]
name = "T"
ring = "{name}"
matrix = [{square_rows}]
"""
        )
    return "".join(out)


def builtin_corpus(name: str) -> str:
    if name != "paper-examples":
        raise KeyError(f"unknown built-in corpus {name!r}; available: paper-examples")
    return _WORKED_EXAMPLES.format(p=_P) + _random_sections(seed=20240611)


__all__ = [
    "CorpusInstance",
    "Labels",
    "ModuleSpec",
    "RingSpec",
    "builtin_corpus",
    "load_corpus",
    "parse_corpus",
]
