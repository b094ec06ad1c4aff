"""Acceptance criteria, one test (or a few) per criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines inline;
they are also repeated in the terminal summary.
"""

from __future__ import annotations

import itertools
import time
from collections import Counter

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from homolog.algebra import build_algebra
from homolog.asymptotics import analyze, check_sequence_lemma, compare, cx_value
from homolog.checks import run_catalog, workspace
from homolog.corpus import load_corpus
from homolog.homalg import ext_homology, ext_tor_duality_check, tor_homology
from homolog.modules import (
    ModulePresentation,
    free_module,
    matlis_dual,
    module_invariants,
    realize,
    residue_field,
    syzygy,
)
from homolog.resolution import bass_sequence, betti_sequence, resolve

from .conftest import P, record
from .sequences import LEMMA_INPUTS, any_sequence

t = sympy.Symbol("t")


def series(expr, n: int) -> list[int]:
    poly = sympy.series(expr, t, 0, n).removeO()
    return [int(poly.coeff(t, i)) for i in range(n)]


def square_ideal_ring(b: int):
    """k[x1..xb, y] / ((x1..xb)^2 + (y^2)) with M = (y)."""
    xs = [f"x{i}" for i in range(1, b + 1)]
    ideal = [f"{a}*{c}" for i, a in enumerate(xs) for c in xs[i:]] + ["y^2"]
    r = build_algebra(P, xs + ["y"], ideal)
    return r, realize(ModulePresentation.from_strings(r, [["y"]]))


def square_zero_ring(b: int):
    xs = [f"x{i}" for i in range(1, b + 1)]
    return build_algebra(P, xs, [f"{a}*{c}" for i, a in enumerate(xs) for c in xs[i:]])


# ---------------------------------------------------------------- 1


def test_criterion_1_square_ideal_b2():
    start = time.perf_counter()
    r, m = square_ideal_ring(2)
    k = residue_field(r)
    betti_k = betti_sequence(k, 8)
    ok = betti_k == [2 ** (n + 1) - 1 for n in range(9)]
    ok &= betti_sequence(m, 8) == [1] * 9
    rep = analyze(betti_k)
    ok &= rep.exact and rep.curv.value == 2 and rep.cx.kind == "infinite"
    elapsed = time.perf_counter() - start
    record("1 (b=2)", ok and elapsed < 60, f"beta(k) = 2^(n+1)-1 to depth 8, beta(M) = 1, curv 2 exact, cx inf, {elapsed:.1f}s")
    assert ok and elapsed < 60


@pytest.mark.xfail(strict=True, reason="the stated closed form 3^(n+1)-1 is not the Betti sequence for b=3; see ledger")
def test_criterion_1_square_ideal_b3_literal_formula():
    r, _ = square_ideal_ring(3)
    betti_k = betti_sequence(residue_field(r), 6)
    ok = betti_k == [3 ** (n + 1) - 1 for n in range(7)]
    record("1 (b=3, literal 3^(n+1)-1)", ok, f"computed {betti_k}; expected {[3 ** (n + 1) - 1 for n in range(7)]}")
    assert ok


def test_criterion_1_square_ideal_b3_corrected():
    start = time.perf_counter()
    r, m = square_ideal_ring(3)
    betti_k = betti_sequence(residue_field(r), 6)
    # Poincare series of a tensor product: 1/(1 - 3t) * 1/(1 - t), i.e. sum_{i<=n} 3^i
    oracle = series(1 / ((1 - 3 * t) * (1 - t)), 7)
    ok = betti_k == oracle == [(3 ** (n + 1) - 1) // 2 for n in range(7)]
    ok &= betti_sequence(m, 6) == [1] * 7
    rep = analyze(betti_k)
    ok &= rep.exact and rep.curv.value == 3 and rep.cx.kind == "infinite"
    elapsed = time.perf_counter() - start
    record("1 (b=3, corrected (3^(n+1)-1)/2)", ok, f"beta(k) = {betti_k}, curv 3 exact, cx inf, {elapsed:.1f}s")
    assert ok and elapsed < 60


# ---------------------------------------------------------------- 2


@pytest.mark.parametrize("b, depth", [(2, 8), (3, 6)])
def test_criterion_2_square_zero(b, depth):
    start = time.perf_counter()
    r = square_zero_ring(b)
    betti_k = betti_sequence(residue_field(r), depth)
    ok = betti_k == [b**n for n in range(depth + 1)]
    e = matlis_dual(free_module(r, 1))
    inv = module_invariants(e)
    ok &= (inv.length, inv.mu, inv.type) == (1 + b, b, 1)
    ok &= bass_sequence(e, depth) == [1] + [0] * depth
    elapsed = time.perf_counter() - start
    record(f"2 (b={b})", ok and elapsed < 30, f"beta(k) = b^n to depth {depth}, E: length {inv.length}, mu {inv.mu}, type {inv.type}, bass(E) = (1,0,...), {elapsed:.1f}s")
    assert ok and elapsed < 30


# ---------------------------------------------------------------- 3


def test_criterion_3_complete_intersection():
    start = time.perf_counter()
    r = build_algebra(0, ["x", "y"], ["x^2", "y^2"])
    betti_k = betti_sequence(residue_field(r), 10)
    ok = betti_k == [n + 1 for n in range(11)] == series((1 + t) ** 2 / (1 - t**2) ** 2, 11)
    rep = analyze(betti_k)
    ok &= rep.exact and rep.cx.kind == "exact" and rep.cx.value == 2 and rep.curv.value == 1
    elapsed = time.perf_counter() - start
    record("3", ok and elapsed < 30, f"beta(k) = n+1 over QQ to depth 10, cx 2, curv 1 exact, {elapsed:.1f}s")
    assert ok and elapsed < 30


# ---------------------------------------------------------------- 4

SUITES = ["LEM-5-1", "LEM-6-1", "PROP-5-2", "PROP-6-2", "THM-4-3", "COR-5-4", "COR-6-5"]


def test_criterion_4_inequality_suites():
    start = time.perf_counter()
    instances = load_corpus("builtin:paper-examples")
    assert len(instances) >= 10
    assert sum(i.name.startswith("rand-") for i in instances) == 4
    results = run_catalog(instances, SUITES, 6)
    counts = Counter(r.status for r in results)
    rows = sum(len(r.evidence) for r in results)
    decided = sum(1 for r in results for row in r.evidence if row.holds is True)
    elapsed = time.perf_counter() - start
    ok = counts == Counter({"pass": len(results)}) and elapsed < 300
    record("4", ok, f"{len(results)} results on {len(instances)} instances, {dict(counts)}, {decided}/{rows} rows decided, {elapsed:.0f}s")
    assert ok, [(r.instance, r.check, r.status, r.diagnostics) for r in results if r.status != "pass"]


# ---------------------------------------------------------------- 5

DUALITY_PAIRS = [
    ("sq-ideal-b2", "k", "M"),
    ("sq-ideal-b2", "M", "M"),
    ("m2zero-b2", "k", "E"),
    ("ci-x2-y2", "Rx", "Rxy"),
    ("ci-x2-y3", "Rx", "Ry"),
    ("rand-m3-1", "C", "P"),
]


def test_criterion_5_duality(corpus):
    checked = 0
    ok = True
    for inst in corpus.values():
        k = residue_field(inst.ring)
        for name in ["k"] + inst.module_names:
            m = inst.module(name)
            inv, dual = module_invariants(m), module_invariants(matlis_dual(m))
            ok &= (dual.length, dual.mu, dual.type) == (inv.length, inv.type, inv.mu)
            # mu^n(M) computed as dim Ext^n(k, M) against beta_n of the dual
            bass = [ext_homology(k, m, n).length for n in range(7)]
            ok &= bass == betti_sequence(matlis_dual(m), 6) == bass_sequence(m, 6)
            checked += 1
    pairs_ok = True
    for ring, a, b in DUALITY_PAIRS:
        inst = corpus[ring]
        rows = ext_tor_duality_check(inst.module(a), inst.module(b), 5)
        pairs_ok &= len(rows) == 5 and all(row[3] for row in rows)
    record("5", ok and pairs_ok, f"Matlis identities and Ext(k,M) = beta(M^v) on {checked} modules; Ext-Tor duality on {len(DUALITY_PAIRS)} pairs, i=1..5")
    assert ok and pairs_ok


# ---------------------------------------------------------------- 6


def test_criterion_6_structural_oracles(corpus):
    depth = 5
    ok = True
    n_modules = n_pairs = 0
    for inst in corpus.values():
        k = residue_field(inst.ring)
        mods = {"k": k, **{n: inst.module(n) for n in inst.module_names}}
        for name, m in mods.items():
            verdict = resolve(m, depth).verify()
            ok &= all(verdict.values())
            betti = betti_sequence(m, depth + 1)
            ok &= betti_sequence(syzygy(m), depth) == betti[1:]
            for n in range(depth + 1):
                ok &= ext_homology(m, k, n).length == tor_homology(m, k, n).length == betti[n]
            n_modules += 1
        for (a, ma), (b, mb) in itertools.combinations(mods.items(), 2):
            for n in range(depth + 1):
                ok &= tor_homology(ma, mb, n).length == tor_homology(mb, ma, n).length
            n_pairs += 1
    record("6", ok, f"d^2=0, minimality, exactness, syzygy shift, Ext/Tor against k on {n_modules} modules; Tor symmetry on {n_pairs} pairs; depth {depth}")
    assert ok


# ---------------------------------------------------------------- 7

LEMMA_STATS: dict[str, Counter] = {}


def _lemma_test(lemma):
    stats = LEMMA_STATS.setdefault(lemma, Counter())

    @settings(max_examples=500, derandomize=True, database=None)
    @given(LEMMA_INPUTS[lemma]())
    def run(inputs):
        res = check_sequence_lemma(lemma, inputs)
        stats[res.status] += 1
        assert res.status != "fail", res.detail

    return run, stats


@pytest.mark.parametrize("lemma", list(LEMMA_INPUTS))
def test_criterion_7_lemmas(lemma):
    run, stats = _lemma_test(lemma)
    failed = None
    try:
        run()
    except AssertionError as exc:
        failed = exc
    n = sum(stats.values())
    ok = failed is None and n >= 500 and stats["fail"] == 0
    record(f"7 ({lemma})", ok, f"{n} instances: {dict(stats)}")
    assert ok, failed


def test_criterion_7_scaling_and_trichotomy():
    seen = Counter()

    @settings(max_examples=1000, derandomize=True, database=None)
    @given(any_sequence(), st.integers(2, 40))
    def run(values, c):
        seen["n"] += 1
        a, b = analyze(values), analyze([c * v for v in values])
        assert a.cx == b.cx and a.curv.kind == b.curv.kind
        if a.curv.kind == "exact":
            assert compare(a.curv.value, b.curv.value) == 0
            seen["exact"] += 1
        else:
            assert a.curv.number == pytest.approx(b.curv.number, rel=1e-12)
        w = max(2, -(-len(values) // 3))
        tail_zero = not any(values[-w:])
        assert tail_zero == (a.cx.kind == "exact" and a.cx.value == 0) == (a.curv.number < 1)

    failed = None
    try:
        run()
    except AssertionError as exc:
        failed = exc
    ok = failed is None and seen["n"] >= 1000
    record("7 (scaling, trichotomy)", ok, f"{seen['n']} sequences, {seen['exact']} with exact reports")
    assert ok, failed


# ---------------------------------------------------------------- 8


def test_criterion_8_characterization():
    instances = load_corpus("builtin:paper-examples")
    exact = Counter()
    agree = True
    lines = []
    for inst in instances:
        ws = workspace(inst, 6)
        rep, depth = ws.report("betti", ws.k_name)
        if rep is None or not rep.exact or depth > 10:
            lines.append(f"{inst.name}: not exact")
            continue
        verdict = compare(rep.curv.value, 1) <= 0
        agree &= verdict == inst.labels.ci
        if inst.labels.ci:
            agree &= cx_value(rep) == inst.labels.codim
        exact["ci" if inst.labels.ci else "non-ci"] += 1
        lines.append(f"{inst.name}: curv {rep.curv.value} at depth {depth}")
    ok = agree and exact["ci"] >= 4 and exact["non-ci"] >= 4
    record("8", ok, f"exact reports: {exact['ci']} CI, {exact['non-ci']} non-CI, verdicts agree with labels: {agree}")
    assert ok, lines
