from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy import GF as SymGF, QQ as SymQQ, Rational
from sympy.polys.matrices import DomainMatrix

from homolog.errors import RingMismatchError, ZeroModuleError
from homolog.modules import (
    ModulePresentation,
    commutes,
    direct_sum,
    free_module,
    matlis_dual,
    minimal_presentation,
    module_invariants,
    quotient,
    realize,
    residue_field,
    submodule,
    syzygy,
    zero_module,
)



def oracle_rank(mat, p) -> int:
    mat = np.asarray(mat, dtype=object)
    if mat.size == 0:
        return 0
    if p == 0:
        rows = [[SymQQ.convert(Rational(v.numerator, v.denominator)) for v in row] for row in mat.tolist()]
        return DomainMatrix(rows, mat.shape, SymQQ).rank()
    rows = [[SymGF(p)(int(v)) for v in row] for row in mat.tolist()]
    return DomainMatrix(rows, mat.shape, SymGF(p)).rank()


def oracle_mu_type(m, p):
    """mu = dim M/mM and type = dim of the socle, from the raw action matrices."""
    if m.dim == 0:
        return 0, 0
    return m.dim - oracle_rank(np.hstack(m.actions), p), m.dim - oracle_rank(np.vstack(m.actions), p)


def test_residue_free_and_injective_hull(rings):
    r = rings["sq2"]
    k = module_invariants(residue_field(r))
    assert (k.length, k.mu, k.type, k.mult, k.is_min_mult, k.is_ulrich) == (1, 1, 1, 1, True, True)
    free = module_invariants(free_module(r, 2))
    assert (free.length, free.mu, free.type) == (12, 2, 4)
    e = module_invariants(matlis_dual(free_module(r, 1)))
    assert (e.length, e.mu, e.type) == (6, 2, 1)


def test_presentation_of_ideal_generated_by_y(rings):
    r = rings["sq2"]
    # R/(x1, x2) is isomorphic to the ideal (y) up to a shift: length 3, mu 1, socle x1*y, x2*y
    m = realize(ModulePresentation.from_strings(r, [["x1"], ["x2"]]))
    inv = module_invariants(m)
    assert (inv.length, inv.mu) == (2, 1)
    ideal = realize(ModulePresentation.from_strings(r, [["y"]]))
    inv = module_invariants(ideal)
    assert (inv.length, inv.mu, inv.type, inv.is_min_mult) == (3, 1, 2, True)


@st.composite
def presentations(draw, ring_names=("m2", "sq2", "ci23", "ci22")):
    name = draw(st.sampled_from(ring_names))
    gens = draw(st.integers(1, 2))
    nrels = draw(st.integers(0, 3))
    monos = ["x", "y", "x^2", "x*y", "y^2", "0", "x+y", "2*x-y"] if name != "sq2" else ["x1", "x2", "y", "x1*y", "0", "x2+y"]
    rows = [[draw(st.sampled_from(monos)) for _ in range(gens)] for _ in range(nrels)]
    return name, gens, rows


def _module(rings, data):
    name, gens, rows = data
    r = rings[name]
    return r, realize(ModulePresentation.from_strings(r, rows, gens))


@given(presentations())
def test_invariants_against_raw_ranks(rings, data):
    r, m = _module(rings, data)
    p = r.field.char or 0
    inv = module_invariants(m)
    if m.dim == 0:
        assert inv.length == 0
        return
    mu, typ = oracle_mu_type(m, p)
    assert (inv.length, inv.mu, inv.type) == (m.dim, mu, typ)
    assert commutes(m)
    assert inv.mult >= max(inv.mu, inv.type)


@given(presentations())
def test_matlis_duality_swaps_mu_and_type(rings, data):
    r, m = _module(rings, data)
    inv, dual = module_invariants(m), module_invariants(matlis_dual(m))
    assert (dual.length, dual.mu, dual.type) == (inv.length, inv.type, inv.mu)
    assert dual.is_min_mult == inv.is_min_mult
    assert module_invariants(matlis_dual(matlis_dual(m))) == inv


@given(presentations())
def test_syzygy_exact_sequence_lengths(rings, data):
    r, m = _module(rings, data)
    if m.dim == 0:
        with pytest.raises(ZeroModuleError):
            syzygy(m)
        return
    omega = syzygy(m)
    mu = module_invariants(m).mu
    assert omega.dim == mu * r.length - m.dim
    assert commutes(omega)


@given(presentations())
def test_minimal_presentation_realizes_same_module(rings, data):
    r, m = _module(rings, data)
    pres = minimal_presentation(m)
    again = realize(pres)
    assert module_invariants(again) == module_invariants(m)
    if m.dim:
        assert pres.gens == module_invariants(m).mu


@given(presentations(), presentations())
def test_direct_sum_is_additive(rings, a, b):
    ra, ma = _module(rings, a)
    rb, mb = _module(rings, b)
    if ra is not rb:
        with pytest.raises(RingMismatchError):
            direct_sum(ma, mb)
        return
    s = module_invariants(direct_sum(ma, mb))
    ia, ib = module_invariants(ma), module_invariants(mb)
    assert (s.length, s.mu, s.type) == (ia.length + ib.length, ia.mu + ib.mu, ia.type + ib.type)


def test_submodule_and_quotient(rings):
    r = rings["ci22"]
    free = free_module(r, 1)
    mx = free.act(r.element("x"))
    rows = r.field.reduce(mx.T)  # span of x * basis
    sub = submodule(free, rows)
    quo = quotient(free, rows)
    assert sub.dim + quo.dim == r.length
    assert module_invariants(quo).length == 2  # R/(x) = k[y]/(y^2)


def test_zero_module(rings):
    z = zero_module(rings["m2"])
    assert module_invariants(z).length == 0


def test_presentation_shape_errors(rings):
    with pytest.raises(ValueError):
        ModulePresentation.from_strings(rings["m2"], [["x"], ["x", "y"]])
    with pytest.raises(ValueError):
        ModulePresentation.from_strings(rings["m2"], [])


def test_char_two_module(rings):
    r = rings["gf2"]
    m = realize(ModulePresentation.from_strings(r, [["x+y"]]))
    assert module_invariants(m).length == 2
    assert oracle_mu_type(m, 2) == (1, 1)
