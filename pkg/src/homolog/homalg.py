"""Ext and Tor from a resolution of the first argument.

Both complexes have terms N^(beta_i), coordinate g*dim N + a.  For Tor the
map d_i (x) N sends block g to block h by the action of d_i[h, g]; for Ext
the coboundary Hom(F_i, N) -> Hom(F_{i+1}, N) sends block h to block g by
the action of d_{i+1}[h, g].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RingMismatchError
from .linalg import Family, coalesce, independent_members, rref, sparse_kernel, sparse_rank
from .modules import ModuleRealization, matlis_dual, quotient, submodule, zero_module
from .resolution import block_join, matrix_table, resolve


@dataclass(frozen=True)
class Homology:
    """Numerical data of H = Z/B inside N^(rank)."""

    length: int
    mu: int
    ann_exponent: int


@dataclass(frozen=True)
class PairSequence:
    kind: str  # ext_mu, ext_len, tor_mu or tor_len
    values: tuple[int, ...]
    ann_exponent: int


@dataclass(frozen=True)
class PairSequences:
    ext_mu: PairSequence
    ext_len: PairSequence
    tor_mu: PairSequence
    tor_len: PairSequence

    @property
    def ann_exponent(self) -> int:
        return max(self.ext_mu.ann_exponent, self.tor_mu.ann_exponent)


def _same_ring(m: ModuleRealization, n: ModuleRealization) -> None:
    if m.ring is not n.ring:
        raise RingMismatchError("modules live over different rings")


def _variable_table(n: ModuleRealization):
    key = "homalg_variables"
    if key not in n.cache:
        n.cache[key] = matrix_table(n.field, n.actions)
    return n.cache[key]


def _action_table_sorted(n: ModuleRealization):
    """Basis-action entries (j, a, b, c) sorted by j, for joining on ring coordinates."""
    key = "homalg_by_monomial"
    if key not in n.cache:
        f = n.field
        js, as_, bs, cs = [], [], [], []
        for j, mat in enumerate(n.basis_actions):
            a, b = np.nonzero(mat != 0)
            js.append(np.full(a.size, j))
            as_.append(a)
            bs.append(b)
            cs.append(mat[a, b])
        if js and sum(x.size for x in js):
            jj, aa, bb = (np.concatenate(x).astype(np.int64) for x in (js, as_, bs))
            cc = np.concatenate(cs)
        else:
            jj = aa = bb = np.zeros(0, dtype=np.int64)
            cc = f.zeros(0)
        order = np.argsort(jj, kind="stable")
        n.cache[key] = (jj[order], bb[order], aa[order], cc[order])
    return n.cache[key]


def _complex_map(m: ModuleRealization, n: ModuleRealization, i: int, kind: str):
    """Triples of d_i (x) N (kind 'tor') or of the coboundary Hom(F_{i-1}, N) -> Hom(F_i, N) ('ext')."""
    res = resolve(m, i)
    f = m.field
    lam = m.ring.length
    dn = n.dim
    d = res.differential(i)
    src, tgt = res.ranks[i], res.ranks[i - 1]
    jj, bb, aa, cc = _action_table_sorted(n)
    h = d.coord // lam
    j = d.coord % lam
    start = np.searchsorted(jj, j)
    count = np.searchsorted(jj, j, side="right") - start
    total = int(count.sum())
    e = np.repeat(np.arange(d.coord.size), count)
    pos = start[e] + np.arange(total) - np.repeat(np.cumsum(count) - count, count)
    vals = f.reduce(d.val[e] * cc[pos]) if total else f.zeros(0)
    g = d.idx[e]
    a, b = aa[pos], bb[pos]
    if kind == "tor":
        return tgt * dn, src * dn, h[e] * dn + a, g * dn + b, vals
    return src * dn, tgt * dn, g * dn + a, h[e] * dn + b, vals


def _cycles_and_boundaries(m: ModuleRealization, n: ModuleRealization, i: int, kind: str):
    """(ambient dim, cycle basis, boundary triples or None) at spot i."""
    f = m.field
    res = resolve(m, i + 1)
    dim = res.ranks[i] * n.dim
    if kind == "tor":
        out = _complex_map(m, n, i, "tor") if i >= 1 else None
        inc = _complex_map(m, n, i + 1, "tor")
    else:
        out = _complex_map(m, n, i + 1, "ext")
        inc = _complex_map(m, n, i, "ext") if i >= 1 else None
    if out is None:
        eye = np.arange(dim, dtype=np.int64)
        ones = f.array(np.ones(dim, dtype=np.int64)) if dim else f.zeros(0)
        cycles = Family(dim, dim, eye, eye.copy(), ones)
    else:
        cycles = sparse_kernel(f, *out)
    return dim, cycles, inc


def _boundary_family(f, inc) -> Family:
    nrows, ncols, r, c, v = inc
    c2, r2, v2 = coalesce(f, ncols, nrows, c, r, v)
    return Family(ncols, nrows, c2, r2, v2)


def _m_times_blocks(n: ModuleRealization, fam: Family) -> Family:
    g, i, row, val = block_join(n.field, n.dim, _variable_table(n), fam)
    return Family(fam.count * len(n.actions), fam.dim, i * fam.count + g, row, val)


def homology(m: ModuleRealization, n: ModuleRealization, i: int, kind: str) -> Homology:
    _same_ring(m, n)
    f = m.field
    if n.dim == 0 or m.dim == 0:
        return Homology(0, 0, 0)
    dim, cycles, inc = _cycles_and_boundaries(m, n, i, kind)
    if dim == 0:
        return Homology(0, 0, 0)
    bnd = _boundary_family(f, inc) if inc is not None else Family.empty(f, dim)
    rank_b = _rank(f, bnd)
    length = cycles.count - rank_b
    if length == 0:
        return Homology(0, 0, 0)
    mz = _m_times_blocks(n, cycles)
    mu = cycles.count - _rank(f, Family.concat(f, [bnd, mz], dim))
    # least h with m^h Z inside B
    h = 0
    current = cycles
    while True:
        both = Family.concat(f, [bnd, current], dim)
        picked = independent_members(f, both)
        extra = picked[picked >= bnd.count] - bnd.count
        if extra.size == 0:
            break
        current = _m_times_blocks(n, current.take(extra))
        h += 1
    return Homology(length, mu, h)


def _rank(f, fam: Family) -> int:
    return sparse_rank(f, fam.dim, fam.count, fam.coord, fam.idx, fam.val)


def tor_homology(m: ModuleRealization, n: ModuleRealization, i: int) -> Homology:
    return homology(m, n, i, "tor")


def ext_homology(m: ModuleRealization, n: ModuleRealization, i: int) -> Homology:
    return homology(m, n, i, "ext")


def _realize_homology(m: ModuleRealization, n: ModuleRealization, i: int, kind: str) -> ModuleRealization:
    _same_ring(m, n)
    f = m.field
    if n.dim == 0 or m.dim == 0:
        return zero_module(m.ring)
    dim, cycles, inc = _cycles_and_boundaries(m, n, i, kind)
    rank_ = resolve(m, i).ranks[i]
    ambient = _block_module(n, rank_)
    z_rows = cycles.dense(f)
    if z_rows.shape[0] == 0:
        return submodule(ambient, z_rows)
    _, pivots, _ = rref(f, z_rows)
    z = submodule(ambient, z_rows)
    if inc is None:
        return z
    b_rows = _boundary_family(f, inc).dense(f)
    return quotient(z, b_rows[:, pivots])


def _block_module(n: ModuleRealization, copies: int) -> ModuleRealization:
    f = n.field
    eye = f.identity(copies)
    actions = [f.reduce(np.kron(eye, x)) for x in n.actions]
    return ModuleRealization(n.ring, actions, None)


def tor_module(m: ModuleRealization, n: ModuleRealization, i: int) -> ModuleRealization:
    """Tor_i(M, N) with its R-action."""
    return _realize_homology(m, n, i, "tor")


def ext_module(m: ModuleRealization, n: ModuleRealization, i: int) -> ModuleRealization:
    """Ext^i(M, N) with its R-action."""
    return _realize_homology(m, n, i, "ext")


def pair_sequences(m: ModuleRealization, n: ModuleRealization, depth: int) -> PairSequences:
    """Ext and Tor numbers of (M, N) for i = 0..depth, extended incrementally."""
    key = ("pairs", id(n))
    hit = m.cache.get(key)
    # the partner is stored with the lists so a recycled id cannot match
    if hit is None or hit[0] is not n:
        hit = (n, [], [])
        m.cache[key] = hit
    _, ext, tor = hit
    while len(ext) <= depth:
        ext.append(ext_homology(m, n, len(ext)))
    while len(tor) <= depth:
        tor.append(tor_homology(m, n, len(tor)))
    ext, tor = ext[: depth + 1], tor[: depth + 1]
    ext_h = max((h.ann_exponent for h in ext), default=0)
    tor_h = max((h.ann_exponent for h in tor), default=0)
    return PairSequences(
        PairSequence("ext_mu", tuple(h.mu for h in ext), ext_h),
        PairSequence("ext_len", tuple(h.length for h in ext), ext_h),
        PairSequence("tor_mu", tuple(h.mu for h in tor), tor_h),
        PairSequence("tor_len", tuple(h.length for h in tor), tor_h),
    )


def ext_tor_duality_check(l: ModuleRealization, m: ModuleRealization, depth: int) -> list[tuple[int, int, int, bool]]:
    """Rows (i, dim Ext^i(L, M^v), dim Tor_i(L, M), equal) for i = 1..depth."""
    dual = matlis_dual(m)
    rows = []
    for i in range(1, depth + 1):
        e = ext_homology(l, dual, i).length
        t = tor_homology(l, m, i).length
        rows.append((i, e, t, e == t))
    return rows


__all__ = [
    "Homology",
    "PairSequence",
    "PairSequences",
    "ext_homology",
    "ext_module",
    "ext_tor_duality_check",
    "homology",
    "pair_sequences",
    "tor_homology",
    "tor_module",
]
