"""Minimal free resolutions over an Artinian algebra.

F_n = R^(beta_n) is identified with k^(beta_n * length), generator-major:
coordinate g*length + j is b_j times the g-th generator.  The differential
d_n is stored as a Family whose g-th member is d_n applied to generator g
of F_n.  Each step takes the kernel of the expanded k-linear map and keeps
the kernel vectors that are independent modulo m times the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import ArtinAlgebra
from .errors import BudgetExceededError
from .linalg import (
    Family,
    budget,
    independent_members,
    rank,
    sparse_apply,
    sparse_kernel,
    sparse_rank,
)
from .modules import ModuleRealization, cover_matrix, matlis_dual


def block_join(field, block: int, table, fam: Family):
    """Apply a table of (multiplier, j, s, c) constants blockwise to fam.

    Coordinates of fam are h*block + j; a table row sends coordinate j of
    every block to coordinate s with factor c.  Returns (member,
    multiplier, coordinate, value) for every product term.
    """
    f = field
    mult, js, ss, cs = table
    h = fam.coord // block
    j = fam.coord % block
    start = np.searchsorted(js, j)
    count = np.searchsorted(js, j, side="right") - start
    total = int(count.sum())
    which = np.repeat(np.arange(fam.coord.size), count)
    pos = start[which] + np.arange(total) - np.repeat(np.cumsum(count) - count, count)
    vals = f.reduce(fam.val[which] * cs[pos]) if total else f.zeros(0)
    return fam.idx[which], mult[pos], h[which] * block + ss[pos], vals


def matrix_table(field, mats) -> tuple:
    """Nonzero entries of a list of square matrices as (which, col, row, value), sorted by col."""
    ts, js, ss, cs = [], [], [], []
    for i, mat in enumerate(mats):
        s, j = np.nonzero(mat != 0)
        ts.append(np.full(s.size, i))
        js.append(j)
        ss.append(s)
        cs.append(mat[s, j])
    if not ts or not sum(a.size for a in js):
        z = np.zeros(0, dtype=np.int64)
        return z, z, z, field.zeros(0)
    t, j, s = (np.concatenate(a).astype(np.int64) for a in (ts, js, ss))
    c = np.concatenate(cs)
    order = np.lexsort((t, j))
    return t[order], j[order], s[order], c[order]


def expanded_map(ring: ArtinAlgebra, d: Family):
    """Triples of the k-linear map R^(count) -> k^(d.dim) given by d on generators."""
    lam = ring.length
    g, t, row, val = block_join(ring.field, lam, ring.structure_entries, d)
    return d.dim, d.count * lam, row, g * lam + t, val


def m_times(ring: ArtinAlgebra, fam: Family) -> Family:
    """Members x_i * v for every variable i and member v (index i*count + v)."""
    g, i, row, val = block_join(ring.field, ring.length, matrix_table(ring.field, ring.var_matrices), fam)
    return Family(fam.count * ring.nvars, fam.dim, i * fam.count + g, row, val)


def minimal_generators(ring: ArtinAlgebra, kernel: Family) -> Family:
    """Members of kernel independent modulo m * kernel, in kernel order."""
    f = ring.field
    mk = m_times(ring, kernel)
    both = Family.concat(f, [mk, kernel], kernel.dim)
    picked = independent_members(f, both)
    return kernel.take(picked[picked >= mk.count] - mk.count)


@dataclass
class FreeResolution:
    ring: ArtinAlgebra
    module: ModuleRealization
    cover: np.ndarray  # dim M x beta_0*length
    differentials: list[Family] = dc_field(default_factory=list)  # d_1, d_2, ...
    ranks: list[int] = dc_field(default_factory=list)
    pending: Family | None = None  # kernel of the last differential

    @property
    def depth(self) -> int:
        return len(self.ranks) - 1

    def differential(self, n: int) -> Family:
        """d_n for n >= 1."""
        return self.differentials[n - 1]

    def ring_matrix(self, n: int) -> np.ndarray:
        """d_n as a beta_{n-1} x beta_n x length array of ring elements."""
        d = self.differential(n)
        lam = self.ring.length
        out = self.ring.field.zeros((self.ranks[n - 1], self.ranks[n], lam))
        if d.idx.size:
            out[d.coord // lam, d.idx, d.coord % lam] = d.val
        return out

    def truncated(self, depth: int) -> "FreeResolution":
        return FreeResolution(
            self.ring, self.module, self.cover, self.differentials[:depth], self.ranks[: depth + 1], None
        )

    def _extend(self, depth: int) -> None:
        ring = self.ring
        f = ring.field
        lam = ring.length
        while self.depth < depth:
            if self.pending is None:
                # zero module: everything past the end is zero
                self.ranks.append(0)
                self.differentials.append(Family.empty(f, self.ranks[-2] * lam))
                continue
            gens = minimal_generators(ring, self.pending)
            n_cols = gens.count * lam
            if n_cols > budget():
                raise BudgetExceededError(f"F_{self.depth + 1} has k-dimension {n_cols}, budget is {budget()}")
            self.differentials.append(gens)
            self.ranks.append(gens.count)
            if gens.count == 0:
                self.pending = None
                continue
            self.pending = sparse_kernel(f, *expanded_map(ring, gens))

    def verify(self) -> dict[str, bool]:
        """Structural self-checks: d o d = 0, minimality, exactness rank identity."""
        ring = self.ring
        f = ring.field
        lam = ring.length
        dd = True
        minimal = True
        exact = True
        ranks_of_maps = [_dense_rank(f, self.cover)]
        for n, d in enumerate(self.differentials, start=1):
            if d.idx.size and np.any(d.coord % lam == 0):
                minimal = False
            rows_, ncols, r, c, v = expanded_map(ring, d)
            ranks_of_maps.append(sparse_rank(f, rows_, ncols, r, c, v))
            if n == 1:
                img = f.matmul(self.cover, d.dense(f).T) if d.count else f.zeros((0, 0))
                dd &= not np.any(img)
            else:
                prev = self.differentials[n - 2]
                pr, _, pr_r, pr_c, pr_v = expanded_map(ring, prev)
                dd &= sparse_apply(f, pr, pr_r, pr_c, pr_v, d).val.size == 0
        # kernel at spot n has dimension beta_n*lam - rank(d_n) and must equal rank(d_{n+1})
        for n in range(len(self.differentials)):
            if self.ranks[n] * lam - ranks_of_maps[n] != ranks_of_maps[n + 1]:
                exact = False
        if self.module.dim and ranks_of_maps[0] != self.module.dim:
            exact = False
        return {"d_squared_zero": bool(dd), "minimal": bool(minimal), "exact": bool(exact)}


def _dense_rank(field, m: np.ndarray) -> int:
    return rank(field, m) if m.size else 0


def resolve(m: ModuleRealization, depth: int) -> FreeResolution:
    """Minimal free resolution through F_depth (cached on the realization)."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    res: FreeResolution | None = m.cache.get("resolution")
    if res is None:
        ring = m.ring
        f = ring.field
        if m.dim == 0:
            res = FreeResolution(ring, m, f.zeros((0, 0)), [], [0], None)
        else:
            cover, gens = cover_matrix(m)
            res = FreeResolution(ring, m, cover, [], [len(gens)], None)
            r, c = np.nonzero(cover != 0)
            res.pending = sparse_kernel(f, cover.shape[0], cover.shape[1], r, c, cover[r, c])
        m.cache["resolution"] = res
    res._extend(depth)
    return res.truncated(depth) if res.depth > depth else res


def betti_sequence(m: ModuleRealization, depth: int) -> list[int]:
    return list(resolve(m, depth).ranks)


def bass_sequence(m: ModuleRealization, depth: int) -> list[int]:
    """mu^n(M) = beta_n of the Matlis dual."""
    dual = m.cache.get("dual")
    if dual is None:
        dual = matlis_dual(m)
        m.cache["dual"] = dual
    return betti_sequence(dual, depth)


__all__ = [
    "FreeResolution",
    "bass_sequence",
    "betti_sequence",
    "block_join",
    "expanded_map",
    "m_times",
    "matrix_table",
    "minimal_generators",
    "resolve",
]
