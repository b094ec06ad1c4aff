"""Exact linear algebra over GF(p) and the rationals.

Matrices are numpy arrays: int64 residues for GF(p), object arrays of
Fraction for QQ.  Vectors act as columns; kernels are returned as rows.

Large systems coming out of resolutions are passed around as coordinate
triples and split into connected blocks before dense elimination.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import BudgetExceededError

DEFAULT_BUDGET = 1 << 24


def budget() -> int:
    """Field-element cap for a single elimination (env HOMOLOG_BUDGET overrides)."""
    raw = os.environ.get("HOMOLOG_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    """GF(p) with residues stored in [0, p)."""

    dtype = np.int64

    def __init__(self, p: int):
        if not (_is_prime(p) and p < 2**31):
            raise ValueError(f"characteristic must be a prime below 2^31, got {p}")
        self.p = p
        self.char = p

    def __repr__(self) -> str:
        return f"GF({self.p})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))

    def coerce(self, x) -> int:
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return np.vectorize(self.coerce, otypes=[np.int64])(a)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def inv(self, x) -> int:
        return pow(int(x), -1, self.p)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return np.mod(-a, self.p)

    def scale(self, a: np.ndarray, c) -> np.ndarray:
        return np.mod(a * int(c), self.p)

    def axpy(self, block: np.ndarray, f: np.ndarray, row: np.ndarray) -> np.ndarray:
        """block - outer(f, row)."""
        return np.mod(block - np.outer(f, row), self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        inner = a.shape[-1]
        p = self.p
        if inner == 0:
            return np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        if (p - 1) ** 2 * inner < 2**63:
            return np.mod(a @ b, p)
        # split the left factor into 16-bit limbs and chunk the inner sum
        lo = a & 0xFFFF
        hi = a >> 16
        step = max(1, (2**62) // ((p - 1) << 16))
        out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
        for s in range(0, inner, step):
            sl = slice(s, s + step)
            part_hi = np.mod(hi[..., sl] @ b[sl], p)
            part_lo = np.mod(lo[..., sl] @ b[sl], p)
            out = np.mod(out + np.mod(part_hi * 65536, p) + part_lo, p)
        return out


class RationalField:
    """QQ with entries stored as Fraction objects."""

    dtype = object
    char = 0

    def __repr__(self) -> str:
        return "QQ"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")

    def coerce(self, x) -> Fraction:
        return Fraction(x)

    def array(self, data) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        out = np.empty(a.shape, dtype=object)
        for i, x in np.ndenumerate(a):
            out[i] = Fraction(x)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        return a

    def inv(self, x) -> Fraction:
        return 1 / Fraction(x)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return -a

    def scale(self, a: np.ndarray, c) -> np.ndarray:
        return a * c

    def axpy(self, block: np.ndarray, f: np.ndarray, row: np.ndarray) -> np.ndarray:
        return block - np.outer(f, row)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] == 0:
            return self.zeros(a.shape[:-1] + b.shape[1:])
        return np.dot(a, b)


Field = PrimeField | RationalField
QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_for(char: int) -> Field:
    """0 gives the rationals, a prime p gives GF(p)."""
    return QQ if char == 0 else PrimeField(char)


# ---------------------------------------------------------------- dense


def _eliminate(field: Field, a: np.ndarray) -> list[int]:
    """Reduce `a` in place to rref; leftmost pivot, first nonzero row."""
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c] != 0)
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = a[r, c]
        if piv != 1:
            a[r, c:] = field.scale(a[r, c:], field.inv(piv))
        hit = a[:, c] != 0
        hit[r] = False
        idx = np.flatnonzero(hit)
        if idx.size:
            a[idx, c:] = field.axpy(a[idx, c:], a[idx, c], a[r, c:])
        pivots.append(c)
        r += 1
    return pivots


def _check_budget(n: int) -> None:
    cap = budget()
    if n > cap:
        raise BudgetExceededError(f"elimination needs {n} field elements, budget is {cap}")


def rref(field: Field, m) -> tuple[np.ndarray, list[int], int]:
    a = field.reduce(field.array(m) if not isinstance(m, np.ndarray) else m.copy())
    if a.ndim != 2:
        raise ValueError("rref expects a 2-d matrix")
    _check_budget(a.size)
    pivots = _eliminate(field, a)
    return a, pivots, len(pivots)


def rank(field: Field, m) -> int:
    return rref(field, m)[2]


def _kernel_from_rref(field: Field, r: np.ndarray, pivots: Sequence[int]) -> np.ndarray:
    cols = r.shape[1]
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    k = field.zeros((len(free), cols))
    if free:
        k[np.arange(len(free)), free] = 1
        if pivots:
            k[:, list(pivots)] = field.neg(r[: len(pivots)][:, free]).T
    return k


def kernel_basis(field: Field, m) -> np.ndarray:
    """Rows spanning the right null space."""
    r, pivots, _ = rref(field, m)
    return _kernel_from_rref(field, r, pivots)


def solve(field: Field, a, b) -> np.ndarray | None:
    """Some x with a @ x = b, or None when inconsistent."""
    a = field.array(a) if not isinstance(a, np.ndarray) else a
    b = field.array(b) if not isinstance(b, np.ndarray) else b
    rows, cols = a.shape
    aug = field.zeros((rows, cols + 1))
    aug[:, :cols] = a
    aug[:, cols] = b.reshape(rows)
    r, pivots, rk = rref(field, aug)
    if pivots and pivots[-1] == cols:
        return None
    x = field.zeros(cols)
    for i, c in enumerate(pivots):
        x[c] = r[i, cols]
    return x


def row_space(field: Field, vectors: np.ndarray) -> np.ndarray:
    """Nonzero rows of the rref: a canonical basis of the span."""
    r, _, rk = rref(field, vectors)
    return r[:rk]


# ---------------------------------------------------------------- sparse


@dataclass
class Family:
    """`count` vectors of k^dim held as (vector, coordinate, value) triples."""

    count: int
    dim: int
    idx: np.ndarray
    coord: np.ndarray
    val: np.ndarray

    @classmethod
    def empty(cls, field: Field, dim: int) -> "Family":
        z = np.zeros(0, dtype=np.int64)
        return cls(0, dim, z, z.copy(), field.zeros(0))

    @classmethod
    def from_dense(cls, field: Field, rows: np.ndarray) -> "Family":
        rows = np.asarray(rows)
        n, d = rows.shape
        i, j = np.nonzero(rows != 0)
        return cls(n, d, i.astype(np.int64), j.astype(np.int64), rows[i, j])

    def dense(self, field: Field) -> np.ndarray:
        out = field.zeros((self.count, self.dim))
        if self.idx.size:
            np.add.at(out, (self.idx, self.coord), self.val)
        return field.reduce(out)

    def take(self, which: Sequence[int]) -> "Family":
        which = np.asarray(which, dtype=np.int64)
        remap = np.full(self.count, -1, dtype=np.int64)
        remap[which] = np.arange(which.size)
        keep = remap[self.idx] >= 0
        return Family(int(which.size), self.dim, remap[self.idx[keep]], self.coord[keep], self.val[keep])

    @staticmethod
    def concat(field: Field, parts: Sequence["Family"], dim: int) -> "Family":
        if not parts:
            return Family.empty(field, dim)
        offsets = np.cumsum([0] + [f.count for f in parts])
        idx = np.concatenate([f.idx + o for f, o in zip(parts, offsets)])
        coord = np.concatenate([f.coord for f in parts])
        val = np.concatenate([f.val for f in parts]) if idx.size else field.zeros(0)
        return Family(int(offsets[-1]), dim, idx, coord, val)


_BATCH_MAX = 24  # blocks with at most this many rows and columns are reduced together


@dataclass
class _Batch:
    """Connected blocks of one shape, each reduced to rref."""

    rows: np.ndarray  # (count, r) global row ids
    cols: np.ndarray  # (count, c) global column ids
    r: np.ndarray  # (count, r, c)
    piv: np.ndarray  # (count, c), True at pivot columns


def coalesce(field: Field, nrows: int, ncols: int, rows, cols, vals):
    """Sum duplicate entries and drop zeros."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    if rows.size == 0:
        return rows, cols, field.zeros(0)
    key = rows * ncols + cols
    uniq, inv = np.unique(key, return_inverse=True)
    acc = field.zeros(uniq.size)
    np.add.at(acc, inv, vals)
    acc = field.reduce(acc)
    keep = acc != 0
    uniq = uniq[keep]
    return uniq // ncols, uniq % ncols, acc[keep]


def _inv_mod(x: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse mod p by Fermat; products stay below 2^62 for p < 2^31."""
    out = np.ones_like(x)
    base = x % p
    e = p - 2
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def _eliminate_batch(p: int, a: np.ndarray) -> np.ndarray:
    """Reduce every matrix of the stack a to rref in place; returns the pivot mask."""
    count, nr, nc = a.shape
    rank = np.zeros(count, dtype=np.int64)
    piv = np.zeros((count, nc), dtype=bool)
    row_ids = np.arange(nr)
    for c in range(nc):
        mask = (a[:, :, c] != 0) & (row_ids[None, :] >= rank[:, None])
        has = np.flatnonzero(mask.any(axis=1))
        if has.size == 0:
            continue
        src = mask[has].argmax(axis=1)
        dst = rank[has]
        swap = src != dst
        if swap.any():
            hb, s, d = has[swap], src[swap], dst[swap]
            tmp = a[hb, d].copy()
            a[hb, d] = a[hb, s]
            a[hb, s] = tmp
        prow = a[has, dst] * _inv_mod(a[has, dst, c], p)[:, None] % p
        a[has, dst] = prow
        factors = a[has, :, c].copy()
        factors[np.arange(has.size), dst] = 0
        a[has] = (a[has] - factors[:, :, None] * prow[:, None, :]) % p
        piv[has, c] = True
        rank[has] += 1
    return piv


def _single(field: Field, br, bc, block: np.ndarray) -> _Batch:
    # every row and column of a block holds a nonzero entry, so a single
    # row or a single column reduces without elimination
    if br.size == 1:
        if block[0, 0] != 1:
            block[0] = field.scale(block[0], field.inv(block[0, 0]))
        pivots = [0]
    elif bc.size == 1:
        block[:] = 0
        block[0, 0] = 1
        pivots = [0]
    else:
        pivots = _eliminate(field, block)
    mask = np.zeros((1, bc.size), dtype=bool)
    mask[0, pivots] = True
    return _Batch(br[None, :], bc[None, :], block[None], mask)


def _blocks(field: Field, nrows: int, ncols: int, rows, cols, vals) -> Iterator[_Batch]:
    """Row-reduce each connected block of the sparsity graph, small blocks in batches."""
    rows, cols, vals = coalesce(field, nrows, ncols, rows, cols, vals)
    if rows.size == 0:
        return
    n = nrows + ncols
    g = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, nrows + cols)), shape=(n, n))
    _, labels = connected_components(g, directed=False)
    row_lab = labels[:nrows]
    col_lab = labels[nrows:]
    used_cols = np.zeros(ncols, dtype=bool)
    used_cols[cols] = True
    used_rows = np.zeros(nrows, dtype=bool)
    used_rows[rows] = True

    sizes_r = np.bincount(row_lab[used_rows], minlength=n)
    sizes_c = np.bincount(col_lab[used_cols], minlength=n)
    _check_budget(int(np.sum(sizes_r * sizes_c)))

    c_ids = np.flatnonzero(used_cols)
    c_ids = c_ids[np.argsort(col_lab[c_ids], kind="stable")]
    r_ids = np.flatnonzero(used_rows)
    r_ids = r_ids[np.argsort(row_lab[r_ids], kind="stable")]
    comp = np.unique(col_lab[c_ids])
    c_start = np.searchsorted(col_lab[c_ids], comp)
    c_size = np.searchsorted(col_lab[c_ids], comp, side="right") - c_start
    r_start = np.searchsorted(row_lab[r_ids], comp)
    r_size = np.searchsorted(row_lab[r_ids], comp, side="right") - r_start

    # position of every used row and column inside its block
    local_row = np.zeros(nrows, dtype=np.int64)
    local_row[r_ids] = np.arange(r_ids.size) - r_start[np.searchsorted(comp, row_lab[r_ids])]
    local_col = np.zeros(ncols, dtype=np.int64)
    local_col[c_ids] = np.arange(c_ids.size) - c_start[np.searchsorted(comp, col_lab[c_ids])]
    entry_comp = np.searchsorted(comp, col_lab[cols])

    batched = isinstance(field, PrimeField)
    small = batched & (r_size <= _BATCH_MAX) & (c_size <= _BATCH_MAX)
    shape_key = np.where(small, r_size * (_BATCH_MAX + 1) + c_size, -1)
    entry_key = shape_key[entry_comp]
    order = np.argsort(entry_key, kind="stable")
    keys = entry_key[order]

    for key in np.unique(shape_key):
        if key < 0:
            continue
        ks = np.flatnonzero(shape_key == key)
        nr, nc = int(r_size[ks[0]]), int(c_size[ks[0]])
        slot = np.zeros(comp.size, dtype=np.int64)
        slot[ks] = np.arange(ks.size)
        es = order[np.searchsorted(keys, key) : np.searchsorted(keys, key, side="right")]
        a = np.zeros((ks.size, nr, nc), dtype=np.int64)
        a[slot[entry_comp[es]], local_row[rows[es]], local_col[cols[es]]] = vals[es]
        piv = _eliminate_batch(field.p, a)
        brs = r_ids[r_start[ks][:, None] + np.arange(nr)[None, :]]
        bcs = c_ids[c_start[ks][:, None] + np.arange(nc)[None, :]]
        yield _Batch(brs, bcs, a, piv)

    large = np.flatnonzero(~small)
    if large.size == 0:
        return
    es_all = order[np.searchsorted(keys, -1) : np.searchsorted(keys, -1, side="right")]
    es_all = es_all[np.argsort(entry_comp[es_all], kind="stable")]
    e_comp = entry_comp[es_all]
    for k in large:
        br = r_ids[r_start[k] : r_start[k] + r_size[k]]
        bc = c_ids[c_start[k] : c_start[k] + c_size[k]]
        es = es_all[np.searchsorted(e_comp, k) : np.searchsorted(e_comp, k, side="right")]
        block = field.zeros((br.size, bc.size))
        block[local_row[rows[es]], local_col[cols[es]]] = vals[es]
        yield _single(field, br, bc, block)


def sparse_rank(field: Field, nrows: int, ncols: int, rows, cols, vals) -> int:
    return sum(int(b.piv.sum()) for b in _blocks(field, nrows, ncols, rows, cols, vals))


def sparse_pivot_columns(field: Field, nrows: int, ncols: int, rows, cols, vals) -> np.ndarray:
    """Columns that are independent of all columns to their left."""
    found = [b.cols[b.piv] for b in _blocks(field, nrows, ncols, rows, cols, vals)]
    if not found:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(found))


def sparse_kernel(field: Field, nrows: int, ncols: int, rows, cols, vals) -> Family:
    """Kernel basis, one vector per free column, ordered by that column."""
    owner: list[np.ndarray] = []
    coords: list[np.ndarray] = []
    values: list[np.ndarray] = []
    touched = np.zeros(ncols, dtype=bool)
    for b in _blocks(field, nrows, ncols, rows, cols, vals):
        touched[b.cols.ravel()] = True
        free = ~b.piv
        fb, fj = np.nonzero(free)
        if fb.size == 0:
            continue
        owner.append(b.cols[fb, fj])
        coords.append(b.cols[fb, fj])
        values.append(field.array(np.ones(fb.size, dtype=np.int64)))
        # rref row i has its pivot at the i-th pivot column of its block
        pb, pc = np.nonzero(b.piv)
        if pb.size == 0:
            continue
        prow = np.arange(pb.size) - np.searchsorted(pb, pb)
        pivot_col = np.zeros(b.r.shape[:2], dtype=np.int64)
        pivot_col[pb, prow] = pc
        nb, ni, nj = np.nonzero((b.r != 0) & free[:, None, :])
        owner.append(b.cols[nb, nj])
        coords.append(b.cols[nb, pivot_col[nb, ni]])
        values.append(field.neg(b.r[nb, ni, nj]))
    empty = np.flatnonzero(~touched)
    owner.append(empty)
    coords.append(empty)
    values.append(field.array(np.ones(empty.size, dtype=np.int64)) if empty.size else field.zeros(0))
    owner_all = np.concatenate(owner)
    free_cols = np.unique(owner_all)
    idx = np.searchsorted(free_cols, owner_all)
    return Family(int(free_cols.size), ncols, idx, np.concatenate(coords), np.concatenate(values))


def family_rank(field: Field, fam: Family) -> int:
    return sparse_rank(field, fam.dim, fam.count, fam.coord, fam.idx, fam.val)


def independent_members(field: Field, fam: Family) -> np.ndarray:
    """Indices of members not in the span of earlier members."""
    return sparse_pivot_columns(field, fam.dim, fam.count, fam.coord, fam.idx, fam.val)


def sparse_apply(field: Field, nrows: int, rows, cols, vals, fam: Family) -> Family:
    """Images A @ v of each member v of fam, where A is given by triples."""
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    order = np.argsort(cols, kind="stable")
    rows, cols, vals = rows[order], cols[order], vals[order]
    start = np.searchsorted(cols, fam.coord)
    count = np.searchsorted(cols, fam.coord, side="right") - start
    total = int(count.sum())
    if total == 0:
        return Family(fam.count, nrows, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), field.zeros(0))
    which = np.repeat(np.arange(fam.coord.size), count)
    pos = start[which] + np.arange(total) - np.repeat(np.cumsum(count) - count, count)
    prod = field.reduce(vals[pos] * fam.val[which])
    owner, out_rows, out_vals = coalesce(field, fam.count, nrows, fam.idx[which], rows[pos], prod)
    return Family(fam.count, nrows, owner, out_rows, out_vals)


__all__ = [
    "DEFAULT_BUDGET",
    "Family",
    "GF",
    "PrimeField",
    "QQ",
    "RationalField",
    "budget",
    "coalesce",
    "family_rank",
    "field_for",
    "independent_members",
    "kernel_basis",
    "rank",
    "row_space",
    "rref",
    "solve",
    "sparse_apply",
    "sparse_kernel",
    "sparse_pivot_columns",
    "sparse_rank",
]
