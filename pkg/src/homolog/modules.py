"""Finitely generated modules over an Artinian algebra, realized as k-spaces.

A realization stores one dim x dim matrix per ring variable; vectors are
columns and x_i acts by left multiplication.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import ArtinAlgebra
from .errors import RingMismatchError, ZeroModuleError
from .linalg import Family, independent_members, kernel_basis, rank, rref


@dataclass(frozen=True)
class ModulePresentation:
    """coker(R^q -> R^p); `matrix[i, g]` is the coordinate vector of entry (i, g)."""

    ring: ArtinAlgebra
    gens: int
    matrix: np.ndarray  # shape (q, p, length of ring)

    @property
    def rels(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_strings(cls, ring: ArtinAlgebra, rows: Sequence[Sequence[str]], gens: int | None = None) -> "ModulePresentation":
        rows = [list(r) for r in rows]
        if gens is None:
            if not rows:
                raise ValueError("a presentation without relations needs an explicit generator count")
            gens = len(rows[0])
        if any(len(r) != gens for r in rows):
            raise ValueError("every relation row needs one entry per generator")
        mat = ring.field.zeros((len(rows), gens, ring.length))
        for i, r in enumerate(rows):
            for g, text in enumerate(r):
                mat[i, g] = ring.element(text)
        return cls(ring, gens, mat)


@dataclass(frozen=True)
class ModuleInvariants:
    length: int
    mu: int
    type: int
    mult: int
    is_min_mult: bool
    is_ulrich: bool


@dataclass(eq=False)
class ModuleRealization:
    ring: ArtinAlgebra
    actions: list[np.ndarray]
    gen_coords: np.ndarray | None = None  # dim x p, columns are the presentation generators
    cache: dict = dc_field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return 0 if not self.actions else self.actions[0].shape[0]

    @property
    def field(self):
        return self.ring.field

    @cached_property
    def basis_actions(self) -> list[np.ndarray]:
        """Action of each standard monomial of the ring."""
        return _monomial_actions(self.ring, self.actions, self.dim)

    def act(self, a: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by the ring element with coordinates a."""
        f = self.field
        out = f.zeros((self.dim, self.dim))
        for j in np.flatnonzero(np.asarray(a) != 0):
            out = out + f.scale(self.basis_actions[j], a[j])
        return f.reduce(out)

    @cached_property
    def m_image(self) -> np.ndarray:
        """rref rows spanning mM."""
        f = self.field
        if self.dim == 0 or not self.actions:
            return f.zeros((0, self.dim))
        r, _, rk = rref(f, np.hstack(self.actions).T)
        return r[:rk]

    def minimal_generators(self) -> list[int]:
        """Coordinates whose unit vectors lift a basis of M/mM (non-pivots of mM)."""
        r, pivots, _ = rref(self.field, self.m_image) if self.m_image.shape[0] else (None, [], 0)
        piv = set(pivots)
        return [c for c in range(self.dim) if c not in piv]

    def __repr__(self) -> str:
        return f"ModuleRealization(dim={self.dim}, ring={self.ring!r})"


def _monomial_actions(ring: ArtinAlgebra, actions: Sequence[np.ndarray], dim: int) -> list[np.ndarray]:
    f = ring.field
    mats: list[np.ndarray] = [f.identity(dim)]
    for m in ring.basis[1:]:
        i = next(v for v, e in enumerate(m) if e)
        parent = ring.index[m[:i] + (m[i] - 1,) + m[i + 1 :]]
        mats.append(f.matmul(actions[i], mats[parent]))
    return mats


def free_module(ring: ArtinAlgebra, rank_: int) -> ModuleRealization:
    f = ring.field
    eye = f.identity(rank_)
    actions = [f.reduce(np.kron(eye, x)) if rank_ else f.zeros((0, 0)) for x in ring.var_matrices]
    gens = f.zeros((rank_ * ring.length, rank_))
    for g in range(rank_):
        gens[g * ring.length, g] = 1
    return ModuleRealization(ring, actions, gens)


def residue_field(ring: ArtinAlgebra) -> ModuleRealization:
    f = ring.field
    return ModuleRealization(ring, [f.zeros((1, 1)) for _ in ring.variables], f.identity(1))


def zero_module(ring: ArtinAlgebra) -> ModuleRealization:
    f = ring.field
    return ModuleRealization(ring, [f.zeros((0, 0)) for _ in ring.variables], f.zeros((0, 0)))


def quotient(m: ModuleRealization, sub_rows: np.ndarray) -> ModuleRealization:
    """M / (k-span of sub_rows), which must be a submodule.

    Quotient coordinates are the non-pivot coordinates of the rref of the
    span; a vector is projected by clearing its pivot entries.
    """
    f = m.field
    dim = m.dim
    sub_rows = np.asarray(sub_rows)
    if sub_rows.shape[0]:
        s, pivots, rk = rref(f, sub_rows)
        s = s[:rk]
    else:
        s, pivots = f.zeros((0, dim)), []
    piv = set(pivots)
    keep = [c for c in range(dim) if c not in piv]
    proj = f.zeros((len(keep), dim))
    if keep:
        proj[np.arange(len(keep)), keep] = 1
        if pivots:
            proj[:, pivots] = f.neg(s[:, keep]).T
    actions = [f.matmul(proj, x[:, keep]) if keep else f.zeros((0, 0)) for x in m.actions]
    gens = f.matmul(proj, m.gen_coords) if m.gen_coords is not None else None
    return ModuleRealization(m.ring, actions, gens)


def submodule(m: ModuleRealization, rows: np.ndarray) -> ModuleRealization:
    """The submodule spanned (over k) by rows, with coordinates read at rref pivots."""
    f = m.field
    rows = np.asarray(rows)
    if rows.shape[0] == 0:
        return zero_module(m.ring)
    b, pivots, rk = rref(f, rows)
    b = b[:rk]
    if rk == 0:
        return zero_module(m.ring)
    actions = [f.matmul(x, b.T)[pivots, :] for x in m.actions]
    return ModuleRealization(m.ring, actions, None)


def realize(pres: ModulePresentation) -> ModuleRealization:
    ring = pres.ring
    f = ring.field
    lam = ring.length
    free = free_module(ring, pres.gens)
    spans = []
    for row in pres.matrix:
        flat = row.reshape(pres.gens * lam)
        for mat in free.basis_actions:
            spans.append(f.matmul(mat, flat))
    sub = np.array(spans) if spans else f.zeros((0, pres.gens * lam))
    return quotient(free, sub)


def module_invariants(m: ModuleRealization) -> ModuleInvariants:
    f = m.field
    if m.dim == 0:
        return ModuleInvariants(0, 0, 0, 0, False, False)
    mu = m.dim - m.m_image.shape[0]
    typ = m.dim - rank(f, np.vstack(m.actions)) if m.actions else m.dim
    ulrich = all(not np.any(x) for x in m.actions)
    min_mult = all(not np.any(f.matmul(x, y)) for x in m.actions for y in m.actions)
    return ModuleInvariants(m.dim, mu, typ, m.dim, min_mult, ulrich)


def matlis_dual(m: ModuleRealization) -> ModuleRealization:
    return ModuleRealization(m.ring, [x.T.copy() for x in m.actions], None)


def cover_matrix(m: ModuleRealization) -> tuple[np.ndarray, list[int]]:
    """k-matrix of the minimal cover R^mu -> M and the lifted generators.

    Column g*length + t is b_t applied to the g-th generator.
    """
    f = m.field
    gens = m.minimal_generators()
    lam = m.ring.length
    cover = f.zeros((m.dim, len(gens) * lam))
    for g, c in enumerate(gens):
        for t, mat in enumerate(m.basis_actions):
            cover[:, g * lam + t] = mat[:, c]
    return cover, gens


def syzygy_rows(m: ModuleRealization) -> np.ndarray:
    """Rows in k^(mu*length) spanning the kernel of the minimal cover."""
    cover, _ = cover_matrix(m)
    return kernel_basis(m.field, cover)


def syzygy(m: ModuleRealization) -> ModuleRealization:
    if m.dim == 0:
        raise ZeroModuleError("the syzygy of the zero module is not defined")
    mu = len(m.minimal_generators())
    return submodule(free_module(m.ring, mu), syzygy_rows(m))


def free_minimal_generators(ring: ArtinAlgebra, rank_: int, rows: np.ndarray) -> np.ndarray:
    """Members of a submodule of R^rank (given by spanning rows) that minimally generate it."""
    f = ring.field
    if rows.shape[0] == 0:
        return rows
    free = free_module(ring, rank_)
    m_rows = [f.matmul(rows, x.T) for x in free.actions]
    stacked = np.vstack(m_rows + [rows])
    fam = Family.from_dense(f, stacked)
    picked = independent_members(f, fam)
    offset = stacked.shape[0] - rows.shape[0]
    return rows[picked[picked >= offset] - offset]


def minimal_presentation(m: ModuleRealization) -> ModulePresentation:
    ring = m.ring
    f = ring.field
    if m.dim == 0:
        return ModulePresentation(ring, 0, f.zeros((0, 0, ring.length)))
    mu = len(m.minimal_generators())
    rels = free_minimal_generators(ring, mu, syzygy_rows(m))
    return ModulePresentation(ring, mu, rels.reshape(rels.shape[0], mu, ring.length))


def direct_sum(a: ModuleRealization, b: ModuleRealization) -> ModuleRealization:
    if a.ring is not b.ring:
        raise RingMismatchError("direct sum of modules over different rings")
    f = a.field
    actions = []
    for x, y in zip(a.actions, b.actions):
        z = f.zeros((a.dim + b.dim, a.dim + b.dim))
        z[: a.dim, : a.dim] = x
        z[a.dim :, a.dim :] = y
        actions.append(z)
    return ModuleRealization(a.ring, actions, None)


def commutes(m: ModuleRealization) -> bool:
    """Actions pairwise commute and kill every ideal generator."""
    f = m.field
    for i, x in enumerate(m.actions):
        for y in m.actions[i + 1 :]:
            if not np.array_equal(f.matmul(x, y), f.matmul(y, x)):
                return False
    for g in m.ring.gb.generators:
        total = f.zeros((m.dim, m.dim))
        for mono, c in g.coeffs().items():
            mat = f.identity(m.dim)
            for i, e in enumerate(mono):
                for _ in range(e):
                    mat = f.matmul(m.actions[i], mat)
            total = f.reduce(total + f.scale(mat, c))
        if np.any(total):
            return False
    return True


__all__ = [
    "ModuleInvariants",
    "ModulePresentation",
    "ModuleRealization",
    "commutes",
    "cover_matrix",
    "direct_sum",
    "free_minimal_generators",
    "free_module",
    "matlis_dual",
    "minimal_presentation",
    "module_invariants",
    "quotient",
    "realize",
    "residue_field",
    "submodule",
    "syzygy",
    "zero_module",
]
