"""Artinian local algebras k[x1..xn]/I as finite-dimensional k-algebras."""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .linalg import Field, field_for, rank, row_space
from .poly import (
    GroebnerBasis,
    Monomial,
    Polynomial,
    buchberger,
    mono_mul,
    normal_form,
    parse_polynomial,
    standard_monomials,
)


@dataclass(frozen=True)
class RingInvariants:
    length: int
    embdim: int
    type: int
    mult: int
    is_min_mult: bool


class ArtinAlgebra:
    """R = k[vars]/I with basis the standard monomials; basis[0] is 1.

    `var_matrices[i]` has column j equal to the coordinates of x_i * b_j.
    `structure[t]` has column j equal to the coordinates of b_t * b_j.
    """

    def __init__(self, field: Field, variables: Sequence[str], gb: GroebnerBasis):
        self.field = field
        self.variables = tuple(variables)
        self.gb = gb
        self.basis: list[Monomial] = standard_monomials(gb) if self.variables else [()]
        self.index = {m: j for j, m in enumerate(self.basis)}
        lam = len(self.basis)
        n = len(self.variables)
        self.var_matrices: list[np.ndarray] = []
        for i in range(n):
            x = field.zeros((lam, lam))
            unit = tuple(1 if v == i else 0 for v in range(n))
            for j, m in enumerate(self.basis):
                x[:, j] = self.coords(Polynomial.monomial(field, mono_mul(m, unit)))
            self.var_matrices.append(x)
        self.structure = self._basis_products(self.var_matrices)

    @property
    def length(self) -> int:
        return len(self.basis)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def _basis_products(self, var_mats: Sequence[np.ndarray]) -> list[np.ndarray]:
        """Multiplication matrices of the basis monomials, built along the staircase."""
        lam = self.length
        mats: list[np.ndarray] = [self.field.identity(lam)] + [None] * (lam - 1)  # type: ignore[list-item]
        for j, m in enumerate(self.basis[1:], start=1):
            i = next(v for v, e in enumerate(m) if e)
            parent = self.index[m[:i] + (m[i] - 1,) + m[i + 1 :]]
            mats[j] = self.field.matmul(var_mats[i], mats[parent])
        return mats

    def coords(self, f: Polynomial) -> np.ndarray:
        """Coordinate vector of f mod I in the standard-monomial basis."""
        out = self.field.zeros(self.length)
        if self.nvars == 0:
            out[0] = f.coeff(())
            return out
        for m, c in normal_form(f, self.gb).coeffs().items():
            out[self.index[m]] = c
        return out

    def element(self, text: str) -> np.ndarray:
        return self.coords(parse_polynomial(text, self.variables, self.field))

    def multiplication_matrix(self, a: np.ndarray) -> np.ndarray:
        out = self.field.zeros((self.length, self.length))
        for j in np.flatnonzero(np.asarray(a) != 0):
            out = out + self.field.scale(self.structure[j], a[j])
        return self.field.reduce(out)

    def multiply(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.field.matmul(self.multiplication_matrix(a), b)

    @cached_property
    def structure_entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Nonzero structure constants as (t, j, s, c): b_t * b_j has c at b_s.

        Sorted by j, the index that gets joined against vector entries.
        """
        ts, js, ss, cs = [], [], [], []
        for t, mat in enumerate(self.structure):
            s, j = np.nonzero(mat != 0)
            ts.append(np.full(s.size, t))
            js.append(j)
            ss.append(s)
            cs.append(mat[s, j])
        t = np.concatenate(ts).astype(np.int64)
        j = np.concatenate(js).astype(np.int64)
        s = np.concatenate(ss).astype(np.int64)
        c = np.concatenate(cs)
        order = np.lexsort((t, j))
        return t[order], j[order], s[order], c[order]

    def m_power_basis(self, j: int) -> np.ndarray:
        """Rows spanning m^j inside R (rref, so canonical)."""
        if j < 0:
            raise ValueError("power must be non-negative")
        return self._m_powers[min(j, len(self._m_powers) - 1)]

    @cached_property
    def _m_powers(self) -> list[np.ndarray]:
        f = self.field
        lam = self.length
        powers = [f.identity(lam)]
        current = f.identity(lam)[1:]
        while True:
            powers.append(current)
            if current.shape[0] == 0:
                return powers
            images = [f.matmul(current, x.T) for x in self.var_matrices]
            stacked = np.vstack(images) if images else f.zeros((0, lam))
            current = row_space(f, stacked) if stacked.shape[0] else f.zeros((0, lam))

    @property
    def loewy(self) -> int:
        """Least L with m^L = 0."""
        return len(self._m_powers) - 1

    def socle_dimension(self) -> int:
        if self.nvars == 0:
            return self.length
        return self.length - rank(self.field, np.vstack(self.var_matrices))

    def check_associativity(self, trials: int = 20, seed: int = 0) -> bool:
        """Randomized spot check of commutativity and associativity."""
        rng = random.Random(seed)
        f = self.field
        top = f.char if f.char else 7
        for _ in range(trials):
            a, b, c = (f.array([rng.randrange(top) for _ in range(self.length)]) for _ in range(3))
            ab = self.multiply(a, b)
            if not np.array_equal(ab, self.multiply(b, a)):
                return False
            if not np.array_equal(self.multiply(ab, c), self.multiply(a, self.multiply(b, c))):
                return False
        return True

    def __repr__(self) -> str:
        gens = ", ".join(str(g) for g in self.gb.generators)
        return f"ArtinAlgebra({self.field!r}, vars={list(self.variables)}, gb=[{gens}], length={self.length})"


def build_algebra(field: Field | int, variables: Sequence[str], ideal: Sequence[str | Polynomial]) -> ArtinAlgebra:
    if isinstance(field, int):
        field = field_for(field)
    n = len(variables)
    gens = [g if isinstance(g, Polynomial) else parse_polynomial(g, variables, field) for g in ideal]
    gens = [g for g in gens if not g.is_zero()]
    if gens:
        gb = buchberger(gens)
    else:
        gb = GroebnerBasis(field, n, ())
    return ArtinAlgebra(field, variables, gb)


def ring_invariants(r: ArtinAlgebra) -> RingInvariants:
    dim_m = r.m_power_basis(1).shape[0]
    dim_m2 = r.m_power_basis(2).shape[0]
    return RingInvariants(
        length=r.length,
        embdim=dim_m - dim_m2,
        type=r.socle_dimension(),
        mult=r.length,
        is_min_mult=dim_m2 == 0,
    )


def m_power_basis(r: ArtinAlgebra, j: int) -> np.ndarray:
    return r.m_power_basis(j)


__all__ = ["ArtinAlgebra", "RingInvariants", "build_algebra", "m_power_basis", "ring_invariants"]
