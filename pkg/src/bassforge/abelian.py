"""Finitely generated abelian groups as cokernels of integer matrices.

Matrices are lists of rows of Python ints (arbitrary precision); nothing in
here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence


class InfiniteGroupError(ArithmeticError):
    """Raised when the order of an infinite group is requested."""


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A, rows=None, cols=None):
    rows = len(A) if rows is None else rows
    cols = (len(A[0]) if A else 0) if cols is None else cols
    return [[A[i][j] for i in range(rows)] for j in range(cols)]


def determinant(A):
    """Exact integer determinant (fraction-free Bareiss elimination)."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(M: Sequence[Sequence[int]], rows=None, cols=None):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` diagonal, ``U``/``V`` unimodular.

    The diagonal satisfies ``D[0][0] | D[1][1] | ...`` with non-negative
    entries.  ``rows``/``cols`` are needed only for matrices with no rows.
    """
    m = len(M) if rows is None else rows
    n = (len(M[0]) if m else 0) if cols is None else cols
    D = [list(map(int, r)) for r in M] if m else []
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):  # col_dst += k * col_src
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        # pivot: smallest nonzero absolute value in the remaining block
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    done = False
            if not done:
                continue
            # enforce divisibility into the rest of the block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if t < m and t < n and D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def invariant_factors(M, rows=None, cols=None):
    D, _, _ = smith_normal_form(M, rows, cols)
    k = min(len(D), len(D[0]) if D else 0)
    return [D[i][i] for i in range(k)]


@dataclass(frozen=True)
class FgAbelianGroup:
    """``Z^free_rank ⊕ Z/d1 ⊕ ... ⊕ Z/dk`` with ``d1 | d2 | ...`` and each ``di >= 2``."""

    free_rank: int = 0
    torsion: tuple = field(default=())

    def __post_init__(self):
        tors = tuple(int(d) for d in self.torsion)
        if any(d < 2 for d in tors):
            raise ValueError("invariant factors must be >= 2 (drop the units)")
        if any(b % a for a, b in zip(tors, tors[1:])):
            raise ValueError(f"invariant factors {tors} do not form a divisibility chain")
        object.__setattr__(self, "torsion", tors)
        if self.free_rank < 0:
            raise ValueError("free rank is non-negative")

    @classmethod
    def from_factors(cls, factors, free_rank=0):
        """Canonical form of ``Z^free_rank ⊕ ⊕ Z/f``; a factor 0 stands for ``Z``."""
        diag = [abs(int(f)) for f in factors] + [0] * free_rank
        n = len(diag)
        return cokernel([[f if i == j else 0 for j in range(n)] for i, f in enumerate(diag)], n, n)

    @property
    def ngens(self):
        return self.free_rank + len(self.torsion)

    def is_finite(self):
        return self.free_rank == 0

    def order(self):
        if self.free_rank:
            raise InfiniteGroupError(f"group has free rank {self.free_rank}")
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def rank(self):
        return self.free_rank

    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    # Elements are integer vectors: free coordinates first, then torsion ones.
    def moduli(self):
        return (0,) * self.free_rank + self.torsion

    def normalize(self, v):
        return tuple(x % d if d else x for x, d in zip(v, self.moduli()))

    def zero(self):
        return (0,) * self.ngens

    def add(self, a, b):
        return self.normalize([x + y for x, y in zip(a, b)])

    def neg(self, a):
        return self.normalize([-x for x in a])


def cokernel(M, rows=None, cols=None) -> FgAbelianGroup:
    """``Z^rows / (column span of M)`` in canonical form."""
    m = len(M) if rows is None else rows
    n = (len(M[0]) if m else 0) if cols is None else cols
    diag = invariant_factors(M, m, n) if m and n else []
    diag = diag + [0] * (m - len(diag))
    free = sum(1 for d in diag if d == 0)
    return FgAbelianGroup(free, tuple(d for d in diag if d > 1))


def is_finite(A: FgAbelianGroup) -> bool:
    return A.is_finite()


def order(A: FgAbelianGroup) -> int:
    return A.order()


def rank(A: FgAbelianGroup) -> int:
    return A.rank()


def column_hermite(gens, dim):
    """Echelon basis of the lattice spanned by integer vectors ``gens`` in ``Z^dim``.

    Returns a list of ``(pivot, vector)`` with strictly increasing pivots and
    positive pivot entries; used to reduce vectors modulo the lattice.
    """
    vecs = [list(v) for v in gens if any(v)]
    basis = []
    for p in range(dim):
        rows = [v for v in vecs if v[p] != 0]
        rest = [v for v in vecs if v[p] == 0]
        while len(rows) > 1:
            rows.sort(key=lambda v: abs(v[p]))
            piv = rows[0]
            new = [piv]
            for v in rows[1:]:
                q = v[p] // piv[p]
                w = [a - q * b for a, b in zip(v, piv)]
                if w[p] != 0:
                    new.append(w)
                elif any(w):
                    rest.append(w)
            rows = new
        if rows:
            piv = rows[0]
            if piv[p] < 0:
                piv = [-a for a in piv]
            basis.append((p, piv))
        vecs = rest
    return basis


def reduce_mod(v, basis):
    """Canonical representative of ``v`` modulo a lattice given by ``column_hermite``."""
    v = list(v)
    for p, b in basis:
        q = v[p] // b[p]
        if q:
            v = [a - q * c for a, c in zip(v, b)]
    return tuple(v)


def has_finite_index(vectors, dim):
    """True iff the lattice spanned by ``vectors`` has finite index in ``Z^dim``."""
    return lattice_rank(vectors, dim) == dim


def lattice_rank(vectors, dim):
    if not vectors:
        return 0
    return len(column_hermite(vectors, dim))


def gcd_list(xs):
    g = 0
    for x in xs:
        g = gcd(g, x)
    return g
