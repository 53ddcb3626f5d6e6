"""Integer Smith normal form and linear algebra over Z/d.

All matrices are lists of lists of Python ints.  ``smith_normal_form``
returns unimodular ``U, V`` (and their inverses) with ``U A V = D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, prod
from typing import Iterator, Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def matvec(A: Matrix, x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


@dataclass
class SNF:
    D: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        """Nonzero invariant factors, in order (each divides the next)."""
        out = []
        for i in range(min(len(self.D), len(self.D[0]) if self.D else 0)):
            if self.D[i][i] == 0:
                break
            out.append(self.D[i][i])
        return out


def smith_normal_form(A: Sequence[Sequence[int]], ncols: int | None = None) -> SNF:
    """Smith normal form with transformation matrices.

    ``ncols`` is needed only when ``A`` has no rows.
    """
    D = [list(map(int, row)) for row in A]
    m = len(D)
    n = len(D[0]) if m else (ncols or 0)
    U, Ui, V, Vi = identity(m), identity(m), identity(n), identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, c):  # row_i += c * row_j
        D[i] = [a + c * b for a, b in zip(D[i], D[j])]
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
        for row in Ui:
            row[j] -= c * row[i]

    def negate_row(i):
        D[i] = [-a for a in D[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    def swap_cols(i, j):
        for M in (D, V):
            for row in M:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(i, j, c):  # col_i += c * col_j
        for M in (D, V):
            for row in M:
                row[i] += c * row[j]
        Vi[j] = [a - c * b for a, b in zip(Vi[j], Vi[i])]

    t = 0
    while t < min(m, n):
        entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        done = False
            if not done:
                entries = [(abs(D[i][t]), i, t) for i in range(t, m) if D[i][t]]
                entries += [(abs(D[t][j]), t, j) for j in range(t, n) if D[t][j]]
                _, i, j = min(entries)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1
    return SNF(D, U, V, Ui, Vi)


@dataclass
class SolutionSpace:
    """Affine solution set ``x0 + span`` of ``A x = b`` over Z/d.

    ``generators[k]`` has additive order ``orders[k]``; every solution is
    uniquely ``x0 + sum c_k generators[k]`` with ``0 <= c_k < orders[k]``.
    """

    d: int
    x0: list[int]
    generators: list[list[int]]
    orders: list[int]

    @property
    def size(self) -> int:
        return prod(self.orders)

    def __iter__(self) -> Iterator[list[int]]:
        for coeffs in product(*(range(o) for o in self.orders)):
            x = list(self.x0)
            for c, g in zip(coeffs, self.generators):
                if c:
                    x = [(a + c * b) % self.d for a, b in zip(x, g)]
            yield x


def _inverse_mod(a: int, m: int) -> int:
    return pow(a, -1, m) if m > 1 else 0


def solve_mod(A: Sequence[Sequence[int]], b: Sequence[int], d: int, ncols: int | None = None) -> SolutionSpace | None:
    """All solutions of ``A x = b (mod d)``, or ``None`` when there are none."""
    if d < 2:
        raise ValueError("modulus must be at least 2")
    m = len(A)
    n = len(A[0]) if m else (ncols if ncols is not None else 0)
    snf = smith_normal_form(A, n)
    c = [v % d for v in matvec(snf.U, b)] if m else []
    diag = snf.diagonal
    y0 = [0] * n
    gens_y: list[tuple[int, int]] = []  # (coordinate, step) with order
    orders: list[int] = []
    for i in range(m):
        s = diag[i] if i < len(diag) else 0
        if s == 0:
            if c[i] % d:
                return None
            continue
        g = gcd(s, d)
        if c[i] % g:
            return None
        dd = d // g
        y0[i] = (c[i] // g) * _inverse_mod((s // g) % dd, dd) % dd if dd > 1 else 0
        if g > 1:
            gens_y.append((i, dd))
            orders.append(g)
    for j in range(len(diag), n):
        gens_y.append((j, 1))
        orders.append(d)
    x0 = [v % d for v in matvec(snf.V, y0)]
    gens = []
    for j, step in gens_y:
        gens.append([(row[j] * step) % d for row in snf.V])
    return SolutionSpace(d, x0, gens, orders)


def abelian_quotient(orders: Sequence[int], relations: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Invariant factors of ``(⊕ Z/orders[k]) / <relations>``.

    Returns the nontrivial cyclic orders and, for each, a generator as a
    coefficient vector over the original generators.  An order of 0 stands
    for a free summand.
    """
    k = len(orders)
    columns = [[o if i == j else 0 for i in range(k)] for j, o in enumerate(orders) if o]
    columns += [list(r) for r in relations]
    if not columns:
        return [0] * k, [[int(i == j) for i in range(k)] for j in range(k)]
    M = [[col[i] for col in columns] for i in range(k)]
    snf = smith_normal_form(M, len(columns))
    diag = snf.diagonal + [0] * (k - len(snf.diagonal))
    invariants, gens = [], []
    for i, s in enumerate(diag):
        if s == 1:
            continue
        invariants.append(s)
        gens.append([row[i] for row in snf.U_inv])
    return invariants, gens
