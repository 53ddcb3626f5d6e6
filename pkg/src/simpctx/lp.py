"""Exact rational simplex method (two phases, Bland's rule).

The core routine works on ``min c.x  s.t.  A x = b, x >= 0``.  When the
system is infeasible it returns a Farkas vector ``y`` with ``A^T y <= 0``
and ``b.y > 0``, read off the optimal phase-one dual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

Q = Fraction


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list[Fraction] | None = None
    value: Fraction | None = None
    farkas: list[Fraction] | None = None


def _pivot(T: list[list[Fraction]], z: list[Fraction], r: int, s: int) -> None:
    row = T[r]
    piv = row[s]
    if piv != 1:
        inv = 1 / piv
        T[r] = row = [v * inv if v else v for v in row]
    nz = [j for j, v in enumerate(row) if v]
    for i, other in enumerate(T):
        if i != r:
            f = other[s]
            if f:
                for j in nz:
                    other[j] -= f * row[j]
    f = z[s]
    if f:
        for j in nz:
            z[j] -= f * row[j]


def _run(T, z, basis, allowed: int) -> bool:
    """Bland's rule iterations on columns ``< allowed``; False if unbounded."""
    rhs = len(T[0]) - 1 if T else 0
    while True:
        s = next((j for j in range(allowed) if z[j] < 0), None)
        if s is None:
            return True
        best = None
        for i, row in enumerate(T):
            if row[s] > 0:
                ratio = row[rhs] / row[s]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        r = best[1]
        _pivot(T, z, r, s)
        basis[r] = s


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence | None = None) -> LPResult:
    """Minimize ``c.x`` over ``A x = b, x >= 0`` (feasibility only if ``c`` is None)."""
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    A = [[Q(v) for v in row] for row in A]
    b = [Q(v) for v in b]
    flip = [bi < 0 for bi in b]
    T = []
    for i in range(m):
        sign = -1 if flip[i] else 1
        T.append([sign * v for v in A[i]] + [Q(int(k == i)) for k in range(m)] + [sign * b[i]])
    basis = [n + i for i in range(m)]
    width = n + m + 1
    z = [Q(0)] * width
    for row in T:
        for j in list(range(n)) + [width - 1]:
            z[j] -= row[j]
    _run(T, z, basis, n + m)
    if -z[-1] > 0:
        y = [Q(1) - z[n + i] for i in range(m)]
        y = [-v if flip[i] else v for i, v in enumerate(y)]
        return LPResult("infeasible", farkas=y)

    # drive artificials out of the basis; drop redundant rows
    keep = []
    for i in range(m):
        if basis[i] >= n:
            s = next((j for j in range(n) if T[i][j] != 0), None)
            if s is None:
                continue
            _pivot(T, z, i, s)
            basis[i] = s
        keep.append(i)
    T = [T[i][:n] + [T[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    if c is None:
        x = [Q(0)] * n
        for i, j in enumerate(basis):
            x[j] = T[i][-1]
        return LPResult("optimal", x=x, value=Q(0))

    c = [Q(v) for v in c]
    z = c + [Q(0)]
    for i, j in enumerate(basis):
        if c[j]:
            z = [zv - c[j] * tv for zv, tv in zip(z, T[i])]
    if not _run(T, z, basis, n):
        return LPResult("unbounded")
    x = [Q(0)] * n
    for i, j in enumerate(basis):
        x[j] = T[i][-1]
    return LPResult("optimal", x=x, value=sum(ci * xi for ci, xi in zip(c, x)))


def feasible(A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Find ``x >= 0`` with ``A x = b`` or a Farkas certificate."""
    return solve_standard(A, b, None)


def maximize(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    free: bool = True,
) -> LPResult:
    """Maximize ``c.x`` subject to ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Variables are free by default (split as ``x+ - x-``).
    """
    n = len(c)
    k = len(A_ub)
    rows, rhs = [], []

    def expand(row):
        row = [Q(v) for v in row]
        return row + [-v for v in row] if free else row

    width = 2 * n if free else n
    for i, (row, bi) in enumerate(zip(A_ub, b_ub)):
        rows.append(expand(row) + [Q(int(j == i)) for j in range(k)])
        rhs.append(bi)
    for row, bi in zip(A_eq, b_eq):
        rows.append(expand(row) + [Q(0)] * k)
        rhs.append(bi)
    cost = [-v for v in expand(c)] + [Q(0)] * k
    if not rows:
        if any(cost):
            return LPResult("unbounded")
        return LPResult("optimal", x=[Q(0)] * n, value=Q(0))
    res = solve_standard(rows, rhs, cost)
    if res.status != "optimal":
        return res
    xs = res.x[:width]
    x = [xs[j] - xs[n + j] for j in range(n)] if free else xs
    return LPResult("optimal", x=x, value=-res.value)
