"""Linear systems over the rationals: Fourier–Motzkin elimination,
redundancy removal and facet enumeration by double description."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .errors import ResourceCapError
from .lp import maximize

Q = Fraction


def _primitive(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    """Scale by a positive factor to coprime integers."""
    vals = list(coeffs) + [rhs]
    den = 1
    for v in vals:
        den = lcm(den, Q(v).denominator)
    ints = [int(Q(v) * den) for v in vals]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(Q(0) for _ in coeffs), Q(0)
    ints = [v // g for v in ints]
    return tuple(Q(v) for v in ints[:-1]), Q(ints[-1])


@dataclass(frozen=True)
class Constraint:
    """``coeffs . x <= rhs`` (kind "le") or ``coeffs . x = rhs`` (kind "eq")."""

    coeffs: tuple[Fraction, ...]
    rhs: Fraction
    kind: str = "le"

    def normalized(self) -> "Constraint":
        coeffs, rhs = _primitive(self.coeffs, self.rhs)
        if self.kind == "eq":
            lead = next((v for v in coeffs if v), rhs)
            if lead < 0:
                coeffs, rhs = tuple(-v for v in coeffs), -rhs
        return Constraint(coeffs, rhs, self.kind)

    def holds(self, x: Sequence) -> bool:
        lhs = sum(Q(a) * Q(v) for a, v in zip(self.coeffs, x))
        return lhs == self.rhs if self.kind == "eq" else lhs <= self.rhs

    @property
    def trivial(self) -> bool:
        return not any(self.coeffs)


@dataclass(frozen=True)
class LinearSystem:
    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if len(c.coeffs) != len(self.variables):
                raise ValueError("constraint width does not match the variable list")

    @classmethod
    def build(cls, variables: Sequence[str], rows: Iterable[tuple[Mapping[str, object], object, str]]) -> "LinearSystem":
        """Rows are ``({var: coeff}, rhs, kind)`` with kind in ``<=, >=, ==``."""
        variables = tuple(variables)
        idx = {v: i for i, v in enumerate(variables)}
        out = []
        for coeffs, rhs, kind in rows:
            vec = [Q(0)] * len(variables)
            for v, a in coeffs.items():
                vec[idx[v]] += Q(a)
            rhs = Q(rhs)
            if kind == ">=":
                vec, rhs, kind = [-a for a in vec], -rhs, "<="
            out.append(Constraint(tuple(vec), rhs, {"<=": "le", "==": "eq"}[kind]))
        return cls(variables, tuple(out))

    def index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"variable {var!r} not in system") from None

    def contains(self, x: Sequence) -> bool:
        return all(c.holds(x) for c in self.constraints)

    @property
    def inequalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.kind == "le"]

    @property
    def equalities(self) -> list[Constraint]:
        return [c for c in self.constraints if c.kind == "eq"]

    def canonical(self) -> "LinearSystem":
        """Normalize rows, drop tautologies and duplicates, sort."""
        seen = set()
        rows = []
        for c in self.constraints:
            c = c.normalized()
            if c.trivial and ((c.kind == "le" and c.rhs >= 0) or (c.kind == "eq" and c.rhs == 0)):
                continue
            key = (c.kind, c.coeffs, c.rhs)
            if key not in seen:
                seen.add(key)
                rows.append(c)
        rows.sort(key=lambda c: (c.kind, c.coeffs, c.rhs))
        return LinearSystem(self.variables, tuple(rows))

    def pretty(self) -> list[str]:
        lines = []
        for c in self.constraints:
            terms = []
            for a, v in zip(c.coeffs, self.variables):
                if a:
                    sign = "-" if a < 0 else "+"
                    mag = "" if abs(a) == 1 else f"{abs(a)} "
                    terms.append(f"{sign} {mag}{v}")
            lhs = " ".join(terms).lstrip("+ ") or "0"
            lines.append(f"{lhs} {'<=' if c.kind == 'le' else '='} {c.rhs}")
        return lines


def fourier_motzkin(system: LinearSystem, var: str, prune: bool = True) -> LinearSystem:
    """Project out ``var``.

    An equality involving ``var`` is used for substitution; otherwise every
    pair of inequalities with opposite signs on ``var`` is combined.  With
    ``prune`` the result is canonicalized and LP-redundant rows removed.
    """
    j = system.index(var)
    rows = list(system.constraints)
    pivot = next((c for c in rows if c.kind == "eq" and c.coeffs[j] != 0), None)
    new: list[Constraint] = []
    if pivot is not None:
        for c in rows:
            if c is pivot:
                continue
            f = c.coeffs[j] / pivot.coeffs[j]
            if f:
                c = Constraint(tuple(a - f * b for a, b in zip(c.coeffs, pivot.coeffs)), c.rhs - f * pivot.rhs, c.kind)
            new.append(c)
    else:
        pos = [c for c in rows if c.kind == "le" and c.coeffs[j] > 0]
        neg = [c for c in rows if c.kind == "le" and c.coeffs[j] < 0]
        new = [c for c in rows if c.coeffs[j] == 0]
        for p in pos:
            for n in neg:
                a, b = -n.coeffs[j], p.coeffs[j]
                new.append(
                    Constraint(tuple(a * x + b * y for x, y in zip(p.coeffs, n.coeffs)), a * p.rhs + b * n.rhs, "le")
                )
    variables = system.variables[:j] + system.variables[j + 1 :]
    dropped = tuple(Constraint(c.coeffs[:j] + c.coeffs[j + 1 :], c.rhs, c.kind) for c in new)
    out = LinearSystem(variables, dropped).canonical()
    return remove_redundant(out) if prune else out


def project(system: LinearSystem, keep: Sequence[str], prune: bool = True) -> LinearSystem:
    """Eliminate every variable not in ``keep``; the result lists ``keep`` in order."""
    for v in [v for v in system.variables if v not in keep]:
        system = fourier_motzkin(system, v, prune)
    order = [system.index(v) for v in keep]
    rows = tuple(Constraint(tuple(c.coeffs[i] for i in order), c.rhs, c.kind) for c in system.constraints)
    return LinearSystem(tuple(keep), rows).canonical()


def remove_redundant(system: LinearSystem) -> LinearSystem:
    """Drop inequalities implied by the remaining rows (exact LP test)."""
    rows = list(system.constraints)
    k = 0
    while k < len(rows):
        c = rows[k]
        if c.kind != "le":
            k += 1
            continue
        others = rows[:k] + rows[k + 1 :]
        ub = [o for o in others if o.kind == "le"]
        eq = [o for o in others if o.kind == "eq"]
        res = maximize(
            list(c.coeffs),
            [o.coeffs for o in ub],
            [o.rhs for o in ub],
            [o.coeffs for o in eq],
            [o.rhs for o in eq],
        )
        if res.status == "infeasible" or (res.status == "optimal" and res.value <= c.rhs):
            rows.pop(k)
        else:
            k += 1
    return LinearSystem(system.variables, tuple(rows))


# ---------------------------------------------------------------------------
# double description


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    M = [list(r) for r in rows]
    pivots = []
    r = 0
    ncols = len(M[0]) if M else 0
    for col in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][col] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][col]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    R, pivots = _rref(rows) if rows else ([], [])
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = [Q(0)] * ncols
        v[f] = Q(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def _prim_vec(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    coeffs, _ = _primitive(list(v), Q(0))
    return coeffs


@dataclass
class FacetDescription:
    """H-description of a polytope: ``A x = b`` rows and facets ``a x <= b``.

    Facets are expressed in the coordinates listed in ``coordinates``
    (indices into the original coordinate vector); other coordinates are
    determined by the equalities.
    """

    dimension: int
    equalities: list[tuple[tuple[Fraction, ...], Fraction]]
    facets: list[tuple[tuple[Fraction, ...], Fraction]]
    coordinates: list[int] = field(default_factory=list)


def facets_from_vertices(points: Sequence[Sequence], max_dd_vertices: int = 64, cap: int = 200000) -> FacetDescription:
    """Facets of the convex hull of ``points`` (exact).

    Uses double description for up to ``max_dd_vertices`` points and
    Fourier–Motzkin projection of the convex-combination system otherwise.
    """
    pts = [tuple(Q(v) for v in p) for p in dict.fromkeys(tuple(Q(v) for v in p) for p in points)]
    if not pts:
        raise ValueError("no points")
    k = len(pts[0])
    diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
    R, pivots = _rref(diffs) if diffs else ([], [])
    r = len(pivots)
    eqs = []
    for u in nullspace(diffs, k) if diffs else [[Q(int(i == j)) for i in range(k)] for j in range(k)]:
        coeffs, rhs = _primitive(u, sum(a * b for a, b in zip(u, pts[0])))
        eqs.append((coeffs, rhs))
    if r == 0:
        return FacetDescription(0, eqs, [], [])
    proj = [tuple(p[j] for j in pivots) for p in pts]
    if len(proj) <= max_dd_vertices:
        raw = _double_description(proj, cap)
    else:
        raw = _facets_by_projection(proj)
    full = []
    for a, b in raw:
        vec = [Q(0)] * k
        for j, v in zip(pivots, a):
            vec[j] = v
        full.append(_primitive(vec, b))
    full = sorted(set(full))
    return FacetDescription(r, eqs, full, pivots)


def _double_description(points: list[tuple[Fraction, ...]], cap: int) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Extreme rays of ``{h : (1, p) . h >= 0 for all p}`` for full-dimensional points."""
    gens = [(Q(1),) + p for p in points]
    dim = len(gens[0])
    # initial basis of dim independent generators
    chosen: list[int] = []
    basis_rows: list[list[Fraction]] = []
    for i, g in enumerate(gens):
        trial = basis_rows + [list(g)]
        if len(_rref(trial)[1]) == len(trial):
            basis_rows = trial
            chosen.append(i)
            if len(chosen) == dim:
                break
    # inverse of the basis matrix gives the initial rays
    aug = [row + [Q(int(i == j)) for j in range(dim)] for i, row in enumerate(basis_rows)]
    red, _ = _rref(aug)
    inv = [row[dim:] for row in red]
    rays = []
    for j in range(dim):
        h = _prim_vec([inv[i][j] for i in range(dim)])
        tight = frozenset(chosen[i] for i in range(dim) if i != j)
        rays.append((h, tight))
    for idx, g in enumerate(gens):
        if idx in chosen:
            continue
        vals = [sum(a * b for a, b in zip(g, h)) for h, _ in rays]
        pos = [(r, v) for r, v in zip(rays, vals) if v > 0]
        neg = [(r, v) for r, v in zip(rays, vals) if v < 0]
        zero = [r for r, v in zip(rays, vals) if v == 0]
        new = [r for r, _ in pos] + [(h, t | {idx}) for h, t in zero]
        for (hp, tp), vp in pos:
            for (hn, tn), vn in neg:
                common = tp & tn
                if len(common) < dim - 2:
                    continue
                if any(common <= t for h, t in rays if h not in (hp, hn)):
                    continue
                h = _prim_vec([vp * a - vn * b for a, b in zip(hn, hp)])
                new.append((h, common | {idx}))
                if len(new) > cap:
                    raise ResourceCapError("double description exceeded the ray cap")
        rays = new
    out = []
    for h, _ in rays:
        out.append((tuple(-v for v in h[1:]), h[0]))
    return out


def _facets_by_projection(points: list[tuple[Fraction, ...]]) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    k = len(points[0])
    xs = [f"x{i}" for i in range(k)]
    ls = [f"l{j}" for j in range(len(points))]
    rows = []
    for i in range(k):
        coeffs = {xs[i]: Q(1)}
        for j, p in enumerate(points):
            if p[i]:
                coeffs[ls[j]] = -p[i]
        rows.append((coeffs, 0, "=="))
    rows.append(({l: 1 for l in ls}, 1, "=="))
    rows += [({l: 1}, 0, ">=") for l in ls]
    system = project(LinearSystem.build(xs + ls, rows), xs)
    return [(c.coeffs, c.rhs) for c in system.inequalities]
