"""Normalized mod-d cochains, H¹, the connecting map and the support witness.

Cochains live on nondegenerate simplices only; degenerate faces contribute 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import DimensionError, PresentationError
from .outcomes import Nerve, SimplicialDistribution
from .simpdist import Assignment, restrict, support
from .sset import Key, PresentedSSet, Subspace, quotient
from .zmod import abelian_quotient, solve_mod


@dataclass(frozen=True)
class Cochain:
    """An ``n``-cochain with values in Z/d, indexed by simplex id."""

    space: PresentedSSet
    dim: int
    d: int
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.space.count(self.dim):
            raise DimensionError(f"need {self.space.count(self.dim)} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(int(v) % self.d for v in self.values))

    @classmethod
    def zero(cls, space: PresentedSSet, dim: int, d: int) -> "Cochain":
        return cls(space, dim, d, (0,) * space.count(dim))

    @classmethod
    def from_labels(cls, space: PresentedSSet, dim: int, d: int, values: Mapping[str, int]) -> "Cochain":
        """Unlisted simplices get 0."""
        vals = [0] * space.count(dim)
        for lab, v in values.items():
            n, i = space.key_of(lab)
            if n != dim:
                raise DimensionError(f"{lab} is not a {dim}-simplex")
            vals[i] = v
        return cls(space, dim, d, tuple(vals))

    def __getitem__(self, key: Key | str) -> int:
        if isinstance(key, str):
            key = self.space.key_of(key)
        return self.values[key[1]]

    def __add__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.space, self.dim, self.d, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._compatible(other)
        return Cochain(self.space, self.dim, self.d, tuple(a - b for a, b in zip(self.values, other.values)))

    def _compatible(self, other: "Cochain") -> None:
        if (self.space, self.dim, self.d) != (other.space, other.dim, other.d):
            raise DimensionError("cochains live in different groups")

    @property
    def is_zero(self) -> bool:
        return not any(self.values)

    def as_labels(self) -> dict[str, int]:
        return {self.space.label((self.dim, i)): v for i, v in enumerate(self.values)}


def coboundary_matrix(X: PresentedSSet, n: int) -> list[list[int]]:
    """Integer matrix of δ_n: rows are (n+1)-simplices, columns n-simplices."""
    if n + 1 > X.max_dim:
        raise DimensionError(f"δ_{n} needs simplices of dimension {n + 1} > max_dim {X.max_dim}")
    rows = []
    for key in X.keys(n + 1):
        row = [0] * X.count(n)
        for i, f in enumerate(X.faces_of(key)):
            if not f.is_degenerate:
                row[f.base_id] += (-1) ** i
        rows.append(row)
    return rows


def coboundary(f: Cochain) -> Cochain:
    M = coboundary_matrix(f.space, f.dim)
    vals = tuple(sum(a * b for a, b in zip(row, f.values)) for row in M)
    return Cochain(f.space, f.dim + 1, f.d, vals)


def _solve_coboundary(c: Cochain) -> Cochain | None:
    """Some ``t`` with ``δ t = c``, or None."""
    X, n = c.space, c.dim
    if n == 0:
        return Cochain(X, -1, c.d, ()) if c.is_zero else None  # pragma: no cover - unused
    M = coboundary_matrix(X, n - 1)
    if not M:
        return Cochain.zero(X, n - 1, c.d)
    sol = solve_mod(M, list(c.values), c.d, X.count(n - 1))
    if sol is None:
        return None
    return Cochain(X, n - 1, c.d, tuple(sol.x0))


@dataclass(frozen=True)
class CohomologyClass:
    """The class of a cocycle; equality means the difference is a coboundary."""

    representative: Cochain

    def __post_init__(self):
        f = self.representative
        if f.dim + 1 <= f.space.max_dim and not coboundary(f).is_zero:
            raise ValueError("representative is not a cocycle")

    @property
    def space(self) -> PresentedSSet:
        return self.representative.space

    @property
    def dim(self) -> int:
        return self.representative.dim

    def same_as(self, other: "CohomologyClass") -> bool:
        return is_zero_class(CohomologyClass(self.representative - other.representative))[0]

    def to_json(self) -> dict:
        zero, t = is_zero_class(self)
        out = {"dim": self.dim, "d": self.representative.d, "representative": self.representative.as_labels(), "zero": zero}
        if zero:
            out["preimage"] = t.as_labels()
        return out


def is_zero_class(c: CohomologyClass) -> tuple[bool, Cochain | None]:
    """Whether the class vanishes, with a preimage ``t`` (``δ t`` = representative) when it does."""
    f = c.representative
    if f.is_zero:
        return True, Cochain.zero(f.space, f.dim - 1, f.d)
    t = _solve_coboundary(f)
    if t is None:
        return False, None
    if coboundary(t) != f:  # pragma: no cover
        raise AssertionError("coboundary preimage failed to verify")
    return True, t


@dataclass(frozen=True)
class H1Group:
    d: int
    invariants: tuple[int, ...]  # cyclic orders; empty for the trivial group
    generators: tuple[Cochain, ...]

    @property
    def order(self) -> int:
        out = 1
        for v in self.invariants:
            out *= v
        return out


def cocycles(X: PresentedSSet, n: int, d: int):
    """Solution space of ``δ_n f = 0`` over Z/d."""
    M = coboundary_matrix(X, n) if n + 1 <= X.max_dim else []
    M = [row for row in M if any(row)]
    return solve_mod(M, [0] * len(M), d, X.count(n))


def h1(X: PresentedSSet, d: int) -> H1Group:
    """ker δ₁ / im δ₀ over Z/d, with representative cocycles."""
    if X.max_dim < 2:
        raise DimensionError("H¹ needs max_dim >= 2")
    if d < 2:
        raise ValueError("modulus must be at least 2")
    E = X.count(1)
    if E == 0:
        return H1Group(d, (), ())
    Z = cocycles(X, 1, d)
    gens, orders = Z.generators, Z.orders
    if not gens:
        return H1Group(d, (), ())
    G = [[g[e] for g in gens] for e in range(E)]  # columns are cocycle generators
    relations = []
    for col in zip(*coboundary_matrix(X, 0)) if X.count(1) else ():
        sol = solve_mod(G, list(col), d, len(gens))
        if sol is None:  # pragma: no cover - coboundaries are cocycles
            raise AssertionError("coboundary outside the cocycle group")
        relations.append(sol.x0)
    invariants, combos = abelian_quotient(orders, relations)
    reps = []
    for combo in combos:
        vals = [sum(c * g[e] for c, g in zip(combo, gens)) for e in range(E)]
        reps.append(Cochain(X, 1, d, tuple(vals)))
    return H1Group(d, tuple(invariants), tuple(reps))


def alpha(X: PresentedSSet, r: Assignment, d: int) -> CohomologyClass:
    """Class of the edge labelling of a nerve assignment."""
    return CohomologyClass(Cochain(X, 1, d, tuple(r[k][0] for k in X.keys(1))))


def edge_cochain(X: PresentedSSet, d: int, values: Mapping[str, int]) -> Cochain:
    return Cochain.from_labels(X, 1, d, values)


@dataclass(frozen=True)
class Connecting:
    """Result of the connecting map: the quotient space and the class there."""

    quotient: PresentedSSet
    lift: Cochain
    cls: CohomologyClass


def connecting(f: Cochain, sub: Subspace) -> Connecting:
    """Lift ``f`` (a 1-cocycle on ``sub``) by zeros, apply δ₁ and read it on X/Z."""
    if f.space != sub.space or f.dim != 1:
        raise DimensionError("need a 1-cochain on the subspace")
    if f.space.max_dim >= 2 and not coboundary(f).is_zero:
        raise ValueError("cochain is not a cocycle on the subspace")
    X = sub.ambient
    vals = [0] * X.count(1)
    for key in sub.space.keys(1):
        vals[sub.to_ambient(key)[1]] = f[key]
    lift = Cochain(X, 1, f.d, tuple(vals))
    dl = coboundary(lift)
    Xbar, q = quotient(X, sub)
    out = [0] * Xbar.count(2)
    for key in X.keys(2):
        image = q(key)
        if not image.is_degenerate:
            out[image.base_id] = dl[key]
        elif dl[key]:  # pragma: no cover - δ of a cocycle vanishes on Z
            raise AssertionError("lift is not a cocycle on the subspace")
    return Connecting(Xbar, lift, CohomologyClass(Cochain(Xbar, 2, f.d, tuple(out))))


def boundary_class(sub: Subspace, r: Assignment, d: int) -> Connecting:
    """ζ∘α on a deterministic assignment of the subspace."""
    return connecting(alpha(sub.space, r, d).representative, sub)


@dataclass(frozen=True)
class WitnessResult:
    verdict: str  # "strongly-contextual", "inconclusive" or "vacuous"
    classes: tuple[CohomologyClass, ...]
    support_size: int

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "support_size": self.support_size,
            "classes": [c.to_json() for c in self.classes],
        }


def _distinct(classes: Iterable[CohomologyClass]) -> list[CohomologyClass]:
    out: list[CohomologyClass] = []
    for c in classes:
        if not any(c.same_as(o) for o in out):
            out.append(c)
    return out


def cl_witness(p: SimplicialDistribution, sub: Subspace, cap: int | None = None) -> WitnessResult:
    """One-sided strong-contextuality test through the classes of the support on ``sub``.

    A nonzero class for every support assignment proves strong contextuality;
    otherwise the result is inconclusive.
    """
    if not isinstance(p.outcome, Nerve):
        raise PresentationError("the witness needs nerve outcomes")
    if p.space != sub.ambient:
        raise PresentationError("subspace belongs to a different space")
    d = p.outcome.d
    pz = restrict(p, sub.inclusion)
    supp = support(pz, cap)
    if not supp:
        return WitnessResult("vacuous", (), 0)
    classes = _distinct(boundary_class(sub, r, d).cls for r in supp)
    zero = any(is_zero_class(c)[0] for c in classes)
    return WitnessResult("inconclusive" if zero else "strongly-contextual", tuple(classes), len(supp))
