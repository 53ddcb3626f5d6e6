"""Decision procedures for (non)contextuality.

Every verdict carries a certificate that is re-checked before it is
returned: a mixture of deterministic distributions reproducing ``p``
exactly, or a linear functional separating ``p`` from all deterministic
vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Sequence

from .errors import DistributionError, PresentationError
from .lp import feasible
from .outcomes import (
    BOOLEAN,
    NONNEG_RATIONALS,
    DiscretePower,
    Distribution,
    Nerve,
    Outcome,
    OutcomeSpace,
    SimplicialDistribution,
    check_simplicial,
    semiring_map,
    support_map,
)
from .polytope import LinearSystem, facets_from_vertices
from .simpdist import (
    Assignment,
    ClassicalDistribution,
    deterministic_assignments,
    restrict_classical,
    support,
    theta,
)
from .sset import Key, OperatorWord, PresentedSSet, Subspace, from_ordered_complex

Q = Fraction


# ---------------------------------------------------------------------------
# LP membership in the image of Θ


@dataclass(frozen=True)
class SeparatingFunctional:
    """``sum c[σ, θ] p_σ(θ) <= bound`` for all classical ``p``, violated by the input."""

    coefficients: Mapping[tuple[Key, Outcome], Fraction]
    bound: Fraction

    def evaluate(self, p: SimplicialDistribution) -> Fraction:
        return sum((c * p.table[k][t] for (k, t), c in self.coefficients.items()), Q(0))

    def evaluate_assignment(self, r: Assignment) -> Fraction:
        return sum((c for (k, t), c in self.coefficients.items() if r[k] == t), Q(0))

    def separates(self, p: SimplicialDistribution, vertices: Sequence[Assignment]) -> bool:
        return self.evaluate(p) > self.bound and all(self.evaluate_assignment(r) <= self.bound for r in vertices)

    def describe(self, X: PresentedSSet) -> list[dict]:
        return [
            {"simplex": X.label(k), "outcome": t, "coefficient": c}
            for (k, t), c in sorted(self.coefficients.items())
        ]


@dataclass(frozen=True)
class ContextualityVerdict:
    noncontextual: bool
    mixture: ClassicalDistribution | None = None
    functional: SeparatingFunctional | None = None
    n_vertices: int = 0

    @property
    def status(self) -> str:
        return "noncontextual" if self.noncontextual else "contextual"

    def verify(self, p: SimplicialDistribution, vertices: Sequence[Assignment] | None = None) -> bool:
        if self.noncontextual:
            return self.mixture is not None and theta(self.mixture) == p
        if vertices is None:
            vertices = deterministic_assignments(p.space, p.outcome)
        return self.functional is not None and self.functional.separates(p, vertices)


def _scale_to_integers(values: list[Fraction]) -> list[Fraction]:
    from math import gcd, lcm

    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    g = g or 1
    return [Q(v // g) for v in ints]


def is_noncontextual(p: SimplicialDistribution, cap: int | None = None) -> ContextualityVerdict:
    """Exact LP test of ``p ∈ image(Θ)`` with certificate.

    Rows are indexed by the generating simplices; lower simplices follow by
    face compatibility on both sides.
    """
    if p.semiring is not NONNEG_RATIONALS:
        raise DistributionError("the LP test needs nonnegative rational weights; use is_logically_contextual for B")
    X, Y = p.space, p.outcome
    vertices = deterministic_assignments(X, Y, cap)
    rows: list[tuple[Key, Outcome]] = []
    for key in X.generating:
        outs = {r[key] for r in vertices} | set(p.table[key].support())
        rows.extend((key, t) for t in sorted(outs))
    A = [[Q(int(r[k] == t)) for r in vertices] for k, t in rows]
    b = [p.table[k][t] for k, t in rows]
    A.append([Q(1)] * len(vertices))
    b.append(Q(1))
    res = feasible(A, b)
    if res.status == "optimal":
        mix = ClassicalDistribution.of(X, Y, [(r, w) for r, w in zip(vertices, res.x) if w], NONNEG_RATIONALS)
        verdict = ContextualityVerdict(True, mixture=mix, n_vertices=len(vertices))
        if theta(mix) != p:  # pragma: no cover - would indicate an LP bug
            raise AssertionError("mixture does not reproduce the distribution")
        return verdict
    y = _scale_to_integers(res.farkas)
    coeffs = {row: c for row, c in zip(rows, y[:-1]) if c}
    functional = SeparatingFunctional(coeffs, -y[-1])
    if not functional.separates(p, vertices):  # pragma: no cover
        raise AssertionError("Farkas certificate failed to verify")
    return ContextualityVerdict(False, functional=functional, n_vertices=len(vertices))


def is_contextual(p: SimplicialDistribution, cap: int | None = None) -> bool:
    return not is_noncontextual(p, cap).noncontextual


@dataclass(frozen=True)
class StrongVerdict:
    strongly_contextual: bool
    support: tuple[Assignment, ...]


def is_strongly_contextual(p: SimplicialDistribution, cap: int | None = None) -> StrongVerdict:
    s = support(p, cap)
    return StrongVerdict(not s, tuple(s))


def uncovered_outcomes(p: SimplicialDistribution, cap: int | None = None) -> list[tuple[Key, Outcome]]:
    """Local outcomes with nonzero weight that no global support assignment reaches."""
    glob = support(p, cap)
    out = []
    trivial_vertices = p.outcome.count(0) == 1
    for key in p.space.keys():
        if key[0] == 0 and trivial_vertices:
            continue
        reached = {r[key] for r in glob}
        out.extend((key, t) for t in p.table[key].support() if t not in reached)
    return out


def is_logically_contextual(p: SimplicialDistribution, cap: int | None = None) -> bool:
    """Contextuality of the Boolean pushforward of ``p``."""
    pb = p if p.semiring is BOOLEAN else semiring_map(p, support_map, BOOLEAN)
    return bool(uncovered_outcomes(pb, cap))


# ---------------------------------------------------------------------------
# CHSH

CHSH_EDGES = ("x0+y0", "x0+y1", "x1+y0", "x1+y1")


@dataclass(frozen=True)
class ChshReport:
    correlations: tuple[Fraction, ...]  # p^0 on the four XOR edges
    expressions: tuple[Fraction, ...]  # expression k carries the minus sign on edge k
    edges: tuple[str, ...] = CHSH_EDGES

    @property
    def value(self) -> Fraction:
        return max(self.expressions)

    @property
    def minimum(self) -> Fraction:
        return min(self.expressions)

    @property
    def failing(self) -> list[str]:
        return [e for e, s in zip(self.edges, self.expressions) if not 0 <= s <= 2]

    @property
    def holds(self) -> bool:
        return not self.failing


def chsh_check(p: SimplicialDistribution, edges: Sequence[str] = CHSH_EDGES) -> ChshReport:
    """Evaluate the four double inequalities ``0 <= sum ± p^0 <= 2``."""
    if not isinstance(p.outcome, Nerve) or p.outcome.d != 2:
        raise DistributionError("CHSH needs outcomes in the nerve of Z/2")
    missing = [e for e in edges if e not in p.space._by_label]
    if missing:
        raise PresentationError(f"missing contexts {missing}")
    corr = tuple(p[e][(0,)] for e in edges)
    total = sum(corr)
    return ChshReport(corr, tuple(total - 2 * c for c in corr), tuple(edges))


# ---------------------------------------------------------------------------
# extension along a subspace inclusion


@dataclass
class ExtensionResult:
    feasible: bool
    extension: SimplicialDistribution | None = None
    certificate: dict | None = None


def _degeneracy_preimage(Y: OutcomeSpace, word: OperatorWord, n: int) -> dict[Outcome, Outcome]:
    return {Y.apply(word, t): t for t in Y.simplices(n)}


def solve_extension(p: SimplicialDistribution, sub: Subspace) -> ExtensionResult:
    """Extend ``p`` (on ``sub.space``) to ``sub.ambient``, or certify that no extension exists.

    Unknowns are the distributions on nondegenerate simplices outside the
    subspace; constraints are normalization and face compatibility.
    """
    if p.space != sub.space:
        raise PresentationError("distribution does not live on the given subspace")
    X, Y = sub.ambient, p.outcome
    known: dict[Key, Distribution] = {sub.to_ambient(k): d for k, d in p.table.items()}
    unknown = [k for k in X.keys() if k not in known]
    var: dict[tuple[Key, Outcome], int] = {}
    for key in unknown:
        for t in Y.simplices(key[0]):
            var[(key, t)] = len(var)
    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    names: list[str] = []
    for key in unknown:
        rows.append({var[(key, t)]: Q(1) for t in Y.simplices(key[0])})
        rhs.append(Q(1))
        names.append(f"normalize {X.label(key)}")
        n = key[0]
        for i in range(n + 1 if n else 0):
            f = X.faces_of(key)[i]
            pre = _degeneracy_preimage(Y, OperatorWord(f.degeneracies), f.base_dim)
            for t2 in Y.simplices(n - 1):
                row: dict[int, Fraction] = {}
                for t in Y.simplices(n):
                    if Y.face(t, i) == t2:
                        row[var[(key, t)]] = row.get(var[(key, t)], Q(0)) + 1
                const = Q(0)
                if t2 in pre:
                    if f.base in known:
                        const = known[f.base][pre[t2]]
                    else:
                        j = var[(f.base, pre[t2])]
                        row[j] = row.get(j, Q(0)) - 1
                rows.append(row)
                rhs.append(const)
                names.append(f"d{i} {X.label(key)} = {X.label(f)} at outcome {''.join(map(str, t2)) or '()'}")
    A = [[row.get(j, Q(0)) for j in range(len(var))] for row in rows]
    res = feasible(A, rhs)
    if res.status != "optimal":
        y = _scale_to_integers(res.farkas)
        cert = {"rows": [(nm, c) for nm, c in zip(names, y) if c]}
        ok = all(sum(A[i][j] * y[i] for i in range(len(A))) <= 0 for j in range(len(var)))
        ok = ok and sum(b * c for b, c in zip(rhs, y)) > 0
        if not ok:  # pragma: no cover
            raise AssertionError("extension certificate failed to verify")
        return ExtensionResult(False, certificate=cert)
    table = dict(known)
    for key in unknown:
        table[key] = Distribution.of({t: res.x[var[(key, t)]] for t in Y.simplices(key[0])})
    ext = SimplicialDistribution(X, Y, table, p.semiring)
    if check_simplicial(ext):  # pragma: no cover
        raise AssertionError("extension is not simplicial")
    return ExtensionResult(True, extension=ext)


def extension_is_valid(q: SimplicialDistribution, p: SimplicialDistribution, sub: Subspace) -> bool:
    """``q`` is simplicial on the ambient space and restricts to ``p``."""
    if q.space != sub.ambient or check_simplicial(q):
        return False
    return all(q.table[sub.to_ambient(k)] == d for k, d in p.table.items())


def boundary_delta3_extension(p: SimplicialDistribution) -> SimplicialDistribution:
    """Explicit extension of a nerve(2) distribution on ∂Δ³ to Δ³.

    The weight of ``000`` on the top simplex is the minimum of the ``00``
    weights of the four triangles; the remaining weights follow from the
    face marginals.  ``p`` must live on the builtin ``boundary_delta(3)``.
    """
    from .spaces import delta

    D = delta(3)
    f = {lab: p[lab] for lab in ("012", "013", "023", "123")}
    m = min(f[lab][(0, 0)] for lab in f)
    w = {(0, 0, 0): m}
    w[(1, 0, 0)] = f["123"][(0, 0)] - m
    w[(1, 1, 0)] = f["023"][(0, 0)] - m
    w[(0, 1, 1)] = f["013"][(0, 0)] - m
    w[(0, 0, 1)] = f["012"][(0, 0)] - m
    w[(1, 0, 1)] = f["123"][(0, 1)] - w[(0, 0, 1)]
    w[(0, 1, 0)] = f["123"][(1, 0)] - w[(1, 1, 0)]
    w[(1, 1, 1)] = f["123"][(1, 1)] - w[(0, 1, 1)]
    if any(v < 0 for v in w.values()):
        raise DistributionError("min construction produced a negative weight")
    table = {D.key_of(p.space.label(k)): d for k, d in p.table.items()}
    table[D.key_of("0123")] = Distribution.of(w)
    return SimplicialDistribution(D, p.outcome, table, p.semiring)


# ---------------------------------------------------------------------------
# gluing classical distributions


def glue_classical(dA: ClassicalDistribution, dB: ClassicalDistribution, A: Subspace, B: Subspace) -> ClassicalDistribution:
    """Glue mixtures on two subspaces covering the ambient space.

    ``d(r) = dA(r|A) dB(r|B) / dA|_{A∩B}(r|_{A∩B})`` with ``0/0 = 0``.
    """
    X = A.ambient
    if B.ambient != X:
        raise PresentationError("subspaces live in different spaces")
    if set(A.keys) | set(B.keys) != set(X.keys()):
        raise PresentationError("the subspaces do not cover the space")
    R = dA.semiring
    if not R.is_semifield or dB.semiring != R:
        raise DistributionError("gluing needs a common semifield")
    common = sorted(set(A.keys) & set(B.keys))

    def lift(r: Assignment, S: Subspace) -> dict[Key, Outcome]:
        return {S.to_ambient(k): v for k, v in r.items}

    def marg(d: ClassicalDistribution, S: Subspace) -> dict[tuple, object]:
        out: dict[tuple, object] = {}
        for r, w in d.weights:
            g = lift(r, S)
            key = tuple(g[k] for k in common)
            out[key] = R.add(out.get(key, R.zero), w)
        return out

    mA, mB = marg(dA, A), marg(dB, B)
    if mA != mB:
        raise DistributionError("restrictions to the intersection disagree")
    byB: dict[tuple, list] = {}
    for r, w in dB.weights:
        g = lift(r, B)
        byB.setdefault(tuple(g[k] for k in common), []).append((g, w))
    pairs = []
    for r, w in dA.weights:
        g = lift(r, A)
        c = tuple(g[k] for k in common)
        for h, v in byB.get(c, []):
            denom = mA[c]
            if denom == R.zero:
                continue
            pairs.append((Assignment.of({**g, **h}), R.div(R.mul(w, v), denom)))
    d = ClassicalDistribution.of(X, dA.outcome, pairs, R)
    if restrict_classical(d, A.inclusion) != dA or restrict_classical(d, B.inclusion) != dB:  # pragma: no cover
        raise AssertionError("glued distribution does not restrict correctly")
    return d


def simplex_classical(p: SimplicialDistribution) -> ClassicalDistribution:
    """On a space with a single generating simplex, ``p`` itself is classical."""
    X = p.space
    if len(X.generating) != 1:
        raise PresentationError("needs a space with one generating simplex")
    top = X.generating[0]
    verts = deterministic_assignments(X, p.outcome)
    by_top = {r[top]: r for r in verts}
    return ClassicalDistribution.of(X, p.outcome, [(by_top[t], w) for t, w in p.table[top].items], p.semiring)


# ---------------------------------------------------------------------------
# polytopes of classical distributions


def coordinate_name(label: str, t: Outcome) -> str:
    return f"p[{label}]({''.join(map(str, t))})"


def default_coordinates(X: PresentedSSet, Y: OutcomeSpace) -> list[tuple[str, Outcome]]:
    """``p^0`` of each edge for nerve(2); otherwise all but the last outcome of each generating simplex."""
    if isinstance(Y, Nerve) and Y.d == 2 and X.count(1):
        return [(X.label(k), (0,)) for k in X.keys(1)]
    coords = []
    for key in X.generating:
        outs = list(Y.simplices(key[0]))
        coords.extend((X.label(key), t) for t in outs[:-1])
    return coords


def classical_facets(X: PresentedSSet, Y: OutcomeSpace | None = None, coordinates: Sequence[tuple[str, Outcome]] | None = None, cap: int | None = None) -> LinearSystem:
    """H-description of the convex hull of the deterministic vertices in the given coordinates."""
    Y = Y or Nerve(2)
    coords = list(coordinates) if coordinates is not None else default_coordinates(X, Y)
    keys = [(X.key_of(lab), tuple(t)) for lab, t in coords]
    vertices = deterministic_assignments(X, Y, cap)
    pts = [tuple(Q(int(r[k] == t)) for k, t in keys) for r in vertices]
    desc = facets_from_vertices(pts)
    names = [coordinate_name(lab, tuple(t)) for lab, t in coords]
    rows = [({n: a for n, a in zip(names, coeffs) if a}, b, "==") for coeffs, b in desc.equalities]
    rows += [({n: a for n, a in zip(names, coeffs) if a}, b, "<=") for coeffs, b in desc.facets]
    return LinearSystem.build(names, rows).canonical()


def extension_system(X: PresentedSSet, Y: OutcomeSpace | None = None) -> LinearSystem:
    """Linear description of all simplicial distributions on ``X``.

    Variables ``p[σ](θ)`` for nondegenerate σ of positive dimension; rows are
    normalization, face compatibility and nonnegativity.
    """
    Y = Y or Nerve(2)
    keys = [k for k in X.keys() if k[0] > 0 or Y.count(0) > 1]
    names = {}
    for key in keys:
        for t in Y.simplices(key[0]):
            names[(key, t)] = coordinate_name(X.label(key), t)
    rows = []
    for key in keys:
        rows.append(({names[(key, t)]: 1 for t in Y.simplices(key[0])}, 1, "=="))
        rows.extend(({names[(key, t)]: 1}, 0, ">=") for t in Y.simplices(key[0]))
        n = key[0]
        if n == 0 or (n == 1 and Y.count(0) == 1):
            continue
        for i in range(n + 1):
            f = X.faces_of(key)[i]
            pre = _degeneracy_preimage(Y, OperatorWord(f.degeneracies), f.base_dim)
            for t2 in Y.simplices(n - 1):
                coeffs: dict[str, Fraction] = {}
                for t in Y.simplices(n):
                    if Y.face(t, i) == t2:
                        coeffs[names[(key, t)]] = coeffs.get(names[(key, t)], Q(0)) + 1
                if t2 in pre:
                    nm = names[(f.base, pre[t2])]
                    coeffs[nm] = coeffs.get(nm, Q(0)) - 1
                rows.append((coeffs, 0, "=="))
    return LinearSystem.build(list(names.values()), rows)


# ---------------------------------------------------------------------------
# discrete scenarios


@dataclass
class DiscreteScenario:
    """Measurement set ``M`` (ordered), contexts ``C`` and outcomes Z/d."""

    measurements: tuple[str, ...]
    contexts: tuple[tuple[str, ...], ...]
    d: int
    space: PresentedSSet
    outcome: DiscretePower

    def simplex_label(self, ms: Sequence[str]) -> str:
        return ",".join(ms)

    def to_simplicial(self, table: Mapping[Sequence[str], Distribution | Mapping]) -> SimplicialDistribution:
        """Nonsignaling table ``{context: distribution over Z_d^|context|}`` to a simplicial one."""
        dists = {}
        for ctx, dist in table.items():
            ctx = self._canon(ctx)
            dists[ctx] = dist if isinstance(dist, Distribution) else Distribution.of(dist)
        if set(dists) != set(self.contexts):
            raise DistributionError("table must give exactly one distribution per context")
        out: dict[Key, Distribution] = {}
        for key in self.space.keys():
            ms = tuple(self.space.label(key).split(","))
            found = None
            for ctx in self.contexts:
                if set(ms) <= set(ctx):
                    pos = [ctx.index(m) for m in ms]
                    marg = Distribution.of(((tuple(t[i] for i in pos), w) for t, w in dists[ctx].items), check=False)
                    if found is not None and marg != found:
                        raise DistributionError(f"table is signaling on {ms}")
                    found = marg
            out[key] = found
        return SimplicialDistribution(self.space, self.outcome, out)

    def from_simplicial(self, p: SimplicialDistribution) -> dict[tuple[str, ...], Distribution]:
        return {ctx: p[self.simplex_label(ctx)] for ctx in self.contexts}

    def _canon(self, ctx: Sequence[str]) -> tuple[str, ...]:
        order = {m: i for i, m in enumerate(self.measurements)}
        return tuple(sorted(ctx, key=order.__getitem__))

    def sheaf_noncontextual(self, table: Mapping[Sequence[str], Distribution | Mapping]) -> bool:
        """LP over global assignments ``M -> Z_d`` matching every context marginal."""
        dists = {self._canon(c): (v if isinstance(v, Distribution) else Distribution.of(v)) for c, v in table.items()}
        globals_ = list(product(range(self.d), repeat=len(self.measurements)))
        idx = {m: i for i, m in enumerate(self.measurements)}
        A, b = [], []
        for ctx in self.contexts:
            for t in product(range(self.d), repeat=len(ctx)):
                A.append([Q(int(all(g[idx[m]] == a for m, a in zip(ctx, t)))) for g in globals_])
                b.append(dists[ctx][t])
        A.append([Q(1)] * len(globals_))
        b.append(Q(1))
        return feasible(A, b).status == "optimal"


def discrete_embed(measurements: Sequence[str], contexts: Sequence[Sequence[str]], d: int) -> DiscreteScenario:
    """The space whose simplices are increasing tuples of jointly measurable elements."""
    M = tuple(measurements)
    if len(set(M)) != len(M):
        raise PresentationError("measurement names must be distinct")
    order = {m: i for i, m in enumerate(M)}
    C = []
    for ctx in contexts:
        if not ctx or any(m not in order for m in ctx) or len(set(ctx)) != len(ctx):
            raise PresentationError(f"bad context {ctx!r}")
        C.append(tuple(sorted(ctx, key=order.__getitem__)))
    if set().union(*map(set, C)) != set(M):
        raise PresentationError("contexts do not cover the measurement set")
    for a, b in combinations(C, 2):
        if set(a) <= set(b) or set(b) <= set(a):
            raise PresentationError(f"contexts {a} and {b} are not an antichain")
    simplices = {}
    for ctx in C:
        for k in range(1, len(ctx) + 1):
            for sub in combinations(ctx, k):
                simplices[",".join(sub)] = [m for m in sub]
    top = max(len(c) for c in C) - 1
    X = from_ordered_complex(simplices, max(3, top))
    return DiscreteScenario(M, tuple(C), d, X, DiscretePower(d))
