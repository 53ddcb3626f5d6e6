"""Deterministic and classical distributions, the map Θ, restriction and support."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .errors import ResourceCapError
from .outcomes import (
    NONNEG_RATIONALS,
    Distribution,
    Nerve,
    Outcome,
    OutcomeSpace,
    Semiring,
    SimplicialDistribution,
)
from .sset import Key, OperatorWord, PresentedSSet, SimplexRef, SpaceMap
from .zmod import solve_mod

DEFAULT_CAP = 10**6


def max_vertices() -> int:
    """Enumeration cap, overridable with ``SIMPCTX_MAX_VERTICES``."""
    raw = os.environ.get("SIMPCTX_MAX_VERTICES")
    if raw is None:
        return DEFAULT_CAP
    try:
        return max(int(raw), 0)
    except ValueError:
        raise ValueError(f"SIMPCTX_MAX_VERTICES must be an integer, got {raw!r}") from None


@dataclass(frozen=True, order=True)
class Assignment:
    """A simplicial map X -> Y, stored on nondegenerate simplices."""

    items: tuple[tuple[Key, Outcome], ...]

    @cached_property
    def _map(self) -> dict[Key, Outcome]:
        return dict(self.items)

    def __getitem__(self, key: Key) -> Outcome:
        return self._map[key]

    def as_dict(self) -> dict[Key, Outcome]:
        return dict(self.items)

    @classmethod
    def of(cls, values: Mapping[Key, Outcome]) -> "Assignment":
        return cls(tuple(sorted((tuple(k), tuple(v)) for k, v in values.items())))


def value_at(Y: OutcomeSpace, r: Assignment | Mapping[Key, Outcome], ref: SimplexRef) -> Outcome:
    """Value of ``r`` on a possibly degenerate simplex."""
    base = r[ref.base]
    if not ref.degeneracies:
        return base
    return Y.apply(OperatorWord(ref.degeneracies), base)


def edge_values(X: PresentedSSet, r: Assignment) -> dict[str, int]:
    """Edge labelling ``{label: value}`` of a nerve assignment."""
    return {X.label(k): r[k][0] for k in X.keys(1)}


def assignment_from_edges(X: PresentedSSet, d: int, f: Mapping[Key, int] | Sequence[int]) -> Assignment:
    """Extend an edge labelling to all nondegenerate simplices via the spine."""
    if not isinstance(f, Mapping):
        f = {k: v for k, v in zip(X.keys(1), f)}
    values = {}
    for key in X.keys():
        values[key] = tuple(0 if e.is_degenerate else f[e.base] % d for e in X.spine(key)) if key[0] else ()
    return Assignment.of(values)


def nerve_system(X: PresentedSSet) -> tuple[list[Key], list[list[int]]]:
    """Edges and the rows of ``f(d1 s) - f(d2 s) - f(d0 s) = 0`` over the triangles."""
    edges = X.keys(1)
    col = {k: j for j, k in enumerate(edges)}
    rows = []
    for key in X.keys(2):
        row = [0] * len(edges)
        for i, sign in ((1, 1), (0, -1), (2, -1)):
            f = X.faces_of(key)[i]
            if not f.is_degenerate:
                row[col[f.base]] += sign
        if any(row):
            rows.append(row)
    return edges, rows


def _resolve_constraints(X: PresentedSSet, constraints) -> dict[Key, int]:
    out = {}
    for k, v in (constraints or {}).items():
        key = X.key_of(k) if isinstance(k, str) else tuple(k)
        if key[0] != 1:
            raise ValueError(f"constraint on {X.label(key)} is not on an edge")
        out[key] = int(v)
    return out


def enumerate_deterministic(X: PresentedSSet, d: int, constraints: Mapping | None = None, cap: int | None = None) -> list[Assignment]:
    """All simplicial maps ``X -> N(Z/d)``, via their edge labellings.

    ``constraints`` pins edges (label or key) to values.  The result is
    sorted lexicographically by the tuple of edge values in id order.
    """
    cap = max_vertices() if cap is None else cap
    edges, rows = nerve_system(X)
    pins = _resolve_constraints(X, constraints)
    col = {k: j for j, k in enumerate(edges)}
    b = [0] * len(rows)
    for key, v in pins.items():
        row = [0] * len(edges)
        row[col[key]] = 1
        rows.append(row)
        b.append(v % d)
    if not edges:
        return [assignment_from_edges(X, d, {})]
    space = solve_mod(rows, b, d, len(edges))
    if space is None:
        return []
    if space.size > cap:
        raise ResourceCapError(f"{space.size} deterministic assignments exceed the cap of {cap}")
    return [assignment_from_edges(X, d, x) for x in sorted(space)]


def count_deterministic(X: PresentedSSet, d: int, constraints: Mapping | None = None) -> int:
    edges, rows = nerve_system(X)
    pins = _resolve_constraints(X, constraints)
    col = {k: j for j, k in enumerate(edges)}
    b = [0] * len(rows)
    for key, v in pins.items():
        rows.append([int(j == col[key]) for j in range(len(edges))])
        b.append(v % d)
    if not edges:
        return 1
    space = solve_mod(rows, b, d, len(edges))
    return 0 if space is None else space.size


def _backtrack(X: PresentedSSet, Y: OutcomeSpace, candidates, cap: int) -> list[Assignment]:
    keys = X.keys()
    out: list[Assignment] = []
    current: dict[Key, Outcome] = {}

    def rec(pos: int):
        if pos == len(keys):
            if len(out) >= cap:
                raise ResourceCapError(f"more than {cap} deterministic assignments")
            out.append(Assignment.of(current))
            return
        key = keys[pos]
        faces = X.faces_of(key)
        expected = [value_at(Y, current, f) for f in faces]
        for theta in candidates(key):
            if all(Y.face(theta, i) == e for i, e in enumerate(expected)):
                current[key] = theta
                rec(pos + 1)
        current.pop(key, None)

    rec(0)
    return out


def enumerate_deterministic_general(X: PresentedSSet, Y: OutcomeSpace, cap: int | None = None) -> list[Assignment]:
    """All simplicial maps ``X -> Y`` by backtracking with face pruning."""
    cap = max_vertices() if cap is None else cap
    return _backtrack(X, Y, lambda key: Y.simplices(key[0]), cap)


def deterministic_assignments(X: PresentedSSet, Y: OutcomeSpace, cap: int | None = None) -> list[Assignment]:
    if isinstance(Y, Nerve):
        return enumerate_deterministic(X, Y.d, cap=cap)
    return enumerate_deterministic_general(X, Y, cap)


def support(p: SimplicialDistribution, cap: int | None = None) -> list[Assignment]:
    """Global assignments whose local values all have nonzero weight."""
    cap = max_vertices() if cap is None else cap
    return _backtrack(p.space, p.outcome, lambda key: p.table[key].support(), cap)


@dataclass(frozen=True)
class ClassicalDistribution:
    """A finite mixture of deterministic assignments."""

    space: PresentedSSet
    outcome: OutcomeSpace
    weights: tuple[tuple[Assignment, Any], ...]
    semiring: Semiring = NONNEG_RATIONALS

    @classmethod
    def of(cls, space, outcome, weights: Mapping[Assignment, Any] | Iterable, semiring: Semiring = NONNEG_RATIONALS, check: bool = True):
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[Assignment, Any] = {}
        for r, w in pairs:
            w = semiring.coerce(w)
            acc[r] = semiring.add(acc.get(r, semiring.zero), w)
        items = tuple(sorted((r, w) for r, w in acc.items() if w != semiring.zero))
        if check and semiring.sum(w for _, w in items) != semiring.one:
            raise ValueError("classical weights do not sum to 1")
        return cls(space, outcome, items, semiring)

    def __getitem__(self, r: Assignment):
        return dict(self.weights).get(r, self.semiring.zero)

    @property
    def support(self) -> list[Assignment]:
        return [r for r, _ in self.weights]


def theta(dist: ClassicalDistribution) -> SimplicialDistribution:
    """Θ: the simplicial distribution of a mixture of deterministic ones."""
    R = dist.semiring
    table = {
        key: Distribution.of(((r[key], w) for r, w in dist.weights), R)
        for key in dist.space.keys()
    }
    return SimplicialDistribution(dist.space, dist.outcome, table, R)


def restrict_assignment(r: Assignment, f: SpaceMap, Y: OutcomeSpace) -> Assignment:
    """Precompose ``r`` (on ``f.target``) with ``f``."""
    return Assignment.of({k: value_at(Y, r, f(k)) for k in f.source.keys()})


def restrict(p: SimplicialDistribution, f: SpaceMap) -> SimplicialDistribution:
    """Pull ``p`` back along ``f: Z -> X``."""
    if f.target != p.space:
        raise ValueError("map does not land in the distribution's space")
    return SimplicialDistribution(f.source, p.outcome, {k: p.at(f(k)) for k in f.source.keys()}, p.semiring)


def restrict_classical(dist: ClassicalDistribution, f: SpaceMap) -> ClassicalDistribution:
    pairs = [(restrict_assignment(r, f, dist.outcome), w) for r, w in dist.weights]
    return ClassicalDistribution.of(f.source, dist.outcome, pairs, dist.semiring)


def pushforward_classical(dist: ClassicalDistribution, g, target: OutcomeSpace) -> ClassicalDistribution:
    pairs = [(Assignment.of({k: g(v) for k, v in r.items}), w) for r, w in dist.weights]
    return ClassicalDistribution.of(dist.space, target, pairs, dist.semiring)


def delta_of(X: PresentedSSet, Y: OutcomeSpace, r: Assignment, semiring: Semiring = NONNEG_RATIONALS) -> SimplicialDistribution:
    return SimplicialDistribution.deterministic(X, Y, r.as_dict(), semiring)
