"""Semirings, outcome spaces and simplicial distributions.

Outcome simplices are plain tuples of ints.  For the nerve of Z/d an
n-simplex is an n-tuple; for the discrete outcome simplex it is an
(n+1)-tuple; circle simplices are the nerve tuples that are zero or a unit
vector.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from .errors import DimensionError, DistributionError
from .sset import Key, OperatorWord, PresentedSSet, SimplexRef

Outcome = tuple[int, ...]


# ---------------------------------------------------------------------------
# semirings


def rational(value) -> Fraction:
    """Parse a nonnegative rational from an int, Fraction or ``"a/b"`` string."""
    if isinstance(value, bool):
        raise DistributionError(f"not a rational: {value!r}")
    if isinstance(value, float):
        raise DistributionError("floats are not accepted; use an exact 'a/b' string")
    try:
        q = Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DistributionError(f"not a rational: {value!r}") from None
    if q < 0:
        raise DistributionError(f"negative value {value!r}")
    return q


def _boolean(value) -> bool:
    if value in (0, 1, True, False):
        return bool(value)
    raise DistributionError(f"not a Boolean value: {value!r}")


@dataclass(frozen=True)
class Semiring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    coerce: Callable[[Any], Any]
    is_semifield: bool = True
    is_boolean: bool = False

    def sum(self, values: Iterable) -> Any:
        return reduce(self.add, values, self.zero)

    def div(self, a, b):
        if b == self.zero:
            raise ZeroDivisionError("division by zero in semifield")
        if self.is_boolean:
            return a
        return a / b

    def __repr__(self) -> str:
        return f"Semiring({self.name})"


NONNEG_RATIONALS = Semiring("Q>=0", Fraction(0), Fraction(1), operator.add, operator.mul, rational)
BOOLEAN = Semiring("B", False, True, operator.or_, operator.and_, _boolean, is_boolean=True)

SEMIRINGS = {"Q>=0": NONNEG_RATIONALS, "B": BOOLEAN}


def support_map(x: Fraction) -> bool:
    """The homomorphism Q>=0 -> B sending positive numbers to 1."""
    return x != 0


# ---------------------------------------------------------------------------
# outcome spaces


class OutcomeSpace:
    """Simplicial set with finitely many simplices in each dimension."""

    kind: str
    d: int

    def simplices(self, n: int) -> Iterator[Outcome]:  # pragma: no cover - abstract
        raise NotImplementedError

    def face(self, theta: Outcome, i: int) -> Outcome:  # pragma: no cover - abstract
        raise NotImplementedError

    def degeneracy(self, theta: Outcome, j: int) -> Outcome:  # pragma: no cover - abstract
        raise NotImplementedError

    def dim_of(self, theta: Outcome) -> int:
        return len(theta)

    def contains(self, theta: Outcome, n: int) -> bool:
        return self.dim_of(theta) == n and all(0 <= a < self.d for a in theta)

    def apply(self, word: OperatorWord, theta: Outcome) -> Outcome:
        n = self.dim_of(theta)
        for kind, i in reversed(word.letters()):
            if kind == "d":
                if n < 1 or not 0 <= i <= n:
                    raise DimensionError(f"d_{i} cannot act on a {n}-simplex")
                theta = self.face(theta, i)
                n -= 1
            else:
                if not 0 <= i <= n:
                    raise DimensionError(f"s_{i} cannot act on a {n}-simplex")
                theta = self.degeneracy(theta, i)
                n += 1
        return theta

    def count(self, n: int) -> int:
        return sum(1 for _ in self.simplices(n))

    def __eq__(self, other) -> bool:
        return isinstance(other, OutcomeSpace) and (self.kind, self.d) == (other.kind, other.d)

    def __hash__(self) -> int:
        return hash((self.kind, self.d))

    def __repr__(self) -> str:
        return f"{self.kind}({self.d})"

    def to_json(self) -> dict:
        return {self.kind: self.d}


class Nerve(OutcomeSpace):
    """Nerve of Z/d: n-simplices are n-tuples; interior faces add neighbours mod d."""

    kind = "nerve"

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("d must be at least 2")
        self.d = d

    def simplices(self, n: int) -> Iterator[Outcome]:
        return iter(product(range(self.d), repeat=n))

    def face(self, theta: Outcome, i: int) -> Outcome:
        n = len(theta)
        if i == 0:
            return theta[1:]
        if i == n:
            return theta[:-1]
        return theta[: i - 1] + ((theta[i - 1] + theta[i]) % self.d,) + theta[i + 1 :]

    def degeneracy(self, theta: Outcome, j: int) -> Outcome:
        return theta[:j] + (0,) + theta[j:]


class Circle(OutcomeSpace):
    """The circle inside the nerve of Z/d: zero and unit-vector tuples."""

    kind = "circle"

    def __init__(self, d: int = 2):
        if d < 2:
            raise ValueError("d must be at least 2")
        self.d = d
        self._nerve = Nerve(d)

    def simplices(self, n: int) -> Iterator[Outcome]:
        yield (0,) * n
        for k in range(n):
            yield tuple(int(i == k) for i in range(n))

    def contains(self, theta: Outcome, n: int) -> bool:
        return len(theta) == n and all(a in (0, 1) for a in theta) and sum(theta) <= 1

    def face(self, theta, i):
        return self._nerve.face(theta, i)

    def degeneracy(self, theta, j):
        return self._nerve.degeneracy(theta, j)


class DiscretePower(OutcomeSpace):
    """The discrete outcome simplex: n-simplices are (n+1)-tuples over Z/d."""

    kind = "discrete"

    def __init__(self, d: int):
        if d < 2:
            raise ValueError("d must be at least 2")
        self.d = d

    def dim_of(self, theta: Outcome) -> int:
        return len(theta) - 1

    def simplices(self, n: int) -> Iterator[Outcome]:
        return iter(product(range(self.d), repeat=n + 1))

    def face(self, theta, i):
        return theta[:i] + theta[i + 1 :]

    def degeneracy(self, theta, j):
        return theta[: j + 1] + theta[j:]


OUTCOME_KINDS = {"nerve": Nerve, "circle": Circle, "discrete": DiscretePower}


def outcome_space(kind: str, d: int) -> OutcomeSpace:
    try:
        return OUTCOME_KINDS[kind](d)
    except KeyError:
        raise ValueError(f"unknown outcome space {kind!r}") from None


# ---------------------------------------------------------------------------
# distributions


@dataclass(frozen=True)
class Distribution:
    """A normalized finite-support distribution; zero weights are dropped."""

    items: tuple[tuple[Outcome, Any], ...]
    semiring: Semiring = NONNEG_RATIONALS

    @classmethod
    def of(cls, weights: Mapping[Outcome, Any] | Iterable[tuple[Outcome, Any]], semiring: Semiring = NONNEG_RATIONALS, check: bool = True) -> "Distribution":
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[Outcome, Any] = {}
        for theta, w in pairs:
            w = semiring.coerce(w)
            theta = tuple(theta)
            acc[theta] = semiring.add(acc.get(theta, semiring.zero), w)
        items = tuple(sorted((t, w) for t, w in acc.items() if w != semiring.zero))
        dist = cls(items, semiring)
        if check and semiring.sum(w for _, w in items) != semiring.one:
            raise DistributionError(f"weights sum to {semiring.sum(w for _, w in items)}, not 1")
        return dist

    @classmethod
    def delta(cls, theta: Outcome, semiring: Semiring = NONNEG_RATIONALS) -> "Distribution":
        return cls(((tuple(theta), semiring.one),), semiring)

    @cached_property
    def _map(self) -> dict[Outcome, Any]:
        return dict(self.items)

    def __getitem__(self, theta: Outcome):
        return self._map.get(tuple(theta), self.semiring.zero)

    def get(self, theta, default=None):
        return self._map.get(tuple(theta), self.semiring.zero if default is None else default)

    def support(self) -> list[Outcome]:
        return [t for t, _ in self.items]

    def total(self):
        return self.semiring.sum(w for _, w in self.items)

    def dense(self, outcomes: Iterable[Outcome]) -> tuple:
        return tuple(self[t] for t in outcomes)

    def __repr__(self) -> str:
        body = ", ".join(f"{''.join(map(str, t)) or '()'}: {w}" for t, w in self.items)
        return f"Distribution({{{body}}})"


def pushforward_dist(f: Callable[[Outcome], Outcome], p: Distribution) -> Distribution:
    return Distribution.of(((f(t), w) for t, w in p.items), p.semiring, check=False)


def act(Y: OutcomeSpace, word: OperatorWord, p: Distribution) -> Distribution:
    """Push ``p`` forward along the outcome action of a simplicial operator."""
    if word.is_identity:
        return p
    return pushforward_dist(lambda t: Y.apply(word, t), p)


@dataclass(frozen=True)
class SimplicialDistribution:
    """A face-compatible table of distributions on nondegenerate simplices.

    Construction does not check compatibility; use :func:`check_simplicial`.
    """

    space: PresentedSSet
    outcome: OutcomeSpace
    table: Mapping[Key, Distribution]
    semiring: Semiring = NONNEG_RATIONALS

    def __post_init__(self):
        table = dict(self.table)
        missing = [self.space.label(k) for k in self.space.keys() if k not in table]
        if missing:
            raise DistributionError(f"no distribution for {missing}")
        for k, dist in table.items():
            n = k[0]
            for t in dist.support():
                if not self.outcome.contains(t, n):
                    raise DistributionError(f"{self.space.label(k)}: {t} is not a {n}-simplex of {self.outcome!r}")
        object.__setattr__(self, "table", table)

    def at(self, ref: SimplexRef | Key | str) -> Distribution:
        """Distribution at any simplex, degenerate ones computed on demand."""
        if isinstance(ref, str):
            ref = self.space.ref(ref)
        elif not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        base = self.table[ref.base]
        if not ref.degeneracies:
            return base
        return act(self.outcome, OperatorWord(ref.degeneracies), base)

    def __getitem__(self, label: str) -> Distribution:
        return self.at(label)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SimplicialDistribution):
            return NotImplemented
        return (
            self.space == other.space
            and self.outcome == other.outcome
            and self.semiring == other.semiring
            and self.table == other.table
        )

    def __hash__(self) -> int:
        return hash((self.space, self.outcome, tuple(sorted(self.table.items()))))

    @classmethod
    def from_generators(
        cls,
        space: PresentedSSet,
        outcome: OutcomeSpace,
        given: Mapping[Key | str, Distribution | Mapping],
        semiring: Semiring = NONNEG_RATIONALS,
    ) -> "SimplicialDistribution":
        """Fill in lower simplices by taking faces of the given ones.

        When a simplex is reachable from several given ones, the first
        (highest dimension, lowest id) wins; disagreements are left for
        :func:`check_simplicial` to report.
        """
        table: dict[Key, Distribution] = {}
        for k, v in given.items():
            key = space.key_of(k) if isinstance(k, str) else tuple(k)
            table[key] = v if isinstance(v, Distribution) else Distribution.of(v, semiring)
        for n in range(space.max_dim, 0, -1):
            for key in space.keys(n):
                if key not in table:
                    continue
                for i in range(n + 1):
                    f = space.faces_of(key)[i]
                    if f.is_degenerate or f.base in table:
                        continue
                    table[f.base] = act(outcome, OperatorWord.face(i), table[key])
        for key in space.keys(0):
            if key not in table and outcome.count(0) == 1:
                table[key] = Distribution.delta(next(outcome.simplices(0)), semiring)
        return cls(space, outcome, table, semiring)

    @classmethod
    def deterministic(cls, space: PresentedSSet, outcome: OutcomeSpace, values: Mapping[Key, Outcome], semiring: Semiring = NONNEG_RATIONALS):
        return cls(space, outcome, {k: Distribution.delta(values[k], semiring) for k in space.keys()}, semiring)


def marginal(p: SimplicialDistribution, sigma: SimplexRef | Key | str, word: OperatorWord) -> Distribution:
    """``D(word)`` applied to the distribution at ``sigma``."""
    dist = p.at(sigma)
    n = sigma.dim if isinstance(sigma, SimplexRef) else (p.space.key_of(sigma)[0] if isinstance(sigma, str) else sigma[0])
    if word.dim is not None and word.dim != n:
        raise DimensionError(f"word acts on dim {word.dim}, simplex has dim {n}")
    OperatorWord.from_letters(word.letters(), n)  # dimension check
    return act(p.outcome, word, dist)


@dataclass(frozen=True)
class FaceMismatch:
    simplex: str
    i: int
    expected: Distribution
    found: Distribution

    def as_dict(self) -> dict:
        return {"simplex": self.simplex, "i": self.i, "expected": self.expected, "found": self.found}


def check_simplicial(p: SimplicialDistribution) -> list[FaceMismatch]:
    """All face-compatibility failures: ``expected`` is the table value at
    the face, ``found`` is the marginal of the simplex itself."""
    out = []
    X = p.space
    for key in X.keys():
        if key[0] == 0:
            continue
        for i in range(key[0] + 1):
            found = act(p.outcome, OperatorWord.face(i), p.table[key])
            expected = p.at(X.faces_of(key)[i])
            if found != expected:
                out.append(FaceMismatch(X.label(key), i, expected, found))
    return out


def semiring_map(p: SimplicialDistribution, phi: Callable, target: Semiring) -> SimplicialDistribution:
    """Apply a semiring homomorphism valuewise.

    ``phi`` is checked on 0, 1 and on all sums and products of pairs of
    values occurring in ``p``.
    """
    src = p.semiring
    if phi(src.zero) != target.zero or phi(src.one) != target.one:
        raise DistributionError("map does not preserve 0 and 1")
    values = sorted({w for dist in p.table.values() for _, w in dist.items}, key=repr)[:12]
    for a in values:
        for b in values:
            if phi(src.add(a, b)) != target.add(phi(a), phi(b)) or phi(src.mul(a, b)) != target.mul(phi(a), phi(b)):
                raise DistributionError(f"map is not a homomorphism on ({a}, {b})")
    table = {
        k: Distribution.of(((t, phi(w)) for t, w in dist.items), target, check=False)
        for k, dist in p.table.items()
    }
    return SimplicialDistribution(p.space, p.outcome, table, target)


def pushforward_outcomes(p: SimplicialDistribution, g: Callable[[Outcome], Outcome], target: OutcomeSpace) -> SimplicialDistribution:
    """Valuewise pushforward along an outcome map ``g`` (given on all simplices)."""
    return SimplicialDistribution(p.space, target, {k: pushforward_dist(g, d) for k, d in p.table.items()}, p.semiring)


def circle_tuple(ps: Sequence) -> Distribution:
    """Circle-outcome distribution from the masses ``(p^1, ..., p^n)`` on unit vectors.

    The zero simplex gets ``1 - sum p^k``.
    """
    ps = [rational(x) for x in ps]
    n = len(ps)
    rest = 1 - sum(ps)
    if rest < 0:
        raise DistributionError("masses exceed 1")
    weights = {(0,) * n: rest}
    for k, w in enumerate(ps):
        weights[tuple(int(i == k) for i in range(n))] = w
    return Distribution.of(weights)


def circle_embed(p, d: int = 2):
    """Push circle-outcome data into the nerve of Z/d.

    Accepts a tuple of masses, a :class:`Distribution` or a
    :class:`SimplicialDistribution`.  Circle simplices are already stored
    as nerve tuples, so the inclusion acts as the identity on outcomes.
    """
    if isinstance(p, SimplicialDistribution):
        if not isinstance(p.outcome, Circle):
            raise DistributionError("expected circle outcomes")
        return SimplicialDistribution(p.space, Nerve(p.outcome.d), p.table, p.semiring)
    if isinstance(p, Distribution):
        return p
    return circle_tuple(p)
