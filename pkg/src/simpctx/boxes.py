"""Standard two-party binary distributions on square-shaped spaces.

Any space whose four triangles have ``x_i+y_j`` as the ``d1`` edge works
(the punctured torus, the square ``Q``, the diamond for two contexts).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .outcomes import Distribution, Nerve, SimplicialDistribution
from .simpdist import deterministic_assignments, delta_of
from .sset import PresentedSSet

HALF = Fraction(1, 2)


def xor_box(X: PresentedSSet, parities: Mapping[str, int]) -> SimplicialDistribution:
    """On each triangle, uniform over the outcomes whose sum edge has the given parity.

    ``parities`` maps a ``d1`` edge label (for instance ``"x0+y0"``) to 0 or 1.
    """
    given = {}
    for key in X.keys(2):
        sum_edge = X.label(X.faces_of(key)[1])
        c = parities[sum_edge] % 2
        given[key] = {(a, b): HALF for a, b in product((0, 1), repeat=2) if (a + b) % 2 == c}
    return SimplicialDistribution.from_generators(X, Nerve(2), given)


def pr_box(X: PresentedSSet) -> SimplicialDistribution:
    """Anticorrelated on ``x0+y0``, correlated on the other three sum edges."""
    return xor_box(X, {"x0+y0": 1, "x0+y1": 0, "x1+y0": 0, "x1+y1": 0})


def pr_type_boxes(X: PresentedSSet) -> list[SimplicialDistribution]:
    """The eight boxes with an odd number of anticorrelated sum edges."""
    edges = ("x0+y0", "x0+y1", "x1+y0", "x1+y1")
    out = []
    for bits in product((0, 1), repeat=4):
        if sum(bits) % 2:
            out.append(xor_box(X, dict(zip(edges, bits))))
    return out


def mix(parts: Sequence[tuple[Fraction, SimplicialDistribution]]) -> SimplicialDistribution:
    """Convex combination of simplicial distributions on one space."""
    first = parts[0][1]
    table = {}
    for key in first.space.keys():
        acc: dict = {}
        for w, p in parts:
            for t, v in p.table[key].items:
                acc[t] = acc.get(t, Fraction(0)) + Fraction(w) * v
        table[key] = Distribution.of(acc)
    return SimplicialDistribution(first.space, first.outcome, table)


def uniform_box(X: PresentedSSet) -> SimplicialDistribution:
    given = {key: {t: Fraction(1, 4) for t in product((0, 1), repeat=2)} for key in X.keys(2)}
    return SimplicialDistribution.from_generators(X, Nerve(2), given)


def noisy_pr_box(X: PresentedSSet, visibility: Fraction = Fraction(3, 4)) -> SimplicialDistribution:
    v = Fraction(visibility)
    return mix([(v, pr_box(X)), (1 - v, uniform_box(X))])


def deterministic_boxes(X: PresentedSSet) -> list[SimplicialDistribution]:
    Y = Nerve(2)
    return [delta_of(X, Y, r) for r in deterministic_assignments(X, Y)]


def random_box(X: PresentedSSet, rng: random.Random, denominator: int = 64, parts: int = 3) -> SimplicialDistribution:
    """Random mixture of deterministic and PR-type boxes with weights in ``(1/denominator) Z``."""
    pool = deterministic_boxes(X) + pr_type_boxes(X)
    chosen = [rng.choice(pool) for _ in range(parts)]
    cuts = sorted(rng.randint(0, denominator) for _ in range(parts - 1))
    bounds = [0, *cuts, denominator]
    weights = [Fraction(b - a, denominator) for a, b in zip(bounds, bounds[1:])]
    return mix([(w, p) for w, p in zip(weights, chosen) if w])
