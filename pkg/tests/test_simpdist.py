import random
from fractions import Fraction as F

import pytest

from oracles import brute_force_edge_labellings
from simpctx import spaces as S
from simpctx.boxes import pr_box, random_box
from simpctx.errors import ResourceCapError
from simpctx.outcomes import Circle, Nerve, check_simplicial
from simpctx.simpdist import (
    ClassicalDistribution,
    count_deterministic,
    enumerate_deterministic,
    enumerate_deterministic_general,
    restrict,
    restrict_classical,
    support,
    theta,
)


@pytest.mark.parametrize(
    "name, d",
    [("diamond", 2), ("circle", 3), ("torus", 2), ("torus", 3), ("punctured_torus", 2), ("square_Q", 2), ("space_H", 2), ("glued_triangle", 3)],
)
def test_deterministic_count_matches_brute_force(name, d):
    X = S.builtin(name)
    brute = brute_force_edge_labellings(X, d)
    assert count_deterministic(X, d) == len(brute)
    got = enumerate_deterministic(X, d)
    assert len(got) == len(brute)
    assert len(set(got)) == len(got)


@pytest.mark.parametrize("name", ["diamond", "glued_triangle", "horn"])
def test_nerve_enumeration_agrees_with_backtracking(name):
    X = S.builtin(name, **({"n": 2, "k": 1} if name == "horn" else {}))
    assert set(enumerate_deterministic(X, 2)) == set(enumerate_deterministic_general(X, Nerve(2)))


def test_circle_outcomes_on_punctured_torus():
    X = S.punctured_torus_subspace().space
    assert len(enumerate_deterministic_general(X, Circle(2))) == 7


def test_cap():
    with pytest.raises(ResourceCapError):
        enumerate_deterministic(S.torus(), 3, cap=5)


def test_pins():
    X = S.diamond()
    free = count_deterministic(X, 2)
    assert count_deterministic(X, 2, {"x0": 1}) == free // 2


def test_theta_of_uniform_mixture_is_uniform():
    X = S.diamond()
    dets = enumerate_deterministic(X, 2)
    dist = ClassicalDistribution.of(X, Nerve(2), {r: F(1, len(dets)) for r in dets})
    p = theta(dist)
    assert check_simplicial(p) == []
    for key in X.keys(2):
        assert all(p.table[key][t] == F(1, 4) for t in Nerve(2).simplices(2))


def test_support_of_pr_box():
    # on the diamond the table is classical; on the punctured torus it is not
    assert support(pr_box(S.diamond()))
    assert support(pr_box(S.punctured_torus())) == []


def test_support_contains_mixture_components():
    rng = random.Random(7)
    X = S.diamond()
    dets = enumerate_deterministic(X, 2)
    chosen = rng.sample(dets, 3)
    p = theta(ClassicalDistribution.of(X, Nerve(2), {r: F(1, 3) for r in chosen}))
    assert set(chosen) <= set(support(p))


def test_theta_is_natural_under_restriction(rng):
    X = S.diamond()
    sub = S.boundary(X, "diamond")
    dets = enumerate_deterministic(X, 2)
    for _ in range(10):
        ws = [rng.randint(0, 3) for _ in dets]
        if not sum(ws):
            continue
        dist = ClassicalDistribution.of(X, Nerve(2), {r: F(w, sum(ws)) for r, w in zip(dets, ws)})
        assert restrict(theta(dist), sub.inclusion) == theta(restrict_classical(dist, sub.inclusion))


def test_random_box_is_simplicial(rng):
    X = S.diamond()
    for _ in range(10):
        assert check_simplicial(random_box(X, rng)) == []
