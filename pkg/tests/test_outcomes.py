import random
from fractions import Fraction as F

import pytest

from oracles import nerve_face
from simpctx import spaces as S
from simpctx.boxes import pr_box
from simpctx.errors import DimensionError, DistributionError
from simpctx.outcomes import (
    BOOLEAN,
    Circle,
    DiscretePower,
    Distribution,
    Nerve,
    OutcomeSpace,
    SimplicialDistribution,
    act,
    check_simplicial,
    circle_embed,
    marginal,
    semiring_map,
    support_map,
)
from simpctx.sset import OperatorWord

half, quarter = F(1, 2), F(1, 4)


def test_face_of_perfectly_correlated_edge_pair():
    p = Distribution.of({(0, 0): half, (1, 1): half})
    assert act(Nerve(2), OperatorWord.face(1), p) == Distribution.delta((0,))


def test_d0_of_uniform():
    p = Distribution.of({t: quarter for t in Nerve(2).simplices(2)})
    assert act(Nerve(2), OperatorWord.face(0), p) == Distribution.of({(0,): half, (1,): half})


def test_s0_inserts_zero():
    p = Distribution.of({(0,): F(1, 3), (1,): F(2, 3)})
    q = act(Nerve(2), OperatorWord.degeneracy(0), p)
    assert q == Distribution.of({(0, 0): F(1, 3), (0, 1): F(2, 3)})
    assert q[(1, 0)] == 0 and q[(1, 1)] == 0


def test_circle_embed_masses():
    dist = circle_embed((quarter, quarter))
    assert dist.dense([(0, 0), (1, 0), (0, 1), (1, 1)]) == (half, quarter, quarter, 0)


def test_distribution_must_normalize():
    with pytest.raises(DistributionError):
        Distribution.of({(0,): half})


@pytest.mark.parametrize("Y", [Nerve(2), Nerve(3), Circle(2), DiscretePower(2), DiscretePower(3)])
def test_outcome_simplicial_identities(Y):
    for n in range(1, 4):
        for t in Y.simplices(n):
            assert Y.contains(t, n)
            for i in range(n + 1):
                assert Y.contains(Y.face(t, i), n - 1)
            for i in range(n + 1):
                for j in range(i + 1, n + 1):
                    if n >= 2:
                        assert Y.face(Y.face(t, j), i) == Y.face(Y.face(t, i), j - 1)
            for j in range(n + 1):
                s = Y.degeneracy(t, j)
                assert Y.face(s, j) == t and Y.face(s, j + 1) == t


@pytest.mark.parametrize("d", [2, 3])
def test_nerve_face_matches_oracle(d):
    Y = Nerve(d)
    for n in range(1, 4):
        for t in Y.simplices(n):
            for i in range(n + 1):
                expect = nerve_face(t, i)
                if d != 2:
                    expect = t[1:] if i == 0 else t[:-1] if i == n else t[: i - 1] + ((t[i - 1] + t[i]) % d,) + t[i + 1:]
                assert Y.face(t, i) == expect


def test_circle_counts():
    assert [Circle(2).count(n) for n in range(4)] == [1, 2, 3, 4]


def test_functoriality_of_act():
    rng = random.Random(5)
    Y = Nerve(2)
    for _ in range(50):
        ws = list(Y.simplices(3))
        weights = [rng.randint(0, 5) for _ in ws]
        if not sum(weights):
            continue
        p = Distribution.of({t: F(w, sum(weights)) for t, w in zip(ws, weights)})
        i, j = rng.randint(0, 3), rng.randint(0, 2)
        two_step = act(Y, OperatorWord.face(j), act(Y, OperatorWord.face(i), p))
        composite = OperatorWord.from_letters([("d", j), ("d", i)], 3)
        assert act(Y, composite, p) == two_step


def test_pr_box_support_map():
    p = pr_box(S.diamond())
    q = semiring_map(p, support_map, BOOLEAN)
    assert q.semiring is BOOLEAN
    assert check_simplicial(q) == []
    for key, dist in q.table.items():
        assert set(dist.support()) == set(p.table[key].support())


def test_check_simplicial_negative_control():
    X = S.delta(1)
    top = X.key_of("01")
    good = SimplicialDistribution.from_generators(X, Nerve(2), {"01": {(0,): half, (1,): half}})
    assert check_simplicial(good) == []
    X2 = S.glued_triangle()
    bad_table = dict(SimplicialDistribution.from_generators(X2, Nerve(2), {"sigma": {(0, 0): 1}}).table)
    bad_table[X2.key_of("x")] = Distribution.of({(1,): 1})
    bad = SimplicialDistribution(X2, Nerve(2), bad_table)
    assert check_simplicial(bad)
    assert top[0] == 1


def test_marginal_dimension_check():
    X = S.delta(2)
    p = SimplicialDistribution.from_generators(X, Nerve(2), {"012": {(0, 0): 1}})
    with pytest.raises(DimensionError):
        marginal(p, "012", OperatorWord.face(0, dim=1))
    assert marginal(p, "012", OperatorWord.face(0)) == Distribution.delta((0,))


def test_outcome_space_base_is_abstract():
    assert issubclass(Nerve, OutcomeSpace)
