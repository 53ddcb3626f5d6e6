import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import act_on_vertex_string
from simpctx import spaces as S
from simpctx.errors import DimensionError, PresentationError
from simpctx.sset import (
    OperatorWord,
    SimplexRef,
    SpaceMap,
    compose_words,
    disjoint_union,
    from_ordered_complex,
    glue,
    quotient,
    subspace,
    validate,
)


def _random_letters(rng, dim, length):
    letters, cur = [], dim
    for _ in range(length):
        if cur >= 1 and rng.random() < 0.5:
            letters.append(("d", rng.randint(0, cur)))
            cur -= 1
        elif cur < 6:
            letters.append(("s", rng.randint(0, cur)))
            cur += 1
    return list(reversed(letters)), cur  # rightmost acts first


@pytest.mark.parametrize(
    "letters, degs, faces",
    [
        ([("d", 0), ("s", 0)], (), ()),
        ([("d", 1), ("s", 0)], (), ()),
        ([("d", 2), ("s", 0)], (0,), (1,)),
        ([("d", 0), ("s", 1)], (0,), (0,)),
        ([("d", 1), ("d", 0)], (), (0, 2)),
        ([("s", 0), ("s", 0)], (1, 0), ()),
    ],
)
def test_normal_form_rewrites(letters, degs, faces):
    w = OperatorWord.from_letters(letters)
    assert (w.degeneracies, w.faces) == (degs, faces)


def test_d0_d1_stays_normal_and_equals_d0_d0():
    a = OperatorWord.from_letters([("d", 0), ("d", 1)], dim=2)
    b = OperatorWord.from_letters([("d", 0), ("d", 0)], dim=2)
    assert a == b
    assert a.faces == (0, 1)


def test_normal_form_matches_vertex_string_oracle():
    rng = random.Random(1)
    for _ in range(1000):
        dim = rng.randint(0, 6)
        letters, _ = _random_letters(rng, dim, rng.randint(0, 6))
        w = OperatorWord.from_letters(letters, dim)
        assert act_on_vertex_string(w.letters(), dim) == act_on_vertex_string(letters, dim)


def test_composition_is_associative():
    rng = random.Random(2)
    for _ in range(1000):
        dim = rng.randint(0, 4)
        l1, d1 = _random_letters(rng, dim, rng.randint(0, 3))
        l2, d2 = _random_letters(rng, d1, rng.randint(0, 3))
        l3, _ = _random_letters(rng, d2, rng.randint(0, 3))
        w1 = OperatorWord.from_letters(l1, dim)
        w2 = OperatorWord.from_letters(l2, d1)
        w3 = OperatorWord.from_letters(l3, d2)
        assert compose_words(compose_words(w3, w2), w1) == compose_words(w3, compose_words(w2, w1))


def test_dimension_errors():
    with pytest.raises(DimensionError):
        OperatorWord.from_letters([("d", 3)], dim=2)
    with pytest.raises(DimensionError):
        compose_words(OperatorWord.face(0, dim=3), OperatorWord.face(0, dim=2))
    with pytest.raises(DimensionError):
        OperatorWord.from_letters([("d", 0)], dim=0)


@pytest.mark.parametrize("name", sorted(S.BUILTINS))
def test_builtins_validate(name):
    params = {"delta": {"n": 3}, "boundary_delta": {"n": 3}, "horn": {"n": 2, "k": 1}, "Z": {"d": 2, "n": 1}}.get(name, {})
    X = S.builtin(name, **params)
    assert validate(X) == []


@pytest.mark.parametrize(
    "name, counts",
    [
        ("circle", [1, 1]),
        ("diamond", [4, 5, 2]),
        ("punctured_torus", [3, 8, 4]),
        ("torus", [3, 9, 6]),
        ("glued_triangle", [2, 2, 1]),
        ("mermin_square_state_dep", [3, 9, 5]),
        ("mermin_square_state_indep", [3, 11, 7]),
        ("square_Q", [5, 8, 4]),
        ("space_H", [5, 9, 7]),
        ("space_A", [5, 7, 3]),
    ],
)
def test_builtin_counts(name, counts):
    X = S.builtin(name)
    assert [X.count(n) for n in range(len(counts))] == counts


@pytest.mark.parametrize("name, chi", [("torus", 0), ("punctured_torus", -1), ("circle", 0), ("delta", 1)])
def test_euler_characteristic(name, chi):
    X = S.builtin(name, **({"n": 2} if name == "delta" else {}))
    assert sum((-1) ** n * X.count(n) for n in range(X.max_dim + 1)) == chi


def test_delta_faces_delete_vertices():
    D = S.delta(3)
    top = D.key_of("0123")
    for i in range(4):
        assert D.label(D.face(top, i)) == "".join(c for k, c in enumerate("0123") if k != i)


def test_faces_of_faces_never_mismatch():
    rng = random.Random(3)
    for name in ["torus", "mermin_square_state_indep", "space_H", "glued_triangle"]:
        X = S.builtin(name)
        for key in X.keys():
            ref = SimplexRef.of(key)
            for _ in range(5):
                r = ref
                while r.dim > 0:
                    r = X.face(r, rng.randint(0, r.dim))
                    assert r.dim >= 0
                    if rng.random() < 0.3:
                        r = X.degeneracy(r, rng.randint(0, r.dim))


def test_horn_and_boundary():
    assert S.horn(2, 1).count(1) == 2
    assert S.boundary_delta(3).count(2) == 4
    with pytest.raises(PresentationError):
        S.horn(2, 3)


def test_glue_is_idempotent():
    X = S.delta(2)
    once = glue(X, [("12", "02")])
    twice = glue(once, [("02", "02")])
    assert [once.count(n) for n in range(3)] == [twice.count(n) for n in range(3)]


def test_glue_nondegenerate_with_degenerate_rejected():
    X = S.glued_triangle()
    # x is a loop; its faces coincide, but x itself is not degenerate
    with pytest.raises(PresentationError):
        glue(X, [(X.ref("x"), X.degeneracy(X.key_of("v0") if X.has_key((0, 0)) else (0, 0), 0))])


def test_quotient_counts():
    X = S.mermin_square_state_dep()
    Z = S.boundary(X, "mermin_square_state_dep")
    Xbar, q = quotient(X, Z)
    for n in range(3):
        zn = sum(1 for k in Z.keys if k[0] == n)
        assert Xbar.count(n) == X.count(n) - zn + (1 if n == 0 else 0)
    assert validate(Xbar) == []
    assert q.violations() == []


def test_quotient_rejects_bad_input():
    X = S.delta(2)
    with pytest.raises(PresentationError):
        quotient(X, [])
    with pytest.raises(PresentationError):
        quotient(X, ["01"])  # vertices missing


def test_subspace_face_closure_and_inclusion():
    X = S.square_Q()
    Z = subspace(X, ["x0+y0", "x0+y1", "x1+y0", "x1+y1"])
    assert [sum(1 for k in Z.keys if k[0] == n) for n in range(2)] == [4, 4]
    assert Z.inclusion.violations() == []


def test_from_ordered_complex_adds_faces():
    X = from_ordered_complex({"t": ["a", "b", "c"]})
    assert [X.count(n) for n in range(3)] == [3, 3, 1]


def test_disjoint_union_and_identity_map():
    X = disjoint_union(("a", S.delta(1)), ("b", S.delta(1)))
    assert X.count(0) == 4
    assert SpaceMap.identity(X).violations() == []


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5), st.lists(st.tuples(st.sampled_from("ds"), st.integers(0, 6)), max_size=6))
def test_random_words_match_oracle(dim, raw):
    letters, cur = [], dim
    for kind, i in reversed(raw):
        if kind == "d" and cur >= 1:
            letters.append(("d", i % (cur + 1)))
            cur -= 1
        elif kind == "s" and cur < 7:
            letters.append(("s", i % (cur + 1)))
            cur += 1
    letters.reverse()
    w = OperatorWord.from_letters(letters, dim)
    assert act_on_vertex_string(w.letters(), dim) == act_on_vertex_string(letters, dim)
