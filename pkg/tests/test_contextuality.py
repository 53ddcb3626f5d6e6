import random
from fractions import Fraction as F
from itertools import product

import pytest

from oracles import diamond_lambda, float_lp_noncontextual, random_boundary_delta3_edges, random_diamond_tables
from simpctx import spaces as S
from simpctx.boxes import mix, noisy_pr_box, pr_box, pr_type_boxes, random_box, uniform_box
from simpctx.contextuality import (
    CHSH_EDGES,
    boundary_delta3_extension,
    chsh_check,
    classical_facets,
    coordinate_name,
    discrete_embed,
    extension_is_valid,
    extension_system,
    glue_classical,
    is_contextual,
    is_logically_contextual,
    is_noncontextual,
    is_strongly_contextual,
    simplex_classical,
    solve_extension,
)
from simpctx.errors import DistributionError, PresentationError
from simpctx.outcomes import Nerve, SimplicialDistribution, check_simplicial
from simpctx.polytope import LinearSystem, project
from simpctx.simpdist import ClassicalDistribution, deterministic_assignments, restrict, theta
from simpctx.sset import from_ordered_complex, subspace

half = F(1, 2)


def test_glued_triangle_strongly_contextual():
    X = S.glued_triangle()
    # every deterministic map sends x to 0 (d1 = d0 forces the x-value to vanish)
    assert all(r[X.key_of("x")] == (0,) for r in deterministic_assignments(X, Nerve(2)))
    p = SimplicialDistribution.from_generators(X, Nerve(2), {"sigma": {(1, 0): half, (1, 1): half}})
    assert check_simplicial(p) == []
    v = is_noncontextual(p)
    assert not v.noncontextual and v.verify(p)
    assert is_strongly_contextual(p).strongly_contextual
    assert is_logically_contextual(p)


def test_pr_box_certificates():
    X = S.punctured_torus()
    p = pr_box(X)
    v = is_noncontextual(p)
    assert v.status == "contextual"
    assert v.verify(p)
    assert is_strongly_contextual(p).strongly_contextual
    report = chsh_check(p)
    assert report.value == 3 and not report.holds


def test_noisy_pr_box_threshold():
    X = S.punctured_torus()
    assert chsh_check(noisy_pr_box(X)).value == F(5, 2)
    assert is_contextual(noisy_pr_box(X))
    assert not is_contextual(noisy_pr_box(X, half))
    assert not is_logically_contextual(noisy_pr_box(X))


def test_uniform_and_mixture_noncontextual():
    X = S.punctured_torus()
    assert not is_contextual(uniform_box(X))
    boxes = pr_type_boxes(X)
    assert len(boxes) == 8
    p = mix([(F(1, 8), b) for b in boxes])
    assert p == uniform_box(X)
    v = is_noncontextual(p)
    assert v.verify(p)


@pytest.mark.parametrize("seed", range(15))
def test_lp_matches_float_oracle(seed):
    rng = random.Random(seed)
    X = S.punctured_torus()
    p = random_box(X, rng, denominator=16)
    verts = deterministic_assignments(X, Nerve(2))
    assert is_noncontextual(p).noncontextual == float_lp_noncontextual(p, verts)


def _diamond_dist(X, p, q):
    return SimplicialDistribution.from_generators(X, Nerve(2), {"x0y0": p, "x1y1": q})


def test_diamond_gluing_matches_closed_form(rng):
    X = S.diamond()
    A, B = subspace(X, ["x0y0"]), subspace(X, ["x1y1"])
    keys = [X.key_of(l) for l in ("x0", "x0+y0", "x1")]
    for _ in range(30):
        pt, qt = random_diamond_tables(rng)
        p = _diamond_dist(X, pt, qt)
        assert check_simplicial(p) == []
        expect = {k: w for k, w in diamond_lambda(pt, qt).items() if w}
        d = glue_classical(simplex_classical(restrict(p, A.inclusion)), simplex_classical(restrict(p, B.inclusion)), A, B)
        got = {tuple(r[k][0] for k in keys): w for r, w in d.weights}
        assert got == expect
        assert theta(d) == p


def test_gluing_rejects_mismatched_marginals():
    X = S.diamond()
    A, B = subspace(X, ["x0y0"]), subspace(X, ["x1y1"])
    pA = SimplicialDistribution.from_generators(A.space, Nerve(2), {"x0y0": {(0, 0): 1}})
    pB = SimplicialDistribution.from_generators(B.space, Nerve(2), {"x1y1": {(1, 0): 1}})
    with pytest.raises(DistributionError):
        glue_classical(simplex_classical(pA), simplex_classical(pB), A, B)


def test_two_tetrahedra_glue(rng):
    X = from_ordered_complex({"0123": "0123", "0124": "0124"})
    A, B = subspace(X, ["0123"]), subspace(X, ["0124"])
    dets = deterministic_assignments(X, Nerve(2))
    for _ in range(10):
        ws = [rng.randint(0, 4) for _ in dets]
        ws[0] += 1
        dist = ClassicalDistribution.of(X, Nerve(2), {r: F(w, sum(ws)) for r, w in zip(dets, ws)})
        p = theta(dist)
        g = glue_classical(simplex_classical(restrict(p, A.inclusion)), simplex_classical(restrict(p, B.inclusion)), A, B)
        assert theta(g) == p


def test_horn_projection_is_tautological():
    X = S.horn(2, 1)
    keep = [coordinate_name(X.label(k), (0,)) for k in X.keys(1)]
    P = project(extension_system(X), keep).canonical()
    box = LinearSystem.build(keep, [({v: 1}, 0, ">=") for v in keep] + [({v: 1}, 1, "<=") for v in keep]).canonical()
    assert P.constraints == box.constraints


def test_horn_extension_exists():
    D = S.delta(3)
    sub = subspace(D, [D.label(D.face(D.key_of("0123"), i)) for i in (0, 2, 3)])
    assert sub.space.count(2) == 3
    rng = random.Random(4)
    dets = deterministic_assignments(D, Nerve(2))
    for _ in range(5):
        ws = [rng.randint(0, 3) + (i == 0) for i in range(len(dets))]
        q = theta(ClassicalDistribution.of(D, Nerve(2), {r: F(w, sum(ws)) for r, w in zip(dets, ws)}))
        p = restrict(q, sub.inclusion)
        res = solve_extension(p, sub)
        assert res.feasible and extension_is_valid(res.extension, p, sub)


def test_pr_box_does_not_extend_to_torus():
    sub = S.punctured_torus_subspace()
    res = solve_extension(pr_box(sub.space), sub)
    assert not res.feasible
    assert res.certificate["rows"]


def test_boundary_delta3_min_construction(rng):
    B = S.boundary_delta(3)
    for _ in range(50):
        tabs = random_boundary_delta3_edges(rng)
        p = SimplicialDistribution.from_generators(B, Nerve(2), tabs)
        assert check_simplicial(p) == []
        q = boundary_delta3_extension(p)
        assert check_simplicial(q) == []


def test_diamond_boundary_facets_are_chsh():
    X = S.diamond()
    sub = S.boundary(X, "diamond")
    coords = [(l, (0,)) for l in ("x0", "y0", "x1", "y1")]
    names = [coordinate_name(l, t) for l, t in coords]
    projected = project(extension_system(X), names).canonical()
    assert len(projected.inequalities) == 16
    assert sub.space.count(1) == 4


def test_punctured_torus_facets_contain_chsh():
    X = S.punctured_torus()
    facets = classical_facets(X)
    names = [coordinate_name(e, (0,)) for e in CHSH_EDGES]
    have = {(c.coeffs, c.rhs) for c in facets.inequalities}
    for k in range(4):
        # 0 <= total - 2 c_k <= 2
        for sign, rhs in ((1, 2), (-1, 0)):
            coeffs = {n: sign * (1 - 2 * (j == k)) for j, n in enumerate(names)}
            row = LinearSystem.build(facets.variables, [(coeffs, rhs, "<=")]).canonical().constraints[0]
            assert (row.coeffs, row.rhs) in have


def test_discrete_single_context_is_noncontextual(rng):
    scn = discrete_embed(["a", "b"], [["a", "b"]], 2)
    for _ in range(5):
        ws = [rng.randint(0, 5) + 1 for _ in range(4)]
        table = {("a", "b"): {t: F(w, sum(ws)) for t, w in zip(product((0, 1), repeat=2), ws)}}
        p = scn.to_simplicial(table)
        assert not is_contextual(p)
        assert scn.sheaf_noncontextual(table)


def test_discrete_pr_box_agrees_with_sheaf_lp():
    ctxs = [("a0", "b0"), ("a0", "b1"), ("a1", "b0"), ("a1", "b1")]
    scn = discrete_embed(["a0", "a1", "b0", "b1"], ctxs, 2)
    table = {}
    for c in ctxs:
        anti = c == ("a1", "b1")
        table[c] = {(a, b): half for a, b in product((0, 1), repeat=2) if (a != b) == anti}
    p = scn.to_simplicial(table)
    assert is_contextual(p)
    assert not scn.sheaf_noncontextual(table)
    assert {c: d for c, d in scn.from_simplicial(p).items()} == {c: p[",".join(c)] for c in ctxs}


def test_discrete_embed_validation():
    with pytest.raises(PresentationError):
        discrete_embed(["a", "a"], [["a"]], 2)
    with pytest.raises(PresentationError):
        discrete_embed(["a", "b"], [["a"], ["a", "b"]], 2)
