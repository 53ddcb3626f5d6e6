"""Named measurement spaces.

Orientation conventions: a triangle ``(A, B)`` has ``d2 = A``, ``d0 = B``
and ``d1 = A+B``; an edge ``u -> v`` has ``d1 = u`` and ``d0 = v``.
Vertices of spaces assembled from triangles are named ``v0, v1, ...`` in
the order of their class representatives.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .errors import PresentationError
from .sset import (
    DEFAULT_MAX_DIM,
    PresentedSSet,
    Subspace,
    disjoint_union,
    from_ordered_complex,
    glue,
    relabel,
    subspace,
    validate,
)


def _join(vs: Sequence[int], n: int) -> str:
    return "".join(str(v) for v in vs) if n < 10 else ",".join(str(v) for v in vs)


def delta(n: int, max_dim: int | None = None) -> PresentedSSet:
    """The standard n-simplex; simplices are labelled by their vertex strings."""
    if n < 0:
        raise PresentationError("delta needs n >= 0")
    from itertools import combinations

    names = [_join([i], n) for i in range(n + 1)]
    simplices = {}
    for k in range(1, n + 2):
        for vs in combinations(range(n + 1), k):
            simplices[_join(vs, n)] = [names[v] for v in vs]
    return from_ordered_complex(simplices, max(max_dim or DEFAULT_MAX_DIM, n))


def boundary_delta(n: int) -> PresentedSSet:
    if n < 1:
        raise PresentationError("boundary_delta needs n >= 1")
    D = delta(n)
    top = D.keys(n)[0]
    return subspace(D, [D.face(top, i) for i in range(n + 1)]).space


def horn(n: int, k: int) -> PresentedSSet:
    """The horn Λ^n_k: all faces of Δ^n except the k-th."""
    if n < 1 or not 0 <= k <= n:
        raise PresentationError(f"horn needs 0 <= k <= n and n >= 1, got n={n}, k={k}")
    D = delta(n)
    top = D.keys(n)[0]
    return subspace(D, [D.face(top, i) for i in range(n + 1) if i != k]).space


def circle(max_dim: int | None = None) -> PresentedSSet:
    """One vertex ``0`` and one nondegenerate edge ``01`` from it to itself."""
    edge = delta(1, max_dim)
    return glue(edge, [("0", "1")])


def from_triangles(
    triangles: Mapping[str, tuple[str, str, str]],
    vertex_identifications: Sequence[tuple[tuple[str, int], tuple[str, int]]] = (),
    max_dim: int = DEFAULT_MAX_DIM,
) -> PresentedSSet:
    """Glue triangles along equally-labelled edges.

    ``triangles`` maps a triangle label to the labels of its ``(d2, d0, d1)``
    edges.  Edges with the same label are identified with matching
    orientation.  Extra vertex identifications are given as
    ``((triangle, vertex index), (triangle, vertex index))``.
    """
    tri = delta(2, max_dim)
    parts = [(f"{t}:", tri) for t in triangles]
    X = disjoint_union(*parts)
    edge_of = {"d2": "01", "d0": "12", "d1": "02"}
    first: dict[str, str] = {}
    pairs = []
    names: dict[str, str] = {}
    for t, (e2, e0, e1) in triangles.items():
        for pos, lab in zip(("d2", "d0", "d1"), (e2, e0, e1)):
            local = f"{t}:{edge_of[pos]}"
            if lab in first:
                pairs.append((first[lab], local))
            else:
                first[lab] = local
                names[local] = lab
        names[f"{t}:012"] = t
    for (ta, ia), (tb, ib) in vertex_identifications:
        pairs.append((f"{ta}:{ia}", f"{tb}:{ib}"))
    Y = glue(X, pairs)
    return relabel(Y, names, vertex_prefix="v")


def diamond(face_a: int = 1, face_b: int = 1) -> PresentedSSet:
    """Two triangles glued along ``d_{face_a}`` of the first and ``d_{face_b}`` of the second.

    The default gluing along the ``d1`` faces uses the names ``x0y0`` /
    ``x1y1`` for the triangles, ``x0, y0, x1, y1`` for the outer edges and
    ``x0+y0`` for the shared edge.
    """
    for f in (face_a, face_b):
        if not 0 <= f <= 2:
            raise PresentationError("diamond faces must be 0, 1 or 2")
    tri = delta(2)
    X = disjoint_union(("a", tri), ("b", tri))
    top_a, top_b = X.key_of("a012"), X.key_of("b012")
    Y = glue(X, [(X.face(top_a, face_a), X.face(top_b, face_b))])
    if (face_a, face_b) == (1, 1):
        names = {"a012": "x0y0", "b012": "x1y1", "a01": "x0", "a12": "y0", "b01": "x1", "b12": "y1", "a02": "x0+y0"}
        return relabel(Y, names, vertex_prefix="v")
    return Y


def torus() -> PresentedSSet:
    """The CHSH torus: the four Bell contexts plus a diamond closing the hole.

    The two extra triangles ``plus`` and ``minus`` carry the contexts
    ``(x0+y0, x1+y1)`` and ``(x1+y0, x0+y1)`` and share their ``d1`` edge.
    """
    return from_triangles(
        {
            "y0x0": ("y0", "x0", "x0+y0"),
            "y0x1": ("y0", "x1", "x1+y0"),
            "x0y1": ("x0", "y1", "x0+y1"),
            "x1y1": ("x1", "y1", "x1+y1"),
            "plus": ("x0+y0", "x1+y1", "x0+x1+y0+y1"),
            "minus": ("x1+y0", "x0+y1", "x0+x1+y0+y1"),
        }
    )


def punctured_torus_subspace() -> Subspace:
    T = torus()
    return subspace(T, ["y0x0", "y0x1", "x0y1", "x1y1"])


def punctured_torus() -> PresentedSSet:
    """The torus with the diamond ``plus``/``minus`` removed.

    Its boundary consists of the four edges ``xi+yj``.
    """
    return punctured_torus_subspace().space


def glued_triangle() -> PresentedSSet:
    """One triangle ``sigma`` whose ``d0`` and ``d1`` faces are identified.

    Edges: ``x`` (the ``d2`` face, a loop after gluing) and ``e``.
    """
    D = delta(2)
    Y = glue(D, [("12", "02")])
    return relabel(Y, {"012": "sigma", "01": "x", "02": "e"})


# Mermin square contexts, rows then columns.  Each entry is (A, B, A*B).
_MERMIN_CONTEXTS = {
    "r1": ("XI", "IX", "XX"),
    "r2": ("IZ", "ZI", "ZZ"),
    "r3": ("XZ", "ZX", "YY"),
    "c1": ("XI", "IZ", "XZ"),
    "c2": ("IX", "ZI", "ZX"),
}


def mermin_square_torus() -> PresentedSSet:
    """The full square with the last column ``(XX, ZZ)`` as a single triangle.

    This is a valid simplicial set but the observable labels on ``c3`` do not
    multiply correctly, since ``XX*ZZ = -YY``.
    """
    return from_triangles({**_MERMIN_CONTEXTS, "c3": ("XX", "ZZ", "YY")})


def mermin_square_state_dep() -> PresentedSSet:
    """The Mermin torus with the ``(XX, ZZ)`` context removed.

    Its boundary is the three edges ``XX``, ``ZZ`` and ``YY``.
    """
    return from_triangles(dict(_MERMIN_CONTEXTS))


def mermin_square_state_indep() -> PresentedSSet:
    """The Mermin torus with the last column split in two triangles.

    ``c3a = (XX, ZZ)`` has product edge ``-YY``; ``c3b = (YY, -II)`` has the
    same product, and its ``d0`` edge ``-II`` is a loop.
    """
    return from_triangles(
        {**_MERMIN_CONTEXTS, "c3a": ("XX", "ZZ", "-YY"), "c3b": ("YY", "-II", "-YY")},
        vertex_identifications=[(("c3b", 1), ("c3b", 2))],
    )


_Q_TRIANGLES = {
    "x0y0": ("0", "1", "2"),
    "x0y1": ("0", "1", "3"),
    "x1y0": ("0'", "1", "2"),
    "x1y1": ("0'", "1", "3"),
}
_Q_EDGES = {
    "x0": ("0", "1"),
    "x1": ("0'", "1"),
    "y0": ("1", "2"),
    "y1": ("1", "3"),
    "x0+y0": ("0", "2"),
    "x0+y1": ("0", "3"),
    "x1+y0": ("0'", "2"),
    "x1+y1": ("0'", "3"),
}
_A_TRIANGLES = {"123": ("1", "2", "3"), "023": ("0", "2", "3"), "0'23": ("0'", "2", "3")}
_VERTICES = {v: (v,) for v in ("0", "0'", "1", "2", "3")}


def square_Q() -> PresentedSSet:
    """Two diamonds ``(x0y0, x0y1)`` and ``(x1y0, x1y1)`` sharing the edges ``y0, y1``.

    Vertices ``0, 0', 1, 2, 3``; the boundary square is ``xi+yj``.
    """
    return from_ordered_complex({**_VERTICES, **_Q_EDGES, **_Q_TRIANGLES})


def space_H() -> PresentedSSet:
    """``square_Q`` with the triangles ``123``, ``023``, ``0'23`` added.

    Equivalently two boundaries of tetrahedra glued along the triangle ``123``.
    """
    return from_ordered_complex({**_VERTICES, **_Q_EDGES, **_Q_TRIANGLES, **_A_TRIANGLES})


def space_A() -> PresentedSSet:
    """Three triangles sharing the edge ``23``: two diamonds glued along ``123``."""
    edges = {k: v for k, v in _Q_EDGES.items() if k not in ("x0", "x1")}
    return from_ordered_complex({**_VERTICES, **edges, **_A_TRIANGLES, "23": ("2", "3")})


def Z(d: int, n: int) -> PresentedSSet:
    """Two copies of Δ^d glued along the n-face spanned by vertices ``0, 2, 3, ..., n+1``.

    For ``n = d - 1`` this is the ``d1`` face.
    """
    if not 0 <= n < d:
        raise PresentationError("Z(d, n) needs 0 <= n < d")
    D = delta(d)
    X = disjoint_union(("a", D), ("b", D))
    face = _join([0] + list(range(2, n + 2)), d)
    return glue(X, [("a" + face, "b" + face)])


def boundary(X: PresentedSSet, name: str) -> Subspace:
    """Named boundary/loop subspaces of the builtin spaces."""
    table = {
        "punctured_torus": ["x0+y0", "x0+y1", "x1+y0", "x1+y1"],
        "square_Q": ["x0+y0", "x0+y1", "x1+y0", "x1+y1"],
        "mermin_square_state_dep": ["XX", "ZZ", "YY"],
        "mermin_square_state_indep": ["-II"],
        "diamond": ["x0", "y0", "x1", "y1"],
    }
    if name not in table:
        raise PresentationError(f"no designated boundary for {name!r}")
    return subspace(X, table[name])


BUILTINS = {
    "delta": delta,
    "boundary_delta": boundary_delta,
    "horn": horn,
    "circle": circle,
    "diamond": diamond,
    "punctured_torus": punctured_torus,
    "torus": torus,
    "glued_triangle": glued_triangle,
    "mermin_square_state_dep": mermin_square_state_dep,
    "mermin_square_state_indep": mermin_square_state_indep,
    "mermin_square_torus": mermin_square_torus,
    "square_Q": square_Q,
    "space_H": space_H,
    "space_A": space_A,
    "Z": Z,
}


def builtin(name: str, **params) -> PresentedSSet:
    """Look up a named space; the result is checked with :func:`validate`."""
    try:
        make = BUILTINS[name]
    except KeyError:
        raise PresentationError(f"unknown builtin space {name!r}") from None
    try:
        X = make(**params)
    except TypeError as exc:
        raise PresentationError(f"bad parameters for {name!r}: {exc}") from None
    bad = validate(X)
    if bad:  # pragma: no cover - builtins are tested to be valid
        raise PresentationError(f"builtin {name!r} violates simplicial identities: {bad[0]}")
    return X
