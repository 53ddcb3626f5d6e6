"""Finite, dimension-truncated simplicial sets given by presentations.

A presentation lists the nondegenerate simplices in each dimension and, for
each of them, its faces.  A face may itself be degenerate, so faces are
stored as :class:`SimplexRef` values: a nondegenerate base together with a
word of degeneracy operators.  Everything else (faces of degenerate
simplices, iterated faces, composite operators) is computed on demand by
rewriting operator words with the simplicial identities.

Simplices are addressed by *keys* ``(dim, id)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import DimensionError, PresentationError

Key = tuple[int, int]
Letter = tuple[str, int]  # ("d", i) or ("s", j)

DEFAULT_MAX_DIM = 3


# ---------------------------------------------------------------------------
# operator words


def _normalize(letters: Sequence[Letter]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Rewrite a word (leftmost letter applied last) into s...s d...d form.

    Degeneracy indices come out strictly decreasing and face indices
    strictly increasing.  Three rewrite families are used:

    * ``d_i s_j`` moves the face to the right or cancels,
    * ``d_a d_b`` with ``a >= b`` becomes ``d_b d_{a+1}``,
    * ``s_a s_b`` with ``a <= b`` becomes ``s_{b+1} s_a``.
    """
    w = list(letters)
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(w) - 1:
            (ka, a), (kb, b) = w[k], w[k + 1]
            if ka == "d" and kb == "s":
                if a < b:
                    w[k : k + 2] = [("s", b - 1), ("d", a)]
                elif a in (b, b + 1):
                    del w[k : k + 2]
                else:
                    w[k : k + 2] = [("s", b), ("d", a - 1)]
                changed = True
            elif ka == "d" and kb == "d" and a >= b:
                w[k : k + 2] = [("d", b), ("d", a + 1)]
                changed = True
            elif ka == "s" and kb == "s" and a <= b:
                w[k : k + 2] = [("s", b + 1), ("s", a)]
                changed = True
            else:
                k += 1
                continue
            k = max(k - 1, 0)
    degs = tuple(i for kind, i in w if kind == "s")
    faces = tuple(i for kind, i in w if kind == "d")
    return degs, faces


def _target_dim(letters: Sequence[Letter], dim: int) -> int:
    """Check that ``letters`` can act on ``dim``-simplices; return the output dim."""
    cur = dim
    for kind, i in reversed(letters):
        if kind == "d":
            if cur < 1 or not 0 <= i <= cur:
                raise DimensionError(f"d_{i} cannot act on a {cur}-simplex")
            cur -= 1
        else:
            if not 0 <= i <= cur:
                raise DimensionError(f"s_{i} cannot act on a {cur}-simplex")
            cur += 1
    return cur


@dataclass(frozen=True)
class OperatorWord:
    """A simplicial operator in normal form ``s_{j1}...s_{jk} d_{i1}...d_{il}``.

    ``degeneracies`` is strictly decreasing, ``faces`` strictly increasing.
    The rightmost letter acts first.  ``dim`` is the dimension of the
    simplices the word acts on; ``None`` leaves it unchecked.
    """

    degeneracies: tuple[int, ...] = ()
    faces: tuple[int, ...] = ()
    dim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "degeneracies", tuple(int(j) for j in self.degeneracies))
        object.__setattr__(self, "faces", tuple(int(i) for i in self.faces))
        d, f = self.degeneracies, self.faces
        if any(a <= b for a, b in zip(d, d[1:])):
            raise ValueError(f"degeneracies must be strictly decreasing: {d}")
        if any(a >= b for a, b in zip(f, f[1:])):
            raise ValueError(f"faces must be strictly increasing: {f}")
        if self.dim is not None:
            _target_dim(self.letters(), self.dim)

    @classmethod
    def from_letters(cls, letters: Sequence[Letter], dim: int | None = None) -> "OperatorWord":
        if dim is not None:
            _target_dim(letters, dim)
        degs, faces = _normalize(letters)
        return cls(degs, faces, dim)

    @classmethod
    def face(cls, i: int, dim: int | None = None) -> "OperatorWord":
        return cls((), (i,), dim)

    @classmethod
    def degeneracy(cls, j: int, dim: int | None = None) -> "OperatorWord":
        return cls((j,), (), dim)

    def letters(self) -> list[Letter]:
        return [("s", j) for j in self.degeneracies] + [("d", i) for i in self.faces]

    @property
    def is_identity(self) -> bool:
        return not self.degeneracies and not self.faces

    @property
    def target_dim(self) -> int | None:
        if self.dim is None:
            return None
        return self.dim - len(self.faces) + len(self.degeneracies)

    def __str__(self) -> str:
        parts = [f"s{j}" for j in self.degeneracies] + [f"d{i}" for i in self.faces]
        return " ".join(parts) if parts else "id"


def compose_words(w1: OperatorWord, w2: OperatorWord) -> OperatorWord:
    """Normal form of ``w1 ∘ w2`` (``w2`` acts first)."""
    if w1.dim is not None and w2.dim is not None and w1.dim != w2.target_dim:
        raise DimensionError(
            f"cannot compose: left word acts on dim {w1.dim}, right word lands in dim {w2.target_dim}"
        )
    dim = w2.dim
    if dim is None and w1.dim is not None:
        # recover the source dimension from the left word
        dim = w1.dim + len(w2.faces) - len(w2.degeneracies)
    return OperatorWord.from_letters(w1.letters() + w2.letters(), dim)


# ---------------------------------------------------------------------------
# simplices and presentations


@dataclass(frozen=True, order=True)
class SimplexRef:
    """A possibly degenerate simplex ``s_{j1}...s_{jk} x`` with ``x`` nondegenerate."""

    base_dim: int
    base_id: int
    degeneracies: tuple[int, ...] = ()

    def __post_init__(self):
        d = tuple(self.degeneracies)
        object.__setattr__(self, "degeneracies", d)
        if any(a <= b for a, b in zip(d, d[1:])):
            raise ValueError(f"degeneracy word must be strictly decreasing: {d}")
        if d and d[0] > self.base_dim + len(d) - 1:
            raise DimensionError(f"degeneracy word {d} does not fit a {self.base_dim}-simplex")

    @property
    def dim(self) -> int:
        return self.base_dim + len(self.degeneracies)

    @property
    def base(self) -> Key:
        return (self.base_dim, self.base_id)

    @property
    def is_degenerate(self) -> bool:
        return bool(self.degeneracies)

    @classmethod
    def of(cls, key: Key) -> "SimplexRef":
        return cls(key[0], key[1])


def _total_degeneracy(dim: int) -> tuple[int, ...]:
    """Degeneracy word taking a vertex to its unique ``dim``-simplex."""
    return tuple(range(dim - 1, -1, -1))


@dataclass(frozen=True)
class PresentedSSet:
    """Nondegenerate simplices with labels and face tables.

    ``labels[n][k]`` names the ``k``-th nondegenerate ``n``-simplex and
    ``face_table[n][k]`` holds its ``n + 1`` faces (empty for vertices).
    """

    labels: tuple[tuple[str, ...], ...]
    face_table: tuple[tuple[tuple[SimplexRef, ...], ...], ...]
    max_dim: int = DEFAULT_MAX_DIM

    def __post_init__(self):
        labels = tuple(tuple(str(s) for s in level) for level in self.labels)
        faces = tuple(tuple(tuple(fs) for fs in level) for level in self.face_table)
        top = max(len(labels), len(faces)) - 1
        if top > self.max_dim:
            raise PresentationError(f"simplices in dim {top} exceed max_dim {self.max_dim}")
        size = self.max_dim + 1
        labels = labels + ((),) * (size - len(labels))
        faces = faces + ((),) * (size - len(faces))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "face_table", faces)
        seen: set[str] = set()
        for n in range(size):
            if len(labels[n]) != len(faces[n]):
                raise PresentationError(f"dim {n}: {len(labels[n])} labels but {len(faces[n])} face rows")
            for k, fs in enumerate(faces[n]):
                lab = labels[n][k]
                if lab in seen:
                    raise PresentationError(f"duplicate label {lab!r}")
                seen.add(lab)
                if len(fs) != (n + 1 if n > 0 else 0):
                    raise PresentationError(f"{lab!r}: expected {n + 1 if n else 0} faces, got {len(fs)}")
                for i, f in enumerate(fs):
                    if not isinstance(f, SimplexRef):
                        raise PresentationError(f"{lab!r}: face {i} is not a SimplexRef")
                    if f.dim != n - 1:
                        raise PresentationError(f"{lab!r}: face {i} has dim {f.dim}, expected {n - 1}")
                    if not 0 <= f.base_id < len(faces[f.base_dim]):
                        raise PresentationError(f"{lab!r}: face {i} points at missing simplex {f.base}")

    # -- bookkeeping ---------------------------------------------------------

    def count(self, n: int) -> int:
        return len(self.labels[n]) if 0 <= n <= self.max_dim else 0

    def keys(self, n: int | None = None) -> list[Key]:
        if n is not None:
            return [(n, k) for k in range(self.count(n))]
        return [(m, k) for m in range(self.max_dim + 1) for k in range(self.count(m))]

    @property
    def top_dim(self) -> int:
        """Largest dimension that carries a nondegenerate simplex (-1 if empty)."""
        dims = [n for n in range(self.max_dim + 1) if self.count(n)]
        return max(dims) if dims else -1

    def label(self, key: Key | SimplexRef) -> str:
        if isinstance(key, SimplexRef):
            base = self.labels[key.base_dim][key.base_id]
            if not key.degeneracies:
                return base
            return "".join(f"s{j}" for j in key.degeneracies) + f"({base})"
        return self.labels[key[0]][key[1]]

    @cached_property
    def _by_label(self) -> dict[str, Key]:
        return {lab: (n, k) for n, level in enumerate(self.labels) for k, lab in enumerate(level)}

    def key_of(self, label: str) -> Key:
        try:
            return self._by_label[label]
        except KeyError:
            raise PresentationError(f"no simplex labelled {label!r}") from None

    def ref(self, label: str) -> SimplexRef:
        return SimplexRef.of(self.key_of(label))

    def faces_of(self, key: Key) -> tuple[SimplexRef, ...]:
        return self.face_table[key[0]][key[1]]

    def has_key(self, key: Key) -> bool:
        n, k = key
        return 0 <= n <= self.max_dim and 0 <= k < self.count(n)

    # -- operator evaluation -------------------------------------------------

    def apply(self, word: OperatorWord, ref: SimplexRef) -> SimplexRef:
        """Evaluate ``word`` on ``ref``; the result is again in normal form."""
        letters = word.letters() + [("s", j) for j in ref.degeneracies]
        _target_dim(letters, ref.base_dim)
        base = ref.base
        while True:
            degs, faces = _normalize(letters)
            if not faces:
                return SimplexRef(base[0], base[1], degs)
            f = self.face_table[base[0]][base[1]][faces[-1]]
            base = f.base
            letters = [("s", j) for j in degs] + [("d", i) for i in faces[:-1]]
            letters += [("s", j) for j in f.degeneracies]

    def face(self, ref: SimplexRef | Key, i: int) -> SimplexRef:
        if not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        return self.apply(OperatorWord.face(i), ref)

    def degeneracy(self, ref: SimplexRef | Key, j: int) -> SimplexRef:
        if not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        return self.apply(OperatorWord.degeneracy(j), ref)

    def spine(self, ref: SimplexRef | Key) -> list[SimplexRef]:
        """The edges between consecutive vertices ``k-1, k`` of an n-simplex."""
        if not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        n = ref.dim
        out = []
        for k in range(1, n + 1):
            word = OperatorWord((), tuple(i for i in range(n + 1) if i not in (k - 1, k)))
            out.append(self.apply(word, ref))
        return out

    def vertices(self, ref: SimplexRef | Key) -> list[SimplexRef]:
        if not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        n = ref.dim
        return [
            self.apply(OperatorWord((), tuple(i for i in range(n + 1) if i != k)), ref)
            for k in range(n + 1)
        ]

    @cached_property
    def generating(self) -> tuple[Key, ...]:
        """Nondegenerate simplices that are not a face of another nondegenerate simplex."""
        covered: set[Key] = set()
        for n in range(1, self.max_dim + 1):
            for fs in self.face_table[n]:
                covered.update(f.base for f in fs)
        return tuple(k for k in self.keys() if k not in covered)

    def describe(self) -> dict:
        return {"counts": [self.count(n) for n in range(self.max_dim + 1)], "max_dim": self.max_dim}


# ---------------------------------------------------------------------------
# construction helpers

FaceSpec = Union[str, tuple[Sequence[int], str]]


def from_tables(levels: Sequence[Mapping[str, Sequence[FaceSpec]]], max_dim: int | None = None) -> PresentedSSet:
    """Build a presentation from per-dimension ``{label: faces}`` tables.

    A face is either a label or ``(degeneracy word, base label)``.  Level 0
    maps vertex labels to empty sequences.
    """
    levels = [dict(level) for level in levels]
    if max_dim is None:
        max_dim = max(DEFAULT_MAX_DIM, len(levels) - 1)
    index: dict[str, Key] = {}
    for n, level in enumerate(levels):
        for k, lab in enumerate(level):
            if lab in index:
                raise PresentationError(f"duplicate label {lab!r}")
            index[lab] = (n, k)

    def resolve(spec: FaceSpec) -> SimplexRef:
        if isinstance(spec, str):
            degs, lab = (), spec
        else:
            degs, lab = tuple(spec[0]), spec[1]
        if lab not in index:
            raise PresentationError(f"unknown face label {lab!r}")
        n, k = index[lab]
        return SimplexRef(n, k, tuple(degs))

    labels = [tuple(level) for level in levels]
    faces = [tuple(tuple(resolve(s) for s in level[lab]) for lab in level) for level in levels]
    return PresentedSSet(tuple(labels), tuple(faces), max_dim)


def from_ordered_complex(simplices: Mapping[str, Sequence[str]], max_dim: int | None = None) -> PresentedSSet:
    """Build a presentation from simplices given by ordered vertex tuples.

    Missing faces are added automatically and labelled by their joined
    vertex names.
    """
    by_vertices: dict[tuple[str, ...], str] = {}
    for lab, vs in simplices.items():
        vs = tuple(vs)
        if len(set(vs)) != len(vs):
            raise PresentationError(f"{lab!r}: repeated vertex")
        by_vertices[vs] = lab
    pending = list(by_vertices)
    while pending:
        vs = pending.pop()
        if len(vs) < 2:
            continue
        for i in range(len(vs)):
            f = vs[:i] + vs[i + 1 :]
            if f not in by_vertices:
                by_vertices[f] = "".join(f)
                pending.append(f)
    top = max(len(vs) for vs in by_vertices) - 1
    levels: list[dict[str, list[str]]] = [dict() for _ in range(top + 1)]
    for vs in sorted(by_vertices, key=lambda t: (len(t), t)):
        n = len(vs) - 1
        levels[n][by_vertices[vs]] = [by_vertices[vs[:i] + vs[i + 1 :]] for i in range(n + 1)] if n else []
    return from_tables(levels, max_dim)


def disjoint_union(*parts: tuple[str, PresentedSSet]) -> PresentedSSet:
    """Disjoint union; each part's labels are prefixed with ``prefix``."""
    max_dim = max(X.max_dim for _, X in parts)
    labels: list[list[str]] = [[] for _ in range(max_dim + 1)]
    faces: list[list[tuple[SimplexRef, ...]]] = [[] for _ in range(max_dim + 1)]
    offsets = [0] * (max_dim + 1)
    for prefix, X in parts:
        for n in range(X.max_dim + 1):
            for k in range(X.count(n)):
                labels[n].append(prefix + X.labels[n][k])
                faces[n].append(
                    tuple(SimplexRef(f.base_dim, f.base_id + offsets[f.base_dim], f.degeneracies) for f in X.face_table[n][k])
                )
        for n in range(X.max_dim + 1):
            offsets[n] += X.count(n)
    return PresentedSSet(tuple(map(tuple, labels)), tuple(map(tuple, faces)), max_dim)


def relabel(X: PresentedSSet, mapping: Mapping[str, str] | None = None, *, vertex_prefix: str | None = None) -> PresentedSSet:
    """Rename simplices; optionally rename all vertices to ``prefix0, prefix1, ...``."""
    mapping = dict(mapping or {})
    labels = []
    for n in range(X.max_dim + 1):
        level = []
        for k, lab in enumerate(X.labels[n]):
            if n == 0 and vertex_prefix is not None and lab not in mapping:
                level.append(f"{vertex_prefix}{k}")
            else:
                level.append(mapping.get(lab, lab))
        labels.append(tuple(level))
    return PresentedSSet(tuple(labels), X.face_table, X.max_dim)


def with_max_dim(X: PresentedSSet, max_dim: int) -> PresentedSSet:
    return PresentedSSet(X.labels[: max_dim + 1], X.face_table[: max_dim + 1], max_dim)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    simplex: str
    i: int
    j: int
    lhs: str
    rhs: str

    def as_dict(self) -> dict:
        return {"simplex": self.simplex, "i": self.i, "j": self.j, "lhs": self.lhs, "rhs": self.rhs}


def validate(X: PresentedSSet) -> list[Violation]:
    """Every violated instance of ``d_i d_j = d_{j-1} d_i`` (i < j)."""
    out = []
    for n in range(2, X.max_dim + 1):
        for key in X.keys(n):
            for j in range(1, n + 1):
                dj = X.face(key, j)
                for i in range(j):
                    lhs = X.face(dj, i)
                    rhs = X.face(X.face(key, i), j - 1)
                    if lhs != rhs:
                        out.append(Violation(X.label(key), i, j, X.label(lhs), X.label(rhs)))
    return out


# ---------------------------------------------------------------------------
# maps and subspaces


@dataclass(frozen=True)
class SpaceMap:
    """A simplicial map given on nondegenerate simplices of ``source``."""

    source: PresentedSSet
    target: PresentedSSet
    assignment: Mapping[Key, SimplexRef]

    def __call__(self, ref: SimplexRef | Key) -> SimplexRef:
        if not isinstance(ref, SimplexRef):
            ref = SimplexRef.of(ref)
        image = self.assignment[ref.base]
        if not ref.degeneracies:
            return image
        return self.target.apply(OperatorWord(ref.degeneracies), image)

    def violations(self) -> list[tuple[str, int]]:
        bad = []
        for key in self.source.keys():
            for i in range(key[0] + 1 if key[0] else 0):
                if self.target.face(self(key), i) != self(self.source.face(key, i)):
                    bad.append((self.source.label(key), i))
        return bad

    def compose(self, other: "SpaceMap") -> "SpaceMap":
        """``self ∘ other``."""
        return SpaceMap(other.source, self.target, {k: self(v) for k, v in other.assignment.items()})

    @classmethod
    def identity(cls, X: PresentedSSet) -> "SpaceMap":
        return cls(X, X, {k: SimplexRef.of(k) for k in X.keys()})


@dataclass(frozen=True)
class Subspace:
    """A face-closed set of nondegenerate simplices of ``ambient``.

    ``space`` is its own presentation; ``embedding[n][z]`` is the ambient id
    of the ``z``-th ``n``-simplex of ``space``.
    """

    ambient: PresentedSSet
    space: PresentedSSet
    embedding: tuple[tuple[int, ...], ...]

    @cached_property
    def keys(self) -> frozenset[Key]:
        return frozenset((n, x) for n, ids in enumerate(self.embedding) for x in ids)

    @cached_property
    def _back(self) -> dict[Key, Key]:
        return {(n, x): (n, z) for n, ids in enumerate(self.embedding) for z, x in enumerate(ids)}

    def to_ambient(self, key: Key) -> Key:
        return (key[0], self.embedding[key[0]][key[1]])

    def from_ambient(self, key: Key) -> Key | None:
        return self._back.get(key)

    def __contains__(self, key: Key) -> bool:
        return key in self._back

    @cached_property
    def inclusion(self) -> SpaceMap:
        return SpaceMap(self.space, self.ambient, {k: SimplexRef.of(self.to_ambient(k)) for k in self.space.keys()})


def _as_key(X: PresentedSSet, g) -> Key:
    if isinstance(g, str):
        return X.key_of(g)
    if isinstance(g, SimplexRef):
        key = g.base
    else:
        key = (int(g[0]), int(g[1]))
    if not X.has_key(key):
        raise PresentationError(f"dangling simplex reference {key}")
    return key


def subspace(X: PresentedSSet, generators: Iterable) -> Subspace:
    """Face closure of the given simplices (labels, keys or refs)."""
    closed: set[Key] = set()
    stack = [_as_key(X, g) for g in generators]
    while stack:
        key = stack.pop()
        if key in closed:
            continue
        closed.add(key)
        stack.extend(f.base for f in X.faces_of(key))
    embedding = tuple(tuple(sorted(k for m, k in closed if m == n)) for n in range(X.max_dim + 1))
    back = {(n, x): z for n, ids in enumerate(embedding) for z, x in enumerate(ids)}
    labels = tuple(tuple(X.labels[n][x] for x in ids) for n, ids in enumerate(embedding))
    faces = tuple(
        tuple(
            tuple(SimplexRef(f.base_dim, back[f.base], f.degeneracies) for f in X.face_table[n][x])
            for x in ids
        )
        for n, ids in enumerate(embedding)
    )
    return Subspace(X, PresentedSSet(labels, faces, X.max_dim), embedding)


def subspace_from_map(X: PresentedSSet, Z: PresentedSSet, by_label: bool = True) -> Subspace:
    """Identify ``Z`` with a subspace of ``X`` by matching labels, checking faces agree."""
    sub = subspace(X, [X.key_of(lab) for level in Z.labels for lab in level])
    if [len(ids) for ids in sub.embedding] != [Z.count(n) for n in range(Z.max_dim + 1)][: len(sub.embedding)]:
        raise PresentationError("the labelled simplices of the source do not form a face-closed copy inside the target")
    f = SpaceMap(Z, X, {k: X.ref(Z.label(k)) for k in Z.keys()})
    if f.violations():
        raise PresentationError("label matching does not define a simplicial map")
    # re-present with Z's own ids so distributions on Z can be used directly
    embedding = tuple(tuple(X.key_of(Z.labels[n][z])[1] for z in range(Z.count(n))) for n in range(Z.max_dim + 1))
    return Subspace(X, Z, embedding)


# ---------------------------------------------------------------------------
# gluing and quotients


def glue(X: PresentedSSet, pairs: Iterable[tuple[SimplexRef | Key | str, SimplexRef | Key | str]]) -> PresentedSSet:
    """Identify pairs of simplices together with all their iterated faces."""

    def as_ref(g) -> SimplexRef:
        if isinstance(g, SimplexRef):
            if not X.has_key(g.base):
                raise PresentationError(f"dangling simplex reference {g}")
            return g
        return SimplexRef.of(_as_key(X, g))

    parent: dict[Key, Key] = {}

    def find(k: Key) -> Key:
        root = k
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(k, k) != root:
            parent[k], k = root, parent[k]
        return root

    stack = [(as_ref(a), as_ref(b)) for a, b in pairs]
    while stack:
        a, b = stack.pop()
        if a.dim != b.dim:
            raise PresentationError(f"cannot identify simplices of dims {a.dim} and {b.dim}")
        if a.degeneracies != b.degeneracies or a.base_dim != b.base_dim:
            raise PresentationError(
                "identification would collapse a nondegenerate simplex onto a degenerate one; use quotient instead"
            )
        ra, rb = find(a.base), find(b.base)
        if ra == rb:
            continue
        lo, hi = min(ra, rb), max(ra, rb)
        parent[hi] = lo
        stack.extend(zip(X.faces_of(a.base), X.faces_of(b.base)))

    new_id: dict[Key, int] = {}
    labels, faces = [], []
    for n in range(X.max_dim + 1):
        roots = [k for k in X.keys(n) if find(k) == k]
        for idx, r in enumerate(roots):
            new_id[r] = idx
        labels.append(tuple(X.label(r) for r in roots))
    for n in range(X.max_dim + 1):
        roots = [k for k in X.keys(n) if find(k) == k]
        faces.append(
            tuple(
                tuple(SimplexRef(f.base_dim, new_id[find(f.base)], f.degeneracies) for f in X.faces_of(r))
                for r in roots
            )
        )
    return PresentedSSet(tuple(labels), tuple(faces), X.max_dim)


STAR = "*"


def quotient(X: PresentedSSet, Z: Subspace | Iterable) -> tuple[PresentedSSet, SpaceMap]:
    """Collapse the subspace ``Z`` to a single vertex ``*``.

    Returns the quotient presentation and the projection map.  The basepoint
    is vertex 0; simplices of ``X`` outside ``Z`` keep their relative order.
    """
    if isinstance(Z, Subspace):
        if Z.ambient != X:
            raise PresentationError("subspace belongs to a different space")
        zkeys = set(Z.keys)
    else:
        zkeys = set()
        for g in Z:
            if isinstance(g, str):
                zkeys.add(X.key_of(g))
            else:
                key = g.base if isinstance(g, SimplexRef) else (int(g[0]), int(g[1]))
                if not X.has_key(key):
                    raise PresentationError(f"subspace contains {key}, which is not a simplex of the space")
                zkeys.add(key)
    if not zkeys:
        raise PresentationError("cannot collapse an empty subspace")
    for key in zkeys:
        for f in X.faces_of(key):
            if f.base not in zkeys:
                raise PresentationError(f"subspace is not face-closed: {X.label(key)} has face {X.label(f)} outside it")
    if STAR in X._by_label:
        raise PresentationError(f"label {STAR!r} is reserved for the basepoint")

    new_id: dict[Key, int] = {}
    labels: list[tuple[str, ...]] = []
    for n in range(X.max_dim + 1):
        kept = [k for k in X.keys(n) if k not in zkeys]
        offset = 1 if n == 0 else 0
        for idx, k in enumerate(kept):
            new_id[k] = idx + offset
        labels.append(((STAR,) if n == 0 else ()) + tuple(X.label(k) for k in kept))

    def image(f: SimplexRef) -> SimplexRef:
        if f.base in zkeys:
            return SimplexRef(0, 0, _total_degeneracy(f.dim))
        return SimplexRef(f.base_dim, new_id[f.base], f.degeneracies)

    faces: list[tuple[tuple[SimplexRef, ...], ...]] = []
    for n in range(X.max_dim + 1):
        rows = [()] if n == 0 else []
        rows += [tuple(image(f) for f in X.faces_of(k)) for k in X.keys(n) if k not in zkeys]
        faces.append(tuple(rows))
    Xbar = PresentedSSet(tuple(labels), tuple(faces), X.max_dim)
    q = SpaceMap(X, Xbar, {k: image(SimplexRef.of(k)) for k in X.keys()})
    return Xbar, q
