"""Pauli observables, spectral projectors and Born-rule distributions, exactly.

All matrices have Gaussian-rational entries (``a + b i`` with ``a, b`` in Q),
so projectors, traces and verdicts involve no rounding.  Only two-outcome
(involutive) observables are supported.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .cohomology import WitnessResult, cl_witness
from .contextuality import ContextualityVerdict, StrongVerdict, is_noncontextual, is_strongly_contextual
from .errors import DistributionError, PresentationError
from .outcomes import Distribution, Nerve, SimplicialDistribution
from .simpdist import Assignment, enumerate_deterministic
from .sset import Key, PresentedSSet, Subspace

Q = Fraction


class GaussianRational:
    """``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Q(re)
        self.im = Q(im)

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            raise TypeError("floating-point complex numbers are not exact")
        if isinstance(v, tuple):
            return cls(*v)
        if isinstance(v, str):
            return parse_gaussian(v)
        return cls(v)

    def __add__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussianRational.coerce(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.coerce(o)
        n = o.re * o.re + o.im * o.im
        if not n:
            raise ZeroDivisionError("division by zero")
        return self * GaussianRational(o.re / n, -o.im / n)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        try:
            o = GaussianRational.coerce(o)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


def parse_gaussian(text: str) -> GaussianRational:
    """``"1/2"``, ``"-i"``, ``"1/2+1/3i"``."""
    s = text.replace(" ", "")
    if not s.endswith("i"):
        return GaussianRational(Q(s))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    while cut > 0 and body[cut - 1] == "/":  # pragma: no cover - malformed
        cut = max(body.rfind("+", 0, cut), body.rfind("-", 0, cut))
    re, im = (body[:cut], body[cut:]) if cut > 0 else ("0", body)
    if im in ("", "+"):
        im = "1"
    elif im == "-":
        im = "-1"
    return GaussianRational(Q(re), Q(im))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I_UNIT = GaussianRational(0, 1)


@dataclass(frozen=True)
class Matrix:
    """Square Gaussian-rational matrix."""

    rows: tuple[tuple[GaussianRational, ...], ...]

    @classmethod
    def of(cls, rows: Iterable[Iterable]) -> "Matrix":
        rows = tuple(tuple(GaussianRational.coerce(v) for v in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("matrix must be square")
        return cls(rows)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "Matrix":
        return cls(tuple(tuple(ZERO for _ in range(n)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.rows)

    def __matmul__(self, o: "Matrix") -> "Matrix":
        cols = list(zip(*o.rows))
        out = []
        for r in self.rows:
            out.append(tuple(reduce(lambda acc, ab: acc + ab[0] * ab[1] if ab[0] and ab[1] else acc, zip(r, c), ZERO) for c in cols))
        return Matrix(tuple(out))

    def __add__(self, o: "Matrix") -> "Matrix":
        return Matrix(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, o.rows)))

    def __sub__(self, o: "Matrix") -> "Matrix":
        return Matrix(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, o.rows)))

    def scale(self, c) -> "Matrix":
        c = GaussianRational.coerce(c)
        return Matrix(tuple(tuple(c * a for a in r) for r in self.rows))

    def dagger(self) -> "Matrix":
        return Matrix(tuple(tuple(self.rows[j][i].conjugate() for j in range(self.n)) for i in range(self.n)))

    def trace(self) -> GaussianRational:
        return reduce(lambda a, b: a + b, (self.rows[i][i] for i in range(self.n)), ZERO)

    def kron(self, o: "Matrix") -> "Matrix":
        return Matrix(tuple(
            tuple(a * b for a in r for b in s)
            for r in self.rows for s in o.rows
        ))

    def is_hermitian(self) -> bool:
        return self == self.dagger()

    def is_zero(self) -> bool:
        return not any(v for r in self.rows for v in r)


def determinant(M: Matrix) -> GaussianRational:
    """Gaussian elimination over Q(i)."""
    A = [list(r) for r in M.rows]
    n = len(A)
    det = ONE
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        for r in range(c + 1, n):
            if A[r][c]:
                f = A[r][c] / A[c][c]
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det


def is_psd(M: Matrix) -> bool:
    """Hermitian with every principal minor nonnegative (exact, exponential in size)."""
    if not M.is_hermitian():
        return False
    for k in range(1, M.n + 1):
        for idx in combinations(range(M.n), k):
            sub = Matrix(tuple(tuple(M.rows[i][j] for j in idx) for i in idx))
            d = determinant(sub)
            if d.im or d.re < 0:
                return False
    return True


# ---------------------------------------------------------------------------
# Pauli algebra

_SINGLE = {
    "I": ((1, 0), (0, 1)),
    "X": ((0, 1), (1, 0)),
    "Y": ((0, GaussianRational(0, -1)), (GaussianRational(0, 1), 0)),
    "Z": ((1, 0), (0, -1)),
}
# a*b = i^k c
_PRODUCT = {
    ("X", "Y"): (1, "Z"), ("Y", "Z"): (1, "X"), ("Z", "X"): (1, "Y"),
    ("Y", "X"): (3, "Z"), ("Z", "Y"): (3, "X"), ("X", "Z"): (3, "Y"),
}


@dataclass(frozen=True, order=True)
class Pauli:
    """``i^phase`` times a tensor word over I, X, Y, Z (qubit 0 leftmost)."""

    word: str
    phase: int = 0

    def __post_init__(self):
        if not self.word or any(c not in "IXYZ" for c in self.word):
            raise ValueError(f"bad Pauli word {self.word!r}")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def parse(cls, text: str) -> "Pauli":
        """``"XZ"``, ``"+IZ"``, ``"-YY"``."""
        s = text.strip()
        phase = 0
        if s[:1] in "+-":
            phase = 2 if s[0] == "-" else 0
            s = s[1:]
        return cls(s, phase)

    @classmethod
    def identity(cls, n: int) -> "Pauli":
        return cls("I" * n)

    @property
    def qubits(self) -> int:
        return len(self.word)

    @property
    def sign(self) -> int:
        if self.phase % 2:
            raise ValueError("non-Hermitian Pauli has no sign")
        return 1 if self.phase == 0 else -1

    @property
    def hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def is_identity_up_to_sign(self) -> bool:
        return set(self.word) == {"I"}

    def __mul__(self, o: "Pauli") -> "Pauli":
        if self.qubits != o.qubits:
            raise ValueError("Pauli words of different length")
        k = self.phase + o.phase
        out = []
        for a, b in zip(self.word, o.word):
            if a == "I":
                out.append(b)
            elif b == "I":
                out.append(a)
            elif a == b:
                out.append("I")
            else:
                dk, c = _PRODUCT[(a, b)]
                k += dk
                out.append(c)
        return Pauli("".join(out), k)

    def commutes(self, o: "Pauli") -> bool:
        anti = sum(1 for a, b in zip(self.word, o.word) if a != "I" and b != "I" and a != b)
        return anti % 2 == 0

    def matrix(self) -> Matrix:
        m = reduce(lambda acc, c: acc.kron(Matrix.of(_SINGLE[c])), self.word[1:], Matrix.of(_SINGLE[self.word[0]]))
        return m.scale((ONE, I_UNIT, -ONE, -I_UNIT)[self.phase])

    def __str__(self):
        return ("", "i", "-", "-i")[self.phase] + self.word


# ---------------------------------------------------------------------------
# projective measurements


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Outcome tuple to projector."""

    projectors: Mapping[tuple[int, ...], Matrix]

    def violations(self) -> list[str]:
        out = []
        items = list(self.projectors.items())
        n = items[0][1].n
        total = reduce(lambda a, b: a + b, (P for _, P in items), Matrix.zeros(n))
        if total != Matrix.identity(n):
            out.append("projectors do not sum to the identity")
        for a, P in items:
            if not P.is_hermitian() or P @ P != P:
                out.append(f"{a}: not an orthogonal projector")
        for (a, P), (b, R) in combinations(items, 2):
            if not (P @ R).is_zero():
                out.append(f"{a} and {b} are not orthogonal")
        return out


def spec_iso(observables: Sequence[Pauli]) -> ProjectiveMeasurement:
    """Joint eigenprojectors ``Π(a) = ∏ (1 + (-1)^{a_i} A_i)/2`` of commuting involutions."""
    obs = list(observables)
    for A, B in combinations(obs, 2):
        if not A.commutes(B):
            raise ValueError(f"{A} and {B} do not commute")
    for A in obs:
        if not A.hermitian:
            raise ValueError(f"{A} is not an involution")
    if not obs:
        raise ValueError("empty tuple; the vertex measurement is the identity")
    n = 2 ** obs[0].qubits
    Id = Matrix.identity(n)
    mats = [A.matrix() for A in obs]
    half = Q(1, 2)
    projs = {}
    for a in product((0, 1), repeat=len(obs)):
        P = Id
        for ai, M in zip(a, mats):
            P = P @ (Id + M.scale(-1 if ai else 1)).scale(half)
        projs[a] = P
    pm = ProjectiveMeasurement(projs)
    bad = pm.violations()
    if bad:  # pragma: no cover - impossible for commuting Paulis
        raise AssertionError("; ".join(bad))
    return pm


def spec_inverse(pm: ProjectiveMeasurement) -> list[Matrix]:
    """``A_i = sum_a (-1)^{a_i} Π(a)``."""
    k = len(next(iter(pm.projectors)))
    n = next(iter(pm.projectors.values())).n
    out = []
    for i in range(k):
        acc = Matrix.zeros(n)
        for a, P in pm.projectors.items():
            acc = acc + P.scale(-1 if a[i] else 1)
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# states


@dataclass(frozen=True)
class DensityMatrix:
    matrix: Matrix

    def violations(self) -> list[str]:
        out = []
        if not self.matrix.is_hermitian():
            out.append("not Hermitian")
        if self.matrix.trace() != ONE:
            out.append(f"trace is {self.matrix.trace()}, not 1")
        if not out and not is_psd(self.matrix):
            out.append("not positive semidefinite")
        return out

    @classmethod
    def of(cls, rows) -> "DensityMatrix":
        rho = cls(rows if isinstance(rows, Matrix) else Matrix.of(rows))
        bad = rho.violations()
        if bad:
            raise DistributionError("invalid density matrix: " + "; ".join(bad))
        return rho

    @property
    def qubits(self) -> int:
        return self.matrix.n.bit_length() - 1


def pure_state(vector: Sequence) -> DensityMatrix:
    """``|v><v| / <v|v>`` for a Gaussian-rational vector."""
    v = [GaussianRational.coerce(x) for x in vector]
    norm = reduce(lambda a, b: a + b, (x * x.conjugate() for x in v), ZERO)
    rows = [[a * b.conjugate() / norm for b in v] for a in v]
    return DensityMatrix.of(rows)


def bell_phi_plus() -> DensityMatrix:
    """(|00> + |11>)/√2."""
    return pure_state([1, 0, 0, 1])


def ghz3() -> DensityMatrix:
    return pure_state([1, 0, 0, 0, 0, 0, 0, 1])


def maximally_mixed(n: int) -> DensityMatrix:
    N = 2 ** n
    return DensityMatrix.of(Matrix.identity(N).scale(Q(1, N)))


STATES = {"bell_phi_plus": bell_phi_plus, "ghz3": ghz3, "maximally_mixed": maximally_mixed}


def state(name: str, **params) -> DensityMatrix:
    if name not in STATES:
        raise KeyError(f"unknown state {name!r}; known: {sorted(STATES)}")
    return STATES[name](**params)


# ---------------------------------------------------------------------------
# assignments of commuting tuples


def _face_tuple(t: tuple[Pauli, ...], i: int) -> tuple[Pauli, ...]:
    n = len(t)
    if i == 0:
        return t[1:]
    if i == n:
        return t[:-1]
    return t[: i - 1] + (t[i - 1] * t[i],) + t[i + 1:]


def _degeneracy_tuple(t: tuple[Pauli, ...], j: int, qubits: int) -> tuple[Pauli, ...]:
    return t[:j] + (Pauli.identity(qubits),) + t[j:]


@dataclass(frozen=True)
class CommutingTupleAssignment:
    """Nondegenerate simplex to a tuple of commuting Pauli involutions."""

    space: PresentedSSet
    table: Mapping[Key, tuple[Pauli, ...]]
    qubits: int

    @classmethod
    def from_edges(cls, X: PresentedSSet, edges: Mapping[str, Pauli | str] | None = None) -> "CommutingTupleAssignment":
        """Tuples read off spines; ``edges`` defaults to parsing each edge label."""
        obs = {}
        for key in X.keys(1):
            lab = X.label(key)
            v = edges[lab] if edges is not None else lab
            obs[key] = v if isinstance(v, Pauli) else Pauli.parse(v)
        sizes = {p.qubits for p in obs.values()}
        if len(sizes) != 1:
            raise PresentationError("observables act on different numbers of qubits")
        q = sizes.pop()
        table = {}
        for key in X.keys():
            if key[0] == 0:
                table[key] = ()
                continue
            table[key] = tuple(Pauli.identity(q) if e.is_degenerate else obs[e.base] for e in X.spine(key))
        return cls(X, table, q)

    def tuple_at(self, ref) -> tuple[Pauli, ...]:
        t = self.table[ref.base]
        for j in reversed(ref.degeneracies):  # rightmost acts first
            t = _degeneracy_tuple(t, j, self.qubits)
        return t

    def __getitem__(self, label: str) -> tuple[Pauli, ...]:
        return self.table[self.space.key_of(label)]


def validate_assignment(A: CommutingTupleAssignment) -> list[str]:
    """Empty iff each tuple commutes pairwise and faces multiply adjacent entries."""
    X = A.space
    out = []
    for key, t in A.table.items():
        lab = X.label(key)
        if len(t) != key[0]:
            out.append(f"{lab}: tuple of length {len(t)} on a {key[0]}-simplex")
            continue
        for P in t:
            if not P.hermitian or P.qubits != A.qubits:
                out.append(f"{lab}: {P} is not an involution on {A.qubits} qubits")
        for P, R in combinations(t, 2):
            if not P.commutes(R):
                out.append(f"{lab}: {P} and {R} do not commute")
        for i, f in enumerate(X.faces_of(key)) if key[0] else ():
            want = _face_tuple(t, i)
            got = A.tuple_at(f)
            if want != got:
                out.append(
                    f"{lab}: face {i} should be ({', '.join(map(str, want))}) but {X.label(f)} carries ({', '.join(map(str, got))})"
                )
    return out


def _trace_product(rho: Matrix, P: Matrix) -> GaussianRational:
    return reduce(lambda acc, ij: acc + rho.rows[ij[0]][ij[1]] * P.rows[ij[1]][ij[0]],
                  ((i, j) for i in range(rho.n) for j in range(rho.n)), ZERO)


def born(A: CommutingTupleAssignment, rho: DensityMatrix) -> SimplicialDistribution:
    """``p_σ(a) = Tr(ρ Π_σ(a))``."""
    bad = validate_assignment(A)
    if bad:
        raise PresentationError("invalid assignment: " + "; ".join(bad))
    if rho.matrix.n != 2 ** A.qubits:
        raise DistributionError("state and observables act on different spaces")
    cache: dict[tuple[Pauli, ...], Distribution] = {}
    table = {}
    for key, t in A.table.items():
        if not t:
            table[key] = Distribution.delta(())
            continue
        if t not in cache:
            weights = {}
            for a, P in spec_iso(t).projectors.items():
                v = _trace_product(rho.matrix, P)
                if v.im or v.re < 0:  # pragma: no cover - ρ is PSD
                    raise DistributionError(f"Born weight {v} is not a probability")
                weights[a] = v.re
            cache[t] = Distribution.of(weights)
        table[key] = cache[t]
    return SimplicialDistribution(A.space, Nerve(2), table)


@dataclass(frozen=True)
class StateVerdict:
    distribution: SimplicialDistribution
    lp: ContextualityVerdict
    strong: StrongVerdict

    @property
    def contextual(self) -> bool:
        return not self.lp.noncontextual


def is_state_contextual(A: CommutingTupleAssignment, rho: DensityMatrix) -> StateVerdict:
    p = born(A, rho)
    return StateVerdict(p, is_noncontextual(p), is_strongly_contextual(p))


@dataclass(frozen=True)
class MeasurementVerdict:
    witness: WitnessResult | None
    state_independent_loop: bool
    strong_on_states: tuple[bool, ...]

    @property
    def proven_for_all_states(self) -> bool:
        """True only when the witness covers every state (sampling is never a proof)."""
        return bool(self.witness and self.witness.verdict == "strongly-contextual" and self.state_independent_loop)


def is_measurement_contextual(A: CommutingTupleAssignment, states: Sequence[DensityMatrix], loop: Subspace | None = None) -> MeasurementVerdict:
    """Strong test on the given states, plus the cohomological witness on ``loop``.

    The witness proves contextuality for every state when each observable on
    the loop is ``±1``, since then the loop's distribution does not depend on
    the state.
    """
    strong = tuple(is_strongly_contextual(born(A, rho)).strongly_contextual for rho in states)
    if loop is None:
        return MeasurementVerdict(None, False, strong)
    indep = all(P.is_identity_up_to_sign for k in loop.keys if k[0] > 0 for P in A.table[k])
    rho = states[0] if states else maximally_mixed(A.qubits)
    return MeasurementVerdict(cl_witness(born(A, rho), loop), indep, strong)


def value_assignment_exists(A: CommutingTupleAssignment, constraints: Mapping[str, int] | None = None) -> Assignment | None:
    """An outcome assignment compatible with products along every simplex, if any."""
    sols = enumerate_deterministic(A.space, 2, constraints)
    return sols[0] if sols else None


# ---------------------------------------------------------------------------
# fixtures

MERMIN_STAR = (
    ("XXX", "XYY", "YXY", "YYX"),  # product of the last three is -XXX
)
"""GHZ-type contexts on three qubits; the space must be supplied by the caller."""


def mermin_star_observables() -> list[Pauli]:
    return [Pauli.parse(w) for w in ("XXX", "XYY", "YXY", "YYX", "XII", "IXI", "IIX", "YII", "IYI", "IIY")]


def mermin_square_assignment(variant: str = "state_dep") -> CommutingTupleAssignment:
    """Builtin Mermin spaces with their edge labels read as observables."""
    from . import spaces

    builders = {
        "state_dep": spaces.mermin_square_state_dep,
        "state_indep": spaces.mermin_square_state_indep,
        "torus": spaces.mermin_square_torus,
    }
    if variant not in builders:
        raise KeyError(f"unknown Mermin variant {variant!r}")
    return CommutingTupleAssignment.from_edges(builders[variant]())
