import random
from fractions import Fraction as F
from itertools import product

import numpy as np
import pytest

from oracles import born_float, pauli_matrix_float
from simpctx import spaces as S
from simpctx.contextuality import is_contextual
from simpctx.errors import DistributionError, PresentationError
from simpctx.outcomes import Distribution, check_simplicial
from simpctx.quantum import (
    CommutingTupleAssignment,
    DensityMatrix,
    GaussianRational,
    Matrix,
    Pauli,
    bell_phi_plus,
    born,
    determinant,
    is_measurement_contextual,
    is_psd,
    is_state_contextual,
    maximally_mixed,
    mermin_square_assignment,
    parse_gaussian,
    pure_state,
    spec_inverse,
    spec_iso,
    validate_assignment,
    value_assignment_exists,
)

WORDS = ["".join(w) for w in product("IXYZ", repeat=2)]


def _to_numpy(M: Matrix) -> np.ndarray:
    return np.array([[float(v.re) + 1j * float(v.im) for v in r] for r in M.rows])


@pytest.mark.parametrize("a", WORDS)
@pytest.mark.parametrize("b", WORDS)
def test_pauli_product_matches_matrices(a, b):
    P, R = Pauli.parse(a), Pauli.parse(b)
    assert np.allclose(_to_numpy((P * R).matrix()), pauli_matrix_float(a) @ pauli_matrix_float(b))
    comm = pauli_matrix_float(a) @ pauli_matrix_float(b) - pauli_matrix_float(b) @ pauli_matrix_float(a)
    assert P.commutes(R) == np.allclose(comm, 0)


def test_pauli_signs():
    assert str(Pauli.parse("XX") * Pauli.parse("YY")) == "-ZZ"
    assert Pauli.parse("-II").is_identity_up_to_sign
    assert not (Pauli.parse("X") * Pauli.parse("Y")).hermitian


def test_gaussian_parse_and_arithmetic():
    z = parse_gaussian("1/2+1/3i")
    assert (z.re, z.im) == (F(1, 2), F(1, 3))
    assert parse_gaussian("-i") == GaussianRational(0, -1)
    assert z * z.conjugate() == GaussianRational(F(13, 36))
    with pytest.raises(TypeError):
        GaussianRational.coerce(1j)


def test_spec_iso_single_z():
    pm = spec_iso([Pauli.parse("Z")])
    assert pm.projectors[(0,)] == Matrix.of([[1, 0], [0, 0]])
    assert pm.projectors[(1,)] == Matrix.of([[0, 0], [0, 1]])


def test_spec_iso_matches_tensor_formula():
    pm = spec_iso([Pauli.parse("IX"), Pauli.parse("XI")])
    plus = np.array([[1, 1], [1, 1]]) / 2
    minus = np.array([[1, -1], [-1, 1]]) / 2
    proj = {0: plus, 1: minus}
    for (a, b), P in pm.projectors.items():
        assert np.allclose(_to_numpy(P), np.kron(proj[b], proj[a]))


@pytest.mark.parametrize("words", [["Z"], ["XX", "ZZ"], ["XI", "IX", "XX"], ["XZ", "ZX", "YY"]])
def test_spec_round_trip(words):
    obs = [Pauli.parse(w) for w in words]
    pm = spec_iso(obs)
    assert pm.violations() == []
    assert spec_inverse(pm) == [P.matrix() for P in obs]


def test_spec_iso_rejects_noncommuting():
    with pytest.raises(ValueError):
        spec_iso([Pauli.parse("X"), Pauli.parse("Z")])


def test_bell_state_on_local_z():
    A = CommutingTupleAssignment.from_edges(S.delta(2), {"01": "ZI", "12": "IZ", "02": "ZZ"})
    p = born(A, bell_phi_plus())
    assert p["012"] == Distribution.of({(0, 0): F(1, 2), (1, 1): F(1, 2)})


def _random_pure(rng, n):
    return pure_state([GaussianRational(rng.randint(-3, 3), rng.randint(-3, 3)) or 1 for _ in range(2 ** n)])


def test_born_matches_float_oracle(rng):
    A = mermin_square_assignment("state_dep")
    for _ in range(4):
        rho = _random_pure(rng, 2)
        p = born(A, rho)
        assert check_simplicial(p) == []
        R = _to_numpy(rho.matrix)
        for key, t in A.table.items():
            if not t:
                continue
            expect = born_float([str(P) for P in t], R)
            for a, w in expect.items():
                assert abs(float(p.table[key][a]) - w) < 1e-12


def test_maximally_mixed_is_uniform():
    A = mermin_square_assignment("state_dep")
    p = born(A, maximally_mixed(2))
    for key in A.space.keys(1):
        assert p.table[key] == Distribution.of({(0,): F(1, 2), (1,): F(1, 2)})


def test_psd_checks():
    assert is_psd(Matrix.of([[1, 0], [0, 0]]))
    assert not is_psd(Matrix.of([[1, 2], [2, 1]]))
    assert is_psd(Matrix.of([[1, "i"], ["-i", 1]]))
    assert determinant(Matrix.of([[1, 2], [3, 4]])) == GaussianRational(-2)
    with pytest.raises(DistributionError):
        DensityMatrix.of([[F(3, 2), 0], [0, F(-1, 2)]])


def test_psd_agrees_with_eigenvalues():
    rng = random.Random(9)
    for _ in range(40):
        a, c = rng.randint(-2, 3), rng.randint(-2, 3)
        b = GaussianRational(rng.randint(-2, 2), rng.randint(-2, 2))
        M = Matrix.of([[a, b], [b.conjugate(), c]])
        ev = np.linalg.eigvalsh(_to_numpy(M))
        assert is_psd(M) == bool(ev.min() >= -1e-12)


def test_mermin_state_dependent_contextual_on_bell():
    A = mermin_square_assignment("state_dep")
    v = is_state_contextual(A, bell_phi_plus())
    p = v.distribution
    # Bell state: XX and ZZ are +1, YY is -1
    assert p["XX"] == Distribution.delta((0,))
    assert p["ZZ"] == Distribution.delta((0,))
    assert p["YY"] == Distribution.delta((1,))
    assert v.contextual and v.strong.strongly_contextual
    assert is_contextual(p)


def test_mermin_state_independent_witness():
    A = mermin_square_assignment("state_indep")
    X = A.space
    loop = S.boundary(X, "mermin_square_state_indep")
    v = is_measurement_contextual(A, [maximally_mixed(2), bell_phi_plus()], loop)
    assert v.state_independent_loop
    assert v.proven_for_all_states
    assert all(v.strong_on_states)
    assert value_assignment_exists(A, {"-II": 1}) is None
    assert value_assignment_exists(A, {"-II": 0}) is not None


def test_torus_variant_is_invalid():
    bad = validate_assignment(mermin_square_assignment("torus"))
    assert bad
    with pytest.raises(PresentationError):
        born(mermin_square_assignment("torus"), bell_phi_plus())
