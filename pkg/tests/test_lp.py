import random
from fractions import Fraction as F

import numpy as np
import pytest
from scipy.optimize import linprog

from simpctx.lp import feasible, maximize, solve_standard


def test_simple_feasible():
    res = feasible([[1, 1]], [1])
    assert res.status == "optimal"
    assert sum(res.x) == 1 and min(res.x) >= 0


def test_infeasible_has_farkas_certificate():
    A = [[1, 1], [1, -1]]
    b = [-1, 0]
    res = feasible(A, b)
    assert res.status == "infeasible"
    y = res.farkas
    assert all(sum(A[i][j] * y[i] for i in range(2)) <= 0 for j in range(2))
    assert sum(bi * yi for bi, yi in zip(b, y)) > 0


def test_unbounded():
    assert solve_standard([[1, -1]], [0], [-1, 0]).status == "unbounded"


def test_maximize_box():
    res = maximize([1, 2], A_ub=[[1, 0], [0, 1], [1, 1]], b_ub=[1, 1, F(3, 2)])
    assert res.status == "optimal"
    assert res.value == F(5, 2)


@pytest.mark.parametrize("seed", range(30))
def test_random_lp_matches_scipy(seed):
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(2, 6)
    A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
    b = [rng.randint(-3, 5) for _ in range(m)]
    c = [rng.randint(-2, 4) for _ in range(n)]
    # bound the region so scipy and we agree on boundedness
    A.append([1] * n)
    b.append(10)
    A2 = [row + [int(i == len(A) - 1)] for i, row in enumerate(A)]
    c2 = c + [0]
    ours = solve_standard(A2, b, c2)
    ref = linprog(np.array(c2, float), A_eq=np.array(A2, float), b_eq=np.array(b, float), bounds=(0, None), method="highs")
    if ref.status == 2:
        assert ours.status == "infeasible"
        y = ours.farkas
        assert all(sum(A2[i][j] * y[i] for i in range(len(A2))) <= 0 for j in range(n + 1))
        assert sum(bi * yi for bi, yi in zip(b, y)) > 0
    else:
        assert ref.status == 0
        assert ours.status == "optimal"
        assert abs(float(ours.value) - ref.fun) < 1e-9
        assert all(v >= 0 for v in ours.x)
        assert all(sum(a * v for a, v in zip(row, ours.x)) == bi for row, bi in zip(A2, b))


def test_degenerate_cycling_example():
    # Beale's example cycles under the textbook rule; Bland's rule terminates
    c = [F(-3, 4), 150, F(-1, 50), 6, 0, 0, 0]
    A = [
        [F(1, 4), -60, F(-1, 25), 9, 1, 0, 0],
        [F(1, 2), -90, F(-1, 50), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    res = solve_standard(A, [0, 0, 1], c)
    assert res.status == "optimal"
    assert res.value == F(-1, 20)
