"""Independent reference computations used to derive expected values.

None of these share code paths with the library beyond reading a space's
face table.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np
from scipy.optimize import linprog

F = Fraction


def act_on_vertex_string(letters, n):
    """Apply letters (rightmost first) to the vertex string 0..n."""
    s = list(range(n + 1))
    for kind, i in reversed(letters):
        if kind == "d":
            assert 0 <= i < len(s)
            del s[i]
        else:
            assert 0 <= i < len(s)
            s.insert(i, s[i])
    return tuple(s)


def nerve_face(t, i):
    n = len(t)
    if i == 0:
        return t[1:]
    if i == n:
        return t[:-1]
    return t[: i - 1] + ((t[i - 1] + t[i]) % 2,) + t[i + 1:]


def brute_force_edge_labellings(X, d):
    """All f on edges with f(d1) = f(d2) + f(d0) on triangles, degenerate edges counted as 0."""
    edges = X.keys(1)
    out = []
    for vals in product(range(d), repeat=len(edges)):
        f = dict(zip(edges, vals))

        def val(ref):
            return 0 if ref.is_degenerate else f[ref.base]

        ok = all(
            (val(X.faces_of(k)[1]) - val(X.faces_of(k)[2]) - val(X.faces_of(k)[0])) % d == 0
            for k in X.keys(2)
        )
        if ok:
            out.append(vals)
    return out


def float_lp_noncontextual(p, vertices):
    """scipy LP on the same membership problem (floating point, tolerance 1e-9)."""
    X = p.space
    rows, rhs = [], []
    for key in X.generating:
        outs = sorted({r[key] for r in vertices} | set(p.table[key].support()))
        for t in outs:
            rows.append([1.0 if r[key] == t else 0.0 for r in vertices])
            rhs.append(float(p.table[key][t]))
    rows.append([1.0] * len(vertices))
    rhs.append(1.0)
    res = linprog(np.zeros(len(vertices)), A_eq=np.array(rows), b_eq=np.array(rhs), bounds=(0, None), method="highs")
    return res.status == 0


def diamond_lambda(p, q):
    """Mixture weights on the diamond from two triangle tables sharing the sum edge.

    Assignment (a, b, c): x0 = a, shared edge = b, x1 = c.
    """
    out = {}
    for a, b, c in product((0, 1), repeat=3):
        num = p.get((a, (a + b) % 2), F(0)) * q.get((c, (c + b) % 2), F(0))
        den = sum(w for (u, v), w in p.items() if (u + v) % 2 == b)
        out[(a, b, c)] = num / den if den else F(0)
    return out


def random_weights(rng: random.Random, n: int, denominator: int = 24) -> list[Fraction]:
    cuts = sorted(rng.randint(0, denominator) for _ in range(n - 1))
    bounds = [0, *cuts, denominator]
    return [F(b - a, denominator) for a, b in zip(bounds, bounds[1:])]


def random_diamond_tables(rng: random.Random, denominator: int = 24):
    """Two triangle tables (outcome (a, b) -> weight) whose sum edges agree."""
    c = F(rng.randint(0, denominator), denominator)

    def table():
        u = random_weights(rng, 2, denominator)
        v = random_weights(rng, 2, denominator)
        return {(0, 0): c * u[0], (1, 1): c * u[1], (0, 1): (1 - c) * v[0], (1, 0): (1 - c) * v[1]}

    return table(), table()


def random_boundary_delta3_edges(rng: random.Random, denominator: int = 12, tries: int = 10000):
    """Edge marginals p^0 on the six edges of ∂Δ³ making every triangle nonnegative.

    A triangle with edge marginals A = p^0(d2), B = p^0(d0), C = p^0(d1) has
    p^00 = (A + B + C - 1)/2; the other three weights follow.
    """
    tris = {"012": ("01", "12", "02"), "013": ("01", "13", "03"), "023": ("02", "23", "03"), "123": ("12", "23", "13")}
    for _ in range(tries):
        e = {lab: F(rng.randint(0, denominator), denominator) for lab in ("01", "02", "03", "12", "13", "23")}
        tables = {}
        ok = True
        for t, (a, b, c) in tris.items():
            A, B, C = e[a], e[b], e[c]
            p00 = (A + B + C - 1) / 2
            w = {(0, 0): p00, (0, 1): A - p00, (1, 0): B - p00, (1, 1): 1 - A - B + p00}
            if any(v < 0 for v in w.values()):
                ok = False
                break
            tables[t] = w
        if ok:
            return tables
    raise RuntimeError("no sample found")


def h1_order_brute_force(X, d):
    """|ker δ1| / |im δ0| by enumeration."""
    edges = X.keys(1)
    cocycles = len(brute_force_edge_labellings(X, d))
    images = set()
    for vals in product(range(d), repeat=X.count(0)):
        g = []
        for e in edges:
            f = X.faces_of(e)
            g.append((vals[f[0].base_id] - vals[f[1].base_id]) % d)
        images.add(tuple(g))
    return cocycles // len(images)


PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix_float(word: str) -> np.ndarray:
    sign = -1 if word.startswith("-") else 1
    word = word.lstrip("+-")
    m = np.array([[1]], dtype=complex)
    for c in word:
        m = np.kron(m, PAULI[c])
    return sign * m


def born_float(words, rho) -> dict:
    n = rho.shape[0]
    out = {}
    for a in product((0, 1), repeat=len(words)):
        P = np.eye(n, dtype=complex)
        for ai, w in zip(a, words):
            P = P @ (np.eye(n) + (-1) ** ai * pauli_matrix_float(w)) / 2
        out[a] = float(np.real(np.trace(rho @ P)))
    return out
