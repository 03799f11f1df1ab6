from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singforms import ratlinalg


frac = st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=4)


@st.composite
def sym_matrices(draw, nmax=5):
    n = draw(st.integers(1, nmax))
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = draw(frac)
            m[i][j] = m[j][i] = v
    return m


@st.composite
def invertible(draw, n):
    # unit-triangular times permutation is always invertible
    m = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            m[i][j] = draw(frac)
    perm = draw(st.permutations(range(n)))
    return [[m[i][perm[j]] for j in range(n)] for i in range(n)]


def _congruence(a, p):
    n = len(a)
    return [
        [
            sum(p[r][i] * a[r][s] * p[s][j] for r in range(n) for s in range(n))
            for j in range(n)
        ]
        for i in range(n)
    ]


@given(sym_matrices())
@settings(max_examples=50, deadline=None)
def test_congruence_diagonalize(m):
    diag, basis = ratlinalg.congruence_diagonalize(m)
    n = len(m)
    # basis^T m basis must be the claimed diagonal
    out = [
        [
            sum(
                basis[r][i] * m[r][s] * basis[s][j]
                for r in range(n)
                for s in range(n)
            )
            for j in range(n)
        ]
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            assert out[i][j] == (diag[i] if i == j else 0)


@given(sym_matrices())
@settings(max_examples=40, deadline=None)
def test_rank_signature_congruence_invariant(m):
    n = len(m)
    rk, sig = ratlinalg.rank_signature_exact(m)
    assert rk == ratlinalg.rank(m)
    assert abs(sig) <= rk <= n
    # eigenvalue sign count agrees
    ev = np.linalg.eigvalsh(np.array(m, dtype=float))
    scale = max(1.0, float(np.max(np.abs(ev))))
    assert sum(1 for v in ev if v > 1e-9 * scale) - sum(
        1 for v in ev if v < -1e-9 * scale
    ) == sig


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_rank_signature_basis_change(data):
    m = data.draw(sym_matrices(nmax=4))
    p = data.draw(invertible(len(m)))
    rk1, sig1 = ratlinalg.rank_signature_exact(m)
    rk2, sig2 = ratlinalg.rank_signature_exact(_congruence(m, p))
    assert (rk1, sig1) == (rk2, sig2)


def test_rref_and_rank():
    rows = [
        [Fraction(1), Fraction(2), Fraction(3)],
        [Fraction(2), Fraction(4), Fraction(6)],
        [Fraction(0), Fraction(1), Fraction(1)],
    ]
    ech, pivots = ratlinalg.rref(rows)
    assert pivots == [0, 1]
    assert ratlinalg.rank(rows) == 2


def test_int_rank_matches_exact():
    rows = [[2, 4, 6], [1, 2, 3], [0, 5, 1]]
    assert ratlinalg.int_rank(rows) == 2
    assert ratlinalg.rank_mod_p(rows, ratlinalg.RANK_PRIMES[0]) == 2


def test_numeric_rank_bounds():
    a = np.diag([1.0, 1e-3, 1e-12])
    lo, hi = ratlinalg.numeric_rank_bounds(a)
    assert lo == 2 and hi == 2
    b = np.diag([1.0, 1e-8])  # straddles the threshold: interval widens
    lo, hi = ratlinalg.numeric_rank_bounds(b)
    assert lo <= 1 <= hi and lo != hi


@given(
    st.fractions(
        min_value=Fraction(-50), max_value=Fraction(50), max_denominator=900
    )
)
@settings(max_examples=80, deadline=None)
def test_reconstruct_round_trip(q):
    got = ratlinalg.reconstruct_rational(float(q), 10**6, 1e-9)
    assert got == q


def test_reconstruct_rejects_junk():
    assert ratlinalg.reconstruct_rational(0.12345678912345, 10**6, 1e-12) is None
    assert ratlinalg.reconstruct_rational(float("nan"), 10**6, 1e-9) is None
    assert ratlinalg.reconstruct_rational(3e-10, 10**6, 1e-9) == 0
