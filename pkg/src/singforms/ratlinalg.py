"""Dense exact linear algebra over the rationals, plus small numeric helpers.

Matrices are lists of lists of Fraction.  Sizes here are desk scale (tens of
rows/columns), so plain Gaussian elimination is fine.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

# two fixed 31-bit primes for probabilistic integer rank computations
RANK_PRIMES = (2147483647, 2147483629)


def rref(rows):
    """Reduced row echelon form.  Returns (rows, pivot_cols); zero rows dropped."""
    mat = [list(r) for r in rows]
    ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [v * inv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def congruence_diagonalize(sym):
    """Diagonalize a symmetric rational matrix by congruence.

    Returns (diag, basis) with basis^T * M * basis diagonal; ``diag`` lists the
    diagonal entries.  Zero diagonal entries with a nonzero off-diagonal mate
    are repaired by the symmetric row+column addition trick (valid away from
    characteristic 2).
    """
    n = len(sym)
    m = [list(row) for row in sym]
    for i in range(n):
        if any(m[i][j] != m[j][i] for j in range(n)):
            raise ValueError("matrix is not symmetric")
    basis = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def col_op(dst, src, f):
        # column_dst += f * column_src, mirrored on rows; basis column update
        for r in range(n):
            m[r][dst] += f * m[r][src]
        for c in range(n):
            m[dst][c] += f * m[src][c]
        for r in range(n):
            basis[r][dst] += f * basis[r][src]

    def col_swap(a, b):
        for r in range(n):
            m[r][a], m[r][b] = m[r][b], m[r][a]
        for c in range(n):
            m[a][c], m[b][c] = m[b][c], m[a][c]
        for r in range(n):
            basis[r][a], basis[r][b] = basis[r][b], basis[r][a]

    for i in range(n):
        if m[i][i] == 0:
            # look for a nonzero diagonal further down
            j = next((j for j in range(i + 1, n) if m[j][j] != 0), None)
            if j is not None:
                col_swap(i, j)
            else:
                pair = next(
                    (
                        (r, c)
                        for r in range(i, n)
                        for c in range(r + 1, n)
                        if m[r][c] != 0
                    ),
                    None,
                )
                if pair is None:
                    break  # remaining block is zero
                r, c = pair
                col_op(r, c, Fraction(1))  # makes m[r][r] = 2*m[r][c] != 0
                if r != i:
                    col_swap(i, r)
        piv = m[i][i]
        for j in range(i + 1, n):
            if m[i][j] != 0:
                col_op(j, i, -m[i][j] / piv)
    return [m[i][i] for i in range(n)], basis


def rank_signature_exact(sym):
    """(rank, signature) of a symmetric rational matrix, exactly."""
    diag, _ = congruence_diagonalize(sym)
    rk = sum(1 for d in diag if d != 0)
    sig = sum(1 for d in diag if d > 0) - sum(1 for d in diag if d < 0)
    return rk, sig


def numeric_rank_bounds(mat: np.ndarray, threshold: float = 1e-8):
    """(lo, hi) bounds on the rank from singular values.

    Values within a decade of ``threshold * smax`` are counted as uncertain,
    widening the interval instead of silently rounding.
    """
    if mat.size == 0:
        return 0, 0
    s = np.linalg.svd(np.asarray(mat, dtype=float), compute_uv=False)
    smax = s[0] if len(s) else 0.0
    if smax == 0.0:
        return 0, 0
    cut = threshold * smax
    sure = int(np.sum(s > 10 * cut))
    maybe = int(np.sum(s > cut / 10))
    return sure, maybe


def rank_mod_p(int_rows, p: int) -> int:
    """Rank of an integer matrix modulo the prime p (numpy int64 Gauss)."""
    if not int_rows:
        return 0
    a = np.array([[v % p for v in row] for row in int_rows], dtype=np.int64)
    nrows, ncols = a.shape
    r = 0
    for c in range(ncols):
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        below = a[r + 1 :, c] != 0
        if below.any():
            idx = np.nonzero(below)[0] + r + 1
            a[idx] = (a[idx] - np.outer(a[idx, c], a[r])) % p
        r += 1
        if r == nrows:
            break
    return r


def int_rank(rows) -> int:
    """Rank of integer rows via two fixed primes; exact fallback on mismatch."""
    r1 = rank_mod_p(rows, RANK_PRIMES[0])
    r2 = rank_mod_p(rows, RANK_PRIMES[1])
    if r1 == r2:
        return r1
    return rank([[Fraction(v) for v in row] for row in rows])


def reconstruct_rational(x: float, max_denominator: int, tol: float, gap: float = 1e3):
    """Continued-fraction rational reconstruction of a real number.

    Accepts a convergent p/q only when |x - p/q| <= tol, q <= max_denominator,
    and the next convergent's denominator exceeds ``gap`` times q (guards
    against accidental small-denominator hits).  Returns None when no
    convergent qualifies.
    """
    if x != x or abs(x) == float("inf"):
        return None
    if abs(x) <= tol:
        return Fraction(0)
    # continued fraction expansion of x with convergent recurrence
    p_prev, q_prev = 0, 1
    p_cur, q_cur = 1, 0
    val = x
    for _ in range(64):
        a = int(val // 1)
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        if q_cur > max_denominator:
            return None
        cand = Fraction(p_cur, q_cur)
        err = abs(x - p_cur / q_cur)
        if err <= tol:
            frac = val - a
            if frac == 0:
                return cand  # terminated: x is exactly p/q in float arithmetic
            # next partial quotient determines the next convergent's denominator
            a_next = int((1.0 / frac) // 1)
            q_next = a_next * q_cur + q_prev
            if q_next > gap * q_cur:
                return cand
        frac = val - a
        if frac == 0:
            return None
        val = 1.0 / frac
    return None
