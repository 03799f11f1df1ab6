"""Ideals and dimensions attached to an ICIS with a 1-form.

From a problem instance (f_1..f_k, omega = sum A_i dx_i) this module builds
the ideal generated by the equations and the (k+1)x(k+1) minors of the
Jacobian matrix extended by the row of 1-form coefficients, the multiplicity
nu (the complex index of the 1-form), the torsion dimension tau', and the
dimension of the quotient module of (n-k)-forms.

Column convention, used consistently downstream: minor columns are listed in
increasing index order; rows are the gradients of f_1..f_k in order, then the
A row.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import ratlinalg
from .localalg import DEFAULT_ORDER, INFINITE, QuotientAlgebra, monomials_below
from .polyring import Poly, det


@dataclass(frozen=True)
class ProblemInstance:
    """One ICIS-with-1-form input: n, k, equations f, 1-form coefficients A."""

    n: int
    k: int
    f: tuple
    A: tuple
    real_flag: bool = True

    def __post_init__(self):
        if not 0 <= self.k < self.n:
            raise ValueError("need 0 <= k < n")
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "A", tuple(self.A))
        if len(self.f) != self.k:
            raise ValueError(f"expected {self.k} equations, got {len(self.f)}")
        if len(self.A) != self.n:
            raise ValueError(f"expected {self.n} 1-form coefficients")
        for p in self.f:
            if p.nvars != self.n:
                raise ValueError("equation in wrong variable count")
            if p.constant_term() != 0:
                raise ValueError("equations must vanish at the origin")
        for p in self.A:
            if p.nvars != self.n:
                raise ValueError("1-form coefficient in wrong variable count")


def jacobian_rows(inst: ProblemInstance):
    """k x n matrix of partials of the equations."""
    return [[inst.f[i].diff(j) for j in range(inst.n)] for i in range(inst.k)]


def extended_matrix(inst: ProblemInstance):
    """The (k+1) x n matrix with the A row appended."""
    return jacobian_rows(inst) + [list(inst.A)]


def minor(inst: ProblemInstance, cols) -> Poly:
    """(k+1)x(k+1) minor of the extended matrix, columns strictly increasing."""
    cols = tuple(cols)
    if len(cols) != inst.k + 1:
        raise ValueError("need k+1 columns")
    if list(cols) != sorted(set(cols)):
        raise ValueError("columns must be strictly increasing")
    mat = extended_matrix(inst)
    sub = [[row[c] for c in cols] for row in mat]
    return det(sub)


def build_ideal(inst: ProblemInstance):
    """Equations followed by all C(n, k+1) minors, columns ascending."""
    gens = list(inst.f)
    for cols in itertools.combinations(range(inst.n), inst.k + 1):
        gens.append(minor(inst, cols))
    return gens


def algebra(inst: ProblemInstance, order=DEFAULT_ORDER) -> QuotientAlgebra:
    return QuotientAlgebra(build_ideal(inst), inst.n, order)


def index_nu(inst: ProblemInstance):
    """Colength of the minor ideal; INFINITE marks a non-isolated instance."""
    return algebra(inst).colength


def tau_prime(inst: ProblemInstance) -> int:
    """Colength of (f_1..f_k) + all k x k minors of the Jacobian of f.

    For k = 0 the empty minor is the unit, so tau' = 0.
    """
    if inst.k == 0:
        return 0
    gens = list(inst.f)
    jac = jacobian_rows(inst)
    for cols in itertools.combinations(range(inst.n), inst.k):
        sub = [[jac[i][c] for c in cols] for i in range(inst.k)]
        gens.append(det(sub))
    q = QuotientAlgebra(gens, inst.n)
    if q.colength == INFINITE:
        raise ValueError("tau' is infinite: input is not an ICIS")
    return q.colength


class OmegaDimInconclusive(RuntimeError):
    """Raised when the module dimension fails to stabilize below D_max."""


def _wedge_with_subset(coeffs, T, n):
    """Coefficients of (sum_j coeffs[j] dx_j) wedge dx_T over ascending subsets."""
    out = {}
    for j in range(n):
        if j in T or coeffs[j].is_zero():
            continue
        below = sum(1 for t in T if t < j)
        s = tuple(sorted(T + (j,)))
        sign = -1 if below % 2 else 1
        p = coeffs[j] if sign == 1 else -coeffs[j]
        out[s] = out.get(s, Poly.zero(n)) + p
    return out


def omega_module_generators(inst: ProblemInstance):
    """Generators of the relation submodule of Omega^{n-k} as coefficient maps.

    Each generator is a dict {ascending (n-k)-subset: Poly}: the products
    f_i * dx_S, the wedges df_i ^ dx_T and omega ^ dx_T over all (n-k-1)
    subsets T.
    """
    n, k = inst.n, inst.k
    m = n - k
    gens = []
    subsets = list(itertools.combinations(range(n), m))
    for i in range(k):
        for S in subsets:
            gens.append({S: inst.f[i]})
    dfs = jacobian_rows(inst)
    for T in itertools.combinations(range(n), m - 1):
        for i in range(k):
            gens.append(_wedge_with_subset(dfs[i], T, n))
        gens.append(_wedge_with_subset(list(inst.A), T, n))
    return subsets, gens


def omega_module_dim(inst: ProblemInstance, d_max: int = 12) -> int:
    """Dimension of Omega^{n-k} / (f_i Omega, df_i ^ Omega, omega ^ Omega).

    Computed by degree truncation: span the relation module up to coefficient
    degree D, read off the quotient dimension, and accept once two consecutive
    truncation degrees agree.  The rank over the rationals is taken modulo two
    fixed 31-bit primes (with an exact fallback on disagreement), which can
    only underestimate the rank, i.e. overestimate the dimension.
    """
    subsets, gens = omega_module_generators(inst)
    s_index = {S: i for i, S in enumerate(subsets)}
    r = len(subsets)
    n = inst.n

    def dim_at(D: int) -> int:
        monos = monomials_below(n, D)
        m_index = {m: i for i, m in enumerate(monos)}
        ncols = r * len(monos)
        rows = []
        for gen in gens:
            g_order = min(
                (p.order() for p in gen.values() if not p.is_zero()),
                default=float("inf"),
            )
            if g_order == float("inf"):
                continue
            for beta in monomials_below(n, max(D - int(g_order), 0)):
                row = {}
                for S, p in gen.items():
                    si = s_index[S]
                    for mono, c in p.terms.items():
                        mm = tuple(a + b for a, b in zip(beta, mono))
                        if sum(mm) < D:
                            col = si * len(monos) + m_index[mm]
                            row[col] = row.get(col, Fraction(0)) + c
                if row:
                    rows.append(row)
        if not rows:
            return ncols
        dense = []
        for row in rows:
            denlcm = 1
            for v in row.values():
                d = v.denominator
                denlcm = denlcm * d // gcd(denlcm, d)
            vec = [0] * ncols
            for col, v in row.items():
                vec[col] = int(v * denlcm)
            dense.append(vec)
        return ncols - ratlinalg.int_rank(dense)

    prev = None
    for D in range(2, d_max + 1):
        cur = dim_at(D)
        if prev is not None and cur == prev:
            return cur
        prev = cur
    raise OmegaDimInconclusive(
        f"module dimension did not stabilize by D_max={d_max}"
    )
