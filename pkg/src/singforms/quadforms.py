"""Quadratic forms on the local algebra and on the module of forms.

``gram_qa`` assembles Q(phi, psi) = R(phi psi) over the monomial basis of the
quotient algebra; entries are rationalized when possible and exact mode is
authoritative for ranks and signatures.  ``lambda_map`` sends an (n-k)-form
h dx_L to sgn(K, L) h Delta_K where K is the complementary column block of
the Jacobian of f, realizing (df_1 ^ .. ^ df_k ^ eta) / (dx_1 ^ .. ^ dx_n);
the form on the module is the pullback of Q^A along this map, its rank is
computed intrinsically on the image subspace.  ``qomega_numeric`` evaluates
the same pairing directly on the deformed fibers: restrict both generators to
the fiber in the chart of the selected block, divide the product of the two
chart coefficients by the chart Hessian J = Jtilde / Delta^2, and take the
circle-mean limit.  The agreement of the two routes is a test target, not an
assumption.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ratlinalg
from .critpts import CompiledPoly, shuffle_sign
from .icis import ProblemInstance, algebra as icis_algebra, jacobian_rows
from .localalg import QuotientAlgebra
from .polyring import Poly, det
from .residuefn import LimitConfig, ResidueSampler, RValue, make_sampler


@dataclass(frozen=True)
class FormGenerator:
    """An (n-k)-form h dx_L, L an ascending index subset (0-based)."""

    coeff: Poly
    index_set: tuple

    def __post_init__(self):
        s = tuple(self.index_set)
        if list(s) != sorted(set(s)):
            raise ValueError("index set must be strictly increasing")
        object.__setattr__(self, "index_set", s)

    def label(self, varnames=None) -> str:
        names = varnames or [f"x{i+1}" for i in range(self.coeff.nvars)]
        wedge = "^".join(f"d{names[i]}" for i in self.index_set) or "1"
        c = self.coeff.to_string(names)
        return wedge if c == "1" else f"({c})*{wedge}"


@dataclass
class GramForm:
    """Labeled symmetric matrix with numeric and (optional) exact entries."""

    labels: list
    numeric: np.ndarray
    exact: list | None
    failed_entries: list = field(default_factory=list)
    max_imag: float = 0.0
    max_numeric_exact_dev: float = 0.0

    @property
    def dim(self) -> int:
        return len(self.labels)

    def rank_signature(self):
        """(rank, signature); exact when the exact matrix is present."""
        if self.exact is not None:
            return ratlinalg.rank_signature_exact(self.exact)
        lo, hi = ratlinalg.numeric_rank_bounds(self.numeric)
        return (lo, None) if lo == hi else ((lo, hi), None)

    @property
    def rank(self):
        return self.rank_signature()[0]

    @property
    def signature(self):
        return self.rank_signature()[1]


def rank_signature(g: GramForm):
    return g.rank_signature()


def _assemble_gram(labels, entries, want_exact=True):
    """Build a GramForm from a dict {(i, j): RValue} on i <= j."""
    dim = len(labels)
    numeric = np.zeros((dim, dim))
    exact = [[Fraction(0)] * dim for _ in range(dim)]
    failed = []
    max_imag = 0.0
    max_dev = 0.0
    all_exact = want_exact
    for (i, j), rv in entries.items():
        max_imag = max(max_imag, abs(rv.numeric.imag))
        numeric[i][j] = numeric[j][i] = rv.numeric.real
        if rv.exact is None:
            failed.append((i, j))
            all_exact = False
        else:
            exact[i][j] = exact[j][i] = rv.exact
            max_dev = max(max_dev, abs(rv.numeric - float(rv.exact)))
    return GramForm(
        labels=list(labels),
        numeric=numeric,
        exact=exact if all_exact else None,
        failed_entries=failed,
        max_imag=max_imag,
        max_numeric_exact_dev=max_dev,
    )


def gram_qa(
    inst: ProblemInstance,
    cfg: LimitConfig,
    seed=0,
    alg: QuotientAlgebra | None = None,
    sampler: ResidueSampler | None = None,
    want_exact: bool = True,
) -> GramForm:
    """Gram matrix [R(e_a e_b)] over the monomial basis of the algebra.

    Entries come from the raw product monomials; reduction-independence
    (evaluating the normal form instead) is checked in the test suite.
    """
    if alg is None:
        alg = icis_algebra(inst)
    if sampler is None:
        sampler = make_sampler(inst, cfg, seed, expected=alg.colength)
    labels = [Poly.monomial(m).to_string([f"x{i+1}" for i in range(inst.n)]) for m in alg.basis]
    entries = {}
    for a in range(len(alg.basis)):
        for b in range(a, len(alg.basis)):
            mono = tuple(x + y for x, y in zip(alg.basis[a], alg.basis[b]))
            entries[(a, b)] = sampler.r_of(
                Poly.monomial(mono), label=f"gram[{a},{b}]"
            )
    return _assemble_gram(labels, entries, want_exact)


# ---------------------------------------------------------------------------
# the comparison map and the form on the module
# ---------------------------------------------------------------------------


def block_minor(inst: ProblemInstance, K) -> Poly:
    """det (df_i/dx_j)_{j in K} with rows in equation order, columns ascending."""
    K = tuple(K)
    if len(K) != inst.k:
        raise ValueError("block size must equal k")
    if inst.k == 0:
        return Poly.one(inst.n)
    jac = jacobian_rows(inst)
    return det([[jac[i][c] for c in K] for i in range(inst.k)])


def lambda_poly(inst: ProblemInstance, gen: FormGenerator) -> Poly:
    """The function (df_1 ^ .. ^ df_k ^ gen) / (dx_1 ^ .. ^ dx_n)."""
    L = gen.index_set
    if len(L) != inst.n - inst.k:
        raise ValueError("generator must be an (n-k)-form")
    K = tuple(j for j in range(inst.n) if j not in L)
    return shuffle_sign(K, L) * block_minor(inst, K) * gen.coeff


def lambda_map(inst: ProblemInstance, gen: FormGenerator, alg: QuotientAlgebra):
    """Coordinates of the class of lambda_poly over the algebra basis."""
    return alg.normal_form(lambda_poly(inst, gen))


def im_lambda_basis(inst: ProblemInstance, alg: QuotientAlgebra):
    """Echelon basis (rows) of the image subspace of the comparison map.

    The image is spanned by the classes of Delta_K * b over all k-blocks K
    and basis monomials b.
    """
    rows = []
    for K in itertools.combinations(range(inst.n), inst.k):
        dseta = block_minor(inst, K)
        for m in alg.basis:
            rows.append(alg.normal_form(dseta * Poly.monomial(m)))
    if not rows:
        return []
    ech, _ = ratlinalg.rref(rows)
    return ech


def restricted_rank(gram_exact, subspace_rows):
    """Exact rank of a symmetric matrix restricted to a row-spanned subspace."""
    if not subspace_rows:
        return 0
    b = subspace_rows
    m = len(b)
    n = len(b[0])
    g = gram_exact
    restricted = [
        [
            sum(b[r][i] * g[i][j] * b[s][j] for i in range(n) for j in range(n))
            for s in range(m)
        ]
        for r in range(m)
    ]
    return ratlinalg.rank(restricted)


@dataclass
class QOmegaResult:
    gram: GramForm
    rank: int
    im_lambda_dim: int
    lambda_coords: list


def gram_qomega(
    inst: ProblemInstance,
    generators,
    cfg: LimitConfig,
    seed=0,
    alg: QuotientAlgebra | None = None,
    qa: GramForm | None = None,
    sampler: ResidueSampler | None = None,
) -> QOmegaResult:
    """Gram of the module form over the given generators via the map route,
    plus the intrinsic rank on the image subspace."""
    if alg is None:
        alg = icis_algebra(inst)
    if qa is None:
        qa = gram_qa(inst, cfg, seed, alg=alg, sampler=sampler)
    coords = [lambda_map(inst, g, alg) for g in generators]
    dim = len(generators)
    labels = [g.label() for g in generators]
    numeric = np.zeros((dim, dim))
    exact = None
    if qa.exact is not None:
        exact = [[Fraction(0)] * dim for _ in range(dim)]
        for a in range(dim):
            for b in range(a, dim):
                v = sum(
                    coords[a][i] * qa.exact[i][j] * coords[b][j]
                    for i in range(alg.colength)
                    for j in range(alg.colength)
                )
                exact[a][b] = exact[b][a] = v
                numeric[a][b] = numeric[b][a] = float(v)
    else:
        ca = [np.array([float(c) for c in v]) for v in coords]
        for a in range(dim):
            for b in range(a, dim):
                v = float(ca[a] @ qa.numeric @ ca[b])
                numeric[a][b] = numeric[b][a] = v
    gram = GramForm(labels=labels, numeric=numeric, exact=exact)
    im = im_lambda_basis(inst, alg)
    if qa.exact is not None:
        rk = restricted_rank(qa.exact, im)
    else:
        rk = None
    return QOmegaResult(
        gram=gram, rank=rk, im_lambda_dim=len(im), lambda_coords=coords
    )


def qomega_numeric(
    inst: ProblemInstance,
    g1: FormGenerator,
    g2: FormGenerator,
    cfg: LimitConfig,
    seed=0,
    sampler: ResidueSampler | None = None,
) -> RValue:
    """Independent evaluation of the module pairing on the deformed fibers.

    At each critical point the two generators are restricted to the fiber in
    the chart of the point's block (solve the k x k system df = 0 for dx_K in
    terms of dx_L and read off the single top coefficient), and the product of
    the two chart coefficients is divided by the chart Hessian J.
    """
    if sampler is None:
        sampler = make_sampler(inst, cfg, seed)
    fam = sampler.family
    n, k = fam.n, fam.k
    c1 = CompiledPoly(g1.coeff, n)
    c2 = CompiledPoly(g2.coeff, n)

    def chart_coeff(S, chart_L, h_val, dfx):
        """Coefficient of dx_chart in the restriction of h dx_S."""
        K = tuple(j for j in range(n) if j not in chart_L)
        if k:
            dfK = dfx[:, list(K)]
            dfL = dfx[:, list(chart_L)]
            sub = -np.linalg.solve(dfK, dfL)  # dx_K = sub @ dx_L on the fiber
        m = len(chart_L)
        C = np.zeros((m, m), dtype=np.complex128)
        pos_in_chart = {j: c for c, j in enumerate(chart_L)}
        pos_in_K = {j: i for i, j in enumerate(K)}
        for r, j in enumerate(S):
            if j in pos_in_chart:
                C[r, pos_in_chart[j]] = 1.0
            else:
                C[r, :] = sub[pos_in_K[j], :]
        return h_val * np.linalg.det(C)

    def fn(ps):
        total = 0j
        if not ps.points:
            return total
        X = ps.xs()
        v1 = c1.eval_many(X)
        v2 = c2.eval_many(X)
        dfall = fam.df_values(X) if k else None
        for i, p in enumerate(ps.points):
            chart_L = tuple(j for j in range(n) if j not in p.block)
            dfx = dfall[i] if k else None
            a1 = chart_coeff(g1.index_set, chart_L, v1[i], dfx)
            a2 = chart_coeff(g2.index_set, chart_L, v2[i], dfx)
            J = p.Jtilde / p.Delta**2
            total += a1 * a2 / J
        return total

    return sampler.limit(fn, label=f"qomega[{g1.label()},{g2.label()}]")


# ---------------------------------------------------------------------------
# inequalities and the classical case
# ---------------------------------------------------------------------------


@dataclass
class InequalityReport:
    nu: int
    tau: int
    rank_qa: int
    rank_qomega: int
    im_lambda_dim: int
    omega_dim: int
    rank_le: bool
    cork_ge_tau: bool
    gap_bounds: bool
    im_lambda_ok: bool

    @property
    def ok(self) -> bool:
        return self.rank_le and self.cork_ge_tau and self.gap_bounds and self.im_lambda_ok


def inequalities_report(
    nu: int, tau: int, rank_qa: int, rank_qomega: int, im_lambda_dim: int, omega_dim: int
) -> InequalityReport:
    gap = rank_qa - rank_qomega
    return InequalityReport(
        nu=nu,
        tau=tau,
        rank_qa=rank_qa,
        rank_qomega=rank_qomega,
        im_lambda_dim=im_lambda_dim,
        omega_dim=omega_dim,
        rank_le=rank_qomega <= rank_qa,
        cork_ge_tau=(omega_dim - rank_qomega) >= tau,
        gap_bounds=0 <= gap <= 2 * tau,
        im_lambda_ok=im_lambda_dim == nu - tau,
    )


def mult_operator_rank(alg: QuotientAlgebra, p: Poly) -> int:
    """Exact rank of multiplication by p on the quotient algebra."""
    if alg.colength == 0:
        return 0
    return ratlinalg.rank(alg.multiplication_matrix(p))


def elkh(maps, cfg: LimitConfig, seed=0, opts=None):
    """The classical nondegenerate form of a finite map germ (the k = 0 case).

    Returns (GramForm, algebra, sampler); the Gram is [R(e_a e_b)] for the
    1-form with coefficients the components of the map, whose signature is the
    local degree of the real map for real input.
    """
    n = maps[0].nvars
    inst = ProblemInstance(n, 0, [], list(maps))
    alg = icis_algebra(inst)
    if alg.colength == float("inf"):
        raise ValueError("map is not finite")
    sampler = make_sampler(inst, cfg, seed, opts=opts, expected=alg.colength)
    gram = gram_qa(inst, cfg, seed, alg=alg, sampler=sampler)
    return gram, alg, sampler


def example2_bridge_map(inst: ProblemInstance):
    """The finite map (f, m_2, .., m_n) matched by the algebra of (f, dx_1).

    The minors m_j are taken on columns (1, j) with the sign conventions of
    the ideal construction, which makes the comparison exact including signs.
    """
    if inst.k != 1:
        raise ValueError("the bridge needs k = 1")
    if inst.A[0] != Poly.one(inst.n) or any(
        not a.is_zero() for a in inst.A[1:]
    ):
        raise ValueError("the bridge needs omega = dx_1")
    from .icis import minor

    return [inst.f[0]] + [minor(inst, (0, j)) for j in range(1, inst.n)]
