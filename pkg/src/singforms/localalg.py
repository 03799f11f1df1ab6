"""Local monomial orders, Mora standard bases, and finite quotient algebras.

The order is anti-graded degree reverse lexicographic (smaller total degree
is larger; ties broken by degrevlex after an optional variable permutation),
so 1 is the largest monomial and degree truncation is compatible with leading
ideals.  Standard bases come from Buchberger completion driven by Mora's weak
normal form with ecart-based reducer selection, which terminates for local
orders.

Canonical normal forms do not come from Mora division (that only yields weak
normal forms up to a unit).  Instead, once the truncation degree N with
m^N contained in the ideal is known, the quotient is modelled exactly as
Q[x]/(I + m^N) and classes are reduced by exact linear algebra against a
reduced echelon basis of the truncated ideal image.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .polyring import Poly

INFINITE = float("inf")


@dataclass(frozen=True)
class LocalOrder:
    """Anti-graded degrevlex order descriptor.

    ``perm`` permutes variables before comparison (None = identity).
    """

    perm: tuple | None = None

    def key(self, mono):
        m = mono if self.perm is None else tuple(mono[i] for i in self.perm)
        return (-sum(m), tuple(-e for e in reversed(m)))

    def greater(self, a, b) -> bool:
        return self.key(a) > self.key(b)


DEFAULT_ORDER = LocalOrder()


def leading_monomial(p: Poly, order: LocalOrder):
    if p.is_zero():
        raise ValueError("zero polynomial has no leading monomial")
    return max(p.terms, key=order.key)


def leading_term(p: Poly, order: LocalOrder):
    m = leading_monomial(p, order)
    return m, p.terms[m]


def ecart(p: Poly, order: LocalOrder) -> int:
    """deg(p) - deg(LM(p)); the tail overshoot driving Mora's reduction."""
    m = leading_monomial(p, order)
    return p.degree() - sum(m)


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul_poly(mono, coeff, p: Poly) -> Poly:
    return Poly(
        {tuple(a + b for a, b in zip(mono, m)): coeff * c for m, c in p.terms.items()},
        p.nvars,
    )


def mora_normal_form(p: Poly, basis, order: LocalOrder = DEFAULT_ORDER) -> Poly:
    """Mora weak normal form of p against ``basis``.

    The result h satisfies u*p = sum a_i g_i + h for a unit u of the local
    ring; h is zero iff p lies in the ideal (for a standard basis).  Reducers
    are chosen with minimal ecart, ties broken by order-smallest leading term,
    then by age; intermediate results with larger ecart join the reducer pool,
    which is Mora's termination device.
    """
    reducers = [(leading_monomial(g, order), g) for g in basis if not g.is_zero()]
    h = p
    while not h.is_zero():
        lm_h, lc_h = leading_term(h, order)
        cands = [
            (i, lm_g, g) for i, (lm_g, g) in enumerate(reducers) if _divides(lm_g, lm_h)
        ]
        if not cands:
            return h
        i, lm_g, g = min(
            cands, key=lambda t: (ecart(t[2], order), order.key(t[1]), t[0])
        )
        if ecart(g, order) > ecart(h, order):
            reducers.append((lm_h, h))
        lc_g = g.terms[lm_g]
        h = h - _mono_mul_poly(_mono_sub(lm_h, lm_g), lc_h / lc_g, g)
    return h


def _spoly(f: Poly, g: Poly, order: LocalOrder) -> Poly:
    lm_f, lc_f = leading_term(f, order)
    lm_g, lc_g = leading_term(g, order)
    lcm = tuple(max(a, b) for a, b in zip(lm_f, lm_g))
    return _mono_mul_poly(_mono_sub(lcm, lm_f), Fraction(1) / lc_f, f) - _mono_mul_poly(
        _mono_sub(lcm, lm_g), Fraction(1) / lc_g, g
    )


def _monic(p: Poly, order: LocalOrder) -> Poly:
    _, lc = leading_term(p, order)
    return p * (Fraction(1) / lc)


def standard_basis(gens, order: LocalOrder = DEFAULT_ORDER, max_pairs: int = 20000):
    """Standard basis of the ideal generated by ``gens`` in the local ring."""
    G = []
    for g in gens:
        if g.is_zero():
            continue
        if not g.is_exact():
            raise ValueError("standard bases need exact rational coefficients")
        G.append(_monic(g, order))
    if not G:
        raise ValueError("no nonzero generators")
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    processed = 0
    while pairs:
        # deterministic selection: smallest lcm degree first
        def lcm_deg(pr):
            a = leading_monomial(G[pr[0]], order)
            b = leading_monomial(G[pr[1]], order)
            return sum(max(x, y) for x, y in zip(a, b))

        pairs.sort(key=lambda pr: (lcm_deg(pr), pr))
        i, j = pairs.pop(0)
        processed += 1
        if processed > max_pairs:
            raise RuntimeError("standard basis completion exceeded pair budget")
        h = mora_normal_form(_spoly(G[i], G[j], order), G, order)
        if not h.is_zero():
            G.append(_monic(h, order))
            new = len(G) - 1
            pairs.extend((k, new) for k in range(new))
    return G


def minimal_lead_gens(std, order: LocalOrder = DEFAULT_ORDER):
    """Minimal monomial generators of the leading ideal of a standard basis."""
    lms = sorted({leading_monomial(g, order) for g in std}, key=lambda m: sum(m))
    mins = []
    for m in lms:
        if not any(_divides(g, m) for g in mins):
            mins.append(m)
    return mins


def _pure_power_bounds(lead_mins, nvars):
    """Per-variable degree d_i with x_i^{d_i} in the leading ideal, or None."""
    bounds = []
    for i in range(nvars):
        best = None
        for m in lead_mins:
            if m[i] > 0 and all(e == 0 for j, e in enumerate(m) if j != i):
                best = m[i] if best is None else min(best, m[i])
        if best is None:
            return None
        bounds.append(best)
    return bounds


def monomials_below(nvars: int, degree: int):
    """All exponent tuples of total degree < degree."""
    out = []
    for d in range(degree):
        for c in itertools.combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in c:
                m[i] += 1
            out.append(tuple(m))
    return out


class QuotientAlgebra:
    """Exact finite-dimensional model of a local quotient algebra O/I.

    ``basis`` is the ordered list of standard monomials (order-descending, so
    1 comes first); ``N`` is the truncation degree with m^N contained in I.
    ``normal_form`` returns canonical coordinates over ``basis``.
    """

    def __init__(self, generators, nvars: int, order: LocalOrder = DEFAULT_ORDER):
        self.generators = list(generators)
        self.nvars = nvars
        self.order = order
        self.std_basis = standard_basis(self.generators, order)
        self.leading_ideal = minimal_lead_gens(self.std_basis, order)
        if self.leading_ideal and self.leading_ideal[0] == (0,) * nvars:
            # unit ideal: the quotient is zero
            self.finite = True
            self.basis = []
            self.N = 0
            self._rows = {}
            self._index = {}
            self._product_cache = {}
            return
        bounds = _pure_power_bounds(self.leading_ideal, nvars)
        if bounds is None:
            self.finite = False
            self.basis = None
            self.N = None
            self._rows = None
            self._index = None
            return
        self.finite = True
        std = [
            m
            for m in itertools.product(*[range(b) for b in bounds])
            if not any(_divides(g, m) for g in self.leading_ideal)
        ]
        self.basis = sorted(std, key=order.key, reverse=True)
        self.N = (max(sum(m) for m in self.basis) + 1) if self.basis else 0
        self._index = {m: i for i, m in enumerate(self.basis)}
        self._rows = self._build_nf_rows()
        self._product_cache = {}

    # -- construction helpers -------------------------------------------

    def _truncate(self, p: Poly):
        return {m: c for m, c in p.terms.items() if sum(m) < self.N}

    def _build_nf_rows(self):
        """Reduced echelon rows of the ideal image inside Q[x]/m^N.

        Pivots are chosen along the local order, so the pivot set is exactly
        the set of non-standard monomials of degree < N; each stored row maps
        its pivot to a tail supported on standard monomials only.
        """
        rows = {}

        def reduce_row(vec):
            vec = dict(vec)
            while vec:
                lead = max(vec, key=self.order.key)
                if lead not in rows:
                    return vec, lead
                c = vec.pop(lead)
                for m, cc in rows[lead].items():
                    s = vec.get(m, 0) - c * cc
                    if s == 0:
                        vec.pop(m, None)
                    else:
                        vec[m] = s
            return None, None

        raw = []
        for g in self.generators + self.std_basis:
            og = g.order()
            if og == float("inf"):
                continue
            max_extra = self.N - 1 - int(og)
            for beta in monomials_below(self.nvars, max(max_extra + 1, 0)):
                vec = self._truncate(_mono_mul_poly(beta, Fraction(1), g))
                if vec:
                    raw.append(vec)
        for vec in raw:
            red, lead = reduce_row(vec)
            if red is None:
                continue
            inv = Fraction(1) / red[lead]
            rows[lead] = {m: c * inv for m, c in red.items() if m != lead}
        # back-substitute so every tail is supported on standard monomials:
        # a row means lead + tail lies in the ideal, so a pivot monomial m in
        # the tail is replaced by -tail_m (subtracting c times the m-row)
        for lead in sorted(rows, key=self.order.key):
            tail = rows[lead]
            changed = True
            while changed:
                changed = False
                for m in list(tail):
                    if m in rows:
                        c = tail.pop(m)
                        for m2, c2 in rows[m].items():
                            s = tail.get(m2, 0) - c * c2
                            if s == 0:
                                tail.pop(m2, None)
                            else:
                                tail[m2] = s
                        changed = True
        nonstd = {
            m for m in monomials_below(self.nvars, self.N) if m not in self._index
        }
        if set(rows) != nonstd:
            raise AssertionError(
                "truncated ideal pivots disagree with the leading ideal"
            )
        return rows

    # -- public API -------------------------------------------------------

    @property
    def colength(self):
        return len(self.basis) if self.finite else INFINITE

    def truncation_order(self) -> int:
        if not self.finite:
            raise ValueError("truncation order undefined for infinite colength")
        return self.N

    def normal_form(self, p: Poly):
        """Exact coordinates of the class of p over ``basis``."""
        if not self.finite:
            raise ValueError("normal form needs finite colength")
        if not p.is_exact():
            raise ValueError("normal form needs exact coefficients")
        vec = self._truncate(p)
        out = [Fraction(0)] * len(self.basis)
        for m in sorted(vec, key=self.order.key, reverse=True):
            c = vec[m]
            if c == 0:
                continue
            if m in self._index:
                out[self._index[m]] += c
            else:
                for m2, c2 in self._rows[m].items():
                    out[self._index[m2]] -= c * c2
        return out

    def nf_poly(self, p: Poly) -> Poly:
        coords = self.normal_form(p)
        return Poly(
            {m: c for m, c in zip(self.basis, coords) if c != 0}, self.nvars
        )

    def contains(self, p: Poly) -> bool:
        return all(c == 0 for c in self.normal_form(p))

    def basis_product(self, i: int, j: int):
        """Coordinates of the product of basis classes i and j (cached)."""
        key = (i, j) if i <= j else (j, i)
        got = self._product_cache.get(key)
        if got is None:
            mono = tuple(a + b for a, b in zip(self.basis[key[0]], self.basis[key[1]]))
            got = self.normal_form(Poly.monomial(mono))
            self._product_cache[key] = got
        return got

    def multiplication_matrix(self, p: Poly):
        """Matrix of multiplication by p on the quotient, columns over basis."""
        cols = []
        for m in self.basis:
            cols.append(self.normal_form(p * Poly.monomial(m)))
        # transpose into row-major matrix
        n = len(self.basis)
        return [[cols[j][i] for j in range(n)] for i in range(n)]


def quotient_algebra(gens, nvars: int, order: LocalOrder = DEFAULT_ORDER):
    return QuotientAlgebra(gens, nvars, order)


def colength(q: QuotientAlgebra):
    return q.colength


def truncation_order(q: QuotientAlgebra) -> int:
    return q.truncation_order()


def normal_form(p: Poly, q: QuotientAlgebra):
    return q.normal_form(p)
