"""The deformation-limit linear functional R and its verification suites.

R(phi) is the limit, as the deformation parameter goes to zero along a fixed
generic complex ray, of sum_P phi(P)/Jtilde(P) over the critical points of the
deformed 1-form on the deformed fiber.  The limit function is holomorphic
through the origin, so its value there equals its mean over a small circle;
the trapezoid rule over S equidistant angles computes that mean with error
O(r^S), far below solver noise.  Acceptance requires the means at the two
smallest radii to agree, after which a continued-fraction rational
reconstruction is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import critpts
from .critpts import CompiledPoly, DeformationFamily, SolveOptions, TPoly
from .polyring import Poly
from .ratlinalg import reconstruct_rational


class NonConvergentError(RuntimeError):
    """Circle means at the two smallest radii disagree."""

    def __init__(self, message, deviations=None):
        super().__init__(message)
        self.deviations = deviations or []


@dataclass(frozen=True)
class LimitConfig:
    radii: tuple = (1e-2, 5e-3)
    samples: int = 64
    tol_match: float = 1e-8
    max_denominator: int = 10**6

    def __post_init__(self):
        if list(self.radii) != sorted(self.radii, reverse=True):
            raise ValueError("radii must be strictly decreasing")
        if self.samples < 16 or self.samples % 2:
            raise ValueError("samples must be an even integer >= 16")


@dataclass
class RValue:
    numeric: complex
    exact: Fraction | None
    certainty: float


def _rel_dev(a: complex, b: complex) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))


class ResidueSampler:
    """Solved circle grids for one deformation family, shared by all probes.

    The expensive part (path tracking) happens once per radius; evaluating R
    for a probe polynomial is then a cheap sum over cached critical points.
    """

    def __init__(
        self,
        family: DeformationFamily,
        expected: int,
        cfg: LimitConfig,
        seed_or_rng,
        opts: SolveOptions | None = None,
        warm_starts: dict | None = None,
    ):
        self.family = family
        self.expected = expected
        self.cfg = cfg
        self.opts = opts or SolveOptions()
        rng = (
            seed_or_rng
            if isinstance(seed_or_rng, np.random.Generator)
            else np.random.default_rng(seed_or_rng)
        )
        self.grids = {}
        for r in cfg.radii:
            self.grids[r] = critpts.track_circle(
                family,
                r,
                cfg.samples,
                expected,
                rng,
                self.opts,
                warm_starts=None if warm_starts is None else warm_starts.get(r),
            )
        self.max_probe_deviation = 0.0
        self.probe_deviations = []

    # -- generic circle means ------------------------------------------------

    def mean_over_circle(self, radius: float, fn) -> complex:
        """Average of fn(point_set) over the circle samples, fixed order."""
        total = 0j
        for ps in self.grids[radius]:
            total += fn(ps)
        return total / self.cfg.samples

    def means(self, fn):
        return [self.mean_over_circle(r, fn) for r in self.cfg.radii]

    def limit(self, fn, label: str = "") -> RValue:
        ms = self.means(fn)
        dev = _rel_dev(ms[-1], ms[-2]) if len(ms) >= 2 else 0.0
        self.probe_deviations.append((label, dev))
        self.max_probe_deviation = max(self.max_probe_deviation, dev)
        if dev > self.cfg.tol_match:
            raise NonConvergentError(
                f"circle means disagree for {label or 'probe'}: "
                f"{ms[-2]} vs {ms[-1]} (dev {dev:.3e})",
                deviations=[(r, m) for r, m in zip(self.cfg.radii, ms)],
            )
        numeric = ms[-1]
        exact = None
        if abs(numeric.imag) < self.cfg.tol_match:
            exact = reconstruct_rational(
                numeric.real, self.cfg.max_denominator, self.cfg.tol_match
            )
        return RValue(numeric=numeric, exact=exact, certainty=dev)

    # -- the functional -------------------------------------------------------

    def _probe_sum(self, probe):
        """fn(point_set) computing sum phi(P)/Jtilde(P) for one sample."""
        if isinstance(probe, Poly):
            c0 = CompiledPoly(probe, self.family.n)
            c1 = None
        elif isinstance(probe, TPoly):
            c0 = CompiledPoly(probe.p0, self.family.n)
            c1 = CompiledPoly(probe.p1, self.family.n)
        else:
            raise TypeError("probe must be Poly or TPoly")

        def fn(ps):
            if not ps.points:
                return 0j
            X = ps.xs()
            vals = c0.eval_many(X)
            if c1 is not None:
                vals = vals + ps.t * c1.eval_many(X)
            return complex(np.sum(vals / ps.jtildes()))

        return fn

    def r_of(self, probe, label: str = "") -> RValue:
        """R(probe) with the circle-mean limit and rational reconstruction."""
        if not label and isinstance(probe, Poly):
            label = repr(probe)
        return self.limit(self._probe_sum(probe), label)

    def r_at_sample(self, radius: float, angle_index: int, probe) -> complex:
        return self._probe_sum(probe)(self.grids[radius][angle_index])

    def solver_diagnostics(self) -> dict:
        agg = {}
        for r in self.cfg.radii:
            for k, v in self.grids[r][0].diagnostics.items():
                agg[k] = agg.get(k, 0) + v
        return agg


def make_sampler(inst, cfg, seed, twist=None, opts=None, expected=None):
    """Standard sampler for an instance: seeded generic direction, solved grids."""
    rng = np.random.default_rng(seed)
    m = inst.n + inst.k
    u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    u = u / np.linalg.norm(u)
    family = DeformationFamily(inst, tuple(u), twist=twist)
    if expected is None:
        from .icis import index_nu

        expected = index_nu(inst)
    return ResidueSampler(family, expected, cfg, rng, opts)


# ---------------------------------------------------------------------------
# one-shot operations
# ---------------------------------------------------------------------------


def r_at(inst, d: critpts.Deformation, phi: Poly, expected: int, seed=0) -> complex:
    """Formula-style evaluation at one concrete deformation (no limit)."""
    ps = critpts.solve_all(inst, d, expected, seed=seed)
    c = CompiledPoly(phi, inst.n)
    if not ps.points:
        return 0j
    return complex(np.sum(c.eval_many(ps.xs()) / ps.jtildes()))


def r_limit(inst, phi: Poly, cfg: LimitConfig, seed=0, sampler=None) -> RValue:
    if sampler is None:
        sampler = make_sampler(inst, cfg, seed)
    return sampler.r_of(phi)


@dataclass
class ProbeReport:
    """Outcome of a verification suite: per-probe deviations and the worst."""

    ok: bool
    max_deviation: float
    tolerance: float
    entries: list = field(default_factory=list)


def verify_ideal_vanishing(
    inst, cfg: LimitConfig, seed=0, sampler=None, multipliers: int = 10
) -> ProbeReport:
    """|R(h g)| below tolerance for every ideal generator g and random
    monomial multipliers h of degree <= 2."""
    from .icis import build_ideal
    from .localalg import monomials_below

    if sampler is None:
        sampler = make_sampler(inst, cfg, seed)
    rng = np.random.default_rng(seed + 101)
    monos = monomials_below(inst.n, 3)
    entries = []
    worst = 0.0
    for gi, g in enumerate(build_ideal(inst)):
        picks = rng.integers(0, len(monos), size=multipliers)
        for pi in picks:
            h = Poly.monomial(monos[int(pi)])
            val = sampler.r_of(h * g, label=f"prop1 g{gi} h{monos[int(pi)]}")
            dev = abs(val.numeric)
            worst = max(worst, dev)
            entries.append((f"g{gi}*x^{monos[int(pi)]}", dev))
    return ProbeReport(
        ok=worst < cfg.tol_match,
        max_deviation=worst,
        tolerance=cfg.tol_match,
        entries=entries,
    )


def _random_small_poly(rng, nvars: int, deg: int) -> Poly:
    """Random polynomial with small integer coefficients, degree <= deg."""
    from .localalg import monomials_below

    terms = {}
    for m in monomials_below(nvars, deg + 1):
        c = int(rng.integers(-2, 3))
        if c:
            terms[m] = Fraction(c)
    if not terms:
        terms[(0,) * nvars] = Fraction(1)
    return Poly(terms, nvars)


def verify_class_invariance(
    inst, cfg: LimitConfig, seed=0, sampler=None, variants: int = 5
) -> ProbeReport:
    """R is unchanged under omega -> omega + f_1 eta + h df_1.

    The twisted 1-form is deformed with f_1 - eps_1 in place of f_1 (the
    deformation pattern under which the two restrictions to the fiber agree),
    and R of every basis monomial is compared against the base value.
    """
    from .icis import algebra

    if inst.k < 1:
        raise ValueError("class invariance needs k >= 1")
    if sampler is None:
        sampler = make_sampler(inst, cfg, seed)
    alg = algebra(inst)
    probes = [Poly.monomial(m) for m in alg.basis]
    base = [sampler.r_of(p).numeric for p in probes]
    rng = np.random.default_rng(seed + 202)
    entries = []
    worst = 0.0
    for v in range(variants):
        eta = [_random_small_poly(rng, inst.n, 1) for _ in range(inst.n)]
        h = _random_small_poly(rng, inst.n, 1)
        # on the fiber the twisted form has the same zeros with the first
        # multiplier shifted by h(x); Newton from there replaces the homotopy
        ch = CompiledPoly(h, inst.n)
        warm = {}
        for r in cfg.radii:
            base_pts = sampler.grids[r][0].full()
            shifted = base_pts.copy()
            shifted[:, inst.n] += ch.eval_many(base_pts[:, : inst.n])
            warm[r] = shifted
        twisted = ResidueSampler(
            DeformationFamily(inst, sampler.family.direction, twist=(eta, h)),
            sampler.expected,
            cfg,
            np.random.default_rng(seed + 300 + v),
            sampler.opts,
            warm_starts=warm,
        )
        for p, b in zip(probes, base):
            val = twisted.r_of(p).numeric
            dev = abs(val - b)
            worst = max(worst, dev)
            entries.append((f"variant{v} {p!r}", dev))
    return ProbeReport(
        ok=worst < cfg.tol_match,
        max_deviation=worst,
        tolerance=cfg.tol_match,
        entries=entries,
    )
