"""Full analysis pipeline: algebra -> critical points -> limits -> forms.

One ``analyze`` call runs everything the report needs: dimensions, Gram
matrices, ranks/signatures, the named checks (ideal vanishing, class
invariance, module-dimension equality, two-route agreement, inequalities,
count certification, circle-mean stability) and solver diagnostics.  All
randomness flows from a single seed through fixed-order draws, so a report is
a deterministic function of (input, seed, config).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import numpy as np

from . import icis, quadforms, residuefn
from .critpts import CountMismatchError, DeformationFamily, SolveOptions, solve_family_at
from .icis import ProblemInstance
from .localalg import INFINITE
from .polyring import Poly
from .quadforms import FormGenerator, GramForm
from .residuefn import LimitConfig


class NonIsolatedError(RuntimeError):
    """The ideal has infinite colength: the input is not an isolated instance."""


@dataclass
class AnalysisConfig:
    limit: LimitConfig = field(default_factory=LimitConfig)
    seed: int = 42
    threads: int = 1
    exact: bool = True
    count_runs: int = 5
    prop1_multipliers: int = 10
    prop2_variants: int = 5

    def solve_options(self) -> SolveOptions:
        return SolveOptions(threads=self.threads)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    tolerance: str


@dataclass
class AnalysisResult:
    mode: str
    variables: tuple
    inst: ProblemInstance
    nu: int
    tau: int
    omega_dim: int
    truncation_order: int
    basis: list
    gram_qa: GramForm
    rank_qa: object
    signature_qa: object
    qomega: quadforms.QOmegaResult | None
    qomega_numeric_entries: dict
    generators: list
    checks: list
    diagnostics: dict
    config: AnalysisConfig

    @property
    def all_ok(self) -> bool:
        return all(c.ok for c in self.checks)


def default_generators(inst: ProblemInstance):
    """Coefficients 1 and x_i over every ascending (n-k)-subset."""
    import itertools

    gens = []
    subsets = list(itertools.combinations(range(inst.n), inst.n - inst.k))
    for L in subsets:
        gens.append(FormGenerator(Poly.one(inst.n), L))
    for i in range(inst.n):
        for L in subsets:
            gens.append(FormGenerator(Poly.variable(i, inst.n), L))
    return gens


def analyze(
    inst: ProblemInstance,
    config: AnalysisConfig | None = None,
    generators=None,
    mode: str = "icis",
    variables=None,
) -> AnalysisResult:
    config = config or AnalysisConfig()
    cfg = config.limit
    variables = tuple(variables or (f"x{i+1}" for i in range(inst.n)))

    alg = icis.algebra(inst)
    if alg.colength == INFINITE:
        raise NonIsolatedError("index_nu INFINITE: ideal has infinite colength")
    nu = alg.colength
    tau = icis.tau_prime(inst)
    omega_dim = icis.omega_module_dim(inst)

    sampler = residuefn.make_sampler(
        inst, cfg, config.seed, opts=config.solve_options(), expected=nu
    )
    qa = quadforms.gram_qa(
        inst, cfg, config.seed, alg=alg, sampler=sampler, want_exact=config.exact
    )
    rank_qa, signature_qa = qa.rank_signature()

    if generators is None:
        generators = default_generators(inst)
    qo = quadforms.gram_qomega(
        inst, generators, cfg, config.seed, alg=alg, qa=qa, sampler=sampler
    )

    checks = []

    # two-route agreement on all generator pairs
    max_two_route = 0.0
    qomega_numeric_entries = {}
    for a in range(len(generators)):
        for b in range(a, len(generators)):
            rv = quadforms.qomega_numeric(
                inst, generators[a], generators[b], cfg, config.seed, sampler=sampler
            )
            qomega_numeric_entries[(a, b)] = rv.numeric
            lam_val = (
                float(qo.gram.exact[a][b])
                if qo.gram.exact is not None
                else qo.gram.numeric[a][b]
            )
            dev = abs(rv.numeric - lam_val) / max(1.0, abs(rv.numeric), abs(lam_val))
            max_two_route = max(max_two_route, dev)
    checks.append(
        CheckResult(
            name="two_route_qomega",
            ok=max_two_route < 1e-6,
            detail=f"max_rel_dev={max_two_route:.3e}",
            tolerance="1e-06",
        )
    )

    # the functional vanishes on the ideal
    p1 = residuefn.verify_ideal_vanishing(
        inst, cfg, config.seed, sampler=sampler, multipliers=config.prop1_multipliers
    )
    checks.append(
        CheckResult(
            name="ideal_vanishing",
            ok=p1.ok,
            detail=f"max_dev={p1.max_deviation:.3e}",
            tolerance=f"{cfg.tol_match:.0e}",
        )
    )

    # the functional depends only on the class of the 1-form, k >= 1 only
    if inst.k >= 1:
        p2 = residuefn.verify_class_invariance(
            inst, cfg, config.seed, sampler=sampler, variants=config.prop2_variants
        )
        checks.append(
            CheckResult(
                name="class_invariance",
                ok=p2.ok,
                detail=f"max_dev={p2.max_deviation:.3e}",
                tolerance=f"{cfg.tol_match:.0e}",
            )
        )

    # module dimension equality
    checks.append(
        CheckResult(
            name="module_dim_equality",
            ok=omega_dim == nu,
            detail=f"omega_dim={omega_dim} nu={nu}",
            tolerance="exact",
        )
    )

    # rank inequalities
    if qo.rank is not None:
        ineq = quadforms.inequalities_report(
            nu, tau, rank_qa, qo.rank, qo.im_lambda_dim, omega_dim
        )
        checks.append(
            CheckResult(
                name="rank_inequalities",
                ok=ineq.ok,
                detail=(
                    f"rank_qa={rank_qa} rank_qomega={qo.rank} tau={tau} "
                    f"im_lambda_dim={qo.im_lambda_dim}"
                ),
                tolerance="exact",
            )
        )

    # count certification over fresh generic deformations
    rng = np.random.default_rng(config.seed + 77)
    worst_res = 0.0
    count_ok = True
    for _ in range(config.count_runs):
        u = rng.standard_normal(inst.n + inst.k) + 1j * rng.standard_normal(
            inst.n + inst.k
        )
        u = u / np.linalg.norm(u)
        fam = DeformationFamily(inst, tuple(u))
        try:
            ps = solve_family_at(
                fam, cfg.radii[0], nu, rng, config.solve_options()
            )
            worst_res = max(worst_res, max((p.residual for p in ps.points), default=0.0))
        except CountMismatchError:
            count_ok = False
    checks.append(
        CheckResult(
            name="count_certification",
            ok=count_ok and worst_res < 1e-10,
            detail=f"runs={config.count_runs} expected={nu} max_residual={worst_res:.3e}",
            tolerance="1e-10",
        )
    )

    # circle-mean stability across the two smallest radii (all probes seen)
    checks.append(
        CheckResult(
            name="circle_mean_stability",
            ok=sampler.max_probe_deviation < 1e-6,
            detail=f"max_rel_dev={sampler.max_probe_deviation:.3e}",
            tolerance="1e-06",
        )
    )

    diagnostics = dict(sorted(sampler.solver_diagnostics().items()))
    diagnostics["radii"] = list(cfg.radii)
    diagnostics["samples"] = cfg.samples

    return AnalysisResult(
        mode=mode,
        variables=variables,
        inst=inst,
        nu=nu,
        tau=tau,
        omega_dim=omega_dim,
        truncation_order=alg.N,
        basis=list(alg.basis),
        gram_qa=qa,
        rank_qa=rank_qa,
        signature_qa=signature_qa,
        qomega=qo,
        qomega_numeric_entries=qomega_numeric_entries,
        generators=list(generators),
        checks=checks,
        diagnostics=diagnostics,
        config=config,
    )
