"""Command-line interface: problem-file ingestion, analysis reports, corpus.

``singforms analyze FILE`` runs the full pipeline on one problem file and
prints a structured-text report (exit 0 iff all checks pass, 2 on solver or
limit failures, 3 on non-isolated input).  ``singforms verify-corpus`` runs
the built-in instances against their expected values and the property checks.

Problem file format (keys may repeat; '#' starts a comment):

    mode: icis              # or elkh (then omit f)
    variables: x1, x2
    f: x1^2 + x2^2
    omega: x1, 2*x2

Polynomials follow the expression grammar of the parser (explicit '*', '^'
powers, rational coefficients like 3/2).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from .corpus import CORPUS
from .critpts import CountMismatchError
from .icis import ProblemInstance
from .pipeline import AnalysisConfig, AnalysisResult, NonIsolatedError, analyze
from .polyring import Poly, PolyParseError, parse, to_string
from .residuefn import LimitConfig, NonConvergentError

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_SOLVER = 2
EXIT_NON_ISOLATED = 3


@dataclass
class ProblemFile:
    variables: list
    f: list
    omega: list
    mode: str = "icis"


def parse_problem_file(text: str) -> ProblemFile:
    variables = []
    f_strings = []
    omega_strings = []
    mode = "icis"
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"line {lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip().lower()
        parts = [p.strip() for p in value.split(",") if p.strip()]
        if key == "variables":
            variables.extend(parts)
        elif key == "f":
            f_strings.extend(parts)
        elif key == "omega":
            omega_strings.extend(parts)
        elif key == "mode":
            if len(parts) != 1 or parts[0] not in ("icis", "elkh"):
                raise ValueError(f"line {lineno}: mode must be icis or elkh")
            mode = parts[0]
        else:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
    if not variables:
        raise ValueError("missing 'variables'")
    if len(omega_strings) != len(variables):
        raise ValueError(
            f"omega must list {len(variables)} coefficients, got {len(omega_strings)}"
        )
    if mode == "elkh" and f_strings:
        raise ValueError("elkh mode takes no equations")
    if mode == "icis" and not f_strings:
        raise ValueError("icis mode needs at least one equation")
    return ProblemFile(variables=variables, f=f_strings, omega=omega_strings, mode=mode)


def problem_to_instance(pf: ProblemFile) -> ProblemInstance:
    vs = pf.variables
    n = len(vs)
    f = [parse(s, vs) for s in pf.f]
    A = [parse(s, vs) for s in pf.omega]
    return ProblemInstance(n, len(f), f, A)


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------


def _fmt_float(x: float) -> str:
    return f"{x:.12e}"


def _fmt_exact_matrix(mat) -> list:
    return [" ".join(str(v) for v in row) for row in mat]


def _fmt_numeric_matrix(mat) -> list:
    return [" ".join(_fmt_float(v) for v in row) for row in mat]


def render_report(name: str, pf: ProblemFile, res: AnalysisResult) -> str:
    cfg = res.config
    vs = list(res.variables)
    lines = []
    add = lines.append
    add("singforms report")
    add(f"instance: {name}")
    add(f"mode: {res.mode}")
    add(f"variables: {' '.join(vs)}")
    add(f"n: {res.inst.n}")
    add(f"k: {res.inst.k}")
    for p in res.inst.f:
        add(f"f: {p.to_string(vs)}")
    add("omega: " + ", ".join(p.to_string(vs) for p in res.inst.A))
    add(f"seed: {cfg.seed}")
    add("radii: " + " ".join(_fmt_float(r) for r in cfg.limit.radii))
    add(f"samples: {cfg.limit.samples}")
    add(f"tol_match: {cfg.limit.tol_match:.0e}")
    add(f"max_denominator: {cfg.limit.max_denominator}")
    add(f"nu: {res.nu}")
    add(f"tau_prime: {res.tau}")
    add(f"omega_dim: {res.omega_dim}")
    add(f"truncation_order: {res.truncation_order}")
    add(
        "basis: "
        + " ".join(to_string(Poly.monomial(m), vs) for m in res.basis)
    )
    qa = res.gram_qa
    if qa.exact is not None:
        add("gram_qa_exact:")
        for row in _fmt_exact_matrix(qa.exact):
            add("  " + row)
    else:
        add("gram_qa_numeric:")
        for row in _fmt_numeric_matrix(qa.numeric):
            add("  " + row)
        if qa.failed_entries:
            add(
                "gram_qa_unrationalized: "
                + " ".join(f"({i},{j})" for i, j in qa.failed_entries)
            )
    add(f"rank_qa: {res.rank_qa}")
    add(f"signature_qa: {res.signature_qa}")
    if res.qomega is not None:
        add("generators: " + ", ".join(g.label(vs) for g in res.generators))
        add(
            "lambda_convention: Lambda(h*dx_L) = sgn(K,L)*h*det(df_i/dx_j, j in K),"
            " K the complementary block, columns ascending, sgn the shuffle sign"
        )
        qo = res.qomega
        if qo.gram.exact is not None:
            add("gram_qomega_exact:")
            for row in _fmt_exact_matrix(qo.gram.exact):
                add("  " + row)
        else:
            add("gram_qomega_numeric:")
            for row in _fmt_numeric_matrix(qo.gram.numeric):
                add("  " + row)
        add(f"rank_qomega: {qo.rank}")
        add(f"im_lambda_dim: {qo.im_lambda_dim}")
    for c in res.checks:
        status = "pass" if c.ok else "FAIL"
        add(f"check {c.name}: {status} {c.detail} tol={c.tolerance}")
    for key, val in res.diagnostics.items():
        add(f"diag {key}: {val}")
    add(f"all_checks: {'pass' if res.all_ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _config_from_args(args) -> AnalysisConfig:
    radii = tuple(float(r) for r in args.radii.split(","))
    limit = LimitConfig(
        radii=radii,
        samples=args.samples,
        tol_match=args.tol_match,
        max_denominator=args.max_den,
    )
    return AnalysisConfig(
        limit=limit,
        seed=args.seed,
        threads=args.threads,
        exact=args.exact,
    )


def cmd_analyze(args) -> int:
    try:
        text = open(args.file).read()
        pf = parse_problem_file(text)
        inst = problem_to_instance(pf)
    except (OSError, ValueError, PolyParseError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    config = _config_from_args(args)
    try:
        res = analyze(
            inst, config, mode=pf.mode, variables=tuple(pf.variables)
        )
    except NonIsolatedError as exc:
        print(f"non-isolated input: {exc}", file=sys.stderr)
        return EXIT_NON_ISOLATED
    except (CountMismatchError, NonConvergentError) as exc:
        print(f"solver/limit failure: {exc}", file=sys.stderr)
        if isinstance(exc, CountMismatchError) and exc.diagnostics:
            for k, v in sorted(exc.diagnostics.items()):
                print(f"diag {k}: {v}", file=sys.stderr)
        if isinstance(exc, NonConvergentError):
            for r, m in exc.deviations:
                print(f"diag circle_mean radius={r:g}: {m}", file=sys.stderr)
        return EXIT_SOLVER
    report = render_report(args.file, pf, res)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    return EXIT_OK if res.all_ok else EXIT_SOLVER


def _check_claim(name, expected, computed, rows):
    ok = expected == computed
    rows.append((name, str(expected), str(computed), "pass" if ok else "FAIL"))
    return ok


def cmd_verify_corpus(args) -> int:
    config = _config_from_args(args)
    names = [args.only] if args.only else list(CORPUS)
    all_ok = True
    for name in names:
        ci = CORPUS[name]
        inst = ci.instance()
        gens = ci.form_generators() or None
        try:
            res = analyze(
                inst,
                config,
                generators=gens,
                mode=ci.mode,
                variables=ci.variables,
            )
        except (NonIsolatedError, CountMismatchError, NonConvergentError) as exc:
            print(f"{name}: pipeline failure: {exc}")
            all_ok = False
            continue
        rows = []
        cl = ci.claims
        if "nu" in cl:
            all_ok &= _check_claim("nu", cl["nu"], res.nu, rows)
        if "tau_prime" in cl:
            all_ok &= _check_claim("tau_prime", cl["tau_prime"], res.tau, rows)
        if "rank_qa" in cl:
            all_ok &= _check_claim("rank_qa", cl["rank_qa"], res.rank_qa, rows)
        if "signature_qa" in cl:
            all_ok &= _check_claim(
                "signature_qa", cl["signature_qa"], res.signature_qa, rows
            )
        if "rank_qomega" in cl and res.qomega is not None:
            all_ok &= _check_claim(
                "rank_qomega", cl["rank_qomega"], res.qomega.rank, rows
            )
        if "qomega_diag" in cl and res.qomega.gram.exact is not None:
            diag = [
                res.qomega.gram.exact[i][i]
                for i in range(res.qomega.gram.dim)
            ]
            all_ok &= _check_claim("qomega_diag", cl["qomega_diag"], diag, rows)
        if "gram_qa" in cl and res.gram_qa.exact is not None:
            want = [[Fraction(v) for v in row] for row in cl["gram_qa"]]
            all_ok &= _check_claim("gram_qa", want, res.gram_qa.exact, rows)
        if "tight_gap" in cl and res.qomega is not None:
            tight = (res.rank_qa - res.qomega.rank) == 2 * res.tau
            all_ok &= _check_claim("tight_gap", cl["tight_gap"], tight, rows)
        ok_checks = res.all_ok
        all_ok &= ok_checks
        print(f"instance {name}: claims+checks {'pass' if ok_checks else 'FAIL'}")
        for rname, want, got, status in rows:
            print(f"  claim {rname}: expected {want} computed {got} {status}")
        for c in res.checks:
            status = "pass" if c.ok else "FAIL"
            print(f"  check {c.name}: {status} {c.detail} tol={c.tolerance}")
    print(f"corpus: {'all pass' if all_ok else 'FAILURES'}")
    return EXIT_OK if all_ok else EXIT_SOLVER


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="singforms",
        description="quadratic forms of a 1-form on an ICIS: dimensions, "
        "Gram matrices, ranks, signatures, and verification checks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--radii", default="1e-2,5e-3", help="decreasing list")
        p.add_argument("--samples", type=int, default=64)
        p.add_argument("--tol-match", dest="tol_match", type=float, default=1e-8)
        p.add_argument("--max-den", dest="max_den", type=int, default=10**6)
        p.add_argument(
            "--exact", dest="exact", action="store_true", default=True
        )
        p.add_argument("--no-exact", dest="exact", action="store_false")
        p.add_argument("--threads", type=int, default=1)

    pa = sub.add_parser("analyze", help="analyze one problem file")
    pa.add_argument("file")
    pa.add_argument("--out", default=None)
    common(pa)
    pa.set_defaults(func=cmd_analyze)

    pv = sub.add_parser("verify-corpus", help="run the built-in instances")
    pv.add_argument("--only", default=None, choices=list(CORPUS))
    common(pv)
    pv.set_defaults(func=cmd_verify_corpus)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
