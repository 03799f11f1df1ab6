"""Built-in verification corpus: worked instances with frozen expected values.

Expected values marked in ``claims`` are either classical closed forms or were
hand-derived independently (closed-form critical points for the quadric
family; residue-symbol transformations for the cusp and the deformed A2
instance); the test suite re-derives the derivable ones with independent
oracles.  Instances without claims are exercised through the property checks
only.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .icis import ProblemInstance
from .polyring import parse
from .quadforms import FormGenerator


@dataclass(frozen=True)
class CorpusInstance:
    name: str
    mode: str  # "icis" | "elkh"
    variables: tuple
    f_strings: tuple
    omega_strings: tuple
    generators: tuple = ()
    claims: dict = field(default_factory=dict)

    def instance(self) -> ProblemInstance:
        vs = list(self.variables)
        n = len(vs)
        f = [parse(s, vs) for s in self.f_strings]
        A = [parse(s, vs) for s in self.omega_strings]
        k = len(f)
        return ProblemInstance(n, k, f, A)

    def form_generators(self):
        vs = list(self.variables)
        out = []
        for coeff_str, subset in self.generators:
            out.append(FormGenerator(parse(coeff_str, vs), tuple(subset)))
        return out


def _ex1(n: int, a: tuple) -> CorpusInstance:
    vs = tuple(f"x{i+1}" for i in range(n))
    f = " + ".join(f"x{i+1}^2" for i in range(n))
    omega = tuple(f"{a[i]}*x{i+1}" for i in range(n))
    gens = []
    for i in range(n):  # alpha_i = dx_1 ^ .. ^ (skip i) ^ .. ^ dx_n
        L = tuple(j for j in range(n) if j != i)
        gens.append(("1", L))
    for i in range(n):  # beta_i = x_i alpha_i
        L = tuple(j for j in range(n) if j != i)
        gens.append((f"x{i+1}", L))
    qdiag = [Fraction(2) / _prod(a, i) for i in range(n)]
    return CorpusInstance(
        name=f"ex1_n{n}",
        mode="icis",
        variables=vs,
        f_strings=(f,),
        omega_strings=omega,
        generators=tuple(gens),
        claims={
            "nu": 2 * n,
            "tau_prime": 1,
            "rank_qa": n + 2,
            "rank_qomega": n,
            "signature_qa": 1 if n % 2 else 0,
            "qomega_diag": qdiag + [Fraction(0)] * n,
            "tight_gap": True,  # rank_qa - rank_qomega == 2 tau'
        },
    )


def _prod(a, i):
    p = 1
    for j in range(len(a)):
        if j != i:
            p *= a[j] - a[i]
    return p


def build_corpus():
    instances = [
        _ex1(2, (1, 2)),
        _ex1(3, (1, 2, 4)),
        _ex1(4, (1, 2, 4, 8)),
        CorpusInstance(
            name="cusp",
            mode="icis",
            variables=("x", "y"),
            f_strings=("x^2 - y^3",),
            omega_strings=("1", "0"),
            generators=(
                ("1", (0,)),
                ("1", (1,)),
                ("x", (1,)),
                ("y", (1,)),
                ("x*y", (1,)),
            ),
            claims={
                "nu": 4,
                "tau_prime": 2,
                "rank_qa": 4,
                "rank_qomega": 0,
                "signature_qa": 0,
                # R(x y) = 1/3 and R vanishes on 1, x, y, x^2, y^2, ...:
                # via the residue transformation (x^2, y^2) = D (f, m2),
                # det D = 1/3
                "gram_qa": [
                    ["0", "0", "0", "1/3"],
                    ["0", "0", "1/3", "0"],
                    ["0", "1/3", "0", "0"],
                    ["1/3", "0", "0", "0"],
                ],
                "tight_gap": True,
            },
        ),
        CorpusInstance(
            name="ex2_n3",
            mode="icis",
            variables=("x1", "x2", "x3"),
            f_strings=("x1^2 + x2^2 + x3^3",),
            omega_strings=("1", "0", "0"),
            generators=(
                ("1", (0, 1)),
                ("1", (0, 2)),
                ("1", (1, 2)),
                ("x1", (1, 2)),
                ("x3", (1, 2)),
                ("x1*x3", (1, 2)),
            ),
            claims={
                "nu": 4,
                "tau_prime": 2,
                "rank_qa": 2,
                "rank_qomega": 0,
                "signature_qa": 0,
                # basis (1, x1, x3, x1 x3); only R(x3) = 1/3 is nonzero on
                # basis products (residue transformation against
                # (x1^2, x2, x3^2), det D = 1/6, bridge weight 2 x1)
                "gram_qa": [
                    ["0", "0", "1/3", "0"],
                    ["0", "0", "0", "0"],
                    ["1/3", "0", "0", "0"],
                    ["0", "0", "0", "0"],
                ],
            },
        ),
        CorpusInstance(
            name="smooth_line",
            mode="icis",
            variables=("x1", "x2"),
            f_strings=("x1",),
            omega_strings=("0", "x2"),
            generators=(("1", (1,)), ("1", (0,)), ("x2", (1,))),
            claims={
                "nu": 1,
                "tau_prime": 0,
                "rank_qa": 1,
                "rank_qomega": 1,
                "signature_qa": 1,
                "gram_qa": [["1"]],
            },
        ),
        CorpusInstance(
            name="four_lines",
            mode="icis",
            variables=("x1", "x2", "x3"),
            f_strings=("x1^2 + x2^2 + x3^2", "x1*x2"),
            omega_strings=("0", "0", "1"),
            generators=(
                ("1", (0,)),
                ("1", (1,)),
                ("1", (2,)),
                ("x3", (2,)),
                ("x1", (0,)),
            ),
            claims={},  # k = 2 coverage; property checks only
        ),
        CorpusInstance(
            name="elkh_z3",
            mode="elkh",
            variables=("x", "y"),
            f_strings=(),
            omega_strings=("x^3 - 3*x*y^2", "3*x^2*y - y^3"),
            generators=(("1", (0, 1)), ("x", (0, 1))),
            claims={
                "nu": 9,
                "rank_qa": 9,
                "signature_qa": 3,  # local degree of the cube map
            },
        ),
        CorpusInstance(
            name="elkh_identity",
            mode="elkh",
            variables=("x", "y"),
            f_strings=(),
            omega_strings=("x", "y"),
            generators=(("1", (0, 1)),),
            claims={
                "nu": 1,
                "rank_qa": 1,
                "signature_qa": 1,
                "gram_qa": [["1"]],
            },
        ),
    ]
    return {c.name: c for c in instances}


CORPUS = build_corpus()
