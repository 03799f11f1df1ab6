from fractions import Fraction
from math import comb

import pytest

from singforms.icis import (
    ProblemInstance,
    build_ideal,
    index_nu,
    minor,
    omega_module_dim,
    tau_prime,
)
from singforms.localalg import INFINITE
from singforms.polyring import Poly, parse

from oracles import macaulay_quotient_dim

VS2 = ["x1", "x2"]
VS3 = ["x1", "x2", "x3"]


def ex1(n, a):
    vs = [f"x{i+1}" for i in range(n)]
    f = parse(" + ".join(f"x{i+1}^2" for i in range(n)), vs)
    A = [a[i] * Poly.variable(i, n) for i in range(n)]
    return ProblemInstance(n, 1, [f], A)


def cusp():
    return ProblemInstance(
        2, 1, [parse("x^2 - y^3", ["x", "y"])],
        [Poly.one(2), Poly.zero(2)],
    )


def test_instance_validation():
    with pytest.raises(ValueError):
        ProblemInstance(2, 1, [parse("x1 + 1", VS2)], [Poly.one(2), Poly.zero(2)])
    with pytest.raises(ValueError):
        ProblemInstance(2, 2, [parse("x1", VS2)], [Poly.one(2), Poly.zero(2)])


def test_build_ideal_ex1_n2():
    inst = ex1(2, (1, 2))
    gens = build_ideal(inst)
    assert gens[0] == inst.f[0]
    assert gens[1] == 2 * parse("x1*x2", VS2)


def test_build_ideal_cusp():
    gens = build_ideal(cusp())
    assert gens[0] == parse("x^2 - y^3", ["x", "y"])
    assert gens[1] == parse("3*y^2", ["x", "y"])


def test_build_ideal_k0():
    inst = ProblemInstance(2, 0, [], [Poly.variable(0, 2), Poly.variable(1, 2)])
    gens = build_ideal(inst)
    assert gens == [Poly.variable(0, 2), Poly.variable(1, 2)]


@pytest.mark.parametrize("n,k", [(2, 1), (3, 1), (3, 2), (2, 0)])
def test_generator_count(n, k):
    if k == 2:
        inst = ProblemInstance(
            3,
            2,
            [parse("x1^2+x2^2+x3^2", VS3), parse("x1*x2", VS3)],
            [Poly.zero(3), Poly.zero(3), Poly.one(3)],
        )
    elif k == 0:
        inst = ProblemInstance(2, 0, [], [Poly.variable(0, 2), Poly.variable(1, 2)])
    else:
        inst = ex1(n, tuple(range(1, n + 1)))
    assert len(build_ideal(inst)) == comb(inst.n, inst.k + 1) + inst.k


def test_minor_alternating_in_columns():
    from singforms.icis import extended_matrix
    from singforms.polyring import det

    inst = ProblemInstance(
        3,
        2,
        [parse("x1^2+x2^2+x3^2", VS3), parse("x1*x2", VS3)],
        [Poly.zero(3), Poly.zero(3), Poly.one(3)],
    )
    mat = extended_matrix(inst)
    asc = det([[row[c] for c in (0, 1, 2)] for row in mat])
    swapped = det([[row[c] for c in (1, 0, 2)] for row in mat])
    assert asc == -swapped
    assert minor(inst, (0, 1, 2)) == asc
    with pytest.raises(ValueError):
        minor(inst, (0, 1))


# ---- dimensions -------------------------------------------------------------

def test_index_nu_values():
    assert index_nu(ex1(3, (1, 2, 4))) == 6
    assert index_nu(cusp()) == 4
    smooth = ProblemInstance(
        2, 1, [parse("x1", VS2)], [Poly.zero(2), Poly.variable(1, 2)]
    )
    assert index_nu(smooth) == 1


def test_index_nu_infinite():
    bad = ProblemInstance(
        2, 1, [parse("x1^2", VS2)], [Poly.one(2), Poly.zero(2)]
    )
    assert index_nu(bad) == INFINITE


def test_tau_prime_values():
    assert tau_prime(ex1(2, (1, 2))) == 1
    assert tau_prime(ex1(4, (1, 2, 4, 8))) == 1
    assert tau_prime(cusp()) == 2
    smooth = ProblemInstance(
        2, 1, [parse("x1", VS2)], [Poly.zero(2), Poly.variable(1, 2)]
    )
    assert tau_prime(smooth) == 0  # the 1x1 minor is a unit
    k0 = ProblemInstance(2, 0, [], [Poly.variable(0, 2), Poly.variable(1, 2)])
    assert tau_prime(k0) == 0


def test_omega_module_dim_matches_nu():
    for inst in [
        ex1(2, (1, 2)),
        cusp(),
        ProblemInstance(2, 1, [parse("x1", VS2)], [Poly.zero(2), Poly.variable(1, 2)]),
        ProblemInstance(2, 0, [], [Poly.variable(0, 2), Poly.variable(1, 2)]),
    ]:
        assert omega_module_dim(inst) == index_nu(inst)


def test_nu_invariant_under_equation_mixing():
    """Replacing f by M f for invertible constant M keeps the colength."""
    inst = ProblemInstance(
        3,
        2,
        [parse("x1^2+x2^2+x3^2", VS3), parse("x1*x2", VS3)],
        [Poly.zero(3), Poly.zero(3), Poly.one(3)],
    )
    base = index_nu(inst)
    mixes = [
        ((Fraction(1), Fraction(2)), (Fraction(0), Fraction(1))),
        ((Fraction(2), Fraction(1)), (Fraction(1), Fraction(1))),
        ((Fraction(0), Fraction(1)), (Fraction(-1), Fraction(3))),
    ]
    for m in mixes:
        f_new = [
            m[0][0] * inst.f[0] + m[0][1] * inst.f[1],
            m[1][0] * inst.f[0] + m[1][1] * inst.f[1],
        ]
        mixed = ProblemInstance(3, 2, f_new, inst.A)
        assert index_nu(mixed) == base


def test_tau_prime_ideal_against_oracle():
    """tau' of the cusp equals the independent truncated dimension."""
    c = cusp()
    gens = [c.f[0], c.f[0].diff(0), c.f[0].diff(1)]
    # ideal (f, 2x, -3y^2) has basis {1, y}
    assert tau_prime(c) == macaulay_quotient_dim(gens, 2, 4)
