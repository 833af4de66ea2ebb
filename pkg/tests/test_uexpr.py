from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sptwist.exactkernel import (
    exp_nilpotent,
    identity,
    kron,
    kron_all,
    log_one_plus,
    xi,
)
from sptwist.spalgebra import E, F, H, Representation, fundamental_rep, generators
from sptwist.twistchain import ChainSpec, build_chain
from sptwist.uexpr import (
    ONE,
    Const,
    Exp,
    Gen,
    Log1p,
    Param,
    Prod,
    Sum,
    UnboundParameterError,
    coproduct,
    counit,
    counit_evaluate,
    evaluate,
    exp,
    log1p,
    tensor,
    to_str,
)

REP2 = fundamental_rep(2)
RAISING2 = [g for g in generators(2) if g.role == "E"]


def _nilpotent_exprs():
    base = st.sampled_from(RAISING2).map(Gen)
    return st.recursive(
        base,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda p: p[0] + p[1]),
            st.tuples(sub, sub).map(lambda p: p[0] * p[1]),
            st.tuples(st.fractions(-2, 2, max_denominator=3), sub).map(lambda p: p[1] * p[0]),
        ),
        max_leaves=4,
    )


def _exprs():
    nil = _nilpotent_exprs()
    leaf = st.one_of(
        st.sampled_from(generators(2)).map(Gen),
        st.fractions(-2, 2, max_denominator=3).map(Const),
        nil.map(Exp),
        nil.map(lambda n: Log1p(n)),
    )
    return st.recursive(
        leaf,
        lambda sub: st.one_of(
            st.tuples(sub, sub).map(lambda p: p[0] + p[1]),
            st.tuples(sub, sub).map(lambda p: p[0] * p[1]),
        ),
        max_leaves=4,
    )


def test_evaluate_generator():
    rep = fundamental_rep(3)
    assert evaluate(Gen(E(1)), rep) == rep[E(1)]


def test_evaluate_against_hand_composition():
    rep = fundamental_rep(3)
    sigma = log1p(Gen(E(1)))
    e = Gen(E(2)) - Gen(E(1, 2)) ** 2 * exp(-sigma)
    e12 = rep[E(1, 2)]
    direct = rep[E(2)] - e12 @ e12 @ exp_nilpotent(-log_one_plus(rep[E(1)]))
    assert evaluate(e, rep) == direct


def test_zero_eta_extension_is_zero():
    fact = build_chain(ChainSpec.full(3))
    ext = fact.factors[-2]
    assert ext.kind == "extension"
    params = {"eta1": 0, "eta2": 0, "eta3": 0}
    assert evaluate(ext.exponent, fundamental_rep(3), params, legs=2).is_zero()


def test_unbound_parameter():
    with pytest.raises(UnboundParameterError):
        evaluate(Param("eta1") * Gen(E(1)), REP2)


def test_polynomial_parameter():
    m = evaluate(Param("eta1") * Gen(E(1)), REP2, {"eta1": xi(3)})
    assert m.is_poly
    assert m == REP2[E(1)].scale(xi(3))


def test_coproduct_of_generator():
    x = REP2[E(1, 2, "-")]
    one = identity(4)
    assert evaluate(coproduct(Gen(E(1, 2, "-"))), REP2, legs=2) == kron(x, one) + kron(one, x)


def test_coproduct_of_square_binomial():
    x = REP2[E(1, 2)]
    one = identity(4)
    lhs = evaluate(coproduct(Gen(E(1, 2)) ** 2), REP2, legs=2)
    assert lhs == kron(x @ x, one) + kron(x, x).scale(2) + kron(one, x @ x)


def test_coproduct_of_sigma_is_not_primitive():
    x = REP2[E(1)]
    one = identity(4)
    dx = kron(x, one) + kron(one, x)
    sigma = log1p(Gen(E(1)))
    got = evaluate(coproduct(sigma), REP2, legs=2)
    assert got == log_one_plus(dx)
    naive = kron(log_one_plus(x), one) + kron(one, log_one_plus(x))
    assert got != naive


def test_coproduct_on_second_leg_shifts_legs():
    e = tensor(Gen(H(1)), Gen(E(1)))
    assert coproduct(e, at=2) == Prod((Gen(H(1), 1), Gen(E(1), 2) + Gen(E(1), 3)))


def test_counit_on_primitive():
    x = Gen(F(1, 2))
    for side in ("left", "right"):
        assert counit_evaluate(coproduct(x), side, REP2) == REP2[F(1, 2)]


def test_counit_of_jordanian_exponent():
    e = tensor(Gen(H(1)), log1p(Gen(E(1))))
    assert counit_evaluate(e, "left", REP2).is_zero()
    assert exp_nilpotent(counit_evaluate(e, "left", REP2)) == identity(4)


def test_counit_of_full_chain():
    rep = fundamental_rep(3)
    fact = build_chain(ChainSpec.full(3, [1, Fraction(1, 2), Fraction(-2, 3)]))
    params = fact.default_params()
    for side in ("left", "right"):
        total = identity(6)
        for f in fact.factors:
            total = total @ exp_nilpotent(counit_evaluate(f.exponent, side, rep, params))
        assert total == identity(6)


@given(_exprs(), _exprs())
def test_evaluate_is_multiplicative(a, b):
    assert evaluate(a * b, REP2) == evaluate(a, REP2) @ evaluate(b, REP2)
    assert evaluate(a + b, REP2) == evaluate(a, REP2) + evaluate(b, REP2)


@given(_nilpotent_exprs())
def test_exp_and_log_nodes(n):
    m = evaluate(n, REP2)
    assert evaluate(Exp(n), REP2) == exp_nilpotent(m)
    assert evaluate(Exp(Log1p(n)), REP2) == identity(4) + m


@given(_exprs())
def test_coassociativity(e):
    d = coproduct(e)
    lhs = evaluate(coproduct(d, at=1), REP2, legs=3)
    rhs = evaluate(coproduct(d, at=2), REP2, legs=3)
    assert lhs == rhs


@given(_exprs())
def test_counit_axiom(e):
    expect = evaluate(e, REP2)
    d = coproduct(e)
    assert counit_evaluate(d, "left", REP2) == expect
    assert counit_evaluate(d, "right", REP2) == expect


@given(_exprs())
def test_coproduct_is_homomorphism_on_generators(e):
    # evaluating the coproduct equals evaluating e in the tensor-product representation
    d = 4
    mats = {}
    for g, x in REP2.matrices.items():
        mats[g] = kron(x, identity(d)) + kron(identity(d), x)
    doubled = Representation(d * d, mats, 2, "V(x)V")
    assert evaluate(coproduct(e), REP2, legs=2) == evaluate(e, doubled)


def test_leg_map():
    m = evaluate(Gen(E(1)), REP2, legs=3, leg_map={1: 3})
    assert m == kron_all([identity(4), identity(4), REP2[E(1)]])
    with pytest.raises(ValueError):
        evaluate(Gen(E(1), 2), REP2, legs=1)


def test_counit_structural():
    assert counit(Gen(E(1), 2), 1) == Gen(E(1), 1)


def test_printer():
    sigma = log1p(Gen(E(1)), name="σ_{1+1}")
    e = tensor(Gen(E(1, 2, "-")), Gen(E(1, 2)) * exp(sigma * Fraction(-1, 2)))
    assert to_str(e) == "E_{1-2} ⊗ E_{1+2}·e^{-1/2·σ_{1+1}}"
    assert to_str(tensor(Gen(E(1)), ONE) + tensor(ONE, Gen(E(1)))) == "E_{1+1} ⊗ 1 + 1 ⊗ E_{1+1}"
    assert to_str(Sum(())) == "0"
