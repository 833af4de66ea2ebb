import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from sptwist.exactkernel import (
    ExactMatrix,
    exp_nilpotent,
    from_rows,
    identity,
    invert,
    kron,
    log_one_plus,
    tensor_flip,
    zeros,
)
from sptwist.spalgebra import E, F, H, fundamental_rep, symmetric_square_rep
from sptwist.twistchain import ChainSpec, TwistFactorization, build_chain, chain_matrix
from sptwist.uexpr import Gen, to_str
from sptwist.verify import (
    RMatrixResult,
    TwistedCoproduct,
    check_costr,
    check_cybe,
    check_eta_rescaling,
    check_primed_brackets,
    check_primitive,
    check_qybe,
    check_triangularity,
    check_twist_equation,
    classical_r,
    classical_r_formula,
    costr_identities,
    grade_conjugate,
    jordanian_first,
    primitivity_reports,
    r_matrix,
    r_matrix_missing_inverse,
    twisted_coproduct,
    wedge,
)

FIXTURES = Path(__file__).parent / "fixtures"
REP3 = fundamental_rep(3)
SAMPLES = [Fraction(1), Fraction(1, 2), Fraction(-2, 3)]


# ---- twist equation


def test_twist_equation_sp1():
    assert check_twist_equation(build_chain(ChainSpec.full(1)), fundamental_rep(1)).passed


def test_twist_equation_sp3_rational_samples():
    fact = build_chain(ChainSpec.full(3, SAMPLES))
    assert check_twist_equation(fact, REP3).passed


def test_reordered_chain_fails_with_witness():
    fact = jordanian_first(build_chain(ChainSpec.full(3)))
    assert [f.label for f in fact.factors][-3:] == ["J1", "E1,3", "E1,2"]
    report = check_twist_equation(fact, REP3)
    assert not report.passed
    first = report.witness["first"]
    assert first["check"] == "cocycle"
    assert first["lhs"] != first["rhs"]
    assert isinstance(first["row"], int) and isinstance(first["col"], int)


# ---- twisted coproducts


def test_empty_chain_gives_primitive_coproduct():
    fact = TwistFactorization(())
    x = REP3[E(1, 2)]
    one = identity(6)
    assert twisted_coproduct(Gen(E(1, 2)), fact, REP3) == kron(x, one) + kron(one, x)


def test_step1_leaves_e23_minus_primitive():
    fact = build_chain(ChainSpec.full(3, [1]))
    assert check_primitive(Gen(E(2, 3, "-")), fact, REP3).passed


def test_jordanian_coproduct_of_e():
    rep = fundamental_rep(1)
    fact = build_chain(ChainSpec.full(1))
    e = rep[E(1)]
    expect = kron(e, exp_nilpotent(log_one_plus(e))) + kron(identity(2), e)
    assert twisted_coproduct(Gen(E(1)), fact, rep) == expect


def test_costr_formula_terms():
    rhs = {label: to_str(expr) for label, _, expr in costr_identities()}
    assert "2·E_{1+2} ⊗ E_{1+2}·e^{-1/2·σ_{1+1}}" in rhs["E_{2+2}"]
    assert rhs["F_{3+3}"].endswith("- E_{1-3}·E_{1-3} ⊗ E_{1+1}·e^{-σ_{1+1}}")
    assert rhs["E_{2-3}"] == "E_{2-3} ⊗ 1 + 1 ⊗ E_{2-3}"


def test_costr_fundamental():
    report = check_costr(REP3)
    assert report.passed and len(report.details) == 8


def test_costr_raising_square_control():
    # E_{1+i}^2 in the F-sector has the wrong weight; the adjoint-sized
    # representation sees it, the defining one cannot (root-vector squares vanish there)
    assert check_costr(REP3, square="raising").passed
    report = check_costr(symmetric_square_rep(REP3), square="raising")
    assert not report.passed
    assert set(report.witness["failed"]) == {"Δ(F_{2+2})", "Δ(F_{3+3})"}


def test_primitivity_after_step1():
    spec = ChainSpec.full(3)
    fact = build_chain(spec.prefix(1))
    basis = build_chain(spec).bases[1]
    tc = TwistedCoproduct(fact, REP3)
    for g in (E(2), E(2, 3), F(2), F(2, 3), E(3), F(3), H(2), H(3), E(2, 3, "-"), F(2, 3, "-")):
        assert tc.check_primitive(basis[g]).passed, g


def test_primitivity_after_step2():
    spec = ChainSpec.full(3)
    basis = build_chain(spec).bases[2]
    tc = TwistedCoproduct(build_chain(spec.prefix(2)), REP3)
    for g in (E(3), F(3), H(3)):
        assert tc.check_primitive(basis[g]).passed, g


def test_raw_generator_not_primitive():
    fact = build_chain(ChainSpec.full(3, [1]))
    report = check_primitive(Gen(E(2)), fact, REP3)
    assert not report.passed and report.witness is not None


def test_primed_sector_brackets():
    spec = ChainSpec.full(4, [1, Fraction(1, 2), -2])
    for k in (1, 2, 3):
        assert check_primed_brackets(spec, k, fundamental_rep(4)).passed


# ---- R-matrices


def test_r_is_identity_at_zero_eta():
    R = r_matrix(build_chain(ChainSpec.full(3)), REP3, {"eta1": 0, "eta2": 0, "eta3": 0})
    assert R.matrix == identity(36)


def test_r_sp1_by_definition():
    rep = fundamental_rep(1)
    fact = build_chain(ChainSpec.full(1))
    twist = exp_nilpotent(kron(rep[H(1)], log_one_plus(rep[E(1)])))
    assert r_matrix(fact, rep).matrix == tensor_flip(twist, 2) @ invert(twist)


def test_r_sp3_regression_fixture():
    stored = json.loads((FIXTURES / "rmatrix_sp3.json").read_text())
    assert stored["N"] == 3 and stored["dim"] == 36
    R = r_matrix(build_chain(ChainSpec.full(3)), REP3).matrix
    assert ExactMatrix.from_json(stored) == R


def test_identity_r_is_triangular_and_solves_qybe():
    R = RMatrixResult(identity(4), 2)
    assert check_triangularity(R).passed and check_qybe(R).passed


def test_sp3_r_properties():
    R = r_matrix(build_chain(ChainSpec.full(3, SAMPLES)), REP3)
    assert check_triangularity(R).passed
    assert check_qybe(R).passed


def test_missing_inverse_breaks_triangularity():
    fact = build_chain(ChainSpec.full(3))
    for drop in (0, 5):
        assert not check_triangularity(r_matrix_missing_inverse(fact, REP3, drop)).passed


def test_random_matrix_fails_qybe():
    rng = random.Random(7)
    rows = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(4)] for _ in range(4)]
    m = from_rows(rows) + identity(4).scale(10)
    invert(m)  # invertible
    assert not check_qybe(RMatrixResult(m, 2)).passed


@settings(max_examples=6)
@given(
    st.lists(st.sampled_from(SAMPLES), min_size=2, max_size=2),
    st.integers(0, 1),
)
def test_twist_implies_qybe_sp2(etas, kappa):
    spec = ChainSpec.full(2, etas, [kappa])
    fact = build_chain(spec)
    rep = fundamental_rep(2)
    if check_twist_equation(fact, rep).passed:
        assert check_qybe(r_matrix(fact, rep)).passed


# ---- classical limit


def test_classical_r_sp1():
    rep = fundamental_rep(1)
    for eta in SAMPLES:
        r = classical_r(ChainSpec.full(1, [eta]), rep).matrix
        assert r == (kron(rep[H(1)], rep[E(1)]) - kron(rep[E(1)], rep[H(1)])).scale(eta)


def test_classical_r_sp3_formula():
    spec = ChainSpec.full(3, SAMPLES)
    r = classical_r(spec, REP3)
    assert r.matrix == classical_r_formula(spec, REP3)
    assert tensor_flip(r.matrix, 6) == -r.matrix
    assert r.kappa == (1, 1, 0)


def test_classical_r_pure_jordanian():
    spec = ChainSpec.full(3, SAMPLES, [0, 0])
    r = classical_r(spec, REP3).matrix
    expect = zeros(36)
    for k, eta in enumerate(SAMPLES, start=1):
        expect = expect + wedge(REP3[H(k)], REP3[E(k)]).scale(eta)
    assert r == expect


def test_cybe_zero_and_chain():
    assert check_cybe(zeros(36), REP3).passed
    assert check_cybe(classical_r(ChainSpec.full(3), REP3), REP3).passed


def test_cybe_negative_control():
    rep = fundamental_rep(2)
    r = wedge(rep[H(1)], rep[E(1)]) + wedge(rep[E(2)], rep[H(1)])
    assert tensor_flip(r, 4) == -r
    assert not check_cybe(r, rep).passed


# ---- rescaling by the grading


@pytest.mark.parametrize("s", [1, 2, 3])
def test_eta_rescaling(s):
    assert check_eta_rescaling(ChainSpec.full(3, SAMPLES), s, 2, REP3).passed


def test_rescaling_is_not_vacuous():
    spec = ChainSpec.full(3)
    R = r_matrix(build_chain(spec), REP3).matrix
    assert grade_conjugate(R, REP3[H(2)], 2, 2) != R


def test_rescaling_trivial_when_eta_zero():
    spec = ChainSpec.full(3, [1, 0, Fraction(1, 2)])
    R = r_matrix(build_chain(spec), REP3).matrix
    assert grade_conjugate(R, REP3[H(2)], 3, 2) == R


def test_grade_conjugate_rejects_irrational_powers():
    # H_ss has half-integer spectrum, so c must be a square when half powers occur
    with pytest.raises(ValueError):
        grade_conjugate(REP3[E(1, 2)], REP3[H(1)], 2, 1)
    assert grade_conjugate(REP3[E(1, 2)], REP3[H(1)], 4, 1) == REP3[E(1, 2)].scale(2)
