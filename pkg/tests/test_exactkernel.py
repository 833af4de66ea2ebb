from fractions import Fraction

import pytest
from hypothesis import given
from flint import fmpq_poly

from sptwist.exactkernel import (
    DimensionError,
    ExactMatrix,
    NotNilpotentError,
    SingularMatrixError,
    embed_leg,
    exp_nilpotent,
    format_scalar,
    from_rows,
    identity,
    invert,
    kron,
    kron_all,
    log_one_plus,
    matrix_algebra,
    matrix_unit,
    nilpotency_index,
    tensor_flip,
    xi,
    xi_coefficient,
    zeros,
)

from conftest import rational_matrices, strictly_upper


def test_kron_of_identities():
    assert kron(identity(2), identity(2)) == identity(4)


@given(rational_matrices(3))
def test_commutator_with_itself_vanishes(m):
    assert matrix_algebra(m, m, "commutator").is_zero()


@given(rational_matrices(), rational_matrices(), rational_matrices(), rational_matrices())
def test_mixed_product_law(a, b, c, d):
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


def test_kron_against_hand_oracle():
    a = from_rows([[1, 2], [3, 4]])
    b = from_rows([[0, Fraction(1, 2)], [-1, 0]])
    expect = from_rows([
        [0, Fraction(1, 2), 0, 1],
        [-1, 0, -2, 0],
        [0, Fraction(3, 2), 0, 2],
        [-3, 0, -4, 0],
    ])
    assert kron(a, b) == expect


def test_matrix_algebra_dimension_mismatch():
    with pytest.raises(DimensionError):
        matrix_algebra(identity(2), identity(3), "add")
    with pytest.raises(ValueError):
        matrix_algebra(identity(2), identity(2), "divide")


def test_flip_identity():
    assert tensor_flip(identity(4), 2) == identity(4)


@given(rational_matrices(), rational_matrices())
def test_flip_swaps_kron_factors(a, b):
    assert tensor_flip(kron(a, b), 2) == kron(b, a)


@given(rational_matrices(4), rational_matrices(4))
def test_flip_is_involutive_automorphism(m, n):
    assert tensor_flip(tensor_flip(m, 2), 2) == m
    assert tensor_flip(m @ n, 2) == tensor_flip(m, 2) @ tensor_flip(n, 2)


def test_flip_entry_formula():
    m = matrix_unit(9, 1 * 3 + 2, 0 * 3 + 1)  # ((1,2),(0,1))
    assert tensor_flip(m, 3) == matrix_unit(9, 2 * 3 + 1, 1 * 3 + 0)


def test_flip_bad_dimension():
    with pytest.raises(DimensionError):
        tensor_flip(identity(5), 2)


@given(rational_matrices(4))
def test_embed_noop(m):
    assert embed_leg(m, (1, 2), 2, 2) == m


@given(rational_matrices(), rational_matrices())
def test_embed_outer_legs(a, b):
    assert embed_leg(kron(a, b), (1, 3), 3, 2) == kron_all([a, identity(2), b])


@given(rational_matrices(), rational_matrices())
def test_embed_reversed_positions(a, b):
    assert embed_leg(kron(a, b), (3, 1), 3, 2) == kron_all([b, identity(2), a])


def test_embed_identity():
    for pos in ((1, 2), (2, 3), (1, 3), (3, 2)):
        assert embed_leg(identity(4), pos, 3, 2) == identity(8)


@given(rational_matrices(4), rational_matrices(4), rational_matrices(4))
def test_embed_composition_associative(x, y, z):
    a, b, c = embed_leg(x, (1, 2), 3, 2), embed_leg(y, (2, 3), 3, 2), embed_leg(z, (1, 3), 3, 2)
    assert (a @ b) @ c == a @ (b @ c)


def test_embed_invalid_legs():
    with pytest.raises(ValueError):
        embed_leg(identity(4), (1, 1), 3, 2)
    with pytest.raises(ValueError):
        embed_leg(identity(4), (0, 2), 3, 2)


def test_exp_trivial_cases():
    assert exp_nilpotent(zeros(3)) == identity(3)
    e12 = matrix_unit(2, 0, 1)
    assert exp_nilpotent(e12) == identity(2) + e12


@given(strictly_upper(4))
def test_exp_of_negative_is_inverse(m):
    assert exp_nilpotent(m) @ exp_nilpotent(-m) == identity(4)


@given(strictly_upper(3))
def test_log_exp_round_trip(m):
    assert log_one_plus(exp_nilpotent(m) - identity(3)) == m
    assert exp_nilpotent(log_one_plus(m)) == identity(3) + m


def test_log_trivial_cases():
    assert log_one_plus(zeros(2)).is_zero()
    e12 = matrix_unit(2, 0, 1)
    assert log_one_plus(e12) == e12


def test_non_nilpotent_rejected():
    with pytest.raises(NotNilpotentError):
        exp_nilpotent(identity(2))
    with pytest.raises(NotNilpotentError):
        log_one_plus(from_rows([[0, 1], [1, 0]]))


def test_nilpotency_index():
    assert nilpotency_index(zeros(3)) == 1
    assert nilpotency_index(matrix_unit(3, 0, 2)) == 2
    assert nilpotency_index(matrix_unit(3, 0, 1) + matrix_unit(3, 1, 2)) == 3


@given(strictly_upper(4))
def test_invert_unipotent(m):
    assert invert(exp_nilpotent(m)) == exp_nilpotent(-m)


def test_invert_trivial_and_singular():
    assert invert(identity(3)) == identity(3)
    with pytest.raises(SingularMatrixError):
        invert(zeros(2))


def test_invert_polynomial():
    m = identity(2).to_poly() + matrix_unit(2, 0, 1).scale(xi())
    inv = invert(m)
    assert (m @ inv) == identity(2).to_poly()
    assert xi_coefficient(inv, 1) == -matrix_unit(2, 0, 1)


def test_invert_polynomial_singular():
    with pytest.raises(SingularMatrixError):
        invert(identity(2).scale(xi()))


def test_xi_coefficients():
    m = matrix_unit(2, 0, 1)
    p = identity(2).to_poly() + m.scale(xi())
    assert xi_coefficient(p, 0) == identity(2)
    assert xi_coefficient(p, 1) == m
    assert xi_coefficient(p, 5).is_zero()
    assert xi_coefficient(identity(2), 0) == identity(2)


def test_domain_promotion():
    p = identity(2) + matrix_unit(2, 1, 0).scale(fmpq_poly([1, 2]))
    assert p.is_poly and p.degree == 1
    assert (identity(2).to_poly() == identity(2))


def test_json_round_trip():
    m = from_rows([[Fraction(-2, 3), 0], [5, Fraction(1, 7)]])
    obj = m.to_json()
    assert obj == {"dim": 2, "entries": ["-2/3", "0/1", "5/1", "1/7"]}
    assert ExactMatrix.from_json(obj) == m
    p = identity(2).to_poly() + m.scale(xi(Fraction(1, 2)))
    assert ExactMatrix.from_json(p.to_json()) == p


def test_format_scalar():
    assert format_scalar(Fraction(3, -6)) == "-1/2"
    assert format_scalar(0) == "0/1"
