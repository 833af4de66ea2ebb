"""Exact checks: twist equations, twisted coproducts, R-matrices, classical limit.

Everything is decided by exact matrix equality in tensor powers of a chosen
representation.  This is necessary evidence for the universal identities,
not a proof; richer representations give stronger evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from flint import fmpq, fmpq_mat

from .exactkernel import (
    ExactMatrix,
    as_scalar,
    embed_leg,
    exp_nilpotent,
    format_scalar,
    identity,
    invert,
    kron,
    tensor_flip,
    to_fraction,
    xi_coefficient,
    zeros,
)
from .report import CheckReport, combine, compare_matrices
from .spalgebra import (
    E,
    F,
    H,
    GeneratorId,
    Representation,
    fundamental_rep,
    structure_table,
    verify_rep,
)
from .twistchain import (
    HALF,
    ChainSpec,
    TwistFactorization,
    build_chain,
    chain_coproduct_image,
    chain_matrix,
)
from .uexpr import Expr, Gen, const, coproduct, counit_evaluate, evaluate, exp, log1p, tensor


# --------------------------------------------------------------------------
# twist equations


def check_counit(fact: TwistFactorization, rep: Representation, params=None) -> CheckReport:
    """(eps (x) id) F = (id (x) eps) F = 1, factor by factor."""
    params = fact.default_params() if params is None else params
    parts = []
    for side in ("left", "right"):
        out = identity(rep.dim)
        for f in fact.factors:
            out = out @ exp_nilpotent(counit_evaluate(f.exponent, side, rep, params))
        parts.append(compare_matrices(f"counit_{side}", out, identity(rep.dim)))
    return combine("counit", parts)


def check_cocycle(fact: TwistFactorization, rep: Representation, params=None) -> CheckReport:
    """F_12 (Delta (x) id) F = F_23 (id (x) Delta) F in rep^{(x)3}."""
    params = fact.default_params() if params is None else params
    d = rep.dim
    twist = chain_matrix(fact, rep, params)
    lhs = embed_leg(twist, (1, 2), 3, d) @ chain_coproduct_image(fact, rep, params, "delta_id")
    rhs = embed_leg(twist, (2, 3), 3, d) @ chain_coproduct_image(fact, rep, params, "id_delta")
    return compare_matrices("cocycle", lhs, rhs, legs="V^3")


def check_twist_equation(fact: TwistFactorization, rep: Representation, params=None,
                         name: str = "twist_equation") -> CheckReport:
    return combine(name, [check_cocycle(fact, rep, params), check_counit(fact, rep, params)])


# --------------------------------------------------------------------------
# twisted coproducts


class TwistedCoproduct:
    """Delta_F(x) = F Delta(x) F^{-1} with F and F^{-1} computed once."""

    def __init__(self, fact: TwistFactorization, rep: Representation, params=None):
        self.fact = fact
        self.rep = rep
        self.params = fact.default_params() if params is None else dict(params)
        self.twist = chain_matrix(fact, rep, self.params)
        self.inverse = invert(self.twist)

    def __call__(self, x: Expr) -> ExactMatrix:
        delta = evaluate(coproduct(x), self.rep, self.params, legs=2)
        return self.twist @ delta @ self.inverse

    def primitive_image(self, x: Expr) -> ExactMatrix:
        m = evaluate(x, self.rep, self.params)
        one = identity(self.rep.dim)
        return kron(m, one) + kron(one, m)

    def check_primitive(self, x: Expr, name: str | None = None) -> CheckReport:
        return compare_matrices(name or f"primitive {x}", self(x), self.primitive_image(x))


def twisted_coproduct(x: Expr, fact: TwistFactorization, rep: Representation, params=None) -> ExactMatrix:
    return TwistedCoproduct(fact, rep, params)(x)


def check_primitive(x: Expr, fact: TwistFactorization, rep: Representation, params=None) -> CheckReport:
    return TwistedCoproduct(fact, rep, params).check_primitive(x)


def primitivity_reports(spec: ChainSpec, rep: Representation, levels: Sequence[int] | None = None) -> CheckReport:
    """After steps 1..k, every level-k generator with indices > k is primitive."""
    full = build_chain(spec)
    levels = range(1, spec.length + 1) if levels is None else levels
    parts = []
    for k in levels:
        basis = full.bases[k]
        sector = basis.upper_sector()
        if not sector:
            continue
        tc = TwistedCoproduct(build_chain(spec.prefix(k)), rep, spec.prefix(k).params())
        for g in sector:
            parts.append(tc.check_primitive(basis[g], f"level {k}: {g}"))
    return combine(f"primitivity sp({spec.N})", parts)


def primed_sector_rep(spec: ChainSpec, k: int, rep: Representation) -> Representation:
    """Level-k generators with indices > k, relabelled as sp(N - k) generators."""
    basis = build_chain(spec).bases[k]
    params = spec.params()
    mats = {}
    for g in basis.upper_sector():
        shifted = GeneratorId(g.role, g.i - k, g.j - k, g.sign)
        mats[shifted] = evaluate(basis[g], rep, params)
    return Representation(rep.dim, mats, spec.N - k, f"level-{k} sector of {rep.name}")


def check_primed_brackets(spec: ChainSpec, k: int, rep: Representation) -> CheckReport:
    """The deformed upper sector still satisfies the sp(N - k) bracket table."""
    return verify_rep(primed_sector_rep(spec, k, rep), structure_table(spec.N - k))


def costr_identities(square: str = "lowering") -> list[tuple[str, GeneratorId, Expr]]:
    """The eight twisted coproducts of the sp(2) generators after the first sp(3) step.

    Right-hand sides are doubled Exprs.  ``square`` picks the root vector
    squared in the last term of F_{2+2} and F_{3+3}: ``"lowering"`` uses
    E_{1-i}^2 (the consistent form), ``"raising"`` uses E_{1+i}^2, which has
    the wrong weight and serves as a control.
    """
    s = log1p(Gen(E(1)), name="σ_{1+1}")
    half = exp(s * (-HALF))
    full = exp(-s)
    one = const(1)
    e11 = Gen(E(1))
    em = lambda i: Gen(E(1, i, "-"))  # noqa: E731
    ep = lambda i: Gen(E(1, i, "+"))  # noqa: E731
    sq = em if square == "lowering" else ep

    def prim(g):
        return tensor(Gen(g), one) + tensor(one, Gen(g))

    return [
        ("E_{2+2}", E(2), prim(E(2)) + 2 * tensor(ep(2), ep(2) * half) + tensor(e11, ep(2) ** 2 * full)),
        ("E_{2+3}", E(2, 3),
         prim(E(2, 3)) + tensor(ep(2), ep(3) * half) + tensor(ep(3), ep(2) * half)
         + tensor(e11, ep(2) * ep(3) * full)),
        ("E_{2-3}", E(2, 3, "-"), prim(E(2, 3, "-"))),
        ("E_{3+3}", E(3), prim(E(3)) + 2 * tensor(ep(3), ep(3) * half) + tensor(e11, ep(3) ** 2 * full)),
        ("F_{2+2}", F(2), prim(F(2)) + 2 * tensor(em(2), em(2) * half) - tensor(sq(2) ** 2, e11 * full)),
        ("F_{2+3}", F(2, 3),
         prim(F(2, 3)) + tensor(em(2), em(3) * half) + tensor(em(3), em(2) * half)
         - tensor(em(2) * em(3), e11 * full)),
        ("F_{2-3}", F(2, 3, "-"), prim(F(2, 3, "-"))),
        ("F_{3+3}", F(3), prim(F(3)) + 2 * tensor(em(3), em(3) * half) - tensor(sq(3) ** 2, e11 * full)),
    ]


def check_costr(rep: Representation | None = None, square: str = "lowering") -> CheckReport:
    """All eight twisted coproducts for the first step of the sp(3) chain, eta_1 = 1."""
    rep = rep or fundamental_rep(3)
    fact = build_chain(ChainSpec.full(3, eta=[1], kappa=[1]))
    tc = TwistedCoproduct(fact, rep)
    parts = []
    for label, g, rhs in costr_identities(square):
        parts.append(compare_matrices(f"Δ({label})", tc(Gen(g)), evaluate(rhs, rep, {}, legs=2)))
    return combine(f"costr [{rep.name}]", parts)


# --------------------------------------------------------------------------
# R-matrices


@dataclass
class RMatrixResult:
    matrix: ExactMatrix
    leg_dim: int
    spec: ChainSpec | None = None
    params: dict = field(default_factory=dict)


def r_matrix(fact: TwistFactorization, rep: Representation, params=None) -> RMatrixResult:
    """R = F_21 F^{-1}."""
    params = fact.default_params() if params is None else dict(params)
    twist = chain_matrix(fact, rep, params)
    return RMatrixResult(tensor_flip(twist, rep.dim) @ invert(twist), rep.dim, fact.spec, params)


def check_triangularity(R: RMatrixResult) -> CheckReport:
    m = R.matrix
    return compare_matrices("triangularity", tensor_flip(m, R.leg_dim) @ m, identity(m.dim))


def check_qybe(R: RMatrixResult) -> CheckReport:
    d = R.leg_dim
    r12, r13, r23 = (embed_leg(R.matrix, p, 3, d) for p in ((1, 2), (1, 3), (2, 3)))
    return compare_matrices("qybe", r12 @ r13 @ r23, r23 @ r13 @ r12)


# --------------------------------------------------------------------------
# classical limit


@dataclass
class ClassicalRMatrix:
    matrix: ExactMatrix
    leg_dim: int
    eta: tuple
    kappa: tuple
    first_order: ExactMatrix | None = None  # xi^1 coefficient of F


def wedge(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return kron(a, b) - kron(b, a)


def classical_r(spec: ChainSpec, rep: Representation) -> ClassicalRMatrix:
    """r = f - f_21 where F(xi) = 1 + xi f + O(xi^2) after eta_k -> xi eta_k."""
    fact = build_chain(spec)
    twist = chain_matrix(fact, rep, spec.classical_params())
    f1 = xi_coefficient(twist, 1)
    r = f1 - tensor_flip(f1, rep.dim)
    return ClassicalRMatrix(r, rep.dim, spec.eta, spec.kappa, f1)


def classical_r_formula(spec: ChainSpec, rep: Representation) -> ExactMatrix:
    """sum_k eta_k (H_kk ^ E_{k+k} + kappa_k sum_{i>k} E_{k-i} ^ E_{k+i})."""
    out = zeros(rep.dim**2)
    for step, kappa in zip(spec.steps, spec.kappa):
        k = step.k
        term = wedge(rep[H(k)], rep[E(k)])
        if kappa:
            for i in range(k + 1, spec.N + 1):
                term = term + wedge(rep[E(k, i, "-")], rep[E(k, i, "+")])
        out = out + term.scale(step.eta)
    return out


def check_cybe(r: ClassicalRMatrix | ExactMatrix, rep: Representation | int) -> CheckReport:
    m = r.matrix if isinstance(r, ClassicalRMatrix) else r
    d = rep if isinstance(rep, int) else rep.dim
    r12, r13, r23 = (embed_leg(m, p, 3, d) for p in ((1, 2), (1, 3), (2, 3)))
    lhs = (r12 @ r13 - r13 @ r12) + (r12 @ r23 - r23 @ r12) + (r13 @ r23 - r23 @ r13)
    return compare_matrices("cybe", lhs, zeros(lhs.dim))


def check_classical_limit(spec: ChainSpec, rep: Representation) -> CheckReport:
    """Extracted r equals the closed formula, is antisymmetric, R = 1 - xi r + O(xi^2), CYBE."""
    fact = build_chain(spec)
    twist = chain_matrix(fact, rep, spec.classical_params())
    d = rep.dim
    f1 = xi_coefficient(twist, 1)
    r = f1 - tensor_flip(f1, d)
    R = tensor_flip(twist, d) @ invert(twist)
    parts = [
        compare_matrices("F(0) = 1", xi_coefficient(twist, 0), identity(d * d)),
        compare_matrices("r = formula", r, classical_r_formula(spec, rep)),
        compare_matrices("r_21 = -r", tensor_flip(r, d), -r),
        compare_matrices("R(0) = 1", xi_coefficient(R, 0), identity(d * d)),
        compare_matrices("R'(0) = -r", xi_coefficient(R, 1), -r),
        check_cybe(r, d),
    ]
    return combine(f"classical limit sp({spec.N}) eta={_fmt_seq(spec.eta)} kappa={spec.kappa}", parts)


def _fmt_seq(xs) -> str:
    return ",".join(format_scalar(x) for x in xs)


# --------------------------------------------------------------------------
# reparameterization by the Cartan grading


def _rational_power(c: Fraction, g: Fraction) -> Fraction:
    if g.denominator == 1:
        return c ** int(g)
    if g.denominator != 2 or c <= 0:
        raise ValueError(f"c^{g} is not rational for c = {c}")
    p, q = math.isqrt(c.numerator), math.isqrt(c.denominator)
    if p * p != c.numerator or q * q != c.denominator:
        raise ValueError(f"c^{g} is not rational for c = {c}")
    return Fraction(p, q) ** int(2 * g)


def grade_conjugate(m: ExactMatrix, h: ExactMatrix, c, legs: int) -> ExactMatrix:
    """C m C^{-1} with C = (c^h)^{(x) legs}, h diagonal with half-integer spectrum.

    The conjugation multiplies entry (a, b) by c^(h(a) - h(b)) summed over
    legs, so it is exact whenever those exponents are integers on the support
    of ``m``, or c is a rational square.
    """
    c = to_fraction(as_scalar(c))
    d = h.dim
    diag = [to_fraction(h[i, i]) for i in range(d)]
    if any(h[i, j] != 0 for i in range(d) for j in range(d) if i != j):
        raise ValueError("grading operator must be diagonal")
    weight = [Fraction(0)]
    for _ in range(legs):
        weight = [w + x for w in weight for x in diag]
    factors = {}
    for i, j in m.nonzero_entries():
        f = _rational_power(c, weight[i] - weight[j])
        factors[(i, j)] = fmpq(f.numerator, f.denominator)
    coeffs = []
    for cm in m.coeffs:
        new = fmpq_mat(m.dim, m.dim)
        for (i, j), f in factors.items():
            if cm[i, j] != 0:
                new[i, j] = cm[i, j] * f
        coeffs.append(new)
    return ExactMatrix(coeffs, m.domain)


def check_eta_rescaling(spec: ChainSpec, s: int, c, rep: Representation) -> CheckReport:
    """C R(eta) C^{-1} = R(eta with eta_s -> c_E eta_s), C = c^{H_ss} (x) c^{H_ss}.

    ``c_E`` is read off from the same conjugation applied to E_{s+s}; since
    [H_ss, E_{s+s}] = E_{s+s} it equals c.  The law is multiplicative:
    conjugating by exp(alpha ad(H_ss (x) 1 + 1 (x) H_ss)) sends eta_s to
    e^alpha eta_s.
    """
    h = rep[H(s)]
    e_ss = rep[E(s)]
    moved = grade_conjugate(e_ss, h, c, 1)
    i, j = next(iter(e_ss.nonzero_entries()))
    c_e = to_fraction(moved[i, j]) / to_fraction(e_ss[i, j])
    eta_s = spec.steps[s - 1].eta
    R = r_matrix(build_chain(spec), rep).matrix
    target = r_matrix(build_chain(spec.with_eta(s, eta_s * c_e)), rep).matrix
    name = (f"eta rescaling sp({spec.N}) s={s} c={format_scalar(as_scalar(c))}: "
            f"eta_{s} {format_scalar(eta_s)} -> {format_scalar(eta_s * c_e)}")
    parts = [
        compare_matrices("E_{s+s} scales by c", moved, e_ss.scale(as_scalar(c))),
        compare_matrices("C R C^-1 = R(c eta_s)", grade_conjugate(R, h, c, 2), target),
    ]
    return combine(name, parts)


# --------------------------------------------------------------------------
# negative controls


def jordanian_first(fact: TwistFactorization, step: int = 1) -> TwistFactorization:
    """Same factors, but the jordanian factor of ``step`` moved left of its extensions."""
    factors = list(fact.factors)
    idx = [n for n, f in enumerate(factors) if f.step == step]
    block = [factors[n] for n in idx]
    jord = [f for f in block if f.kind == "jordanian"]
    rest = [f for f in block if f.kind != "jordanian"]
    factors[idx[0]: idx[-1] + 1] = jord + rest
    return TwistFactorization(tuple(factors), fact.spec, fact.bases)


def r_matrix_missing_inverse(fact: TwistFactorization, rep: Representation, drop: int = 0,
                             params=None) -> RMatrixResult:
    """F_21 times an F^{-1} with the inverse of factor ``drop`` left out."""
    params = fact.default_params() if params is None else dict(params)
    twist = chain_matrix(fact, rep, params)
    inv = identity(twist.dim)
    for n, f in reversed(list(enumerate(fact.factors))):
        if n == drop:
            continue
        x = kron(evaluate(f.left, rep, params), evaluate(f.right, rep, params))
        inv = inv @ exp_nilpotent(-x)
    return RMatrixResult(tensor_flip(twist, rep.dim) @ inv, rep.dim, fact.spec, params)
