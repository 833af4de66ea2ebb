"""Chains of extended jordanian twists for sp(N).

Step k of a chain twists by

    prod_{i=N..k+1} exp(eta_k E_{k-i} (x) E'_{k+i} e^{-sigma_k / 2}) . exp(H_kk (x) sigma_k)

with ``sigma_k = ln(1 + eta_k E'_{k+k})``, where primes denote the deformed
basis left behind by steps 1..k-1.  After step k the basis is deformed once
more so that the generators with both indices > k are primitive again.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from flint import fmpq_poly

from .exactkernel import (
    ExactMatrix,
    as_scalar,
    exp_nilpotent,
    format_scalar,
    from_rows,
    identity,
    kron,
    parse_scalar,
    to_fraction,
    xi,
)
from .spalgebra import E, F, GeneratorId, H, Representation, generators
from .uexpr import Expr, Gen, Param, coproduct, evaluate, exp, log1p, on_leg, tensor

HALF = Fraction(1, 2)


# --------------------------------------------------------------------------
# chain recipes


@dataclass(frozen=True)
class ChainStep:
    k: int
    eta: Fraction = Fraction(1)
    kappa: int = 1

    def __post_init__(self):
        object.__setattr__(self, "eta", to_fraction(as_scalar(self.eta)))
        if self.kappa not in (0, 1):
            raise ValueError("kappa is 0 or 1")
        if self.k < 1:
            raise ValueError("step index starts at 1")


@dataclass(frozen=True)
class ChainSpec:
    N: int
    steps: tuple[ChainStep, ...]

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.N < 1:
            raise ValueError("N must be positive")
        if len(self.steps) > self.N:
            raise ValueError(f"a chain for sp({self.N}) has at most {self.N} steps")
        for n, s in enumerate(self.steps, start=1):
            if s.k != n:
                raise ValueError("steps must be k = 1, 2, ... in order")

    @classmethod
    def full(cls, N: int, eta: Sequence | None = None, kappa: Sequence[int] | None = None) -> ChainSpec:
        """Chain of length ``len(eta)`` (default N); kappa defaults to all ones."""
        eta = [1] * N if eta is None else list(eta)
        kappa = [1] * len(eta) if kappa is None else list(kappa)
        kappa = kappa + [1] * (len(eta) - len(kappa))
        return cls(N, tuple(ChainStep(k, e, kp) for k, (e, kp) in enumerate(zip(eta, kappa), start=1)))

    @property
    def length(self) -> int:
        return len(self.steps)

    @property
    def eta(self) -> tuple[Fraction, ...]:
        return tuple(s.eta for s in self.steps)

    @property
    def kappa(self) -> tuple[int, ...]:
        """Effective switches; the step with no constituent roots reports 0."""
        return tuple(s.kappa if s.k < self.N else 0 for s in self.steps)

    def params(self) -> dict[str, Fraction]:
        return {eta_name(s.k): s.eta for s in self.steps}

    def classical_params(self) -> dict[str, fmpq_poly]:
        """eta_k -> xi * eta_k, the rescaling that exposes the classical limit."""
        return {eta_name(s.k): xi(as_scalar(s.eta)) for s in self.steps}

    def prefix(self, p: int) -> ChainSpec:
        return ChainSpec(self.N, self.steps[:p])

    def with_eta(self, k: int, value) -> ChainSpec:
        steps = [ChainStep(s.k, value if s.k == k else s.eta, s.kappa) for s in self.steps]
        return ChainSpec(self.N, tuple(steps))

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "steps": [{"k": s.k, "eta": format_scalar(s.eta), "kappa": s.kappa} for s in self.steps],
        }

    @classmethod
    def from_json(cls, obj: dict | str) -> ChainSpec:
        if isinstance(obj, str):
            obj = json.loads(obj)
        steps = tuple(
            ChainStep(int(s["k"]), parse_scalar(str(s.get("eta", "1"))), int(s.get("kappa", 1)))
            for s in obj["steps"]
        )
        return cls(int(obj["N"]), steps)


def eta_name(k: int) -> str:
    return f"eta{k}"


# --------------------------------------------------------------------------
# deformed bases


@dataclass(frozen=True)
class PrimedBasis:
    """Generators at ``level`` (number of completed steps) as original-basis Exprs."""

    N: int
    level: int
    generators: Mapping[GeneratorId, Expr] = field(repr=False)

    def __getitem__(self, g: GeneratorId) -> Expr:
        return self.generators[g]

    @classmethod
    def identity(cls, N: int) -> PrimedBasis:
        return cls(N, 0, {g: Gen(g) for g in generators(N)})

    def upper_sector(self) -> list[GeneratorId]:
        """Generators with both indices > level: the primitive sp(N - level)."""
        return [g for g in generators(self.N) if min(g.i, g.j) > self.level]


def _sigma_label(k: int, level: int) -> str:
    marks = {0: "", 1: "′", 2: "″"}.get(level, f"^({level})")
    return f"σ{marks}_{{{k}+{k}}}"


def _coef_expr(eta) -> Expr | Fraction:
    if isinstance(eta, Expr):
        return eta
    return to_fraction(as_scalar(eta))


def _times(eta, e: Expr) -> Expr:
    c = _coef_expr(eta)
    return c * e if isinstance(c, Expr) else e * c if c != 1 else e


def sigma_expr(k: int, basis: PrimedBasis, eta=1) -> Expr:
    """sigma_k = ln(1 + eta E^{(k-1)}_{k+k})."""
    if basis.level != k - 1:
        raise ValueError(f"step {k} needs the level-{k - 1} basis, got level {basis.level}")
    return log1p(_times(eta, basis[E(k)]), name=_sigma_label(k, k - 1))


@dataclass(frozen=True)
class TwistFactor:
    """One exponential exp(left (x) right) of a chain."""

    left: Expr
    right: Expr
    label: str
    step: int | None = None
    kind: str = "jordanian"

    @property
    def exponent(self) -> Expr:
        return tensor(self.left, self.right)

    def __str__(self) -> str:
        return f"exp{{{self.exponent}}}"


def jordanian_exponent(k: int, basis: PrimedBasis, eta=1) -> TwistFactor:
    return TwistFactor(Gen(H(k)), sigma_expr(k, basis, eta), f"J{k}", k, "jordanian")


def extension_exponent(k: int, i: int, basis: PrimedBasis, eta=1, beta=HALF) -> TwistFactor:
    """exp(eta E_{k-i} (x) E_{k+i} e^{-beta sigma_k}) in the level-(k-1) basis."""
    if not k < i <= basis.N:
        raise ValueError(f"extension index {i} out of range for step {k}")
    sigma = sigma_expr(k, basis, eta)
    left = _times(eta, basis[E(k, i, "-")])
    right = basis[E(k, i, "+")] * exp(sigma * (-to_fraction(as_scalar(beta))))
    return TwistFactor(left, right, f"E{k},{i}", k, "extension")


def primed_basis_step(basis: PrimedBasis, k: int, eta=1, kappa: int = 1) -> PrimedBasis:
    """Deform the generators with indices > k so they are primitive after step k.

    For i <= j, both > k:
        E_{i+j} -> E_{i+j} - eta E_{k+i} E_{k+j} e^{-sigma_k}
        F_{i+j} -> F_{i+j} - eta E_{k-i} E_{k-j}
    E_{i-j}, F_{i-j} and H are untouched.  A pure jordanian step (kappa = 0)
    leaves the upper sector primitive already, so only the level advances.
    """
    if basis.level != k - 1:
        raise ValueError(f"step {k} needs the level-{k - 1} basis, got level {basis.level}")
    gens = dict(basis.generators)
    if kappa:
        sigma = sigma_expr(k, basis, eta)
        damp = exp(-sigma)
        for i in range(k + 1, basis.N + 1):
            for j in range(i, basis.N + 1):
                ep = basis[E(k, i, "+")] * basis[E(k, j, "+")] * damp
                fm = basis[E(k, i, "-")] * basis[E(k, j, "-")]
                gens[E(i, j)] = basis[E(i, j)] - _times(eta, ep)
                gens[F(i, j)] = basis[F(i, j)] - _times(eta, fm)
    return PrimedBasis(basis.N, k, gens)


# --------------------------------------------------------------------------
# factorizations


@dataclass(frozen=True)
class TwistFactorization:
    """Ordered factors; the twist is factors[0] · factors[1] · ... ."""

    factors: tuple[TwistFactor, ...]
    spec: ChainSpec | None = None
    bases: tuple[PrimedBasis, ...] = ()

    def default_params(self) -> dict:
        return self.spec.params() if self.spec is not None else {}

    def __len__(self) -> int:
        return len(self.factors)

    def __str__(self) -> str:
        return " · ".join(str(f) for f in self.factors) or "1"


def build_chain(spec: ChainSpec, beta=HALF) -> TwistFactorization:
    """Factors for steps 1..p; later steps stand to the left.

    Inside a step the extensions come first with the largest i leftmost,
    then the jordanian factor, as in exp(E_{1-3}..) exp(E_{1-2}..) exp(H_11..).
    """
    basis = PrimedBasis.identity(spec.N)
    bases = [basis]
    blocks: list[list[TwistFactor]] = []
    for step in spec.steps:
        k = step.k
        eta = Param(eta_name(k))
        block = []
        if step.kappa and k < spec.N:
            for i in range(spec.N, k, -1):
                block.append(extension_exponent(k, i, basis, eta, beta))
        block.append(jordanian_exponent(k, basis, eta))
        blocks.append(block)
        basis = primed_basis_step(basis, k, eta, step.kappa if k < spec.N else 0)
        bases.append(basis)
    factors = tuple(f for block in reversed(blocks) for f in block)
    return TwistFactorization(factors, spec, tuple(bases))


def _params(fact: TwistFactorization, params) -> dict:
    return fact.default_params() if params is None else dict(params)


def factor_matrices(fact: TwistFactorization, rep: Representation, params=None) -> list[ExactMatrix]:
    params = _params(fact, params)
    out = []
    for f in fact.factors:
        x = evaluate(f.left, rep, params)
        y = evaluate(f.right, rep, params)
        out.append(exp_nilpotent(kron(x, y)))
    return out


def chain_matrix(fact: TwistFactorization, rep: Representation, params=None) -> ExactMatrix:
    """The twist in rep (x) rep: product of exp(rho(X) (x) rho(Y)) in factor order."""
    params = _params(fact, params)
    out = None
    for m in factor_matrices(fact, rep, params):
        out = m if out is None else out @ m
    if out is None:
        return identity(rep.dim**2)
    return out


def chain_inverse(fact: TwistFactorization, rep: Representation, params=None) -> ExactMatrix:
    """F^{-1} as the reversed product of exp(-X (x) Y)."""
    params = _params(fact, params)
    out = None
    for f in reversed(fact.factors):
        m = exp_nilpotent(-kron(evaluate(f.left, rep, params), evaluate(f.right, rep, params)))
        out = m if out is None else out @ m
    return identity(rep.dim**2) if out is None else out


def chain_coproduct_image(
    fact: TwistFactorization, rep: Representation, params=None, which: str = "delta_id"
) -> ExactMatrix:
    """(Delta (x) id) F or (id (x) Delta) F in rep^{(x)3}.

    ``which`` is ``"delta_id"`` or ``"id_delta"``.  Each factor maps to
    exp(Delta(X) (x) Y) or exp(X (x) Delta(Y)); the coproduct of the
    (generally non-primitive) leg is computed with :func:`uexpr.coproduct`.
    """
    params = _params(fact, params)
    if which not in ("delta_id", "id_delta"):
        raise ValueError("which is 'delta_id' or 'id_delta'")
    out = None
    for f in fact.factors:
        if which == "delta_id":
            a = evaluate(coproduct(f.left), rep, params, legs=2)
            expo = kron(a, evaluate(f.right, rep, params))
        else:
            b = evaluate(coproduct(f.right), rep, params, legs=2)
            expo = kron(evaluate(f.left, rep, params), b)
        m = exp_nilpotent(expo)
        out = m if out is None else out @ m
    return identity(rep.dim**3) if out is None else out


# --------------------------------------------------------------------------
# the 4-dimensional carrier  [H,E]=E, [A,B]=E, [H,A]=aA, [H,B]=bB, a+b=1


def carrier_representation(beta=HALF) -> Representation:
    """Faithful 3-dim representation: A=e12, B=e23, E=e13, H=diag(1, beta, 0)."""
    b = as_scalar(beta)
    z = 0
    mats = {
        "H": from_rows([[1, z, z], [z, b, z], [z, z, z]]),
        "A": from_rows([[z, 1, z], [z, z, z], [z, z, z]]),
        "B": from_rows([[z, z, z], [z, z, 1], [z, z, z]]),
        "E": from_rows([[z, z, 1], [z, z, z], [z, z, z]]),
    }
    return Representation(3, mats, None, f"carrier(beta={format_scalar(b)})")


def carrier_brackets(beta=HALF) -> dict[tuple[str, str], dict[str, Fraction]]:
    b = to_fraction(as_scalar(beta))
    return {
        ("H", "E"): {"E": Fraction(1)},
        ("A", "B"): {"E": Fraction(1)},
        ("H", "A"): {"A": 1 - b},
        ("H", "B"): {"B": b},
        ("E", "A"): {},
        ("E", "B"): {},
    }


def extended_jordanian_twist(beta=HALF, eta=1, extended: bool = True) -> TwistFactorization:
    """exp(A (x) B e^{-beta sigma}) exp(H (x) sigma), sigma = ln(1 + eta E)."""
    sigma = log1p(_times(eta, Gen("E")), name="σ")
    jord = TwistFactor(Gen("H"), sigma, "J", None, "jordanian")
    if not extended:
        return TwistFactorization((jord,))
    ext = TwistFactor(
        _times(eta, Gen("A")),
        Gen("B") * exp(sigma * (-to_fraction(as_scalar(beta)))),
        "E",
        None,
        "extension",
    )
    return TwistFactorization((ext, jord))


def describe_chain(fact: TwistFactorization) -> str:
    return "\n".join(f"{f.label:>6}: {f}" for f in fact.factors)


__all__ = [
    "ChainStep",
    "ChainSpec",
    "PrimedBasis",
    "TwistFactor",
    "TwistFactorization",
    "eta_name",
    "sigma_expr",
    "jordanian_exponent",
    "extension_exponent",
    "primed_basis_step",
    "build_chain",
    "factor_matrices",
    "chain_matrix",
    "chain_inverse",
    "chain_coproduct_image",
    "carrier_representation",
    "carrier_brackets",
    "extended_jordanian_twist",
    "describe_chain",
    "on_leg",
]
