"""Noncommutative expressions in U(g) and their images in representations.

Expressions are trees; generators carry a tensor-leg index so the same type
describes elements of U, U (x) U and U^{(x)3}.  Nothing is ever normal
ordered: identities are checked by evaluating both sides exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Mapping

from flint import fmpq

from .exactkernel import (
    ExactMatrix,
    as_scalar,
    exp_nilpotent,
    identity,
    kron_all,
    log_one_plus,
    to_fraction,
    zeros,
)
from .spalgebra import Representation


class UnboundParameterError(KeyError):
    pass


class Expr:
    """Base node.  Arithmetic builds new trees; nothing is simplified."""

    def __add__(self, other) -> Expr:
        return Sum((self, _wrap(other)))

    def __radd__(self, other) -> Expr:
        return Sum((_wrap(other), self))

    def __neg__(self) -> Expr:
        return Scale(Fraction(-1), self)

    def __sub__(self, other) -> Expr:
        return Sum((self, -_wrap(other)))

    def __rsub__(self, other) -> Expr:
        return Sum((_wrap(other), -self))

    def __mul__(self, other) -> Expr:
        if isinstance(other, Expr):
            return Prod((self, other))
        return Scale(_coef(other), self)

    def __rmul__(self, other) -> Expr:
        return Scale(_coef(other), self)

    def __pow__(self, k: int) -> Expr:
        if k < 0:
            raise ValueError("negative powers are not expressions")
        if k == 0:
            return Const(Fraction(1))
        return Prod((self,) * k)

    def __str__(self) -> str:
        return to_str(self)


def _coef(x) -> Fraction:
    return to_fraction(as_scalar(x))


def _wrap(x) -> Expr:
    return x if isinstance(x, Expr) else Const(_coef(x))


@dataclass(frozen=True, eq=True, repr=False)
class Gen(Expr):
    gen: Hashable
    leg: int = 1

    def __repr__(self):
        return f"Gen({self.gen}, leg={self.leg})"


@dataclass(frozen=True, repr=False)
class Const(Expr):
    value: Fraction

    def __repr__(self):
        return f"Const({self.value})"


@dataclass(frozen=True, repr=False)
class Param(Expr):
    name: str

    def __repr__(self):
        return f"Param({self.name})"


@dataclass(frozen=True, repr=False)
class Sum(Expr):
    terms: tuple

    def __repr__(self):
        return f"Sum{self.terms!r}"


@dataclass(frozen=True, repr=False)
class Prod(Expr):
    factors: tuple

    def __repr__(self):
        return f"Prod{self.factors!r}"


@dataclass(frozen=True, repr=False)
class Scale(Expr):
    coef: Fraction
    expr: Expr

    def __repr__(self):
        return f"Scale({self.coef}, {self.expr!r})"


@dataclass(frozen=True, repr=False)
class Exp(Expr):
    arg: Expr

    def __repr__(self):
        return f"Exp({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Log1p(Expr):
    """ln(1 + arg).  ``name`` only affects printing (e.g. a sigma label)."""

    arg: Expr
    name: str | None = field(default=None, compare=False)

    def __repr__(self):
        return f"Log1p({self.arg!r})"


def gen(g, leg: int = 1) -> Gen:
    return Gen(g, leg)


def const(c) -> Const:
    return Const(_coef(c))


def exp(e) -> Exp:
    return Exp(_wrap(e))


def log1p(e, name: str | None = None) -> Log1p:
    return Log1p(_wrap(e), name)


ONE = Const(Fraction(1))
ZERO = Const(Fraction(0))


# --------------------------------------------------------------------------
# structural maps


def map_gens(e: Expr, fn) -> Expr:
    """Rebuild ``e`` with every ``Gen`` node replaced by ``fn(node)``."""
    memo: dict[int, Expr] = {}

    def go(x: Expr) -> Expr:
        key = id(x)
        if key in memo:
            return memo[key]
        if isinstance(x, Gen):
            out = fn(x)
        elif isinstance(x, (Const, Param)):
            out = x
        elif isinstance(x, Sum):
            out = Sum(tuple(go(t) for t in x.terms))
        elif isinstance(x, Prod):
            out = Prod(tuple(go(t) for t in x.factors))
        elif isinstance(x, Scale):
            out = Scale(x.coef, go(x.expr))
        elif isinstance(x, Exp):
            out = Exp(go(x.arg))
        elif isinstance(x, Log1p):
            out = Log1p(go(x.arg), x.name)
        else:
            raise TypeError(f"unknown node {type(x).__name__}")
        memo[key] = out
        return out

    return go(e)


def on_leg(e: Expr, leg: int) -> Expr:
    """Move a single-leg expression onto tensor leg ``leg``."""
    return map_gens(e, lambda g: Gen(g.gen, leg))


def legs_of(e: Expr) -> set[int]:
    found: set[int] = set()
    map_gens(e, lambda g: found.add(g.leg) or g)
    return found


def tensor(*parts: Expr) -> Expr:
    """``parts[0] (x) parts[1] (x) ...`` for single-leg expressions."""
    return Prod(tuple(on_leg(p, n) for n, p in enumerate(parts, start=1)))


def coproduct(e: Expr, at: int = 1) -> Expr:
    """Primitive coproduct applied to tensor leg ``at``.

    Generators on leg ``at`` become ``g_at + g_{at+1}``; higher legs shift up.
    On a one-leg expression this is Delta; on X (x) Y, ``at=1`` gives
    (Delta (x) id) and ``at=2`` gives (id (x) Delta).  Exp and Log1p nodes
    map to Exp and Log1p of the image, which is exact because Delta is an
    algebra homomorphism and all arguments are nilpotent when evaluated.
    """

    def split(g: Gen) -> Expr:
        if g.leg == at:
            return Sum((Gen(g.gen, at), Gen(g.gen, at + 1)))
        if g.leg > at:
            return Gen(g.gen, g.leg + 1)
        return g

    return map_gens(e, split)


def counit(e: Expr, leg: int = 1) -> Expr:
    """Apply epsilon (generators -> 0) on ``leg``; higher legs shift down."""

    def kill(g: Gen) -> Expr:
        if g.leg == leg:
            return ZERO
        if g.leg > leg:
            return Gen(g.gen, g.leg - 1)
        return g

    return map_gens(e, kill)


# --------------------------------------------------------------------------
# evaluation


def evaluate(
    e: Expr,
    rep: Representation,
    params: Mapping[str, object] | None = None,
    legs: int = 1,
    leg_map: Mapping[int, int] | None = None,
) -> ExactMatrix:
    """Image of ``e`` in End(V^{(x) legs}).

    ``leg_map`` relocates expression legs onto target legs (default identity).
    Parameters may be rationals or xi-polynomials; the latter switch the
    result to the polynomial scalar domain.
    """
    params = {k: as_scalar(v) for k, v in (params or {}).items()}
    leg_map = dict(leg_map or {})
    d = rep.dim
    n = d**legs
    ident = identity(n)
    gen_cache: dict[tuple, ExactMatrix] = {}
    memo: dict[int, ExactMatrix] = {}

    def gen_matrix(g: Gen) -> ExactMatrix:
        target = leg_map.get(g.leg, g.leg)
        if not 1 <= target <= legs:
            raise ValueError(f"leg {target} outside 1..{legs}")
        key = (g.gen, target)
        if key not in gen_cache:
            parts = [identity(d)] * legs
            parts[target - 1] = rep[g.gen]
            gen_cache[key] = kron_all(parts)
        return gen_cache[key]

    def scalar_of(x: Expr):
        if isinstance(x, Const):
            return as_scalar(x.value)
        if isinstance(x, Param):
            try:
                return params[x.name]
            except KeyError:
                raise UnboundParameterError(x.name) from None
        return None

    leg_memo: dict[int, frozenset] = {}

    def legs_in(x: Expr) -> frozenset:
        key = id(x)
        if key not in leg_memo:
            if isinstance(x, Gen):
                out = frozenset((x.leg,))
            elif isinstance(x, (Const, Param)):
                out = frozenset()
            else:
                kids = x.terms if isinstance(x, Sum) else x.factors if isinstance(x, Prod) else (
                    x.expr if isinstance(x, Scale) else x.arg,)
                out = frozenset().union(*(legs_in(k) for k in kids))
            leg_memo[key] = out
        return leg_memo[key]

    def go(x: Expr) -> ExactMatrix:
        key = id(x)
        if key in memo:
            return memo[key]
        s = scalar_of(x)
        one_leg = legs_in(x) if legs > 1 and not isinstance(x, Gen) else ()
        if len(one_leg) == 1:
            # a one-leg subtree: evaluate in V, then embed
            (leg,) = one_leg
            parts = [identity(d)] * legs
            parts[leg_map.get(leg, leg) - 1] = evaluate(on_leg(x, 1), rep, params)
            out = kron_all(parts)
        elif legs > 1 and isinstance(x, Prod) and all(len(legs_in(f)) <= 1 for f in x.factors):
            # factors on different legs commute: multiply leg by leg, then kron
            per_leg: dict[int, list[Expr]] = {}
            coef = fmpq(1)
            for f in x.factors:
                fl = legs_in(f)
                if not fl:
                    coef = coef * go(f)[0, 0] if scalar_of(f) is None else coef * scalar_of(f)
                    continue
                (leg,) = fl
                per_leg.setdefault(leg_map.get(leg, leg), []).append(on_leg(f, 1))
            parts = [identity(d)] * legs
            for target, fs in per_leg.items():
                parts[target - 1] = evaluate(Prod(tuple(fs)), rep, params)
            out = kron_all(parts).scale(coef)
        elif s is not None:
            out = ident.scale(s)
        elif isinstance(x, Gen):
            out = gen_matrix(x)
        elif isinstance(x, Sum):
            out = zeros(n)
            for t in x.terms:
                out = out + go(t)
        elif isinstance(x, Prod):
            coef = fmpq(1)
            mat = None
            for f in x.factors:
                s = scalar_of(f)
                if s is not None:
                    coef = coef * s
                    continue
                m = go(f)
                mat = m if mat is None else mat @ m
            out = (ident if mat is None else mat).scale(coef)
        elif isinstance(x, Scale):
            out = go(x.expr).scale(x.coef)
        elif isinstance(x, Exp):
            out = exp_nilpotent(go(x.arg))
        elif isinstance(x, Log1p):
            out = log_one_plus(go(x.arg))
        else:
            raise TypeError(f"unknown node {type(x).__name__}")
        memo[key] = out
        return out

    return go(e)


def counit_evaluate(
    e: Expr,
    side: str,
    rep: Representation,
    params: Mapping[str, object] | None = None,
    legs: int = 2,
) -> ExactMatrix:
    """Evaluate ``(eps (x) id) e`` or ``(id (x) eps) e`` on the remaining legs."""
    leg = {"left": 1, "right": legs}[side]
    return evaluate(counit(e, leg), rep, params, legs=legs - 1)


# --------------------------------------------------------------------------
# printing


def _frac(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def to_str(e: Expr) -> str:
    """Render in the usual notation, e.g. ``E_{1-2} (x) E_{1+2} e^{-1/2 s}``."""

    def atom(x: Expr) -> str:
        s = go(x)
        return f"({s})" if isinstance(x, (Sum, Scale)) or (isinstance(x, Const) and x.value < 0) else s

    def go(x: Expr) -> str:
        if isinstance(x, Gen):
            label = str(x.gen)
            return label if x.leg == 1 else f"({label})_{x.leg}"
        if isinstance(x, Const):
            return _frac(x.value)
        if isinstance(x, Param):
            return x.name
        if isinstance(x, Sum):
            out = ""
            for n, t in enumerate(x.terms):
                s = go(t)
                if n and s.startswith("-"):
                    out += " - " + s[1:]
                elif n:
                    out += " + " + s
                else:
                    out = s
            return out or "0"
        if isinstance(x, Prod):
            return "·".join(atom(f) for f in x.factors) or "1"
        if isinstance(x, Scale):
            if x.coef == -1:
                return "-" + atom(x.expr)
            return f"{_frac(x.coef)}·{atom(x.expr)}"
        if isinstance(x, Exp):
            return f"e^{{{go(x.arg)}}}"
        if isinstance(x, Log1p):
            return x.name or f"ln(1 + {go(x.arg)})"
        raise TypeError(type(x).__name__)

    def tensor_str(x: Expr) -> str | None:
        # factors without generators (e.g. the 1 in X (x) 1) open the next leg
        groups: list[tuple[int, list[Expr]]] = []
        for f in x.factors:
            fl = legs_of(f)
            if not fl:
                leg = groups[-1][0] + 1 if groups else 1
            elif len(fl) == 1:
                (leg,) = fl
            else:
                return None
            if groups and groups[-1][0] == leg:
                groups[-1][1].append(f)
            elif groups and groups[-1][0] > leg:
                return None
            else:
                groups.append((leg, [f]))
        if len(groups) < 2:
            return None
        return " ⊗ ".join("·".join(atom(on_leg(f, 1)) for f in fs) for _, fs in groups)

    def top(x: Expr) -> str:
        if isinstance(x, Prod):
            s = tensor_str(x)
            if s is not None:
                return s
        if isinstance(x, Scale) and isinstance(x.expr, Prod):
            s = tensor_str(x.expr)
            if s is not None:
                return ("-" if x.coef == -1 else f"{_frac(x.coef)}·") + s
        if isinstance(x, Sum):
            out = ""
            for n, t in enumerate(x.terms):
                s = top(t)
                if n and s.startswith("-"):
                    out += " - " + s[1:]
                elif n:
                    out += " + " + s
                else:
                    out = s
            return out or "0"
        return go(x)

    return top(e)
