"""Roots, generators and the defining representation of sp(N).

Basis conventions: ``H_ii`` acts on a root by half its i-th coordinate, so
``[H_ii, E_{i+i}] = E_{i+i}`` and ``[H_ii, E_{i+j}] = 1/2 E_{i+j}``.
Positive roots are ``e_i - e_j`` (i < j), ``e_i + e_j`` and ``2 e_i``; the
``F`` generators are the images of the ``E`` under the Chevalley involution.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import zip_longest
from typing import Hashable, Iterable, Mapping

from .exactkernel import ExactMatrix, from_rows, identity, kron_all, matrix_unit, zeros
from .report import CheckReport, compare_matrices

LinComb = dict  # GeneratorId -> Fraction, zero coefficients dropped


# --------------------------------------------------------------------------
# roots


@dataclass(frozen=True, order=True)
class Root:
    coords: tuple[int, ...]

    def __post_init__(self):
        nz = [c for c in self.coords if c]
        ok = (len(nz) == 1 and abs(nz[0]) == 2) or (len(nz) == 2 and all(abs(c) == 1 for c in nz))
        if not ok:
            raise ValueError(f"{self.coords} is not a root of sp(N)")

    @property
    def N(self) -> int:
        return len(self.coords)

    @property
    def is_long(self) -> bool:
        return sum(c * c for c in self.coords) == 4

    @property
    def is_positive(self) -> bool:
        return next(c for c in self.coords if c) > 0

    @property
    def kind(self) -> tuple:
        """``("long", i, sign)`` or ``("short", i, j, sign_i, sign_j)``, 1-based, i < j."""
        idx = [(n + 1, c) for n, c in enumerate(self.coords) if c]
        if self.is_long:
            (i, c), = idx
            return ("long", i, 1 if c > 0 else -1)
        (i, ci), (j, cj) = idx
        return ("short", i, j, ci, cj)

    def dot(self, other: Root) -> int:
        return sum(a * b for a, b in zip_longest(self.coords, other.coords, fillvalue=0))

    def __neg__(self) -> Root:
        return Root(tuple(-c for c in self.coords))

    def label(self) -> str:
        k = self.kind
        if k[0] == "long":
            return f"{'' if k[2] > 0 else '-'}2e{k[1]}"
        _, i, j, si, sj = k
        return f"{'' if si > 0 else '-'}e{i}{'+' if sj > 0 else '-'}e{j}"

    def __repr__(self) -> str:
        return f"Root({self.label()})"


def long_root(N: int, i: int, sign: int = 1) -> Root:
    c = [0] * N
    c[i - 1] = 2 * sign
    return Root(tuple(c))


def short_root(N: int, i: int, j: int, sign_i: int = 1, sign_j: int = 1) -> Root:
    c = [0] * N
    c[i - 1] = sign_i
    c[j - 1] = sign_j
    return Root(tuple(c))


def _add_coords(a: Root, b: Root) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a.coords, b.coords))


def root_system(N: int, indices: Iterable[int] | None = None) -> frozenset[Root]:
    """All roots of sp(N); ``indices`` restricts to the regular sp on those e_i."""
    if N < 1:
        raise ValueError("N must be positive")
    idx = sorted(set(indices)) if indices is not None else list(range(1, N + 1))
    roots = set()
    for a, i in enumerate(idx):
        for s in (1, -1):
            roots.add(long_root(N, i, s))
        for j in idx[a + 1:]:
            for si in (1, -1):
                for sj in (1, -1):
                    roots.add(short_root(N, i, j, si, sj))
    return frozenset(roots)


def positive_roots(N: int) -> list[Root]:
    return sorted((r for r in root_system(N) if r.is_positive), reverse=True)


def constituent_roots(lam0: Root, roots: Iterable[Root]) -> list[tuple[Root, Root]]:
    """Pairs (l', l'') with l' + l'' = lam0 and neither l' + lam0 nor l'' + lam0 a root.

    Each unordered pair is listed once with the lexicographically smaller root
    first, so for lam0 = 2e_k this gives (e_k - e_i, e_k + e_i).
    """
    roots = frozenset(roots)
    if lam0 not in roots:
        raise ValueError(f"{lam0!r} is not in the given root system")
    if not lam0.is_long:
        raise ValueError("constituent roots are defined here for long initial roots")
    coords = {r.coords for r in roots}
    out = []
    for a in sorted(roots):
        rest = tuple(x - y for x, y in zip(lam0.coords, a.coords))
        if rest not in coords or not a.coords < rest:
            continue
        b = Root(rest)
        if _add_coords(a, lam0) in coords or _add_coords(b, lam0) in coords:
            continue
        out.append((a, b))
    return sorted(out, key=lambda p: [abs(c) for c in p[0].coords], reverse=True)


def orthogonal_subsystem(lam0: Root, roots: Iterable[Root]) -> frozenset[Root]:
    return frozenset(r for r in roots if r.dot(lam0) == 0)


# --------------------------------------------------------------------------
# generators


@dataclass(frozen=True, order=True)
class GeneratorId:
    """``H_ii``, ``E_{i+j}``, ``E_{i-j}`` (i < j), ``E_{i+i}`` or their F partners."""

    role: str
    i: int
    j: int
    sign: int = 1

    def __post_init__(self):
        if self.role not in ("H", "E", "F"):
            raise ValueError(f"unknown generator role {self.role!r}")
        if self.role == "H" and (self.i != self.j or self.sign != 1):
            raise ValueError("Cartan generators are H_ii")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.sign == -1 and not self.i < self.j:
            raise ValueError("E_{i-j}/F_{i-j} need i < j")
        if self.sign == 1 and self.i > self.j:
            raise ValueError("use E(i, j) which sorts the indices")

    @property
    def is_cartan(self) -> bool:
        return self.role == "H"

    @property
    def is_raising(self) -> bool:
        return self.role == "E"

    @property
    def is_lowering(self) -> bool:
        return self.role == "F"

    def root(self, N: int) -> Root:
        """The positive root carried by an E or F generator."""
        if self.is_cartan:
            raise ValueError("Cartan generators carry no root")
        if self.i == self.j:
            return long_root(N, self.i)
        return short_root(N, self.i, self.j, 1, self.sign)

    def weight(self, N: int) -> tuple[int, ...]:
        """Integer root coordinates of ad-eigenvalues (zero for Cartan)."""
        if self.is_cartan:
            return (0,) * N
        r = self.root(N).coords
        return r if self.is_raising else tuple(-c for c in r)

    def indices(self) -> tuple[int, int]:
        return (self.i, self.j)

    def label(self) -> str:
        if self.is_cartan:
            return f"H_{{{self.i}{self.i}}}"
        return f"{self.role}_{{{self.i}{'+' if self.sign > 0 else '-'}{self.j}}}"

    def __repr__(self) -> str:
        return self.label()

    def __str__(self) -> str:
        return self.label()


def H(i: int) -> GeneratorId:
    return GeneratorId("H", i, i)


def E(i: int, j: int | None = None, sign: int | str = 1) -> GeneratorId:
    """``E(1)`` is E_{1+1}; ``E(1, 2)`` is E_{1+2}; ``E(1, 2, '-')`` is E_{1-2}."""
    return _root_gen("E", i, j, sign)


def F(i: int, j: int | None = None, sign: int | str = 1) -> GeneratorId:
    return _root_gen("F", i, j, sign)


def _root_gen(role: str, i: int, j: int | None, sign) -> GeneratorId:
    if isinstance(sign, str):
        sign = {"+": 1, "-": -1}[sign]
    j = i if j is None else j
    if sign == 1 and i > j:
        i, j = j, i
    return GeneratorId(role, i, j, sign)


_LABEL_RE = re.compile(r"^([HEF])_?\{?(\d+)([+-]?)(\d+)\}?$")


def parse_generator(label: str) -> GeneratorId:
    """Inverse of :meth:`GeneratorId.label` (braces and underscore optional)."""
    m = _LABEL_RE.match(label.replace("−", "-").strip())
    if not m:
        raise ValueError(f"cannot parse generator label {label!r}")
    role, i, s, j = m.group(1), int(m.group(2)), m.group(3), int(m.group(4))
    if role == "H":
        if s or i != j:
            raise ValueError(f"bad Cartan label {label!r}")
        return H(i)
    if not s:
        raise ValueError(f"missing sign in {label!r}")
    return _root_gen(role, i, j, s)


def generators(N: int) -> list[GeneratorId]:
    """Cartan, raising and lowering generators; N(2N+1) in total."""
    hs = [H(i) for i in range(1, N + 1)]
    es = []
    for i in range(1, N + 1):
        for j in range(i, N + 1):
            es.append(E(i, j, "+"))
            if j > i:
                es.append(E(i, j, "-"))
    fs = [GeneratorId("F", g.i, g.j, g.sign) for g in es]
    return hs + es + fs


def chevalley(g: GeneratorId) -> tuple[Fraction, GeneratorId]:
    """Chevalley involution on a basis element: H -> -H, E <-> F."""
    if g.is_cartan:
        return Fraction(-1), g
    return Fraction(1), GeneratorId("F" if g.is_raising else "E", g.i, g.j, g.sign)


# --------------------------------------------------------------------------
# structure constants


def _d(a: int, b: int) -> int:
    return 1 if a == b else 0


def _lin(*terms) -> LinComb:
    out: dict[GeneratorId, Fraction] = {}
    for c, g in terms:
        if c:
            out[g] = out.get(g, Fraction(0)) + Fraction(c)
    return {g: c for g, c in out.items() if c}


def _cartan_raising(h: GeneratorId, e: GeneratorId) -> LinComb:
    i, n, m = h.i, e.i, e.j
    if n == m:
        return _lin((_d(i, n), e))
    if e.sign > 0:
        return _lin((Fraction(_d(i, n) + _d(i, m), 2), e))
    return _lin((Fraction(_d(i, n) - _d(i, m), 2), e))


def _raising_raising(a: GeneratorId, b: GeneratorId) -> LinComb:
    if a.sign > 0 and b.sign > 0:
        return {}  # sum of two "+" roots is never a root
    if a.sign > 0:
        return {g: -c for g, c in _raising_raising(b, a).items()}
    i, j = a.i, a.j  # a = E_{i-j}
    n, m = b.i, b.j
    if b.sign < 0:
        terms = []
        if j == n:
            terms.append((1, E(i, m, "-")))
        if m == i:
            terms.append((-1, E(n, j, "-")))
        return _lin(*terms)
    if n == m:
        return _lin((2 * _d(j, n), E(i, n, "+")))
    terms = []
    if j == n:
        terms.append((1, E(i, m, "+")))
    if j == m:
        terms.append((1, E(i, n, "+")))
    return _lin(*terms)


def _chev_image(lc: LinComb) -> LinComb:
    out = {}
    for g, c in lc.items():
        s, g2 = chevalley(g)
        out[g2] = c * s
    return out


@dataclass(frozen=True)
class StructureTable:
    """Brackets of sp(N) for Cartan x all, raising x raising, lowering x lowering."""

    N: int
    entries: Mapping[tuple[GeneratorId, GeneratorId], LinComb] = field(repr=False)

    def bracket(self, a: GeneratorId, b: GeneratorId) -> LinComb:
        try:
            return dict(self.entries[(a, b)])
        except KeyError:
            raise KeyError(f"[{a}, {b}] is not tabulated") from None

    def pairs(self) -> list[tuple[GeneratorId, GeneratorId]]:
        return list(self.entries)

    def __len__(self) -> int:
        return len(self.entries)


def structure_table(N: int) -> StructureTable:
    gens = generators(N)
    hs = [g for g in gens if g.is_cartan]
    es = [g for g in gens if g.is_raising]
    entries: dict[tuple[GeneratorId, GeneratorId], LinComb] = {}

    def put(a, b, lc):
        entries[(a, b)] = lc
        entries[(b, a)] = {g: -c for g, c in lc.items()}

    for h in hs:
        for h2 in hs:
            entries[(h, h2)] = {}
        for e in es:
            lc = _cartan_raising(h, e)
            put(h, e, lc)
            # [H, F] = [-w(H), w(E)] = -w([H, E])
            _, f = chevalley(e)
            put(h, f, {g: -c for g, c in _chev_image(lc).items()})
    for a in es:
        for b in es:
            lc = _raising_raising(a, b)
            entries[(a, b)] = lc
            _, fa = chevalley(a)
            _, fb = chevalley(b)
            entries[(fa, fb)] = _chev_image(lc)
    return StructureTable(N, entries)


# --------------------------------------------------------------------------
# representations


@dataclass(frozen=True)
class Representation:
    """Matrices for a set of generators; keys are any hashable generator labels."""

    dim: int
    matrices: Mapping[Hashable, ExactMatrix] = field(repr=False)
    N: int | None = None
    name: str = ""

    def __getitem__(self, g) -> ExactMatrix:
        try:
            return self.matrices[g]
        except KeyError:
            raise KeyError(f"generator {g} not in representation {self.name!r}") from None

    def __contains__(self, g) -> bool:
        return g in self.matrices

    def evaluate(self, lc: LinComb) -> ExactMatrix:
        out = zeros(self.dim)
        for g, c in lc.items():
            out = out + self[g].scale(c)
        return out

    def to_json(self) -> dict:
        return {str(g): m.to_json() for g, m in sorted(self.matrices.items(), key=lambda kv: str(kv[0]))}

    def replace(self, **updates: ExactMatrix) -> Representation:
        """Copy with some matrices swapped, keyed by generator label."""
        mats = dict(self.matrices)
        by_label = {str(g): g for g in mats}
        for label, m in updates.items():
            mats[by_label[label]] = m
        return Representation(self.dim, mats, self.N, self.name + "*")


def fundamental_rep(N: int) -> Representation:
    """The 2N-dimensional defining representation.

    Basis order ``(+1, ..., +N, -1, ..., -N)``.  Lowering generators are
    ``F_{i-j} = -E_{i-j}^T`` and ``F_{i+j} = 4 E_{i+j}^T`` (i <= j).  The
    bracket table fixes the first; it only fixes the "+" type up to one
    common factor, and 4 (that is, -4 times -X^T) is the value for which
    F_{i+i} - E_{1-i}^2 and F_{2+3} - E_{1-2} E_{1-3} come out primitive
    after the first twist.
    """
    if N < 1:
        raise ValueError("N must be positive")
    n = 2 * N
    p = lambda i: i - 1  # noqa: E731
    m = lambda i: N + i - 1  # noqa: E731
    u = lambda a, b: matrix_unit(n, a, b)  # noqa: E731
    half = Fraction(1, 2)
    mats: dict[GeneratorId, ExactMatrix] = {}
    for i in range(1, N + 1):
        mats[H(i)] = (u(p(i), p(i)) - u(m(i), m(i))).scale(half)
        mats[E(i)] = u(p(i), m(i))
        for j in range(i + 1, N + 1):
            mats[E(i, j, "+")] = (u(p(i), m(j)) + u(p(j), m(i))).scale(half)
            mats[E(i, j, "-")] = u(p(i), p(j)) - u(m(j), m(i))
    for g in list(mats):
        if g.is_raising:
            _, f = chevalley(g)
            mats[f] = mats[g].transpose().scale(4 if g.sign > 0 else -1)
    return Representation(n, mats, N, f"fundamental sp({N})")


def tensor_power_rep(rep: Representation, k: int) -> Representation:
    """Lie-algebra action on rep^{(x)k} via the primitive coproduct."""
    d = rep.dim
    mats = {}
    for g, x in rep.matrices.items():
        acc = zeros(d**k)
        for pos in range(k):
            parts = [identity(d)] * k
            parts[pos] = x
            acc = acc + kron_all(parts)
        mats[g] = acc
    return Representation(d**k, mats, rep.N, f"{rep.name}^{k}")


def symmetric_square_rep(rep: Representation) -> Representation:
    """Action on Sym^2 V, basis v_a v_b (a <= b).

    For sp(N) this is the adjoint representation, dimension N(2N+1).  Unlike
    the defining representation it does not kill squares of root vectors.
    """
    d = rep.dim
    basis = [(a, b) for a in range(d) for b in range(a, d)]
    index = {p: n for n, p in enumerate(basis)}
    n = len(basis)
    mats = {}
    for g, x in rep.matrices.items():
        if x.is_poly:
            raise TypeError("symmetric square of a polynomial representation")
        rows = [[0] * n for _ in range(n)]
        for col, (a, b) in enumerate(basis):
            for c in range(d):
                xa = x[c, a]
                if xa != 0:
                    rows[index[tuple(sorted((c, b)))]][col] += xa
                xb = x[c, b]
                if xb != 0:
                    rows[index[tuple(sorted((a, c)))]][col] += xb
        mats[g] = from_rows(rows)
    return Representation(n, mats, rep.N, f"Sym2({rep.name})")


def verify_rep(rep: Representation, table: StructureTable) -> CheckReport:
    """Check [rho(a), rho(b)] = rho([a, b]) for every tabulated pair."""
    failures = []
    for (a, b) in table.pairs():
        x, y = rep[a], rep[b]
        lhs = x @ y - y @ x
        rhs = rep.evaluate(table.bracket(a, b))
        r = compare_matrices(f"[{a}, {b}]", lhs, rhs)
        if not r.passed:
            failures.append({"pair": [str(a), str(b)], **r.witness})
    name = f"verify_rep({rep.name or 'rep'}, sp({table.N}))"
    if failures:
        return CheckReport(name, False, {"failures": failures})
    return CheckReport(name, True)
