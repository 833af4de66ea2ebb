"""Exact rational linear algebra on tensor-product spaces.

Matrices carry their entries as a tuple of ``flint.fmpq_mat`` coefficient
matrices, one per power of the formal parameter xi.  A plain rational
matrix is the degree-zero case.  Nothing here ever rounds.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Sequence

from flint import fmpq, fmpq_mat, fmpq_poly

RATIONAL = "rational"
POLY = "poly"

__all__ = [
    "RATIONAL",
    "POLY",
    "DimensionError",
    "NotNilpotentError",
    "SingularMatrixError",
    "ExactMatrix",
    "as_scalar",
    "to_fraction",
    "format_scalar",
    "parse_scalar",
    "identity",
    "zeros",
    "matrix_unit",
    "from_rows",
    "kron",
    "kron_all",
    "matrix_algebra",
    "tensor_flip",
    "embed_leg",
    "nilpotency_index",
    "exp_nilpotent",
    "log_one_plus",
    "invert",
    "xi_coefficient",
    "xi",
]


class DimensionError(ValueError):
    pass


class NotNilpotentError(ValueError):
    pass


class SingularMatrixError(ValueError):
    pass


# --------------------------------------------------------------------------
# scalars


def as_scalar(x) -> fmpq | fmpq_poly:
    """Coerce ``x`` to an exact scalar (``fmpq``) or a xi-polynomial."""
    if isinstance(x, (fmpq, fmpq_poly)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, int):
        return fmpq(x)
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def parse_scalar(s: str) -> fmpq:
    try:
        f = Fraction(s.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {s!r}") from exc
    return fmpq(f.numerator, f.denominator)


def to_fraction(q) -> Fraction:
    q = as_scalar(q)
    if isinstance(q, fmpq_poly):
        raise TypeError("polynomial has no Fraction value")
    return Fraction(int(q.p), int(q.q))


def format_scalar(q) -> str:
    """``"p/q"`` with q > 0 always written out, e.g. ``"0/1"``."""
    q = as_scalar(q)
    return f"{int(q.p)}/{int(q.q)}"


def xi(coefficient=1) -> fmpq_poly:
    """The deformation polynomial ``coefficient * xi``."""
    return fmpq_poly([0, as_scalar(coefficient)])


def _poly_coeffs(p: fmpq_poly) -> list[fmpq]:
    return [fmpq(c) for c in p.coeffs()] or [fmpq(0)]


# --------------------------------------------------------------------------
# matrices


def _zero_mat(n: int) -> fmpq_mat:
    return fmpq_mat(n, n)


def _is_zero_mat(m: fmpq_mat) -> bool:
    return m == _zero_mat(m.nrows())


def _conv(a: Sequence[fmpq_mat], b: Sequence[fmpq_mat], n: int) -> list[fmpq_mat]:
    out = [_zero_mat(n) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if _is_zero_mat(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


class ExactMatrix:
    """Immutable square matrix over Q or Q[xi].

    ``coeffs[k]`` holds the xi**k coefficient.  Rational matrices always have
    exactly one coefficient; polynomial ones are trimmed of trailing zeros.
    """

    __slots__ = ("dim", "coeffs", "domain")

    def __init__(self, coeffs: Sequence[fmpq_mat], domain: str = RATIONAL):
        coeffs = list(coeffs)
        if not coeffs:
            raise ValueError("need at least one coefficient matrix")
        n = coeffs[0].nrows()
        for c in coeffs:
            if c.nrows() != n or c.ncols() != n:
                raise DimensionError("coefficient matrices must be square and equal size")
        if domain == RATIONAL:
            if len(coeffs) != 1:
                raise ValueError("rational matrix takes one coefficient matrix")
        elif domain == POLY:
            while len(coeffs) > 1 and _is_zero_mat(coeffs[-1]):
                coeffs.pop()
        else:
            raise ValueError(f"unknown scalar domain {domain!r}")
        self.dim = n
        self.coeffs = tuple(coeffs)
        self.domain = domain

    # -- views -----------------------------------------------------------
    @property
    def is_poly(self) -> bool:
        return self.domain == POLY

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def mat(self) -> fmpq_mat:
        """Underlying rational matrix; only for the rational domain."""
        if self.is_poly:
            raise TypeError("polynomial matrix has no single rational matrix")
        return self.coeffs[0]

    def __getitem__(self, idx: tuple[int, int]):
        i, j = idx
        if not self.is_poly:
            return self.coeffs[0][i, j]
        return fmpq_poly([c[i, j] for c in self.coeffs])

    def is_zero(self) -> bool:
        return all(_is_zero_mat(c) for c in self.coeffs)

    def is_identity(self) -> bool:
        return self == identity(self.dim)

    def to_poly(self) -> ExactMatrix:
        return self if self.is_poly else ExactMatrix(self.coeffs, POLY)

    def rows(self) -> list[list]:
        return [[self[i, j] for j in range(self.dim)] for i in range(self.dim)]

    def nonzero_entries(self) -> Iterable[tuple[int, int]]:
        for i in range(self.dim):
            for j in range(self.dim):
                if any(c[i, j] != 0 for c in self.coeffs):
                    yield i, j

    def first_difference(self, other: ExactMatrix) -> tuple[int, int] | None:
        """Coordinates of the first entry where ``self`` and ``other`` differ."""
        diff = self - other
        if diff.is_zero():
            return None
        return next(iter(diff.nonzero_entries()))

    # -- arithmetic ------------------------------------------------------
    def _check_dim(self, other: ExactMatrix) -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def _promote(self, other: ExactMatrix) -> tuple[ExactMatrix, ExactMatrix]:
        if self.is_poly or other.is_poly:
            return self.to_poly(), other.to_poly()
        return self, other

    def __add__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_dim(other)
        a, b = self._promote(other)
        n = self.dim
        k = max(len(a.coeffs), len(b.coeffs))
        pad = lambda cs, i: cs[i] if i < len(cs) else _zero_mat(n)  # noqa: E731
        return ExactMatrix([pad(a.coeffs, i) + pad(b.coeffs, i) for i in range(k)], a.domain)

    def __neg__(self) -> ExactMatrix:
        return ExactMatrix([-c for c in self.coeffs], self.domain)

    def __sub__(self, other: ExactMatrix) -> ExactMatrix:
        return self + (-other)

    def __matmul__(self, other: ExactMatrix) -> ExactMatrix:
        self._check_dim(other)
        a, b = self._promote(other)
        if not a.is_poly:
            return ExactMatrix([a.coeffs[0] * b.coeffs[0]])
        return ExactMatrix(_conv(a.coeffs, b.coeffs, self.dim), POLY)

    def scale(self, c) -> ExactMatrix:
        c = as_scalar(c)
        if isinstance(c, fmpq_poly):
            cs = _poly_coeffs(c)
            out = [_zero_mat(self.dim) for _ in range(len(self.coeffs) + len(cs) - 1)]
            for i, m in enumerate(self.coeffs):
                for j, s in enumerate(cs):
                    if s != 0:
                        out[i + j] = out[i + j] + m * s
            return ExactMatrix(out, POLY)
        return ExactMatrix([m * c for m in self.coeffs], self.domain)

    def __mul__(self, c) -> ExactMatrix:
        if isinstance(c, ExactMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> ExactMatrix:
        out = identity(self.dim, self.domain)
        for _ in range(k):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix) or other.dim != self.dim:
            return False
        return (self - other).is_zero()

    def __hash__(self):  # pragma: no cover - matrices are compared, not hashed
        raise TypeError("ExactMatrix is unhashable")

    def transpose(self) -> ExactMatrix:
        return ExactMatrix([c.transpose() for c in self.coeffs], self.domain)

    def __repr__(self) -> str:
        return f"ExactMatrix(dim={self.dim}, domain={self.domain}, degree={self.degree})"

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        """``{"dim", "entries"}`` with row-major "p/q" strings (lists for polys)."""
        entries = []
        for i in range(self.dim):
            for j in range(self.dim):
                if self.is_poly:
                    entries.append([format_scalar(c[i, j]) for c in self.coeffs])
                else:
                    entries.append(format_scalar(self.coeffs[0][i, j]))
        return {"dim": self.dim, "entries": entries}

    @classmethod
    def from_json(cls, obj: dict) -> ExactMatrix:
        n = int(obj["dim"])
        entries = obj["entries"]
        if len(entries) != n * n:
            raise DimensionError(f"expected {n * n} entries, got {len(entries)}")
        if entries and isinstance(entries[0], list):
            deg = max(len(e) for e in entries)
            coeffs = []
            for k in range(deg):
                vals = [parse_scalar(e[k]) if k < len(e) else fmpq(0) for e in entries]
                coeffs.append(fmpq_mat(n, n, vals))
            return cls(coeffs, POLY)
        return cls([fmpq_mat(n, n, [parse_scalar(e) for e in entries])])


def identity(n: int, domain: str = RATIONAL) -> ExactMatrix:
    m = _zero_mat(n)
    for i in range(n):
        m[i, i] = 1
    return ExactMatrix([m], domain)


def zeros(n: int, domain: str = RATIONAL) -> ExactMatrix:
    return ExactMatrix([_zero_mat(n)], domain)


def matrix_unit(n: int, i: int, j: int) -> ExactMatrix:
    m = _zero_mat(n)
    m[i, j] = 1
    return ExactMatrix([m])


def from_rows(rows: Sequence[Sequence]) -> ExactMatrix:
    """Build a matrix from nested rows of scalars (polynomial entries allowed)."""
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("rows must form a square array")
    vals = [as_scalar(x) for r in rows for x in r]
    if any(isinstance(v, fmpq_poly) for v in vals):
        polys = [v if isinstance(v, fmpq_poly) else fmpq_poly([v]) for v in vals]
        deg = max(p.degree() for p in polys)
        coeffs = [
            fmpq_mat(n, n, [p.coeffs()[k] if k <= p.degree() else 0 for p in polys])
            for k in range(max(deg, 0) + 1)
        ]
        return ExactMatrix(coeffs, POLY)
    return ExactMatrix([fmpq_mat(n, n, vals)])


def _kron_mat(a: fmpq_mat, b: fmpq_mat) -> fmpq_mat:
    na, nb = a.nrows(), b.nrows()
    n = na * nb
    out = fmpq_mat(n, n)
    b_nz = [(k, l, b[k, l]) for k in range(nb) for l in range(nb) if b[k, l] != 0]
    for i in range(na):
        for j in range(na):
            x = a[i, j]
            if x == 0:
                continue
            for k, l, y in b_nz:
                out[i * nb + k, j * nb + l] = x * y
    return out


def kron(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    if not (a.is_poly or b.is_poly):
        return ExactMatrix([_kron_mat(a.coeffs[0], b.coeffs[0])])
    a, b = a.to_poly(), b.to_poly()
    n = a.dim * b.dim
    out = [_zero_mat(n) for _ in range(len(a.coeffs) + len(b.coeffs) - 1)]
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            out[i + j] = out[i + j] + _kron_mat(x, y)
    return ExactMatrix(out, POLY)


def kron_all(ms: Iterable[ExactMatrix]) -> ExactMatrix:
    ms = list(ms)
    out = ms[0]
    for m in ms[1:]:
        out = kron(out, m)
    return out


def matrix_algebra(a: ExactMatrix, b, op: str) -> ExactMatrix:
    """Dispatch ``add | mul | scale | kron | commutator``; ``b`` is a scalar for scale."""
    if op == "add":
        return a + b
    if op == "mul":
        return a @ b
    if op == "scale":
        return a.scale(b)
    if op == "kron":
        return kron(a, b)
    if op == "commutator":
        return a @ b - b @ a
    raise ValueError(f"unknown op {op!r}")


def _leg_count(dim: int, d: int) -> int:
    if d < 1:
        raise DimensionError("leg dimension must be positive")
    legs, n = 0, 1
    while n < dim:
        n *= d
        legs += 1
    if n != dim:
        raise DimensionError(f"{dim} is not a power of {d}")
    return legs


def _permute_legs(m: ExactMatrix, perm: Sequence[int], d: int) -> ExactMatrix:
    """Move tensor leg ``t`` of ``m`` to position ``perm[t]``."""
    legs = len(perm)
    n = d**legs
    index_map = []
    for digits in itertools.product(range(d), repeat=legs):
        new = [0] * legs
        for t, x in enumerate(digits):
            new[perm[t]] = x
        idx = 0
        for x in new:
            idx = idx * d + x
        index_map.append(idx)
    out_coeffs = []
    for c in m.coeffs:
        out = fmpq_mat(n, n)
        for i in range(n):
            pi = index_map[i]
            for j in range(n):
                x = c[i, j]
                if x != 0:
                    out[pi, index_map[j]] = x
        out_coeffs.append(out)
    return ExactMatrix(out_coeffs, m.domain)


def tensor_flip(m: ExactMatrix, d: int) -> ExactMatrix:
    """Leg exchange ``tau m tau`` on V (x) V with dim V = d."""
    if m.dim != d * d:
        raise DimensionError(f"dim {m.dim} is not {d}^2")
    return _permute_legs(m, (1, 0), d)


def embed_leg(m: ExactMatrix, positions: Sequence[int], legs: int, d: int) -> ExactMatrix:
    """Act with ``m`` on the (1-based) ``positions`` of V^{(x) legs}, identity elsewhere."""
    k = len(positions)
    if m.dim != d**k:
        raise DimensionError(f"dim {m.dim} is not {d}^{k}")
    if len(set(positions)) != k or any(not 1 <= p <= legs for p in positions):
        raise ValueError(f"invalid leg positions {tuple(positions)} for {legs} legs")
    first = positions[0]
    if list(positions) == list(range(first, first + k)):
        parts = []
        if first > 1:
            parts.append(identity(d ** (first - 1)))
        parts.append(m)
        if first + k - 1 < legs:
            parts.append(identity(d ** (legs - first - k + 1)))
        return kron_all(parts)
    full = kron(m, identity(d ** (legs - k))) if legs > k else m
    rest = [p for p in range(1, legs + 1) if p not in positions]
    perm = [p - 1 for p in list(positions) + rest]
    return _permute_legs(full, perm, d)


# --------------------------------------------------------------------------
# nilpotent calculus


def nilpotency_index(m: ExactMatrix) -> int:
    """Smallest k with m**k == 0; raises if k would exceed dim(m)."""
    power = m
    for k in range(1, m.dim + 1):
        if power.is_zero():
            return k
        power = power @ m
    if power.is_zero():
        return m.dim + 1  # pragma: no cover - m**dim == 0 is caught above
    raise NotNilpotentError(f"matrix of dim {m.dim} is not nilpotent")


def _nilpotent_powers(m: ExactMatrix) -> list[ExactMatrix]:
    powers = [identity(m.dim, m.domain)]
    power = m
    while not power.is_zero():
        if len(powers) > m.dim:
            raise NotNilpotentError(f"matrix of dim {m.dim} is not nilpotent")
        powers.append(power)
        power = power @ m
    return powers


def exp_nilpotent(m: ExactMatrix) -> ExactMatrix:
    powers = _nilpotent_powers(m)
    out = powers[0]
    fact = 1
    for j, p in enumerate(powers[1:], start=1):
        fact *= j
        out = out + p.scale(fmpq(1, fact))
    return out


def log_one_plus(m: ExactMatrix) -> ExactMatrix:
    """ln(1 + m) for nilpotent m; the series stops at the nilpotency degree."""
    powers = _nilpotent_powers(m)
    out = zeros(m.dim, m.domain)
    for j, p in enumerate(powers[1:], start=1):
        out = out + p.scale(fmpq((-1) ** (j + 1), j))
    return out


def invert(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse.  Over Q[xi] the inverse must itself be a polynomial."""
    if not m.is_poly:
        try:
            return ExactMatrix([m.coeffs[0].inv()])
        except ZeroDivisionError as exc:
            raise SingularMatrixError("matrix is singular") from exc
    n = m.dim
    try:
        a0_inv = m.coeffs[0].inv()
    except ZeroDivisionError as exc:
        raise SingularMatrixError("constant term is singular") from exc
    deg = m.degree
    if deg == 0:
        return ExactMatrix([a0_inv], POLY)
    # power-series inverse; once `deg` consecutive coefficients vanish the
    # recursion produces only zeros, so the truncation is the exact inverse
    out = [a0_inv]
    bound = (n - 1) * deg + deg + 1
    for k in range(1, bound + 1):
        acc = _zero_mat(n)
        for i in range(1, min(k, deg) + 1):
            acc = acc + m.coeffs[i] * out[k - i]
        out.append(-(a0_inv * acc))
        if len(out) > deg and all(_is_zero_mat(c) for c in out[-deg:]):
            return ExactMatrix(out, POLY)
    raise SingularMatrixError("inverse is not a polynomial in xi")


def xi_coefficient(m: ExactMatrix, k: int) -> ExactMatrix:
    if k < 0:
        raise ValueError("power of xi must be non-negative")
    if k < len(m.coeffs):
        return ExactMatrix([m.coeffs[k]])
    return zeros(m.dim)
