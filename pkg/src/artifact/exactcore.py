"""Exact rational arithmetic, univariate polynomials over Q and exact linear algebra.

Rationals are :class:`fractions.Fraction` (canonical, arbitrary precision).
Nothing in here ever touches a float.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "as_rational",
    "format_rational",
    "parse_rational",
    "UniPoly",
    "RatMatrix",
    "nullspace",
    "rank",
    "poly_gcd",
    "eval_poly",
    "canonical_vector",
]


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction; floats are refused."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    s = s.strip()
    if not s or any(c in s for c in ".eE"):
        raise ValueError(f"not an exact rational literal: {s!r}")
    return Fraction(s)


def format_rational(q: Fraction) -> str:
    return str(q)


def canonical_vector(v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """Scale ``v`` so that its first nonzero entry is 1 (zero vector unchanged)."""
    for x in v:
        if x:
            return tuple(y / x for y in v)
    return tuple(v)


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class UniPoly:
    """Dense polynomial in ``t`` with rational coefficients, lowest degree first.

    The zero polynomial has an empty coefficient tuple.
    """

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        c = [as_rational(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def t(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable) -> "UniPoly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __call__(self, x) -> Fraction:
        return eval_poly(self, as_rational(x))

    def _coerce(self, other) -> "UniPoly":
        if isinstance(other, UniPoly):
            return other
        return UniPoly.const(other)

    def __add__(self, other) -> "UniPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        m = max(len(a), len(b))
        return UniPoly(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(m)))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(tuple(-x for x in self.coeffs))

    def __sub__(self, other) -> "UniPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "UniPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def __divmod__(self, other) -> tuple["UniPoly", "UniPoly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lead()
        if len(rem) - 1 < dq:
            return UniPoly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1 - dq, -1, -1):
            c = rem[k + dq] / lc
            quot[k] = c
            if c:
                for j, y in enumerate(other.coeffs):
                    rem[k + j] -= c * y
        return UniPoly(tuple(quot)), UniPoly(tuple(rem[:dq]))

    def __floordiv__(self, other) -> "UniPoly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "UniPoly":
        return divmod(self, other)[1]

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        lc = self.lead()
        return UniPoly(tuple(c / lc for c in self.coeffs))

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "UniPoly":
        return cls(tuple(as_rational(x) for x in data))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return "UniPoly(" + " + ".join(terms) + ")"


def eval_poly(f: UniPoly, p: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(f.coeffs):
        acc = acc * p + c
    return acc


def poly_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    """Monic gcd by the Euclidean algorithm."""
    if f.is_zero() and g.is_zero():
        raise ValueError("undefined gcd")
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative matrix dimension")
        ent = tuple(as_rational(x) for x in self.entries)
        if len(ent) != self.rows * self.cols:
            raise ValueError(f"expected {self.rows * self.cols} entries, got {len(ent)}")
        object.__setattr__(self, "entries", ent)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __matmul__(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(self.row(i), v)), Fraction(0)) for i in range(self.rows))


def _integer_rows(m: RatMatrix) -> list[list[int]]:
    # clearing denominators row by row does not change the kernel
    out = []
    for i in range(m.rows):
        r = m.row(i)
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def _bareiss_echelon(a: list[list[int]], cols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free forward elimination; returns (echelon rows, pivot columns)."""
    a = [row[:] for row in a]
    nrows = len(a)
    pivots: list[int] = []
    prev = 1
    r = 0
    for c in range(cols):
        if r >= nrows:
            break
        p = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, nrows):
            ai = a[i]
            f = ai[c]
            ar = a[r]
            for j in range(c + 1, cols):
                ai[j] = (piv * ai[j] - f * ar[j]) // prev
            ai[c] = 0
        # columns before c in rows below r are already zero
        prev = piv
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m: RatMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_bareiss_echelon(_integer_rows(m), m.cols)[1])


def nullspace(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, each vector scaled so its first nonzero entry is 1."""
    cols = m.cols
    if m.rows == 0:
        return [tuple(Fraction(int(i == j)) for i in range(cols)) for j in range(cols)]
    ech, pivots = _bareiss_echelon(_integer_rows(m), cols)
    # back substitution to reduced row echelon form, exact
    red = [[Fraction(x) for x in row] for row in ech]
    for k in range(len(pivots) - 1, -1, -1):
        c = pivots[k]
        rk = red[k]
        pv = rk[c]
        rk[:] = [x / pv for x in rk]
        for i in range(k):
            f = red[i][c]
            if f:
                ri = red[i]
                for j in range(c, cols):
                    ri[j] -= f * rk[j]
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -red[k][free]
        basis.append(canonical_vector(v))
    return basis
