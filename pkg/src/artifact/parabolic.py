"""Explicit rank-two quasi parabolic bundles on the projective line.

A bundle is ``O(d1) + O(d2)`` with ``d1 >= d2``, finite parabolic points
``p_1..p_n`` on the affine line and a direction ``(alpha_i : beta_i)`` in
the fibre over each point, written in the split trivialisation.

A line subbundle of degree ``e`` is a pair of polynomials ``(f, g)`` with
``deg f <= d1 - e`` and ``deg g <= d2 - e`` whose homogenisations have no
common zero on P^1. It passes through the direction at ``p_i`` when
``beta_i * f(p_i) == alpha_i * g(p_i)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

from .eltrans import EvenSubset
from .exactcore import (
    RatMatrix,
    UniPoly,
    as_rational,
    canonical_vector,
    format_rational,
    nullspace,
    poly_gcd,
    rank,
)
from .weightpoly import MIN_N, DimensionError, WeightVector, indices_from_mask, mask_from_indices, popcount

Direction = tuple[Fraction, Fraction]


class InvalidWitness(ValueError):
    pass


class TransformInvariantError(RuntimeError):
    """An internal invariant of the elementary transformation was violated."""


def canonical_direction(v: Sequence) -> Direction:
    a, b = (as_rational(x) for x in v)
    if a == 0 and b == 0:
        raise ValueError("a direction must be a nonzero vector")
    return canonical_vector((a, b))  # type: ignore[return-value]


def same_direction(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return u[0] * v[1] == u[1] * v[0]


@dataclass(frozen=True)
class ParabolicBundle:
    d1: int
    d2: int
    points: tuple[Fraction, ...]
    directions: tuple[Direction, ...]

    def __post_init__(self):
        if self.d1 < self.d2:
            raise ValueError(f"splitting type must satisfy d1 >= d2, got ({self.d1}, {self.d2})")
        pts = tuple(as_rational(p) for p in self.points)
        dirs = tuple(canonical_direction(v) for v in self.directions)
        if len(pts) < MIN_N:
            raise ValueError(f"need at least {MIN_N} parabolic points, got {len(pts)}")
        if len(dirs) != len(pts):
            raise ValueError(f"{len(pts)} points but {len(dirs)} directions")
        if len(set(pts)) != len(pts):
            raise ValueError("parabolic points must be pairwise distinct")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "directions", dirs)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def degree(self) -> int:
        return self.d1 + self.d2

    @property
    def splitting(self) -> tuple[int, int]:
        return self.d1, self.d2

    def repeated_directions(self) -> bool:
        dirs = self.directions
        return len(set(dirs)) != len(dirs)

    def to_json(self) -> dict:
        return {
            "splitting": [self.d1, self.d2],
            "points": [format_rational(p) for p in self.points],
            "directions": [[format_rational(x) for x in v] for v in self.directions],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ParabolicBundle":
        d1, d2 = (int(x) for x in data["splitting"])
        if any(p is None or (isinstance(p, str) and p.strip().lower() in ("inf", "infinity")) for p in data["points"]):
            raise ValueError("parabolic points must be finite affine coordinates; move the configuration off infinity")
        return cls(d1, d2, tuple(as_rational(p) for p in data["points"]),
                   tuple(tuple(as_rational(x) for x in v) for v in data["directions"]))


# ---------------------------------------------------------------------------
# section spaces and constraint rows


def _sizes(d1: int, d2: int, e: int) -> tuple[int, int]:
    return max(0, d1 - e + 1), max(0, d2 - e + 1)


def _powers(p: Fraction, count: int) -> list[Fraction]:
    # highest power first: p^(count-1), ..., p, 1
    out = [Fraction(1)] * count
    for k in range(count - 2, -1, -1):
        out[k] = out[k + 1] * p
    return out


def _incidence_row(p: Fraction, v: Direction, nf: int, ng: int) -> list[Fraction]:
    alpha, beta = v
    return [beta * x for x in _powers(p, nf)] + [-alpha * x for x in _powers(p, ng)]


def _decode(vec: Sequence[Fraction], nf: int) -> tuple[UniPoly, UniPoly]:
    f = UniPoly(tuple(reversed(vec[:nf])))
    g = UniPoly(tuple(reversed(vec[nf:])))
    return f, g


def _value(f: UniPoly, g: UniPoly, p: Fraction) -> tuple[Fraction, Fraction]:
    return f(p), g(p)


def section_space(E: ParabolicBundle, e: int, mask: int) -> list[tuple[UniPoly, UniPoly]]:
    """Basis of the sections ``(f, g)`` of ``E(-e)`` lying in the directions at ``mask``."""
    nf, ng = _sizes(E.d1, E.d2, e)
    rows = [_incidence_row(E.points[i], E.directions[i], nf, ng) for i in range(E.n) if mask >> i & 1]
    basis = nullspace(RatMatrix.from_rows(rows, nf + ng))
    return [_decode(v, nf) for v in basis]


# ---------------------------------------------------------------------------
# line subbundles


def _vanishes_at_infinity(p: UniPoly, allowed: int) -> bool:
    return p.is_zero() or p.degree < allowed


def _infinity_order(f: UniPoly, g: UniPoly, df: int, dg: int) -> int:
    orders = [allowed - p.degree for p, allowed in ((f, df), (g, dg)) if not p.is_zero()]
    return min(orders)


def saturate(e: int, f: UniPoly, g: UniPoly, d1: int, d2: int) -> tuple[int, UniPoly, UniPoly]:
    """Strip common zeros (finite and at infinity) from a section pair of ``E(-e)``."""
    if f.is_zero() and g.is_zero():
        raise ValueError("zero section has no saturation")
    h = poly_gcd(f, g)
    if h.degree > 0:
        f, g = f // h, g // h
        e += h.degree
    e += _infinity_order(f, g, d1 - e, d2 - e)
    return e, f, g


@dataclass(frozen=True)
class LineSubbundleWitness:
    e: int
    f: UniPoly
    g: UniPoly
    incidences: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "incidences", frozenset(self.incidences))

    @property
    def incidence_mask(self) -> int:
        return sum(1 << (i - 1) for i in self.incidences)

    def to_json(self) -> dict:
        return {"e": self.e, "f": self.f.to_json(), "g": self.g.to_json(), "incidences": sorted(self.incidences)}

    @classmethod
    def from_json(cls, data: dict) -> "LineSubbundleWitness":
        return cls(int(data["e"]), UniPoly.from_json(data["f"]), UniPoly.from_json(data["g"]),
                   frozenset(int(i) for i in data["incidences"]))


def incidences_of(E: ParabolicBundle, f: UniPoly, g: UniPoly) -> frozenset[int]:
    out = set()
    for i, (p, v) in enumerate(zip(E.points, E.directions), 1):
        x, y = _value(f, g, p)
        if (x or y) and same_direction((x, y), v):
            out.add(i)
    return frozenset(out)


def make_witness(E: ParabolicBundle, e: int, f: UniPoly, g: UniPoly) -> LineSubbundleWitness:
    """Saturate ``(f, g)`` and record where the resulting line meets the directions."""
    e, f, g = saturate(e, f, g, E.d1, E.d2)
    return LineSubbundleWitness(e, f, g, incidences_of(E, f, g))


def validate_witness(L: LineSubbundleWitness, E: ParabolicBundle) -> None:
    df, dg = E.d1 - L.e, E.d2 - L.e
    if L.f.is_zero() and L.g.is_zero():
        raise InvalidWitness("zero section pair")
    if (L.f and L.f.degree > df) or (L.g and L.g.degree > dg):
        raise InvalidWitness(f"section degrees ({L.f.degree}, {L.g.degree}) exceed ({df}, {dg})")
    if poly_gcd(L.f, L.g).degree > 0:
        raise InvalidWitness("section pair has a common finite zero")
    if _vanishes_at_infinity(L.f, df) and _vanishes_at_infinity(L.g, dg):
        raise InvalidWitness("section pair vanishes at infinity")
    if any(not 1 <= i <= E.n for i in L.incidences):
        raise InvalidWitness("incidence index out of range")
    actual = incidences_of(E, L.f, L.g)
    if actual != L.incidences:
        raise InvalidWitness(f"recorded incidences {sorted(L.incidences)} but the line meets {sorted(actual)}")


def _check_n(A: WeightVector, E: ParabolicBundle) -> None:
    if A.n != E.n:
        raise DimensionError(f"weight has n = {A.n}, bundle has n = {E.n}")


def slope(A: WeightVector, E: ParabolicBundle) -> Fraction:
    _check_n(A, E)
    return (E.degree + sum(A.a)) / 2


def line_slope(A: WeightVector, L: LineSubbundleWitness, E: ParabolicBundle) -> Fraction:
    _check_n(A, E)
    validate_witness(L, E)
    return L.e + sum((A.a[i - 1] for i in L.incidences), Fraction(0))


def lowest_relevant_degree(E: ParabolicBundle, A: WeightVector) -> int:
    """Below this degree a line subbundle cannot reach the bundle slope."""
    return ceil(slope(A, E) - sum(A.a))


class _Echelon:
    """Append-only row echelon form; rows are reduced in insertion order."""

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        self.rows = rows

    def add(self, row: Sequence[Fraction]) -> "_Echelon | None":
        r = list(row)
        for piv, prow in self.rows:
            c = r[piv]
            if c:
                for j in range(len(r)):
                    if prow[j]:
                        r[j] -= c * prow[j]
        for j, x in enumerate(r):
            if x:
                return _Echelon(self.rows + ((j, [y / x for y in r]),))
        return None


def _best_incidence(rows: list[list[Fraction]], order: list[int], weights: Sequence[Fraction],
                    unknowns: int, threshold: Fraction) -> tuple[Fraction, int] | None:
    """Max weight sum over incidence sets with a nonzero solution, if above ``threshold``.

    Depth-first over points in decreasing weight, include-first, pruned by
    infeasibility (a rank-``unknowns`` system has only the zero solution) and
    by the remaining weight.
    """
    suffix = [Fraction(0)] * (len(order) + 1)
    for k in range(len(order) - 1, -1, -1):
        suffix[k] = suffix[k + 1] + weights[order[k]]
    best: list = [threshold, None]

    def dfs(k: int, ech: _Echelon, total: Fraction, mask: int) -> None:
        if total + suffix[k] <= best[0]:
            return
        if k == len(order):
            best[0], best[1] = total, mask
            return
        i = order[k]
        grown = ech.add(rows[i])
        if grown is None:
            dfs(k + 1, ech, total + weights[i], mask | 1 << i)
        elif len(grown.rows) < unknowns:
            dfs(k + 1, grown, total + weights[i], mask | 1 << i)
        dfs(k + 1, ech, total, mask)

    dfs(0, _Echelon(), Fraction(0), 0)
    if best[1] is None:
        return None
    return best[0], best[1]


def max_line_slope(E: ParabolicBundle, A: WeightVector) -> tuple[Fraction, LineSubbundleWitness]:
    """Exact maximum of the parabolic slope over all line subbundles, with a witness.

    Degrees run downward from ``d1``: at least to the lowest relevant degree,
    and further as long as full incidence could still beat the incumbent.
    Any nonzero solution of an (e, T) system is dominated by its saturation,
    so the best feasible e + sum_T a_i is the true maximum.
    """
    _check_n(A, E)
    weights = A.a
    wsum = sum(weights, Fraction(0))
    e_min = lowest_relevant_degree(E, A)
    order = sorted(range(E.n), key=lambda i: (-weights[i], i))
    best_value: Fraction | None = None
    best_at = None
    e = E.d1
    while best_value is None or e >= e_min or e + wsum > best_value:
        nf, ng = _sizes(E.d1, E.d2, e)
        rows = [_incidence_row(p, v, nf, ng) for p, v in zip(E.points, E.directions)]
        threshold = Fraction(-1) if best_value is None else best_value - e
        found = _best_incidence(rows, order, weights, nf + ng, threshold)
        if found is not None:
            best_value, best_at = e + found[0], (e, found[1])
        e -= 1
    e, mask = best_at
    f, g = section_space(E, e, mask)[0]
    witness = make_witness(E, e, f, g)
    value = witness.e + sum((weights[i - 1] for i in witness.incidences), Fraction(0))
    if value != best_value:
        raise AssertionError(f"saturated witness has slope {value}, search found {best_value}")
    return best_value, witness


def max_line_slope_exhaustive(E: ParabolicBundle, A: WeightVector, lowest: int | None = None) -> Fraction:
    """Unpruned oracle: every degree from ``d1`` down to ``lowest`` (default ``-n``), every subset."""
    _check_n(A, E)
    if lowest is None:
        lowest = -E.n
    best = None
    for e in range(E.d1, lowest - 1, -1):
        nf, ng = _sizes(E.d1, E.d2, e)
        rows = [_incidence_row(p, v, nf, ng) for p, v in zip(E.points, E.directions)]
        for mask in range(1 << E.n):
            chosen = [rows[i] for i in range(E.n) if mask >> i & 1]
            if rank(RatMatrix.from_rows(chosen, nf + ng)) < nf + ng:
                value = e + sum((A.a[i] for i in range(E.n) if mask >> i & 1), Fraction(0))
                if best is None or value > best:
                    best = value
    return best


STABLE = "stable"
STRICTLY_SEMISTABLE = "strictly_semistable"
UNSTABLE = "unstable"


@dataclass(frozen=True)
class StabilityReport:
    verdict: str
    bundle_slope: Fraction
    max_line_slope: Fraction
    witness: LineSubbundleWitness

    @property
    def semistable(self) -> bool:
        return self.verdict != UNSTABLE

    @property
    def gap(self) -> Fraction:
        return self.max_line_slope - self.bundle_slope

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "mu": format_rational(self.bundle_slope),
            "max_line_slope": format_rational(self.max_line_slope),
            "witness": self.witness.to_json(),
        }


def stability_type(E: ParabolicBundle, A: WeightVector) -> StabilityReport:
    mu = slope(A, E)
    top, witness = max_line_slope(E, A)
    if top < mu:
        verdict = STABLE
    elif top == mu:
        verdict = STRICTLY_SEMISTABLE
    else:
        verdict = UNSTABLE
    return StabilityReport(verdict, mu, top, witness)


# ---------------------------------------------------------------------------
# elementary transformations


Matrix2 = tuple[tuple[UniPoly, UniPoly], tuple[UniPoly, UniPoly]]


def _det(m: Matrix2) -> UniPoly:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _eval_matrix(m: Matrix2, p: Fraction) -> list[list[Fraction]]:
    return [[m[0][0](p), m[0][1](p)], [m[1][0](p), m[1][1](p)]]


@dataclass(frozen=True)
class TransformResult:
    bundle: ParabolicBundle
    transition: Matrix2
    r: int
    kernel_splitting: tuple[int, int]

    @property
    def twist(self) -> int:
        return self.bundle.d1 - self.kernel_splitting[0]

    def to_json(self) -> dict:
        return {
            "bundle": self.bundle.to_json(),
            "transition": [[entry.to_json() for entry in row] for row in self.transition],
            "r": self.r,
            "kernel_splitting": list(self.kernel_splitting),
        }


def _kernel_dimension(E: ParabolicBundle, e: int, mask: int) -> int:
    nf, ng = _sizes(E.d1, E.d2, e)
    rows = [_incidence_row(E.points[i], E.directions[i], nf, ng) for i in range(E.n) if mask >> i & 1]
    return nf + ng - rank(RatMatrix.from_rows(rows, nf + ng))


def kernel_transform(E: ParabolicBundle, mask: int) -> TransformResult:
    """The subsheaf of sections lying in the directions at ``mask``, untwisted.

    Accepts subsets of any parity. Column ``j`` of the transition matrix is a
    section of ``E(-e_j)``; together they generate the subsheaf.
    """
    if mask < 0 or mask >> E.n:
        raise ValueError("subset outside 1..n")
    r = popcount(mask)
    # top degree: first e (going down) with a nonzero constrained section
    e1 = E.d1
    while _kernel_dimension(E, e1, mask) == 0:
        e1 -= 1
    # h(e) = (e1 - e + 1) + max(0, e2 - e + 1); the increment becomes 2 at e2
    prev, e = 0, e1
    while True:
        h = _kernel_dimension(E, e, mask)
        if h - prev == 2:
            e2 = e
            break
        if h - prev != 1:
            raise TransformInvariantError(f"section dimensions jump by {h - prev} at degree {e}")
        prev, e = h, e - 1
    top = section_space(E, e1, mask)
    f1, g1 = top[0]
    second = top[1:] if e1 == e2 else section_space(E, e2, mask)
    target = UniPoly.from_roots(E.points[i] for i in range(E.n) if mask >> i & 1)
    chosen = None
    for f2, g2 in second:
        d = f1 * g2 - f2 * g1
        if not d.is_zero():
            chosen = (f2, g2, d)
            break
    if chosen is None:
        raise TransformInvariantError("no second generator found")
    f2, g2, d = chosen
    if e1 + e2 != E.degree - r:
        raise TransformInvariantError(f"kernel degree {e1 + e2} differs from {E.degree - r}")
    if d.degree != r or d.monic() != target:
        raise TransformInvariantError("transition determinant does not vanish exactly at the chosen points")
    M: Matrix2 = ((f1, f2), (g1, g2))
    dirs = []
    for i, (p, v) in enumerate(zip(E.points, E.directions)):
        m = _eval_matrix(M, p)
        if mask >> i & 1:
            ker = nullspace(RatMatrix.from_rows(m))
            if len(ker) != 1:
                raise TransformInvariantError(f"transition at p_{i + 1} has rank {2 - len(ker)}, expected 1")
            dirs.append(ker[0])
        else:
            # adjugate times v is a preimage of v up to the nonzero determinant
            dirs.append((m[1][1] * v[0] - m[0][1] * v[1], -m[1][0] * v[0] + m[0][0] * v[1]))
    bundle = ParabolicBundle(e1, e2, E.points, tuple(dirs))
    return TransformResult(bundle, M, r, (e1, e2))


def elementary_transform(E: ParabolicBundle, R: EvenSubset) -> TransformResult:
    """Kernel modification at the points of ``R``, twisted back by ``O(|R|/2)``."""
    if R.n != E.n:
        raise DimensionError("subset and bundle of different n")
    raw = kernel_transform(E, R.mask)
    half = R.size // 2
    b = raw.bundle
    twisted = ParabolicBundle(b.d1 + half, b.d2 + half, b.points, b.directions)
    return TransformResult(twisted, raw.transition, raw.r, raw.kernel_splitting)


def transform_line(L: LineSubbundleWitness, E: ParabolicBundle, R: EvenSubset,
                   result: TransformResult | None = None) -> LineSubbundleWitness:
    """Image of a line subbundle under the elementary transformation.

    The line is twisted down by the points of ``R`` where it misses the
    direction, then written in the generators of the kernel subsheaf.
    """
    validate_witness(L, E)
    if result is None:
        result = elementary_transform(E, R)
    missed = [i for i in R.indices() if i not in L.incidences]
    q = UniPoly.from_roots(E.points[i - 1] for i in missed)
    F, G = L.f * q, L.g * q
    (f1, f2), (g1, g2) = result.transition
    det = f1 * g2 - f2 * g1
    new_f, rf = divmod(g2 * F - f2 * G, det)
    new_g, rg = divmod(-g1 * F + f1 * G, det)
    if not rf.is_zero() or not rg.is_zero():
        raise TransformInvariantError("line does not lift to the kernel subsheaf")
    e_new = L.e - len(missed) + R.size // 2
    out = LineSubbundleWitness(e_new, new_f, new_g, incidences_of(result.bundle, new_f, new_g))
    validate_witness(out, result.bundle)
    return out


# ---------------------------------------------------------------------------
# isomorphism


def _cross(u, v) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _normalizer(u1: Direction, u2: Direction, u3: Direction):
    # projective map sending u1, u2, u3 to (1:0), (0:1), (1:1)
    det = u1[0] * u2[1] - u2[0] * u1[1]
    inv = [[u2[1] / det, -u2[0] / det], [-u1[1] / det, u1[0] / det]]
    x = inv[0][0] * u3[0] + inv[0][1] * u3[1]
    y = inv[1][0] * u3[0] + inv[1][1] * u3[1]
    return [[inv[0][0] / x, inv[0][1] / x], [inv[1][0] / y, inv[1][1] / y]]


def _apply(m, v) -> Direction:
    return canonical_direction((m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]))


def _distinct_triple(dirs: Sequence[Direction]) -> tuple[int, int, int] | None:
    for i, j, k in itertools.combinations(range(len(dirs)), 3):
        a, b, c = dirs[i], dirs[j], dirs[k]
        if a != b and a != c and b != c:
            return i, j, k
    return None


def _iso_by_normal_form(E1: ParabolicBundle, E2: ParabolicBundle) -> bool | None:
    triple = _distinct_triple(E1.directions)
    if triple is None:
        return None
    i, j, k = triple
    d2 = E2.directions
    if d2[i] == d2[j] or d2[i] == d2[k] or d2[j] == d2[k]:
        return False
    m1 = _normalizer(*(E1.directions[x] for x in triple))
    m2 = _normalizer(*(d2[x] for x in triple))
    return all(_apply(m1, u) == _apply(m2, v) for u, v in zip(E1.directions, E2.directions))


def _iso_by_linear_solve(E1: ParabolicBundle, E2: ParabolicBundle) -> bool:
    # unknown automorphism G(t); conditions cross(w_i, G(p_i) v_i) = 0
    gap = E1.d1 - E1.d2
    rows = []
    for p, v, w in zip(E1.points, E1.directions, E2.directions):
        if gap == 0:
            # G = [[a, b], [c, d]]; G v = (a v0 + b v1, c v0 + d v1)
            rows.append([-w[1] * v[0], -w[1] * v[1], w[0] * v[0], w[0] * v[1]])
        else:
            # G = [[a, h(t)], [0, b]], h of degree <= gap; unknowns a, b, h_gap..h_0
            pw = _powers(p, gap + 1)
            rows.append([-w[1] * v[0], w[0] * v[1]] + [-w[1] * v[1] * x for x in pw])
    basis = nullspace(RatMatrix.from_rows(rows))
    if not basis:
        return False
    if gap > 0:
        # det = a * b, a product of two linear forms on the solution space
        return any(b[0] for b in basis) and any(b[1] for b in basis)
    # det is a quadratic form; a nonzero one is nonzero somewhere on {0,1,2}^k
    for coeffs in itertools.product(range(3), repeat=len(basis)):
        g = [sum((c * b[idx] for c, b in zip(coeffs, basis)), Fraction(0)) for idx in range(4)]
        if g[0] * g[3] - g[1] * g[2] != 0:
            return True
    return False


def is_isomorphic(E1: ParabolicBundle, E2: ParabolicBundle) -> bool:
    """Isomorphism of quasi parabolic bundles over the identity of (P^1, points)."""
    if E1.points != E2.points:
        raise ValueError("bundles have different parabolic points")
    if E1.splitting != E2.splitting:
        return False
    if E1.d1 == E1.d2:
        verdict = _iso_by_normal_form(E1, E2)
        if verdict is not None:
            return verdict
    return _iso_by_linear_solve(E1, E2)


def subset_mask(indices: Sequence[int], n: int) -> int:
    return mask_from_indices(indices, n)


__all__ = [
    "ParabolicBundle",
    "LineSubbundleWitness",
    "StabilityReport",
    "TransformResult",
    "slope",
    "line_slope",
    "max_line_slope",
    "max_line_slope_exhaustive",
    "stability_type",
    "elementary_transform",
    "kernel_transform",
    "transform_line",
    "is_isomorphic",
    "make_witness",
    "validate_witness",
    "saturate",
    "section_space",
    "indices_from_mask",
]
