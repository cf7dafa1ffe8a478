"""The weight polytope, its chopped sub-polytope and the wall arrangement.

Subsets of ``{1..n}`` are bitmasks with bit ``i-1`` standing for index ``i``.
For a weight vector ``A`` and a subset ``I``::

    H_I(A) = sum_{j not in I} a_j + sum_{i in I} (1 - a_i)

The walls are the hyperplanes ``H_I = k`` with ``2 <= k <= n/2`` and
``|I| = k (mod 2)``; chambers are told apart by the sign of ``H_I - k`` on
every wall.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Iterable, Sequence

from .exactcore import as_rational, format_rational

MIN_N = 5


class DimensionError(ValueError):
    pass


class NotInPolytopeError(ValueError):
    pass


def check_n(n: int) -> None:
    if n < MIN_N:
        raise ValueError(f"n must be at least {MIN_N} (got {n}); n = 4 gives a P^1 moduli space and is out of scope")


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_from_indices(indices: Iterable[int], n: int) -> int:
    mask = 0
    for i in indices:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} outside 1..{n}")
        mask |= 1 << (i - 1)
    return mask


def indices_from_mask(mask: int) -> list[int]:
    return [i + 1 for i in range(mask.bit_length()) if mask >> i & 1]


@dataclass(frozen=True)
class SubsetIndex:
    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} not a subset of 1..{self.n}")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "SubsetIndex":
        return cls(n, mask_from_indices(indices, n))

    @property
    def size(self) -> int:
        return popcount(self.mask)

    def complement(self) -> "SubsetIndex":
        return SubsetIndex(self.n, ((1 << self.n) - 1) ^ self.mask)

    def indices(self) -> list[int]:
        return indices_from_mask(self.mask)


@dataclass(frozen=True)
class WeightVector:
    a: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(as_rational(x) for x in self.a)
        if len(a) < MIN_N:
            check_n(len(a))
        for i, x in enumerate(a, 1):
            if not 0 <= x <= 1:
                raise ValueError(f"weight a_{i} = {x} outside [0, 1]")
        object.__setattr__(self, "a", a)

    @classmethod
    def central(cls, n: int) -> "WeightVector":
        """The central weight (1/2, ..., 1/2)."""
        return cls((Fraction(1, 2),) * n)

    @classmethod
    def vertex(cls, n: int, mask: int) -> "WeightVector":
        return cls(tuple(Fraction(mask >> i & 1) for i in range(n)))

    @classmethod
    def epsilon_weight(cls, n: int, eps) -> "WeightVector":
        eps = as_rational(eps)
        return cls((1 - eps,) + (eps,) * (n - 1))

    @property
    def n(self) -> int:
        return len(self.a)

    def __len__(self) -> int:
        return len(self.a)

    def __getitem__(self, i):
        return self.a[i]

    @cached_property
    def _scaled(self) -> tuple[int, tuple[int, ...]]:
        d = lcm(*(x.denominator for x in self.a))
        return d, tuple(int(x * d) for x in self.a)

    @cached_property
    def _h_table(self) -> tuple[int, list[int]]:
        # H_I * D = S + |I| * D - 2 * sum_{i in I} m_i for every mask I
        d, m = self._scaled
        n = self.n
        total = sum(m)
        sub = [0] * (1 << n)
        for mask in range(1, 1 << n):
            low = mask & -mask
            sub[mask] = sub[mask ^ low] + m[low.bit_length() - 1]
        table = [total + popcount(mask) * d - 2 * sub[mask] for mask in range(1 << n)]
        return d, table

    def scaled_h(self, mask: int) -> tuple[int, int]:
        """``(D * H_I, D)`` as integers for the common denominator ``D``."""
        d, table = self._h_table
        return table[mask], d

    def to_json(self) -> dict:
        return {"n": self.n, "weights": [format_rational(x) for x in self.a]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightVector":
        w = cls(tuple(as_rational(x) for x in data["weights"]))
        if "n" in data and data["n"] != w.n:
            raise ValueError(f"declared n = {data['n']} but {w.n} weights given")
        return w


def _mask_of(I, n: int) -> int:
    if isinstance(I, SubsetIndex):
        if I.n != n:
            raise DimensionError(f"subset lives in n = {I.n}, weight in n = {n}")
        return I.mask
    return I


def h_value(I, A: WeightVector) -> Fraction:
    mask = _mask_of(I, A.n)
    total = Fraction(0)
    for i, x in enumerate(A.a):
        total += (1 - x) if mask >> i & 1 else x
    return total


def _all_h_at_least(A: WeightVector, parity: int, bound: int, strict: bool) -> bool:
    d, table = A._h_table
    lim = bound * d
    for mask in range(1 << A.n):
        if popcount(mask) & 1 == parity:
            v = table[mask]
            if v < lim or (strict and v == lim):
                return False
    return True


def in_unit_cube(A: WeightVector, strict: bool = False) -> bool:
    if strict:
        return all(0 < x < 1 for x in A.a)
    return all(0 <= x <= 1 for x in A.a)


def is_in_delta(A: WeightVector, strict: bool = False) -> bool:
    """Membership in the demi-hypercube: cube bounds and H_I >= 1 for odd I."""
    return in_unit_cube(A, strict) and _all_h_at_least(A, 1, 1, strict)


def is_in_pi(A: WeightVector, strict: bool = False) -> bool:
    """Membership in the chopped polytope: Delta plus H_I >= 2 for even I."""
    return is_in_delta(A, strict) and _all_h_at_least(A, 0, 2, strict)


# ---------------------------------------------------------------------------
# walls


@dataclass(frozen=True, order=True)
class Wall:
    k: int
    mask: int
    n: int

    def __post_init__(self):
        if not 2 <= self.k <= self.n / 2:
            raise ValueError(f"wall level k = {self.k} outside [2, n/2]")
        if popcount(self.mask) % 2 != self.k % 2:
            raise ValueError("wall subset parity must match k")
        if 2 * self.k == self.n:
            comp = ((1 << self.n) - 1) ^ self.mask
            if _lex_key(comp, self.n) < _lex_key(self.mask, self.n):
                raise ValueError("non-canonical wall: use the complement at k = n/2")

    @property
    def I(self) -> SubsetIndex:
        return SubsetIndex(self.n, self.mask)

    def indices(self) -> list[int]:
        return indices_from_mask(self.mask)


def _lex_key(mask: int, n: int) -> tuple[int, ...]:
    return tuple(indices_from_mask(mask))


def canonical_wall(mask: int, k: int, n: int) -> tuple[Wall, int]:
    """Canonical wall for the hyperplane ``H_mask = k`` and the orientation.

    The orientation is ``-1`` when the complement was chosen, because then
    ``H_mask - k = -(H_comp - k)``.
    """
    if 2 * k == n:
        comp = ((1 << n) - 1) ^ mask
        if _lex_key(comp, n) < _lex_key(mask, n):
            return Wall(k, comp, n), -1
    return Wall(k, mask, n), 1


_WALL_CACHE: dict[int, tuple[Wall, ...]] = {}


def wall_list(n: int) -> tuple[Wall, ...]:
    """All canonical walls ordered by level, then by mask value."""
    check_n(n)
    if n not in _WALL_CACHE:
        walls = []
        for k in range(2, n // 2 + 1):
            for mask in range(1 << n):
                if popcount(mask) % 2 != k % 2:
                    continue
                w, orient = canonical_wall(mask, k, n)
                if orient == 1:
                    walls.append(w)
        _WALL_CACHE[n] = tuple(walls)
    return _WALL_CACHE[n]


@dataclass(frozen=True)
class WallSignature:
    n: int
    signs: tuple[int, ...]

    def items(self):
        return zip(wall_list(self.n), self.signs)

    def __getitem__(self, wall: Wall) -> int:
        return self.signs[_wall_index(self.n)[wall]]

    def zeros(self) -> list[Wall]:
        return [w for w, s in self.items() if s == 0]

    def is_open(self) -> bool:
        return 0 not in self.signs

    def to_json(self) -> list[dict]:
        return [{"I": w.indices(), "k": w.k, "sign": s} for w, s in self.items()]


_INDEX_CACHE: dict[int, dict[Wall, int]] = {}


def _wall_index(n: int) -> dict[Wall, int]:
    if n not in _INDEX_CACHE:
        _INDEX_CACHE[n] = {w: i for i, w in enumerate(wall_list(n))}
    return _INDEX_CACHE[n]


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def signature(A: WeightVector) -> WallSignature:
    if not is_in_delta(A):
        raise NotInPolytopeError("signature is only defined for weights in Delta")
    return raw_signature(A)


def raw_signature(A: WeightVector, flip_mask: int = 0) -> WallSignature:
    """Signature of ``A`` flipped along ``flip_mask``, without the Delta check.

    Uses H_I(A^R) = H_{I xor R}(A), so one H table serves every flip.
    """
    d, table = A._h_table
    signs = tuple(_sign(table[w.mask ^ flip_mask] - w.k * d) for w in wall_list(A.n))
    return WallSignature(A.n, signs)


def same_chamber(A: WeightVector, B: WeightVector) -> bool:
    if A.n != B.n:
        raise DimensionError("weights of different length")
    return signature(A) == signature(B)


# ---------------------------------------------------------------------------
# symmetry group W(D_n)


def _permute_mask(mask: int, perm: Sequence[int]) -> int:
    out = 0
    for i, j in enumerate(perm):
        if mask >> i & 1:
            out |= 1 << j
    return out


def _generators(n: int):
    """Coordinate transpositions and pair flips, as (perm, flipmask) pairs."""
    ident = list(range(n))
    for i, j in itertools.combinations(range(n), 2):
        p = ident[:]
        p[i], p[j] = p[j], p[i]
        yield tuple(p), 0
    for i, j in itertools.combinations(range(n), 2):
        yield tuple(ident), (1 << i) | (1 << j)


def _act_on_wall(w: Wall, perm, flip: int) -> Wall:
    # an affine symmetry x -> flip(perm(x)) sends wall H_I = k to H_{perm(I) xor flip} = k
    mask = _permute_mask(w.mask, perm) ^ flip
    return canonical_wall(mask, w.k, w.n)[0]


def signed_permutation_group_order(n: int) -> int:
    """Order of the group generated by one transposition, the n-cycle and one pair flip.

    Elements act on the 2n signed coordinates ``+e_i`` (index i) and
    ``-e_i`` (index n+i); the closure is enumerated breadth first.
    """
    def sp(perm, flip):
        img = [0] * (2 * n)
        for i in range(n):
            j = perm[i]
            neg = flip >> j & 1
            img[i] = j + n * neg
            img[i + n] = j + n * (1 - neg)
        return tuple(img)

    gens = [sp((1, 0) + tuple(range(2, n)), 0),
            sp(tuple(range(1, n)) + (0,), 0),
            sp(tuple(range(n)), 0b11)]
    ident = tuple(range(2 * n))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                gh = tuple(h[x] for x in g)
                if gh not in seen:
                    seen.add(gh)
                    nxt.append(gh)
        frontier = nxt
    return len(seen)


def weyl_generators_check(n: int, check_order: bool | None = None) -> bool:
    """Check that the W(D_n) generators preserve the even vertices and the walls.

    With ``check_order`` (default: n <= 7) the order of the generated group is
    also compared with ``2^(n-1) * n!``.
    """
    check_n(n)
    full = (1 << n) - 1
    even = {m for m in range(full + 1) if popcount(m) % 2 == 0}
    walls = set(wall_list(n))
    for perm, flip in _generators(n):
        if {_permute_mask(m, perm) ^ flip for m in even} != even:
            return False
        if {_act_on_wall(w, perm, flip) for w in walls} != walls:
            return False
    if check_order is None:
        check_order = n <= 7
    if check_order:
        expected = 2 ** (n - 1)
        for k in range(2, n + 1):
            expected *= k
        if signed_permutation_group_order(n) != expected:
            return False
    return True
