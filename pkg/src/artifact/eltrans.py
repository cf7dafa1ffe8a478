"""Elementary transformations acting on weights, and the admissible subgroup.

An elementary transformation is labelled by an even subset ``R`` of
``{1..n}``; it flips ``a_i -> 1 - a_i`` for ``i`` in ``R`` and the group law
is symmetric difference. ``R`` is admissible for ``A`` when the flipped
weight has the same wall signature as ``A``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .weightpoly import (
    DimensionError,
    NotInPolytopeError,
    WeightVector,
    check_n,
    indices_from_mask,
    is_in_delta,
    is_in_pi,
    mask_from_indices,
    popcount,
    raw_signature,
    signature,
)

EXHAUSTIVE_MAX_N = 20
ELEMENTS_LISTING_LIMIT = 1024


@dataclass(frozen=True, order=True)
class EvenSubset:
    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise ValueError(f"mask {self.mask:#x} not a subset of 1..{self.n}")
        if popcount(self.mask) % 2:
            raise ValueError(f"elementary transformations need an even subset, got {indices_from_mask(self.mask)}")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "EvenSubset":
        return cls(n, mask_from_indices(indices, n))

    @classmethod
    def empty(cls, n: int) -> "EvenSubset":
        return cls(n, 0)

    @property
    def size(self) -> int:
        return popcount(self.mask)

    def indices(self) -> list[int]:
        return indices_from_mask(self.mask)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> (i - 1) & 1)


def all_even_subsets(n: int) -> list[EvenSubset]:
    return [EvenSubset(n, m) for m in range(1 << n) if popcount(m) % 2 == 0]


def flip(A: WeightVector, R: EvenSubset) -> WeightVector:
    if A.n != R.n:
        raise DimensionError("weight and subset of different n")
    return WeightVector(tuple(1 - x if R.mask >> i & 1 else x for i, x in enumerate(A.a)))


def compose(R: EvenSubset, S: EvenSubset) -> EvenSubset:
    if R.n != S.n:
        raise DimensionError("subsets of different n")
    return EvenSubset(R.n, R.mask ^ S.mask)


def _require_delta(A: WeightVector) -> None:
    if not is_in_delta(A):
        raise NotInPolytopeError("weight vector is not in Delta")


def is_admissible(A: WeightVector, R: EvenSubset) -> bool:
    """True iff the flipped weight lies in the same signature class as ``A``."""
    _require_delta(A)
    return signature(A) == signature(flip(A, R))


def _is_admissible_fast(A: WeightVector, base, mask: int) -> bool:
    return raw_signature(A, mask) == base


def f2_basis(masks: Iterable[int]) -> list[int]:
    """Reduced echelon basis over GF(2) of the span of ``masks``.

    Each basis vector is reduced against the others, so every basis element
    is the smallest mask in its coset of the span of the rest.
    """
    pivots: dict[int, int] = {}
    for m in masks:
        for bit, vec in sorted(pivots.items(), reverse=True):
            if m >> bit & 1:
                m ^= vec
        if m:
            top = m.bit_length() - 1
            for bit in list(pivots):
                if pivots[bit] >> top & 1:
                    pivots[bit] ^= m
            pivots[top] = m
    return sorted(pivots.values())


def span(generators: Sequence[int]) -> list[int]:
    elems = {0}
    for g in generators:
        elems |= {e ^ g for e in elems}
    return sorted(elems)


@dataclass(frozen=True)
class AdmissibleGroup:
    n: int
    elements: tuple[EvenSubset, ...]
    generators: tuple[EvenSubset, ...]
    rank: int
    corollary_applies: bool = False
    exhaustive: bool = True
    _masks: frozenset = field(default=frozenset(), repr=False, compare=False)

    @property
    def order(self) -> int:
        return 1 << self.rank

    def __contains__(self, R: EvenSubset) -> bool:
        return R.mask in self._masks

    def to_json(self) -> dict:
        truncated = len(self.elements) > ELEMENTS_LISTING_LIMIT
        return {
            "rank": self.rank,
            "order": self.order,
            "generators": [g.indices() for g in self.generators],
            "elements_truncated": truncated,
            "elements": [] if truncated else [e.indices() for e in self.elements],
            "corollary_applies": self.corollary_applies,
        }


def _group_from_masks(A: WeightVector, masks: list[int], exhaustive: bool) -> AdmissibleGroup:
    n = A.n
    gens = f2_basis(masks)
    closure = span(gens)
    if exhaustive and closure != sorted(masks):
        raise AssertionError("admissible set is not closed under symmetric difference")
    return AdmissibleGroup(
        n=n,
        elements=tuple(EvenSubset(n, m) for m in closure),
        generators=tuple(EvenSubset(n, g) for g in gens),
        rank=len(gens),
        corollary_applies=is_in_pi(A, strict=True),
        exhaustive=exhaustive,
        _masks=frozenset(closure),
    )


def admissible_group(A: WeightVector, method: str = "auto") -> AdmissibleGroup:
    """The subgroup of even subsets ``R`` with ``A^R`` in the signature class of ``A``.

    ``method`` is ``"exhaustive"`` (test every even subset), ``"generators"``
    (close the admissible pair flips under composition; a lower bound only)
    or ``"auto"`` (exhaustive up to n = 20).
    """
    _require_delta(A)
    n = A.n
    check_n(n)
    if method == "auto":
        method = "exhaustive" if n <= EXHAUSTIVE_MAX_N else "generators"
    base = raw_signature(A)
    if method == "exhaustive":
        masks = [m for m in range(1 << n) if popcount(m) % 2 == 0 and _is_admissible_fast(A, base, m)]
        return _group_from_masks(A, masks, exhaustive=True)
    if method == "generators":
        return _group_from_masks(A, _grow_generators(A, base), exhaustive=False)
    raise ValueError(f"unknown method {method!r}")


def _grow_generators(A: WeightVector, base) -> list[int]:
    # only pair flips are tested; the result is the subgroup they generate,
    # which can miss admissible elements that no admissible pair produces
    n = A.n
    good = [(1 << i) | (1 << j) for i in range(n) for j in range(i + 1, n)
            if _is_admissible_fast(A, base, (1 << i) | (1 << j))]
    return span(f2_basis(good))
