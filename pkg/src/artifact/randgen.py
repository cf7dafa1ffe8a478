"""Seeded random instances: weights, bundles and even subsets.

Every trial gets its own generator derived from ``(seed, index)`` so a failing
trial can be replayed from its sub-seed alone.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .eltrans import EvenSubset
from .parabolic import ParabolicBundle
from .weightpoly import WeightVector, is_in_delta, is_in_pi, raw_signature

DEFAULT_DENOMINATOR = 1000


def sub_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def trial_rng(seed: int, index: int) -> tuple[int, np.random.Generator]:
    s = sub_seed(seed, index)
    return s, np.random.default_rng(s)


def random_weight(rng: np.random.Generator, n: int, denominator: int = DEFAULT_DENOMINATOR) -> WeightVector:
    """Uniform on the grid of the open unit cube with the given denominator."""
    return WeightVector(tuple(Fraction(int(k), denominator) for k in rng.integers(1, denominator, size=n)))


def random_weight_in_delta(rng, n: int, denominator: int = DEFAULT_DENOMINATOR,
                           off_wall: bool = True, max_tries: int = 100_000) -> WeightVector:
    for _ in range(max_tries):
        A = random_weight(rng, n, denominator)
        if is_in_delta(A, strict=True) and (not off_wall or raw_signature(A).is_open()):
            return A
    raise RuntimeError("rejection sampling in Delta did not terminate")


def random_weight_in_pi(rng, n: int, denominator: int = DEFAULT_DENOMINATOR, max_tries: int = 1_000_000) -> WeightVector:
    for _ in range(max_tries):
        A = random_weight(rng, n, denominator)
        if is_in_pi(A, strict=True):
            return A
    raise RuntimeError("rejection sampling in Pi did not terminate")


def random_weight_near(rng, center: WeightVector, radius: Fraction, denominator: int) -> WeightVector:
    """Uniform grid point in the sup-ball of ``radius`` around ``center``, clipped to [0, 1]."""
    out = []
    for c in center.a:
        lo = max(Fraction(0), c - radius)
        hi = min(Fraction(1), c + radius)
        a, b = int(np.ceil(lo * denominator)), int(np.floor(hi * denominator))
        out.append(Fraction(int(rng.integers(a, b + 1)), denominator))
    return WeightVector(tuple(out))


def random_even_subset(rng, n: int) -> EvenSubset:
    mask = int(rng.integers(0, 1 << n))
    if bin(mask).count("1") % 2:
        mask ^= 1 << int(rng.integers(0, n))
    return EvenSubset(n, mask)


SPLITTINGS = ((0, 0), (0, 0), (1, -1), (1, -1), (2, -2))


def random_direction(rng, spread: int = 6) -> tuple[Fraction, Fraction]:
    while True:
        a, b = (int(x) for x in rng.integers(-spread, spread + 1, size=2))
        if a or b:
            return Fraction(a), Fraction(b)


def random_bundle(rng, n: int, splittings=SPLITTINGS, repeat_prob: float = 0.15) -> ParabolicBundle:
    """Random bundle with small-integer points; directions occasionally repeat."""
    d1, d2 = splittings[int(rng.integers(0, len(splittings)))]
    points = tuple(Fraction(int(p)) for p in rng.choice(np.arange(-12, 13), size=n, replace=False))
    dirs: list[tuple[Fraction, Fraction]] = []
    for _ in range(n):
        if dirs and rng.random() < repeat_prob:
            dirs.append(dirs[int(rng.integers(0, len(dirs)))])
        else:
            dirs.append(random_direction(rng))
    return ParabolicBundle(d1, d2, points, tuple(dirs))
