"""Desk-scale verification suite.

Each criterion returns a :class:`CriterionResult`; ``run_all`` drives them
for the ``verify`` subcommand and the acceptance tests. ``fault`` names a
criterion whose fixture is deliberately corrupted (negative control).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable

from .eltrans import EvenSubset, admissible_group, compose, flip
from .parabolic import (
    elementary_transform,
    is_isomorphic,
    line_slope,
    max_line_slope,
    max_line_slope_exhaustive,
    slope,
    stability_type,
    transform_line,
    STABLE,
    UNSTABLE,
)
from .randgen import (
    random_bundle,
    random_even_subset,
    random_weight,
    random_weight_in_delta,
    random_weight_near,
    trial_rng,
)
from .weightpoly import (
    WeightVector,
    h_value,
    is_in_delta,
    is_in_pi,
    popcount,
    signature,
    signed_permutation_group_order,
    weyl_generators_check,
)

DEFAULT_SEED = 20190521
ALL_N = (5, 6, 7, 8, 9, 10)
CENTRAL_RADIUS = Fraction(1, 5)


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool | None
    detail: str = ""
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return {True: "PASS", False: "FAIL", None: "SKIP"}[self.passed]

    def line(self) -> str:
        return f"[{self.status}] {self.key}: {self.title} ({self.seconds:.2f}s) {self.detail}".rstrip()

    def to_json(self, timings: bool = False) -> dict:
        out = {"criterion": self.key, "title": self.title, "status": self.status,
               "detail": self.detail, "failures": self.failures[:10]}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


class Context:
    """Shared state: seed, the n range, and campaigns reused by several criteria."""

    def __init__(self, n_list=ALL_N, seed: int = DEFAULT_SEED, fault: str | None = None):
        self.n_list = tuple(sorted(set(n_list)))
        self.seed = seed
        self.fault = fault
        self._preservation = None
        self._group_laws = None

    def ns(self, allowed) -> list[int]:
        return [n for n in self.n_list if n in allowed]

    def corrupted(self, key: str) -> bool:
        return self.fault == key

    # ------------------------------------------------------------------
    def preservation_campaign(self) -> list[dict]:
        if self._preservation is None:
            ns = self.ns((5, 6, 7)) or [5]
            records = []
            for t in range(500):
                s, rng = trial_rng(self.seed + 7, t)
                n = ns[t % len(ns)]
                A = random_weight_in_delta(rng, n)
                for _ in range(1000):
                    E = random_bundle(rng, n)
                    before = stability_type(E, A)
                    if before.verdict != UNSTABLE:
                        break
                else:
                    raise RuntimeError(f"no semistable bundle found (sub-seed {s})")
                R = random_even_subset(rng, n)
                T = elementary_transform(E, R)
                AR = flip(A, R)
                after = stability_type(T.bundle, AR)
                L = before.witness
                L2 = transform_line(L, E, R, T)
                gap_before = line_slope(A, L, E) - slope(A, E)
                gap_after = line_slope(AR, L2, T.bundle) - slope(AR, T.bundle)
                records.append({
                    "sub_seed": s, "n": n, "R": R.indices(), "E": E, "transform": T,
                    "before": before.verdict, "after": after.verdict,
                    "gap_before": gap_before, "gap_after": gap_after,
                })
            self._preservation = records
        return self._preservation

    def group_law_campaign(self) -> list[dict]:
        if self._group_laws is None:
            ns = self.ns((5, 6, 7)) or [5]
            records = []
            for t in range(100):
                s, rng = trial_rng(self.seed + 8, t)
                n = ns[t % len(ns)]
                E = random_bundle(rng, n)
                R, S = random_even_subset(rng, n), random_even_subset(rng, n)
                TR = elementary_transform(E, R)
                TRR = elementary_transform(TR.bundle, R)
                TRS = elementary_transform(TR.bundle, S)
                TD = elementary_transform(E, compose(R, S))
                records.append({
                    "sub_seed": s, "n": n, "R": R.indices(), "S": S.indices(),
                    "involution": is_isomorphic(TRR.bundle, E),
                    "group_law": is_isomorphic(TRS.bundle, TD.bundle),
                    "transforms": [(E, R, TR), (TR.bundle, R, TRR), (TR.bundle, S, TRS), (E, compose(R, S), TD)],
                })
            self._group_laws = records
        return self._group_laws


def _timed(key: str, title: str, body: Callable[[Context], tuple[bool | None, str, list[str]]]):
    def run(ctx: Context) -> CriterionResult:
        t0 = time.perf_counter()
        passed, detail, failures = body(ctx)
        return CriterionResult(key, title, passed, detail, time.perf_counter() - t0, failures)
    run.key = key  # type: ignore[attr-defined]
    run.title = title  # type: ignore[attr-defined]
    return run


def _c1(ctx):
    ns = ctx.ns(range(5, 11))
    if not ns:
        return None, "no n in 5..10", []
    fails, parts = [], []
    for n in ns:
        t0 = time.perf_counter()
        g = admissible_group(WeightVector.central(n))
        dt = time.perf_counter() - t0
        want = n - 1 + (1 if ctx.corrupted("C1") else 0)
        parts.append(f"n={n}:rank={g.rank},|El|={g.order}")
        if g.rank != want or g.order != 2 ** want or dt >= 10:
            fails.append(f"n={n}: rank {g.rank} (want {want}) in {dt:.2f}s")
    return not fails, " ".join(parts), fails


def _c2(ctx):
    ns = ctx.ns(range(6, 10))
    if not ns:
        return None, "no n in 6..9", []
    fails, parts = [], []
    for n in ns:
        A = WeightVector.epsilon_weight(n, Fraction(1, n - 3))
        t0 = time.perf_counter()
        g = admissible_group(A)
        dt = time.perf_counter() - t0
        want = 1 if ctx.corrupted("C2") else 0
        parts.append(f"n={n}:rank={g.rank}")
        if g.rank != want or dt >= 10:
            fails.append(f"n={n}: rank {g.rank} in {dt:.2f}s")
    return not fails, " ".join(parts), fails


def _c3(ctx):
    if 6 not in ctx.n_list:
        return None, "n=6 not requested", []
    from .survey import survey
    rep = survey(6, 500, ctx.seed)
    upper = 0 if ctx.corrupted("C3") else 5
    mids = sorted(k for k in rep.histogram if 0 < k < upper)
    return bool(mids), f"histogram={dict(sorted(rep.histogram.items()))}", [] if mids else ["no intermediate rank"]


def _c4(ctx):
    fails = []
    for n in ctx.ns((5, 6)):
        for J in range(1 << n):
            A = WeightVector.vertex(n, J)
            for I in range(1 << n):
                count = popcount(~I & J & ((1 << n) - 1)) + popcount(~J & I & ((1 << n) - 1))
                if ctx.corrupted("C4") and I == J == 0:
                    count += 1
                if h_value(I, A) != count:
                    fails.append(f"n={n} I={I:#x} J={J:#x}")
    ns = ctx.ns((5, 6, 7))
    for n in ns:
        for J in range(1 << n):
            if is_in_delta(WeightVector.vertex(n, J)) != (popcount(J) % 2 == 0):
                fails.append(f"vertex n={n} J={J:#x}")
    if not ns:
        return None, "no n in 5..7", []
    return not fails, f"identity n={ctx.ns((5, 6))}, vertices n={ns}", fails


def _c5(ctx):
    ns = ctx.ns((5, 6, 7))
    if not ns:
        return None, "no n in 5..7", []
    fails = [f"n={n}" for n in ns if not weyl_generators_check(n)]
    detail = f"generators ok for n={ns}"
    if 5 in ns:
        order = signed_permutation_group_order(5)
        want = 1921 if ctx.corrupted("C5") else 2 ** 4 * factorial(5)
        detail += f"; |W(D_5)|={order}"
        if order != want:
            fails.append(f"|W(D_5)| = {order}, want {want}")
    return not fails, detail, fails


def _c6(ctx):
    ns = ctx.ns((5, 6, 7, 8))
    if not ns:
        return None, "no n in 5..8", []
    fails = []
    trials = 1000
    for t in range(trials):
        s, rng = trial_rng(ctx.seed + 6, t)
        n = ns[t % len(ns)]
        A = random_weight(rng, n)
        R = random_even_subset(rng, n)
        I = int(rng.integers(0, 1 << n))
        lhs = h_value(I, flip(A, R))
        rhs = h_value(I ^ R.mask, A)
        if ctx.corrupted("C6"):
            rhs += Fraction(1, 10 ** 9)
        if lhs != rhs:
            fails.append(f"sub-seed {s}: n={n} I={I:#x} R={R.indices()}")
    return not fails, f"{trials} triples over n={ns}", fails


def _c7(ctx):
    recs = ctx.preservation_campaign()
    fails = []
    for r in recs:
        after = UNSTABLE if ctx.corrupted("C7") and r is recs[0] else r["after"]
        if after == UNSTABLE or (r["before"] == STABLE and after != STABLE):
            fails.append(f"sub-seed {r['sub_seed']}: {r['before']} -> {after}")
    stable = sum(r["before"] == STABLE for r in recs)
    return not fails, f"{len(recs)} trials ({stable} stable)", fails


def _c8(ctx):
    recs = ctx.group_law_campaign()
    fails = []
    for r in recs:
        inv = r["involution"] and not (ctx.corrupted("C8") and r is recs[0])
        if not inv:
            fails.append(f"involution sub-seed {r['sub_seed']}")
        if not r["group_law"]:
            fails.append(f"group law sub-seed {r['sub_seed']}")
    return not fails, f"{len(recs)} involution + {len(recs)} group-law instances", fails


def _c9(ctx):
    fails, count = [], 0
    items = [(r["E"], EvenSubset.of(r["n"], r["R"]), r["transform"], r["sub_seed"]) for r in ctx.preservation_campaign()]
    for r in ctx.group_law_campaign():
        items.extend((E, R, T, r["sub_seed"]) for E, R, T in r["transforms"])
    for E, R, T, s in items:
        count += 1
        e1, e2 = T.kernel_splitting
        want = E.degree - R.size + (1 if ctx.corrupted("C9") else 0)
        if e1 + e2 != want or T.bundle.degree != E.degree:
            fails.append(f"sub-seed {s}: kernel ({e1},{e2}) from degree {E.degree}, |R|={R.size}")
    return not fails, f"{count} transforms", fails


def _c10(ctx):
    recs = ctx.preservation_campaign()
    fails = []
    for r in recs:
        after = r["gap_after"] + (1 if ctx.corrupted("C10") else 0)
        if r["gap_before"] != after:
            fails.append(f"sub-seed {r['sub_seed']}: {r['gap_before']} vs {after}")
    return not fails, f"{len(recs)} witnesses", fails


def _c11(ctx):
    ns = ctx.ns((5, 6))
    if not ns:
        return None, "no n in {5,6}", []
    fails = []
    trials = 200
    for t in range(trials):
        s, rng = trial_rng(ctx.seed + 11, t)
        n = ns[t % len(ns)]
        A = random_weight_in_delta(rng, n, denominator=int(rng.choice([4, 6, 12, 1000])), off_wall=False)
        E = random_bundle(rng, n)
        fast, _ = max_line_slope(E, A)
        slow = max_line_slope_exhaustive(E, A)
        if ctx.corrupted("C11"):
            slow += 1
        if fast != slow:
            fails.append(f"sub-seed {s}: pruned {fast} vs oracle {slow}")
    return not fails, f"{trials} instances over n={ns}", fails


def _c12(ctx):
    ns = ctx.ns((5, 7))
    if not ns:
        return None, "no n in {5,7}", []
    fails, parts = [], []
    for n in ns:
        AF = WeightVector.central(n)
        target = signature(AF)
        kept, t = 0, 0
        while kept < 100:
            s, rng = trial_rng(ctx.seed + 12 + n, t)
            t += 1
            A = random_weight_near(rng, AF, CENTRAL_RADIUS, 1000)
            if not is_in_delta(A) or signature(A) != target:
                continue
            kept += 1
            inside = is_in_pi(A, strict=True) and not (ctx.corrupted("C12") and kept == 1)
            if not inside:
                fails.append(f"n={n} sub-seed {s}")
        parts.append(f"n={n}: {kept} of {t} draws in the central class")
    return not fails, "; ".join(parts), fails


CRITERIA = [
    _timed("C1", "full group at the central weight", _c1),
    _timed("C2", "trivial group at the epsilon weight", _c2),
    _timed("C3", "intermediate groups in the n=6 survey", _c3),
    _timed("C4", "vertex identities for H_I and Delta", _c4),
    _timed("C5", "W(D_n) generators and group order", _c5),
    _timed("C6", "wall-flip identity", _c6),
    _timed("C7", "semistability preserved by elementary transformations", _c7),
    _timed("C8", "bundle-level involution and group law", _c8),
    _timed("C9", "determinant degree law", _c9),
    _timed("C10", "slope-gap identity", _c10),
    _timed("C11", "pruned search agrees with exhaustive oracle", _c11),
    _timed("C12", "central class lies inside Pi", _c12),
]

CRITERIA_BY_KEY = {c.key: c for c in CRITERIA}


def run_all(ctx: Context, only: list[str] | None = None) -> list[CriterionResult]:
    keys = only or [c.key for c in CRITERIA]
    return [CRITERIA_BY_KEY[k](ctx) for k in keys]
