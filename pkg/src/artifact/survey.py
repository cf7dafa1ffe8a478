"""Rank histogram of admissible groups over random weights inside Pi."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .eltrans import admissible_group
from .randgen import random_weight_in_pi, trial_rng
from .weightpoly import WeightVector, check_n


@dataclass
class SurveyReport:
    n: int
    samples: int
    seed: int
    histogram: dict[int, int]
    representatives: dict[int, WeightVector]
    sub_seeds: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": self.samples,
            "seed": self.seed,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "representatives": {str(k): self.representatives[k].to_json()["weights"] for k in sorted(self.representatives)},
            "representative_sub_seeds": {str(k): self.sub_seeds[k] for k in sorted(self.sub_seeds)},
        }

    def csv_rows(self) -> list[list]:
        return [["n", "rank", "count"]] + [[self.n, k, v] for k, v in sorted(self.histogram.items())]


def survey(n: int, samples: int, seed: int) -> SurveyReport:
    """Rejection-sample weights strictly inside Pi and tally admissible ranks.

    The first sample of each rank is kept as its representative.
    """
    check_n(n)
    hist: Counter = Counter()
    reps: dict[int, WeightVector] = {}
    seeds: dict[int, int] = {}
    for t in range(samples):
        s, rng = trial_rng(seed, t)
        A = random_weight_in_pi(rng, n)
        k = admissible_group(A).rank
        hist[k] += 1
        if k not in reps:
            reps[k] = A
            seeds[k] = s
    return SurveyReport(n, samples, seed, dict(hist), reps, seeds)
