"""Synthetic sparse instances with prescribed per-degree term counts, and term statistics."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .polynomial import Domain, Polynomial, VariableRegistry

# variables, term counts for degree 1, 2, ...
PRESETS = {
    "D20A": (15, (15, 105, 60, 53, 49, 49, 48, 37, 20, 23, 12, 4)),
    "D20B": (14, (14, 91, 60, 55, 38, 31, 10, 5, 6)),
    "D20C": (15, (15, 105, 62, 47, 52, 33, 46, 49, 26, 22, 26, 17, 7, 1)),
    "D30A": (17, (17, 136, 98, 61, 50, 30, 28, 22, 23, 6, 3, 1, 2)),
    "D30B": (18, (18, 153, 130, 66, 50, 41, 35, 14, 12, 4, 2)),
    "D30C": (20, (20, 190, 114, 65, 58, 50, 44, 24, 23, 7, 0, 2)),
}

_ENUMERATE_LIMIT = 200_000


@dataclass
class DatasetSpec:
    n: int
    degree_counts: tuple[int, ...]
    coeff_low: int = -10
    coeff_high: int = 10
    seed: int = 0
    domain: Domain = Domain.ISING

    def __post_init__(self):
        self.degree_counts = tuple(int(c) for c in self.degree_counts)
        self.domain = Domain.coerce(self.domain)
        if self.n < 0:
            raise ValueError("variable count must be non-negative")
        if self.coeff_low > self.coeff_high:
            raise ValueError(f"empty coefficient range [{self.coeff_low}, {self.coeff_high}]")
        if self.coeff_low == self.coeff_high == 0:
            raise ValueError("coefficient range contains only 0")
        for k, c in enumerate(self.degree_counts, 1):
            if c < 0:
                raise ValueError(f"negative count at degree {k}")
            if c > math.comb(self.n, k):
                raise ValueError(f"{c} terms of degree {k} requested but only C({self.n}, {k}) = "
                                 f"{math.comb(self.n, k)} exist")

    @classmethod
    def from_preset(cls, name: str, **kwargs) -> "DatasetSpec":
        n, counts = PRESETS[name]
        return cls(n, counts, **kwargs)


def _sample_subsets(rng, n: int, k: int, count: int) -> list[tuple[int, ...]]:
    total = math.comb(n, k)
    if total <= _ENUMERATE_LIMIT:
        pool = list(itertools.combinations(range(n), k))
        picks = rng.choice(total, size=count, replace=False)
        return [pool[i] for i in sorted(picks)]
    chosen = set()
    while len(chosen) < count:
        chosen.add(tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False))))
    return sorted(chosen)


def gen_dataset(spec: DatasetSpec) -> Polynomial:
    """Random polynomial with exactly ``spec.degree_counts[k-1]`` distinct terms of degree ``k``.

    Supports are uniform without replacement; coefficients are uniform
    nonzero integers in ``[coeff_low, coeff_high]``.
    """
    rng = np.random.default_rng(spec.seed)
    allowed = np.array([c for c in range(spec.coeff_low, spec.coeff_high + 1) if c != 0])
    terms = {}
    for k, count in enumerate(spec.degree_counts, 1):
        if count == 0:
            continue
        supports = _sample_subsets(rng, spec.n, k, count)
        coeffs = rng.choice(allowed, size=count)
        for t, c in zip(supports, coeffs):
            terms[t] = float(c)
    registry = VariableRegistry.from_names(f"{spec.domain.prefix}{i + 1}" for i in range(spec.n))
    return Polynomial(spec.domain, terms, registry)


@dataclass
class StatsReport:
    variables: int
    terms_by_degree: dict[int, int] = field(default_factory=dict)
    total_terms: int = 0

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "terms": self.total_terms,
            "by_degree": {str(k): v for k, v in sorted(self.terms_by_degree.items())},
        }

    def counts(self, max_degree: int | None = None) -> tuple[int, ...]:
        """Term counts for degrees ``1..max_degree`` (zeros included)."""
        top = max_degree if max_degree is not None else max(self.terms_by_degree, default=0)
        return tuple(self.terms_by_degree.get(k, 0) for k in range(1, top + 1))


def stats(p: Polynomial) -> StatsReport:
    hist = Counter(len(t) for t in p.terms)
    return StatsReport(p.n_vars, dict(sorted(hist.items())), len(p))


__all__ = ["PRESETS", "DatasetSpec", "gen_dataset", "StatsReport", "stats"]
