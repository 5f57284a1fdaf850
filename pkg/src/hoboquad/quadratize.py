"""Greedy degree reduction of higher-order polynomials to quadratic form.

Each step picks a variable pair ``(u, v)`` that occurs in monomials of degree
three or more, introduces a fresh variable ``y`` standing for ``u*v`` and
substitutes it into *every* such monomial. Two selection rules are provided:

``algo1``
    the pair contained in the largest number of high-degree monomials;
``algo2``
    the pair with the largest total weight, where a monomial of degree ``k``
    contributes ``k - 1``.

Ties go to the lexicographically smallest pair. When no monomial of degree
three or more is left, the constraints ``y = u*v`` are enforced by adding
``M`` times a penalty gadget per substitution: Rosenberg in Boolean space,
the two-auxiliary gadget (which adds a slack spin ``d``) in spin space.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Mapping

from .gadgets import FREEDMAN, ISING_PAIR, ROSENBERG, freedman_negative, ising_pair_penalty, rosenberg_penalty
from .polynomial import (
    ZERO_TOL,
    Domain,
    Polynomial,
    VariableRegistry,
    VarKind,
    add,
    convert_domain,
    degree,
    scale,
    sum_abs_coeffs,
)

HEURISTICS = ("algo1", "algo2")
SPACES = ("native", "ising", "boolean")


@dataclass(frozen=True)
class Substitution:
    aux: int
    pair: tuple[int, ...]
    slack: int | None = None
    gadget_kind: str = ROSENBERG
    # only set for termwise negative-monomial replacements
    coeff: float | None = None

    @property
    def is_product(self) -> bool:
        return self.gadget_kind != FREEDMAN

    def gadget(self, domain: Domain) -> Polynomial:
        if self.gadget_kind == ROSENBERG:
            return rosenberg_penalty(*self.pair, self.aux, domain).penalty
        if self.gadget_kind == ISING_PAIR:
            return ising_pair_penalty(*self.pair, self.aux, self.slack, domain).penalty
        raise ValueError(f"substitution of kind {self.gadget_kind!r} carries no product penalty")


@dataclass
class QuadratizationResult:
    quadratic: Polynomial
    substitutions: list[Substitution]
    penalty_weight: float
    registry: VariableRegistry
    reduced: Polynomial | None = None
    heuristic: str = "algo1"
    original_vars: tuple[int, ...] = field(default=())

    @property
    def domain(self) -> Domain:
        return self.quadratic.domain

    @property
    def aux_vars(self) -> tuple[int, ...]:
        out = []
        for s in self.substitutions:
            out.append(s.aux)
            if s.slack is not None:
                out.append(s.slack)
        return tuple(out)

    @property
    def n_aux(self) -> int:
        return len(self.aux_vars)


def pick_pair_algo1(table: Mapping[tuple[int, int], set]) -> tuple[int, int]:
    """Pair with the most high-degree monomials; smallest pair on ties."""
    if not table:
        raise ValueError("pair table is empty")
    return min(table, key=lambda pair: (-len(table[pair]), pair))


def pick_pair_algo2(graph: Mapping[tuple[int, int], set]) -> tuple[int, int]:
    """Pair with the largest summed edge weight; ``graph[pair]`` holds ``(monomial, weight)`` edges."""
    candidates = {pair: sum(w for _, w in edges) for pair, edges in graph.items() if edges}
    if not candidates:
        raise ValueError("graph has no edges")
    return min(candidates, key=lambda pair: (-candidates[pair], pair))


class PairIndex:
    """Incremental state of the greedy reduction.

    ``high`` holds monomials of degree >= 3, ``low`` everything else. For each
    pair of variables, ``pairs`` lists the high monomials containing it and
    ``score`` caches the heuristic value; a lazy max-heap serves the argmax.
    """

    def __init__(self, poly: Polynomial, heuristic: str = "algo1"):
        if heuristic not in HEURISTICS:
            raise ValueError(f"unknown heuristic {heuristic!r}; expected one of {HEURISTICS}")
        self.heuristic = heuristic
        self.low: dict[tuple, float] = {}
        self.high: dict[tuple, float] = {}
        self.pairs: dict[tuple[int, int], set] = {}
        self.score: dict[tuple[int, int], int] = {}
        self._heap: list = []
        for t, c in poly.terms.items():
            if len(t) >= 3:
                self._insert_high(t, c)
            else:
                self.low[t] = c

    def _weight(self, mono: tuple) -> int:
        return 1 if self.heuristic == "algo1" else len(mono) - 1

    def _bump(self, pair, delta):
        s = self.score.get(pair, 0) + delta
        if s:
            self.score[pair] = s
            heapq.heappush(self._heap, (-s, pair))
        else:
            self.score.pop(pair, None)

    def _insert_high(self, mono, c):
        self.high[mono] = c
        w = self._weight(mono)
        for pair in itertools.combinations(mono, 2):
            self.pairs.setdefault(pair, set()).add(mono)
            self._bump(pair, w)

    def _remove_high(self, mono) -> float:
        c = self.high.pop(mono)
        w = self._weight(mono)
        for pair in itertools.combinations(mono, 2):
            bucket = self.pairs[pair]
            bucket.discard(mono)
            if not bucket:
                del self.pairs[pair]
            self._bump(pair, -w)
        return c

    def __bool__(self):
        return bool(self.high)

    def table(self) -> dict:
        return {pair: set(ms) for pair, ms in self.pairs.items()}

    def graph(self) -> dict:
        return {pair: {(m, len(m) - 1) for m in ms} for pair, ms in self.pairs.items()}

    def pick(self) -> tuple[int, int]:
        while self._heap:
            neg, pair = self._heap[0]
            if self.score.get(pair) == -neg and pair in self.pairs:
                return pair
            heapq.heappop(self._heap)
        raise ValueError("no pair left to substitute")

    def substitute(self, pair: tuple[int, int], y: int) -> None:
        """Replace ``u*v`` by ``y`` in every high monomial containing the pair."""
        if pair not in self.pairs:
            raise KeyError(f"pair {pair} occurs in no monomial of degree >= 3")
        u, v = pair
        for mono in sorted(self.pairs[pair]):
            c = self._remove_high(mono)
            new = tuple(sorted([w for w in mono if w != u and w != v] + [y]))
            if len(new) <= 2:
                val = self.low.get(new, 0.0) + c
                if abs(val) < ZERO_TOL:
                    self.low.pop(new, None)
                else:
                    self.low[new] = val
            else:
                old = self._remove_high(new) if new in self.high else 0.0
                if abs(old + c) >= ZERO_TOL:
                    self._insert_high(new, old + c)

    def reduced(self, domain: Domain, registry=None) -> Polynomial:
        return Polynomial(domain, {**self.low, **self.high}, registry)


def default_penalty_weight(p: Polynomial) -> float:
    """``1 + 2 * sum |c|``: any broken constraint then costs more than the objective can gain."""
    return 1.0 + 2.0 * sum_abs_coeffs(p)


def assemble(reduced: Polynomial, subs, M: float) -> Polynomial:
    if degree(reduced) > 2:
        raise ValueError(f"reduced objective has degree {degree(reduced)} > 2")
    out = reduced
    for s in subs:
        if s.is_product:
            out = add(out, scale(s.gadget(reduced.domain), M))
    return out.with_registry(reduced.registry)


def _fresh_name(base: str, taken: set) -> str:
    name = base
    while name in taken:
        name = "_" + name
    taken.add(name)
    return name


def quadratize(
    p: Polynomial,
    heuristic: str = "algo1",
    M: float | None = None,
    termwise_negative: bool = False,
) -> QuadratizationResult:
    """Reduce ``p`` to a quadratic whose minimum over the auxiliaries equals ``p``.

    With ``termwise_negative`` (Boolean only) negative monomials of degree >= 3
    are replaced one by one with the single-auxiliary negative-monomial gadget
    and only the positive ones go through the greedy reduction.
    """
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}; expected one of {HEURISTICS}")
    if M is not None and not M > 0:
        raise ValueError(f"penalty weight must be positive, got {M}")
    if termwise_negative and p.domain is not Domain.BOOLEAN:
        raise ValueError("termwise negative-monomial replacement needs Boolean variables")
    domain = p.domain
    weight = default_penalty_weight(p) if M is None else float(M)

    registry = p.named_registry()
    originals = tuple(range(len(registry)))
    taken = {v.name for v in registry.variables}
    new_vars: list[tuple[str, VarKind]] = []
    next_id = len(registry)

    def fresh(base, kind):
        nonlocal next_id
        new_vars.append((_fresh_name(base, taken), kind))
        next_id += 1
        return next_id - 1

    subs: list[Substitution] = []
    work = p
    extra = Polynomial(domain)
    if termwise_negative:
        keep = {}
        for t, c in p.terms.items():
            if len(t) >= 3 and c < 0:
                k = len(subs) + 1
                y = fresh(f"y{k}", VarKind.AUX_PRODUCT)
                subs.append(Substitution(y, t, None, FREEDMAN, c))
                extra = add(extra, freedman_negative(t, c, y))
            else:
                keep[t] = c
        work = Polynomial(domain, keep)

    index = PairIndex(work, heuristic)
    while index:
        pair = index.pick()
        k = len(subs) + 1
        y = fresh(f"y{k}", VarKind.AUX_PRODUCT)
        slack = fresh(f"d{k}", VarKind.AUX_SLACK) if domain is Domain.ISING else None
        index.substitute(pair, y)
        kind = ISING_PAIR if domain is Domain.ISING else ROSENBERG
        subs.append(Substitution(y, pair, slack, kind))

    for name, kind in new_vars:
        registry = registry.extended([name], kind)
    reduced = add(index.reduced(domain), extra).with_registry(registry)
    quadratic = assemble(reduced, subs, weight)
    return QuadratizationResult(
        quadratic=quadratic,
        substitutions=subs,
        penalty_weight=weight,
        registry=registry,
        reduced=reduced,
        heuristic=heuristic,
        original_vars=originals,
    )


def quadratize_route(p: Polynomial, space: str = "native", heuristic: str = "algo1", M=None, **kwargs):
    """Convert ``p`` to the requested variable space (if any), then quadratize."""
    if space not in SPACES:
        raise ValueError(f"unknown space {space!r}; expected one of {SPACES}")
    if space != "native":
        p = convert_domain(p, space)
    return quadratize(p, heuristic, M, **kwargs)


__all__ = [
    "HEURISTICS",
    "SPACES",
    "Substitution",
    "QuadratizationResult",
    "PairIndex",
    "pick_pair_algo1",
    "pick_pair_algo2",
    "default_penalty_weight",
    "assemble",
    "quadratize",
    "quadratize_route",
]


def apply_plan(p: Polynomial, result: QuadratizationResult, M: float | None = None) -> QuadratizationResult:
    """Replay the substitutions of a fitted ``result`` on another polynomial.

    ``p`` must live in the same space and use the same original variable ids.
    Raises ``ValueError`` if monomials of degree >= 3 survive the replay.
    """
    if p.domain is not result.domain:
        raise ValueError(f"plan was built for {result.domain.value} variables, got {p.domain.value}")
    n_orig = len(result.original_vars)
    if p.variables and p.variables[-1] >= n_orig:
        raise ValueError(f"variable id {p.variables[-1]} is not one of the {n_orig} fitted variables")
    if M is not None and not M > 0:
        raise ValueError(f"penalty weight must be positive, got {M}")
    weight = default_penalty_weight(p) if M is None else float(M)
    extra = Polynomial(p.domain)
    keep = dict(p.terms)
    for s in result.substitutions:
        if s.gadget_kind == FREEDMAN:
            c = keep.pop(s.pair, None)
            if c is None:
                continue
            if c >= 0:
                raise ValueError(f"monomial {s.pair} is not negative; the fitted plan cannot replace it")
            extra = add(extra, freedman_negative(s.pair, c, s.aux))
    index = PairIndex(Polynomial(p.domain, keep), result.heuristic)
    for s in result.substitutions:
        if s.is_product and s.pair in index.pairs:
            index.substitute(s.pair, s.aux)
    if index:
        left = max(len(t) for t in index.high)
        raise ValueError(f"fitted plan leaves monomials of degree {left}; refit on this polynomial")
    reduced = add(index.reduced(p.domain), extra).with_registry(result.registry)
    return QuadratizationResult(
        quadratic=assemble(reduced, result.substitutions, weight),
        substitutions=list(result.substitutions),
        penalty_weight=weight,
        registry=result.registry,
        reduced=reduced,
        heuristic=result.heuristic,
        original_vars=result.original_vars,
    )


__all__.append("apply_plan")
