"""Exact and heuristic minimization of pseudo-Boolean polynomials.

* :func:`brute_force_min` enumerates every assignment (vectorized, chunked).
* :func:`min_over` computes, for every assignment of a chosen set of kept
  variables, the exact minimum over all remaining variables by min-sum
  variable elimination. It is what makes checking a quadratization feasible
  when the auxiliary count is far beyond plain enumeration.
* :func:`sa_solve` is a single-flip Metropolis annealer for quadratic inputs.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .polynomial import Domain, MissingVariableError, Polynomial, convert_domain, degree, evaluate

TOL = 1e-9
MAX_ARGMINS = 1024
_CHUNK_BITS = 16


class TooManyVariablesError(ValueError):
    pass


@dataclass
class SolveReport:
    min_value: float
    argmins: list[dict[int, int]]
    assignments_visited: int
    argmins_overflow: bool = False

    def to_dict(self, registry=None) -> dict:
        def named(a):
            if registry is None:
                return {str(k): v for k, v in a.items()}
            return {registry.name(k): v for k, v in a.items()}

        return {
            "min_value": self.min_value,
            "argmins": [named(a) for a in self.argmins],
            "argmins_overflow": self.argmins_overflow,
            "assignments_visited": self.assignments_visited,
        }


@dataclass
class SaParams:
    seed: int = 0
    sweeps: int = 1000
    restarts: int = 8
    t_initial: float | None = None
    t_final: float | None = None

    def __post_init__(self):
        if self.sweeps < 1:
            raise ValueError(f"sweeps must be >= 1, got {self.sweeps}")
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        for name in ("t_initial", "t_final"):
            t = getattr(self, name)
            if t is not None and not t > 0:
                raise ValueError(f"{name} must be positive, got {t}")


def _local_masks(p: Polynomial, variables: Sequence[int]):
    pos = {v: i for i, v in enumerate(variables)}
    masks = np.array([sum(1 << pos[v] for v in t) for t in p.terms], dtype=np.int64)
    coeffs = np.array(list(p.terms.values()), dtype=np.float64)
    return masks, coeffs


def _eval_chunk(domain: Domain, masks, coeffs, idx: np.ndarray) -> np.ndarray:
    out = np.zeros(idx.shape[0], dtype=np.float64)
    for mask, c in zip(masks, coeffs):
        hit = idx & mask
        if domain is Domain.ISING:
            # bit 1 <-> spin +1, so the product is -1 iff an odd number of bits are 0
            zeros = np.bitwise_count(hit ^ mask) & 1
            out += c * (1.0 - 2.0 * zeros)
        else:
            out += c * (hit == mask)
    return out


def _decode(index: int, variables, domain: Domain) -> dict[int, int]:
    lo, hi = domain.values
    return {v: hi if (index >> i) & 1 else lo for i, v in enumerate(variables)}


def enumerate_values(p: Polynomial, variables: Sequence[int] | None = None) -> np.ndarray:
    """Value of ``p`` at every assignment; bit ``i`` of the index is ``variables[i]`` (1 = high value)."""
    variables = list(p.variables if variables is None else variables)
    missing = set(p.variables) - set(variables)
    if missing:
        raise MissingVariableError(min(missing))
    masks, coeffs = _local_masks(p, variables)
    idx = np.arange(1 << len(variables), dtype=np.int64)
    return _eval_chunk(p.domain, masks, coeffs, idx)


def brute_force_min(
    p: Polynomial,
    var_limit: int = 24,
    n_jobs: int = 1,
    max_argmins: int = MAX_ARGMINS,
) -> SolveReport:
    """Global minimum and minimizers of ``p`` by full enumeration.

    The space is cut into fixed-size chunks, so the report is the same for any
    ``n_jobs``.
    """
    variables = p.variables
    n = len(variables)
    if n > var_limit:
        raise TooManyVariablesError(f"{n} variables exceed the enumeration limit of {var_limit}")
    masks, coeffs = _local_masks(p, variables)
    total = 1 << n
    chunk = 1 << min(n, _CHUNK_BITS)
    starts = range(0, total, chunk)

    def run(start):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        vals = _eval_chunk(p.domain, masks, coeffs, idx)
        m = vals.min()
        hits = idx[vals <= m + TOL]
        return m, hits[: max_argmins + 1], vals[vals <= m + TOL][: max_argmins + 1]

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            parts = list(pool.map(run, starts))
    else:
        parts = [run(s) for s in starts]

    best = min(m for m, _, _ in parts)
    chosen = []
    for _, hits, vals in parts:
        chosen.extend(int(i) for i, v in zip(hits, vals) if v <= best + TOL)
        if len(chosen) > max_argmins:
            break
    overflow = len(chosen) > max_argmins
    argmins = [_decode(i, variables, p.domain) for i in chosen[:max_argmins]]
    return SolveReport(float(best), argmins, total, overflow)


# min-sum variable elimination


def _term_table(t: tuple, c: float, domain: Domain) -> np.ndarray:
    vals = np.array(domain.values, dtype=np.float64)
    table = np.array(c, dtype=np.float64)
    for _ in t:
        table = np.multiply.outer(table, vals)
    return table


def _expand(scope, table, target):
    shape = [2 if v in scope else 1 for v in target]
    return table.reshape(shape)


@dataclass
class Elimination:
    """Outcome of :func:`min_over`: a table over ``keep`` plus what is needed to recover minimizers."""

    keep: tuple[int, ...]
    table: np.ndarray
    domain: Domain
    steps: list = field(default_factory=list, repr=False)
    max_width: int = 0

    def argmin(self, keep_index: int | None = None) -> dict[int, int]:
        """A full minimizing assignment, for a given row of ``table`` (default: its argmin)."""
        if keep_index is None:
            keep_index = int(np.argmin(self.table))
        vals = self.domain.values
        bits = {v: (keep_index >> i) & 1 for i, v in enumerate(self.keep)}
        for v, scope, combined in reversed(self.steps):
            sel = tuple(slice(None) if u == v else bits[u] for u in scope)
            bits[v] = int(np.argmin(combined[sel]))
        return {v: vals[b] for v, b in sorted(bits.items())}


def min_over(
    p: Polynomial,
    keep: Sequence[int] = (),
    extra_factors: Sequence[tuple[tuple[int, ...], np.ndarray]] = (),
    width_limit: int = 24,
) -> Elimination:
    """Exact ``min`` over every variable not in ``keep``, tabulated over all assignments of ``keep``.

    Entry ``i`` of the returned table belongs to the assignment where
    ``keep[j]`` takes the high domain value iff bit ``j`` of ``i`` is set.
    ``extra_factors`` are ``(sorted scope, table)`` pairs added to ``p``,
    with axis position 0/1 meaning the low/high domain value.
    """
    keep = tuple(keep)
    keep_set = set(keep)
    factors: dict[tuple, np.ndarray] = {}
    for t, c in p.terms.items():
        tab = _term_table(t, c, p.domain)
        factors[t] = factors[t] + tab if t in factors else tab
    for scope, tab in extra_factors:
        scope = tuple(scope)
        factors[scope] = factors[scope] + tab if scope in factors else np.asarray(tab, dtype=np.float64)
    factors = [(s, t) for s, t in factors.items()]

    adj: dict[int, set] = {}
    for s, _ in factors:
        for v in s:
            adj.setdefault(v, set()).update(s)
    pending = sorted(set(adj) - keep_set)
    steps = []
    widest = 0
    while pending:
        # min-degree order; the combined scope of v is v plus its neighbours
        v = min(pending, key=lambda u: (len(adj[u]), u))
        scope = adj[v]
        size = len(scope)
        if size > width_limit:
            raise TooManyVariablesError(f"elimination width {size} exceeds the limit of {width_limit}")
        widest = max(widest, size)
        for u in scope:
            if u != v:
                adj[u].update(scope)
                adj[u].discard(v)
        target = tuple(sorted(scope))
        combined = np.zeros((2,) * len(target))
        rest = []
        for s, t in factors:
            if v in s:
                combined = combined + _expand(s, t, target)
            else:
                rest.append((s, t))
        axis = target.index(v)
        steps.append((v, target, combined))
        reduced = combined.min(axis=axis)
        rest.append((target[:axis] + target[axis + 1:], reduced))
        factors = rest
        pending.remove(v)

    ordered = tuple(sorted(keep_set))
    full = np.zeros((2,) * len(ordered))
    for s, t in factors:
        full = full + _expand(s, t, ordered)
    # axes in sorted order -> axes in reversed keep order, so keep[0] is the low bit
    perm = [ordered.index(v) for v in reversed(keep)]
    table = np.transpose(full, perm).reshape(-1) if keep else full.reshape(1)
    return Elimination(keep, np.ascontiguousarray(table), p.domain, steps, widest)


def exact_min(p: Polynomial, width_limit: int = 24) -> tuple[float, dict[int, int]]:
    """Global minimum and one minimizer by variable elimination."""
    elim = min_over(p, (), width_limit=width_limit)
    return float(elim.table[0]), elim.argmin(0)


# quadratization checks


@dataclass
class VerifyReport:
    passed: bool
    assignments_checked: int
    original_min: float
    quadratic_min: float
    counterexample: dict | None = None
    original_value: float | None = None
    quadratic_value: float | None = None
    inconsistent_substitution: int | None = None
    argmins_consistent: bool | None = None
    message: str = ""

    def to_dict(self, registry=None) -> dict:
        ce = self.counterexample
        if ce is not None and registry is not None:
            ce = {registry.name(k): v for k, v in ce.items()}
        elif ce is not None:
            ce = {str(k): v for k, v in ce.items()}
        return {
            "passed": self.passed,
            "assignments_checked": self.assignments_checked,
            "original_min": self.original_min,
            "quadratic_min": self.quadratic_min,
            "argmins_consistent": self.argmins_consistent,
            "counterexample": ce,
            "original_value": self.original_value,
            "quadratic_value": self.quadratic_value,
            "inconsistent_substitution": self.inconsistent_substitution,
            "message": self.message,
        }


def _violation_factor(u, v, y, domain: Domain):
    vals = domain.values
    tab = np.zeros((2, 2, 2))
    for a in range(2):
        for b in range(2):
            for c in range(2):
                if vals[c] == vals[a] * vals[b]:
                    tab[a, b, c] = np.inf
    scope = (u, v, y)
    order = np.argsort(scope)
    return tuple(scope[i] for i in order), np.transpose(tab, order)


def verify_quadratization(
    original: Polynomial,
    result,
    var_limit: int = 24,
    n_jobs: int = 1,
    check_argmins: bool = True,
) -> VerifyReport:
    """Check ``min over aux of result.quadratic == original`` for every original assignment.

    The original is compared in the quadratic's variable space. With
    ``check_argmins``, every global minimizer of the quadratic must also
    satisfy ``aux = u*v`` for every product substitution; this is decided by
    minimizing once per substitution with that constraint forced broken.
    """
    quad = result.quadratic
    orig = convert_domain(original, quad.domain)
    aux = set(result.aux_vars)
    keep = sorted(set(orig.variables) | (set(quad.variables) - aux))
    if len(keep) > var_limit:
        raise TooManyVariablesError(f"{len(keep)} original variables exceed the limit of {var_limit}")

    q_elim = min_over(quad, keep)
    p_table = enumerate_values(orig, keep)
    q_table = q_elim.table
    report = VerifyReport(
        passed=True,
        assignments_checked=len(p_table),
        original_min=float(p_table.min()),
        quadratic_min=float(q_table.min()),
    )
    bad = np.flatnonzero(np.abs(q_table - p_table) > TOL)
    if bad.size:
        i = int(bad[0])
        report.passed = False
        report.counterexample = _decode(i, keep, quad.domain)
        report.original_value = float(p_table[i])
        report.quadratic_value = float(q_table[i])
        report.message = (
            f"min over auxiliaries is {q_table[i]!r} but the original is {p_table[i]!r}"
        )
        return report

    if not check_argmins:
        return report
    product_subs = [(k, s) for k, s in enumerate(result.substitutions) if s.is_product]

    def broken_min(item):
        k, s = item
        scope, tab = _violation_factor(*s.pair, s.aux, quad.domain)
        elim = min_over(quad, (), [(scope, tab)])
        return k, float(elim.table[0]), elim

    if n_jobs > 1:
        with ThreadPoolExecutor(n_jobs) as pool:
            outcomes = list(pool.map(broken_min, product_subs))
    else:
        outcomes = [broken_min(item) for item in product_subs]
    report.argmins_consistent = True
    for k, value, elim in outcomes:
        if value <= report.quadratic_min + TOL:
            report.passed = False
            report.argmins_consistent = False
            report.inconsistent_substitution = k
            report.counterexample = elim.argmin(0)
            report.quadratic_value = value
            report.message = (
                f"a global minimizer violates substitution {k} "
                f"(aux {result.substitutions[k].aux} != product of {result.substitutions[k].pair})"
            )
            break
    return report


def project_solution(result, assignment) -> tuple[dict[int, int], bool]:
    """Restrict an assignment of the quadratic to the original variables and check every product constraint."""
    def get(v):
        try:
            return assignment[v]
        except (KeyError, IndexError):
            raise MissingVariableError(v) from None

    for v in result.quadratic.variables:
        get(v)
    aux = set(result.aux_vars)
    originals = [v for v in result.original_vars if v not in aux]
    present = set(result.quadratic.variables)
    projected = {}
    for v in originals:
        try:
            projected[v] = assignment[v]
        except (KeyError, IndexError):
            if v in present:
                raise MissingVariableError(v) from None
    consistent = all(get(s.aux) == get(s.pair[0]) * get(s.pair[1]) for s in result.substitutions if s.is_product)
    return projected, consistent


# simulated annealing


def _quadratic_arrays(p: Polynomial):
    variables = p.variables
    pos = {v: i for i, v in enumerate(variables)}
    n = len(variables)
    h = [0.0] * n
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for t, c in p.terms.items():
        if len(t) == 1:
            h[pos[t[0]]] += c
        elif len(t) == 2:
            i, j = pos[t[0]], pos[t[1]]
            nbrs[i].append((j, c))
            nbrs[j].append((i, c))
    return variables, h, nbrs


def _anneal_once(domain, h, nbrs, sweeps, t0, t1, rng):
    n = len(h)
    lo, hi = domain.values
    state = [hi if b else lo for b in rng.integers(0, 2, size=n)]
    field_ = [h[i] + sum(c * state[j] for j, c in nbrs[i]) for i in range(n)]
    energy = sum(state[i] * (h[i] + 0.5 * sum(c * state[j] for j, c in nbrs[i])) for i in range(n))
    best_e, best = energy, list(state)
    ratio = (t1 / t0) ** (1.0 / max(sweeps - 1, 1))
    temp = t0
    for _ in range(sweeps):
        rand = rng.random(n)
        for i in range(n):
            new = hi if state[i] == lo else lo
            delta = (new - state[i]) * field_[i]
            if delta <= 0 or rand[i] < math.exp(-delta / temp):
                step = new - state[i]
                state[i] = new
                energy += delta
                for j, c in nbrs[i]:
                    field_[j] += c * step
                if energy < best_e - TOL:
                    best_e, best = energy, list(state)
        temp *= ratio
    return best


def sa_solve(p: Polynomial, params: SaParams | None = None) -> SolveReport:
    """Single-flip Metropolis annealing on a quadratic; deterministic for a fixed seed."""
    params = params or SaParams()
    if degree(p) > 2:
        raise ValueError(f"annealer only accepts quadratic input, got degree {degree(p)}")
    variables, h, nbrs = _quadratic_arrays(p)
    if not variables:
        return SolveReport(p.constant_term, [{}], 1)
    scale = max([abs(x) for x in h] + [sum(abs(c) for _, c in row) for row in nbrs]) or 1.0
    t0 = params.t_initial if params.t_initial is not None else 2.0 * scale
    t1 = params.t_final if params.t_final is not None else 0.01 * scale
    seeds = np.random.SeedSequence(params.seed).spawn(params.restarts)

    best_value = None
    argmins: list[dict[int, int]] = []
    for ss in seeds:
        state = _anneal_once(p.domain, h, nbrs, params.sweeps, t0, t1, np.random.default_rng(ss))
        a = dict(zip(variables, (int(x) for x in state)))
        value = evaluate(p, a)
        if best_value is None or value < best_value - TOL:
            best_value, argmins = value, [a]
        elif value <= best_value + TOL and a not in argmins:
            argmins.append(a)
    visited = params.restarts * params.sweeps * len(variables)
    return SolveReport(float(best_value), argmins[:MAX_ARGMINS], visited, len(argmins) > MAX_ARGMINS)


__all__ = [
    "TOL",
    "TooManyVariablesError",
    "SolveReport",
    "SaParams",
    "VerifyReport",
    "Elimination",
    "brute_force_min",
    "enumerate_values",
    "min_over",
    "exact_min",
    "verify_quadratization",
    "sa_solve",
    "project_solution",
]
