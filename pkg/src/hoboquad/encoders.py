"""Higher-order polynomial encodings of hypergraph problems and weighted MAX-SAT.

All encoders return minimization-form polynomials; maximization objectives
are negated. Node ``i`` of a hypergraph (and DIMACS variable ``i + 1``) is
variable id ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .polynomial import Domain, Polynomial, VariableRegistry, add, multiply, scale


@dataclass
class Hypergraph:
    n: int
    edges: list[tuple[int, ...]]
    weights: list[float] | None = None

    def __post_init__(self):
        self.edges = [tuple(sorted(set(e))) for e in self.edges]
        for e in self.edges:
            if not e:
                raise ValueError("hyperedges must be non-empty")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {e} has a node outside 0..{self.n - 1}")
        if self.weights is not None:
            self.weights = [float(w) for w in self.weights]
            if len(self.weights) != len(self.edges):
                raise ValueError(f"{len(self.weights)} weights for {len(self.edges)} edges")


@dataclass
class Clause:
    positive: frozenset
    negative: frozenset
    penalty: float = 1.0

    def __post_init__(self):
        self.positive = frozenset(self.positive)
        self.negative = frozenset(self.negative)
        if self.positive & self.negative:
            raise ValueError(f"variables {sorted(self.positive & self.negative)} appear with both signs")
        if not self.penalty > 0:
            raise ValueError(f"clause penalty must be positive, got {self.penalty}")

    def satisfied(self, x) -> bool:
        return any(x[v] == 1 for v in self.positive) or any(x[v] == 0 for v in self.negative)


@dataclass
class CnfFormula:
    n_vars: int
    clauses: list[Clause] = field(default_factory=list)


def _registry(n: int, domain: Domain) -> VariableRegistry:
    return VariableRegistry.default(n, domain)


def encode_max_cover(h: Hypergraph) -> Polynomial:
    """``-sum_e w(e) prod_{i in e} x_i``."""
    if h.weights is None:
        raise ValueError("max-cover needs edge weights")
    terms = [(e, -w) for e, w in zip(h.edges, h.weights)]
    return Polynomial(Domain.BOOLEAN, terms, _registry(h.n, Domain.BOOLEAN))


def encode_vertex_cover(h: Hypergraph, M: float | None = None) -> Polynomial:
    """``sum_i (1 - x_i) + M sum_e prod_{i in e} x_i``; ``x_i = 0`` puts node ``i`` in the cover."""
    if M is None:
        M = h.n + 1
    elif not M > h.n:
        raise ValueError(f"penalty must exceed the node count {h.n}, got {M}")
    terms = [((), float(h.n))] + [((i,), -1.0) for i in range(h.n)]
    terms += [(e, float(M)) for e in h.edges]
    return Polynomial(Domain.BOOLEAN, terms, _registry(h.n, Domain.BOOLEAN))


def cut_indicator(edge, n: int | None = None) -> Polynomial:
    """``1 - 4^-|e| prod_{i in e} (s_a + s_i)^2`` with ``a`` the smallest node of the edge.

    The factor for ``i = a`` is kept as written, ``(2 s_a)^2 = 4``.
    """
    edge = tuple(sorted(edge))
    a = edge[0]
    prod = Polynomial.constant(Domain.ISING, 1.0)
    for i in edge:
        pair = Polynomial(Domain.ISING, [((a,), 1.0), ((i,), 1.0)])
        prod = multiply(prod, multiply(pair, pair))
    return add(Polynomial.constant(Domain.ISING, 1.0), scale(prod, -(0.25 ** len(edge))))


def encode_max_cut(h: Hypergraph) -> Polynomial:
    """Negated count of cut hyperedges (weighted if weights are given)."""
    out = Polynomial(Domain.ISING)
    weights = h.weights or [1.0] * len(h.edges)
    for e, w in zip(h.edges, weights):
        out = add(out, scale(cut_indicator(e), -w))
    return out.with_registry(_registry(h.n, Domain.ISING))


def encode_partition(h: Hypergraph, A: float | None = None) -> Polynomial:
    """Cut count plus ``A (sum_i s_i)^2``."""
    if A is None:
        A = len(h.edges) + 1
    elif not A > 0:
        raise ValueError(f"balance weight must be positive, got {A}")
    out = Polynomial(Domain.ISING)
    weights = h.weights or [1.0] * len(h.edges)
    for e, w in zip(h.edges, weights):
        out = add(out, scale(cut_indicator(e), w))
    balance = [((), float(A) * h.n)]
    balance += [((i, j), 2.0 * A) for i in range(h.n) for j in range(i + 1, h.n)]
    out = add(out, Polynomial(Domain.ISING, balance))
    return out.with_registry(_registry(h.n, Domain.ISING))


def encode_maxsat(f: CnfFormula) -> Polynomial:
    """``sum_c p_c prod_{u in S+} (1 - u) prod_{v in S-} v``: the weight of unsatisfied clauses."""
    out = Polynomial(Domain.BOOLEAN)
    for cl in f.clauses:
        term = Polynomial(Domain.BOOLEAN, [(tuple(sorted(cl.negative)), cl.penalty)])
        for u in sorted(cl.positive):
            term = multiply(term, Polynomial(Domain.BOOLEAN, [((), 1.0), ((u,), -1.0)]))
        out = add(out, term)
    names = [f"x{i + 1}" for i in range(f.n_vars)]
    return out.with_registry(VariableRegistry.from_names(names))


__all__ = [
    "Hypergraph",
    "Clause",
    "CnfFormula",
    "cut_indicator",
    "encode_max_cover",
    "encode_vertex_cover",
    "encode_max_cut",
    "encode_partition",
    "encode_maxsat",
]
