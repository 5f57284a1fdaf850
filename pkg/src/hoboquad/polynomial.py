"""Sparse multilinear polynomials over spin or Boolean variables.

A :class:`Polynomial` maps sorted tuples of variable ids to real coefficients.
The empty tuple is the constant term. Terms are normalized on construction
(``s*s = 1`` for spins, ``x*x = x`` for bits) and zero coefficients are never
stored, so two polynomials with the same domain and term map compare equal.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

ZERO_TOL = 1e-12


class Domain(str, enum.Enum):
    ISING = "ising"
    BOOLEAN = "boolean"

    @property
    def values(self) -> tuple[int, int]:
        return (-1, 1) if self is Domain.ISING else (0, 1)

    @property
    def prefix(self) -> str:
        return "s" if self is Domain.ISING else "x"

    @classmethod
    def coerce(cls, value) -> "Domain":
        if isinstance(value, Domain):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown domain {value!r}; expected 'ising' or 'boolean'") from None


class VarKind(str, enum.Enum):
    ORIGINAL = "original"
    AUX_PRODUCT = "aux-product"
    AUX_SLACK = "aux-slack"


@dataclass(frozen=True)
class Variable:
    id: int
    name: str
    kind: VarKind = VarKind.ORIGINAL


def natural_key(name: str):
    """Sort key that orders ``s2`` before ``s10``."""
    return tuple(
        (0, int(tok), "") if tok.isdigit() else (1, 0, tok)
        for tok in re.findall(r"\d+|\D+", name)
    )


@dataclass(frozen=True)
class VariableRegistry:
    """Dense id -> name table. Ids are positions in ``variables``."""

    variables: tuple[Variable, ...] = ()
    _by_name: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        by_name = {}
        for i, var in enumerate(self.variables):
            if var.id != i:
                raise ValueError(f"variable {var.name!r} has id {var.id}, expected {i}")
            if var.name in by_name:
                raise ValueError(f"duplicate variable name {var.name!r}")
            by_name[var.name] = i
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def from_names(cls, names: Iterable[str], kind: VarKind = VarKind.ORIGINAL) -> "VariableRegistry":
        return cls(tuple(Variable(i, n, kind) for i, n in enumerate(names)))

    @classmethod
    def default(cls, n: int, domain: Domain) -> "VariableRegistry":
        return cls.from_names(f"{domain.prefix}{i}" for i in range(n))

    def __len__(self) -> int:
        return len(self.variables)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def name(self, var_id: int) -> str:
        return self.variables[var_id].name

    def id(self, name: str) -> int:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"unknown variable name {name!r}") from None

    def kind(self, var_id: int) -> VarKind:
        return self.variables[var_id].kind

    def extended(self, names: Iterable[str], kind: VarKind) -> "VariableRegistry":
        new = list(self.variables)
        for n in names:
            new.append(Variable(len(new), n, kind))
        return VariableRegistry(tuple(new))

    def padded(self, n: int, domain: Domain) -> "VariableRegistry":
        """Registry covering at least ids ``0..n-1``; missing names get defaults."""
        if len(self) >= n:
            return self
        names = []
        for i in range(len(self), n):
            name = f"{domain.prefix}{i}"
            while name in self or name in names:
                name = "_" + name
            names.append(name)
        return self.extended(names, VarKind.ORIGINAL)


def normalize_term(varlist: Iterable[int], coeff: float, domain: Domain) -> tuple[tuple[int, ...], float]:
    """Collapse repeated variables: spins square to 1, bits square to themselves."""
    domain = Domain.coerce(domain)
    counts = Counter(int(v) for v in varlist)
    for v in counts:
        if v < 0:
            raise ValueError(f"variable ids must be non-negative, got {v}")
    if domain is Domain.ISING:
        varset = tuple(sorted(v for v, k in counts.items() if k % 2))
    else:
        varset = tuple(sorted(counts))
    return varset, coeff


class MissingVariableError(KeyError):
    def __init__(self, var_id: int):
        super().__init__(var_id)
        self.var_id = var_id

    def __str__(self):
        return f"assignment has no value for variable {self.var_id}"


class Polynomial:
    """Immutable multilinear polynomial tagged with a variable domain.

    ``terms`` may be a mapping or an iterable of ``(variables, coefficient)``
    pairs; variable lists are normalized and like terms merged. ``registry``
    only carries variable names and does not take part in equality.
    """

    __slots__ = ("domain", "_terms", "registry")

    def __init__(self, domain, terms=(), registry: VariableRegistry | None = None):
        self.domain = Domain.coerce(domain)
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[tuple[int, ...], float] = {}
        for vars_, c in items:
            c = float(c)
            if not math.isfinite(c):
                raise ValueError(f"coefficient {c} of term {tuple(vars_)} is not finite")
            key, c = normalize_term(vars_, c, self.domain)
            merged[key] = merged.get(key, 0.0) + c
        self._terms = {k: merged[k] for k in sorted(merged) if abs(merged[k]) >= ZERO_TOL}
        self.registry = registry

    @classmethod
    def _raw(cls, domain: Domain, terms: dict, registry=None) -> "Polynomial":
        # terms must already be normalized, merged and zero-free
        obj = cls.__new__(cls)
        obj.domain = domain
        obj._terms = {k: terms[k] for k in sorted(terms)}
        obj.registry = registry
        return obj

    @classmethod
    def constant(cls, domain, value: float = 0.0) -> "Polynomial":
        return cls(domain, {(): value})

    @property
    def terms(self) -> Mapping[tuple[int, ...], float]:
        return MappingProxyType(self._terms)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted({v for t in self._terms for v in t}))

    @property
    def n_vars(self) -> int:
        """Number of variables that appear in at least one term."""
        return len(self.variables)

    @property
    def constant_term(self) -> float:
        return self._terms.get((), 0.0)

    def with_registry(self, registry: VariableRegistry | None) -> "Polynomial":
        return Polynomial._raw(self.domain, self._terms, registry)

    def named_registry(self) -> VariableRegistry:
        """The registry, padded with default names so every id is covered."""
        top = max(self.variables, default=-1) + 1
        reg = self.registry or VariableRegistry()
        return reg.padded(top, self.domain)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.domain is other.domain and self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        return f"Polynomial({self.domain.value}, {self.to_string()})"

    def to_string(self) -> str:
        if not self._terms:
            return "0"
        reg = self.named_registry()
        parts = []
        for t, c in self._terms.items():
            mono = "*".join(reg.name(v) for v in t)
            parts.append(f"{c:+g}" + (f"*{mono}" if mono else ""))
        return " ".join(parts)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.domain, other)
        return add(self, other)

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1.0)

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = Polynomial.constant(self.domain, other)
        return add(self, scale(other, -1.0))

    def __rsub__(self, other):
        return scale(self, -1.0) + other

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return multiply(self, other)
        return scale(self, other)

    __rmul__ = __mul__

    def __call__(self, assignment) -> float:
        return evaluate(self, assignment)


def _merge_registry(p: Polynomial, q: Polynomial):
    a, b = p.registry, q.registry
    if a is None:
        return b
    if b is None or len(a) >= len(b):
        return a
    return b


def _check_same_domain(p: Polynomial, q: Polynomial):
    if p.domain is not q.domain:
        raise ValueError(f"domain mismatch: {p.domain.value} vs {q.domain.value}")


def _accumulate(acc: dict, key, c: float):
    v = acc.get(key, 0.0) + c
    if abs(v) < ZERO_TOL:
        acc.pop(key, None)
    else:
        acc[key] = v


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same_domain(p, q)
    acc = dict(p._terms)
    for t, c in q._terms.items():
        _accumulate(acc, t, c)
    return Polynomial._raw(p.domain, acc, _merge_registry(p, q))


def scale(p: Polynomial, c: float) -> Polynomial:
    c = float(c)
    acc = {t: v * c for t, v in p._terms.items() if abs(v * c) >= ZERO_TOL}
    return Polynomial._raw(p.domain, acc, p.registry)


def _product_key(a: tuple, b: tuple, domain: Domain) -> tuple:
    if domain is Domain.ISING:
        return tuple(sorted(set(a).symmetric_difference(b)))
    return tuple(sorted(set(a).union(b)))


def multiply_term(p: Polynomial, varset: Iterable[int], coeff: float) -> Polynomial:
    """Multiply every term of ``p`` by the monomial ``coeff * prod(varset)``."""
    key, coeff = normalize_term(varset, float(coeff), p.domain)
    acc: dict = {}
    for t, c in p._terms.items():
        _accumulate(acc, _product_key(t, key, p.domain), c * coeff)
    return Polynomial._raw(p.domain, acc, p.registry)


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    _check_same_domain(p, q)
    acc: dict = {}
    for tq, cq in q._terms.items():
        for tp, cp in p._terms.items():
            _accumulate(acc, _product_key(tp, tq, p.domain), cp * cq)
    return Polynomial._raw(p.domain, acc, _merge_registry(p, q))


def degree(p: Polynomial) -> int:
    return max((len(t) for t in p._terms), default=0)


def _value_of(assignment, v: int):
    if isinstance(assignment, Mapping):
        if v not in assignment:
            raise MissingVariableError(v)
        return assignment[v]
    if v >= len(assignment):
        raise MissingVariableError(v)
    return assignment[v]


def evaluate(p: Polynomial, assignment) -> float:
    """Evaluate ``p`` at ``assignment`` (a mapping id -> value, or a sequence indexed by id)."""
    allowed = p.domain.values
    cache = {}
    for v in p.variables:
        val = _value_of(assignment, v)
        if val not in allowed:
            raise ValueError(f"value {val!r} for variable {v} is not in the {p.domain.value} domain")
        cache[v] = val
    total = 0.0
    for t, c in p._terms.items():
        prod = c
        for v in t:
            prod *= cache[v]
        total += prod
    return total


def convert_domain(p: Polynomial, target) -> Polynomial:
    """Rewrite ``p`` in the other variable space via ``s = 2x - 1``."""
    target = Domain.coerce(target)
    if target is p.domain:
        return p
    acc: dict = {}
    for t, c in p._terms.items():
        k = len(t)
        for r in range(k + 1):
            for sub in itertools.combinations(t, r):
                if target is Domain.BOOLEAN:
                    # prod(2x_i - 1) = sum_S 2^|S| (-1)^(k-|S|) prod_S x
                    w = c * (2.0 ** r) * (-1.0 if (k - r) % 2 else 1.0)
                else:
                    # prod((1 + s_i)/2) = 2^-k sum_S prod_S s
                    w = c * (0.5 ** k)
                _accumulate(acc, sub, w)
    return Polynomial._raw(target, acc, p.registry)


def sum_abs_coeffs(p: Polynomial) -> float:
    return float(sum(abs(c) for t, c in p._terms.items() if t))


def fix_variable(p: Polynomial, v: int, value) -> Polynomial:
    if value not in p.domain.values:
        raise ValueError(f"value {value!r} is not in the {p.domain.value} domain")
    acc: dict = {}
    for t, c in p._terms.items():
        if v in t:
            if value == 0:
                continue
            t = tuple(u for u in t if u != v)
            c = c * value
        _accumulate(acc, t, c)
    return Polynomial._raw(p.domain, acc, p.registry)


def relabel(p: Polynomial, mapping: Mapping[int, int], registry: VariableRegistry | None = None) -> Polynomial:
    """Rename variable ids; ids missing from ``mapping`` are kept."""
    return Polynomial(p.domain, [(tuple(mapping.get(v, v) for v in t), c) for t, c in p._terms.items()], registry)


def preprocess(p: Polynomial) -> tuple[Polynomial, dict[int, int]]:
    """Fix spins whose linear field dominates all their higher-order couplings.

    If ``|h_i|`` exceeds the total weight of the higher-order terms containing
    ``s_i``, then ``s_i = -sign(h_i)`` in every minimizer. The rule is applied
    in id order until nothing changes. Spins left with only a linear term are
    not fixed. Boolean inputs are returned unchanged.
    """
    fixed: dict[int, int] = {}
    if p.domain is not Domain.ISING:
        return p, fixed
    changed = True
    while changed:
        changed = False
        coupling: dict[int, float] = {}
        for t, c in p._terms.items():
            if len(t) >= 2:
                for v in t:
                    coupling[v] = coupling.get(v, 0.0) + abs(c)
        for v in sorted(coupling):
            h = p._terms.get((v,), 0.0)
            if abs(h) > coupling[v]:
                value = -1 if h > 0 else 1
                fixed[v] = value
                p = fix_variable(p, v, value)
                changed = True
                break
    return p, fixed


__all__ = [
    "Domain",
    "VarKind",
    "Variable",
    "VariableRegistry",
    "Polynomial",
    "MissingVariableError",
    "normalize_term",
    "evaluate",
    "add",
    "scale",
    "multiply_term",
    "multiply",
    "degree",
    "convert_domain",
    "sum_abs_coeffs",
    "fix_variable",
    "relabel",
    "preprocess",
    "natural_key",
]
