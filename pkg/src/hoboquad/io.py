"""Line-oriented text formats.

``.hobo`` polynomial::

    # comment
    domain ising
    vars s1 s2 s3
    2 s1 s2 s3
    -1 s1

The ``vars`` line is optional on input; it fixes variable ids (their order
on the line). Without it, ids follow natural name order. Writing is
canonical: terms in lexicographic order of their sorted id tuples, and
coefficients in shortest round-trip form.

Substitution map::

    M 7
    y1 s1 s2 d1 ising-pair
    y2 s3 s4 d2 ising-pair

Boolean substitutions have no slack column. A ``freedman`` line lists the
whole replaced monomial between the auxiliary and the kind.

Hypergraph: ``n m`` then ``m`` lines of node ids, each optionally ending in
``w=<weight>``. Weighted CNF: the ``p wcnf`` subset of DIMACS.
"""
from __future__ import annotations

import math
from pathlib import Path

from .encoders import Clause, CnfFormula, Hypergraph
from .gadgets import FREEDMAN, ISING_PAIR, ROSENBERG
from .polynomial import Domain, Polynomial, VariableRegistry, VarKind, natural_key
from .quadratize import QuadratizationResult, Substitution


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.message = message
        self.line = line
        self.path = path

    def at(self, path) -> "FormatError":
        return FormatError(self.message, self.line, path)


def format_coeff(c: float) -> str:
    c = float(c)
    if c.is_integer() and abs(c) < 2**53:
        return str(int(c))
    return repr(c)


def parse_coeff(tok: str, line: int | None = None) -> float:
    try:
        c = float(tok)
    except ValueError:
        raise FormatError(f"cannot parse coefficient {tok!r}", line) from None
    if not math.isfinite(c):
        raise FormatError(f"coefficient {tok!r} is not finite", line)
    return c


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


# polynomials


def parse_hobo(text: str) -> Polynomial:
    domain = None
    declared: list[str] | None = None
    raw_terms = []
    for no, line in _lines(text):
        toks = line.split()
        head = toks[0]
        if head == "domain":
            if domain is not None:
                raise FormatError("duplicate domain header", no)
            if len(toks) != 2:
                raise FormatError("expected 'domain ising|boolean'", no)
            try:
                domain = Domain.coerce(toks[1])
            except ValueError as exc:
                raise FormatError(str(exc), no) from None
        elif head == "vars":
            if declared is not None:
                raise FormatError("duplicate vars header", no)
            declared = toks[1:]
            if len(set(declared)) != len(declared):
                raise FormatError("duplicate name on vars line", no)
        else:
            if domain is None:
                raise FormatError("term before the domain header", no)
            raw_terms.append((parse_coeff(head, no), toks[1:]))
    if domain is None:
        raise FormatError("missing domain header")
    names = list(declared or [])
    seen = set(names)
    undeclared = sorted({n for _, vs in raw_terms for n in vs} - seen, key=natural_key)
    names.extend(undeclared)
    registry = VariableRegistry.from_names(names)
    terms = [(tuple(registry.id(n) for n in vs), c) for c, vs in raw_terms]
    return Polynomial(domain, terms, registry)


def format_hobo(p: Polynomial, comments=()) -> str:
    reg = p.named_registry()
    out = [f"# {c}" for c in comments]
    out.append(f"domain {p.domain.value}")
    if len(reg):
        out.append("vars " + " ".join(v.name for v in reg.variables))
    terms = p.terms
    for t in sorted(terms):
        out.append(" ".join([format_coeff(terms[t]), *(reg.name(v) for v in t)]))
    return "\n".join(out) + "\n"


def read_hobo(path) -> Polynomial:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse_hobo(text)
    except FormatError as exc:
        raise exc.at(path) from None


def _write(path, text: str):
    Path(path).write_text(text, encoding="utf-8")


def write_hobo(p: Polynomial, path, comments=()) -> None:
    _write(path, format_hobo(p, comments))


# substitution maps


def format_map(subs, M: float, registry: VariableRegistry) -> str:
    out = [f"M {format_coeff(M)}"]
    for s in subs:
        toks = [registry.name(s.aux), *(registry.name(v) for v in s.pair)]
        if s.slack is not None:
            toks.append(registry.name(s.slack))
        toks.append(s.gadget_kind)
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"


def parse_map(text: str, registry: VariableRegistry) -> tuple[list[Substitution], float]:
    M = None
    subs = []
    for no, line in _lines(text):
        toks = line.split()
        if toks[0] == "M":
            if M is not None:
                raise FormatError("duplicate M header", no)
            if len(toks) != 2:
                raise FormatError("expected 'M <value>'", no)
            M = parse_coeff(toks[1], no)
            continue
        kind = toks[-1]
        try:
            ids = [registry.id(n) for n in toks[:-1]]
        except KeyError as exc:
            raise FormatError(str(exc.args[0]), no) from None
        if kind == ISING_PAIR:
            if len(ids) != 4:
                raise FormatError("ising-pair line needs '<aux> <u> <v> <slack> ising-pair'", no)
            subs.append(Substitution(ids[0], tuple(ids[1:3]), ids[3], kind))
        elif kind == ROSENBERG:
            if len(ids) != 3:
                raise FormatError("rosenberg line needs '<aux> <u> <v> rosenberg'", no)
            subs.append(Substitution(ids[0], tuple(ids[1:3]), None, kind))
        elif kind == FREEDMAN:
            if len(ids) < 4:
                raise FormatError("freedman line needs '<aux> <x1> <x2> <x3> ... freedman'", no)
            subs.append(Substitution(ids[0], tuple(ids[1:]), None, kind))
        else:
            raise FormatError(f"unknown gadget kind {kind!r}", no)
    if M is None:
        raise FormatError("missing 'M <value>' header")
    return subs, M


def write_map(result, path) -> None:
    _write(path, format_map(result.substitutions, result.penalty_weight, result.registry))


def read_map(path, registry: VariableRegistry):
    try:
        return parse_map(Path(path).read_text(encoding="utf-8"), registry)
    except FormatError as exc:
        raise exc.at(path) from None


def load_result(quadratic: Polynomial, subs, M: float):
    """Rebuild a :class:`QuadratizationResult` from a quadratic file and its map."""
    reg = quadratic.named_registry()
    aux = set()
    for s in subs:
        aux.add(s.aux)
        if s.slack is not None:
            aux.add(s.slack)
    kinds = []
    for v in reg.variables:
        kind = VarKind.ORIGINAL
        if v.id in aux:
            kind = VarKind.AUX_SLACK if any(s.slack == v.id for s in subs) else VarKind.AUX_PRODUCT
        kinds.append(kind)
    reg = VariableRegistry(tuple(type(v)(v.id, v.name, k) for v, k in zip(reg.variables, kinds)))
    originals = tuple(v.id for v in reg.variables if v.id not in aux)
    return QuadratizationResult(
        quadratic=quadratic.with_registry(reg),
        substitutions=list(subs),
        penalty_weight=M,
        registry=reg,
        original_vars=originals,
    )


# hypergraphs


def parse_hypergraph(text: str) -> Hypergraph:
    lines = list(_lines(text))
    if not lines:
        raise FormatError("empty hypergraph file")
    no, header = lines[0]
    try:
        n, m = (int(t) for t in header.split())
    except ValueError:
        raise FormatError("first line must be 'n m'", no) from None
    body = lines[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges, found {len(body)}")
    edges, weights = [], []
    for no, line in body:
        toks = line.split()
        w = None
        if toks[-1].startswith("w="):
            w = parse_coeff(toks[-1][2:], no)
            toks = toks[:-1]
        try:
            edge = [int(t) for t in toks]
        except ValueError:
            raise FormatError("node ids must be integers", no) from None
        edges.append(edge)
        weights.append(w)
    has = [w is not None for w in weights]
    if any(has) and not all(has):
        raise FormatError("either every edge carries w=<weight> or none does")
    try:
        return Hypergraph(n, edges, weights if all(has) and has else None)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def format_hypergraph(h: Hypergraph) -> str:
    out = [f"{h.n} {len(h.edges)}"]
    for k, e in enumerate(h.edges):
        toks = [str(i) for i in e]
        if h.weights is not None:
            toks.append(f"w={format_coeff(h.weights[k])}")
        out.append(" ".join(toks))
    return "\n".join(out) + "\n"


def read_hypergraph(path) -> Hypergraph:
    try:
        return parse_hypergraph(Path(path).read_text(encoding="utf-8"))
    except FormatError as exc:
        raise exc.at(path) from None


def write_hypergraph(h: Hypergraph, path) -> None:
    _write(path, format_hypergraph(h))


# weighted CNF


def parse_wcnf(text: str) -> CnfFormula:
    n_vars = None
    n_clauses = None
    clauses = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if n_vars is not None:
                raise FormatError("duplicate problem line", no)
            if len(toks) < 4 or toks[1] != "wcnf":
                raise FormatError("expected 'p wcnf <vars> <clauses> [top]'", no)
            try:
                n_vars, n_clauses = int(toks[2]), int(toks[3])
            except ValueError:
                raise FormatError("variable and clause counts must be integers", no) from None
            continue
        if n_vars is None:
            raise FormatError("clause before the problem line", no)
        w = parse_coeff(toks[0], no)
        try:
            lits = [int(t) for t in toks[1:]]
        except ValueError:
            raise FormatError("literals must be integers", no) from None
        if not lits or lits[-1] != 0:
            raise FormatError("clause must end with 0", no)
        lits = lits[:-1]
        if any(abs(l) > n_vars for l in lits):
            raise FormatError(f"literal outside 1..{n_vars}", no)
        pos = {l - 1 for l in lits if l > 0}
        neg = {-l - 1 for l in lits if l < 0}
        if pos & neg:
            # tautology: never unsatisfied
            continue
        try:
            clauses.append(Clause(pos, neg, w))
        except ValueError as exc:
            raise FormatError(str(exc), no) from None
    if n_vars is None:
        raise FormatError("missing 'p wcnf' line")
    return CnfFormula(n_vars, clauses)


def format_wcnf(f: CnfFormula) -> str:
    out = [f"p wcnf {f.n_vars} {len(f.clauses)}"]
    for cl in f.clauses:
        lits = [v + 1 for v in sorted(cl.positive)] + [-(v + 1) for v in sorted(cl.negative)]
        out.append(" ".join([format_coeff(cl.penalty), *map(str, lits), "0"]))
    return "\n".join(out) + "\n"


def read_wcnf(path) -> CnfFormula:
    try:
        return parse_wcnf(Path(path).read_text(encoding="utf-8"))
    except FormatError as exc:
        raise exc.at(path) from None


def write_wcnf(f: CnfFormula, path) -> None:
    _write(path, format_wcnf(f))


__all__ = [
    "FormatError",
    "format_coeff",
    "parse_hobo",
    "format_hobo",
    "read_hobo",
    "write_hobo",
    "parse_map",
    "format_map",
    "read_map",
    "write_map",
    "load_result",
    "parse_hypergraph",
    "format_hypergraph",
    "read_hypergraph",
    "write_hypergraph",
    "parse_wcnf",
    "format_wcnf",
    "read_wcnf",
    "write_wcnf",
]
