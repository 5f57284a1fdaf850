"""Compare the spin-space and Boolean-space quadratization routes on one instance."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from .datasets import stats
from .polynomial import Polynomial, convert_domain
from .quadratize import quadratize


@dataclass
class RouteRow:
    space: str
    heuristic: str
    input_terms: int
    substitutions: int
    aux: int
    variables: int
    terms: int
    seconds: float


def compare_routes(p: Polynomial, heuristics=("algo1", "algo2"), spaces=("ising", "boolean"), M=None):
    rows = []
    for space in spaces:
        for heuristic in heuristics:
            start = time.perf_counter()
            converted = convert_domain(p, space)
            res = quadratize(converted, heuristic, M)
            elapsed = time.perf_counter() - start
            st = stats(res.quadratic)
            rows.append(RouteRow(
                space=space,
                heuristic=heuristic,
                input_terms=len(converted),
                substitutions=len(res.substitutions),
                aux=res.n_aux,
                variables=st.variables,
                terms=st.total_terms,
                seconds=elapsed,
            ))
    return rows


def format_rows(rows) -> str:
    head = f"{'space':<8} {'algo':<6} {'subs':>6} {'aux':>6} {'variables':>10} {'terms':>8}"
    lines = [head, "-" * len(head)]
    for r in rows:
        lines.append(f"{r.space:<8} {r.heuristic:<6} {r.substitutions:>6} {r.aux:>6} {r.variables:>10} {r.terms:>8}")
    return "\n".join(lines)


def rows_to_json(rows, with_timing: bool = False):
    out = []
    for r in rows:
        d = asdict(r)
        if not with_timing:
            d.pop("seconds")
        out.append(d)
    return out
