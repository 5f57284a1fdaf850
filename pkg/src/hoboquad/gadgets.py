"""Penalty gadgets enforcing ``y = u*v`` with quadratic polynomials.

Boolean space has a one-auxiliary gadget (Rosenberg). Spin space needs a
second, slack, auxiliary: :func:`one_aux_infeasibility_certificate` shows that
no quadratic in ``(s1, s2, y)`` alone can do the job, and
:func:`ising_pair_penalty` gives a two-auxiliary gadget that does.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .polynomial import Domain, Polynomial, degree, evaluate


ROSENBERG = "rosenberg"
ISING_PAIR = "ising-pair"
FREEDMAN = "freedman"


@dataclass(frozen=True)
class Gadget:
    penalty: Polynomial
    constrained_vars: tuple[int, int, int]
    slack_vars: tuple[int, ...] = ()
    kind: str = ROSENBERG


def _distinct(*ids):
    if len(set(ids)) != len(ids):
        raise ValueError(f"gadget variables must be distinct, got {ids}")


def rosenberg_penalty(u: int, v: int, y: int, domain=Domain.BOOLEAN) -> Gadget:
    """``3y + uv - 2uy - 2vy``: zero iff ``y = uv``, at least 1 otherwise."""
    if Domain.coerce(domain) is not Domain.BOOLEAN:
        raise ValueError("the Rosenberg gadget is only valid over Boolean variables")
    _distinct(u, v, y)
    poly = Polynomial(Domain.BOOLEAN, [((y,), 3), ((u, v), 1), ((u, y), -2), ((v, y), -2)])
    return Gadget(poly, (u, v, y), (), ROSENBERG)


def ising_pair_penalty(u: int, v: int, y: int, d: int, domain=Domain.ISING) -> Gadget:
    """Two-auxiliary spin gadget; ``min_d`` is 0 when ``y = uv`` and 2 otherwise."""
    if Domain.coerce(domain) is not Domain.ISING:
        raise ValueError("the two-auxiliary gadget is only valid over spin variables")
    _distinct(u, v, y, d)
    poly = Polynomial(
        Domain.ISING,
        [
            ((), 4), ((u,), 1), ((v,), 1), ((y,), -1), ((d,), -2),
            ((u, v), 1), ((u, y), -1), ((v, y), -1),
            ((u, d), -2), ((v, d), -2), ((y, d), 2),
        ],
    )
    return Gadget(poly, (u, v, y), (d,), ISING_PAIR)


def freedman_negative(term_vars, coeff: float, y: int, domain=Domain.BOOLEAN) -> Polynomial:
    """Replace the negative monomial ``coeff * prod(term_vars)`` by one auxiliary bit.

    Returns ``|coeff| * ((k-1) y - sum_i x_i y)``, whose minimum over ``y``
    equals the monomial for every ``x``.
    """
    if Domain.coerce(domain) is not Domain.BOOLEAN:
        raise ValueError("the negative-monomial gadget is only valid over Boolean variables")
    if coeff >= 0:
        raise ValueError(f"negative-monomial gadget needs coeff < 0, got {coeff}")
    term_vars = tuple(sorted(set(term_vars)))
    k = len(term_vars)
    if k < 3:
        raise ValueError(f"monomial must have degree >= 3, got {k}")
    if y in term_vars:
        raise ValueError(f"auxiliary id {y} collides with a monomial variable")
    w = abs(coeff)
    terms = [((y,), w * (k - 1))] + [((x, y), -w) for x in term_vars]
    return Polynomial(Domain.BOOLEAN, terms)


@dataclass
class GadgetReport:
    passed: bool
    # (u, v, y) -> min over slack assignments
    table: dict = field(default_factory=dict)
    violation: tuple | None = None
    reason: str = ""


def verify_product_gadget(g: Gadget) -> GadgetReport:
    """Exhaustively check that ``min_slack penalty`` is 0 iff ``y = u*v`` and positive otherwise."""
    p = g.penalty
    u, v, y = g.constrained_vars
    names = [u, v, y, *g.slack_vars]
    extra = [w for w in p.variables if w not in names]
    if len(names) + len(extra) > 6:
        raise ValueError("verify_product_gadget handles at most 6 variables")
    vals = p.domain.values
    report = GadgetReport(passed=True)
    for a, b, c in itertools.product(vals, repeat=3):
        best = None
        for rest in itertools.product(vals, repeat=len(g.slack_vars) + len(extra)):
            assignment = dict(zip([u, v, y, *g.slack_vars, *extra], (a, b, c, *rest)))
            val = evaluate(p, assignment)
            best = val if best is None else min(best, val)
        report.table[(a, b, c)] = best
        ok = best == 0 if c == a * b else best > 0
        if not ok and report.passed:
            report.passed = False
            report.violation = (a, b, c)
            report.reason = (
                f"min penalty {best} at (u, v, y) = {(a, b, c)} "
                + ("should be 0" if c == a * b else "should be positive")
            )
    if degree(p) > 2:
        report.passed = False
        report.reason = report.reason or f"penalty has degree {degree(p)} > 2"
    return report


# exact rational linear algebra


def rref(matrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(matrix) -> int:
    return len(rref(matrix)[1])


def right_kernel(matrix) -> list[list[Fraction]]:
    """Basis of ``{a : M a = 0}`` as a list of column vectors (one per free column)."""
    m, pivots = rref(matrix)
    n_cols = len(matrix[0])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for row, pc in enumerate(pivots):
            vec[pc] = -m[row][f]
        basis.append(vec)
    return basis


def matmul(a, b):
    cols = list(zip(*b))
    return [[Fraction(sum(x * y for x, y in zip(row, col) if x and y)) for col in cols] for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


# monomial order: 1, s1, s2, y, s1 s2, s1 y, s2 y
def _monomial_row(s1: int, s2: int, y: int) -> list[int]:
    return [1, s1, s2, y, s1 * s2, s1 * y, s2 * y]


def _constraint_rows(satisfied: bool) -> list[list[int]]:
    rows = []
    for s1, s2 in itertools.product((-1, 1), repeat=2):
        y = s1 * s2 if satisfied else -s1 * s2
        rows.append(_monomial_row(s1, s2, y))
    return rows


EQUALITY_ROWS = (
    (1, -1, -1, 1, 1, -1, -1),
    (1, -1, 1, -1, -1, 1, -1),
    (1, 1, -1, -1, -1, -1, 1),
    (1, 1, 1, 1, 1, 1, 1),
)
INEQUALITY_ROWS = (
    (1, -1, -1, -1, 1, 1, 1),
    (1, -1, 1, 1, -1, -1, 1),
    (1, 1, -1, 1, -1, 1, -1),
    (1, 1, 1, -1, 1, -1, -1),
)
# reference kernel basis of the equality system, one column per row here
REFERENCE_KERNEL_COLUMNS = (
    (0, 1, 0, 0, 0, 0, -1),
    (0, 0, 1, 0, 0, -1, 0),
    (0, 0, 0, 1, -1, 0, 0),
)


@dataclass
class Certificate:
    E: list[list[int]]
    F: list[list[int]]
    K: list[list[Fraction]]
    FK: list[list[Fraction]]
    reference_K: list[list[int]]
    reference_FK: list[list[Fraction]]
    kernel_dim: int
    reference_in_span: bool
    column_sums: list[Fraction]
    feasible: bool

    def summary(self) -> str:
        def fmt(rows):
            return "\n".join("  [" + " ".join(f"{str(x):>4}" for x in row) + "]" for row in rows)

        lines = [
            "Equality rows E (assignments with y = s1*s2):",
            fmt(self.E),
            "Inequality rows F (assignments with y != s1*s2):",
            fmt(self.F),
            f"Right kernel of E: dimension {self.kernel_dim}, computed basis K (columns):",
            fmt(self.K),
            "F K:",
            fmt(self.FK),
            "F K with the reference basis:",
            fmt(self.reference_FK),
            f"reference kernel columns lie in span(K): {self.reference_in_span}",
            f"column sums of F K: {[str(x) for x in self.column_sums]}",
            "every entry of F K b must be >= 1, so their sum must be >= 4,",
            "but the column sums vanish, so that sum is 0 for every b.",
            f"feasible: {self.feasible}",
        ]
        return "\n".join(lines)


def one_aux_infeasibility_certificate() -> Certificate:
    """Prove that no quadratic ``h(s1, s2, y)`` is 0 exactly on ``y = s1*s2`` and >= 1 elsewhere.

    Writing ``h`` by its 7 coefficients ``a``, the zero conditions give ``E a = 0``
    and the positivity conditions ``F a >= 1``. With ``a = K b`` for a kernel basis
    ``K``, the columns of ``F K`` all sum to zero, so the four entries of
    ``F K b`` cannot all be at least 1.
    """
    E = [list(r) for r in EQUALITY_ROWS]
    F = [list(r) for r in INEQUALITY_ROWS]
    assert E == _constraint_rows(True), "equality rows disagree with the monomial table"
    assert F == _constraint_rows(False), "inequality rows disagree with the monomial table"

    basis = right_kernel(E)
    K = transpose(basis)
    assert all(x == 0 for row in matmul(E, K) for x in row), "E K != 0"
    kernel_dim = rank(basis)
    assert kernel_dim == len(basis)

    ref_K = transpose([list(c) for c in REFERENCE_KERNEL_COLUMNS])
    assert all(x == 0 for row in matmul(E, ref_K) for x in row), "reference basis is not in ker E"
    ref_cols = [list(c) for c in REFERENCE_KERNEL_COLUMNS]
    # same span iff stacking adds no rank and the reference basis is itself full rank
    in_span = rank(basis + ref_cols) == kernel_dim and rank(ref_cols) == kernel_dim

    FK = matmul(F, K)
    sums = [sum(col, Fraction(0)) for col in zip(*FK)]
    assert all(s == 0 for s in sums), "a column of F K has a nonzero sum"
    # sum_i (F K b)_i = sum_j colsum_j * b_j = 0 < 4 for every b
    feasible = any(s != 0 for s in sums)

    return Certificate(
        E=E, F=F, K=K, FK=FK,
        reference_K=ref_K, reference_FK=matmul(F, ref_K),
        kernel_dim=kernel_dim, reference_in_span=in_span,
        column_sums=sums, feasible=feasible,
    )


__all__ = [
    "Gadget",
    "GadgetReport",
    "Certificate",
    "ROSENBERG",
    "ISING_PAIR",
    "FREEDMAN",
    "rosenberg_penalty",
    "ising_pair_penalty",
    "freedman_negative",
    "verify_product_gadget",
    "one_aux_infeasibility_certificate",
    "rref",
    "rank",
    "right_kernel",
]
