import itertools
import math
import random

import pytest

from hoboquad import Domain, Polynomial


def naive_value(p, assignment):
    """Direct evaluation with no library code beyond reading ``p.terms``."""
    return sum(c * math.prod(assignment[v] for v in t) for t, c in p.terms.items())


def naive_min_over(p, keep, others):
    """``{keep-assignment tuple: min over others}`` by nested enumeration."""
    vals = p.domain.values
    out = {}
    for z in itertools.product(vals, repeat=len(keep)):
        best = None
        for w in itertools.product(vals, repeat=len(others)):
            a = dict(zip(keep, z))
            a.update(zip(others, w))
            v = naive_value(p, a)
            best = v if best is None else min(best, v)
        out[z] = best
    return out


def random_sparse_ising(rng: random.Random, n_max=8, terms_max=10, deg_lo=3, deg_hi=6, coeff=5):
    n = rng.randint(deg_lo, n_max)
    n_terms = rng.randint(1, terms_max)
    terms = {}
    for _ in range(n_terms):
        k = rng.randint(deg_lo, min(deg_hi, n))
        t = tuple(sorted(rng.sample(range(n), k)))
        c = rng.choice([c for c in range(-coeff, coeff + 1) if c])
        terms[t] = terms.get(t, 0) + c
    return Polynomial(Domain.ISING, terms)


@pytest.fixture
def rng():
    return random.Random(12345)


# acceptance reporting: one line per criterion in the terminal summary

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or not (rep.when == "call" or rep.failed):
        return
    number, title = mark.args
    detail = dict(item.user_properties).get("detail", "")
    status = "PASS" if rep.passed else "FAIL"
    if number not in _ACCEPTANCE or status == "FAIL":
        _ACCEPTANCE[number] = f"criterion {number} {status}: {title}" + (f" ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
