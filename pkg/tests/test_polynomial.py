import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hoboquad import (
    Domain,
    Polynomial,
    add,
    convert_domain,
    degree,
    evaluate,
    fix_variable,
    multiply_term,
    normalize_term,
    preprocess,
    scale,
    sum_abs_coeffs,
)
from hoboquad.polynomial import MissingVariableError

from conftest import naive_value

I, B = Domain.ISING, Domain.BOOLEAN


@pytest.mark.parametrize(
    "varlist, domain, expected",
    [([1, 1, 2], I, (2,)), ([1, 1, 2], B, (1, 2)), ([1, 2], I, (1, 2)), ([3, 3, 3, 1], I, (1, 3)), ([], B, ())],
)
def test_normalize_term(varlist, domain, expected):
    c = -1.0 if varlist == [1, 2] else 3.0
    assert normalize_term(varlist, c, domain) == (expected, c)


def test_zero_coefficients_are_dropped():
    p = Polynomial(I, [((1, 2), 1.0), ((2, 1), -1.0), ((3,), 0.0)])
    assert len(p) == 0
    assert p == Polynomial(I)


def test_evaluate_examples():
    p = Polynomial(I, {(1, 2, 3): 2, (1,): -1})
    assert evaluate(p, {1: 1, 2: -1, 3: 1}) == -3.0
    assert evaluate(Polynomial.constant(I, 5), {}) == 5.0
    q = Polynomial(B, {(1, 2): 4, (1,): -2, (2,): -2, (): 1})
    assert evaluate(q, {1: 1, 2: 0}) == -1.0
    # the same value as s1*s2 at s = 2x - 1 = (1, -1)
    assert evaluate(Polynomial(I, {(1, 2): 1}), {1: 1, 2: -1}) == -1.0


def test_evaluate_missing_and_bad_values():
    p = Polynomial(I, {(1, 7): 1})
    with pytest.raises(MissingVariableError) as exc:
        evaluate(p, {1: 1})
    assert "7" in str(exc.value)
    with pytest.raises(ValueError):
        evaluate(p, {1: 0, 7: 1})


def test_add_scale_multiply_term():
    s12 = Polynomial(I, {(1, 2): 1})
    assert add(s12, scale(s12, -1)) == Polynomial(I)
    assert scale(Polynomial(I, {(1,): 1, (2,): 1}), 2) == Polynomial(I, {(1,): 2, (2,): 2})
    assert multiply_term(s12, {2}, 1) == Polynomial(I, {(1,): 1})
    assert multiply_term(Polynomial(B, {(1, 2): 1}), {2}, 1) == Polynomial(B, {(1, 2): 1})
    with pytest.raises(ValueError):
        add(s12, Polynomial(B, {(1,): 1}))


def test_degree():
    assert degree(Polynomial(I, {(1, 2, 3): 1, (1,): 1})) == 3
    assert degree(Polynomial(I)) == 0
    assert degree(Polynomial.constant(B, 3)) == 0


def test_convert_examples():
    s12 = Polynomial(I, {(1, 2): 1})
    assert convert_domain(s12, B) == Polynomial(B, {(1, 2): 4, (1,): -2, (2,): -2, (): 1})
    prod5 = Polynomial(I, {tuple(range(1, 6)): 1})
    assert len(convert_domain(prod5, B)) == 2**5
    assert convert_domain(convert_domain(prod5, B), I) == prod5
    assert convert_domain(s12, I) is s12


def test_sum_abs_coeffs():
    assert sum_abs_coeffs(Polynomial(I, {(1, 2, 3): 2, (1,): -1})) == 3.0
    assert sum_abs_coeffs(Polynomial.constant(I, 7)) == 0.0
    assert sum_abs_coeffs(Polynomial(I)) == 0.0


def test_fix_variable():
    p = Polynomial(I, {(1,): 5, (1, 2): 1})
    assert fix_variable(p, 1, -1) == Polynomial(I, {(): -5, (2,): -1})
    assert fix_variable(p, 9, 1) == p
    assert fix_variable(Polynomial(B, {(1, 2, 3): 1}), 2, 0) == Polynomial(B)
    with pytest.raises(ValueError):
        fix_variable(p, 1, 0)


def _brute_min(p):
    vs = p.variables
    return min(naive_value(p, dict(zip(vs, a))) for a in itertools.product(p.domain.values, repeat=len(vs)))


def test_preprocess_examples():
    p = Polynomial(I, {(1,): 5, (1, 2): 1})
    residual, fixed = preprocess(p)
    assert fixed == {1: -1}
    assert residual == Polynomial(I, {(): -5, (2,): -1})
    # every minimizer of p has s1 = -1
    for s1, s2 in itertools.product((-1, 1), repeat=2):
        if naive_value(p, {1: s1, 2: s2}) == _brute_min(p):
            assert s1 == -1

    s12 = Polynomial(I, {(1, 2): 1})
    assert preprocess(s12) == (s12, {})

    q = Polynomial(I, {(1,): -4, (1, 2): 1, (1, 3): 1, (1, 2, 3): 1})
    residual, fixed = preprocess(q)
    assert fixed == {1: 1}
    assert residual == Polynomial(I, {(): -4, (2,): 1, (3,): 1, (2, 3): 1})
    assert _brute_min(q) == _brute_min(residual)

    b = Polynomial(B, {(1,): 100, (1, 2): 1})
    assert preprocess(b) == (b, {})


# property tests

var_ids = st.integers(0, 6)
terms_st = st.lists(
    st.tuples(st.lists(var_ids, min_size=0, max_size=5), st.integers(-6, 6)),
    max_size=10,
)
domains = st.sampled_from([I, B])


@given(varlist=st.lists(var_ids, max_size=8), domain=domains)
def test_normalize_idempotent(varlist, domain):
    once = normalize_term(varlist, 1.0, domain)
    assert normalize_term(once[0], once[1], domain) == once


@settings(max_examples=60, deadline=None)
@given(terms=terms_st)
def test_convert_matches_substitution(terms):
    p = Polynomial(I, terms)
    b = convert_domain(p, B)
    vs = sorted(set(p.variables) | set(b.variables))
    for x in itertools.product((0, 1), repeat=len(vs)):
        xa = dict(zip(vs, x))
        sa = {v: 2 * xv - 1 for v, xv in xa.items()}
        assert evaluate(b, xa) == pytest.approx(naive_value(p, sa), abs=1e-9)
    assert convert_domain(b, I) == p
    assert degree(b) <= degree(p)
    assert degree(convert_domain(Polynomial(B, terms), I)) <= degree(Polynomial(B, terms))


@settings(max_examples=60, deadline=None)
@given(t1=terms_st, t2=terms_st, domain=domains)
def test_add_is_pointwise(t1, t2, domain):
    p, q = Polynomial(domain, t1), Polynomial(domain, t2)
    s = add(p, q)
    vs = sorted(set(p.variables) | set(q.variables))
    for a in itertools.product(domain.values, repeat=len(vs)):
        a = dict(zip(vs, a))
        assert naive_value(s, a) == naive_value(p, a) + naive_value(q, a)


@settings(max_examples=60, deadline=None)
@given(terms=terms_st)
def test_preprocess_preserves_minimum(terms):
    p = Polynomial(I, terms)
    residual, fixed = preprocess(p)
    assert _brute_min(p) == _brute_min(residual)
    assert not set(fixed) & set(residual.variables)
    # the fixings are part of some (in fact every) minimizer
    full = {**fixed}
    rest = residual.variables
    best = _brute_min(p)
    found = False
    for a in itertools.product((-1, 1), repeat=len(rest)):
        full.update(zip(rest, a))
        others = [v for v in p.variables if v not in full]
        for b in itertools.product((-1, 1), repeat=len(others)):
            trial = {**full, **dict(zip(others, b))}
            if naive_value(p, trial) == best:
                found = True
    assert found


def test_operators_and_repr():
    p = Polynomial(I, {(0, 1): 1})
    assert (p + 1) - 1 == p
    assert 2 * p == scale(p, 2)
    assert -p == scale(p, -1)
    assert (p * p) == Polynomial.constant(I, 1)
    assert "s0*s1" in repr(p)
    assert p({0: 1, 1: -1}) == -1
