import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from hoboquad import (
    AnnealingSolver,
    Domain,
    ExhaustiveSolver,
    Polynomial,
    Quadratizer,
    brute_force_min,
    check_polynomial,
    degree,
    verify_quadratization,
)

from conftest import naive_value

P = Polynomial(Domain.ISING, {(0, 1, 2, 3): 2, (1, 2, 4): -3, (0,): 1})


def test_params_and_clone():
    q = Quadratizer(heuristic="algo2", space="boolean", penalty=50.0)
    assert q.get_params() == {"heuristic": "algo2", "space": "boolean", "penalty": 50.0, "termwise_negative": False}
    c = clone(q).set_params(space="ising")
    assert c.space == "ising" and q.space == "boolean"
    assert AnnealingSolver(seed=3).get_params()["seed"] == 3


def test_fit_transform():
    q = Quadratizer(heuristic="algo1", space="ising")
    out = q.fit_transform(P)
    assert degree(out) == 2
    assert q.n_aux_ == 2 * len(q.substitutions_)
    assert verify_quadratization(P, q.result_).passed
    assert q.transform(P) == out


def test_transform_reuses_plan_on_new_coefficients():
    q = Quadratizer().fit(P)
    other = Polynomial(Domain.ISING, {(0, 1, 2, 3): -1, (1, 2, 4): 5, (2, 3): 1})
    res = q.transform_result(other)
    assert res.substitutions == q.substitutions_
    assert verify_quadratization(other, res).passed


def test_inverse_transform_round_trip():
    for space in ("native", "boolean"):
        q = Quadratizer(space=space).fit(P)
        qubo = q.transform(P)
        best = brute_force_min(qubo).argmins[0]
        z = q.inverse_transform(best)
        assert set(z.values()) <= {-1, 1}
        full = {v: z.get(v, 1) for v in P.variables}
        assert naive_value(P, full) == brute_force_min(P).min_value


def test_validation():
    with pytest.raises(NotFittedError):
        Quadratizer().transform(P)
    with pytest.raises(ValueError):
        Quadratizer(heuristic="greedy").fit(P)
    with pytest.raises(ValueError):
        Quadratizer(space="complex").fit(P)
    with pytest.raises(ValueError):
        Quadratizer(penalty=-1).fit(P)
    with pytest.raises(TypeError):
        Quadratizer().fit([[1, 2]])
    with pytest.raises(ValueError):
        check_polynomial(P, domain="boolean")
    with pytest.raises(ValueError):
        check_polynomial(P, max_degree=2)
    with pytest.raises(ValueError):
        Polynomial(Domain.ISING, {(0,): float("nan")})


def test_solvers():
    qubo = Quadratizer().fit_transform(P)
    exact = ExhaustiveSolver().fit(qubo)
    assert exact.best_value_ == brute_force_min(P).min_value
    sa = AnnealingSolver(seed=1, sweeps=300).fit(qubo)
    assert sa.best_value_ == exact.best_value_
    assert naive_value(qubo, sa.predict(qubo)) == sa.best_value_
    with pytest.raises(ValueError):
        AnnealingSolver().fit(P)
