"""scikit-learn style wrappers.

:class:`Quadratizer` learns a substitution plan in ``fit`` and applies it in
``transform``, so a plan fitted on one instance can be reused on others with
the same support (different coefficients). The solvers follow the estimator
protocol with ``fit`` storing the best assignment found.
"""
from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .polynomial import Domain, Polynomial, convert_domain, degree
from .quadratize import HEURISTICS, SPACES, apply_plan, quadratize
from .solve import SaParams, brute_force_min, project_solution, sa_solve


def check_polynomial(X, domain=None, max_degree: int | None = None) -> Polynomial:
    """Validate an estimator input the way ``check_array`` validates arrays."""
    if not isinstance(X, Polynomial):
        raise TypeError(f"expected a Polynomial, got {type(X).__name__}")
    if domain is not None and X.domain is not Domain.coerce(domain):
        raise ValueError(f"expected {Domain.coerce(domain).value} variables, got {X.domain.value}")
    if max_degree is not None and degree(X) > max_degree:
        raise ValueError(f"expected degree <= {max_degree}, got {degree(X)}")
    return X


class Quadratizer(TransformerMixin, BaseEstimator):
    """Reduce a higher-order polynomial to a quadratic one.

    Parameters
    ----------
    heuristic : {"algo1", "algo2"}
        Pair selection rule: most monomials, or largest summed ``degree - 1``.
    space : {"native", "ising", "boolean"}
        Variable space in which the reduction runs; the input is converted first.
    penalty : float or None
        Gadget weight ``M``; ``None`` uses ``1 + 2 * sum |c|`` of the input.
    termwise_negative : bool
        Boolean space only: replace negative monomials one at a time with a
        single auxiliary each instead of sending them through the greedy loop.
    """

    def __init__(self, heuristic="algo1", space="native", penalty=None, termwise_negative=False):
        self.heuristic = heuristic
        self.space = space
        self.penalty = penalty
        self.termwise_negative = termwise_negative

    def _validate(self):
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"heuristic must be one of {HEURISTICS}, got {self.heuristic!r}")
        if self.space not in SPACES:
            raise ValueError(f"space must be one of {SPACES}, got {self.space!r}")
        if self.penalty is not None and not self.penalty > 0:
            raise ValueError(f"penalty must be positive, got {self.penalty}")

    def _to_space(self, X):
        return X if self.space == "native" else convert_domain(X, self.space)

    def fit(self, X, y=None):
        self._validate()
        X = check_polynomial(X)
        self.input_domain_ = X.domain
        X = self._to_space(X)
        self.result_ = quadratize(X, self.heuristic, self.penalty, self.termwise_negative)
        self.substitutions_ = self.result_.substitutions
        self.penalty_weight_ = self.result_.penalty_weight
        self.n_aux_ = self.result_.n_aux
        self.domain_ = X.domain
        self._fit_input = X
        return self

    def transform_result(self, X):
        check_is_fitted(self, "result_")
        X = self._to_space(check_polynomial(X))
        if X == self._fit_input and self.penalty is None:
            return self.result_
        return apply_plan(X, self.result_, self.penalty)

    def transform(self, X):
        return self.transform_result(X).quadratic

    def inverse_transform(self, assignment):
        """Project an assignment of the quadratic back onto the original variables.

        Values are returned in the space of the polynomial passed to ``fit``.
        """
        check_is_fitted(self, "result_")
        projected, _ = project_solution(self.result_, assignment)
        if self.domain_ is self.input_domain_:
            return projected
        if self.input_domain_ is Domain.ISING:
            return {v: 2 * x - 1 for v, x in projected.items()}
        return {v: (s + 1) // 2 for v, s in projected.items()}


class ExhaustiveSolver(BaseEstimator):
    def __init__(self, var_limit=24, n_jobs=1):
        self.var_limit = var_limit
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        X = check_polynomial(X)
        self.report_ = brute_force_min(X, self.var_limit, self.n_jobs)
        self.best_value_ = self.report_.min_value
        self.best_assignment_ = self.report_.argmins[0]
        return self

    def predict(self, X):
        return self.fit(X).best_assignment_


class AnnealingSolver(BaseEstimator):
    """Single-flip simulated annealing for quadratic polynomials."""

    def __init__(self, seed=0, sweeps=1000, restarts=8, t_initial=None, t_final=None):
        self.seed = seed
        self.sweeps = sweeps
        self.restarts = restarts
        self.t_initial = t_initial
        self.t_final = t_final

    def fit(self, X, y=None):
        X = check_polynomial(X, max_degree=2)
        params = SaParams(self.seed, self.sweeps, self.restarts, self.t_initial, self.t_final)
        self.report_ = sa_solve(X, params)
        self.best_value_ = self.report_.min_value
        self.best_assignment_ = self.report_.argmins[0]
        return self

    def predict(self, X):
        return self.fit(X).best_assignment_


__all__ = ["check_polynomial", "Quadratizer", "ExhaustiveSolver", "AnnealingSolver"]
