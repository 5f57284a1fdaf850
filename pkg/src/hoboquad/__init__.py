"""Quadratization of higher-order binary polynomials in spin or Boolean space."""
from .datasets import PRESETS, DatasetSpec, StatsReport, gen_dataset, stats
from .encoders import (
    Clause,
    CnfFormula,
    Hypergraph,
    encode_max_cover,
    encode_max_cut,
    encode_maxsat,
    encode_partition,
    encode_vertex_cover,
)
from .estimators import AnnealingSolver, ExhaustiveSolver, Quadratizer, check_polynomial
from .gadgets import (
    Certificate,
    Gadget,
    freedman_negative,
    ising_pair_penalty,
    one_aux_infeasibility_certificate,
    rosenberg_penalty,
    verify_product_gadget,
)
from .polynomial import (
    Domain,
    Polynomial,
    VariableRegistry,
    VarKind,
    add,
    convert_domain,
    degree,
    evaluate,
    fix_variable,
    multiply,
    multiply_term,
    normalize_term,
    preprocess,
    scale,
    sum_abs_coeffs,
)
from .quadratize import (
    QuadratizationResult,
    Substitution,
    apply_plan,
    assemble,
    default_penalty_weight,
    pick_pair_algo1,
    pick_pair_algo2,
    quadratize,
    quadratize_route,
)
from .solve import (
    SaParams,
    SolveReport,
    VerifyReport,
    brute_force_min,
    exact_min,
    min_over,
    project_solution,
    sa_solve,
    verify_quadratization,
)

__version__ = "0.1.0"
