"""Exit criteria. Run ``pytest tests/test_acceptance.py -v``; the terminal
summary ends with one PASS/FAIL line per criterion."""
import itertools
import json
import random
import sys
import time
import timeit

import numpy as np
import pytest

from hoboquad import (
    PRESETS,
    Clause,
    CnfFormula,
    DatasetSpec,
    Domain,
    Hypergraph,
    Polynomial,
    brute_force_min,
    convert_domain,
    encode_max_cut,
    encode_maxsat,
    encode_partition,
    encode_vertex_cover,
    evaluate,
    exact_min,
    gen_dataset,
    ising_pair_penalty,
    one_aux_infeasibility_certificate,
    project_solution,
    quadratize_route,
    rosenberg_penalty,
    stats,
    verify_quadratization,
)
from hoboquad.benchmark import compare_routes
from hoboquad.cli import main as cli
from hoboquad.io import (
    format_hobo,
    format_hypergraph,
    format_map,
    format_wcnf,
    parse_hobo,
    parse_hypergraph,
    parse_map,
    parse_wcnf,
)
from hoboquad.solve import enumerate_values

from conftest import random_sparse_ising

TOL = 1e-9


def best_time(fn, repeat=30):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


# 1 --------------------------------------------------------------------------


def gadget_tables():
    r = rosenberg_penalty(0, 1, 2).penalty
    rosen = {a: evaluate(r, dict(enumerate(a))) for a in itertools.product((0, 1), repeat=3)}
    g = ising_pair_penalty(0, 1, 2, 3).penalty
    full = {a: evaluate(g, dict(enumerate(a))) for a in itertools.product((-1, 1), repeat=4)}
    ising = {a: min(full[a + (-1,)], full[a + (1,)]) for a in itertools.product((-1, 1), repeat=3)}
    return rosen, full, ising


@pytest.mark.acceptance(1, "gadget truth tables")
def test_criterion_1_gadget_truth_tables(record_property):
    rosen, full, ising = gadget_tables()
    assert len(rosen) == 8 and len(full) == 16
    for (x1, x2, y), v in rosen.items():
        assert v == int(v)
        assert (v == 0) if y == x1 * x2 else (v >= 1)
    assert sum(v == 0 for v in rosen.values()) == 4
    for (s1, s2, y), v in ising.items():
        assert v == (0 if y == s1 * s2 else 2)
    assert all(v == int(v) and v >= 0 for v in full.values())
    elapsed = best_time(gadget_tables)
    record_property("detail", f"{elapsed * 1e3:.3f} ms")
    assert elapsed < 1e-3


# 2 --------------------------------------------------------------------------


@pytest.mark.acceptance(2, "single-auxiliary infeasibility certificate")
def test_criterion_2_certificate(record_property):
    cert = one_aux_infeasibility_certificate()
    assert cert.kernel_dim == 3
    ref = cert.reference_K
    for col in zip(*ref):
        assert all(sum(e * k for e, k in zip(row, col)) == 0 for row in cert.E)
    assert cert.reference_in_span
    assert cert.column_sums == [0, 0, 0]
    ref_fk = cert.reference_FK
    assert [sum(col) for col in zip(*ref_fk)] == [0, 0, 0]
    assert cert.feasible is False
    elapsed = best_time(one_aux_infeasibility_certificate)
    record_property("detail", f"{elapsed * 1e3:.3f} ms")
    assert elapsed < 1e-3


# 3 --------------------------------------------------------------------------


def _to_spins(assignment, domain):
    if domain is Domain.ISING:
        return dict(assignment)
    return {v: 2 * x - 1 for v, x in assignment.items()}


@pytest.mark.acceptance(3, "quadratization soundness on 100 random instances")
def test_criterion_3_definition_one_suite(record_property):
    start = time.perf_counter()
    rng = random.Random(2024)
    runs = enumerated = 0
    for _ in range(100):
        p = random_sparse_ising(rng, n_max=8, terms_max=10, deg_lo=3, deg_hi=6)
        assert len(p) <= 10 and len(p.variables) <= 8
        assert all(3 <= len(t) <= 6 for t in p.terms)
        p_min = brute_force_min(p).min_value
        p_vals = enumerate_values(p, p.variables)
        for space in ("ising", "boolean"):
            for heuristic in ("algo1", "algo2"):
                res = quadratize_route(p, space, heuristic)
                rep = verify_quadratization(p, res)
                assert rep.passed, rep.message
                assert rep.argmins_consistent
                q = res.quadratic
                if len(q.variables) <= 24:
                    full = brute_force_min(q)
                    q_min = full.min_value
                    assert not full.argmins_overflow
                    for a in full.argmins:
                        proj, ok = project_solution(res, a)
                        assert ok
                        spins = _to_spins(proj, q.domain)
                        assert evaluate(p, {v: spins[v] for v in p.variables}) == pytest.approx(p_min, abs=TOL)
                    enumerated += 1
                else:
                    # too wide to enumerate: exact elimination, argmins covered by the verifier
                    q_min, arg = exact_min(q)
                    assert project_solution(res, arg)[1]
                assert abs(q_min - p_min) <= TOL
                assert abs(rep.original_min - p_vals.min()) <= TOL
                runs += 1
    elapsed = time.perf_counter() - start
    record_property("detail", f"{runs} runs, {enumerated} fully enumerated, {elapsed:.1f} s")
    assert runs == 400
    assert elapsed < 300


# 4 --------------------------------------------------------------------------


@pytest.mark.acceptance(4, "ten-spin monomial: linear vs exponential growth")
def test_criterion_4_single_monomial(record_property):
    start = time.perf_counter()
    p = Polynomial(Domain.ISING, {tuple(range(1, 11)): 1})
    spin = quadratize_route(p, "ising", "algo1")
    assert spin.n_aux == 16
    assert stats(spin.quadratic).variables == 26
    converted = convert_domain(p, "boolean")
    assert len(converted) == 1024
    boolean = quadratize_route(p, "boolean", "algo1")
    s_spin, s_bool = stats(spin.quadratic), stats(boolean.quadratic)
    assert s_bool.variables > s_spin.variables
    assert s_bool.total_terms > s_spin.total_terms
    elapsed = time.perf_counter() - start
    record_property(
        "detail",
        f"ising {s_spin.variables} vars/{s_spin.total_terms} terms, "
        f"boolean {s_bool.variables} vars/{s_bool.total_terms} terms, {elapsed:.2f} s",
    )
    assert elapsed < 30


# 5 --------------------------------------------------------------------------


@pytest.mark.acceptance(5, "route comparison on D20B-shaped instances")
def test_criterion_5_route_comparison(record_property):
    start = time.perf_counter()
    summary = []
    for seed in range(3):
        p = gen_dataset(DatasetSpec.from_preset("D20B", seed=seed))
        assert stats(p).counts(9) == PRESETS["D20B"][1]
        terms = {(r.space, r.heuristic): r.terms for r in compare_routes(p)}
        for h in ("algo1", "algo2"):
            assert 2 * terms[("ising", h)] <= terms[("boolean", h)]
        for space in ("ising", "boolean"):
            a, b = terms[(space, "algo1")], terms[(space, "algo2")]
            assert abs(a - b) < 0.2 * min(a, b)
        summary.append("/".join(str(terms[k]) for k in sorted(terms)))
    elapsed = time.perf_counter() - start
    record_property("detail", f"terms b1/b2/i1/i2 per seed: {', '.join(summary)}; {elapsed:.1f} s")
    assert elapsed < 120


# 6 --------------------------------------------------------------------------


def _random_hypergraph(r):
    n = r.randint(2, 10)
    edges = [tuple(r.sample(range(n), r.randint(1, min(4, n)))) for _ in range(r.randint(1, 8))]
    return Hypergraph(n, edges, [r.randint(1, 5) for _ in edges])


@pytest.mark.acceptance(6, "encoder oracles")
def test_criterion_6_encoders(record_property):
    start = time.perf_counter()
    r = random.Random(77)
    for _ in range(20):
        h = _random_hypergraph(r)
        n, A = h.n, len(h.edges) + 1
        best_cut = max(
            sum(w for e, w in zip(h.edges, h.weights) if len({s[i] for i in e}) == 2)
            for s in itertools.product((-1, 1), repeat=n)
        )
        best_part = min(
            sum(w for e, w in zip(h.edges, h.weights) if len({s[i] for i in e}) == 2) + A * sum(s) ** 2
            for s in itertools.product((-1, 1), repeat=n)
        )
        best_cover = min(
            k for k in range(n + 1) for c in itertools.combinations(range(n), k)
            if all(set(e) & set(c) for e in h.edges)
        )
        assert brute_force_min(encode_max_cut(h)).min_value == pytest.approx(-best_cut, abs=TOL)
        assert brute_force_min(encode_partition(h)).min_value == pytest.approx(best_part, abs=TOL)
        assert brute_force_min(encode_vertex_cover(h)).min_value == best_cover

    for _ in range(20):
        n = r.randint(1, 12)
        clauses = []
        for _ in range(r.randint(0, 15)):
            vs = r.sample(range(n), r.randint(1, min(5, n)))
            k = r.randint(0, len(vs))
            clauses.append(Clause(vs[:k], vs[k:], r.randint(1, 9)))
        f = CnfFormula(n, clauses)
        values = enumerate_values(encode_maxsat(f), list(range(n)))
        bits = (np.arange(1 << n)[:, None] >> np.arange(n)) & 1
        expected = np.zeros(1 << n)
        for cl in clauses:
            sat = np.zeros(1 << n, dtype=bool)
            for v in cl.positive:
                sat |= bits[:, v] == 1
            for v in cl.negative:
                sat |= bits[:, v] == 0
            expected += cl.penalty * ~sat
        assert np.array_equal(values, expected)
    elapsed = time.perf_counter() - start
    record_property("detail", f"{elapsed:.1f} s")
    assert elapsed < 60


# 7 --------------------------------------------------------------------------


def _round_trips(tmp_path):
    count = 0
    for name in sorted(PRESETS):
        p = gen_dataset(DatasetSpec.from_preset(name, seed=1))
        text = format_hobo(p)
        assert format_hobo(parse_hobo(text)) == text
        count += 1
    r = random.Random(9)
    for seed in range(3):
        p = gen_dataset(DatasetSpec(10, (10, 20, 15, 10, 5), seed=seed))
        for space in ("ising", "boolean"):
            res = quadratize_route(p, space, "algo2")
            qt = format_hobo(res.quadratic)
            assert format_hobo(parse_hobo(qt)) == qt
            mt = format_map(res.substitutions, res.penalty_weight, res.registry)
            subs, M = parse_map(mt, parse_hobo(qt).named_registry())
            assert format_map(subs, M, res.registry) == mt
            count += 2
    for _ in range(10):
        h = _random_hypergraph(r)
        t = format_hypergraph(h)
        assert format_hypergraph(parse_hypergraph(t)) == t
        n = r.randint(1, 12)
        cls = [Clause(*(lambda vs, k: (vs[:k], vs[k:]))(r.sample(range(n), r.randint(1, min(4, n))), r.randint(0, 2)),
                      r.randint(1, 5)) for _ in range(r.randint(0, 8))]
        w = format_wcnf(CnfFormula(n, cls))
        assert format_wcnf(parse_wcnf(w)) == w
        count += 2
    return count


def _cli_capture(capsys, *argv):
    code = cli([str(a) for a in argv])
    return code, capsys.readouterr().out


@pytest.mark.acceptance(7, "format round trips and reproducible CLI runs")
def test_criterion_7_determinism_and_formats(tmp_path, capsys, record_property):
    n_formats = _round_trips(tmp_path)

    src = tmp_path / "inst.hobo"
    assert cli(["gen", "--vars", "11", "--degree-counts", "11,30,25,15,8,3", "--coeff-range", "-10,10",
                "--seed", "7", "--out", str(src)]) == 0
    src2 = tmp_path / "inst2.hobo"
    assert cli(["gen", "--vars", "11", "--degree-counts", "11,30,25,15,8,3", "--coeff-range", "-10,10",
                "--seed", "7", "--out", str(src2)]) == 0
    assert src.read_bytes() == src2.read_bytes()

    artefacts = []
    for k in range(2):
        row = []
        for space in ("ising", "boolean"):
            q, m, js = (tmp_path / f"{space}{k}.{ext}" for ext in ("hobo", "map", "json"))
            assert cli(["quadratize", "--algo", "1", "--space", space, "--in", str(src), "--out", str(q),
                        "--map", str(m), "--stats-json", str(js)]) == 0
            row.append((q.read_bytes(), m.read_bytes(), js.read_bytes()))
        artefacts.append(row)
    assert artefacts[0] == artefacts[1]
    capsys.readouterr()

    verify_out = {}
    for space in ("ising", "boolean"):
        for jobs in (1, 4):
            code, out = _cli_capture(capsys, "verify", "--original", src, "--quadratized", tmp_path / f"{space}0.hobo",
                                     "--map", tmp_path / f"{space}0.map", "--jobs", jobs, "--json")
            assert code == 0
            verify_out[(space, jobs)] = out
        assert verify_out[(space, 1)] == verify_out[(space, 4)]
        assert json.loads(verify_out[(space, 1)])["passed"]

    ex = [_cli_capture(capsys, "solve", "--in", src, "--jobs", j) for j in (1, 4)]
    assert ex[0] == ex[1] and ex[0][0] == 0
    sa = [_cli_capture(capsys, "solve", "--method", "sa", "--seed", 11, "--sweeps", 200, "--in", tmp_path / "ising0.hobo")
          for _ in range(2)]
    assert sa[0] == sa[1] and sa[0][0] == 0
    record_property("detail", f"{n_formats} format round trips; quadratize/verify/solve outputs identical")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
