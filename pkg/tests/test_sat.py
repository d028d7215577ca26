"""CNF encodings, DIMACS plumbing, and solver drivers."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from redblue.algebra import ALGEBRA_ONE_BLUE, ALGEBRA_TWO_BLUE, AlgebraSpec, blue, needs_of, red
from redblue.repcheck import EdgeColoring, check_representation
from redblue.sat import (
    SAT,
    SOLVER_ENV_VAR,
    UNKNOWN,
    UNSAT,
    ClauseGroup,
    CnfFormula,
    SolverUnavailableError,
    VarMap,
    all_edges_formula,
    build_formula,
    decode_model,
    default_solver,
    dpll,
    enumerate_models,
    exactly_one_clauses,
    free_edge_clauses,
    need_clauses,
    parse_dimacs,
    solve,
    to_dimacs,
)


def tiny_formula():
    """Exactly-one over K3 with two colors; satisfiable, 6 variables."""
    vm = VarMap(3, 2)
    return CnfFormula(
        points=3,
        colors=2,
        variant="exactly-one",
        spec=ALGEBRA_ONE_BLUE,
        num_vars=vm.num_vars,
        groups=(exactly_one_clauses(vm),),
    )


def fake_solver(tmp_path, body):
    path = tmp_path / "fakesolver"
    path.write_text("#!/bin/sh\n" + body + "\n")
    path.chmod(0o755)
    return str(path)


# ---------------------------------------------------------------------------
# variable numbering
# ---------------------------------------------------------------------------


def test_varmap_layout():
    vm = VarMap(17, 3)
    assert vm.num_base == 3 * 17 * 16 // 2 == 408
    assert vm.var(0, 1, 0) == 1
    assert vm.var(0, 1, 2) == 3
    assert vm.var(0, 2, 0) == 4
    assert vm.var(1, 0, 0) == vm.var(0, 1, 0)
    assert vm.decode(408) == (15, 16, 2)
    aux = vm.new_aux()
    assert aux == 409 and vm.num_vars == 409


def test_varmap_rejects_bad_input():
    with pytest.raises(ValueError):
        VarMap(1)
    with pytest.raises(ValueError):
        VarMap(3, 1)
    vm = VarMap(4, 3)
    with pytest.raises(ValueError):
        vm.var(0, 0, 0)
    with pytest.raises(ValueError):
        vm.var(0, 4, 0)
    with pytest.raises(ValueError):
        vm.var(0, 1, 3)
    with pytest.raises(ValueError):
        vm.decode(0)
    with pytest.raises(ValueError):
        vm.decode(vm.num_base + 1)


@given(
    st.integers(min_value=2, max_value=40),
    st.integers(min_value=2, max_value=6),
    st.data(),
)
def test_varmap_bijection(V, t, data):
    vm = VarMap(V, t)
    var = data.draw(st.integers(min_value=1, max_value=vm.num_base))
    i, j, c = vm.decode(var)
    assert 0 <= i < j < V and 0 <= c < t
    assert vm.var(i, j, c) == var


# ---------------------------------------------------------------------------
# clause family shapes
# ---------------------------------------------------------------------------


def test_exactly_one_census():
    vm = VarMap(3, 3)
    group = exactly_one_clauses(vm)
    assert group.tag == "exactly-one"
    assert len(group.clauses) == 12  # 3 edges x (1 cover + 3 exclusions)
    f = CnfFormula(
        points=3, colors=3, variant="exactly-one", spec=ALGEBRA_TWO_BLUE,
        num_vars=vm.num_vars, groups=(group,),
    )
    assert "p cnf 9 12" in to_dimacs(f).splitlines()


def test_need_clause_shape_single_candidate():
    # at V = 3 each need has one candidate: 1 witness aux, 4 clauses
    vm = VarMap(3, 2)
    group = need_clauses(vm, [(0, 1, red(0))], ALGEBRA_ONE_BLUE, "red-needs")
    assert len(group.clauses) == 4 * 4  # four needs of a red edge
    assert vm.num_vars - vm.num_base == 4
    with pytest.raises(ValueError):
        need_clauses(VarMap(2, 2), [(0, 1, red(0))], ALGEBRA_ONE_BLUE, "x")


def test_basic_formula_census():
    f = build_formula(17, "basic")
    assert f.num_base_vars == 408
    assert f.num_vars == 408 + 27 * 9 * 15 == 4053
    assert f.num_clauses == 544 + 39 + 11178 == 11761
    assert [g.tag for g in f.groups] == ["exactly-one", "precolor", "red-needs"]
    assert [len(g.clauses) for g in f.groups] == [544, 39, 11178]


def test_triangles_formula_census():
    f = build_formula(18, "triangles")
    tags = [g.tag for g in f.groups]
    assert tags == [
        "exactly-one", "precolor", "red-needs",
        "precolor-clique", "triangle", "red-needs-clique",
    ]
    sizes = dict(zip(tags, (len(g.clauses) for g in f.groups)))
    assert sizes["triangle"] == 816  # C(18, 3)
    assert sizes["precolor-clique"] == 9
    assert sizes["red-needs-clique"] == 9 * 9 * 49
    assert sizes["red-needs"] == 27 * 9 * 49


def test_full_formula_group_order():
    f = build_formula(12, "full")
    assert [g.tag for g in f.groups] == [
        "exactly-one", "precolor", "red-needs", "precolor-clique",
        "triangle", "red-needs-clique", "blue-needs-b1", "blue-needs-b2",
        "free-needs",
    ]
    sizes = {g.tag: len(g.clauses) for g in f.groups}
    # 6 edges of each blue color, 5 needs each, 10 candidates apiece
    assert sizes["blue-needs-b1"] == sizes["blue-needs-b2"] == 6 * 5 * 31
    assert f.full_check is False


def test_variant_clause_monotonicity():
    fb = build_formula(12, "basic")
    ft = build_formula(12, "triangles")
    ff = build_formula(12, "full")
    cb, ct, cf = list(fb.clauses()), list(ft.clauses()), list(ff.clauses())
    assert ct[: len(cb)] == cb  # identical shared prefix
    assert set(cb) <= set(ct) <= set(cf)
    assert fb.num_vars <= ft.num_vars <= ff.num_vars


def test_formula_construction_errors():
    with pytest.raises(ValueError):
        build_formula(12, "bogus")
    with pytest.raises(ValueError):
        build_formula(9, "basic")  # cannot hold the 10-vertex configuration
    with pytest.raises(ValueError):
        build_formula(11, "triangles")  # clique extension needs 12
    assert build_formula(11, "triangles", k6=False).points == 11
    with pytest.raises(ValueError):
        build_formula(12, "basic", spec=AlgebraSpec(2, 2))
    with pytest.raises(ValueError):
        build_formula(20, "triangles", spec=AlgebraSpec(1, 3), k6=True)
    with pytest.raises(ValueError):
        all_edges_formula(5, AlgebraSpec(2, 1))


def test_formula_validate_catches_garbage():
    bad = CnfFormula(
        points=3, colors=2, variant="x", spec=ALGEBRA_ONE_BLUE,
        num_vars=6, groups=(ClauseGroup("x", ((),)),),
    )
    with pytest.raises(ValueError):
        bad.validate()
    out_of_range = CnfFormula(
        points=3, colors=2, variant="x", spec=ALGEBRA_ONE_BLUE,
        num_vars=6, groups=(ClauseGroup("x", ((7,),)),),
    )
    with pytest.raises(ValueError):
        out_of_range.validate()


# ---------------------------------------------------------------------------
# encoding semantics against the brute-force checker
# ---------------------------------------------------------------------------


def _pin_coloring(vm, spec, bits, V):
    """Coloring number `bits` of K_V (bit per edge: 0 red, 1 blue) + units."""
    coloring = EdgeColoring(V)
    units = []
    for idx, (i, j) in enumerate((i, j) for j in range(V) for i in range(j)):
        color = blue(0) if (bits >> idx) & 1 else red(0)
        coloring.set_color(i, j, color)
        units.append((vm.var(i, j, spec.color_index(color)),))
    return coloring, units


def _needs_witnessed(coloring, spec, i, j, color):
    for need in needs_of(spec, color):
        if not any(
            k not in (i, j)
            and coloring.color_of(i, k) == need.first
            and coloring.color_of(k, j) == need.second
            for k in range(coloring.V)
        ):
            return False
    return True


def test_free_edge_clauses_match_brute_force():
    # pin all 2^10 colorings of K5; the encoding must accept exactly those
    # where edge (0, 1) carries the needs of its own color
    spec = ALGEBRA_ONE_BLUE
    vm = VarMap(5, 2)
    groups = [exactly_one_clauses(vm), free_edge_clauses(vm, [(0, 1)], spec)]
    clauses = [c for g in groups for c in g.clauses]
    outcomes = set()
    for bits in range(1024):
        coloring, units = _pin_coloring(vm, spec, bits, 5)
        sat, _ = dpll(vm.num_vars, clauses + units)
        expect = _needs_witnessed(coloring, spec, 0, 1, coloring.color_of(0, 1))
        assert sat == expect, f"coloring {bits:010b}"
        outcomes.add(expect)
    assert outcomes == {True, False}  # both behaviors exercised


def test_need_clauses_match_brute_force():
    # needs of a fixed color, independent of the edge's own pinned color
    spec = ALGEBRA_ONE_BLUE
    vm = VarMap(5, 2)
    groups = [
        exactly_one_clauses(vm),
        need_clauses(vm, [(0, 1, blue(0))], spec, "blue-needs-b1"),
    ]
    clauses = [c for g in groups for c in g.clauses]
    outcomes = set()
    for bits in range(0, 1024, 2):
        coloring, units = _pin_coloring(vm, spec, bits, 5)
        sat, _ = dpll(vm.num_vars, clauses + units)
        expect = _needs_witnessed(coloring, spec, 0, 1, blue(0))
        assert sat == expect, f"coloring {bits:010b}"
        outcomes.add(expect)
    assert outcomes == {True, False}


# ---------------------------------------------------------------------------
# DIMACS
# ---------------------------------------------------------------------------


def test_dimacs_deterministic_and_round_trips():
    a = to_dimacs(build_formula(12, "basic"))
    b = to_dimacs(build_formula(12, "basic"))
    assert a == b
    f = build_formula(12, "basic")
    num_vars, clauses = parse_dimacs(a)
    assert num_vars == f.num_vars
    assert clauses == list(f.clauses())
    assert a.splitlines()[0].startswith("c variant=basic V=12 t=3")


def test_dimacs_parse_errors():
    with pytest.raises(ValueError):
        parse_dimacs("1 2 0\n")  # clause before problem line
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2\n")
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 1\n3 0\n")  # literal above declared count
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 1\n1 2\n")  # dangling clause
    with pytest.raises(ValueError):
        parse_dimacs("c only a comment\n")
    with pytest.raises(ValueError):
        parse_dimacs("p cnf 2 2\n1 0\n")  # count mismatch


# ---------------------------------------------------------------------------
# the builtin solver
# ---------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.lists(
            st.integers(min_value=1, max_value=6).flatmap(
                lambda v: st.sampled_from([v, -v])
            ),
            min_size=1,
            max_size=4,
        ).map(tuple),
        max_size=12,
    )
)
def test_dpll_agrees_with_truth_table(clauses):
    sat, assignment = dpll(6, clauses)
    brute = any(
        all(any((bits >> (abs(l) - 1)) & 1 == (l > 0) for l in cl) for cl in clauses)
        for bits in range(64)
    )
    assert sat == brute
    if sat:
        for cl in clauses:
            assert any(assignment[abs(l)] == (l > 0) for l in cl)


def test_builtin_solves_tiny_formula(monkeypatch):
    monkeypatch.delenv(SOLVER_ENV_VAR, raising=False)
    outcome = solve(tiny_formula())
    assert outcome.status == SAT and outcome.solver == "builtin-dpll"
    assert outcome.coloring.is_total


def test_builtin_refutes_basic_ten_points(monkeypatch):
    # V=10 leaves no vertex for the (b2, b2) need of a bb-bb edge, so unit
    # propagation alone refutes the basic encoding
    monkeypatch.delenv(SOLVER_ENV_VAR, raising=False)
    f = build_formula(10, "basic")
    outcome = solve(f, dpll_cap=f.num_vars)
    assert outcome.status == UNSAT


def test_builtin_cap_raises(monkeypatch):
    monkeypatch.delenv(SOLVER_ENV_VAR, raising=False)
    f = build_formula(17, "basic")
    with pytest.raises(SolverUnavailableError) as err:
        solve(f)
    assert SOLVER_ENV_VAR in str(err.value)


def test_env_solver_must_exist(monkeypatch):
    monkeypatch.setenv(SOLVER_ENV_VAR, "no-such-solver-binary-xyz")
    with pytest.raises(SolverUnavailableError):
        default_solver()


# ---------------------------------------------------------------------------
# the external bridge, driven by scripted solvers
# ---------------------------------------------------------------------------


def test_bogus_model_is_rejected(tmp_path):
    path = fake_solver(tmp_path, 'echo "s SATISFIABLE"; echo "v -1 0"')
    with pytest.raises(RuntimeError, match="unsatisfied"):
        solve(tiny_formula(), solver=path)


def test_exit_codes_honored_without_status_line(tmp_path):
    unsat = fake_solver(tmp_path, "exit 20")
    assert solve(tiny_formula(), solver=unsat).status == UNSAT
    model = "v 1 -2 3 -4 5 -6 0"
    sat = fake_solver(tmp_path, f'echo "{model}"; exit 10')
    outcome = solve(tiny_formula(), solver=sat)
    assert outcome.status == SAT
    assert set(outcome.coloring.colors.values()) == {red(0)}


def test_timeout_surfaces_as_unknown(tmp_path):
    path = fake_solver(tmp_path, "sleep 5")
    outcome = solve(tiny_formula(), solver=path, timeout=0.2)
    assert outcome.status == UNKNOWN
    assert "timeout" in outcome.detail


def test_garbage_output_surfaces_as_unknown(tmp_path):
    path = fake_solver(tmp_path, "echo nonsense; exit 0")
    outcome = solve(tiny_formula(), solver=path)
    assert outcome.status == UNKNOWN
    assert "unrecognized" in outcome.detail


def test_missing_binary_surfaces_as_unknown(tmp_path):
    outcome = solve(tiny_formula(), solver=str(tmp_path / "nope"))
    assert outcome.status == UNKNOWN
    assert outcome.detail


# ---------------------------------------------------------------------------
# model decoding
# ---------------------------------------------------------------------------


def test_decode_model_round_trip():
    f = tiny_formula()
    model = {1: True, 2: False, 3: False, 4: True, 5: True, 6: False}
    coloring = decode_model(f, model)
    assert coloring.color_of(0, 1) == red(0)
    assert coloring.color_of(0, 2) == blue(0)
    assert coloring.color_of(1, 2) == red(0)


def test_sat_without_geometry_skips_decoding(monkeypatch):
    # foreign instances (points unknown) must solve without a coloring
    monkeypatch.delenv(SOLVER_ENV_VAR, raising=False)
    f = CnfFormula(
        points=0, colors=2, variant="parsed", spec=ALGEBRA_ONE_BLUE,
        num_vars=2, groups=(ClauseGroup("parsed", ((1,), (-1, 2))),),
    )
    outcome = solve(f)
    assert outcome.status == SAT
    assert outcome.coloring is None
    assert outcome.model == {1: True, 2: True}


def test_decode_model_errors():
    f = tiny_formula()
    with pytest.raises(ValueError):
        decode_model(f, {})
    with pytest.raises(ValueError):
        decode_model(f, {1: True, 2: True, 3: True, 5: True})


# ---------------------------------------------------------------------------
# external solver end-to-end
# ---------------------------------------------------------------------------


def test_external_finds_eight_point_representation(solver):
    outcome = solve(all_edges_formula(8, ALGEBRA_ONE_BLUE), solver=solver)
    assert outcome.status == SAT
    assert check_representation(outcome.coloring, ALGEBRA_ONE_BLUE).ok


def test_external_refutes_seven_points(solver):
    # agreeing with the exhaustive scan of all 2^21 colorings
    outcome = solve(all_edges_formula(7, ALGEBRA_ONE_BLUE), solver=solver)
    assert outcome.status == UNSAT


def test_enumerate_models_distinct_and_valid(solver):
    f = all_edges_formula(8, ALGEBRA_ONE_BLUE)
    models = enumerate_models(f, limit=3, solver=solver)
    assert len(models) == 3
    seen = {tuple(sorted(m.colors.items())) for m in models}
    assert len(seen) == 3
    for m in models:
        assert check_representation(m, ALGEBRA_ONE_BLUE).ok


def test_enumerate_models_empty_on_unsat(solver):
    f = all_edges_formula(7, ALGEBRA_ONE_BLUE)
    assert enumerate_models(f, limit=2, solver=solver) == []
