"""Reference simplex tests: correctness against scipy on random LPs,
status detection, and primal feasibility checking."""

import numpy as np
import pytest
from scipy.optimize import linprog

from flowgraph import (
    Approach,
    ConstraintRow,
    LpInstance,
    RowFamily,
    SimplexOptions,
    VariableRef,
    VarRole,
    build_model,
    check_primal,
    hybrid_fixture,
    solve_reference,
)
from flowgraph.errors import InvariantViolation


def random_lp(rng: np.random.Generator, n: int, m: int) -> LpInstance:
    """A bounded-feasible random LP: x0 feasible by construction, box bounds."""
    lp = LpInstance(name="rand")
    lower = rng.uniform(-5.0, 0.0, n)
    upper = lower + rng.uniform(0.5, 6.0, n)
    for j in range(n):
        lp.variables.append(
            VariableRef(VarRole.FLOW, (f"x{j}", "y"), 1, lower=lower[j], upper=upper[j])
        )
    x0 = rng.uniform(lower, upper)
    cost = rng.uniform(-2.0, 2.0, n)
    lp.objective = [(j, float(c)) for j, c in enumerate(cost) if c != 0.0]
    for i in range(m):
        coefs = rng.uniform(-1.0, 1.0, n)
        coefs[rng.random(n) < 0.4] = 0.0
        if not coefs.any():
            coefs[int(rng.integers(n))] = 1.0
        terms = [(j, float(c)) for j, c in enumerate(coefs) if c != 0.0]
        lhs0 = float(coefs @ x0)
        sense = ["<=", ">=", "="][int(rng.integers(3))]
        rhs = lhs0 + (0.5 if sense == "<=" else -0.5 if sense == ">=" else 0.0)
        lp.rows.append(ConstraintRow(RowFamily.FLOW_BOUND, sense, rhs, terms, f"r{i}"))
    return lp


def scipy_solve(lp: LpInstance):
    n = len(lp.variables)
    cost = np.zeros(n)
    for j, c in lp.objective:
        cost[j] = c
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row in lp.rows:
        vec = np.zeros(n)
        for j, c in row.terms:
            vec[j] = c
        if row.sense == "=":
            a_eq.append(vec)
            b_eq.append(row.rhs)
        elif row.sense == "<=":
            a_ub.append(vec)
            b_ub.append(row.rhs)
        else:
            a_ub.append(-vec)
            b_ub.append(-row.rhs)
        if row.rhs_low is not None:
            a_ub.append(-vec)
            b_ub.append(-row.rhs_low)
    bounds = [(v.lower if np.isfinite(v.lower) else None,
               v.upper if np.isfinite(v.upper) else None) for v in lp.variables]
    return linprog(cost, A_ub=np.array(a_ub) if a_ub else None,
                   b_ub=np.array(b_ub) if b_ub else None,
                   A_eq=np.array(a_eq) if a_eq else None,
                   b_eq=np.array(b_eq) if b_eq else None,
                   bounds=bounds, method="highs")


class TestAgainstScipy:
    @pytest.mark.parametrize("seed", range(30))
    def test_random_lps_match_highs(self, seed):
        rng = np.random.default_rng(seed)
        lp = random_lp(rng, n=int(rng.integers(3, 9)), m=int(rng.integers(2, 7)))
        ours = solve_reference(lp)
        theirs = scipy_solve(lp)
        assert theirs.status == 0, "generator must produce feasible LPs"
        assert ours.is_optimal
        scale = max(1.0, abs(theirs.fun))
        assert abs(ours.objective - theirs.fun) / scale < 1e-8
        assert check_primal(lp, ours.primal) == []

    def test_hybrid_model_matches_highs(self):
        lp = build_model(hybrid_fixture(), Approach.TWO_BB_2F)
        ours = solve_reference(lp)
        theirs = scipy_solve(lp)
        assert abs(ours.objective - theirs.fun) / max(1.0, abs(theirs.fun)) < 1e-9


class TestStatuses:
    def test_infeasible(self):
        lp = LpInstance()
        lp.variables = [VariableRef(VarRole.FLOW, ("a", "b"), 1, upper=1.0)]
        lp.rows = [ConstraintRow(RowFamily.FLOW_BOUND, ">=", 2.0, [(0, 1.0)], "r0")]
        assert solve_reference(lp).status == "infeasible"

    def test_unbounded(self):
        lp = LpInstance()
        lp.variables = [VariableRef(VarRole.FLOW, ("a", "b"), 1)]
        lp.objective = [(0, -1.0)]
        assert solve_reference(lp).status == "unbounded"

    def test_empty_instance_is_trivially_optimal(self):
        result = solve_reference(LpInstance())
        assert result.is_optimal and result.objective == 0.0

    def test_integrality_relaxed_with_warning(self):
        lp = LpInstance()
        lp.variables = [VariableRef(VarRole.UNITS_ON, ("a",), 1, upper=1.0,
                                    integrality=True)]
        lp.objective = [(0, 1.0)]
        with pytest.warns(UserWarning):
            result = solve_reference(lp)
        assert result.is_optimal

    def test_bad_options_rejected(self):
        with pytest.raises(InvariantViolation):
            SimplexOptions(feas_tol=0.0)
        with pytest.raises(InvariantViolation):
            SimplexOptions(pricing="steepest")


class TestCheckPrimal:
    def test_flags_violated_bound_and_row(self):
        lp = LpInstance()
        lp.variables = [VariableRef(VarRole.FLOW, ("a", "b"), 1, upper=1.0)]
        lp.rows = [ConstraintRow(RowFamily.FLOW_BOUND, "<=", 0.5, [(0, 1.0)], "r0")]
        violated = check_primal(lp, {"f_a_b_t1": 2.0})
        assert "bound:f_a_b_t1" in violated
        assert "r0" in violated

    def test_range_row_low_side(self):
        lp = LpInstance()
        lp.variables = [VariableRef(VarRole.FLOW, ("a", "b"), 1, lower=-5.0)]
        lp.rows = [ConstraintRow(RowFamily.FLOW_BOUND, "<=", 3.0, [(0, 1.0)], "rng",
                                 rhs_low=-1.0)]
        assert check_primal(lp, {"f_a_b_t1": -2.0}) == ["rng"]
        assert check_primal(lp, {"f_a_b_t1": 0.0}) == []

    def test_bland_pricing_agrees_with_dantzig(self):
        lp = build_model(hybrid_fixture(), Approach.ONE_BB_1F)
        a = solve_reference(lp, SimplexOptions(pricing="dantzig"))
        b = solve_reference(lp, SimplexOptions(pricing="bland"))
        assert abs(a.objective - b.objective) < 1e-9
