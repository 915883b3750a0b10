import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from source.cgf.errors import NonIntegerData, UnboundedFeasibleSet, PivotLimitExceeded, \
    InsufficientFractionalRows, EnumerationTooLarge
from source.cgf.input.utils import fraction_array
from source.cgf.input.instance_gen import gen_knapsack, gen_packing
from source.cgf.lp_simplex import IlpInstance, SimplexTableau, solve_lp, append_rows, extract_tableau, select_rows, \
    standard_form, validate_instance, coordinate_bounds, enumerate_feasible_points, OPTIMAL, INFEASIBLE, \
    UNBOUNDED, MAX_PIVOTS


def generated(count):
    for seed in range(count):
        yield gen_packing(4, 8, seed)
        yield gen_knapsack(10, 1, seed, 100)


def test_validate_known_values(toy, box):
    assert validate_instance(toy).bounds == (1,)
    assert validate_instance(box).method == 'structural'
    with pytest.raises(UnboundedFeasibleSet):
        validate_instance(IlpInstance.from_data([[-1]], [1], [1], 3))
    with pytest.raises(NonIntegerData):
        validate_instance(IlpInstance.from_data([['1/2']], [1], [1], 3))


def test_validate_rho_too_small():
    with pytest.raises(UnboundedFeasibleSet):
        validate_instance(IlpInstance.from_data([[1]], [7], [1], 3))


def test_coordinate_bounds_lp():
    inst = IlpInstance.from_data([[1, 1], [-1, 1]], [4, 1], [1, 1], 4)
    assert coordinate_bounds(inst) == ((4, 2), 'lp')


def test_solve_toy(toy):
    sol = solve_lp(toy)
    assert sol.status == OPTIMAL
    assert sol.objective == Fraction(3, 2)
    assert sol.x == (Fraction(3, 2),)


def test_solve_box():
    inst = IlpInstance.from_data([[1, 0], [0, 1]], [1, 1], [1, 1], 1)
    assert solve_lp(inst).objective == 2


def test_phase_one_with_negative_rhs():
    inst = IlpInstance.from_data([[1]], [3], [-1], 3)
    sol = solve_lp(inst, [([-1], -1)])
    assert sol.status == OPTIMAL
    assert sol.objective == -1
    assert sol.x == (1,)


def test_infeasible_and_unbounded_are_statuses():
    inst = IlpInstance.from_data([[1]], [1], [1], 1)
    assert solve_lp(inst, [([-1], -2)]).status == INFEASIBLE
    assert solve_lp(IlpInstance.from_data([[-1]], [1], [1], 1)).status == UNBOUNDED


def test_extra_rows_must_be_integral(toy):
    with pytest.raises(NonIntegerData):
        solve_lp(toy, [(['1/2'], 1)])


def test_pivot_limit(toy):
    with pytest.raises(PivotLimitExceeded):
        solve_lp(toy, max_pivots=0)


def test_knapsack_objective_is_capacity():
    inst = gen_knapsack(20, 1, 0)
    sol = solve_lp(inst)
    assert sol.objective == inst.b[0]


def test_objective_matches_linprog():
    for inst in generated(10):
        sol = solve_lp(inst)
        res = linprog(-inst.c.astype(float), A_ub=inst.A.astype(float), b_ub=inst.b.astype(float),
                      bounds=[(0, None)] * inst.n, method='highs')
        assert res.status == 0
        assert float(sol.objective) == pytest.approx(-res.fun, rel=1e-9)


def test_solution_is_exact():
    for inst in generated(10):
        sol = solve_lp(inst)
        assert all(v >= 0 for v in sol.x)
        assert all(inst.A[i].dot(np.array(sol.x, dtype=object)) <= inst.b[i] for i in range(inst.m))
        assert sol.objective == sum(c * v for c, v in zip(inst.c, sol.x))


def test_extract_tableau_toy(toy):
    tab = extract_tableau(toy, solve_lp(toy))
    assert tab.basis == (0,)
    assert tab.nonbasis == (1,)
    assert tab.coeffs.tolist() == [[Fraction(1, 2)]]
    assert tab.rhs.tolist() == [Fraction(3, 2)]


def test_tableau_identity():
    for inst in list(generated(12)) + [gen_packing(4, 8, 7)]:
        sol = solve_lp(inst)
        tab = extract_tableau(inst, sol)
        A_tilde, b = standard_form(inst, sol.extra_rows)
        B = A_tilde[:, list(tab.basis)]
        assert np.array_equal(B.dot(tab.coeffs), A_tilde[:, list(tab.nonbasis)])
        assert np.array_equal(B.dot(tab.rhs), b)
        assert all(v >= 0 for v in tab.rhs)
        # nonbasics at zero give back the LP point
        for row, var in enumerate(tab.basis):
            if var < inst.n:
                assert tab.rhs[row] == sol.x[var]


def test_tableau_with_appended_rows(toy):
    sol = solve_lp(toy, [([1], 1)])
    tab = extract_tableau(toy, sol)
    A_tilde, b = standard_form(toy, sol.extra_rows)
    assert A_tilde.shape == (2, 3)
    assert np.array_equal(A_tilde[:, list(tab.basis)].dot(tab.rhs), b)


def test_select_rows_toy(toy):
    cgf_input = select_rows(extract_tableau(toy, solve_lp(toy)), 1)
    assert cgf_input.f == (Fraction(1, 2),)
    assert cgf_input.column(0) == (Fraction(1, 2),)
    assert cgf_input.nonbasic_ids == (1,)


def test_select_rows_integral():
    inst = IlpInstance.from_data([[1]], [1], [1], 1)
    tab = extract_tableau(inst, solve_lp(inst))
    assert tab.rhs.tolist() == [1]
    with pytest.raises(InsufficientFractionalRows):
        select_rows(tab, 1)


def test_select_first_fractional_rows():
    tab = SimplexTableau((0, 1, 2), (3,), fraction_array([[1], [2], [3]]), fraction_array([1, '5/4', '7/3']), 3)
    cgf_input = select_rows(tab, 2)
    assert cgf_input.rows == (1, 2)
    assert cgf_input.f == (Fraction(1, 4), Fraction(1, 3))
    assert cgf_input.column(0) == (2, 3)
    with pytest.raises(InsufficientFractionalRows):
        select_rows(tab, 3)


def test_termination_on_larger_instance():
    inst = gen_packing(15, 30, 3)
    sol = solve_lp(inst)
    assert sol.status == OPTIMAL
    assert sol.pivots <= MAX_PIVOTS


def test_enumerate_feasible_points(toy, box):
    assert list(enumerate_feasible_points(toy)) == [(0,), (1,)]
    points = list(enumerate_feasible_points(box))
    assert len(points) == 36
    assert points == sorted(points)
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_feasible_points(box, limit=5))


def test_enumerate_with_negative_entries():
    inst = IlpInstance.from_data([[1, 1], [-1, 1]], [4, 1], [1, 1], 4)
    expected = [(x1, x2) for x1 in range(5) for x2 in range(5) if x1 + x2 <= 4 and x2 - x1 <= 1]
    assert list(enumerate_feasible_points(inst)) == expected


def test_reduced_costs_are_kept_in_the_tableau():
    for inst in generated(6):
        sol = solve_lp(inst)
        state = sol.state
        cost = np.array([inst.c[j] if j < inst.n else Fraction(0) for j in range(state.T.shape[1])], dtype=object)
        cb = np.array([cost[j] for j in state.basis], dtype=object)
        assert np.array_equal(state.reduced, cost - cb.dot(state.T))
        assert all(v <= 0 for v in state.reduced)


def bound_rows(inst, sol):
    j = next((j for j, v in enumerate(sol.x) if v.denominator != 1), 0)
    row = [1 if jj == j else 0 for jj in range(inst.n)]
    v = sol.x[j]
    return [(row, math.floor(v))], [([-a for a in row], -math.floor(v) - 1)]


def test_append_rows_matches_cold_solve():
    for inst in generated(10):
        root = solve_lp(inst)
        for rows in bound_rows(inst, root):
            warm = append_rows(inst, root, rows)
            cold = solve_lp(inst, rows)
            assert warm.status == cold.status
            assert warm.extra_rows == cold.extra_rows
            if warm.status == OPTIMAL:
                assert warm.objective == cold.objective
                tab = extract_tableau(inst, warm)
                A_tilde, b = standard_form(inst, warm.extra_rows)
                assert np.array_equal(A_tilde[:, list(tab.basis)].dot(tab.rhs), b)
                assert all(v >= 0 for v in tab.rhs)


def test_append_rows_leaves_parent_untouched():
    inst = gen_packing(4, 8, 5)
    root = solve_lp(inst)
    T, rhs, reduced = root.state.T.copy(), root.state.rhs.copy(), root.state.reduced.copy()
    down, up = bound_rows(inst, root)
    append_rows(inst, root, down)
    append_rows(inst, root, up)
    assert np.array_equal(root.state.T, T)
    assert np.array_equal(root.state.rhs, rhs)
    assert np.array_equal(root.state.reduced, reduced)


def test_append_rows_on_toy(toy):
    root = solve_lp(toy)
    assert append_rows(toy, root, [([-1], -2)]).status == INFEASIBLE
    down = append_rows(toy, root, [([1], 1)])
    assert (down.objective, down.x) == (1, (1,))
    assert append_rows(toy, down, [([-1], -1)]).objective == 1
    redundant = append_rows(toy, root, [([1], 5)])
    assert (redundant.objective, redundant.pivots) == (Fraction(3, 2), 0)
    with pytest.raises(ValueError):
        append_rows(toy, append_rows(toy, root, [([-1], -2)]), [([1], 1)])
