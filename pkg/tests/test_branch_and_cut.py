from fractions import Fraction

import pytest

from source.cgf.errors import InvalidParameters, InsufficientFractionalRows, InfeasibleCutError, EnumerationTooLarge
from source.cgf.input.instance_gen import gen_knapsack, gen_packing
from source.cgf.input.utils import get_rng
from source.cgf.lp_simplex import IlpInstance, solve_lp, extract_tableau, enumerate_feasible_points
from source.cgf.cut_pipeline import Strategy, CutCanonical, derive_cut, to_canonical, GMI, CG, ONE_ROW
from source.cgf.branch_and_cut import BnCConfig, TreeSizeResult, solve_bnc, solve_ilp_bruteforce, NO_CUT


def small_instances(count, seed=0):
    for i in range(count):
        yield gen_knapsack(6, 1, seed + i, 4)
        yield gen_packing(3, 5, seed + i, b_low=6, b_high=8)


def random_mu(rng):
    return Fraction(int(rng.integers(0, 11)), 10), Fraction(int(rng.integers(0, 11)), 10)


def test_toy_tree(toy):
    result = solve_bnc(toy)
    assert result.nodes == 3
    assert not result.truncated
    assert result.optimum == 1
    assert result.incumbent == (1,)


def test_toy_with_root_cut(toy):
    result = solve_bnc(toy, [CutCanonical((1,), 1)])
    assert (result.nodes, result.optimum) == (1, 1)


def test_node_cap(toy):
    result = solve_bnc(toy, cfg=BnCConfig(node_limit=1))
    assert result.nodes == 1
    assert result.truncated
    assert result.optimum is None
    assert result.optimum_text() == ''


def test_infeasible_ilp():
    # 5 <= 4x <= 7 has no integer solution
    inst = IlpInstance.from_data([[4], [-4]], [7, -5], [1], 2)
    result = solve_bnc(inst)
    assert result.infeasible
    assert result.nodes == 3
    assert result.optimum_text() == 'infeasible'
    assert solve_ilp_bruteforce(inst) is None


def test_bruteforce_toy(toy, box):
    assert solve_ilp_bruteforce(toy) == 1
    assert solve_ilp_bruteforce(box) == 10


def test_config_rejects():
    with pytest.raises(InvalidParameters):
        BnCConfig(node_limit=0)
    with pytest.raises(InvalidParameters):
        BnCConfig(branch_rule='pseudo_cost')
    with pytest.raises(InvalidParameters):
        BnCConfig(node_order='best_first')


def test_result_text():
    result = TreeSizeResult(1, False, Fraction(7, 2), (3, 1), NO_CUT)
    assert str(result) == 'nodes=1 truncated=False optimum=7/2 x=[3 1] (no_cut)'


def check_against_bruteforce(instances):
    for inst in instances:
        optimum = solve_ilp_bruteforce(inst)
        plain = solve_bnc(inst)
        assert not plain.truncated
        assert plain.optimum == optimum
        assert sum(c * v for c, v in zip(inst.c, plain.incumbent)) == optimum
        sol = solve_lp(inst)
        try:
            _, cut = derive_cut(extract_tableau(inst, sol), Strategy(GMI))
        except (InsufficientFractionalRows, InfeasibleCutError):
            continue
        canonical = to_canonical(cut, inst.A, inst.b)
        assert solve_bnc(inst, [canonical]).optimum == optimum
        assert solve_bnc(inst, [canonical], root=sol).optimum == optimum


def test_matches_bruteforce():
    check_against_bruteforce(small_instances(15))


@pytest.mark.slow
def test_matches_bruteforce_full():
    check_against_bruteforce(small_instances(100, seed=500))


def test_deterministic_and_monotone_cap():
    inst = gen_packing(3, 5, 11, b_low=6, b_high=8)
    full = solve_bnc(inst)
    assert solve_bnc(inst) == full
    for limit in range(1, full.nodes + 2):
        capped = solve_bnc(inst, cfg=BnCConfig(node_limit=limit))
        assert capped.nodes == min(limit, full.nodes)
        assert capped.truncated == (limit < full.nodes)
    assert solve_bnc(inst, cfg=BnCConfig(node_limit=full.nodes)) == full


def test_root_warm_start(toy):
    root = solve_lp(toy)
    assert solve_bnc(toy, root=root) == solve_bnc(toy)
    assert solve_bnc(toy, [CutCanonical((1,), 1)], root=root).nodes == 1


@pytest.mark.slow
def test_knapsack_10_1_matches_enumeration():
    rng = get_rng(11)
    solved = 0
    for seed in range(100):
        inst = gen_knapsack(10, 1, seed)
        try:
            points = list(enumerate_feasible_points(inst))
        except EnumerationTooLarge:
            continue
        optimum = max(sum(c * v for c, v in zip(inst.c, x)) for x in points)
        root = solve_lp(inst)
        assert solve_bnc(inst, root=root).optimum == optimum
        tab = extract_tableau(inst, root)
        for strategy, parameter in ((Strategy(GMI), None), (Strategy(CG), None), (Strategy(ONE_ROW), random_mu(rng))):
            try:
                _, cut = derive_cut(tab, strategy, parameter)
            except (InsufficientFractionalRows, InfeasibleCutError):
                continue
            result = solve_bnc(inst, [to_canonical(cut, inst.A, inst.b)], root=root)
            assert not result.truncated
            assert result.optimum == optimum
        solved += 1
    assert solved >= 10
