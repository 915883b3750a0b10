import dataclasses
import filecmp
import os
import time
from fractions import Fraction

import pandas as pd
import pytest

from source.cgf.errors import NotApplicableStrategy, SpecFormatError, InvalidParameters
from source.cgf.input.instance_gen import gen_knapsack
from source.cgf.lp_simplex import IlpInstance
from source.cgf.cut_pipeline import Strategy, GMI, ONE_ROW, K_ROW, BEST_ONE_ROW
from source.cgf.branch_and_cut import NO_CUT, NOT_APPLICABLE
from source.cgf.tuner import ExperimentSpec, Tuner, parse_spec, format_spec, read_spec, write_spec, \
    tree_size_for, grid_1d, evaluate_table, candidate_means, erm_select, best_per_instance, run_experiment, \
    run_comparison, TRAIN, TEST, REPORT_COLUMNS, SUMMARY_COLUMNS

EXPERIMENTS = os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))), 'experiments')
HALF = Fraction(1, 2)


def small_spec(**changes):
    values = dict(family='knapsack', shape=(6, 1), scale=10, train_count=3, test_count=2, strategy=ONE_ROW,
                  grid_step=HALF, candidate_count=3, master_seed=5)
    values.update(changes)
    return ExperimentSpec(**values)


def train_instances(count=4):
    return [gen_knapsack(6, 1, seed, 10) for seed in range(count)]


def test_grid_1d():
    assert len(grid_1d(Fraction(1, 10))) == 121
    assert grid_1d(1) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    grid = grid_1d(HALF)
    assert len(grid) == 9
    assert grid[:3] == [(0, 0), (0, HALF), (0, 1)]
    with pytest.raises(InvalidParameters):
        grid_1d(Fraction(2, 3))


def test_tree_size_toy(toy):
    result = tree_size_for(toy, Strategy(GMI))
    assert (result.nodes, result.optimum, result.marker) == (1, 1, '')
    assert tree_size_for(toy, Strategy(ONE_ROW), (0, 0)) == result


def test_tree_size_markers(toy):
    not_applicable = tree_size_for(toy, Strategy(K_ROW, k=2), (HALF, HALF))
    assert (not_applicable.nodes, not_applicable.marker) == (0, NOT_APPLICABLE)
    assert not not_applicable.infeasible
    integral = tree_size_for(IlpInstance.from_data([[1]], [1], [1], 1), Strategy(GMI))
    assert (integral.nodes, integral.optimum, integral.marker) == (1, 1, NO_CUT)
    infeasible = tree_size_for(IlpInstance.from_data([[1]], [-1], [1], 1), Strategy(GMI))
    assert (infeasible.nodes, infeasible.marker) == (1, NO_CUT)
    assert infeasible.infeasible


def test_one_row_origin_matches_gmi():
    for inst in train_instances():
        assert tree_size_for(inst, Strategy(ONE_ROW), (0, 0)) == tree_size_for(inst, Strategy(GMI))


def test_erm_select_single_candidate():
    train = train_instances()
    table = evaluate_table(train, [(0, 0)], Strategy(ONE_ROW))
    selected, mean = erm_select(train, [(0, 0)], Strategy(ONE_ROW))
    assert selected == (0, 0)
    assert mean == Fraction(sum(row[0].nodes for row in table), len(train))
    assert best_per_instance(train, [(0, 0)], Strategy(ONE_ROW)) == mean


def test_erm_dominance():
    train, candidates, strategy = train_instances(), grid_1d(HALF), Strategy(ONE_ROW)
    table = evaluate_table(train, candidates, strategy)
    means = candidate_means(table)
    selected, mean = erm_select(train, candidates, strategy, table=table)
    assert selected == candidates[means.index(min(means))]
    assert mean == min(means)
    assert mean <= means[candidates.index((0, 0))]
    assert best_per_instance(train, candidates, strategy, table=table) <= mean <= max(means)


def test_parallel_table_keeps_order():
    train, candidates, strategy = train_instances(3), grid_1d(1), Strategy(ONE_ROW)
    assert evaluate_table(train, candidates, strategy, n_jobs=2) == evaluate_table(train, candidates, strategy)


def test_not_applicable(toy):
    with pytest.raises(NotApplicableStrategy):
        erm_select([toy], [(HALF, HALF)], Strategy(K_ROW, k=2))
    with pytest.raises(InvalidParameters):
        erm_select([toy], [], Strategy(GMI))


def test_spec_parsing():
    spec = parse_spec('# comment\nfamily = packing\nshape = 3x5\n\nstrategy = k_row  # inline\nk = 3\nM = 5/2\n')
    assert spec.family == 'packing'
    assert spec.shape == (3, 5)
    assert spec.strategy_record == Strategy(K_ROW, M=Fraction(5, 2), k=3)
    assert spec.strategy_record.label == '3_row'
    assert parse_spec(format_spec(spec)) == spec


@pytest.mark.parametrize('text', [
    'colour = red\n',
    'family packing\n',
    'train_count = many\n',
    'grid_step = 3/10\n',
    'family = set_cover\n',
    'strategy = lift\n',
])
def test_spec_errors(text):
    with pytest.raises(SpecFormatError):
        parse_spec(text)


def test_experiment_files_parse():
    for family in ('knapsack', 'packing'):
        for name in ('one_row.spec', 'two_row.spec'):
            spec = read_spec(os.path.join(EXPERIMENTS, family, name))
            assert spec.family == family
            assert (spec.train_count, spec.test_count) == (40, 40)


def test_spec_file_round_trip(tmp_path):
    spec = small_spec(strategy=K_ROW, k=2, tau=Fraction(500))
    path = os.path.join(str(tmp_path), 'run.spec')
    write_spec(spec, path)
    assert read_spec(path) == spec


def test_seeds_are_disjoint():
    spec = small_spec(train_count=3, test_count=2, master_seed=10)
    assert spec.seeds(TRAIN) == [10, 11, 12]
    assert spec.seeds(TEST) == [13, 14]


def test_run_experiment_one_row():
    spec = small_spec()
    report = run_experiment(spec)
    frame = report.report_frame()
    assert list(frame.columns) == REPORT_COLUMNS
    assert len(frame) == 9 * 3 + 2 + 2
    assert set(frame['strategy']) == {ONE_ROW, GMI}
    assert list(frame['instance_id'][:3]) == ['train-0000', 'train-0001', 'train-0002']

    summary = report.summary_frame()
    assert list(summary.columns) == SUMMARY_COLUMNS
    assert len(summary) == 9 + 1 + 2
    assert summary.iloc[-1]['strategy'] == GMI

    test_rows = frame[(frame['instance_id'].str.startswith('test')) & (frame['strategy'] == ONE_ROW)]
    assert set(test_rows['param_serialized']) == {report.selected_serialized}
    assert report.mean(TEST, ONE_ROW, report.selected_serialized) == Fraction(int(test_rows['nodes'].sum()), 2)
    train_means = [report.mean(TRAIN, ONE_ROW, Strategy(ONE_ROW).serialize(c)) for c in grid_1d(HALF)]
    assert report.mean(TRAIN, ONE_ROW, report.selected_serialized) == min(train_means)
    assert report.mean(TRAIN, 'best_' + ONE_ROW) <= min(train_means)


def test_run_experiment_is_deterministic(tmp_path):
    first = run_experiment(small_spec()).save(os.path.join(str(tmp_path), 'a'))
    second = run_experiment(small_spec(n_jobs=2)).save(os.path.join(str(tmp_path), 'b'))
    for a, b in zip(first, second):
        assert filecmp.cmp(a, b, shallow=False)
    summary = pd.read_csv(first[1], dtype=str)
    assert all(len(value.split('.')[1]) == 4 for value in summary['mean'])


def test_run_experiment_gmi_and_best_one_row():
    report = run_experiment(small_spec(strategy=GMI))
    assert len(report.report_frame()) == 3 + 2
    assert [row['split'] for row in report.summary] == [TRAIN, TEST]

    spec = small_spec(strategy=BEST_ONE_ROW)
    report = run_experiment(spec)
    frame = report.report_frame()
    assert len(frame) == 3 + 2
    assert list(frame['instance_id'][:3]) == ['train-0000', 'train-0001', 'train-0002']
    assert [row['split'] for row in report.summary] == [TRAIN, TEST]
    train = Tuner(spec).instances(TRAIN)
    expected = best_per_instance(train, grid_1d(HALF), Strategy(ONE_ROW))
    assert report.mean(TRAIN, BEST_ONE_ROW) == expected
    assert expected == run_comparison(spec, ks=())[BEST_ONE_ROW]


def test_tuner_candidates():
    tuner = Tuner(small_spec(strategy=K_ROW, k=3, candidate_count=4))
    candidates = tuner.candidates()
    assert len(candidates) == 4
    assert candidates[0] == (Fraction(1, 3),) * 3
    assert tuner.candidates(Strategy(GMI)) == [None]
    assert len(tuner.candidates(Strategy(ONE_ROW))) == 9
    assert tuner.instance_ids(TEST) == ['test-0000', 'test-0001']


def test_run_comparison():
    spec = small_spec(family='packing', shape=(3, 5), train_count=2, test_count=2, grid_step=1,
                      candidate_count=2)
    row = run_comparison(spec, ks=(2,))
    assert set(row) == {GMI, ONE_ROW, BEST_ONE_ROW, '2_row'}
    report = run_experiment(spec)
    assert row[GMI] == report.mean(TEST, GMI)
    assert row[ONE_ROW] == report.mean(TEST, ONE_ROW, report.selected_serialized)
    assert row[BEST_ONE_ROW] == report.mean(TRAIN, 'best_' + ONE_ROW)


@pytest.mark.slow
def test_knapsack_selection_beats_gmi():
    spec = read_spec(os.path.join(EXPERIMENTS, 'knapsack', 'one_row.spec'))
    start = time.perf_counter()
    report = run_experiment(dataclasses.replace(spec, n_jobs=-1))
    assert time.perf_counter() - start < 15 * 60
    assert report.mean(TEST, ONE_ROW, report.selected_serialized) <= Fraction(9, 10) * report.mean(TEST, GMI)
    assert report.mean(TRAIN, 'best_' + ONE_ROW) <= report.mean(TRAIN, ONE_ROW, report.selected_serialized)
