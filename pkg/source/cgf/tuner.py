"""
    Sample based selection of cut generating function parameters

    Every (instance, candidate) pair is turned into a truncated branch-and-cut tree size; the candidate
    with the smallest exact mean over the training instances is then evaluated on fresh test instances
    next to the GMI baseline.
"""
import logging
import os
from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Tuple

import pandas as pd
from joblib import Parallel, delayed
from sklearn.model_selection import ParameterGrid

from .errors import InsufficientFractionalRows, InfeasibleCutError, NotApplicableStrategy, SpecFormatError, \
    InvalidParameters, UnboundedFeasibleSet
from .input.utils import to_fraction, format_decimal, format_fraction
from .input.instance_gen import GeneratorSpec, KNAPSACK, DEFAULT_SCALE
from .lp_simplex import solve_lp, extract_tableau, OPTIMAL, INFEASIBLE
from .cut_pipeline import Strategy, derive_cut, to_canonical, GMI, ONE_ROW, K_ROW, BEST_ONE_ROW
from .branch_and_cut import BnCConfig, TreeSizeResult, solve_bnc, DEFAULT_NODE_LIMIT, NO_CUT, NOT_APPLICABLE
from .models.one_dim import DEFAULT_M, DEFAULT_P, DEFAULT_Q
from .models.multi_dim import sample_simplex, DEFAULT_TAU, DEFAULT_CANDIDATES

logger = logging.getLogger(__name__)

DEFAULT_TRAIN = 40
DEFAULT_TEST = 40
DEFAULT_GRID_STEP = Fraction(1, 10)

TRAIN = 'train'
TEST = 'test'
REPORT_COLUMNS = ['instance_id', 'strategy', 'param_serialized', 'nodes', 'truncated', 'optimum']
SUMMARY_COLUMNS = ['split', 'strategy', 'param_serialized', 'mean', 'count']


def _parse_shape(text):
    values = text.replace('x', ' ').replace(',', ' ').split()
    return tuple(int(v) for v in values)


_SPEC_CONVERTERS = {
    'family': str, 'shape': _parse_shape, 'scale': int, 'train_count': int, 'test_count': int,
    'strategy': str, 'p': int, 'q': int, 'M': to_fraction, 'grid_step': to_fraction, 'k': int,
    'tau': to_fraction, 'candidate_count': int, 'node_limit': int, 'master_seed': int, 'n_jobs': int,
}


@dataclass(frozen=True)
class ExperimentSpec:
    family: str = KNAPSACK
    shape: Tuple[int, int] = (20, 1)
    scale: int = DEFAULT_SCALE
    train_count: int = DEFAULT_TRAIN
    test_count: int = DEFAULT_TEST
    strategy: str = ONE_ROW
    p: int = DEFAULT_P
    q: int = DEFAULT_Q
    M: Fraction = Fraction(DEFAULT_M)
    grid_step: Fraction = DEFAULT_GRID_STEP
    k: int = 2
    tau: Fraction = Fraction(DEFAULT_TAU)
    candidate_count: int = DEFAULT_CANDIDATES
    node_limit: int = DEFAULT_NODE_LIMIT
    master_seed: int = 0
    n_jobs: int = field(default=1, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'shape', tuple(self.shape))
        object.__setattr__(self, 'M', to_fraction(self.M))
        object.__setattr__(self, 'grid_step', to_fraction(self.grid_step))
        object.__setattr__(self, 'tau', to_fraction(self.tau))
        if self.train_count < 1 or self.test_count < 1:
            raise InvalidParameters('train and test counts must be positive')
        if self.candidate_count < 1:
            raise InvalidParameters('candidate_count must be positive, got %d' % self.candidate_count)
        if not 0 < self.grid_step <= 1 or self.grid_step.numerator != 1:
            raise InvalidParameters('grid_step must be 1/d for a positive integer d, got %s' % self.grid_step)
        # fail early on bad generator or strategy fields
        self.generator
        self.strategy_record
        self.bnc

    @property
    def generator(self):
        return GeneratorSpec(self.family, self.shape, self.master_seed, self.scale)

    @property
    def strategy_record(self):
        k = self.k if self.strategy == K_ROW else 1
        return Strategy(self.strategy, self.p, self.q, self.M, k, self.tau)

    @property
    def bnc(self):
        return BnCConfig(self.node_limit)

    def seeds(self, split):
        """ train seeds master_seed .. master_seed + train_count - 1, test seeds right after """
        if split == TRAIN:
            return [self.master_seed + i for i in range(self.train_count)]
        return [self.master_seed + self.train_count + i for i in range(self.test_count)]


def parse_spec(text):
    """
    Flat "key = value" lines, '#' starts a comment
    :return: ExperimentSpec
    """
    values = {}
    for number, line in enumerate(text.splitlines(), 1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise SpecFormatError('line %d: expected "key = value", got %r' % (number, line))
        key, value = (part.strip() for part in line.split('=', 1))
        if key not in _SPEC_CONVERTERS:
            raise SpecFormatError('line %d: unknown key %r' % (number, key))
        try:
            values[key] = _SPEC_CONVERTERS[key](value)
        except (ValueError, ZeroDivisionError) as e:
            raise SpecFormatError('line %d: bad value for %s: %s' % (number, key, e))
    try:
        return ExperimentSpec(**values)
    except InvalidParameters as e:
        raise SpecFormatError(str(e))


def format_spec(spec):
    lines = []
    for f in fields(spec):
        value = getattr(spec, f.name)
        if f.name == 'shape':
            value = '%dx%d' % value
        elif isinstance(value, Fraction):
            value = format_fraction(value)
        lines.append('%s = %s' % (f.name, value))
    return '\n'.join(lines) + '\n'


def read_spec(path):
    with open(path) as f:
        return parse_spec(f.read())


def write_spec(spec, path):
    with open(path, 'w') as f:
        f.write(format_spec(spec))


def tree_size_for(inst, strategy, parameter=None, cfg=BnCConfig()):
    """
    Root LP, tableau, cut from the strategy, then branch and cut with the cut at the root
    :return: TreeSizeResult, marked 'no_cut' when the root gives no cut and 'n/a' when
             the tableau has fewer fractional rows than the strategy needs
    """
    root = solve_lp(inst)
    if root.status == INFEASIBLE:
        return TreeSizeResult(1, False, None, marker=NO_CUT)
    if root.status != OPTIMAL:
        raise UnboundedFeasibleSet('LP relaxation is unbounded')
    tab = extract_tableau(inst, root)
    try:
        _, cut = derive_cut(tab, strategy, parameter)
    except InsufficientFractionalRows:
        if any(v.denominator != 1 for v in tab.rhs):
            return TreeSizeResult(0, False, None, marker=NOT_APPLICABLE)
        return TreeSizeResult(1, False, root.objective, tuple(int(v) for v in root.x), marker=NO_CUT)
    except InfeasibleCutError:
        # integral columns with a fractional row: no integer point, branching proves it
        result = solve_bnc(inst, (), cfg, root)
        return TreeSizeResult(result.nodes, result.truncated, result.optimum, result.incumbent, NO_CUT)
    return solve_bnc(inst, [to_canonical(cut, inst.A, inst.b)], cfg, root)


def grid_1d(step=DEFAULT_GRID_STEP):
    """
    {0, step, ..., 1}^2 in row-major order
    """
    step = to_fraction(step)
    if not 0 < step <= 1 or step.numerator != 1:
        raise InvalidParameters('step must be 1/d for a positive integer d, got %s' % step)
    axis = [i * step for i in range(step.denominator + 1)]
    return [(point['mu1'], point['mu2']) for point in ParameterGrid({'mu1': axis, 'mu2': axis})]


def evaluate_table(instances, candidates, strategy, cfg=BnCConfig(), n_jobs=1):
    """
    Tree sizes for every (instance, candidate) pair, evaluated in parallel and returned in order
    :return: list (per instance) of lists (per candidate) of TreeSizeResult
    """
    results = Parallel(n_jobs=n_jobs)(delayed(tree_size_for)(inst, strategy, candidate, cfg)
                                      for inst in instances for candidate in candidates)
    width = len(candidates)
    return [results[i * width:(i + 1) * width] for i in range(len(instances))]


def _check_applicable(table, strategy):
    for row in table:
        for result in row:
            if result.marker == NOT_APPLICABLE:
                raise NotApplicableStrategy('%s needs %d fractional tableau rows' % (strategy.label,
                                                                                     strategy.rows))


def candidate_means(table):
    """ Exact mean tree size of every candidate column """
    count = len(table)
    return [Fraction(sum(row[j].nodes for row in table), count) for j in range(len(table[0]))]


def erm_select(train, candidates, strategy, cfg=BnCConfig(), n_jobs=1, table=None):
    """
    Candidate with the smallest exact mean tree size over train, first in list order on ties
    :return: (best parameter, train mean)
    """
    if not candidates:
        raise InvalidParameters('no candidates to select from')
    if table is None:
        table = evaluate_table(train, candidates, strategy, cfg, n_jobs)
    _check_applicable(table, strategy)
    means = candidate_means(table)
    best = min(range(len(candidates)), key=means.__getitem__)
    logger.debug('%s: selected %s with train mean %s', strategy.label, candidates[best], means[best])
    return candidates[best], means[best]


def best_per_instance(instances, candidates, strategy, cfg=BnCConfig(), n_jobs=1, table=None):
    """
    Mean over instances of the smallest tree size any candidate reaches on it
    """
    if not candidates:
        raise InvalidParameters('no candidates to select from')
    if table is None:
        table = evaluate_table(instances, candidates, strategy, cfg, n_jobs)
    _check_applicable(table, strategy)
    return Fraction(sum(min(result.nodes for result in row) for row in table), len(table))


@dataclass
class Report:
    rows: list = field(default_factory=list)
    summary: list = field(default_factory=list)
    means: dict = field(default_factory=dict)
    selected: object = None
    selected_serialized: str = ''

    def add_rows(self, ids, strategy, parameters, results):
        for instance_id, parameter, result in zip(ids, parameters, results):
            self.rows.append({'instance_id': instance_id, 'strategy': strategy.label,
                              'param_serialized': strategy.serialize(parameter), 'nodes': result.nodes,
                              'truncated': result.truncated, 'optimum': result.optimum_text()})

    def add_mean(self, split, label, serialized, mean, count):
        self.means[(split, label, serialized)] = mean
        self.summary.append({'split': split, 'strategy': label, 'param_serialized': serialized,
                             'mean': format_decimal(mean), 'count': count})

    def mean(self, split, label, serialized=''):
        return self.means[(split, label, serialized)]

    def report_frame(self):
        return pd.DataFrame(self.rows, columns=REPORT_COLUMNS)

    def summary_frame(self):
        return pd.DataFrame(self.summary, columns=SUMMARY_COLUMNS)

    def save(self, out_dir):
        if not os.path.exists(out_dir):
            os.makedirs(out_dir)
        report_path = os.path.join(out_dir, 'report.csv')
        summary_path = os.path.join(out_dir, 'summary.csv')
        self.report_frame().to_csv(report_path, index=False)
        self.summary_frame().to_csv(summary_path, index=False)
        return report_path, summary_path


class Tuner(object):
    def __init__(self, spec):
        self.spec = spec
        self.strategy = spec.strategy_record
        self.cfg = spec.bnc
        self.n_jobs = spec.n_jobs

    def instances(self, split):
        generator = self.spec.generator
        return [generator.generate(seed) for seed in self.spec.seeds(split)]

    def instance_ids(self, split):
        return ['%s-%04d' % (split, i) for i in range(len(self.spec.seeds(split)))]

    def candidates(self, strategy=None):
        strategy = strategy or self.strategy
        if strategy.name in (ONE_ROW, BEST_ONE_ROW):
            return grid_1d(self.spec.grid_step)
        if strategy.name == K_ROW:
            return sample_simplex(strategy.k, self.spec.candidate_count, strategy.tau, self.spec.master_seed)
        return [None]

    def table(self, instances, strategy, candidates):
        return evaluate_table(instances, candidates, strategy, self.cfg, self.n_jobs)

    def run(self):
        """
        Select on the train split, evaluate on the test split next to GMI.
        best_one_row has no selection and reports its per-instance minima on the train split.
        :return: Report
        """
        spec, strategy = self.spec, self.strategy
        report = Report()
        candidates = self.candidates()
        logger.info('Strategy %s with %d candidate(s), %d train / %d test instances',
                    strategy.label, len(candidates), spec.train_count, spec.test_count)

        test = self.instances(TEST)
        test_ids = self.instance_ids(TEST)
        if strategy.name == BEST_ONE_ROW:
            # per-instance minima over the train split
            train = self.instances(TRAIN)
            table = self.table(train, strategy, candidates)
            _check_applicable(table, strategy)
            best = [min(range(len(candidates)), key=lambda j: row[j].nodes) for row in table]
            report.add_rows(self.instance_ids(TRAIN), strategy, [candidates[j] for j in best],
                            [row[j] for row, j in zip(table, best)])
            report.add_mean(TRAIN, strategy.label, '', best_per_instance(train, candidates, strategy, table=table),
                            len(train))
        else:
            train = self.instances(TRAIN)
            train_ids = self.instance_ids(TRAIN)
            table = self.table(train, strategy, candidates)
            selected, train_mean = erm_select(train, candidates, strategy, table=table)
            for j, (candidate, mean) in enumerate(zip(candidates, candidate_means(table))):
                report.add_rows(train_ids, strategy, [candidate] * len(train), [row[j] for row in table])
                report.add_mean(TRAIN, strategy.label, strategy.serialize(candidate), mean, len(train))
            if len(candidates) > 1:
                report.add_mean(TRAIN, 'best_' + strategy.label, '',
                                best_per_instance(train, candidates, strategy, table=table), len(train))
            report.selected = selected
            report.selected_serialized = strategy.serialize(selected)
            logger.info('Selected parameter [%s] with train mean %s', report.selected_serialized,
                        format_decimal(train_mean))

            results = [row[0] for row in self.table(test, strategy, [selected])]
            report.add_rows(test_ids, strategy, [selected] * len(test), results)
            report.add_mean(TEST, strategy.label, report.selected_serialized,
                            candidate_means([[r] for r in results])[0], len(test))

        if strategy.name != GMI:
            baseline = Strategy(GMI)
            results = [row[0] for row in self.table(test, baseline, [None])]
            report.add_rows(test_ids, baseline, [None] * len(test), results)
            report.add_mean(TEST, baseline.label, '', candidate_means([[r] for r in results])[0], len(test))
        return report


def run_experiment(spec):
    return Tuner(spec).run()


def run_comparison(spec, ks=(2,)):
    """
    One row of the strategy comparison: test means of GMI, the selected 1-row cut and each selected
    k-row cut, and the mean of per-instance best 1-row cuts on the train split
    :return: dict label -> exact mean, or None where the strategy does not apply
    """
    tuner = Tuner(spec)
    train, test = tuner.instances(TRAIN), tuner.instances(TEST)
    row = {}

    def test_mean(strategy, parameter):
        results = tuner.table(test, strategy, [parameter])
        _check_applicable(results, strategy)
        return candidate_means(results)[0]

    row[GMI] = test_mean(Strategy(GMI), None)

    one_row = Strategy(ONE_ROW, spec.p, spec.q, spec.M)
    grid = tuner.candidates(one_row)
    table = tuner.table(train, one_row, grid)
    selected, _ = erm_select(train, grid, one_row, table=table)
    row[ONE_ROW] = test_mean(one_row, selected)
    row[BEST_ONE_ROW] = best_per_instance(train, grid, one_row, table=table)

    for k in ks:
        strategy = Strategy(K_ROW, k=k, tau=spec.tau)
        candidates = tuner.candidates(strategy)
        try:
            selected, _ = erm_select(train, candidates, strategy, tuner.cfg, tuner.n_jobs)
            row[strategy.label] = test_mean(strategy, selected)
        except NotApplicableStrategy as e:
            logger.debug('%s: %s', strategy.label, e)
            row[strategy.label] = None
    return row
