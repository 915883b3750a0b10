#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
    Command line entry point: generate, solve, tune, compare, plot-cgf, validate-cgf
"""
import argparse
import dataclasses
import logging
import os
import sys

import numpy as np
import pandas as pd

sys.path.append(os.path.dirname(os.path.dirname(os.path.dirname(os.path.realpath(__file__)))))
from source.cgf.errors import CgfError, InvalidParameters
from source.cgf.input.utils import to_fraction, parse_fraction_list, format_decimal, plot_cgf_curve
from source.cgf.input.instance_gen import GeneratorSpec, generate_batch, read_instance, FAMILIES, DEFAULT_SCALE
from source.cgf.lp_simplex import validate_instance
from source.cgf.cut_pipeline import Strategy, STRATEGIES, ONE_ROW, K_ROW, BEST_ONE_ROW
from source.cgf.branch_and_cut import BnCConfig, DEFAULT_NODE_LIMIT
from source.cgf.models.one_dim import OneDimCgf, plot_data, comparison_curves, presets, eval_gmi, eval_cg, \
    check_validity_1d, DEFAULT_M, DEFAULT_P, DEFAULT_Q
from source.cgf.models.multi_dim import MultiDimCgf, check_validity_kd, DEFAULT_TAU
from source.cgf.tuner import read_spec, run_experiment, run_comparison, tree_size_for, evaluate_table, grid_1d, \
    DEFAULT_GRID_STEP


def add_cgf_options(parser):
    parser.add_argument('-f', type=to_fraction, default=to_fraction('1/2'),
                        help="Fractional right-hand side f in (0, 1)")
    parser.add_argument('-p', type=int, default=DEFAULT_P,
                        help="Number of pieces on [0, f]")
    parser.add_argument('-q', type=int, default=DEFAULT_Q,
                        help="Number of pieces on [f, 1]")
    parser.add_argument('-M', type=to_fraction, default=to_fraction(DEFAULT_M),
                        help="Truncation constant for unbounded slope domains")
    parser.add_argument('-s1', type=to_fraction, default=None,
                        help="Negative slope, overrides -mu1/-mu2 together with -s2. "
                             "Fractions with a minus sign attach with =, as in -s1=-25/2")
    parser.add_argument('-s2', type=to_fraction, default=None,
                        help="Positive slope")
    parser.add_argument('-mu1', type=to_fraction, default=to_fraction(0),
                        help="Position of s1 inside the truncated domain, 0 is GMI")
    parser.add_argument('-mu2', type=to_fraction, default=to_fraction(0),
                        help="Position of s2 inside the truncated domain, 0 is GMI")


def parse_args(argv=None):
    """ Parsing arguments """
    parser = argparse.ArgumentParser(
        description='Cut generating functions, root cuts and branch-and-cut tree sizes',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    parser.add_argument('-verbose', default=False, action='store_true',
                        help="Print debug logging of the library")
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    generate = commands.add_parser('generate', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                   help="Write seeded instances and a manifest")
    generate.add_argument('-family', type=str, default='knapsack', choices=FAMILIES,
                          help="Instance distribution")
    generate.add_argument('-shape', type=int, nargs=2, default=[20, 1],
                          help="N K for knapsack, m n for packing")
    generate.add_argument('-count', type=int, default=10,
                          help="Number of instances")
    generate.add_argument('-seed', type=int, default=0,
                          help="Seed of the first instance, the others follow consecutively")
    generate.add_argument('-scale', type=int, default=DEFAULT_SCALE,
                          help="Largest knapsack weight")
    generate.add_argument('-out_dir', type=str, default='./instances',
                          help="Directory to write instances to")

    solve = commands.add_parser('solve', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                help="Tree size of one instance with a root cut")
    solve.add_argument('-instance', type=str, required=True,
                       help="Path to an instance file")
    solve.add_argument('-strategy', type=str, default='gmi', choices=STRATEGIES,
                       help="How the root cut is built")
    solve.add_argument('-param', type=str, default='',
                       help="'mu1 mu2' for one_row, k entries of mu for k_row")
    solve.add_argument('-p', type=int, default=DEFAULT_P)
    solve.add_argument('-q', type=int, default=DEFAULT_Q)
    solve.add_argument('-M', type=to_fraction, default=to_fraction(DEFAULT_M))
    solve.add_argument('-k', type=int, default=2,
                       help="Rows used by k_row")
    solve.add_argument('-tau', type=to_fraction, default=to_fraction(DEFAULT_TAU))
    solve.add_argument('-grid_step', type=to_fraction, default=DEFAULT_GRID_STEP,
                       help="Grid step searched by best_one_row")
    solve.add_argument('-node_limit', type=int, default=DEFAULT_NODE_LIMIT,
                       help="Branch-and-cut node cap")

    tune = commands.add_parser('tune', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                               help="Run an experiment spec file")
    tune.add_argument('-spec', type=str, required=True,
                      help="Path to an experiment spec file")
    tune.add_argument('-out_dir', type=str, default='./results',
                      help="Directory for report.csv and summary.csv")
    tune.add_argument('-n_jobs', type=int, default=0,
                      help="Parallel workers, 0 keeps the value of the spec file")

    compare = commands.add_parser('compare', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                  help="Test means of GMI, selected 1-row and k-row cuts")
    compare.add_argument('-spec', type=str, required=True,
                         help="Path to an experiment spec file")
    compare.add_argument('-ks', type=int, nargs='+', default=[2],
                         help="Row counts of the k-row strategies")
    compare.add_argument('-out_dir', type=str, default='./results',
                         help="Directory for compare.csv")

    plot = commands.add_parser('plot-cgf', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                               help="Export (r, pi(r)) of a one-dimensional function")
    add_cgf_options(plot)
    plot.add_argument('-preset', type=int, default=-1,
                      help="Index of a preset parameter set, -1 uses the options")
    plot.add_argument('-function', type=str, default='pi', choices=['pi', 'gmi', 'cg'],
                      help="Curve to export")
    plot.add_argument('-resolution', type=int, default=100,
                      help="Number of subintervals of [0, 1]")
    plot.add_argument('-out', type=str, default='cgf.csv',
                      help="CSV path")
    plot.add_argument('-png', type=str, default='',
                      help="Also plot pi, GMI and CG to this png")

    validate = commands.add_parser('validate-cgf', formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                   help="Exact validity checks of a cut generating function")
    add_cgf_options(validate)
    validate.add_argument('-f_vec', type=str, default='',
                          help="k-dimensional f, checks pi_{f,mu} instead of the 1-D family")
    validate.add_argument('-mu', type=str, default='',
                          help="k-dimensional mu")
    validate.add_argument('-tau', type=to_fraction, default=to_fraction(DEFAULT_TAU))
    validate.add_argument('-samples', type=int, default=1000,
                          help="Number of sampled points and pairs")
    validate.add_argument('-seed', type=int, default=0)

    return parser.parse_args(argv)


def build_one_dim(options):
    if getattr(options, 'preset', -1) >= 0:
        return presets()[options.preset]
    if options.s1 is not None or options.s2 is not None:
        if options.s1 is None or options.s2 is None:
            raise InvalidParameters('-s1 and -s2 go together')
        return OneDimCgf(options.f, options.p, options.q, options.s1, options.s2)
    return OneDimCgf.from_mu(options.f, options.mu1, options.mu2, options.p, options.q, options.M)


def run_generate(options):
    spec = GeneratorSpec(options.family, tuple(options.shape), options.seed, options.scale)
    manifest = generate_batch(spec, options.count, options.out_dir)
    print('Wrote %d instances to %s' % (len(manifest), options.out_dir))


def run_solve(options):
    inst = read_instance(options.instance)
    report = validate_instance(inst)
    print('Instance m=%d n=%d rho=%d (bounds: %s)' % (report.m, report.n, report.rho, report.method))
    k = options.k if options.strategy == K_ROW else 1
    strategy = Strategy(options.strategy, options.p, options.q, options.M, k, options.tau)
    cfg = BnCConfig(options.node_limit)
    parameter = tuple(parse_fraction_list(options.param)) or None
    if strategy.name in (ONE_ROW, K_ROW) and parameter is None:
        raise InvalidParameters('%s needs -param' % strategy.name)

    if strategy.name == BEST_ONE_ROW:
        candidates = grid_1d(options.grid_step)
        row = evaluate_table([inst], candidates, strategy, cfg)[0]
        best = min(range(len(candidates)), key=lambda j: row[j].nodes)
        parameter, result = candidates[best], row[best]
    else:
        result = tree_size_for(inst, strategy, parameter, cfg)
    print('Strategy %s [%s]: %s' % (strategy.label, strategy.serialize(parameter), result))


def run_tune(options):
    spec = read_spec(options.spec)
    if options.n_jobs:
        spec = dataclasses.replace(spec, n_jobs=options.n_jobs)
    print('Experiment: {}'.format(spec))
    report = run_experiment(spec)
    report_path, summary_path = report.save(options.out_dir)
    print(report.summary_frame().to_string(index=False))
    print('Report saved to %s and %s' % (report_path, summary_path))


def run_compare(options):
    spec = read_spec(options.spec)
    row = run_comparison(spec, options.ks)
    frame = pd.DataFrame([{label: 'n/a' if mean is None else format_decimal(mean) for label, mean in row.items()}])
    if not os.path.exists(options.out_dir):
        os.makedirs(options.out_dir)
    path = os.path.join(options.out_dir, 'compare.csv')
    frame.to_csv(path, index=False)
    print(frame.to_string(index=False))
    print('Comparison saved to %s' % path)


def run_plot(options):
    cgf = build_one_dim(options)
    functions = {'pi': cgf, 'gmi': lambda r: eval_gmi(cgf.f, r), 'cg': lambda r: eval_cg(cgf.f, r)}
    data = plot_data(functions[options.function], options.resolution)
    data.astype(str).to_csv(options.out, index=False)
    print('Wrote %d points of %s to %s' % (len(data), options.function, options.out))
    if options.png:
        plot_cgf_curve(comparison_curves(cgf, options.resolution), options.png,
                       title='f=%s s1=%s s2=%s p=%d q=%d' % (cgf.f, cgf.s1, cgf.s2, cgf.p, cgf.q))
        print('Plot saved to %s' % options.png)


def run_validate(options):
    if options.mu or options.f_vec:
        cgf = MultiDimCgf(parse_fraction_list(options.f_vec), parse_fraction_list(options.mu), options.tau)
        report = check_validity_kd(cgf, options.samples, options.seed)
    else:
        report = check_validity_1d(build_one_dim(options), options.samples, options.seed)
    print('%s: passed (%d periodicity checks, %d subadditivity checks)'
          % (report.name, report.periodicity_checks, report.subadditivity_checks))


COMMANDS = {
    'generate': run_generate,
    'solve': run_solve,
    'tune': run_tune,
    'compare': run_compare,
    'plot-cgf': run_plot,
    'validate-cgf': run_validate,
}


def main(argv=None):
    options = parse_args(argv)
    print('System info: ', sys.version)
    print('Numpy version: ', np.__version__)
    print('Options: {}'.format(options))
    if options.verbose:
        logging.basicConfig(level=logging.DEBUG, format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    try:
        COMMANDS[options.command](options)
    except CgfError as e:
        sys.stderr.write('error: %s: %s\n' % (type(e).__name__, e))
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
