"""
    Seeded instance distributions (Chvatal-style multiple knapsack, packing) and the instance file format

    File format, one record per line, entries separated by spaces:
        m n rho
        m rows of A
        b
        c
    Entries are integers or rationals written p/q.
"""
import logging
import os
from dataclasses import dataclass
from typing import Tuple

import pandas as pd

from ..errors import InstanceFormatError, InvalidParameters
from ..lp_simplex import IlpInstance
from .utils import get_rng, parse_fraction_list, format_fraction_list, is_integral

logger = logging.getLogger(__name__)

KNAPSACK = 'knapsack'
PACKING = 'packing'
FAMILIES = (KNAPSACK, PACKING)

DEFAULT_SCALE = 1000
PACKING_A_MAX = 5
PACKING_C_MAX = 10


@dataclass(frozen=True)
class GeneratorSpec:
    """
    family knapsack with shape (N, K): N items, K knapsacks;
    family packing with shape (m, n): m rows, n columns.
    scale bounds the knapsack weights.
    """
    family: str
    shape: Tuple[int, int]
    seed: int = 0
    scale: int = DEFAULT_SCALE

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameters('unknown family %r, options are %s' % (self.family, ', '.join(FAMILIES)))
        if len(self.shape) != 2 or min(self.shape) < 1:
            raise InvalidParameters('shape must be two positive integers, got %s' % (self.shape,))
        if self.scale < 1:
            raise InvalidParameters('scale must be positive, got %d' % self.scale)

    def generate(self, seed=None):
        seed = self.seed if seed is None else seed
        if self.family == KNAPSACK:
            return gen_knapsack(self.shape[0], self.shape[1], seed, self.scale)
        return gen_packing(self.shape[0], self.shape[1], seed)


def gen_knapsack(N, K, seed, scale=DEFAULT_SCALE):
    """
    K knapsack rows over N items: weights uniform in {1..scale}, capacity floor(sum / 2),
    profits equal to the first row's weights
    """
    if N < 1 or K < 1:
        raise InvalidParameters('need N >= 1 and K >= 1, got N=%d K=%d' % (N, K))
    rng = get_rng(seed)
    weights = rng.integers(1, scale + 1, size=(K, N))
    capacity = weights.sum(axis=1) // 2
    return IlpInstance.from_data(weights.tolist(), capacity.tolist(), weights[0].tolist(), int(capacity.max()))


def gen_packing(m, n, seed, a_max=PACKING_A_MAX, b_low=None, b_high=None, c_max=PACKING_C_MAX):
    """
    A uniform in {0..a_max} with all-zero columns redrawn, b uniform in {b_low..b_high}
    (default {9n..10n}), c uniform in {1..c_max}
    """
    if m < 1 or n < 1:
        raise InvalidParameters('need m >= 1 and n >= 1, got m=%d n=%d' % (m, n))
    b_low = 9 * n if b_low is None else b_low
    b_high = 10 * n if b_high is None else b_high
    if a_max < 1 or not 0 <= b_low <= b_high or c_max < 1:
        raise InvalidParameters('invalid packing ranges a_max=%d b=[%d, %d] c_max=%d' % (a_max, b_low, b_high, c_max))
    rng = get_rng(seed)
    A = rng.integers(0, a_max + 1, size=(m, n))
    for j in range(n):
        while not A[:, j].any():
            A[:, j] = rng.integers(0, a_max + 1, size=m)
    b = rng.integers(b_low, b_high + 1, size=m)
    c = rng.integers(1, c_max + 1, size=n)
    return IlpInstance.from_data(A.tolist(), b.tolist(), c.tolist(), int(b.max()))


def format_instance(inst):
    lines = ['%d %d %d' % (inst.m, inst.n, inst.rho)]
    lines += [format_fraction_list(row) for row in inst.A]
    lines.append(format_fraction_list(inst.b))
    lines.append(format_fraction_list(inst.c))
    return '\n'.join(lines) + '\n'


def parse_instance(text):
    lines = [line for line in text.splitlines() if line.strip()]
    try:
        m, n, rho = (int(v) for v in lines[0].split())
    except (ValueError, IndexError):
        raise InstanceFormatError('first line must read "m n rho"')
    if len(lines) != m + 3:
        raise InstanceFormatError('expected %d lines, found %d' % (m + 3, len(lines)))
    try:
        A = [parse_fraction_list(line) for line in lines[1:m + 1]]
        b = parse_fraction_list(lines[m + 1])
        c = parse_fraction_list(lines[m + 2])
    except (ValueError, ZeroDivisionError) as e:
        raise InstanceFormatError('malformed entry: %s' % e)
    if any(len(row) != n for row in A) or len(b) != m or len(c) != n:
        raise InstanceFormatError('row lengths do not match m=%d n=%d' % (m, n))
    if not all(is_integral(v) for row in A for v in row) or not all(is_integral(v) for v in b):
        raise InstanceFormatError('A and b must be integers')
    return IlpInstance.from_data(A, b, c, rho)


def read_instance(path):
    with open(path) as f:
        return parse_instance(f.read())


def write_instance(inst, path):
    with open(path, 'w') as f:
        f.write(format_instance(inst))


def generate_batch(spec, count, out_dir):
    """
    Write count instances with seeds spec.seed, spec.seed + 1, ... and a manifest.csv
    :return: manifest DataFrame
    """
    if not os.path.exists(out_dir):
        os.makedirs(out_dir)
    records = []
    for i in range(count):
        seed = spec.seed + i
        file_name = '%s-%04d.txt' % (spec.family, i)
        write_instance(spec.generate(seed), os.path.join(out_dir, file_name))
        records.append({'file': file_name, 'seed': seed, 'family': spec.family,
                        'shape': '%dx%d' % tuple(spec.shape), 'scale': spec.scale})
    manifest = pd.DataFrame(records, columns=['file', 'seed', 'family', 'shape', 'scale'])
    manifest.to_csv(os.path.join(out_dir, 'manifest.csv'), index=False)
    logger.debug('wrote %d %s instances to %s', count, spec.family, out_dir)
    return manifest
