"""
    Deterministic LP-based branch-and-bound with optional root cuts, reporting the truncated tree size
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import InvalidParameters, UnboundedFeasibleSet
from .input.utils import frac_part, format_fraction, format_fraction_list
from .lp_simplex import solve_lp, append_rows, enumerate_feasible_points, OPTIMAL, INFEASIBLE, UNBOUNDED, \
    ENUMERATION_LIMIT
from .cut_pipeline import integral_row

logger = logging.getLogger(__name__)

DEFAULT_NODE_LIMIT = 10 ** 6
MOST_FRACTIONAL = 'most_fractional'
DEPTH_FIRST_DOWN_FIRST = 'depth_first_down_first'

NO_CUT = 'no_cut'
NOT_APPLICABLE = 'n/a'


@dataclass(frozen=True)
class BnCConfig:
    node_limit: int = DEFAULT_NODE_LIMIT
    branch_rule: str = MOST_FRACTIONAL
    node_order: str = DEPTH_FIRST_DOWN_FIRST

    def __post_init__(self):
        if self.node_limit < 1:
            raise InvalidParameters('node limit must be positive, got %d' % self.node_limit)
        if self.branch_rule != MOST_FRACTIONAL:
            raise InvalidParameters('unsupported branching rule %r' % self.branch_rule)
        if self.node_order != DEPTH_FIRST_DOWN_FIRST:
            raise InvalidParameters('unsupported node order %r' % self.node_order)


@dataclass(frozen=True)
class TreeSizeResult:
    """
    optimum is None when the ILP is infeasible, or when the search was truncated before
    an integer point was found. marker is '' for a regular run, 'no_cut' when no cut could be
    derived (integral or infeasible root) and 'n/a' when the strategy does not apply.
    """
    nodes: int
    truncated: bool
    optimum: Optional[Fraction]
    incumbent: Optional[Tuple[int, ...]] = None
    marker: str = ''

    @property
    def infeasible(self):
        return not self.truncated and self.optimum is None and self.marker != NOT_APPLICABLE

    def optimum_text(self):
        if self.optimum is not None:
            return format_fraction(self.optimum)
        return '' if self.truncated or self.marker == NOT_APPLICABLE else 'infeasible'

    def __str__(self):
        text = 'nodes=%d truncated=%s optimum=%s' % (self.nodes, self.truncated, self.optimum_text() or '-')
        if self.incumbent is not None:
            text += ' x=[%s]' % format_fraction_list(self.incumbent)
        if self.marker:
            text += ' (%s)' % self.marker
        return text


def _branch_variable(x):
    """ Most fractional coordinate, lowest index on ties; None when x is integral """
    half = Fraction(1, 2)
    fractional = [j for j, v in enumerate(x) if frac_part(v) != 0]
    if not fractional:
        return None
    return min(fractional, key=lambda j: abs(frac_part(x[j]) - half))


def _bound_row(n, j, sign):
    row = [0] * n
    row[j] = sign
    return tuple(row)


def solve_bnc(inst, root_cuts=(), cfg=BnCConfig(), root=None):
    """
    Depth first search, the x_j <= floor(v) child before the x_j >= ceil(v) child.
    Every node whose LP is solved counts, the root and infeasible nodes included.
    Child LPs are re-optimized from the parent's tableau.
    :param inst: IlpInstance
    :param root_cuts: CutCanonical rows added to every LP
    :param cfg: BnCConfig
    :param root: optional optimal LpSolution of inst without rows, the root LP then starts from it
    :return: TreeSizeResult
    """
    cut_rows = tuple(integral_row(cut) for cut in root_cuts)
    n = inst.n
    stack = [(None, ())]
    nodes = 0
    best, incumbent = None, None
    truncated = False
    while stack:
        if nodes >= cfg.node_limit:
            truncated = True
            break
        parent, rows = stack.pop()
        if parent is not None:
            sol = append_rows(inst, parent, rows)
        elif root is not None and root.status == OPTIMAL:
            sol = append_rows(inst, root, cut_rows)
        else:
            sol = solve_lp(inst, cut_rows)
        nodes += 1
        if sol.status == INFEASIBLE:
            continue
        if sol.status == UNBOUNDED:
            raise UnboundedFeasibleSet('LP relaxation is unbounded at node %d' % nodes)
        if best is not None and sol.objective <= best:
            continue
        j = _branch_variable(sol.x)
        if j is None:
            best, incumbent = sol.objective, tuple(int(v) for v in sol.x)
            logger.debug('node %d: new incumbent %s', nodes, best)
            continue
        v = sol.x[j]
        stack.append((sol, ((_bound_row(n, j, -1), -math.ceil(v)),)))
        stack.append((sol, ((_bound_row(n, j, 1), math.floor(v)),)))

    logger.debug('branch and cut finished: %d nodes, truncated=%s, optimum=%s', nodes, truncated, best)
    return TreeSizeResult(nodes, truncated, best, incumbent)


def solve_ilp_bruteforce(inst, limit=ENUMERATION_LIMIT):
    """
    max c'x over every feasible integer point, None when there is none
    """
    best = None
    for x in enumerate_feasible_points(inst, limit):
        value = sum((c * v for c, v in zip(inst.c, x)), Fraction(0))
        if best is None or value > best:
            best = value
    return best
