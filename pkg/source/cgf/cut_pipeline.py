"""
    From cut generating function values on tableau columns to cutting planes

    Standard form:  sum_i pi(r^i) y_i >= 1 over the nonbasic variables y_N
    Canonical form: alpha'x <= beta, with alpha = A'a_s - a_x and beta = b'a_s - 1
    where a = (a_x | a_s) splits the standard-form coefficients into structural and slack parts.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .errors import NegativeCoefficient, InfeasibleCutError, BasicVariableCoefficient, InvalidParameters
from .input.utils import to_fraction, frac_part, lcm_of_denominators, format_fraction, format_fraction_list
from .lp_simplex import enumerate_feasible_points, select_rows, ENUMERATION_LIMIT
from .models.one_dim import OneDimCgf, eval_gmi, eval_cg, DEFAULT_M, DEFAULT_P, DEFAULT_Q
from .models.multi_dim import MultiDimCgf, DEFAULT_TAU

logger = logging.getLogger(__name__)

GMI = 'gmi'
CG = 'cg'
ONE_ROW = 'one_row'
K_ROW = 'k_row'
BEST_ONE_ROW = 'best_one_row'
STRATEGIES = (GMI, CG, ONE_ROW, K_ROW, BEST_ONE_ROW)


@dataclass(frozen=True)
class Strategy:
    """
    How a cut is built from the tableau. one_row and best_one_row take (mu1, mu2),
    k_row takes a mu vector of length k, gmi and cg take no parameter.
    """
    name: str
    p: int = DEFAULT_P
    q: int = DEFAULT_Q
    M: Fraction = Fraction(DEFAULT_M)
    k: int = 1
    tau: Fraction = Fraction(DEFAULT_TAU)

    def __post_init__(self):
        if self.name not in STRATEGIES:
            raise InvalidParameters('unknown strategy %r, options are %s' % (self.name, ', '.join(STRATEGIES)))
        if self.name == K_ROW and self.k < 2:
            raise InvalidParameters('k_row needs k >= 2, got %d' % self.k)

    @property
    def rows(self):
        return self.k if self.name == K_ROW else 1

    @property
    def label(self):
        if self.name == K_ROW:
            return '%d_row' % self.k
        return self.name

    def function(self, f, parameter=None):
        """
        The cut generating function for right-hand side fractional parts f, as a callable on columns
        """
        if self.name == GMI:
            return lambda column: eval_gmi(f[0], column[0])
        if self.name == CG:
            return lambda column: eval_cg(f[0], column[0])
        if self.name == K_ROW:
            return MultiDimCgf(f, parameter, self.tau)
        mu1, mu2 = parameter
        cgf = OneDimCgf.from_mu(f[0], mu1, mu2, self.p, self.q, self.M)
        return lambda column: cgf(column[0])

    def serialize(self, parameter):
        if parameter is None or self.name in (GMI, CG):
            return ''
        return format_fraction_list(parameter)


@dataclass(frozen=True, eq=False)
class CutStandardForm:
    """ sum_j coeffs[j] y_j >= 1 over all m + n variables, zero on basic ones """
    coeffs: Tuple[Fraction, ...]
    n_structural: int
    rhs: Fraction = Fraction(1)

    @property
    def structural(self):
        return self.coeffs[:self.n_structural]

    @property
    def slack(self):
        return self.coeffs[self.n_structural:]


@dataclass(frozen=True)
class CutCanonical:
    """ alpha'x <= beta """
    alpha: Tuple[Fraction, ...]
    beta: Fraction

    def to_csv_row(self):
        return ','.join(format_fraction(v) for v in self.alpha + (self.beta,))

    def violated_by(self, x):
        return sum(a * v for a, v in zip(self.alpha, x)) > self.beta


def cut_from_values(cgf_input, values):
    """
    Place pi(r^i) at the nonbasic positions
    :param cgf_input: CgfInput the values were computed on
    :param values: one nonnegative rational per nonbasic variable
    :return: CutStandardForm
    """
    values = [to_fraction(v) for v in values]
    if len(values) != len(cgf_input.nonbasic_ids):
        raise ValueError('%d values for %d nonbasic variables' % (len(values), len(cgf_input.nonbasic_ids)))
    negative = [(j, v) for j, v in zip(cgf_input.nonbasic_ids, values) if v < 0]
    if negative:
        raise NegativeCoefficient('cut coefficient %s on y_%d is negative' % (negative[0][1], negative[0][0]))
    if not any(values):
        raise InfeasibleCutError('every coefficient is zero, the cut reads 0 >= 1')
    coeffs = [Fraction(0)] * cgf_input.n_vars
    for j, v in zip(cgf_input.nonbasic_ids, values):
        coeffs[j] = v
    return CutStandardForm(tuple(coeffs), cgf_input.n_structural)


def to_canonical(cut, A, b):
    """
    Eliminate the slacks s = b - Ax
    :param cut: CutStandardForm over [x | s] with one slack per row of A
    :param A: constraint rows the slacks belong to
    :param b: right-hand side
    :return: CutCanonical
    """
    m, n = len(A), len(A[0])
    a_x, a_s = cut.coeffs[:n], cut.coeffs[n:]
    if len(a_s) != m:
        raise ValueError('cut has %d slack coefficients for %d rows' % (len(a_s), m))
    alpha = tuple(sum((to_fraction(A[i][j]) * a_s[i] for i in range(m)), Fraction(0)) - a_x[j] for j in range(n))
    beta = sum((to_fraction(b[i]) * a_s[i] for i in range(m)), Fraction(0)) - 1
    return CutCanonical(alpha, beta)


def integral_row(cut):
    """
    alpha'x <= beta scaled by the lcm of its denominators
    :return: (row of ints, int rhs)
    """
    scale = lcm_of_denominators(cut.alpha + (cut.beta,))
    return tuple(int(v * scale) for v in cut.alpha), int(cut.beta * scale)


def verify_cut_valid(inst, cut, limit=ENUMERATION_LIMIT, points=None):
    """
    First feasible integer point of inst violating the cut, None when there is none
    :param points: the feasible integer points of inst when already enumerated
    """
    if points is None:
        points = enumerate_feasible_points(inst, limit)
    for x in points:
        if cut.violated_by(x):
            logger.debug('cut %s violated by %s', cut.to_csv_row(), x)
            return x
    return None


def verify_lp_violation(tab, cut):
    """
    True iff the basic solution of tab (nonbasics at zero) violates the cut
    """
    basic = [j for j in tab.basis if cut.coeffs[j] != 0]
    if basic:
        raise BasicVariableCoefficient('cut has coefficient %s on basic variable y_%d' % (cut.coeffs[basic[0]],
                                                                                         basic[0]))
    lhs = sum((cut.coeffs[var] * tab.rhs[row] for row, var in enumerate(tab.basis)), Fraction(0))
    return lhs < cut.rhs


def fractional_cut(cgf_input):
    """
    Gomory fractional cut sum [r_i] y_i >= [f] of a single row, not normalized
    :return: (coefficients over all variables, rhs)
    """
    if cgf_input.k != 1:
        raise ValueError('the fractional cut is built from one row, got %d' % cgf_input.k)
    coeffs = [Fraction(0)] * cgf_input.n_vars
    for i, j in enumerate(cgf_input.nonbasic_ids):
        coeffs[j] = frac_part(cgf_input.columns[0, i])
    return tuple(coeffs), frac_part(cgf_input.f[0])


def derive_cut(tab, strategy, parameter=None):
    """
    Select the rows the strategy needs and apply its function to every nonbasic column
    :return: (CgfInput, CutStandardForm)
    """
    cgf_input = select_rows(tab, strategy.rows)
    pi = strategy.function(cgf_input.f, parameter)
    values = [pi(cgf_input.column(i)) for i in range(cgf_input.n_columns)]
    return cgf_input, cut_from_values(cgf_input, values)
