"""
    Exact LP relaxation of canonical-form ILP instances

    max c'x  s.t.  Ax <= b, x >= 0, solved in standard form [A | I] y = b with
    a dense two-phase primal simplex (Bland's rule) over Fractions; appended rows are
    re-optimized from the previous basis with the dual simplex. Variables are
    0-based: 0..n-1 structural, n..n+m'-1 slacks of the m' rows (instance rows
    followed by any appended rows).
"""
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .errors import NonIntegerData, UnboundedFeasibleSet, SingularBasis, PivotLimitExceeded, \
    InsufficientFractionalRows, EnumerationTooLarge
from .input.utils import fraction_array, frozen, frac_part, is_integral, to_fraction

logger = logging.getLogger(__name__)

OPTIMAL = 'optimal'
INFEASIBLE = 'infeasible'
UNBOUNDED = 'unbounded'

MAX_PIVOTS = 10 ** 5
ENUMERATION_LIMIT = 2 * 10 ** 6


def _zeros(shape):
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


@dataclass(frozen=True, eq=False)
class IlpInstance:
    """
    Canonical form instance (A, b, c) with box bound rho on its feasible integer points
    """
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    rho: int

    @classmethod
    def from_data(cls, A, b, c, rho):
        A = fraction_array(A)
        if A.ndim != 2:
            raise ValueError('A must be a matrix, got shape %s' % (A.shape,))
        b = fraction_array(b)
        c = fraction_array(c)
        if b.shape != (A.shape[0],) or c.shape != (A.shape[1],):
            raise ValueError('shape mismatch: A %s, b %s, c %s' % (A.shape, b.shape, c.shape))
        return cls(frozen(A), frozen(b), frozen(c), int(rho))

    @property
    def m(self):
        return self.A.shape[0]

    @property
    def n(self):
        return self.A.shape[1]

    def __eq__(self, other):
        if not isinstance(other, IlpInstance):
            return NotImplemented
        return (self.rho == other.rho and self.A.shape == other.A.shape
                and np.array_equal(self.A, other.A) and np.array_equal(self.b, other.b)
                and np.array_equal(self.c, other.c))

    __hash__ = None


@dataclass(frozen=True)
class ValidationReport:
    m: int
    n: int
    rho: int
    method: str
    bounds: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class _SimplexState:
    """ Optimal dense tableau kept for warm starts: T y = rhs with reduced costs of every column """
    T: np.ndarray
    rhs: np.ndarray
    basis: Tuple[int, ...]
    reduced: np.ndarray


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: str
    basis: Tuple[int, ...] = ()
    objective: Optional[Fraction] = None
    x: Optional[Tuple[Fraction, ...]] = None
    extra_rows: Tuple = ()
    pivots: int = 0
    state: Optional[_SimplexState] = field(default=None, repr=False)


@dataclass(frozen=True, eq=False)
class SimplexTableau:
    """
    y_B + coeffs y_N = rhs at an optimal basis; row i has basic variable basis[i]
    """
    basis: Tuple[int, ...]
    nonbasis: Tuple[int, ...]
    coeffs: np.ndarray
    rhs: np.ndarray
    n_structural: int

    @property
    def n_vars(self):
        return len(self.basis) + len(self.nonbasis)

    def basic_var_of_row(self, row):
        return self.basis[row]


@dataclass(frozen=True, eq=False)
class CgfInput:
    """
    k selected tableau rows: z + sum_i r^i y_i = f with one k-vector column per nonbasic variable
    """
    k: int
    columns: np.ndarray  # k x |N|
    f: Tuple[Fraction, ...]
    nonbasic_ids: Tuple[int, ...]
    rows: Tuple[int, ...]
    n_vars: int
    n_structural: int

    def column(self, i):
        return tuple(self.columns[:, i])

    @property
    def n_columns(self):
        return self.columns.shape[1]


def _integral_rows(extra_rows, n):
    out = []
    for row, rhs in extra_rows:
        row = [to_fraction(v) for v in row]
        rhs = to_fraction(rhs)
        if len(row) != n:
            raise ValueError('appended row has %d coefficients, expected %d' % (len(row), n))
        if not all(is_integral(v) for v in row) or not is_integral(rhs):
            raise NonIntegerData('appended rows must have integer coefficients')
        out.append((tuple(row), rhs))
    return tuple(out)


def standard_form(inst, extra_rows=()):
    """
    Build [A; extra | I] and the right-hand side
    :param inst: IlpInstance
    :param extra_rows: sequence of (row, rhs) with integer entries
    :return: (A_tilde, b) object arrays
    """
    extra_rows = _integral_rows(extra_rows, inst.n)
    rows = [list(inst.A[i]) for i in range(inst.m)] + [list(row) for row, _ in extra_rows]
    rhs = list(inst.b) + [r for _, r in extra_rows]
    m_all = len(rows)
    A_tilde = _zeros((m_all, inst.n + m_all))
    A_tilde[:, :inst.n] = fraction_array(rows)
    for i in range(m_all):
        A_tilde[i, inst.n + i] = Fraction(1)
    return A_tilde, fraction_array(rhs)


def _pivot(T, rhs, basis, reduced, row, col):
    """
    Gauss-Jordan step on the pivot (row, col), the reduced cost row included.
    Only the nonzero columns of the pivot row are touched.
    """
    piv = T[row, col]
    if piv != 1:
        T[row] = T[row] / piv
        rhs[row] = rhs[row] / piv
    support = [j for j, v in enumerate(T[row]) if v != 0]
    pivot_row = T[row, support]
    for i in range(T.shape[0]):
        factor = T[i, col]
        if i != row and factor != 0:
            T[i, support] = T[i, support] - factor * pivot_row
            rhs[i] = rhs[i] - factor * rhs[row]
    factor = reduced[col]
    if factor != 0:
        reduced[support] = reduced[support] - factor * pivot_row
    basis[row] = col


def _reduced_costs(T, basis, cost):
    cb = np.array([cost[j] for j in basis], dtype=object)
    return cost - cb.dot(T)


def _run_simplex(T, rhs, basis, reduced, pivots, max_pivots):
    """
    Maximize from the feasible basis in place. Bland: lowest entering index,
    ratio ties to the lowest basic variable index.
    :return: (status, pivots)
    """
    m = T.shape[0]
    while True:
        entering = next((j for j, v in enumerate(reduced) if v > 0), None)
        if entering is None:
            return OPTIMAL, pivots
        leaving, best = None, None
        for i in range(m):
            a = T[i, entering]
            if a > 0:
                ratio = rhs[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    leaving, best = i, ratio
        if leaving is None:
            return UNBOUNDED, pivots
        if pivots >= max_pivots:
            raise PivotLimitExceeded('more than %d pivots' % max_pivots)
        _pivot(T, rhs, basis, reduced, leaving, entering)
        pivots += 1


def _run_dual_simplex(T, rhs, basis, reduced, pivots, max_pivots):
    """
    Restore primal feasibility from a dual feasible basis (reduced costs <= 0) in place.
    The leaving row holds the lowest basic index among negative right-hand sides, the entering
    column minimizes reduced_j / T[row, j] over T[row, j] < 0, ties to the lowest index.
    :return: (status, pivots)
    """
    while True:
        negative = [i for i in range(T.shape[0]) if rhs[i] < 0]
        if not negative:
            return OPTIMAL, pivots
        leaving = min(negative, key=basis.__getitem__)
        entering, best = None, None
        for j, a in enumerate(T[leaving]):
            if a < 0:
                ratio = reduced[j] / a
                if best is None or ratio < best:
                    entering, best = j, ratio
        if entering is None:
            return INFEASIBLE, pivots
        if pivots >= max_pivots:
            raise PivotLimitExceeded('more than %d pivots' % max_pivots)
        _pivot(T, rhs, basis, reduced, leaving, entering)
        pivots += 1


def _optimal_solution(inst, T, rhs, basis, reduced, extra_rows, pivots):
    n = inst.n
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    objective = sum((inst.c[j] * x[j] for j in range(n)), Fraction(0))
    logger.debug('LP optimal after %d pivots, objective %s', pivots, objective)
    return LpSolution(OPTIMAL, tuple(basis), objective, tuple(x), extra_rows, pivots,
                      _SimplexState(T, rhs, tuple(basis), reduced))


def solve_lp(inst, extra_rows=(), max_pivots=MAX_PIVOTS):
    """
    Exact optimum of the LP relaxation with optional appended rows
    :param inst: IlpInstance
    :param extra_rows: (row, rhs) pairs with integer entries (branching bounds, cuts)
    :param max_pivots: cap on pivots over both phases
    :return: LpSolution
    """
    extra_rows = _integral_rows(extra_rows, inst.n)
    A_tilde, b = standard_form(inst, extra_rows)
    m_all, n_all = A_tilde.shape
    n = inst.n
    T = A_tilde.copy()
    rhs = b.copy()
    basis = [n + i for i in range(m_all)]

    negative_rows = [i for i in range(m_all) if rhs[i] < 0]
    pivots = 0
    if negative_rows:
        for i in negative_rows:
            T[i] = -T[i]
            rhs[i] = -rhs[i]
        artificial = _zeros((m_all, len(negative_rows)))
        for j, i in enumerate(negative_rows):
            artificial[i, j] = Fraction(1)
            basis[i] = n_all + j
        T = np.hstack([T, artificial])
        cost = _zeros(T.shape[1])
        cost[n_all:] = Fraction(-1)
        reduced = _reduced_costs(T, basis, cost)
        _, pivots = _run_simplex(T, rhs, basis, reduced, pivots, max_pivots)
        if any(rhs[i] > 0 for i in range(m_all) if basis[i] >= n_all):
            logger.debug('phase 1 ended with positive artificials, infeasible after %d pivots', pivots)
            return LpSolution(INFEASIBLE, extra_rows=extra_rows, pivots=pivots)
        for i in range(m_all):
            if basis[i] >= n_all:
                col = next((j for j in range(n_all) if T[i, j] != 0), None)
                if col is None:
                    raise SingularBasis('artificial variable stuck in row %d' % i)
                _pivot(T, rhs, basis, reduced, i, col)
                pivots += 1
        T = T[:, :n_all].copy()

    cost = _zeros(n_all)
    cost[:n] = inst.c
    reduced = _reduced_costs(T, basis, cost)
    status, pivots = _run_simplex(T, rhs, basis, reduced, pivots, max_pivots)
    if status == UNBOUNDED:
        return LpSolution(UNBOUNDED, extra_rows=extra_rows, pivots=pivots)
    return _optimal_solution(inst, T, rhs, basis, reduced, extra_rows, pivots)


def append_rows(inst, sol, extra_rows, max_pivots=MAX_PIVOTS):
    """
    Re-optimize an optimal solution after appending rows, starting from its basis.
    Each new row enters with its slack basic, is reduced against the current basis, and the
    dual simplex restores feasibility. Variable numbering matches solve_lp(inst, sol.extra_rows + extra_rows).
    :param inst: IlpInstance sol was solved on
    :param sol: OPTIMAL LpSolution returned by solve_lp or append_rows
    :param extra_rows: (row, rhs) pairs with integer entries
    :return: LpSolution
    """
    if sol.status != OPTIMAL or sol.state is None:
        raise ValueError('warm start needs an optimal solution with its tableau, got %s' % sol.status)
    new_rows = _integral_rows(extra_rows, inst.n)
    state = sol.state
    T, rhs, basis, reduced = state.T, state.rhs, list(state.basis), state.reduced
    for row, beta in new_rows:
        m_old, n_old = T.shape
        T = np.hstack([T, _zeros((m_old, 1))])
        line = _zeros(n_old + 1)
        line[:inst.n] = row
        line[n_old] = Fraction(1)
        value = beta
        for i, var in enumerate(basis):
            factor = line[var]
            if factor != 0:
                line = line - factor * T[i]
                value = value - factor * rhs[i]
        T = np.vstack([T, line.reshape(1, -1)])
        rhs = np.append(rhs, _zeros(1))
        rhs[-1] = value
        reduced = np.append(reduced, _zeros(1))
        basis.append(n_old)

    # copies: sibling nodes restart from the same parent state
    T, rhs, reduced = T.copy(), rhs.copy(), reduced.copy()
    extra_rows = sol.extra_rows + new_rows
    status, pivots = _run_dual_simplex(T, rhs, basis, reduced, 0, max_pivots)
    if status == INFEASIBLE:
        logger.debug('appended rows are infeasible after %d dual pivots', pivots)
        return LpSolution(INFEASIBLE, extra_rows=extra_rows, pivots=pivots)
    return _optimal_solution(inst, T, rhs, basis, reduced, extra_rows, pivots)


def _solve_exact(B, R):
    """
    B^-1 R by Gauss-Jordan elimination over Fractions
    """
    m = B.shape[0]
    M = np.hstack([B, R]).copy()
    for col in range(m):
        piv = next((i for i in range(col, m) if M[i, col] != 0), None)
        if piv is None:
            raise SingularBasis('basis matrix is singular at column %d' % col)
        if piv != col:
            M[[col, piv]] = M[[piv, col]]
        M[col] = M[col] / M[col, col]
        for i in range(m):
            if i != col and M[i, col] != 0:
                M[i] = M[i] - M[i, col] * M[col]
    return M[:, m:]


def extract_tableau(inst, sol):
    """
    Recompute A_B^-1 A_N and A_B^-1 b from the optimal basis
    :param inst: IlpInstance
    :param sol: optimal LpSolution of inst (with its appended rows)
    :return: SimplexTableau
    """
    if sol.status != OPTIMAL:
        raise ValueError('tableau needs an optimal solution, got %s' % sol.status)
    A_tilde, b = standard_form(inst, sol.extra_rows)
    basis = list(sol.basis)
    in_basis = set(basis)
    nonbasis = [j for j in range(A_tilde.shape[1]) if j not in in_basis]
    R = np.hstack([A_tilde[:, nonbasis], b.reshape(-1, 1)])
    X = _solve_exact(A_tilde[:, basis], R)
    coeffs = frozen(X[:, :-1].copy())
    rhs = frozen(X[:, -1].copy())
    return SimplexTableau(tuple(basis), tuple(nonbasis), coeffs, rhs, inst.n)


def select_rows(tab, k):
    """
    First k tableau rows (in row order) whose right-hand side is fractional
    :param tab: SimplexTableau
    :param k: number of rows
    :return: CgfInput
    """
    if k < 1:
        raise ValueError('k must be positive, got %d' % k)
    rows = [i for i in range(len(tab.rhs)) if not is_integral(tab.rhs[i])][:k]
    if len(rows) < k:
        raise InsufficientFractionalRows('only %d fractional rows, %d requested' % (len(rows), k))
    columns = frozen(tab.coeffs[rows, :].copy())
    f = tuple(frac_part(tab.rhs[i]) for i in rows)
    return CgfInput(k, columns, f, tab.nonbasis, tuple(rows), tab.n_vars, tab.n_structural)


def coordinate_bounds(inst):
    """
    Upper bound on every coordinate of a feasible integer point.
    Nonnegative A with a positive entry per column gives min_i floor(b_i / a_ij);
    otherwise each coordinate is maximized over the LP relaxation.
    :return: (bounds, method)
    """
    A, b = inst.A, inst.b
    structural = all(a >= 0 for a in A.ravel()) and all(any(A[i, j] > 0 for i in range(inst.m))
                                                        for j in range(inst.n))
    if structural:
        bounds = tuple(min(math.floor(b[i] / A[i, j]) for i in range(inst.m) if A[i, j] > 0)
                       for j in range(inst.n))
        return bounds, 'structural'

    bounds = []
    for j in range(inst.n):
        single = IlpInstance.from_data(A, b, [1 if jj == j else 0 for jj in range(inst.n)], inst.rho)
        sol = solve_lp(single)
        if sol.status == UNBOUNDED:
            raise UnboundedFeasibleSet('x_%d is unbounded over Ax <= b, x >= 0' % j)
        if sol.status == INFEASIBLE:
            return tuple([-1] * inst.n), 'lp'
        bounds.append(math.floor(sol.objective))
    return tuple(bounds), 'lp'


def validate_instance(inst):
    """
    Check integral data and that every feasible integer point lies in [0, rho]^n
    :return: ValidationReport
    """
    if not all(is_integral(v) for v in inst.A.ravel()) or not all(is_integral(v) for v in inst.b):
        raise NonIntegerData('A and b must be integral')
    if inst.rho < 1:
        raise ValueError('rho must be a positive integer, got %d' % inst.rho)
    bounds, method = coordinate_bounds(inst)
    if bounds and max(bounds) > inst.rho:
        raise UnboundedFeasibleSet('feasible points reach %d > rho = %d' % (max(bounds), inst.rho))
    return ValidationReport(inst.m, inst.n, inst.rho, method, bounds)


def enumerate_feasible_points(inst, limit=ENUMERATION_LIMIT):
    """
    Yield every integer x >= 0 with Ax <= b, in lexicographic order.
    Partial assignments are pruned when no completion can restore a negative residual.
    :param inst: IlpInstance with integral data
    :param limit: maximum number of search nodes
    """
    bounds, _ = coordinate_bounds(inst)
    ub = [min(u, inst.rho) for u in bounds]
    if any(u < 0 for u in ub):
        return
    m, n = inst.m, inst.n
    columns = [[int(inst.A[i, j]) for i in range(m)] for j in range(n)]
    nonneg = [all(a >= 0 for a in col) for col in columns]
    # recover[j][i]: largest amount coordinates j.. can still add back to residual i
    recover = [[0] * m for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        recover[j] = [recover[j + 1][i] + max(0, -columns[j][i]) * ub[j] for i in range(m)]
    residual = [int(v) for v in inst.b]
    x = [0] * n
    visited = [0]

    def hopeless(j):
        return any(residual[i] + recover[j][i] < 0 for i in range(m))

    def walk(j):
        visited[0] += 1
        if visited[0] > limit:
            raise EnumerationTooLarge('more than %d search nodes' % limit)
        if j == n:
            yield tuple(x)
            return
        saved = residual[:]
        col = columns[j]
        for v in range(ub[j] + 1):
            x[j] = v
            if v:
                for i in range(m):
                    residual[i] -= col[i]
            if hopeless(j + 1):
                if nonneg[j]:
                    break
                continue
            yield from walk(j + 1)
        residual[:] = saved
        x[j] = 0

    if not hopeless(0):
        yield from walk(0)
