"""
    k-dimensional family pi_{f,mu} obtained by trivial lifting of a simplex gauge

    a^0 = mu / <mu, f>,  a^i = e^i / (f_i - 1),
    pi_{f,mu}(r) = min_{z in Z^k} max_{i=0..k} <a^i, r + z>
    eval_pi_kd computes it with one sorted sweep over the coordinates, eval_pi_kd_single_axis
    searches translates along one axis only, eval_pi_kd_oracle searches a box of integer translates.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from ..errors import InvalidParameters, DegenerateDirection
from ..input.utils import to_fraction, frac_part, get_rng
from .validity import check_cgf, random_rational, random_shift

logger = logging.getLogger(__name__)

DEFAULT_TAU = 1000
DEFAULT_CANDIDATES = 121
SPACING_RESOLUTION = 10 ** 6


def _vector(values):
    return tuple(to_fraction(v) for v in values)


def _add(x, y):
    if isinstance(y, int):
        return tuple(v + y for v in x)
    return tuple(a + b for a, b in zip(x, y))


@dataclass(frozen=True)
class MultiDimCgf:
    f: Tuple[Fraction, ...]
    mu: Tuple[Fraction, ...]
    tau: Fraction = Fraction(DEFAULT_TAU)

    def __post_init__(self):
        f, mu, tau = _vector(self.f), _vector(self.mu), to_fraction(self.tau)
        object.__setattr__(self, 'f', f)
        object.__setattr__(self, 'mu', mu)
        object.__setattr__(self, 'tau', tau)
        k = len(f)
        if k < 2:
            raise InvalidParameters('k must be at least 2, got %d' % k)
        if len(mu) != k:
            raise InvalidParameters('mu has %d entries, f has %d' % (len(mu), k))
        if not all(0 <= v < 1 for v in f) or not any(f):
            raise InvalidParameters('f must lie in [0, 1)^k and be nonzero, got %s' % (f,))
        if tau < 2 * k:
            raise InvalidParameters('tau must be at least 2k = %d, got %s' % (2 * k, tau))
        if sum(mu) != 1 or min(mu) < 1 / tau:
            raise InvalidParameters('mu must sum to 1 with entries >= 1/tau, got %s' % (mu,))

    @property
    def k(self):
        return len(self.f)

    def __call__(self, r):
        return eval_pi_kd(self, r)


def fold(f, r):
    """ Integer translate of r lying in prod_i [f_i - 1, f_i) """
    out = []
    for fi, ri in zip(f, r):
        x = frac_part(to_fraction(ri))
        out.append(x - 1 if x >= fi else x)
    return tuple(out)


def _gauge_terms(cgf, r):
    f, mu = cgf.f, cgf.mu
    if len(r) != cgf.k:
        raise ValueError('r has %d entries, expected %d' % (len(r), cgf.k))
    rbar = fold(f, r)
    p = sum(m * x for m, x in zip(mu, rbar))
    q = sum(m * fi for m, fi in zip(mu, f))
    s = [x / (fi - 1) for x, fi in zip(rbar, f)]
    return rbar, p, q, s


def eval_pi_kd(cgf, r):
    """
    pi_{f,mu}(r), exact for every k.
    With t = pi(r) in [0, 1] the optimal translate of fold(r) is 0 or 1 in every coordinate, and
    coordinate i is raised iff t < s_i = rbar_i / (f_i - 1). Raising the m coordinates of largest s
    costs their mu mass in the first gauge term, so
        pi(r) = min_m max((p + sum of the m largest mu) / q, s_(m+1))
    over s sorted in decreasing order. The sort makes this O(k log k) per call; the sweep after it stops
    as soon as the first gauge term reaches the running minimum. eval_pi_kd_single_axis is the
    linear-time bound.
    :param cgf: MultiDimCgf
    :param r: rational k-vector
    :return: Fraction
    """
    _, p, q, s = _gauge_terms(cgf, r)
    order = sorted(range(cgf.k), key=s.__getitem__, reverse=True)
    best = max(p / q, s[order[0]])
    raised = p
    for m, i in enumerate(order, 1):
        raised += cgf.mu[i]
        first = raised / q
        if first >= best:
            break
        best = min(best, max(first, s[order[m]]) if m < cgf.k else first)
    return best


def eval_pi_kd_single_axis(cgf, r, counter=None):
    """
    Minimum of the gauge over translates of fold(r) along the axis of the largest s_i, with a constant
    number of passes over the coordinates. Equals pi_{f,mu} for k = 2; for k >= 3 it is an upper bound,
    strict when raising two coordinates at once is cheaper than raising one.
    :param counter: optional collections.Counter, 'coordinate_ops' is increased by the coordinates visited
    """
    f, mu, k = cgf.f, cgf.mu, cgf.k
    rbar, p, q, s = _gauge_terms(cgf, r)
    i_star = max(range(k), key=s.__getitem__)
    a = s[i_star]
    b = max(s[i] for i in range(k) if i != i_star)
    if counter is not None:
        counter['coordinate_ops'] += 6 * k

    mu_i, r_i, f_i = mu[i_star], rbar[i_star], f[i_star]
    lam = (r_i * q - (f_i - 1) * p) / (mu_i * (f_i - 1) - q)

    def along_axis(step):
        return max((p + mu_i * step) / q, (r_i + step) / (f_i - 1), b)

    return min(along_axis(math.ceil(lam)), along_axis(math.floor(lam)), max(p / q, a))


def eval_pi_kd_oracle(f, mu, r, radius):
    """
    min over z in {-radius..radius}^k of the gauge at fold(r) + z, exact.
    mu may sit on the boundary of the simplex; a coordinate with mu_i = 0 is set to +radius,
    which minimizes its only term x_i / (f_i - 1).
    The gauge is nonnegative (q a^0 + sum_i mu_i (1 - f_i) a^i = 0), so z_i is not raised past the
    first value with x_i >= 0, and a partial translate is dropped once it cannot beat the best value.
    :return: Fraction
    """
    f, mu, r = _vector(f), _vector(mu), _vector(r)
    k = len(f)
    if len(mu) != k or len(r) != k:
        raise ValueError('f, mu and r must have the same length')
    if min(mu) < 0 or sum(mu) != 1:
        raise InvalidParameters('mu must be a probability vector, got %s' % (mu,))
    q = sum(m * fi for m, fi in zip(mu, f))
    if q == 0:
        raise DegenerateDirection('<mu, f> = 0, the gauge is undefined')
    radius = int(radius)
    rbar = fold(f, r)

    def gauge(x):
        return max(sum(m * v for m, v in zip(mu, x)) / q, max(v / (fi - 1) for v, fi in zip(x, f)))

    best = [gauge(rbar)]
    x = list(rbar)

    def low(j):
        # smallest z_j with x_j / (f_j - 1) < best
        return max(-radius, math.floor(best[0] * (f[j] - 1) - rbar[j]) + 1)

    def least_sum(i):
        return sum(mu[j] * (rbar[j] + low(j)) for j in range(i, k) if mu[j] > 0)

    def walk(i, partial):
        if i == k:
            value = gauge(x)
            if value < best[0]:
                best[0] = value
            return
        if mu[i] == 0:
            x[i] = rbar[i] + radius
            walk(i + 1, partial)
            return
        for z in range(low(i), min(radius, math.ceil(-rbar[i])) + 1):
            x[i] = rbar[i] + z
            if partial + mu[i] * x[i] + least_sum(i + 1) >= best[0] * q:
                break
            walk(i + 1, partial + mu[i] * x[i])

    walk(0, Fraction(0))
    return best[0]


def sample_simplex(k, count, tau=DEFAULT_TAU, seed=0):
    """
    Seeded draws from the simplex with entries >= 1/tau, barycenter first.
    Spacings of k-1 sorted uniform integers in [0, 10^6] give a uniform point w of the simplex,
    mapped exactly into it by mu = 1/tau + (1 - k/tau) w.
    :return: list of tuples of Fractions
    """
    tau = to_fraction(tau)
    if k < 1 or count < 1:
        raise InvalidParameters('need k >= 1 and count >= 1, got k=%d count=%d' % (k, count))
    if tau < k:
        raise InvalidParameters('tau = %s leaves no room for %d entries >= 1/tau' % (tau, k))
    rng = get_rng(seed)
    out = [tuple(Fraction(1, k) for _ in range(k))]
    scale = 1 - k / tau
    for _ in range(count - 1):
        cuts = sorted(int(v) for v in rng.integers(0, SPACING_RESOLUTION + 1, size=k - 1))
        edges = [0] + cuts + [SPACING_RESOLUTION]
        w = [Fraction(hi - lo, SPACING_RESOLUTION) for lo, hi in zip(edges, edges[1:])]
        out.append(tuple(1 / tau + scale * v for v in w))
    return out


def check_validity_kd(cgf, sample_count=1000, seed=0):
    rng = get_rng(seed)
    k = cgf.k

    def point():
        return tuple(random_rational(rng) for _ in range(k))

    points = [point() for _ in range(sample_count)]
    shifts = [tuple(random_shift(rng) for _ in range(k)) for _ in range(sample_count)]
    pairs = [(point(), point()) for _ in range(sample_count)]
    name = 'pi[f=%s, mu=%s]' % (', '.join(map(str, cgf.f)), ', '.join(map(str, cgf.mu)))
    return check_cgf(name, cgf, tuple(Fraction(0) for _ in range(k)), cgf.f, points, shifts, pairs, add=_add)
