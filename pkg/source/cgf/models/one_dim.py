"""
    One-dimensional two-slope family pi_{f,s1,s2}^{p,q} of Gomory-Johnson cut generating functions

    pi(r) = max( {min(phi_i^1, phi_i^2) : i = 1..p} U {min(psi_j^1, psi_j^2) : j = 1..q-1} ) on [r],
        phi_i^1(r) = s1 r + i (1 - f s1) / p,            phi_i^2(r) = s2 r + (i-1) (1 - f s2) / (p-1)
        psi_j^1(r) = s1 (r-1) + (j-1) (1 + (1-f) s1) / (q-1),  psi_j^2(r) = s2 (r-1) + j (1 + (1-f) s2) / q
    The slopes (s1, s2) = (1/(f-1), 1/f) give the GMI function.
"""
import functools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import pandas as pd

from ..errors import InvalidParameters
from ..input.utils import to_fraction, frac_part, get_rng
from .validity import check_cgf, random_rational, random_shift

logger = logging.getLogger(__name__)

DEFAULT_M = 10
DEFAULT_P = 2
DEFAULT_Q = 2

# (f, s1, s2, p, q) of the curves shown next to the GMI function in the plot-cgf presets
PRESET_PARAMETERS = (
    ('3/10', '-2', '7', 2, 2),
    ('1/2', '-5', '5', 3, 3),
    ('3/5', '-25/2', '5/2', 4, 3),
)


def _check_f(f):
    f = to_fraction(f)
    if not 0 < f < 1:
        raise InvalidParameters('f must lie in (0, 1), got %s' % f)
    return f


def _check_pieces(p, q):
    for name, value in (('p', p), ('q', q)):
        if isinstance(value, bool) or not isinstance(value, int) or value < 2:
            raise InvalidParameters('%s must be a finite integer >= 2, got %r' % (name, value))


@dataclass(frozen=True)
class SlopeDomain:
    """
    Rectangle [s1_low, s1_high] x [s2_low, s2_high] of valid slopes, s1_low may be -inf and s2_high +inf
    """
    f: Fraction
    s1_low: object
    s1_high: Fraction
    s2_low: Fraction
    s2_high: object

    def contains(self, s1, s2):
        return self.s1_low <= s1 <= self.s1_high and self.s2_low <= s2 <= self.s2_high

    @property
    def bounded(self):
        return not math.isinf(self.s1_low) and not math.isinf(self.s2_high)


@dataclass(frozen=True)
class SlopeBox:
    f: Fraction
    l1: Fraction
    u1: Fraction
    l2: Fraction
    u2: Fraction

    def __post_init__(self):
        if not (self.l1 <= self.u1 < 0 < self.l2 <= self.u2):
            raise InvalidParameters('slope box needs l1 <= u1 < 0 < l2 <= u2, got [%s, %s] x [%s, %s]'
                                    % (self.l1, self.u1, self.l2, self.u2))


def valid_domain(f, p, q):
    """
    Slopes (s1, s2) for which pi_{f,s1,s2}^{p,q} is a cut generating function
    :param f: rational in (0, 1)
    :param p: integer >= 2
    :param q: integer >= 2
    :return: SlopeDomain
    """
    f = _check_f(f)
    _check_pieces(p, q)
    total = p + q - 1
    s1_low = Fraction(total) / (total * f - p) if total * f - p < 0 else -math.inf
    s2_high = Fraction(total) / (q - total * (1 - f)) if total * (1 - f) - q < 0 else math.inf
    return SlopeDomain(f, s1_low, 1 / (f - 1), 1 / f, s2_high)


def truncate_domain(domain, M=DEFAULT_M):
    """
    Replace -inf by 1/(f-1) - M and +inf by 1/f + M
    :return: SlopeBox
    """
    M = to_fraction(M)
    if M <= 0:
        raise InvalidParameters('M must be positive, got %s' % M)
    f = domain.f
    l1 = 1 / (f - 1) - M if math.isinf(domain.s1_low) else domain.s1_low
    u2 = 1 / f + M if math.isinf(domain.s2_high) else domain.s2_high
    return SlopeBox(f, l1, domain.s1_high, domain.s2_low, u2)


def map_mu_to_slopes(mu1, mu2, box):
    """
    (mu1, mu2) in [0, 1]^2 -> (s1, s2); (0, 0) is the GMI corner (u1, l2)
    """
    mu1, mu2 = to_fraction(mu1), to_fraction(mu2)
    if not (0 <= mu1 <= 1 and 0 <= mu2 <= 1):
        raise InvalidParameters('mu must lie in [0, 1]^2, got (%s, %s)' % (mu1, mu2))
    return box.u1 - mu1 * (box.u1 - box.l1), box.l2 + mu2 * (box.u2 - box.l2)


@dataclass(frozen=True)
class OneDimCgf:
    f: Fraction
    p: int
    q: int
    s1: Fraction
    s2: Fraction

    def __post_init__(self):
        object.__setattr__(self, 'f', _check_f(self.f))
        object.__setattr__(self, 's1', to_fraction(self.s1))
        object.__setattr__(self, 's2', to_fraction(self.s2))
        domain = valid_domain(self.f, self.p, self.q)
        if not domain.contains(self.s1, self.s2):
            raise InvalidParameters('slopes (%s, %s) outside the valid domain [%s, %s] x [%s, %s]'
                                    % (self.s1, self.s2, domain.s1_low, domain.s1_high,
                                       domain.s2_low, domain.s2_high))

    @classmethod
    def from_mu(cls, f, mu1, mu2, p=DEFAULT_P, q=DEFAULT_Q, M=DEFAULT_M):
        box = truncate_domain(valid_domain(f, p, q), M)
        s1, s2 = map_mu_to_slopes(mu1, mu2, box)
        return cls(f, p, q, s1, s2)

    @classmethod
    def gmi(cls, f, p=DEFAULT_P, q=DEFAULT_Q):
        f = _check_f(f)
        return cls(f, p, q, 1 / (f - 1), 1 / f)

    @property
    def domain(self):
        return valid_domain(self.f, self.p, self.q)

    def __call__(self, r):
        return eval_pi_1d(self, r)


def _pieces(cgf, r):
    f, p, q, s1, s2 = cgf.f, cgf.p, cgf.q, cgf.s1, cgf.s2
    for i in range(1, p + 1):
        yield 'phi', i, s1 * r + i * (1 - f * s1) / p, s2 * r + (i - 1) * (1 - f * s2) / (p - 1)
    for j in range(1, q):
        yield 'psi', j, s1 * (r - 1) + (j - 1) * (1 + (1 - f) * s1) / (q - 1), \
            s2 * (r - 1) + j * (1 + (1 - f) * s2) / q


def eval_pi_1d(cgf, r):
    """
    pi_{f,s1,s2}^{p,q}(r), evaluated on the fractional part of r
    """
    r = frac_part(to_fraction(r))
    return max(min(first, second) for _, _, first, second in _pieces(cgf, r))


def active_piece(cgf, r):
    """
    Affine piece attaining pi(r): (family, index, branch) with family 'phi' or 'psi' and
    branch 1 or 2 for the slope s1 or s2. Ties go to the first piece in evaluation order.
    """
    r = frac_part(to_fraction(r))
    best, label = None, None
    for family, index, first, second in _pieces(cgf, r):
        value, branch = (first, 1) if first <= second else (second, 2)
        if best is None or value > best:
            best, label = value, (family, index, branch)
    return label


def eval_gmi(f, r):
    ff = frac_part(to_fraction(f))
    if ff == 0:
        raise InvalidParameters('GMI needs a fractional f, got %s' % f)
    rr = frac_part(to_fraction(r))
    if rr <= ff:
        return rr / ff
    return (1 - rr) / (1 - ff)


def eval_cg(f, r):
    ff = frac_part(to_fraction(f))
    if ff == 0:
        raise InvalidParameters('CG needs a fractional f, got %s' % f)
    return frac_part(to_fraction(r)) / ff


def intersection_breakpoints(f, p, q):
    """
    Points of [0, 1] where every member of the family with strict slopes agrees with GMI_f.
    They split [0, 1] into 2(p+q-2) subintervals.
    """
    f = _check_f(f)
    _check_pieces(p, q)
    points = {i * f / p for i in range(p + 1)}
    points |= {i * f / (p - 1) for i in range(1, p - 1)}
    points |= {1 - j * (1 - f) / q for j in range(q)}
    points |= {1 - j * (1 - f) / (q - 1) for j in range(1, q - 1)}
    return sorted(points)


def check_validity_1d(cgf, sample_count=1000, seed=0):
    rng = get_rng(seed)
    points = [random_rational(rng) for _ in range(sample_count)]
    shifts = [random_shift(rng) for _ in range(sample_count)]
    pairs = [(random_rational(rng), random_rational(rng)) for _ in range(sample_count)]
    # the breakpoints are where subadditivity is tight
    breaks = intersection_breakpoints(cgf.f, cgf.p, cgf.q)
    pairs += [(a, b) for a in breaks for b in breaks]
    name = 'pi[f=%s, p=%d, q=%d, s1=%s, s2=%s]' % (cgf.f, cgf.p, cgf.q, cgf.s1, cgf.s2)
    return check_cgf(name, cgf, Fraction(0), cgf.f, points, shifts, pairs)


def plot_data(pi, resolution=100):
    """
    (r, pi(r)) on r = 0, 1/resolution, ..., 1
    :param pi: callable of one rational
    :return: DataFrame with Fraction columns 'r' and 'pi'
    """
    rs = [Fraction(i, resolution) for i in range(resolution + 1)]
    return pd.DataFrame({'r': rs, 'pi': [pi(r) for r in rs]})


def comparison_curves(cgf, resolution=100):
    """
    The family member next to GMI_f and CG_f on the same grid
    """
    label = 'pi f=%s s1=%s s2=%s p=%d q=%d' % (cgf.f, cgf.s1, cgf.s2, cgf.p, cgf.q)
    return {
        label: plot_data(cgf, resolution),
        'GMI': plot_data(functools.partial(eval_gmi, cgf.f), resolution),
        'CG': plot_data(functools.partial(eval_cg, cgf.f), resolution),
    }


def presets():
    return [OneDimCgf(f, p, q, s1, s2) for f, s1, s2, p, q in PRESET_PARAMETERS]
