"""
    Exact checks of the cut generating function conditions:
    pi >= 0, pi(0) = 0, pi(f) = 1, integer periodicity and subadditivity on sampled points
"""
import logging
import operator
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ValidityViolation

logger = logging.getLogger(__name__)

SAMPLE_DENOMINATOR = 840
SHIFT_RANGE = 3


@dataclass(frozen=True)
class ValidityReport:
    name: str
    periodicity_checks: int
    subadditivity_checks: int
    passed: bool = True


def random_rational(rng, low=-1, high=2, denominator=SAMPLE_DENOMINATOR):
    """ Uniform on the grid (1/denominator)Z inside [low, high) """
    return Fraction(int(rng.integers(low * denominator, high * denominator)), denominator)


def random_shift(rng):
    return int(rng.integers(-SHIFT_RANGE, SHIFT_RANGE + 1))


def check_cgf(name, pi, zero, f, points, shifts, pairs, add=operator.add):
    """
    Run every check in exact arithmetic, stop at the first failure
    :param name: label for the report
    :param pi: callable evaluating the function
    :param zero: the origin in the function's domain
    :param f: the point that must map to 1
    :param points: points for the periodicity check
    :param shifts: integer shifts, one per point
    :param pairs: (r, r') pairs for the subadditivity check
    :param add: addition in the domain
    :return: ValidityReport
    """
    value = pi(zero)
    if value != 0:
        raise ValidityViolation('%s: pi(0) = %s' % (name, value), witness=(zero,))
    value = pi(f)
    if value != 1:
        raise ValidityViolation('%s: pi(f) = %s' % (name, value), witness=(f,))

    for r, w in zip(points, shifts):
        value = pi(r)
        if value < 0:
            raise ValidityViolation('%s: pi(%s) = %s is negative' % (name, r, value), witness=(r,))
        shifted = pi(add(r, w))
        if shifted != value:
            raise ValidityViolation('%s: pi(r + w) = %s differs from pi(r) = %s' % (name, shifted, value),
                                    witness=(r, w))

    for r1, r2 in pairs:
        total = pi(add(r1, r2))
        if pi(r1) + pi(r2) < total:
            raise ValidityViolation('%s: subadditivity fails, pi(r + r\') = %s' % (name, total), witness=(r1, r2))

    logger.debug('%s passed %d periodicity and %d subadditivity checks', name, len(points), len(pairs))
    return ValidityReport(name, len(points), len(pairs))
