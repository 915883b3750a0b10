import math
from decimal import Decimal, ROUND_HALF_EVEN, localcontext
from fractions import Fraction

import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import seaborn as sns
sns.set(style="white", color_codes=True)


def get_rng(seed):
    """
    Seeded generator used for every random draw in the package.
    Philox4x64-10 is counter based, so a seed gives the same stream on every platform.
    :param seed: non-negative integer
    :return: numpy Generator
    """
    return np.random.Generator(np.random.Philox(int(seed)))


def to_fraction(value):
    """
    Convert int, Fraction, numpy integer or text ("3", "-7/2") to an exact Fraction.
    Floats are refused, they would smuggle rounding into the exact core.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, float, np.floating)):
        raise TypeError('refusing inexact value %r, pass an int, Fraction or "p/q" text' % (value,))
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(str(value).strip())


def fraction_array(values):
    """
    Object array of Fractions with the shape of `values`
    """
    arr = np.array(values, dtype=object)
    flat = [to_fraction(v) for v in arr.ravel()]
    out = np.empty(arr.shape, dtype=object)
    out.ravel()[:] = flat
    return out


def frozen(arr):
    arr.setflags(write=False)
    return arr


def frac_part(x):
    """ [x] = x - floor(x) """
    return x - math.floor(x)


def is_integral(x):
    return Fraction(x).denominator == 1


def format_fraction(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return '%d/%d' % (x.numerator, x.denominator)


def parse_fraction_list(text):
    """
    "1/3 1/3 1/3" or "1/3,1/3,1/3" -> list of Fractions
    """
    tokens = text.replace(',', ' ').split()
    return [to_fraction(t) for t in tokens]


def format_fraction_list(values):
    return ' '.join(format_fraction(v) for v in values)


def lcm_of_denominators(values):
    out = 1
    for v in values:
        out = out * Fraction(v).denominator // math.gcd(out, Fraction(v).denominator)
    return out


def format_decimal(x, digits=4):
    """
    Render an exact rational with `digits` decimals, half-even rounding
    """
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = max(50, len(str(abs(x.numerator))) + digits + 10)
        value = Decimal(x.numerator) / Decimal(x.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def plot_cgf_curve(curves, save_path, title=''):
    """
    Plot one or more (r, pi) curves on [0, 1)
    :param curves: dict label -> DataFrame with columns 'r' and 'pi'
    :param save_path: png path
    :param title:
    :return:
    """
    fig, ax = plt.subplots(figsize=(5, 4))
    for label, df in curves.items():
        ax.plot(df['r'].astype(float), df['pi'].astype(float), label=label)
    ax.set_xlabel('r')
    ax.set_ylabel(r'$\pi(r)$')
    ax.set_xlim(0, 1)
    if title:
        ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(save_path)
    plt.close(fig)
