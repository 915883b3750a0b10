import os
import sys

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.realpath(__file__))))
from source.cgf.lp_simplex import IlpInstance


@pytest.fixture
def toy():
    """ max x  s.t.  2x <= 3, x in Z+ """
    return IlpInstance.from_data([[2]], [3], [1], 2)


@pytest.fixture
def box():
    return IlpInstance.from_data([[1, 0], [0, 1]], [5, 5], [1, 1], 5)
