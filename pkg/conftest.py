import hypothesis
import numpy as np
import pytest

from src.exact_stats import build_exact_triangle, build_float_triangle
from src.limit_fn import build_piecewise

np.seterr(all='warn')

hypothesis.settings.register_profile('ci', deadline=None, max_examples=50)
hypothesis.settings.register_profile('fast', deadline=None, max_examples=5)
hypothesis.settings.load_profile('ci')


@pytest.fixture(scope='session')
def piecewise():
    """F with every piece up to r = 20."""
    return build_piecewise(20)


@pytest.fixture(scope='session')
def float_triangle_4000():
    return build_float_triangle(4000)


@pytest.fixture(scope='session')
def exact_triangle_300():
    return build_exact_triangle(300)
