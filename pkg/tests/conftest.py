import numpy as np
import pytest

from traceineq import draw_posdef, real_line_rule


@pytest.fixture(scope="session")
def beta_rule():
    return real_line_rule()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def chain(seed, n, d=2, lam_range=(0.1, 10.0)):
    rng = np.random.default_rng(seed)
    return [draw_posdef(rng, d, lam_range) for _ in range(n)]


@pytest.fixture()
def make_chain():
    return chain
