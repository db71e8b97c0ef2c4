import numpy as np
import pytest

from finslergo import build_s7_space, riemannian_metric


@pytest.fixture(scope="session")
def s7():
    return build_s7_space()


@pytest.fixture(scope="session")
def round_metric(s7):
    """The unit-weight single-metric pipeline on the catalog space."""
    return riemannian_metric(s7.space, [1.0, 1.0, 1.0])


def unit_m_samples(space, n, seed):
    """Unit-norm vectors on m in the unweighted block products."""
    rng = np.random.default_rng(seed)
    gram = space.alpha_gram()
    out = np.empty((n, space.dim_m))
    for i in range(n):
        v = rng.standard_normal(space.dim_m)
        out[i] = v / np.sqrt(v @ gram @ v)
    return out
