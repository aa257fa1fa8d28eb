import numpy as np
import pytest

from tailmax import step_path


def random_step_path(rng, dim=1, max_jumps=12, scale=1.0, monotone=False):
    """Random step path with at most ``max_jumps`` jumps."""
    k = int(rng.integers(0, max_jumps + 1))
    bp = np.concatenate(([0.0], np.sort(rng.uniform(0.005, 1.0, k))))
    if monotone:
        vals = np.cumsum(rng.uniform(0.0, scale, (k + 1, dim)), axis=0)
    else:
        vals = rng.normal(0.0, scale, (k + 1, dim))
    return step_path(bp, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
