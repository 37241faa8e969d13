import numpy as np
import pytest

from heilbronn.configurations import make_config
from heilbronn.geometry import Line


def random_config(n, dim, seed, spread=1.0):
    """Random incident point-line pairs in the unit cube."""
    rng = np.random.default_rng(seed)
    pts = 0.5 + spread * (rng.uniform(0, 1, (n, dim)) - 0.5)
    lines = [Line(p, rng.normal(size=dim)) for p in pts]
    return make_config(pts, lines)


def separated_config(n_target, dim, seed, K=8, levels=3, step=5):
    """Configuration whose points occupy hierarchically separated cubes.

    At every scale K^-j the occupied cube indices are multiples of `step`
    per axis, so cubes in the cover are pairwise (step-1) * K^-j separated
    and the uniformizer's parity-class selection can retain everything.
    Requires step < K.
    """
    assert step < K
    rng = np.random.default_rng(seed)
    digits = np.arange(0, K, step)
    pts = []
    for _ in range(n_target):
        x = np.zeros(dim)
        for j in range(1, levels + 1):
            d = rng.choice(digits, size=dim)
            x = x + d * float(K) ** -j
        x = x + rng.uniform(0, 0.9 * float(K) ** -levels, size=dim)
        pts.append(x)
    pts = np.array(pts)
    lines = [Line(p, rng.normal(size=dim)) for p in pts]
    return make_config(pts, lines)


def random_lines(n, dim, seed):
    rng = np.random.default_rng(seed)
    return [Line(rng.uniform(0, 1, dim), rng.normal(size=dim)) for _ in range(n)]


@pytest.fixture
def rng():
    return np.random.default_rng(0)
