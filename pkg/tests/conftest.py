import math

import numpy as np
import pytest

from qwcount import BipartiteInstance


@pytest.fixture
def fig2():
    """K_{4,3} with two marks in part 0 and one in part 1, the flagship instance."""
    return BipartiteInstance(4, 3, frozenset({1, 3}), frozenset({1}))


def iter_count_instances(n_max, include_empty=True):
    """All canonical-marked instances with part sizes up to n_max."""
    for n0 in range(1, n_max + 1):
        for n1 in range(1, n_max + 1):
            for k0 in range(n0 + 1):
                for k1 in range(n1 + 1):
                    if not include_empty and k0 + k1 == 0:
                        continue
                    yield BipartiteInstance.from_counts(n0, n1, k0, k1)


def random_instances(count, n_max, seed):
    """Seeded random instances with arbitrary (non-canonical) marked sets."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n0 = int(rng.integers(1, n_max + 1))
        n1 = int(rng.integers(1, n_max + 1))
        marked0 = frozenset(int(v) for v in rng.choice(n0, size=int(rng.integers(0, n0 + 1)), replace=False))
        marked1 = frozenset(int(v) for v in rng.choice(n1, size=int(rng.integers(0, n1 + 1)), replace=False))
        out.append(BipartiteInstance(n0, n1, marked0, marked1))
    return out


def rotation(theta):
    """2x2 real rotation by theta, as a complex matrix."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)
