import numpy as np
import pytest

from stochcover.instance import KCenterInstance, generate_random_tree
from stochcover.tree import all_pairs_distances, build_rooted_tree


def path3(probs=(1.0, 1.0, 1.0), w=(1.0, 1.0)):
    return KCenterInstance(3, ((0, 1, w[0]), (1, 2, w[1])), tuple(probs))


def metric(inst, root=None):
    tree = build_rooted_tree(inst, root)
    return tree, all_pairs_distances(tree)


def random_trees(count, n_lo, n_hi, seed=0, **laws):
    """Seeded stream of (instance, k) pairs with n in [n_lo, n_hi]."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        n = int(rng.integers(n_lo, n_hi + 1))
        yield generate_random_tree(n, int(rng.integers(1 << 30)), **laws), int(rng.integers(0, 4))


@pytest.fixture
def path_instance():
    return path3()
