import numpy as np
import pytest

from richnull.ensemble import compute_weights
from richnull.errors import SingularWeights
from richnull.graph import Graph, karate_club, kplus_from_graph, rank_nodes
from richnull.search import kplus_bounds


@pytest.fixture
def k3():
    return Graph([(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def s3():
    # hub 0 with three leaves
    return Graph([(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def p3():
    return Graph([(0, 1), (1, 2)])


@pytest.fixture
def two_triangles():
    return Graph([(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


@pytest.fixture(scope="session")
def karate():
    return karate_club()


def random_simple_graph(rng, n, density=None):
    """Random simple graph on n labeled nodes with at least one edge."""
    if density is None:
        density = rng.uniform(0.1, 0.6)
    while True:
        mask = np.triu(rng.random((n, n)) < density, 1)
        edges = [(int(i), int(j)) for i, j in zip(*np.nonzero(mask))]
        if edges:
            return Graph(edges, extra_nodes=range(n))


def observed_instance(g):
    """Ranked degree sequence and observed rich-club sequence of ``g``."""
    ranking = rank_nodes(g)
    k = g.degrees[ranking.order]
    kp = kplus_from_graph(g, ranking)
    return k, kp.values, ranking


def enumerate_feasible_kplus(k, mode):
    """Every weight-feasible rich-club sequence within the mode bounds.

    Exhaustive DFS over ranks with a remaining-capacity prune; sequences
    rejected by the weight recursion are skipped.  Only viable for tiny N.
    """
    k = np.asarray(k, dtype=np.int64)
    bounds = kplus_bounds(k, mode)
    links = int(k.sum()) // 2
    capacity_left = np.concatenate((np.cumsum(bounds[::-1])[::-1], [0]))
    found = []

    def walk(rank, remaining, acc):
        if rank == k.size:
            if remaining == 0:
                kp = np.array(acc, dtype=np.int64)
                try:
                    compute_weights(k, kp)
                except SingularWeights:
                    return
                found.append(kp)
            return
        if remaining > capacity_left[rank]:
            return
        for v in range(min(int(bounds[rank]), remaining) + 1):
            acc.append(v)
            walk(rank + 1, remaining - v, acc)
            acc.pop()

    walk(0, links, [])
    return found


def brute_force_best_split(m):
    """Best single-bipartition Q gain over all 2^(n-1) proper sign patterns."""
    n = m.shape[0]
    b = m - np.diag(m.sum(axis=1))
    best_gain = -np.inf
    best_signs = None
    for mask in range(1, 2 ** (n - 1)):
        signs = np.fromiter(
            ((1 if (mask >> t) & 1 else -1) for t in range(n)), dtype=np.int64, count=n
        )
        gain = 0.5 * float(signs @ b @ signs)
        if gain > best_gain:
            best_gain = gain
            best_signs = signs
    return best_gain, best_signs
