"""Simple undirected graphs, degree rankings, and rich-club sequences.

A :class:`Graph` keeps contiguous internal indices ``0..N-1`` alongside the
original node labels, so downstream reports can speak in the input's own ids
(e.g. airport codes) while all numerics run on dense arrays.

Ranks throughout the package are 0-based positions in a :class:`Ranking`
(rank 0 is the highest-degree node).  The rich-club sequence ``kplus`` stores,
for each rank ``r``, the number of links that node has to strictly
higher-ranked (lower ``r``) nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import EdgeListError

OBSERVED = "observed"
ME2 = "me2"
ME3 = "me3"
_KPLUS_MODES = (OBSERVED, ME2, ME3)


class Graph:
    """Immutable simple undirected graph.

    Parameters
    ----------
    edges : iterable of (label, label)
        Unordered pairs of node labels. Labels are either all ints or all
        strings; internal indices are assigned in ascending label order so
        the default pipeline is reproducible without a seed.
    extra_nodes : iterable of labels, optional
        Labels that must appear in the graph even if isolated.
    """

    __slots__ = ("n", "labels", "edges", "adj", "degrees", "_index")

    def __init__(self, edges, extra_nodes=()):
        edges = [tuple(e) for e in edges]
        labels = set(extra_nodes)
        for u, v in edges:
            labels.add(u)
            labels.add(v)
        if not labels:
            raise ValueError("graph must have at least one node")
        self.labels = tuple(sorted(labels))
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self.n = len(self.labels)

        seen = set()
        index_edges = []
        for u, v in edges:
            i, j = self._index[u], self._index[v]
            if i == j:
                raise ValueError(f"self-loop at node {u!r}")
            key = (i, j) if i < j else (j, i)
            if key in seen:
                raise ValueError(f"duplicate edge {u!r}-{v!r}")
            seen.add(key)
            index_edges.append(key)
        self.edges = tuple(sorted(index_edges))

        adj = [set() for _ in range(self.n)]
        degrees = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
            degrees[i] += 1
            degrees[j] += 1
        self.adj = tuple(frozenset(s) for s in adj)
        degrees.flags.writeable = False
        self.degrees = degrees

    @property
    def edge_count(self):
        """Number of links L; equals half the degree sum."""
        return len(self.edges)

    def index_of(self, label):
        return self._index[label]

    def label_of(self, index):
        return self.labels[index]

    def adjacency_matrix(self):
        """Dense symmetric 0/1 adjacency matrix in node-index order."""
        a = np.zeros((self.n, self.n))
        for i, j in self.edges:
            a[i, j] = a[j, i] = 1.0
        return a

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class Multigraph:
    """Edge multiset with fixed node count; self-loops are still forbidden.

    Used for randomized and sampled networks where parallel edges may occur.
    """

    n: int
    edges: tuple
    labels: tuple | None = None

    def __post_init__(self):
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at node index {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")

    @property
    def degrees(self):
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def is_simple(self):
        return len(set(self.edges)) == len(self.edges)

    def label_of(self, index):
        return self.labels[index] if self.labels is not None else index


def load_edge_list(source, allow_string_ids=False):
    """Parse an edge-list text into a :class:`Graph`.

    One edge per line (``"u v"``), ``#`` starts a comment line, blank lines
    are skipped.  Node ids must be non-negative integers unless
    ``allow_string_ids`` is set, in which case tokens are kept verbatim.

    Raises
    ------
    EdgeListError
        On non-integer tokens (in integer mode), wrong token count,
        self-loops, or duplicate edges; the message carries the line number.
    """
    if isinstance(source, str):
        lines = source.splitlines()
    else:
        lines = [line.rstrip("\n") for line in source]

    edges = []
    seen = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(
                f"expected two node ids, got {len(tokens)}: {line!r}", lineno
            )
        if allow_string_ids:
            u, v = tokens
        else:
            try:
                u, v = int(tokens[0]), int(tokens[1])
            except ValueError:
                raise EdgeListError(f"non-integer node id in {line!r}", lineno)
            if u < 0 or v < 0:
                raise EdgeListError(f"negative node id in {line!r}", lineno)
        if u == v:
            raise EdgeListError(f"self-loop {u!r}-{v!r}", lineno)
        key = (u, v) if u <= v else (v, u)
        if key in seen:
            raise EdgeListError(
                f"duplicate edge {u!r}-{v!r} (first seen at line {seen[key]})",
                lineno,
            )
        seen[key] = lineno
        edges.append((u, v))
    if not edges:
        raise EdgeListError("edge list contains no edges")
    return Graph(edges)


def karate_club():
    """The bundled Zachary karate club graph (34 nodes, 78 edges)."""
    text = resources.files("richnull.data").joinpath("karate.edges").read_text()
    return load_edge_list(text)


class Ranking:
    """Permutation of node indices in nonincreasing degree order.

    ``order[r]`` is the node index at rank ``r`` (rank 0 = highest degree);
    ``positions[node]`` is the inverse map.  Equal-degree ties are broken by
    ascending node index under the deterministic policy, or permuted by a
    seeded generator under the random policy.
    """

    __slots__ = ("order", "positions", "policy", "seed")

    def __init__(self, order, policy, seed=None):
        order = np.asarray(order, dtype=np.int64)
        n = order.size
        if not np.array_equal(np.sort(order), np.arange(n)):
            raise ValueError("order must be a permutation of 0..N-1")
        positions = np.empty(n, dtype=np.int64)
        positions[order] = np.arange(n)
        order.flags.writeable = False
        positions.flags.writeable = False
        self.order = order
        self.positions = positions
        self.policy = policy
        self.seed = seed

    def __len__(self):
        return self.order.size

    def __repr__(self):
        return f"Ranking(n={len(self)}, policy={self.policy!r})"


def rank_nodes(g, policy="deterministic", seed=None):
    """Rank nodes by nonincreasing degree.

    ``policy="deterministic"`` breaks equal-degree ties by ascending node
    index (ascending original id); ``policy="random"`` permutes each
    equal-degree block with ``numpy.random.default_rng(seed)``, making the
    ranking reproducible for a fixed seed.
    """
    if policy not in ("deterministic", "random"):
        raise ValueError(f"unknown ranking policy {policy!r}")
    deg = g.degrees
    order = np.lexsort((np.arange(g.n), -deg))
    if policy == "random":
        rng = np.random.default_rng(seed)
        order = order.copy()
        start = 0
        while start < g.n:
            stop = start
            d = deg[order[start]]
            while stop < g.n and deg[order[stop]] == d:
                stop += 1
            if stop - start > 1:
                order[start:stop] = rng.permutation(order[start:stop])
            start = stop
    ranking = Ranking(order, policy, seed)
    assert np.all(np.diff(deg[ranking.order]) <= 0)
    return ranking


@dataclass(frozen=True, eq=False)
class KPlusSequence:
    """Per-rank counts of links to strictly higher-ranked nodes.

    ``values[r]`` is the number of links the rank-``r`` node has to nodes of
    rank ``< r``; the first entry is always 0 and the values sum to L.  The
    ``mode`` records how the sequence was obtained: measured from a graph
    (``"observed"``), or optimized under single-link (``"me2"``) or
    multigraph (``"me3"``) bounds.
    """

    values: np.ndarray
    mode: str = OBSERVED

    def __post_init__(self):
        values = np.array(self.values, dtype=np.int64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("kplus values must be a nonempty 1-d sequence")
        if self.mode not in _KPLUS_MODES:
            raise ValueError(f"unknown kplus mode {self.mode!r}")
        if values[0] != 0:
            raise ValueError("kplus[0] must be 0: rank 0 has no higher rank")
        if np.any(values < 0):
            raise ValueError("kplus values must be nonnegative")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def total(self):
        return int(self.values.sum())

    def validate_against(self, degrees):
        """Check the mode-specific bounds against ranked degrees ``degrees``.

        Raises ValueError on violation; returns self for chaining.
        """
        k = np.asarray(degrees)
        v = self.values
        if k.shape != v.shape:
            raise ValueError("degree and kplus shapes differ")
        if np.any(v > k):
            raise ValueError("kplus exceeds degree at some rank")
        if self.mode == ME2 and np.any(v > np.arange(v.size)):
            raise ValueError("me2 kplus exceeds rank bound r-1 at some rank")
        if 2 * self.total != int(k.sum()):
            raise ValueError("kplus does not sum to the link count L")
        return self


def kplus_from_graph(g, ranking):
    """Measure the observed rich-club sequence of ``g`` under ``ranking``."""
    if len(ranking) != g.n:
        raise ValueError("ranking size does not match graph")
    pos = ranking.positions
    values = np.zeros(g.n, dtype=np.int64)
    for r, node in enumerate(ranking.order):
        values[r] = sum(1 for nb in g.adj[node] if pos[nb] < r)
    kp = KPlusSequence(values, OBSERVED)
    assert kp.total == g.edge_count
    return kp


def rich_club_coefficient(kp, r):
    """Link density among the top ``r`` ranked nodes.

    ``r`` is a count of nodes (at least 2).  Returns
    ``2/(r*(r-1)) * sum(kplus[:r])``, which exceeds 1 only for multigraph
    sequences.
    """
    if r < 2:
        raise ValueError("rich-club coefficient needs at least 2 nodes")
    if r > kp.values.size:
        raise ValueError(f"r={r} exceeds sequence length {kp.values.size}")
    return 2.0 * float(kp.values[:r].sum()) / (r * (r - 1))


def cutoff_degree(g):
    """Degree scale sqrt(2L) above which single-link constraints bite."""
    if g.edge_count < 1:
        raise ValueError("cutoff degree undefined for an empty graph")
    return math.sqrt(2.0 * g.edge_count)
