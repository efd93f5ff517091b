"""Partition stability under randomized degree rankings.

Nodes of equal degree have no canonical rank order, yet the ensembles are
built from a specific ranking.  To separate genuine structure from rank
artifacts, the full pipeline (rank -> rich-club sequence -> ensemble ->
partition) is repeated over many random tie permutations; pairs of nodes
that land in the same community in every run and share an actual link form
the invariant cores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .baselines import newman_girvan
from .communities import (
    recursive_partition,
    soft_modularity_matrix,
    standard_modularity_matrix,
)
from .ensemble import LinkProbabilityModel
from .errors import RichNullError
from .graph import ME2, ME3, kplus_from_graph, rank_nodes
from .search import MAXIMIZE, MINIMIZE, SearchConfig, greedy_search

ME1 = "me1"
NG = "ng"
_ENSEMBLE_TAGS = (ME1, ME2, ME3)


@dataclass(frozen=True)
class ModelRecipe:
    """How to build the null(s) for each randomized-rank run.

    ``null`` picks the primary model; setting ``null2`` switches to the
    soft two-ensemble contrast, which only makes sense between ranked
    ensembles (the degree-product null has no rank dependence).
    """

    null: str
    null2: str | None = None
    direction: str = MAXIMIZE
    stall_limit: int | None = None
    max_proposals: int | None = None
    strict_splits: bool = False

    def __post_init__(self):
        if self.null not in _ENSEMBLE_TAGS + (NG,):
            raise ValueError(f"unknown null {self.null!r}")
        if self.null2 is not None:
            if self.null2 not in _ENSEMBLE_TAGS:
                raise ValueError("soft contrast needs a ranked ensemble as null2")
            if self.null not in _ENSEMBLE_TAGS:
                raise ValueError("soft contrast needs ranked ensembles on both sides")
        if self.direction not in (MAXIMIZE, MINIMIZE):
            raise ValueError(f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class RunFailure:
    """One failed pipeline run, kept so failures are visible in reports."""

    index: int
    error: str
    message: str


@dataclass(frozen=True)
class RunSet:
    """All partitions (and failures) from one batch of randomized runs."""

    partitions: tuple
    failures: tuple
    run_count: int
    master_seed: int | None

    @property
    def successful(self):
        return len(self.partitions)


def _build_ensemble(g, tag, ranking, recipe, rng):
    k = g.degrees[ranking.order]
    if tag == ME1:
        kp = kplus_from_graph(g, ranking)
    else:
        cfg = SearchConfig(
            mode=tag,
            direction=recipe.direction,
            seed=rng,
            stall_limit=recipe.stall_limit,
            max_proposals=recipe.max_proposals,
        )
        kp = greedy_search(k, cfg).kplus
    return LinkProbabilityModel(k, kp.values, tag=tag)


def run_pipeline(g, recipe, seed=None):
    """One full run: random tie-broken ranking through to a partition."""
    rng = np.random.default_rng(seed)
    ranking = rank_nodes(g, policy="random", seed=rng)
    if recipe.null == NG:
        matrix = standard_modularity_matrix(g, newman_girvan(g))
    elif recipe.null2 is None:
        model = _build_ensemble(g, recipe.null, ranking, recipe, rng)
        matrix = standard_modularity_matrix(g, model, ranking=ranking)
    else:
        model1 = _build_ensemble(g, recipe.null, ranking, recipe, rng)
        model2 = _build_ensemble(g, recipe.null2, ranking, recipe, rng)
        matrix = soft_modularity_matrix(model1, model2, ranking, ranking)
    _, partition = recursive_partition(matrix, strict=recipe.strict_splits)
    return partition


def randomized_rank_runs(g, recipe, runs=100, master_seed=None):
    """Run the pipeline ``runs`` times with per-run seeds spawned from one root.

    Child seeds come from ``numpy.random.SeedSequence(master_seed).spawn``,
    so the first R runs are identical whenever the master seed matches,
    regardless of how many more runs follow.  Failed runs are collected,
    never silently dropped.
    """
    if runs < 1:
        raise ValueError("need at least one run")
    children = np.random.SeedSequence(master_seed).spawn(runs)
    partitions = []
    failures = []
    for i, child in enumerate(children):
        try:
            partitions.append(run_pipeline(g, recipe, seed=child))
        except RichNullError as exc:
            failures.append(RunFailure(i, type(exc).__name__, str(exc)))
    return RunSet(tuple(partitions), tuple(failures), runs, master_seed)


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Counts of runs in which each node pair shared a community."""

    counts: np.ndarray
    run_count: int

    def __post_init__(self):
        c = np.asarray(self.counts, dtype=np.int64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ValueError("counts must be square")
        if not np.array_equal(c, c.T):
            raise ValueError("counts must be symmetric")
        if np.any(c < 0) or np.any(c > self.run_count):
            raise ValueError("counts must lie in [0, run_count]")
        if not np.all(np.diag(c) == self.run_count):
            raise ValueError("diagonal must equal the run count")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    @property
    def n(self):
        return self.counts.shape[0]


def cooccurrence(partitions):
    """Count, per node pair, the runs that put both in one community."""
    partitions = list(partitions)
    if not partitions:
        raise ValueError("need at least one partition")
    n = partitions[0].n
    counts = np.zeros((n, n), dtype=np.int64)
    for part in partitions:
        if part.n != n:
            raise ValueError("partitions cover different node sets")
        for c in range(part.n_communities):
            idx = part.members(c)
            counts[np.ix_(idx, idx)] += 1
    return CooccurrenceMatrix(counts, len(partitions))


def invariant_cores(cm, g, threshold=1.0):
    """Groups of nodes that stick together across runs and share links.

    Keeps the pairs whose co-occurrence count reaches ``threshold`` (a
    fraction of the run count; 1.0 means every single run) and which are
    also edges of ``g``, then returns the connected components of size at
    least 2 of that pair graph, ordered by smallest member.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    if cm.n != g.n:
        raise ValueError("co-occurrence matrix does not match the graph")
    required = int(np.ceil(threshold * cm.run_count))
    adj = [[] for _ in range(g.n)]
    for i, j in g.edges:
        if cm.counts[i, j] >= required:
            adj[i].append(j)
            adj[j].append(i)
    seen = np.zeros(g.n, dtype=bool)
    cores = []
    for start in range(g.n):
        if seen[start] or not adj[start]:
            continue
        stack = [start]
        seen[start] = True
        component = []
        while stack:
            node = stack.pop()
            component.append(node)
            for nb in adj[node]:
                if not seen[nb]:
                    seen[nb] = True
                    stack.append(nb)
        if len(component) >= 2:
            cores.append(frozenset(component))
    return cores
