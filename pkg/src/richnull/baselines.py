"""Classical null models: expected-link formula and link-swap randomization.

Two families live here.  :class:`NGModel` is the closed-form null where the
expected number of links between nodes ``i`` and ``j`` is
``k_i * k_j / (2L)``; it is only meaningful while every pair expectation
stays below one, hence the ``k_max < sqrt(2L)`` gate.  ``rr_randomize``
instead rewires an actual graph by degree-preserving double-edge swaps,
either keeping the result simple (``RR1``) or allowing multi-links but
never self-loops (``RR2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleNG
from .graph import Graph, Multigraph

RR1 = "rr1"
RR2 = "rr2"


class NGModel:
    """Degree-product expected links, e_ij = k_i k_j / (2L).

    Indexed by node position (not rank); the diagonal is defined as 0
    because the ensemble has no self-loops.
    """

    __slots__ = ("k", "links", "tag")

    def __init__(self, degrees):
        k = np.array(degrees, dtype=np.int64)
        if k.ndim != 1 or k.size == 0 or np.any(k < 0):
            raise ValueError("need a nonnegative 1-d degree sequence")
        total = int(k.sum())
        if total % 2 != 0:
            raise ValueError("degree sum must be even")
        links = total // 2
        if links < 1:
            raise ValueError("model undefined without links")
        kmax = int(k.max())
        if kmax * kmax >= 2 * links:
            raise InfeasibleNG(
                f"k_max = {kmax} is not below sqrt(2L) = {math.sqrt(2 * links):.4f}; "
                "the expected-link formula would exceed one link per pair"
            )
        k.flags.writeable = False
        self.k = k
        self.links = links
        self.tag = "ng"

    @property
    def n(self):
        return self.k.size

    def expected(self, i, j):
        if i == j:
            return 0.0
        return float(self.k[i] * self.k[j]) / (2.0 * self.links)

    def expected_matrix(self):
        e = np.outer(self.k, self.k) / (2.0 * self.links)
        np.fill_diagonal(e, 0.0)
        return e

    def expected_row_sum(self, i):
        """Sum of expected links at node i: k_i (sum(k) - k_i) / (2L).

        This is close to but not exactly k_i; the discrepancy is inherent
        to the formula and deliberately not corrected.
        """
        return float(self.k[i]) * float(self.k.sum() - self.k[i]) / (2.0 * self.links)


def newman_girvan(g):
    """Build the degree-product null for ``g`` (node-index order)."""
    return NGModel(g.degrees)


def expected_self_loops(k, mean_degree, n):
    """Expected self-loop count k^2 / (<k> N) under free stub pairing."""
    if n < 1:
        raise ValueError("need at least one node")
    if mean_degree <= 0:
        raise ValueError("mean degree must be positive")
    return float(k) ** 2 / (float(mean_degree) * float(n))


@dataclass(frozen=True)
class RRConfig:
    """Settings for one randomization run.

    ``swap_attempts`` defaults to 20 times the link count when left None.
    """

    variant: str
    swap_attempts: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.variant not in (RR1, RR2):
            raise ValueError(f"variant must be rr1 or rr2, got {self.variant!r}")
        if self.swap_attempts is not None and self.swap_attempts < 1:
            raise ValueError("swap_attempts must be at least 1")


def rr_randomize(g, cfg):
    """Degree-preserving link-swap randomization of ``g``.

    Repeatedly proposes double-edge swaps (a,b),(c,d) -> (a,d),(c,b) with
    random orientation and keeps only swaps that create no self-loop, and
    for RR1 no duplicate link either.  Returns a :class:`Graph` for RR1 and
    a :class:`Multigraph` for RR2, both with the exact input degrees.
    """
    links = g.edge_count
    if links < 2:
        raise ValueError("need at least two links to swap")
    attempts = cfg.swap_attempts if cfg.swap_attempts is not None else 20 * links
    rng = np.random.default_rng(cfg.seed)

    edges = [list(e) for e in g.edges]
    simple = cfg.variant == RR1
    present = {tuple(e) for e in edges} if simple else None

    for _ in range(attempts):
        e1 = int(rng.integers(links))
        e2 = int(rng.integers(links - 1))
        if e2 >= e1:
            e2 += 1
        a, b = edges[e1]
        c, d = edges[e2]
        if rng.integers(2):
            a, b = b, a
        if rng.integers(2):
            c, d = d, c
        # proposed replacement: (a,d) and (c,b)
        if a == d or c == b:
            continue
        new1 = (a, d) if a < d else (d, a)
        new2 = (c, b) if c < b else (b, c)
        if simple:
            if new1 == new2 or new1 in present or new2 in present:
                continue
            present.discard(tuple(sorted((a, b))))
            present.discard(tuple(sorted((c, d))))
            present.add(new1)
            present.add(new2)
        edges[e1] = list(new1)
        edges[e2] = list(new2)

    if simple:
        label_edges = [(g.label_of(i), g.label_of(j)) for i, j in edges]
        return Graph(label_edges, extra_nodes=g.labels)
    return Multigraph(g.n, tuple(tuple(e) for e in edges), labels=g.labels)
