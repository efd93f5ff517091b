"""Community detection by recursive spectral bipartition.

The quality function is a plain double sum over ordered same-community
pairs of a modularity matrix M.  Two constructions of M are supported:

* standard: ``M_ij = a_ij - e_ij`` against any expected-links null;
* soft: ``M_ij = (e1_ij - e2_ij) / sqrt(s1_ij + s2_ij)`` contrasting two
  ensembles of the same graph, each pair weighted by its pooled ensemble
  standard deviation.

Each part is split by the sign pattern of the leading eigenvector of the
restricted matrix ``B_ij = M_ij - delta_ij * sum_l M_il`` (computed by
shifted power iteration), and the recursion continues until every part is
indivisible, even when a split does not increase Q; pass ``strict=True``
to accept only Q-improving splits.

Q values follow the ordered-pair convention (both (i,j) and (j,i) count),
twice the unordered sum; all comparisons here are internal so the overall
scale is immaterial.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .baselines import NGModel
from .ensemble import LinkProbabilityModel, link_stat_matrices
from .errors import PowerIterationError

log = logging.getLogger(__name__)

STANDARD = "standard"
SOFT = "soft"

POWER_TOL = 1e-10
POWER_MAX_ITER = 100_000


@dataclass(frozen=True)
class ModularityMatrix:
    """Validated dense symmetric matrix with zero diagonal."""

    matrix: np.ndarray
    kind: str
    clamped_pairs: int = 0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError("modularity matrix must be square and nonempty")
        if self.kind not in (STANDARD, SOFT):
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        if not np.all(np.isfinite(m)):
            raise ValueError("modularity matrix entries must be finite")
        if not np.allclose(m, m.T, rtol=1e-9, atol=1e-12):
            raise ValueError("modularity matrix must be symmetric")
        m = 0.5 * (m + m.T)
        np.fill_diagonal(m, 0.0)
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def n(self):
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Partition:
    """Node-to-community assignment with ids contiguous from 0.

    Ids are canonicalized by order of first appearance, so two partitions
    are equal iff they group the nodes identically.
    """

    assignment: np.ndarray

    def __post_init__(self):
        raw = np.asarray(self.assignment)
        if raw.ndim != 1 or raw.size == 0:
            raise ValueError("assignment must be a nonempty 1-d sequence")
        canon = np.empty(raw.size, dtype=np.int64)
        seen = {}
        for i, c in enumerate(raw.tolist()):
            canon[i] = seen.setdefault(c, len(seen))
        canon.flags.writeable = False
        object.__setattr__(self, "assignment", canon)

    @classmethod
    def from_groups(cls, groups, n):
        raw = np.full(n, -1, dtype=np.int64)
        for cid, members in enumerate(groups):
            for i in members:
                if raw[i] != -1:
                    raise ValueError(f"node {i} assigned twice")
                raw[i] = cid
        if np.any(raw == -1):
            raise ValueError("every node needs a community")
        return cls(raw)

    @property
    def n(self):
        return self.assignment.size

    @property
    def n_communities(self):
        return int(self.assignment.max()) + 1

    def members(self, c):
        return np.flatnonzero(self.assignment == c)

    def community_sets(self):
        return [frozenset(self.members(c).tolist()) for c in range(self.n_communities)]


@dataclass
class SplitNode:
    """One dendrogram node: a node subset and, if split, how it divided."""

    members: np.ndarray
    eigenvalue: float | None = None
    q_gain: float | None = None
    children: tuple | None = None
    reason: str = ""

    @property
    def is_leaf(self):
        return self.children is None

    def to_dict(self, labels=None):
        name = (
            [labels[i] for i in self.members.tolist()]
            if labels is not None
            else self.members.tolist()
        )
        out = {"size": int(self.members.size)}
        if self.is_leaf:
            out["members"] = name
            if self.reason:
                out["indivisible_because"] = self.reason
        else:
            out["eigenvalue"] = self.eigenvalue
            out["q_gain"] = self.q_gain
            out["children"] = [c.to_dict(labels) for c in self.children]
        return out


@dataclass
class Dendrogram:
    """Recursion record: the split tree plus the running Q bookkeeping.

    ``q_trace[0]`` is Q of the single all-node community; each accepted
    split appends the updated total.  Because splitting continues past the
    Q maximum, the best value seen (``q_best``) can exceed the final leaf
    value (``q_final``); both are kept.
    """

    root: SplitNode
    q_trace: list = field(default_factory=list)

    @property
    def q_initial(self):
        return self.q_trace[0]

    @property
    def q_final(self):
        return self.q_trace[-1]

    @property
    def q_best(self):
        return max(self.q_trace)

    def leaves(self):
        out = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def to_dict(self, labels=None):
        return {
            "q_initial": self.q_initial,
            "q_final": self.q_final,
            "q_best": self.q_best,
            "tree": self.root.to_dict(labels),
        }


def _expected_node_matrix(null, ranking=None, n=None):
    """Expected-links matrix in node-index order for either null family."""
    if isinstance(null, NGModel):
        e = null.expected_matrix()
    elif isinstance(null, LinkProbabilityModel):
        e = null.links * null.probability_matrix()
        if ranking is not None:
            pos = ranking.positions
            e = e[np.ix_(pos, pos)]
    else:
        raise TypeError(f"unsupported null model {type(null).__name__}")
    if n is not None and e.shape[0] != n:
        raise ValueError("null model size does not match the graph")
    return e


def standard_modularity_matrix(g, null, ranking=None):
    """Build M = a - e for graph ``g`` against a null's expected links.

    Rank-space ensembles need the ``ranking`` that ties ranks back to node
    indices; the degree-product null is already in node order.
    """
    if isinstance(null, LinkProbabilityModel) and ranking is None:
        raise ValueError("a ranked ensemble needs its ranking to address nodes")
    e = _expected_node_matrix(null, ranking, n=g.n)
    return ModularityMatrix(g.adjacency_matrix() - e, STANDARD)


def soft_modularity_matrix(model1, model2, ranking1=None, ranking2=None):
    """Build the variance-scaled contrast matrix of two ensembles.

    Entries are ``(e1 - e2) / sqrt(s1 + s2)`` with ``e = L p`` and
    ``s = L p (1 - p)``; pairs where both variances vanish get 0.  Each
    model is mapped to node order by its own ranking (pass none for both to
    stay in a shared rank space).  Pairs with p > 1 (possible for
    multigraph ensembles) have p clipped to 1 inside ``s`` only; the count
    is recorded on the result and logged.
    """
    if model1.n != model2.n:
        raise ValueError("models span different node counts")
    if model1.links != model2.links:
        raise ValueError("models disagree on the link count")
    if (ranking1 is None) != (ranking2 is None):
        raise ValueError("pass rankings for both models or for neither")

    e1, s1, c1 = link_stat_matrices(model1)
    e2, s2, c2 = link_stat_matrices(model2)
    if ranking1 is not None:
        ix1 = np.ix_(ranking1.positions, ranking1.positions)
        ix2 = np.ix_(ranking2.positions, ranking2.positions)
        e1, s1 = e1[ix1], s1[ix1]
        e2, s2 = e2[ix2], s2[ix2]
    clamped = c1 + c2
    if clamped:
        log.warning("clamped %d pair probabilities above 1 inside variances", clamped)
    denom = s1 + s2
    m = np.zeros_like(denom)
    mask = denom > 0.0
    m[mask] = (e1[mask] - e2[mask]) / np.sqrt(denom[mask])
    return ModularityMatrix(m, SOFT, clamped_pairs=clamped)


def modularity_value(mm, partition):
    """Q of a partition: sum of M over ordered same-community pairs."""
    m = getattr(mm, "matrix", mm)
    if partition.n != m.shape[0]:
        raise ValueError("partition size does not match the matrix")
    total = 0.0
    for c in range(partition.n_communities):
        idx = partition.members(c)
        total += float(m[np.ix_(idx, idx)].sum())
    return total


def _start_vector(n):
    """Deterministic, sign-varied start vector with no zero components."""
    t = np.arange(n, dtype=np.int64)
    return ((t * 2654435761 + 12345) % 1000003) / 1000003.0 + 0.5


def _sign_fixed(v):
    nz = np.flatnonzero(v != 0)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def _ritz_leading(shifted, v, dim=4):
    """Best eigenpair estimate from the Krylov space of the current iterate.

    When two leading eigenvalues nearly tie, the plain iterate oscillates
    inside their invariant subspace and its residual plateaus; projecting
    onto span{v, Bv, ...} and solving the tiny projected problem separates
    the cluster exactly.  Returns (ritz value, unit vector, residual).
    """
    basis = []
    w = v.copy()
    for _ in range(dim):
        for u in basis:
            w = w - (u @ w) * u
        for u in basis:  # second pass keeps the basis orthonormal
            w = w - (u @ w) * u
        norm_w = float(np.linalg.norm(w))
        if norm_w < 1e-12:
            break
        w = w / norm_w
        basis.append(w)
        w = shifted @ w
    if not basis:
        return None
    kmat = np.stack(basis, axis=1)
    smat = shifted @ kmat
    h = kmat.T @ smat
    vals, vecs = np.linalg.eigh(0.5 * (h + h.T))
    y = kmat @ vecs[:, -1]
    y = y / float(np.linalg.norm(y))
    mu = float(vals[-1])
    residual = float(np.max(np.abs(shifted @ y - mu * y)))
    return mu, y, residual


def _power_iteration(b, sigma, tol, max_iter, ritz_every=250):
    """Leading eigenpair of symmetric ``b`` via the shift ``b + sigma*I``.

    The shift makes the algebraically largest eigenvalue of ``b`` dominant
    in magnitude (all eigenvalues lie in [-sigma, sigma]).  Every
    ``ritz_every`` iterations a Rayleigh-Ritz extraction from the iterate's
    Krylov space is tried, which rescues (deterministically) the
    near-degenerate cases where the plain iteration stalls.  Returns the
    eigenvalue of ``b`` and a unit eigenvector normalized so its first
    nonzero component is positive.
    """
    shifted = b + sigma * np.eye(b.shape[0])
    v = _start_vector(b.shape[0])
    v /= np.linalg.norm(v)
    scale = tol * max(1.0, sigma)
    residual = np.inf
    for it in range(1, max_iter + 1):
        w = shifted @ v
        mu = float(v @ w)
        residual = float(np.max(np.abs(w - mu * v)))
        if residual <= scale:
            return mu - sigma, _sign_fixed(v)
        norm_w = float(np.linalg.norm(w))
        if norm_w == 0.0:
            # v sits exactly on the eigenvalue -sigma: maximally negative
            return -sigma, _sign_fixed(v)
        v = w / norm_w
        if it % ritz_every == 0:
            ritz = _ritz_leading(shifted, v)
            if ritz is not None and ritz[2] <= scale:
                return ritz[0] - sigma, _sign_fixed(ritz[1])
    ritz = _ritz_leading(shifted, v)
    if ritz is not None and ritz[2] <= scale:
        return ritz[0] - sigma, _sign_fixed(ritz[1])
    raise PowerIterationError(residual, max_iter)


@dataclass(frozen=True)
class SplitOutcome:
    """Result of one bipartition attempt; ``divisible`` gates the split."""

    divisible: bool
    eigenvalue: float | None = None
    q_gain: float | None = None
    signs: np.ndarray | None = None
    reason: str = ""


def spectral_bipartition(mm, members=None, tol=POWER_TOL, max_iter=POWER_MAX_ITER):
    """Try to split one part by the leading eigenvector's sign pattern.

    Builds the restricted matrix ``B_ij = M_ij - delta_ij sum_l M_il`` over
    ``members`` (all nodes when omitted).  Indivisible when the part has
    fewer than two nodes, the leading eigenvalue is not positive beyond
    tolerance, or the eigenvector does not change sign.  Zero eigenvector
    components land on the positive side.
    """
    m = getattr(mm, "matrix", mm)
    if members is None:
        members = np.arange(m.shape[0])
    else:
        members = np.unique(np.asarray(members, dtype=np.int64))
        if members.size and (members[0] < 0 or members[-1] >= m.shape[0]):
            raise ValueError("members out of range")
    if members.size < 2:
        return SplitOutcome(False, reason="fewer than two nodes")

    sub = m[np.ix_(members, members)]
    b = sub - np.diag(sub.sum(axis=1))
    sigma = float(np.abs(b).sum(axis=1).max())
    if sigma == 0.0:
        return SplitOutcome(False, eigenvalue=0.0, reason="zero restricted matrix")

    eigenvalue, vec = _power_iteration(b, sigma, tol, max_iter)
    if eigenvalue <= tol * max(1.0, sigma):
        return SplitOutcome(
            False, eigenvalue=eigenvalue, reason="no positive eigenvalue"
        )
    signs = np.where(vec >= 0.0, 1, -1).astype(np.int64)
    if np.all(signs == signs[0]):
        return SplitOutcome(
            False, eigenvalue=eigenvalue, reason="eigenvector does not change sign"
        )
    q_gain = 0.5 * float(signs @ b @ signs)
    return SplitOutcome(True, eigenvalue=eigenvalue, q_gain=q_gain, signs=signs)


def recursive_partition(mm, strict=False, tol=POWER_TOL, max_iter=POWER_MAX_ITER):
    """Split parts until all are indivisible; return the tree and partition.

    By default a part splits whenever its leading eigenvalue is positive,
    even if the Q contribution is not (the recursion deliberately runs past
    the Q maximum; the trace keeps both the best and the final value).
    With ``strict=True`` only Q-increasing splits are accepted.
    """
    m = getattr(mm, "matrix", mm)
    n = m.shape[0]
    root = SplitNode(members=np.arange(n))
    q_trace = [float(m.sum())]
    queue = [root]
    while queue:
        node = queue.pop(0)
        outcome = spectral_bipartition(mm, node.members, tol=tol, max_iter=max_iter)
        node.eigenvalue = outcome.eigenvalue
        if not outcome.divisible:
            node.reason = outcome.reason
            continue
        if strict and outcome.q_gain <= 0.0:
            node.reason = "split would not raise q"
            continue
        node.q_gain = outcome.q_gain
        keep = node.members[outcome.signs > 0]
        drop = node.members[outcome.signs < 0]
        node.children = (SplitNode(members=keep), SplitNode(members=drop))
        q_trace.append(q_trace[-1] + outcome.q_gain)
        queue.extend(node.children)

    dendrogram = Dendrogram(root, q_trace)
    groups = [leaf.members for leaf in dendrogram.leaves()]
    return dendrogram, Partition.from_groups(groups, n)
