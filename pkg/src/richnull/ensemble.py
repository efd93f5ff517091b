"""Maximum-entropy link ensembles constrained by degrees and rich-club links.

Given ranked degrees ``k`` (nonincreasing) and a rich-club sequence
``kplus`` summing to the link count L, the maximally unbiased ensemble
assigns each unordered pair of ranks ``i < j`` the link probability

    p(i, j) = residuals[i] / prefix[j] * kplus[j] / L

where ``residuals[m] = w[m] * (k[m] - kplus[m])`` and ``prefix[j]`` is the
sum of residuals below rank ``j``.  The positive weights ``w`` follow a
recursion chosen so that the ensemble satisfies the soft constraints: the
expected degree of every rank equals ``k[r]`` and the expected number of
links to higher ranks equals ``kplus[r]``.  The expected link count of a
pair is ``e = L * p`` with variance ``s = L * p * (1 - p)``.

Probabilities are evaluated lazily row-by-row from the O(N) weight arrays,
so no N x N matrix is ever required unless explicitly asked for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularWeights
from .graph import ME2, ME3, OBSERVED, KPlusSequence, Multigraph

_TAG_FOR_MODE = {OBSERVED: "me1", ME2: "me2", ME3: "me3"}


def _kplus_values(kplus):
    """Accept a KPlusSequence or a plain integer sequence."""
    values = getattr(kplus, "values", kplus)
    return np.ascontiguousarray(values, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Recursive pair weights and their running sums.

    ``w[m]`` is stored for 0-based ranks ``m <= N-2`` only: the pair
    probabilities never reference the last weight, and it is singular even
    on perfectly valid inputs (e.g. a complete triangle).  Ranks at and past
    the last linked one get placeholder entries (``w`` infinite, residual 0)
    so the arrays keep their documented shapes when isolated nodes trail
    the ranking.

    ``residuals[m] = w[m] * (k[m] - kplus[m])`` is the weighted count of
    stubs rank ``m`` has left for lower-ranked partners, and
    ``prefix[j] = sum(residuals[:j])`` (so ``prefix[0] = 0``).
    """

    w: np.ndarray
    residuals: np.ndarray
    prefix: np.ndarray

    def __post_init__(self):
        for arr in (self.w, self.residuals, self.prefix):
            arr.flags.writeable = False


def compute_weights(k, kplus):
    """Run the weight recursion for ``(k, kplus)``.

    Starting from ``w[0] = 1``, each step divides by
    ``prefix[m] - kplus[m] * w[m-1]``; a zero or negative denominator means
    no ensemble satisfies the constraints and raises
    :class:`SingularWeights` with the offending 1-based rank.
    """
    k = np.ascontiguousarray(k, dtype=np.int64)
    kp = _kplus_values(kplus)
    n = k.size
    if n < 2:
        raise ValueError("need at least two ranked nodes")
    if kp.size != n:
        raise ValueError("degree and kplus sequences differ in length")
    if np.any(np.diff(k) > 0):
        raise ValueError("degrees must be nonincreasing along ranks")
    if kp[0] != 0 or np.any(kp < 0) or np.any(kp > k):
        raise ValueError("kplus must satisfy 0 <= kplus <= k and kplus[0] == 0")
    total = int(k.sum())
    if total % 2 != 0:
        raise ValueError("degree sum must be even")
    links = total // 2
    if links < 1:
        raise ValueError("ensemble undefined for an empty network")
    if int(kp.sum()) != links:
        raise ValueError("kplus must sum to the link count L")

    # ranks past the last linked one are inert: their kplus is 0, they carry
    # no residual stubs, and the recursion denominator at the last linked
    # rank itself is identically zero (all its degree points upward), so the
    # recursion must stop one short of it exactly as it does at rank N-1
    n_eff = int(np.count_nonzero(k))

    w = [1.0]
    residuals = [float(k[0])]  # kplus[0] == 0
    prefix = [0.0, float(k[0])]
    with np.errstate(over="ignore"):  # overflow is reported as SingularWeights
        for m in range(1, n_eff - 1):
            g = prefix[m]
            denom = g - kp[m] * w[m - 1]
            if denom <= 0.0:
                raise SingularWeights(m + 1, f"denominator {denom:.6g}")
            wm = w[m - 1] * g / denom
            if not math.isfinite(wm):
                raise SingularWeights(m + 1, "weight overflow")
            w.append(wm)
            residuals.append(wm * (k[m] - kp[m]))
            prefix.append(g + residuals[m])
    # the closing rank's own weight is never referenced, but its implicit
    # denominator is w * (kplus - k): unless every link of the last linked
    # rank points upward, the ensemble underfills every degree constraint
    if kp[n_eff - 1] != k[n_eff - 1]:
        raise SingularWeights(n_eff, "last linked rank not saturated")
    for m in range(n_eff - 1, n - 1):
        w.append(math.inf)
        residuals.append(0.0)
        prefix.append(prefix[m])
    return WeightSequence(
        np.array(w), np.array(residuals), np.array(prefix)
    )


class LinkProbabilityModel:
    """Lazily evaluated symmetric pair probabilities for one ensemble.

    Immutable once built; evaluation methods are pure and safe to call
    concurrently.  All ``i``/``j`` arguments are 0-based ranks.
    """

    __slots__ = ("k", "kplus", "weights", "links", "tag")

    def __init__(self, k, kplus, tag=None):
        self.k = np.array(k, dtype=np.int64)
        self.k.flags.writeable = False
        if not isinstance(kplus, KPlusSequence):
            kplus = KPlusSequence(_kplus_values(kplus), OBSERVED)
        self.kplus = kplus
        self.weights = compute_weights(self.k, kplus)
        self.links = int(self.k.sum()) // 2
        self.tag = tag if tag is not None else _TAG_FOR_MODE[kplus.mode]

    @property
    def n(self):
        return self.k.size

    def probability(self, i, j):
        """Link probability of the rank pair ``(i, j)``; zero never pairs."""
        if i == j:
            raise ValueError("pair probability undefined on the diagonal")
        if i > j:
            i, j = j, i
        if not (0 <= i < j < self.n):
            raise IndexError("rank out of range")
        kp_j = self.kplus.values[j]
        if kp_j == 0:
            return 0.0
        ws = self.weights
        return ws.residuals[i] * kp_j / (ws.prefix[j] * self.links)

    def expected(self, i, j):
        """Expected link count e = L * p of the pair."""
        return self.links * self.probability(i, j)

    def variance(self, i, j):
        """Variance s = L * p * (1 - p) of the pair's link count."""
        p = self.probability(i, j)
        return self.links * p * (1.0 - p)

    def row(self, i):
        """Vector of p(i, j) over all j, with the diagonal entry 0."""
        if not (0 <= i < self.n):
            raise IndexError("rank out of range")
        ws = self.weights
        kp = self.kplus.values
        out = np.zeros(self.n)
        if i < self.n - 1:
            j = np.arange(i + 1, self.n)
            out[j] = ws.residuals[i] * kp[j] / (ws.prefix[j] * self.links)
        if i > 0:
            # same multiply-then-divide order as the j > i branch, so the
            # probability matrix is symmetric to the last ulp
            j = np.arange(i)
            out[j] = ws.residuals[j] * kp[i] / (ws.prefix[i] * self.links)
        return out

    def upper_row(self, i):
        """Vector of p(i, j) for j > i only (empty for the last rank)."""
        if i >= self.n - 1:
            return np.zeros(0)
        ws = self.weights
        kp = self.kplus.values
        j = np.arange(i + 1, self.n)
        return ws.residuals[i] * kp[j] / (ws.prefix[j] * self.links)

    def probability_matrix(self):
        """Dense symmetric N x N matrix of pair probabilities (O(N^2))."""
        return np.vstack([self.row(i) for i in range(self.n)])

    def expected_degree(self, i):
        return self.links * float(self.row(i).sum())

    def __repr__(self):
        return (
            f"LinkProbabilityModel(n={self.n}, links={self.links}, "
            f"tag={self.tag!r})"
        )


@dataclass(frozen=True)
class ConstraintResiduals:
    """Worst-case deviation of the ensemble means from the constraints."""

    degree: float
    rich_club: float

    @property
    def worst(self):
        return max(self.degree, self.rich_club)

    def as_dict(self):
        return {"degree": self.degree, "rich_club": self.rich_club}


def verify_soft_constraints(model):
    """Measure how far expected degrees and rich-club counts drift.

    Returns the maxima over ranks of ``|L * sum_j p(r, j) - k[r]|`` and
    ``|L * sum_{j<r} p(r, j) - kplus[r]|``; both are construction-exact and
    should sit at float rounding level.
    """
    deg_res = 0.0
    kplus_res = 0.0
    links = model.links
    for i in range(model.n):
        row = model.row(i)
        deg_res = max(deg_res, abs(links * row.sum() - model.k[i]))
        kplus_res = max(
            kplus_res, abs(links * row[:i].sum() - model.kplus.values[i])
        )
    return ConstraintResiduals(deg_res, kplus_res)


def total_probability(model):
    """Honest O(N^2) evaluation of ``sum_{i<j} p(i, j)`` (identically 1)."""
    return float(sum(model.upper_row(i).sum() for i in range(model.n - 1)))


def entropy_naive(model):
    """Pair-distribution entropy in nats by direct double sum.

    ``S = -2 * sum_{i<j} p log p`` with the convention ``0 log 0 = 0``.
    Serves as the reference implementation for :func:`entropy_fast`.
    """
    total = 0.0
    for i in range(model.n - 1):
        p = model.upper_row(i)
        p = p[p > 0.0]
        total += float(np.sum(p * np.log(p)))
    return -2.0 * total


def entropy_fast(k, kplus):
    """Pair-distribution entropy in nats in O(N) after the weight pass.

    Factorizes the double sum into per-rank terms
    ``(residuals[i]/L) log(residuals[i]/L)`` against two suffix
    accumulators over ``ratio[j] = kplus[j]/prefix[j]``:
    a plain suffix sum and a suffix sum of ``ratio log ratio``.
    Raises :class:`SingularWeights` when the weights do not exist.
    """
    k = np.ascontiguousarray(k, dtype=np.int64)
    kp = _kplus_values(kplus)
    ws = compute_weights(k, kp)
    n = k.size
    links = int(k.sum()) // 2

    ratio = np.zeros(n)
    ratio[1:] = kp[1:] / ws.prefix[1:]
    ratio_log = np.where(ratio > 0.0, ratio * np.log(np.maximum(ratio, 1e-300)), 0.0)
    # suffix[i] = sum over j > i; the last rank has an empty suffix
    suffix_a = np.concatenate((np.cumsum(ratio[::-1])[::-1][1:], [0.0]))
    suffix_b = np.concatenate((np.cumsum(ratio_log[::-1])[::-1][1:], [0.0]))

    f_norm = ws.residuals / links
    active = f_norm > 0.0
    log_f = np.zeros(n - 1)
    log_f[active] = np.log(f_norm[active])
    total = np.sum(f_norm * log_f * suffix_a[: n - 1]) + np.sum(
        f_norm * suffix_b[: n - 1]
    )
    return -2.0 * float(total)


def expected_multiedge_pairs(model):
    """Pairs whose expected link count exceeds one.

    Such pairs are legitimate for multigraph ensembles; the list lets
    callers flag where single-link reporting would be misleading.
    """
    flagged = []
    for i in range(model.n - 1):
        e = model.links * model.upper_row(i)
        for off in np.nonzero(e > 1.0)[0]:
            j = i + 1 + int(off)
            flagged.append((i, j, float(e[off])))
    return flagged


def link_stat_matrices(model, clamp_tol=0.0):
    """Dense rank-space matrices (e, s) plus the count of clamped pairs.

    ``e = L * p`` and ``s = L * p * (1 - p)``.  Multigraph ensembles can
    put ``p > 1`` on a pair, which would make the variance negative; the
    probability is clipped to [0, 1] inside ``s`` only, and the number of
    clipped pairs is returned so callers can log it.
    """
    p = model.probability_matrix()
    e = model.links * p
    clamped = int(np.count_nonzero(np.triu(p, 1) > 1.0 + clamp_tol))
    pc = np.clip(p, 0.0, 1.0)
    s = model.links * pc * (1.0 - pc)
    return e, s, clamped


def sample_pairs(model, ndraws, seed=None):
    """Draw ``ndraws`` independent rank pairs from the pair distribution.

    Uses the factorized form of p: first the higher-rank endpoint ``j``
    (marginal ``kplus[j]/L``), then ``i < j`` with probability proportional
    to ``residuals[i]``.  Returns arrays ``(i, j)``; the draws are grouped
    by ``j``, which is immaterial for an exchangeable multiset.
    """
    rng = np.random.default_rng(seed)
    kp = model.kplus.values.astype(float)
    marginal = kp / kp.sum()
    ws = model.weights
    j_draws = rng.choice(model.n, size=ndraws, p=marginal)
    i_out = np.empty(ndraws, dtype=np.int64)
    j_out = np.empty(ndraws, dtype=np.int64)
    cursor = 0
    for j in np.unique(j_draws):
        count = int(np.count_nonzero(j_draws == j))
        inner = ws.residuals[:j] / ws.prefix[j]
        inner = inner / inner.sum()
        i_out[cursor : cursor + count] = rng.choice(j, size=count, p=inner)
        j_out[cursor : cursor + count] = j
        cursor += count
    return i_out, j_out


def sample_network(model, seed=None):
    """One sampled network: L independent pair draws as an edge multiset."""
    i, j = sample_pairs(model, model.links, seed)
    return Multigraph(model.n, list(zip(i.tolist(), j.tolist())))
