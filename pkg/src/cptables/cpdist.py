"""Conditional Poisson (CP) sampling machinery.

Take independent Bernoulli(p_k) indicators Z_1..Z_L and condition on their
sum being exactly s.  The conditional law of the indicator vector is the CP
distribution: it weights a size-s subset z by the product of the odds
w_k = p_k / (1 - p_k) over the chosen k, normalized by the elementary
symmetric function R(s, w) = sum over size-s subsets of their weight
products.  Everything here works from the weights:

  * success probabilities for single cells of a tableid column
    (success_prob_3way / success_prob_multiway) and their odds,
  * R(s, w) via the add-one-item recurrence, never subset enumeration,
  * the exact pmf of a subset, and
  * the drafting sampler, which draws the subset one unit at a time with
    step probabilities proportional to w_j * R(s_left, remaining - j) and
    lands exactly on the CP distribution.

Weights of zero are allowed in the vectors (such items are simply never
selected).  Dynamic range is handled by normalizing weights to max 1 inside
the linear recurrences and carrying exact log corrections.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .tables import CPTablesError


class CPInfeasibleError(CPTablesError):
    """No subset of the requested size has positive weight (R = 0)."""


@dataclass(frozen=True)
class WeightVector:
    """CP weights stored alongside their logs.

    Exists for callers that want to precompute logs once; every function in
    this module also accepts a plain array-like of weights.
    """

    w: np.ndarray
    log_w: np.ndarray = field(init=False)

    def __post_init__(self):
        w = np.ascontiguousarray(np.asarray(self.w, dtype=float))
        if w.ndim != 1:
            raise ValueError("weights must be a flat vector")
        if w.size and w.min() < 0:
            raise ValueError("weights must be nonnegative")
        w.flags.writeable = False
        with np.errstate(divide="ignore"):
            lw = np.log(w)
        lw.flags.writeable = False
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "log_w", lw)

    def __array__(self, dtype=None):
        return self.w if dtype is None else self.w.astype(dtype)

    def __len__(self):
        return self.w.size


@dataclass(frozen=True)
class CPSample:
    """One drawn subset (sorted item indices) and its exact log pmf."""

    chosen: tuple[int, ...]
    log_prob: float


def _as_weights(w) -> np.ndarray:
    if isinstance(w, WeightVector):
        return w.w
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise ValueError("weights must be a flat vector")
    if w.size and w.min() < 0:
        raise ValueError("weights must be nonnegative")
    return w


def success_prob_3way(r: int, c: int, n: int, m: int, g_r: int = 0, g_c: int = 0) -> float:
    """Bernoulli success probability for one cell of a column being sampled
    in a three-way table.

    r and c are the residual sums of the two lines through the cell that
    run across the column direction; n and m are those lines' lengths; g_r
    and g_c count structural zeros in them.  The cell is a one with
    probability r*c / (r*c + (n-r-g_r)*(m-c-g_c)).
    """
    if not (1 <= r <= n - 1 - g_r) or not (1 <= c <= m - 1 - g_c):
        raise ValueError(
            f"residuals must leave a genuine choice: r={r}, c={c}, "
            f"n={n}, m={m}, g_r={g_r}, g_c={g_c}"
        )
    num = r * c
    return num / (num + (n - r - g_r) * (m - c - g_c))


def success_prob_multiway(r, n, g=None) -> float:
    """d-way generalization of success_prob_3way.

    r, n, g are length-(d-1) sequences: residual sums, lengths, and
    structural-zero counts of the d-1 cross lines through the cell.  With a
    single factor this reduces to the two-way law r / (n - g).
    """
    r = [int(x) for x in r]
    n = [int(x) for x in n]
    g = [0] * len(r) if g is None else [int(x) for x in g]
    if not (len(r) == len(n) == len(g)) or not r:
        raise ValueError("r, n, g must be equal-length, nonempty sequences")
    num = 1
    den = 1
    for rk, nk, gk in zip(r, n, g):
        if not (1 <= rk <= nk - 1 - gk):
            raise ValueError(
                f"residuals must leave a genuine choice: r={rk}, n={nk}, g={gk}"
            )
        num *= rk
        den *= nk - rk - gk
    return num / (num + den)


def odds(p: float) -> float:
    """CP weight of a cell: p / (1 - p) for 0 < p < 1."""
    if not (0.0 < p < 1.0):
        raise ValueError(f"probability must be strictly between 0 and 1, got {p}")
    return p / (1.0 - p)


def _esym_rows(w: np.ndarray, smax: int) -> tuple[np.ndarray, float]:
    """Linear-space elementary symmetric values for degrees 0..smax, with
    the weights normalized so their max is 1.  Returns (values, log_scale)
    where true R(s) = values[s] * exp(s * log_scale)."""
    rows = np.zeros(smax + 1)
    rows[0] = 1.0
    if w.size == 0 or smax == 0:
        return rows, 0.0
    wmax = float(w.max())
    if wmax <= 0.0:
        return rows, 0.0
    ws = w / wmax
    for wi in ws:
        if wi > 0.0:
            rows[1:] += wi * rows[:-1]
    return rows, math.log(wmax)


def log_esym_table(w, smax: int) -> np.ndarray:
    """log R(s, w) for s = 0..smax via the add-one-item recurrence
    R(s, A) = R(s, A - {i}) + w_i * R(s-1, A - {i}); -inf where R = 0."""
    w = _as_weights(w)
    smax = int(smax)
    if smax < 0:
        raise ValueError("smax must be >= 0")
    rows, log_scale = _esym_rows(w, smax)
    with np.errstate(divide="ignore"):
        out = np.log(rows)
    out += log_scale * np.arange(smax + 1)
    return out


def log_esym(w, s: int) -> float:
    """log R(s, w) for a single degree s."""
    return float(log_esym_table(w, s)[s])


def cp_log_pmf(w, size: int, subset) -> float:
    """Exact log probability of drawing `subset` (item indices) from the CP
    distribution over size-`size` subsets with weights w."""
    w = _as_weights(w)
    size = int(size)
    idx = np.asarray(sorted(int(i) for i in subset), dtype=int)
    if idx.size != size:
        raise ValueError(f"subset has {idx.size} items, expected {size}")
    if idx.size != np.unique(idx).size:
        raise ValueError("subset indices must be distinct")
    if idx.size and (idx.min() < 0 or idx.max() >= w.size):
        raise ValueError("subset index out of range")
    if size == 0:
        return 0.0
    log_r = log_esym(w, size)
    if log_r == -math.inf:
        raise CPInfeasibleError(
            f"no size-{size} subset has positive weight (R = 0)"
        )
    with np.errstate(divide="ignore"):
        val = float(np.log(w[idx]).sum()) - log_r
    # float rounding can push a certain event a hair above probability 1
    return min(val, 0.0)


def cp_draft_sample(w, size: int, rng: np.random.Generator) -> CPSample:
    """Draw one CP subset by drafting: at each step pick one more unit j
    among the remaining ones with probability proportional to
    w_j * R(s_left, remaining - {j}), s_left being the units still needed
    after the pick.  The drawn subset is exactly CP(size, w) distributed;
    log_prob is the closed-form pmf (independent of the draw order).
    """
    w = _as_weights(w)
    size = int(size)
    if not (0 <= size <= w.size):
        raise ValueError(f"size must be within 0..{w.size}, got {size}")
    if int(np.count_nonzero(w > 0)) < size:
        raise CPInfeasibleError(
            f"only {int(np.count_nonzero(w > 0))} positive weights, need {size}"
        )
    if size == 0:
        return CPSample((), 0.0)

    # zero-weight items can never be drawn; drop them but keep original ids
    rem = [int(i) for i in np.flatnonzero(w > 0)]
    ws = (w / float(w[rem].max())).tolist()
    chosen: list[int] = []
    for step in range(size):
        s_left = size - step - 1
        scores = _deletion_scores(ws, rem, s_left)
        total = math.fsum(scores)
        if not (total > 0.0):
            raise CPInfeasibleError("all drafting scores vanished")
        u = rng.random() * total
        acc = 0.0
        pick = len(rem) - 1
        for i, sc in enumerate(scores):
            acc += sc
            if u < acc:
                pick = i
                break
        chosen.append(rem.pop(pick))
    return CPSample(tuple(sorted(chosen)), cp_log_pmf(w, size, chosen))


def _deletion_scores(ws: list[float], rem: list[int], s: int) -> list[float]:
    """Unnormalized step scores w_j * R(s, rem - {j}) for every j in rem,
    computed with one forward and one backward esym sweep (O(len * s))."""
    k = len(rem)
    # fwd[i] = esym row (degrees 0..s) of rem[:i]; bwd[i] = row of rem[i+1:]
    fwd = [None] * (k + 1)
    row = [0.0] * (s + 1)
    row[0] = 1.0
    fwd[0] = row[:]
    for i in range(k):
        wi = ws[rem[i]]
        prev = row[:]
        for t in range(min(i + 1, s), 0, -1):
            row[t] = prev[t] + wi * prev[t - 1]
        fwd[i + 1] = row[:]
    bwd_next = [0.0] * (s + 1)
    bwd_next[0] = 1.0
    scores = [0.0] * k
    for i in range(k - 1, -1, -1):
        f = fwd[i]
        acc = 0.0
        for t in range(s + 1):
            acc += f[t] * bwd_next[s - t]
        scores[i] = ws[rem[i]] * acc
        wi = ws[rem[i]]
        prev = bwd_next[:]
        for t in range(s, 0, -1):
            bwd_next[t] = prev[t] + wi * prev[t - 1]
    return scores
