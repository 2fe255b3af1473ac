"""Ground-truth engines used to check the solvers.

Everything here works by exhaustive enumeration over bitmasks, or by plain
sampling, and shares no code with the dynamic programs it is meant to check.
Subsets of an ``n``-element ground set are encoded as integers, bit ``i`` set
meaning element ``i`` is present. Size guards are hard errors: an oracle never
silently returns an approximation.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .instance import GraphInstance, KCenterInstance, SetCoverInstance
from .tree import all_pairs_distances, build_rooted_tree

SHARD_SIZE = 8192


class SizeGuardError(ValueError):
    """Instance too large for exhaustive enumeration."""


class InfeasibleError(ValueError):
    pass


def _guard(n, limit, what):
    if n > limit:
        raise SizeGuardError(f"{what}: size {n} exceeds the enumeration limit {limit}")


@dataclass(frozen=True)
class EnumerationReport:
    fingerprint: str
    params: dict
    value: float
    breakdown: tuple = ()


@dataclass(frozen=True)
class HardnessReport:
    n: int
    m: int
    I: int
    p: float
    f_m: float
    lower: float
    upper: float
    n_counts: tuple[int, ...] = field(default=())

    @property
    def holds(self) -> bool:
        tol = 1e-9 * max(1.0, self.I)
        return self.lower - tol <= self.I <= self.upper + tol


# -- subsets -----------------------------------------------------------------

def subset_probabilities(probs) -> np.ndarray:
    """``P(S)`` for every subset mask ``S`` under independent presence."""
    out = np.ones(1)
    for q in probs:
        out = np.concatenate((out * (1.0 - q), out * q))
    return out


def popcounts(n: int) -> np.ndarray:
    counts = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        counts = np.concatenate((counts, counts + 1))
    return counts


def _subset_closure(flags: np.ndarray, n: int) -> np.ndarray:
    """Mark every subset of a marked mask (downward closure)."""
    out = flags.copy()
    for i in range(n):
        view = out.reshape(-1, 2, 1 << i)
        view[:, 0, :] |= view[:, 1, :]
    return out


def _union_levels(masks, n, max_level):
    """Yield, for c = 0, 1, ..., the masks coverable by at most c of ``masks``."""
    reach = np.zeros(1 << n, dtype=bool)
    reach[0] = True
    yield _subset_closure(reach, n)
    for _ in range(max_level):
        grown = reach.copy()
        idx = np.flatnonzero(reach)
        for m in masks:
            grown[idx | m] = True
        reach = grown
        yield _subset_closure(reach, n)


def _ball_masks(dist, r):
    n = dist.shape[0]
    return [sum(1 << u for u in range(n) if dist[v, u] <= r) for v in range(n)]


# -- k-center ----------------------------------------------------------------

def closed_form_success(dist, centers, probs, r) -> float:
    """``P(every present vertex is within r of a center)`` for fixed centers."""
    centers = list(centers)
    out = 1.0
    for v, q in enumerate(probs):
        if not any(dist[v, c] <= r for c in centers):
            out *= 1.0 - q
    return out


def brute_force_nonadaptive_opt(dist, probs, k, r):
    """Best center set of size ``min(k, n)`` by enumeration; lexicographic ties."""
    n = len(probs)
    _guard(n, 16, "brute_force_nonadaptive_opt")
    size = min(k, n)
    best, best_set = -1.0, ()
    for combo in combinations(range(n), size):
        val = closed_form_success(dist, combo, probs, r)
        if val > best:
            best, best_set = val, combo
    return best, frozenset(best_set)


def min_cover_size(dist, subset, r) -> int:
    """Fewest centers (anywhere in V) putting every vertex of ``subset`` within r."""
    n = dist.shape[0]
    _guard(n, 16, "min_cover_size")
    target = sum(1 << v for v in subset)
    if target == 0:
        return 0
    balls = _ball_masks(dist, r)
    for c in range(1, n + 1):
        for combo in combinations(balls, c):
            u = 0
            for b in combo:
                u |= b
            if u & target == target:
                return c
    raise AssertionError("unreachable: n centers always cover")


def coverable_table(dist, r, k) -> np.ndarray:
    """Boolean table over subset masks: coverable by at most ``k`` centers."""
    n = dist.shape[0]
    _guard(n, 20, "coverable_table")
    table = None
    for table in _union_levels(_ball_masks(dist, r), n, min(k, n)):
        pass
    return table


def brute_force_adaptive_failure(dist, probs, k, r) -> float:
    """Sum of ``P(S)`` over subsets that need more than ``k`` centers."""
    n = len(probs)
    _guard(n, 14, "brute_force_adaptive_failure")
    ok = coverable_table(dist, r, k)
    return float(math.fsum(subset_probabilities(probs)[~ok]))


def _mc_shard(table, probs, shard_seed, count):
    rng = np.random.default_rng(shard_seed)
    present = rng.random((count, len(probs))) < np.asarray(probs)
    masks = present @ (1 << np.arange(len(probs), dtype=np.int64))
    return int(np.count_nonzero(~table[masks]))


def default_threads() -> int:
    env = os.environ.get("STOCHCOVER_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def monte_carlo_failure(inst: KCenterInstance, k, r, samples, seed, threads=None):
    """Sampled estimate of the adaptive failure probability.

    The sample stream is cut into fixed-size shards, shard ``i`` drawing from
    ``default_rng([seed, i])``, so the estimate depends only on ``seed`` and
    ``samples``, never on how many threads run the shards.

    Returns ``(estimate, standard_error)``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    dist = all_pairs_distances(build_rooted_tree(inst))
    table = coverable_table(dist, r, k)
    sizes = [SHARD_SIZE] * (samples // SHARD_SIZE)
    if samples % SHARD_SIZE:
        sizes.append(samples % SHARD_SIZE)
    jobs = [([seed, i], c) for i, c in enumerate(sizes)]
    threads = threads or default_threads()
    with ThreadPoolExecutor(max_workers=threads) as pool:
        fails = sum(pool.map(lambda job: _mc_shard(table, inst.probs, *job), jobs))
    est = fails / samples
    return est, math.sqrt(est * (1.0 - est) / samples)


# -- set cover ---------------------------------------------------------------

def brute_force_setcover_opt(inst: SetCoverInstance, rho, slack=1e-12):
    """Cheapest selection with exact violation probability at most ``rho``.

    Returns ``(cost, selection)``; ties go to the smallest selection mask.
    """
    m, n = inst.m, inst.n
    _guard(m, 20, "brute_force_setcover_opt")
    set_masks = [sum(1 << e for e in members) for _, members in inst.sets]
    covered = np.zeros(1 << m, dtype=np.int64)
    cost = np.zeros(1 << m)
    for i, (c, _) in enumerate(inst.sets):
        half = 1 << i
        covered[half:2 * half] = covered[:half] | set_masks[i]
        cost[half:2 * half] = cost[:half] + c
    success = np.ones(1 << m)
    for e, q in enumerate(inst.element_probs):
        miss = (covered >> e) & 1 == 0
        success[miss] *= 1.0 - q
    feasible = 1.0 - success <= rho + slack
    if not feasible.any():
        raise InfeasibleError("no selection meets the risk level")
    cand = np.flatnonzero(feasible)
    best = int(cand[np.argmin(cost[cand])])
    return float(cost[best]), frozenset(i for i in range(m) if best >> i & 1)


# -- hardness reduction ------------------------------------------------------

def count_max_independent_sets(g: GraphInstance) -> tuple[int, int]:
    """Size ``m`` of a maximum independent set and the number of such sets."""
    n = g.n
    _guard(n, 20, "count_max_independent_sets")
    masks = np.arange(1 << n, dtype=np.int64)
    independent = np.ones(1 << n, dtype=bool)
    for u, v in g.edges:
        independent &= ((masks >> u) & (masks >> v) & 1) == 0
    sizes = popcounts(n)[independent]
    m = int(sizes.max())
    return m, int(np.count_nonzero(sizes == m))


def min_edge_cover_sizes(g: GraphInstance) -> np.ndarray:
    """Smallest number of edges touching every vertex of ``S``, for all ``S``."""
    n = g.n
    _guard(n, 14, "min_edge_cover_sizes")
    if g.isolated_vertices():
        raise ValueError(f"isolated vertices {g.isolated_vertices()} have no edge cover")
    edges = [(1 << u) | (1 << v) for u, v in g.edges]
    best = np.full(1 << n, -1, dtype=np.int64)
    for c, reach in enumerate(_union_levels(edges, n, n)):
        best[(best < 0) & reach] = c
        if (best >= 0).all():
            break
    return best


def edge_cover_failure(g: GraphInstance, k, p, strict=False):
    """Edge-cover failure probability and per-size failed-subset counts.

    A nonempty subset fails when its minimum edge cover uses at least ``k``
    edges, or more than ``k`` with ``strict=True``; the empty subset never
    fails. Returns ``(f, counts)`` with
    ``counts[i]`` the number of failed subsets of size ``i``.
    """
    n = g.n
    covers = min_edge_cover_sizes(g)
    failed = covers > k if strict else covers >= k
    failed[0] = False
    sizes = popcounts(n)
    counts = np.bincount(sizes[failed], minlength=n + 1)
    terms = []
    for i, cnt in enumerate(counts):
        if cnt:
            terms.append(cnt * _binomial_weight(p, i, n))
    return math.fsum(terms), tuple(int(c) for c in counts)


def _binomial_weight(p, i, n):
    # p^i (1-p)^(n-i) through logs: p = 2^-n pushes this towards 1e-40
    if p == 0.0:
        return 1.0 if i == 0 else 0.0
    if p == 1.0:
        return 1.0 if i == n else 0.0
    return math.exp(i * math.log(p) + (n - i) * math.log1p(-p))


def verify_hardness_sandwich(g: GraphInstance) -> HardnessReport:
    """Bracket the maximum independent set count by the edge-cover failure."""
    n = g.n
    _guard(n, 12, "verify_hardness_sandwich")
    p = 2.0 ** -n
    m, count = count_max_independent_sets(g)
    f_m, counts = edge_cover_failure(g, m, p)
    base = _binomial_weight(p, m, n)
    return HardnessReport(n=n, m=m, I=count, p=p, f_m=f_m,
                          lower=f_m / (3.0 * base), upper=f_m / base,
                          n_counts=counts)
