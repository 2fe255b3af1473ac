"""Exact non-adaptive stochastic k-center on tree metrics.

For a fixed radius ``r`` the dynamic program computes, bottom-up,

* ``H[v][j]``: the best probability that ``j`` centers placed inside the
  subtree of ``v`` cover every present vertex of that subtree, and
* ``R[v][l][j, c]``: the best probability for the partial subtree made of ``v``
  and its first ``l`` child subtrees, given that vertex ``c`` (anywhere in the
  tree) is a center and at most ``j - 1`` further centers lie inside.

Arrays ``R[v][l]`` have shape ``(k + 1, n)`` so that every candidate closest
center ``c`` is handled in one vectorised step. The optimal radius is found by
binary search over the candidate radii.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import KCenterInstance
from .tree import RootedTree, all_pairs_distances, build_rooted_tree, candidate_radii

FEASIBILITY_SLACK = 1e-9


class InfeasibleError(Exception):
    pass


@dataclass
class SuccessTable:
    k: int
    r: float
    root: int
    R: dict[int, list[np.ndarray]]    # vertex -> per-child-prefix arrays (k+1, n)
    H: dict[int, np.ndarray]          # vertex -> (k+1,)

    @property
    def value(self) -> float:
        return float(self.H[self.root][self.k])


@dataclass(frozen=True)
class CenterSolution:
    centers: frozenset[int]
    radius: float
    success_probability: float
    trace: tuple[tuple[float, float], ...] = ()   # (radius, max success) per probe


def _closed_form(dist, centers, probs, r):
    p = np.asarray(probs, dtype=float)
    if not centers:
        return float(np.prod(1.0 - p))
    far = dist[sorted(centers)].min(axis=0) > r
    return float(np.prod(1.0 - p[far]))


def max_success_probability(tree: RootedTree, dist: np.ndarray, probs, k: int,
                            r: float) -> tuple[float, SuccessTable]:
    """Best success probability over all center sets of size at most ``k``."""
    if k < 0 or r < 0:
        raise ValueError("k and r must be nonnegative")
    n = tree.n
    p = np.asarray(probs, dtype=float)
    R: dict[int, list[np.ndarray]] = {}
    H: dict[int, np.ndarray] = {}
    empty = {}   # product of (1 - p) over the subtree: the zero-center value

    for v in tree.postorder:
        base = np.ones((k + 1, n))
        base[0] = 0.0    # j counts the given center, so j = 0 is impossible
        if k >= 1:
            base[1] = np.where(dist[v] <= r, 1.0, 1.0 - p[v])
        prefixes = [base]
        cur = base
        e = 1.0 - p[v]
        for c in tree.children[v]:
            rc, hc = R[c][-1], H[c]
            nxt = np.zeros_like(cur)
            for j in range(1, k + 1):
                # c's subtree shares the closest center with v's side
                shared = (cur[1:j + 1] * rc[j:0:-1]).max(axis=0)
                # c's subtree is served by its own j - j2 centers
                own = (cur[:j + 1] * hc[j::-1, None]).max(axis=0)
                nxt[j] = np.maximum(shared, own)
            cur = nxt
            prefixes.append(cur)
            e *= empty[c]
        R[v] = prefixes
        empty[v] = e
        h = np.empty(k + 1)
        h[0] = e
        if k >= 1:
            inside = tree.subtree(v)
            h[1:] = cur[1:, inside].max(axis=1)
        H[v] = h

    table = SuccessTable(k, r, tree.root, R, H)
    return table.value, table


def reconstruct_centers(table: SuccessTable, tree: RootedTree, dist: np.ndarray,
                        probs, k: int | None = None, r: float | None = None) -> frozenset[int]:
    """Walk the recorded table top-down to recover an optimal center set.

    Ties are broken towards the smallest split index, then the smallest
    center id, matching the order in which the forward pass saw them.
    """
    k = table.k if k is None else k
    r = table.r if r is None else r
    p = np.asarray(probs, dtype=float)
    R, H = table.R, table.H
    centers: set[int] = set()
    work = [("H", tree.root, k, None, None)]

    while work:
        kind, v, j, l, c = work.pop()
        if kind == "H":
            if j == 0:
                continue
            inside = sorted(tree.subtree(v))
            row = R[v][-1][j, inside]
            best = inside[int(np.argmax(row))]
            work.append(("R", v, j, len(tree.children[v]), best))
            continue
        centers.add(c)
        if l == 0:
            if j >= 2 and dist[v, c] > r and p[v] > 0:
                centers.add(v)
            continue
        child = tree.children[v][l - 1]
        left, rc, hc = R[v][l - 1], R[child][-1], H[child]
        shared = [left[j1, c] * rc[j - j1 + 1, c] for j1 in range(1, j + 1)]
        own = [left[j2, c] * hc[j - j2] for j2 in range(0, j + 1)]
        if shared and max(shared) >= max(own):
            j1 = 1 + int(np.argmax(shared))
            work.append(("R", v, j1, l - 1, c))
            work.append(("R", child, j - j1 + 1, len(tree.children[child]), c))
        else:
            j2 = int(np.argmax(own))
            work.append(("R", v, j2, l - 1, c))
            work.append(("H", child, j - j2, None, None))
    return frozenset(centers)


def solve_nonadaptive(inst: KCenterInstance, k: int, rho: float) -> CenterSolution:
    """Smallest candidate radius whose optimal success probability is ≥ 1 - rho."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if k < 0:
        raise ValueError("k must be nonnegative")
    tree = build_rooted_tree(inst)
    dist = all_pairs_distances(tree)
    target = 1.0 - rho - FEASIBILITY_SLACK

    if k >= inst.n:
        return CenterSolution(frozenset(range(inst.n)), 0.0, 1.0, ((0.0, 1.0),))
    if k == 0:
        prob = math.prod(1.0 - q for q in inst.probs)
        if prob < target:
            raise InfeasibleError(
                f"no centers: success {prob} is below 1 - rho = {1 - rho}")
        return CenterSolution(frozenset(), 0.0, prob, ((0.0, prob),))

    radii = candidate_radii(dist)
    trace = []
    cache = {}

    def probe(i):
        if i not in cache:
            cache[i] = max_success_probability(tree, dist, inst.probs, k, radii[i])[0]
            trace.append((float(radii[i]), cache[i]))
        return cache[i]

    lo, hi = 0, len(radii) - 1
    if probe(hi) < target:   # unreachable for k >= 1
        raise InfeasibleError("infeasible even at the largest radius")
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid) >= target:
            hi = mid
        else:
            lo = mid + 1
    # tables are large; only the final radius is kept for reconstruction
    value, table = max_success_probability(tree, dist, inst.probs, k, radii[lo])
    centers = reconstruct_centers(table, tree, dist, inst.probs, k, radii[lo])
    return CenterSolution(centers, float(radii[lo]), value, tuple(trace))


def success_probability(inst: KCenterInstance, centers, r: float) -> float:
    """Closed-form success probability of a fixed center set at radius ``r``."""
    tree = build_rooted_tree(inst)
    return _closed_form(all_pairs_distances(tree), set(centers), inst.probs, r)
