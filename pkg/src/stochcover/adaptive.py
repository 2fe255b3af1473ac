"""Adaptive stochastic k-center on tree metrics: exact failure probability.

After the random subset is revealed, the cheapest cover of a tree can be
found bottom-up by a lazy greedy: postpone covering a present vertex until
the edge to the parent would push it out of reach, then put a center on the
current vertex. Seen from the root of a (partial) subtree, every subset then
falls into exactly one profile ``(j, d, d')``:

* ``j`` is the fewest centers that cover it on its own,
* ``d`` is the distance from the root to the nearest center among such
  covers (``0`` whenever outside help is usable, since the root itself is
  then a valid center),
* ``d'`` is the largest distance at which an outside center lets the subtree
  get away with ``j - 1`` centers, or :data:`NO_HELPER` when no outside
  vertex can help.

Internally a distribution is keyed by ``(kind, value)``. ``kind`` is
``"C"`` (closed: everything covered, value = nearest center distance, ``inf``
for the empty subset) or ``"O"`` (open: some present vertex still waits for
a center, value = the helper threshold ``d'``). Each key holds a mass vector
indexed by the number of centers committed so far; the committed count never
decreases, so merging two subtrees is a convolution of these vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .instance import KCenterInstance
from .tree import RootedTree, all_pairs_distances, build_rooted_tree, candidate_radii

NO_HELPER = None
FEASIBILITY_SLACK = 1e-9

CLOSED, OPEN = "C", "O"


class InfeasibleError(Exception):
    pass


class Profile(NamedTuple):
    j: int
    d: float
    dprime: float | None    # NO_HELPER when no outside center can save one


class ProfileDistribution:
    """Probability mass over covering profiles of one (partial) subtree.

    ``length`` is the size of the per-key count vectors; with ``cap`` set the
    last slot absorbs every count above ``cap``.
    """

    def __init__(self, groups: dict, length: int, cap: int | None = None):
        self.groups = groups
        self.length = length
        self.cap = cap

    def total(self) -> float:
        return float(math.fsum(float(v.sum()) for v in self.groups.values()))

    def profiles(self) -> dict[Profile, float]:
        out: dict[Profile, float] = {}
        for (kind, val), vec in self.groups.items():
            for c in np.flatnonzero(vec):
                if kind == CLOSED:
                    prof = Profile(0, 0.0, 0.0) if val == math.inf else Profile(int(c), val, NO_HELPER)
                else:
                    prof = Profile(int(c) + 1, 0.0, val)
                out[prof] = out.get(prof, 0.0) + float(vec[c])
        return out

    def center_count_masses(self) -> np.ndarray:
        """Mass by number of committed centers, summed over keys."""
        out = np.zeros(self.length)
        for vec in self.groups.values():
            out += vec
        return out

    def __repr__(self):
        body = ", ".join(f"{p}: {m:.6g}" for p, m in sorted(
            self.profiles().items(), key=lambda kv: (kv[0].j, kv[0].d, kv[0].dprime is None, kv[0].dprime or 0)))
        return f"ProfileDistribution({{{body}}})"


def _vec(length, cap, c, mass):
    v = np.zeros(length)
    v[min(c, length - 1) if cap is not None else c] = mass
    return v


def _shift_up(vec, cap):
    out = np.zeros_like(vec)
    out[1:] = vec[:-1]
    if cap is not None:
        out[-1] += vec[-1]
    return out


def _convolve(a, b, length, cap):
    full = np.convolve(a, b)
    if cap is None:
        return full[:length]
    out = full[:length].copy()
    out[-1] += full[length:].sum()
    return out


def _add(groups, key, vec):
    if key in groups:
        groups[key] = groups[key] + vec
    else:
        groups[key] = vec


def leaf_distribution(v: int, p_v: float, dist: np.ndarray, r: float,
                      length: int | None = None, cap: int | None = None) -> ProfileDistribution:
    """Profiles of the single vertex ``v`` seen as a subtree.

    When present, ``v`` can be helped by any other vertex within ``r``; the
    helper threshold is the farthest such distance. With no such vertex the
    only cover is a center on ``v`` itself.
    """
    if length is None:
        length = dist.shape[0] + 1 if cap is None else cap + 2
    groups: dict = {}
    if p_v < 1.0:
        groups[(CLOSED, math.inf)] = _vec(length, cap, 0, 1.0 - p_v)
    if p_v > 0.0:
        reach = dist[v][(dist[v] <= r) & (np.arange(dist.shape[0]) != v)]
        if reach.size:
            groups[(OPEN, float(reach.max()))] = _vec(length, cap, 0, p_v)
        else:
            groups[(CLOSED, 0.0)] = _vec(length, cap, 1, p_v)
    return ProfileDistribution(groups, length, cap)


def _lift(child: ProfileDistribution, w: float) -> dict:
    """Move a child's profiles across the edge of length ``w`` to its parent."""
    out: dict = {}
    for (kind, val), vec in child.groups.items():
        if kind == CLOSED:
            _add(out, (CLOSED, val + w), vec)
        elif val < w:
            # nothing outside the child is close enough: center on the child root
            _add(out, (CLOSED, w), _shift_up(vec, child.cap))
        else:
            _add(out, (OPEN, val - w), vec)
    return out


def _combine(k1, k2):
    (a, x), (b, y) = k1, k2
    if a == CLOSED and b == CLOSED:
        return (CLOSED, min(x, y))
    if a == OPEN and b == OPEN:
        return (OPEN, min(x, y))
    if a == OPEN:
        (a, x), (b, y) = (b, y), (a, x)
    # x: nearest center on the closed side, y: helper threshold of the open side
    return (CLOSED, x) if x <= y else (OPEN, y)


def merge_distributions(left: ProfileDistribution, child: ProfileDistribution,
                        w: float) -> ProfileDistribution:
    """Join a partial subtree with the next child subtree hanging at distance ``w``."""
    length, cap = left.length, left.cap
    lifted = _lift(child, w)
    out: dict = {}
    for k1, v1 in left.groups.items():
        for k2, v2 in lifted.items():
            _add(out, _combine(k1, k2), _convolve(v1, v2, length, cap))
    return ProfileDistribution(out, length, cap)


def close_root(dist_: ProfileDistribution) -> ProfileDistribution:
    """Finish the whole tree: a still-open subset gets a center at the root."""
    out: dict = {}
    for (kind, val), vec in dist_.groups.items():
        if kind == OPEN:
            _add(out, (CLOSED, 0.0), _shift_up(vec, dist_.cap))
        else:
            _add(out, (kind, val), vec)
    return ProfileDistribution(out, dist_.length, dist_.cap)


def root_distribution(tree: RootedTree, dist: np.ndarray, probs, r: float, *,
                      cap: int | None = None,
                      on_state: Callable[[int, int, ProfileDistribution], None] | None = None
                      ) -> ProfileDistribution:
    """Fold profile distributions up the tree and close them at the root.

    ``on_state(v, l, distribution)`` is called for every partial subtree formed
    by ``v`` and its first ``l`` children.
    """
    done: dict[int, ProfileDistribution] = {}
    for v in tree.postorder:
        cur = leaf_distribution(v, probs[v], dist, r, cap=cap)
        if on_state:
            on_state(v, 0, cur)
        for l, c in enumerate(tree.children[v], start=1):
            cur = merge_distributions(cur, done.pop(c), tree.parent_weight[c])
            if on_state:
                on_state(v, l, cur)
        done[v] = cur
    return close_root(done[tree.root])


def failure_probability(tree: RootedTree, dist: np.ndarray, probs, k: int, r: float,
                        *, cap: bool = False, on_state=None) -> float:
    """Probability that the revealed subset needs more than ``k`` centers at radius ``r``.

    ``cap=True`` lumps every count above ``k`` into one overflow slot, which
    is exact because committed counts never decrease.
    """
    if k < 0 or r < 0:
        raise ValueError("k and r must be nonnegative")
    final = root_distribution(tree, dist, probs, r, cap=k if cap else None,
                              on_state=on_state)
    masses = final.center_count_masses()
    return float(min(1.0, math.fsum(masses[k + 1:].tolist())))


@dataclass(frozen=True)
class VarResult:
    radius: float
    failure_probability: float
    k: int
    rho: float
    trace: tuple[tuple[float, float], ...] = ()


def solve_adaptive_var(inst: KCenterInstance, k: int, rho: float, *,
                       cap: bool = False) -> VarResult:
    """Smallest candidate radius at which the adaptive failure is at most ``rho``."""
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    if k < 0:
        raise ValueError("k must be nonnegative")
    tree = build_rooted_tree(inst)
    dist = all_pairs_distances(tree)
    radii = candidate_radii(dist)
    cache: dict[int, float] = {}
    trace = []

    def probe(i):
        if i not in cache:
            cache[i] = failure_probability(tree, dist, inst.probs, k, radii[i], cap=cap)
            trace.append((float(radii[i]), cache[i]))
        return cache[i]

    limit = rho + FEASIBILITY_SLACK
    lo, hi = 0, len(radii) - 1
    if probe(hi) > limit:
        raise InfeasibleError(
            f"failure {cache[hi]} exceeds rho = {rho} even at radius {radii[hi]}")
    while lo < hi:
        mid = (lo + hi) // 2
        if probe(mid) <= limit:
            hi = mid
        else:
            lo = mid + 1
    return VarResult(float(radii[lo]), probe(lo), k, rho, tuple(trace))
