"""Rooted tree structure, all-pairs path distances and candidate radii."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import KCenterInstance


@dataclass(frozen=True)
class RootedTree:
    root: int
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    parent_weight: tuple[float, ...]   # weight of the edge to the parent, 0 at the root
    postorder: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    def subtree(self, v: int) -> list[int]:
        out, stack = [], [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out


def build_rooted_tree(inst: KCenterInstance, root: int | None = None) -> RootedTree:
    root = inst.root if root is None else root
    n = inst.n
    adj = [[] for _ in range(n)]
    for u, v, w in inst.edges:
        adj[u].append((v, w))
        adj[v].append((u, w))

    parent: list[int | None] = [None] * n
    pweight = [0.0] * n
    children: list[list[int]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    stack = [root]
    while stack:
        u = stack.pop()
        for v, w in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                pweight[v] = w
                children[u].append(v)
                stack.append(v)
    for c in children:
        c.sort()

    # iterative postorder; children visited in ascending id
    order = []
    stack = [(root, False)]
    while stack:
        u, done = stack.pop()
        if done:
            order.append(u)
            continue
        stack.append((u, True))
        for c in reversed(children[u]):
            stack.append((c, False))

    return RootedTree(root, tuple(parent), tuple(tuple(c) for c in children),
                      tuple(pweight), tuple(order))


def all_pairs_distances(tree: RootedTree) -> np.ndarray:
    """Exact path-metric distance matrix.

    Row ``s`` is filled by a walk outward from ``s``; the lower triangle is then
    mirrored from the upper one so the matrix is exactly symmetric.
    """
    n = tree.n
    nbrs = [[] for _ in range(n)]
    for v in range(n):
        p = tree.parent[v]
        if p is not None:
            nbrs[v].append((p, tree.parent_weight[v]))
            nbrs[p].append((v, tree.parent_weight[v]))
    dist = np.zeros((n, n))
    for s in range(n):
        row = dist[s]
        stack = [(s, -1)]
        while stack:
            u, prev = stack.pop()
            for v, w in nbrs[u]:
                if v != prev:
                    row[v] = row[u] + w
                    stack.append((v, u))
    iu = np.triu_indices(n, 1)
    dist[(iu[1], iu[0])] = dist[iu]
    return dist


def candidate_radii(dist: np.ndarray) -> np.ndarray:
    """Sorted distinct values of ``{0} ∪ {d(u, v) : u < v}``."""
    iu = np.triu_indices(dist.shape[0], 1)
    return np.unique(np.concatenate(([0.0], dist[iu])))
