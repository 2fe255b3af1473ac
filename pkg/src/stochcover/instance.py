"""Problem instances, their JSON documents, and seeded random generators.

Three instance kinds share one document schema, selected by ``type``:

* ``"tree"``: weighted tree with a presence probability per vertex,
* ``"graph"``: simple undirected graph with a presence probability per vertex,
* ``"setcover"``: element probabilities plus a family of costed sets.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Union

import numpy as np


class InstanceError(ValueError):
    """Base class for instance validation failures."""


class SchemaError(InstanceError):
    pass


class ProbabilityError(InstanceError):
    pass


class WeightError(InstanceError):
    pass


class CostError(InstanceError):
    pass


class NotATreeError(InstanceError):
    """Raised for a ``tree`` document whose edges are cyclic or disconnected."""


@dataclass(frozen=True)
class KCenterInstance:
    n: int
    edges: tuple[tuple[int, int, float], ...]
    probs: tuple[float, ...]
    root: int = 0

    def __post_init__(self):
        _check_probs(self.probs, self.n)
        for u, v, w in self.edges:
            _check_vertex(u, self.n)
            _check_vertex(v, self.n)
            if not w >= 0:
                raise WeightError(f"edge ({u}, {v}) has negative weight {w}")
        _check_vertex(self.root, self.n)

    def check_tree(self) -> None:
        """Raise :class:`NotATreeError` unless the edges span a tree."""
        if len(self.edges) != self.n - 1:
            kind = "cyclic" if len(self.edges) >= self.n else "disconnected"
            raise NotATreeError(
                f"{kind}: {len(self.edges)} edges on {self.n} vertices")
        adj = [[] for _ in range(self.n)]
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        if len(seen) != self.n:
            # n - 1 edges but not connected implies a cycle somewhere
            raise NotATreeError(
                f"cyclic and disconnected: reached {len(seen)} of {self.n} vertices")


@dataclass(frozen=True)
class GraphInstance:
    n: int
    edges: tuple[tuple[int, int], ...]
    probs: tuple[float, ...]

    def __post_init__(self):
        _check_probs(self.probs, self.n)
        seen = set()
        for u, v in self.edges:
            _check_vertex(u, self.n)
            _check_vertex(v, self.n)
            if u == v:
                raise SchemaError(f"self-loop at vertex {u}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise SchemaError(f"duplicate edge {key}")
            seen.add(key)

    def isolated_vertices(self) -> list[int]:
        touched = {u for e in self.edges for u in e}
        return [v for v in range(self.n) if v not in touched]


@dataclass(frozen=True)
class SetCoverInstance:
    n: int
    element_probs: tuple[float, ...]
    sets: tuple[tuple[float, frozenset[int]], ...]

    def __post_init__(self):
        _check_probs(self.element_probs, self.n)
        for i, (cost, members) in enumerate(self.sets):
            if not cost > 0:
                raise CostError(f"set {i} has non-positive cost {cost}")
            for e in members:
                if not 0 <= e < self.n:
                    raise SchemaError(f"set {i} names unknown element {e}")

    @property
    def m(self) -> int:
        return len(self.sets)

    def uncoverable_elements(self) -> list[int]:
        covered = set().union(*(members for _, members in self.sets))
        return [e for e in range(self.n) if e not in covered]


ProblemInstance = Union[KCenterInstance, GraphInstance, SetCoverInstance]


def _check_vertex(v, n):
    if not (isinstance(v, (int, np.integer)) and 0 <= v < n):
        raise SchemaError(f"vertex id {v!r} outside [0, {n})")


def _check_probs(probs, n):
    if len(probs) != n:
        raise SchemaError(f"expected {n} probabilities, got {len(probs)}")
    for i, p in enumerate(probs):
        if not 0.0 <= p <= 1.0:
            raise ProbabilityError(f"probability of {i} is {p}, not in [0, 1]")


# -- documents ---------------------------------------------------------------

def _dense_ids(records, what):
    ids = [r["id"] for r in records]
    if sorted(ids) != list(range(len(ids))):
        raise SchemaError(f"{what} ids must be exactly 0..{len(ids) - 1}")
    return {r["id"]: r for r in records}


def _require(doc, *keys):
    missing = [k for k in keys if k not in doc]
    if missing:
        raise SchemaError(f"missing field(s): {', '.join(missing)}")


def instance_from_dict(doc: dict) -> ProblemInstance:
    if not isinstance(doc, dict):
        raise SchemaError("document must be a mapping")
    _require(doc, "type")
    kind = doc["type"]
    try:
        if kind in ("tree", "graph"):
            _require(doc, "vertices", "edges")
            verts = _dense_ids(doc["vertices"], "vertex")
            probs = tuple(float(verts[i]["p"]) for i in range(len(verts)))
            n = len(probs)
            if kind == "graph":
                edges = tuple((int(e["u"]), int(e["v"])) for e in doc["edges"])
                return GraphInstance(n, edges, probs)
            edges = tuple((int(e["u"]), int(e["v"]), float(e["w"]))
                          for e in doc["edges"])
            inst = KCenterInstance(n, edges, probs, int(doc.get("root", 0)))
            inst.check_tree()
            return inst
        if kind == "setcover":
            _require(doc, "elements", "sets")
            elems = _dense_ids(doc["elements"], "element")
            probs = tuple(float(elems[i]["p"]) for i in range(len(elems)))
            sets = _dense_ids(doc["sets"], "set")
            family = tuple(
                (float(sets[i]["cost"]), frozenset(int(e) for e in sets[i]["members"]))
                for i in range(len(sets)))
            return SetCoverInstance(len(probs), probs, family)
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"malformed {kind} document: {exc!r}") from exc
    raise SchemaError(f"unknown instance type {kind!r}")


def instance_to_dict(inst: ProblemInstance) -> dict:
    if isinstance(inst, KCenterInstance):
        return {
            "type": "tree",
            "root": inst.root,
            "vertices": [{"id": i, "p": p} for i, p in enumerate(inst.probs)],
            "edges": [{"u": u, "v": v, "w": w} for u, v, w in inst.edges],
        }
    if isinstance(inst, GraphInstance):
        return {
            "type": "graph",
            "vertices": [{"id": i, "p": p} for i, p in enumerate(inst.probs)],
            "edges": [{"u": u, "v": v, "w": 1.0} for u, v in inst.edges],
        }
    if isinstance(inst, SetCoverInstance):
        return {
            "type": "setcover",
            "elements": [{"id": i, "p": p} for i, p in enumerate(inst.element_probs)],
            "sets": [{"id": i, "cost": c, "members": sorted(mem)}
                     for i, (c, mem) in enumerate(inst.sets)],
        }
    raise TypeError(f"not an instance: {type(inst).__name__}")


def parse_instance(text: str) -> ProblemInstance:
    """Parse and validate a JSON instance document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    return instance_from_dict(doc)


def serialize_instance(inst: ProblemInstance) -> str:
    # repr-exact floats, so parse(serialize(x)) == x
    return json.dumps(instance_to_dict(inst), indent=1)


def load_instance(path) -> ProblemInstance:
    with open(path) as fh:
        return parse_instance(fh.read())


# -- generators --------------------------------------------------------------

def _draw(rng, law, size):
    """Sample ``size`` values from a law descriptor.

    Descriptors are tuples: ``("uniform", lo, hi)``, ``("randint", lo, hi)``
    (inclusive), ``("const", value)`` or ``("choice", v1, v2, ...)``.
    """
    name, *args = law
    if name == "uniform":
        return rng.uniform(args[0], args[1], size).tolist()
    if name == "randint":
        return rng.integers(int(args[0]), int(args[1]) + 1, size).astype(float).tolist()
    if name == "const":
        return [float(args[0])] * size
    if name == "choice":
        return [float(x) for x in rng.choice(np.asarray(args, dtype=float), size)]
    raise ValueError(f"unknown law {law!r}")


def generate_random_tree(n: int, seed: int, prob_law=("uniform", 0.0, 1.0),
                         weight_law=("randint", 1, 10)) -> KCenterInstance:
    """Random attachment tree: vertex ``i`` hangs off a uniform earlier vertex.

    Integer weights are the default so that path sums are exact in floating
    point and radius comparisons never depend on summation order.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    parents = [int(rng.integers(0, i)) for i in range(1, n)]
    weights = _draw(rng, weight_law, n - 1)
    probs = _draw(rng, prob_law, n)
    edges = tuple((p, i + 1, w) for i, (p, w) in enumerate(zip(parents, weights)))
    return KCenterInstance(n, edges, tuple(probs), 0)


def generate_random_graph(n: int, seed: int, edge_prob: float = 0.4,
                          p: float | None = None) -> GraphInstance:
    """G(n, q) graph, patched so that no vertex is isolated."""
    if n < 2:
        raise ValueError("need at least 2 vertices for a graph without isolated vertices")
    rng = np.random.default_rng(seed)
    edges = {(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < edge_prob}
    for v in range(n):
        if not any(v in e for e in edges):
            u = int(rng.choice([x for x in range(n) if x != v]))
            edges.add((min(u, v), max(u, v)))
    prob = 2.0 ** -n if p is None else p
    return GraphInstance(n, tuple(sorted(edges)), (prob,) * n)


def generate_random_setcover(n: int, m: int, seed: int,
                             prob_law=("uniform", 0.0, 0.6),
                             cost_law=("randint", 1, 10),
                             density: float = 0.3) -> SetCoverInstance:
    """Random set system in which every element lies in at least one set."""
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    rng = np.random.default_rng(seed)
    members = [set(np.flatnonzero(rng.random(n) < density).tolist()) for _ in range(m)]
    for e in range(n):
        if not any(e in s for s in members):
            members[int(rng.integers(0, m))].add(e)
    costs = _draw(rng, cost_law, m)
    probs = _draw(rng, prob_law, n)
    return SetCoverInstance(n, tuple(probs),
                            tuple((c, frozenset(s)) for c, s in zip(costs, members)))


def fingerprint(inst: ProblemInstance) -> str:
    import hashlib
    doc = json.dumps(instance_to_dict(inst), sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()[:16]
