"""Chance-constrained (non-adaptive) stochastic set cover.

Leaving element ``j`` uncovered costs a penalty ``l_j = ln(1/(1-p_j))``; a
selection meets ``P(some present element is uncovered) <= rho`` exactly when
the uncovered penalties sum to at most ``l = ln(1/(1-rho))``. That turns the
problem into a partial set cover, solved here greedily. Feasibility of the
returned cover is always re-certified with the probability itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .instance import SetCoverInstance

PENALTY_SLACK = 1e-12
PROBABILITY_SLACK = 1e-12
MANDATORY = math.inf


class InfeasibleError(Exception):
    pass


@dataclass(frozen=True)
class PartialCoverInstance:
    costs: tuple[float, ...]
    members: tuple[frozenset[int], ...]
    penalties: tuple[float, ...]    # MANDATORY for elements that are surely present
    budget: float

    @property
    def n(self) -> int:
        return len(self.penalties)

    def uncovered_penalty(self, chosen) -> float:
        covered = set().union(*(self.members[i] for i in chosen))
        return math.fsum(q for e, q in enumerate(self.penalties) if e not in covered)

    def is_feasible(self, chosen) -> bool:
        return self.uncovered_penalty(chosen) <= self.budget + PENALTY_SLACK


@dataclass(frozen=True)
class CoverSolution:
    chosen: tuple[int, ...]
    cost: float
    uncovered: tuple[int, ...]
    violation_probability: float


def penalty(p: float) -> float:
    """``ln(1/(1-p))``; infinite for an element that is always present."""
    return MANDATORY if p >= 1.0 else -math.log1p(-p)


def to_partial_cover(inst: SetCoverInstance, rho: float) -> PartialCoverInstance:
    if not 0 < rho <= 1:
        raise ValueError("rho must lie in (0, 1]")
    orphans = [e for e in inst.uncoverable_elements() if inst.element_probs[e] >= 1.0]
    if orphans:
        raise InfeasibleError(f"elements {orphans} are always present but in no set")
    return PartialCoverInstance(
        costs=tuple(c for c, _ in inst.sets),
        members=tuple(m for _, m in inst.sets),
        penalties=tuple(penalty(p) for p in inst.element_probs),
        budget=penalty(rho),
    )


def greedy_partial_cover(pc: PartialCoverInstance) -> list[int]:
    """Greedy partial cover followed by reverse-order pruning.

    Always-present elements are covered first by the plain set-cover greedy
    (new elements per unit cost). After that each step takes the set with the
    best ratio of newly covered penalty, capped at the remaining excess over
    the budget, to cost. Sets that became redundant are then dropped, latest
    pick first.
    """
    mandatory = {e for e, q in enumerate(pc.penalties) if q == MANDATORY}
    if mandatory - set().union(*pc.members):
        raise InfeasibleError("an always-present element lies in no set")
    uncovered = set(range(pc.n))
    chosen: list[int] = []
    avail = set(range(len(pc.costs)))

    def pick(score):
        best, best_val = None, 0.0
        for i in sorted(avail):
            val = score(i) / pc.costs[i]
            if val > best_val:
                best, best_val = i, val
        return best

    while mandatory & uncovered:
        i = pick(lambda i: len(pc.members[i] & mandatory & uncovered))
        chosen.append(i)
        avail.discard(i)
        uncovered -= pc.members[i]

    def excess():
        return math.fsum(pc.penalties[e] for e in uncovered) - pc.budget

    while excess() > PENALTY_SLACK:
        gap = excess()
        i = pick(lambda i: min(gap, math.fsum(pc.penalties[e] for e in pc.members[i] & uncovered)))
        if i is None:
            raise InfeasibleError("covering every coverable element still exceeds the budget")
        chosen.append(i)
        avail.discard(i)
        uncovered -= pc.members[i]

    for i in reversed(list(chosen)):
        rest = [s for s in chosen if s != i]
        if pc.is_feasible(rest):
            chosen = rest
    return chosen


def exact_violation_probability(inst: SetCoverInstance, chosen) -> float:
    """``1 - prod(1 - p_j)`` over the elements no chosen set covers."""
    covered = set().union(*(inst.sets[i][1] for i in chosen))
    keep = math.prod(1.0 - p for e, p in enumerate(inst.element_probs) if e not in covered)
    return 1.0 - keep


def solve_chance_setcover(inst: SetCoverInstance, rho: float) -> CoverSolution:
    pc = to_partial_cover(inst, rho)
    chosen = sorted(greedy_partial_cover(pc))
    violation = exact_violation_probability(inst, chosen)
    if violation > rho + PROBABILITY_SLACK:
        raise InfeasibleError(
            f"greedy cover has violation {violation}, above rho = {rho}")
    covered = set().union(*(inst.sets[i][1] for i in chosen))
    return CoverSolution(
        chosen=tuple(chosen),
        cost=math.fsum(inst.sets[i][0] for i in chosen),
        uncovered=tuple(e for e in range(inst.n) if e not in covered),
        violation_probability=violation,
    )
