"""Assignment rules: simultaneous eating, serial dictatorship and friends.

The eating engine advances through phases.  Within a phase every agent eats
each object of its current demand set at speed 1, so an object consumed by k
agents depletes at rate k.  The phase ends at the earliest exhaustion time,
computed exactly; objects hitting zero leave the market and demand sets are
recomputed.  Each phase exhausts at least one object, so there are at most m
phases and all breakpoints are exact rationals.

The two eating rules differ only in their demand policy: the one-at-a-time
rule eats the single most preferred available object, the multi-unit rule
eats the min(quota, #remaining) most preferred available objects at once.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import AbstractSet, Callable, Sequence

from .model import (
    DiscreteAssignment,
    GuardExceeded,
    Instance,
    PreferenceProfile,
    RandomAssignment,
)

#: Maps (preference order, available objects, #not-yet-exhausted) to the set
#: of objects the agent eats next.
DemandPolicy = Callable[[Sequence[str], AbstractSet[str], int], frozenset[str]]

#: Factorials beyond 8 agents make exact priority averaging unreasonable.
RP_DEFAULT_CAP = 8


def top_k(k: int) -> DemandPolicy:
    """Demand policy eating the min(k, #remaining) most preferred available objects."""
    if k < 1:
        raise ValueError("demand size must be at least 1")

    def policy(order: Sequence[str], available: AbstractSet[str], remaining: int) -> frozenset[str]:
        take = min(k, remaining)
        chosen = []
        for o in order:
            if o in available:
                chosen.append(o)
                if len(chosen) == take:
                    break
        return frozenset(chosen)

    return policy


@dataclass(frozen=True)
class Phase:
    """Half-open eating interval [start, end) with one demand set per agent."""

    start: Fraction
    end: Fraction
    eating: tuple[frozenset[str], ...]

    @property
    def duration(self) -> Fraction:
        return self.end - self.start


@dataclass(frozen=True)
class EatingTrace:
    profile: PreferenceProfile
    phases: tuple[Phase, ...]
    assignment: RandomAssignment

    @property
    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(phase.end for phase in self.phases)


def simulate_eating(profile: PreferenceProfile, policy: DemandPolicy) -> EatingTrace:
    """Run the simultaneous eating procedure to exhaustion of all objects."""
    inst = profile.instance
    remaining = {o: Fraction(1) for o in inst.objects}
    eaten = [dict.fromkeys(inst.objects, Fraction(0)) for _ in inst.agents]
    phases: list[Phase] = []
    now = Fraction(0)
    while remaining:
        available = frozenset(remaining)
        demand = tuple(
            policy(order, available, len(remaining)) for order in profile.orders
        )
        eaters = Counter(o for s in demand for o in s)
        if not eaters:
            raise RuntimeError("demand policy returned empty sets while objects remain")
        for s in demand:
            if not s <= available:
                raise RuntimeError("demand policy chose an unavailable object")
        # Earliest exhaustion among objects currently being eaten; exact, so
        # simultaneous exhaustions land on the same breakpoint and merge here.
        dt = min(remaining[o] / k for o, k in eaters.items())
        for o, k in eaters.items():
            remaining[o] -= dt * k
        for acc, s in zip(eaten, demand):
            for o in s:
                acc[o] += dt
        phases.append(Phase(now, now + dt, demand))
        now += dt
        for o in [o for o, left in remaining.items() if left == 0]:
            del remaining[o]
    matrix = tuple(tuple(acc[o] for o in inst.objects) for acc in eaten)
    return EatingTrace(profile, tuple(phases), RandomAssignment(inst, matrix))


def mps_trace(profile: PreferenceProfile) -> EatingTrace:
    """Multi-unit eating: each agent eats its top min(quota, #remaining) objects."""
    return simulate_eating(profile, top_k(profile.instance.quota))


def mps(profile: PreferenceProfile) -> RandomAssignment:
    return mps_trace(profile).assignment


def ops_trace(profile: PreferenceProfile) -> EatingTrace:
    """One-at-a-time eating: each agent eats its single most preferred available object."""
    return simulate_eating(profile, top_k(1))


def ops(profile: PreferenceProfile) -> RandomAssignment:
    return ops_trace(profile).assignment


def _reject_relaxed(instance: Instance, rule: str) -> None:
    if instance.relaxed:
        raise ValueError(f"{rule} requires a balanced instance (m = n * quota)")


def uniform(instance: Instance) -> RandomAssignment:
    """Every agent gets every object with probability 1/n."""
    _reject_relaxed(instance, "the uniform rule")
    share = Fraction(1, instance.num_agents)
    row = tuple(share for _ in instance.objects)
    return RandomAssignment(instance, tuple(row for _ in instance.agents))


def serial_dictator(profile: PreferenceProfile, priority: Sequence[str]) -> DiscreteAssignment:
    """Agents pick their best `quota` remaining objects in priority order."""
    inst = profile.instance
    _reject_relaxed(inst, "serial dictatorship")
    if list(sorted(priority)) != sorted(inst.agents):
        raise ValueError("priority order must list every agent exactly once")
    owners: dict[str, str] = {}
    taken: set[str] = set()
    for agent in priority:
        picked = 0
        for o in profile.order_of(agent):
            if o not in taken:
                owners[o] = agent
                taken.add(o)
                picked += 1
                if picked == inst.quota:
                    break
    return DiscreteAssignment(inst, tuple(owners[o] for o in inst.objects))


def priority_rule(profile: PreferenceProfile) -> RandomAssignment:
    """Serial dictatorship under the fixed priority order of the instance's agents."""
    from .model import discrete_to_random

    return discrete_to_random(serial_dictator(profile, profile.instance.agents))


def random_priority(profile: PreferenceProfile, cap: int = RP_DEFAULT_CAP) -> RandomAssignment:
    """Exact average of serial dictatorship over all n! priority orders.

    Refuses instances with more than `cap` agents: the average is exact, so
    there is no sampling fallback.
    """
    inst = profile.instance
    _reject_relaxed(inst, "random priority")
    n = inst.num_agents
    if n > cap:
        raise GuardExceeded(
            f"exact random priority is infeasible for {n} agents "
            f"({n}! = {math.factorial(n)} priority orders exceeds cap {cap}!)"
        )
    totals = [[Fraction(0)] * inst.num_objects for _ in inst.agents]
    for priority in itertools.permutations(inst.agents):
        picked = serial_dictator(profile, priority)
        for j, owner in enumerate(picked.owners):
            totals[inst.agent_index(owner)][j] += 1
    weight = Fraction(1, math.factorial(n))
    matrix = tuple(tuple(v * weight for v in row) for row in totals)
    return RandomAssignment(inst, matrix)
