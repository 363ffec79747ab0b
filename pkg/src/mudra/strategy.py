"""Deterministic searches for profitable misreports.

Misreports range over all strict orders of the object set, enumerated in a
canonical lexicographic sequence (permutations of the instance's object
tuple), so the first witness found is reproducible.  Three individual
notions are covered:

* weak SD violation: some misreport's outcome strictly SD-dominates truth;
* DL violation: some misreport's outcome beats truth downward
  lexicographically;
* SD violation: the truthful outcome fails to weakly SD-dominate some
  misreport's outcome (incomparability already suffices).

Group manipulations require every coalition member to strictly SD-improve
under one joint misreport.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .model import GuardExceeded, PreferenceProfile, RandomAssignment
from .order import DlVerdict, SdVerdict, dl_compare, sd_compare

#: Factorial growth makes exhaustive misreport scans unreasonable past this
#: many objects.
DEFAULT_MAX_OBJECTS = 6

#: Cap on the size of a joint misreport space (m! to the coalition size).
DEFAULT_JOINT_CAP = 10**6

Rule = Callable[[PreferenceProfile], RandomAssignment]


class ManipulationKind(enum.Enum):
    STRICT_SD = "strict-sd"
    DL_IMPROVEMENT = "dl-improvement"
    NOT_SD_DOMINATED = "not-sd-dominated"


@dataclass(frozen=True)
class Manipulation:
    kind: ManipulationKind
    coalition: tuple[str, ...]
    misreports: tuple[tuple[str, tuple[str, ...]], ...]
    truthful: RandomAssignment
    manipulated: RandomAssignment

    def misreport_of(self, agent: str) -> tuple[str, ...]:
        for a, order in self.misreports:
            if a == agent:
                return order
        raise KeyError(f"agent {agent!r} is not part of this manipulation")


def all_strict_orders(
    objects: Sequence[str], max_objects: int = DEFAULT_MAX_OBJECTS
) -> Iterator[tuple[str, ...]]:
    """All strict orders over `objects` in canonical lexicographic sequence."""
    if len(objects) > max_objects:
        raise GuardExceeded(
            f"{len(objects)}! = {math.factorial(len(objects))} strict orders "
            f"exceed the cap of {max_objects} objects"
        )
    return itertools.permutations(objects)


def _reject_relaxed(profile: PreferenceProfile) -> None:
    if profile.instance.relaxed:
        raise ValueError("manipulation search is only defined for balanced instances")


def _scan_individual(
    rule: Rule,
    profile: PreferenceProfile,
    agent: str,
    qualifies: Callable[[dict, dict, tuple[str, ...]], bool],
    kind: ManipulationKind,
    max_objects: int,
) -> Manipulation | None:
    _reject_relaxed(profile)
    inst = profile.instance
    true_order = profile.order_of(agent)
    truthful = rule(profile)
    truth_alloc = truthful.allocation(agent)
    for mis in all_strict_orders(inst.objects, max_objects):
        if mis == true_order:
            continue
        outcome = rule(profile.with_order(agent, mis))
        if qualifies(outcome.allocation(agent), truth_alloc, true_order):
            return Manipulation(
                kind=kind,
                coalition=(agent,),
                misreports=((agent, mis),),
                truthful=truthful,
                manipulated=outcome,
            )
    return None


def find_weak_sd_manipulation(
    rule: Rule, profile: PreferenceProfile, agent: str,
    max_objects: int = DEFAULT_MAX_OBJECTS,
) -> Manipulation | None:
    """First misreport whose outcome strictly SD-dominates the truthful one."""
    return _scan_individual(
        rule, profile, agent,
        lambda alt, truth, order: sd_compare(alt, truth, order)
        is SdVerdict.FIRST_STRICTLY_DOMINATES,
        ManipulationKind.STRICT_SD,
        max_objects,
    )


def find_dl_manipulation(
    rule: Rule, profile: PreferenceProfile, agent: str,
    max_objects: int = DEFAULT_MAX_OBJECTS,
) -> Manipulation | None:
    """First misreport whose outcome wins downward lexicographically."""
    return _scan_individual(
        rule, profile, agent,
        lambda alt, truth, order: dl_compare(alt, truth, order) is DlVerdict.FIRST,
        ManipulationKind.DL_IMPROVEMENT,
        max_objects,
    )


def find_sd_manipulation(
    rule: Rule, profile: PreferenceProfile, agent: str,
    max_objects: int = DEFAULT_MAX_OBJECTS,
) -> Manipulation | None:
    """First misreport whose outcome the truthful one fails to weakly dominate."""
    return _scan_individual(
        rule, profile, agent,
        lambda alt, truth, order: sd_compare(truth, alt, order)
        not in (SdVerdict.EQUAL, SdVerdict.FIRST_STRICTLY_DOMINATES),
        ManipulationKind.NOT_SD_DOMINATED,
        max_objects,
    )


def find_group_manipulation(
    rule: Rule,
    profile: PreferenceProfile,
    coalition: Sequence[str],
    max_objects: int = DEFAULT_MAX_OBJECTS,
    joint_cap: int = DEFAULT_JOINT_CAP,
) -> Manipulation | None:
    """First joint misreport making every coalition member strictly better.

    Joint misreports are enumerated as the canonical product of per-member
    misreport sequences; every member's outcome must strictly SD-dominate
    their truthful outcome under their true order.
    """
    _reject_relaxed(profile)
    inst = profile.instance
    members = tuple(coalition)
    if not members:
        raise ValueError("coalition must not be empty")
    if len(set(members)) != len(members):
        raise ValueError("coalition lists an agent twice")
    for a in members:
        inst.agent_index(a)  # raises on unknown agents
    m = inst.num_objects
    if m > max_objects:
        raise GuardExceeded(
            f"{m}! strict orders exceed the cap of {max_objects} objects"
        )
    if math.factorial(m) ** len(members) > joint_cap:
        raise GuardExceeded(
            f"joint misreport space ({m}!)^{len(members)} exceeds the cap of {joint_cap}"
        )
    true_orders = {a: profile.order_of(a) for a in members}
    truthful = rule(profile)
    truth_allocs = {a: truthful.allocation(a) for a in members}
    for joint in itertools.product(
        itertools.permutations(inst.objects), repeat=len(members)
    ):
        reports = dict(zip(members, joint))
        if all(reports[a] == true_orders[a] for a in members):
            continue
        outcome = rule(profile.with_orders(reports))
        if all(
            sd_compare(outcome.allocation(a), truth_allocs[a], true_orders[a])
            is SdVerdict.FIRST_STRICTLY_DOMINATES
            for a in members
        ):
            return Manipulation(
                kind=ManipulationKind.STRICT_SD,
                coalition=members,
                misreports=tuple((a, reports[a]) for a in members),
                truthful=truthful,
                manipulated=outcome,
            )
    return None
