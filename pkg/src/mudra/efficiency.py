"""Efficiency notions: perfection, SD-dominance, SD-efficiency, ex-post
efficiency, unanimity, and decomposition of random assignments into lotteries
over discrete assignments.

SD-efficiency is decided by an exact linear program: look for a feasible
random assignment whose prefix sums weakly improve on the input for every
agent, maximizing the total prefix surplus.  The input is efficient exactly
when the optimal surplus is zero.  Ex-post efficiency enumerates discrete
assignments, keeps the SD-efficient ones (for unbalanced candidates the same
program runs with row sums pinned to that candidate's bundle sizes) and asks
whether the input is a convex combination of the survivors.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

from .model import (
    DiscreteAssignment,
    GuardExceeded,
    Instance,
    PreferenceProfile,
    RandomAssignment,
    discrete_to_random,
    validate_assignment,
)
from .order import prefix_sums, sd_weakly_dominates
from .ratlp import Constraint, LinearProgram, convex_membership, solve

#: Default cap on the number of discrete assignments an enumeration may visit.
DEFAULT_ENUMERATION_CAP = 10**6


@dataclass(frozen=True)
class EfficiencyVerdict:
    property_name: str
    holds: bool
    dominator: RandomAssignment | None = None
    decomposition: tuple[tuple[Fraction, DiscreteAssignment], ...] | None = None
    survivors: tuple[DiscreteAssignment, ...] | None = None
    farkas: tuple[Fraction, ...] | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.holds


def _reject_relaxed(instance: Instance, what: str) -> None:
    if instance.relaxed:
        raise ValueError(f"{what} is only defined for balanced instances")


def perfect_assignment(profile: PreferenceProfile) -> DiscreteAssignment | None:
    """The assignment giving everyone their top quota objects, if one exists."""
    inst = profile.instance
    _reject_relaxed(inst, "perfection")
    owners: dict[str, str] = {}
    for agent, order in zip(inst.agents, profile.orders):
        for obj in order[: inst.quota]:
            if obj in owners:
                return None
            owners[obj] = agent
    return DiscreteAssignment(inst, tuple(owners[o] for o in inst.objects))


def sd_dominates(q: RandomAssignment, p: RandomAssignment, profile: PreferenceProfile) -> bool:
    """True when every agent weakly prefers q to p and someone strictly does."""
    if q.instance != profile.instance or p.instance != profile.instance:
        raise ValueError("assignments and profile must share one instance")
    strict = False
    for agent in profile.instance.agents:
        qa, pa = q.allocation(agent), p.allocation(agent)
        order = profile.order_of(agent)
        if not sd_weakly_dominates(qa, pa, order):
            return False
        if qa != pa:
            strict = True
    return strict


def _dominance_lp(
    grid: Sequence[Sequence[Fraction]],
    profile: PreferenceProfile,
    row_targets: Sequence[Fraction],
) -> tuple[LinearProgram, Fraction]:
    """Surplus-maximizing program over assignments weakly dominating `grid`.

    Returns the program and the constant to subtract from its optimum to get
    the total prefix surplus.
    """
    inst = profile.instance
    n, m = inst.num_agents, inst.num_objects
    names = tuple(f"q_{i}_{j}" for i in range(n) for j in range(m))
    nvars = n * m
    var = lambda i, j: i * m + j

    constraints = []
    for j in range(m):
        coeffs = [Fraction(0)] * nvars
        for i in range(n):
            coeffs[var(i, j)] = Fraction(1)
        constraints.append(Constraint(tuple(coeffs), "=", Fraction(1)))
    for i in range(n):
        coeffs = [Fraction(0)] * nvars
        for j in range(m):
            coeffs[var(i, j)] = Fraction(1)
        constraints.append(Constraint(tuple(coeffs), "=", Fraction(row_targets[i])))

    base = Fraction(0)
    objective = [Fraction(0)] * nvars
    for i, order in enumerate(profile.orders):
        amounts = {o: Fraction(grid[i][inst.object_index(o)]) for o in inst.objects}
        sums = prefix_sums(amounts, order)
        # One constraint per proper prefix; the full prefix is the row sum.
        coeffs = [Fraction(0)] * nvars
        for t, obj in enumerate(order[:-1]):
            coeffs = list(coeffs)
            coeffs[var(i, inst.object_index(obj))] = Fraction(1)
            constraints.append(Constraint(tuple(coeffs), ">=", sums[t]))
            base += sums[t]
        for rank, obj in enumerate(order):
            weight = m - 1 - rank  # number of proper prefixes containing obj
            if weight:
                objective[var(i, inst.object_index(obj))] += Fraction(weight)

    lp = LinearProgram(
        variables=names,
        constraints=tuple(constraints),
        objective=tuple(objective),
        sense="max",
        nonneg=tuple(True for _ in names),
    )
    return lp, base


def _sd_efficient_grid(
    grid: Sequence[Sequence[Fraction]],
    profile: PreferenceProfile,
    row_targets: Sequence[Fraction],
) -> tuple[bool, RandomAssignment | None]:
    lp, base = _dominance_lp(grid, profile, row_targets)
    result = solve(lp)
    if result.status != "optimal":
        raise RuntimeError(
            f"dominance program must be feasible and bounded, got {result.status}"
        )
    if result.value == base:
        return True, None
    assert result.value > base
    inst = profile.instance
    m = inst.num_objects
    matrix = tuple(
        tuple(result.point[f"q_{i}_{j}"] for j in range(m))
        for i in range(inst.num_agents)
    )
    dominator = None
    if all(t == inst.row_target for t in row_targets):
        dominator = RandomAssignment(inst, matrix)
    return False, dominator


def is_sd_efficient(p: RandomAssignment, profile: PreferenceProfile) -> EfficiencyVerdict:
    """Exact SD-efficiency test; failures carry a dominating assignment."""
    inst = profile.instance
    _reject_relaxed(inst, "SD-efficiency")
    if p.instance != inst:
        raise ValueError("assignment and profile must share one instance")
    check = validate_assignment(p)
    if not check.ok:
        raise ValueError(f"input is not a feasible random assignment: {check.reason}")
    targets = [inst.row_target] * inst.num_agents
    holds, dominator = _sd_efficient_grid(p.matrix, profile, targets)
    return EfficiencyVerdict("sd-efficiency", holds, dominator=dominator)


def _discrete_is_sd_efficient(d: DiscreteAssignment, profile: PreferenceProfile) -> bool:
    targets = [Fraction(s) for s in
               (d.bundle_sizes()[a] for a in d.instance.agents)]
    holds, _ = _sd_efficient_grid(d.grid(), profile, targets)
    return holds


def enumerate_discrete(
    instance: Instance, balanced: bool = True, cap: int = DEFAULT_ENUMERATION_CAP
) -> Iterator[DiscreteAssignment]:
    """All discrete assignments in a fixed canonical order.

    Balanced: every agent owns exactly `quota` objects.  Unbalanced: every
    owner map, bundle sizes unconstrained.  Refuses to start when the count
    exceeds `cap`.
    """
    n, m = instance.num_agents, instance.num_objects
    if balanced:
        _reject_relaxed(instance, "balanced enumeration")
        count = math.factorial(m)
        for _ in range(n):
            count //= math.factorial(instance.quota)
    else:
        count = n**m
    if count > cap:
        raise GuardExceeded(
            f"{count} discrete assignments exceed the cap of {cap}"
        )

    if not balanced:
        def gen_unbalanced() -> Iterator[DiscreteAssignment]:
            for owners in itertools.product(instance.agents, repeat=m):
                yield DiscreteAssignment(instance, owners)

        return gen_unbalanced()

    def gen_balanced() -> Iterator[DiscreteAssignment]:
        quota = instance.quota
        objects = instance.objects

        def fill(remaining: tuple[str, ...], agents: tuple[str, ...], acc: dict):
            if not agents:
                yield DiscreteAssignment(
                    instance, tuple(acc[o] for o in objects)
                )
                return
            head, rest = agents[0], agents[1:]
            for bundle in itertools.combinations(remaining, quota):
                for o in bundle:
                    acc[o] = head
                left = tuple(o for o in remaining if o not in bundle)
                yield from fill(left, rest, acc)

        yield from fill(objects, instance.agents, {})

    return gen_balanced()


def is_ex_post_efficient(
    p: RandomAssignment,
    profile: PreferenceProfile,
    allow_unbalanced: bool = False,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> EfficiencyVerdict:
    """Is `p` a convex combination of SD-efficient discrete assignments?

    With `allow_unbalanced` the candidate pool is every owner map and each
    candidate is screened with row sums pinned to its own bundle sizes;
    otherwise only balanced assignments compete.
    """
    inst = profile.instance
    _reject_relaxed(inst, "ex-post efficiency")
    check = validate_assignment(p)
    if not check.ok:
        raise ValueError(f"input is not a feasible random assignment: {check.reason}")
    candidates = list(enumerate_discrete(inst, balanced=not allow_unbalanced, cap=cap))
    survivors = tuple(
        d for d in candidates if _discrete_is_sd_efficient(d, profile)
    )
    target = [v for row in p.matrix for v in row]
    generators = [[v for row in d.grid() for v in row] for d in survivors]
    hull = convex_membership(target, generators)
    if hull.in_hull:
        decomposition = tuple(
            (w, d) for w, d in zip(hull.weights, survivors) if w != 0
        )
        return EfficiencyVerdict(
            "ex-post-efficiency", True,
            decomposition=decomposition, survivors=survivors,
        )
    return EfficiencyVerdict(
        "ex-post-efficiency", False, survivors=survivors, farkas=hull.farkas,
        detail=f"not in the convex hull of the {len(survivors)} SD-efficient "
               f"discrete assignments",
    )


def decompose_lottery(
    p: RandomAssignment,
) -> tuple[tuple[Fraction, DiscreteAssignment], ...]:
    """Write `p` as an exact lottery over balanced discrete assignments.

    Iteratively finds a balanced discrete assignment supported on the
    positive entries, subtracts it with the largest feasible weight, and
    repeats; every round zeroes at least one entry, so there are at most
    n * m terms and the weights sum to exactly one.
    """
    inst = p.instance
    _reject_relaxed(inst, "lottery decomposition")
    check = validate_assignment(p)
    if not check.ok:
        raise ValueError(f"input is not a feasible random assignment: {check.reason}")
    n, m, quota = inst.num_agents, inst.num_objects, inst.quota
    work = [list(row) for row in p.matrix]
    terms: list[tuple[Fraction, DiscreteAssignment]] = []
    total = Fraction(0)
    while total < 1:
        owner = _balanced_support_assignment(work, n, m, quota)
        weight = min(work[owner[j]][j] for j in range(m))
        assert weight > 0
        for j in range(m):
            work[owner[j]][j] -= weight
        total += weight
        terms.append(
            (weight, DiscreteAssignment(inst, tuple(inst.agents[owner[j]] for j in range(m))))
        )
    assert all(v == 0 for row in work for v in row)
    return tuple(terms)


def _balanced_support_assignment(
    work: Sequence[Sequence[Fraction]], n: int, m: int, quota: int
) -> list[int]:
    """Match every object to an agent with positive entry, quota per agent.

    Augmenting-path matching over agent slots; existence follows from the
    integrality of transportation polytopes, so failure means the input was
    not a valid partial lottery.
    """
    slot_obj: dict[tuple[int, int], int] = {}
    owner = [-1] * m

    def try_assign(j: int, seen: set[tuple[int, int]]) -> bool:
        for i in range(n):
            if work[i][j] > 0:
                for k in range(quota):
                    slot = (i, k)
                    if slot in seen:
                        continue
                    seen.add(slot)
                    if slot not in slot_obj or try_assign(slot_obj[slot], seen):
                        slot_obj[slot] = j
                        owner[j] = i
                        return True
        return False

    for j in range(m):
        if not try_assign(j, set()):
            raise RuntimeError(
                "no balanced assignment on the support; input is not a valid lottery"
            )
    return owner


def check_unanimity(
    rule: Callable[[PreferenceProfile], RandomAssignment],
    profile: PreferenceProfile,
) -> EfficiencyVerdict:
    """When a perfect assignment exists the rule must return exactly it."""
    _reject_relaxed(profile.instance, "unanimity")
    perfect = perfect_assignment(profile)
    if perfect is None:
        return EfficiencyVerdict(
            "unanimity", True, detail="vacuous: no perfect assignment exists"
        )
    outcome = rule(profile)
    wanted = discrete_to_random(perfect)
    if outcome.matrix == wanted.matrix:
        return EfficiencyVerdict("unanimity", True, decomposition=((Fraction(1), perfect),))
    return EfficiencyVerdict(
        "unanimity", False, survivors=(perfect,),
        detail="a perfect assignment exists but the rule returns something else",
    )
