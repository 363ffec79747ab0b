"""Core domain types for multi-unit random assignment.

An instance has n agents and m objects with a per-agent quota c (m = n * c
unless the instance is explicitly relaxed).  Agents hold strict preference
orders over objects.  A random assignment is an n-by-m matrix of exact
rational probabilities; a discrete assignment maps each object to one owner.

All arithmetic is exact: probabilities are `fractions.Fraction` and floats
are rejected at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

#: The single numeric type used everywhere.  Always in lowest terms with a
#: positive denominator, which `fractions.Fraction` guarantees.
Rational = Fraction


class GuardExceeded(Exception):
    """An enumeration was refused because it would exceed its size cap."""


def _check_rational(value: object, where: str) -> Fraction:
    # ints are fine, floats never are: exactness is the whole point.
    if isinstance(value, float):
        raise TypeError(f"{where}: floating point value {value!r} rejected")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    raise TypeError(f"{where}: expected a rational, got {type(value).__name__}")


@dataclass(frozen=True)
class Instance:
    """Agents, objects and the per-agent quota.

    `quota` is the number of objects each agent receives.  For a balanced
    instance m = n * quota.  A relaxed instance (m not a multiple of n) must
    be flagged explicitly and requires quota = ceil(m / n); only the eating
    rules accept relaxed instances.
    """

    agents: tuple[str, ...]
    objects: tuple[str, ...]
    quota: int
    relaxed: bool = False

    def __post_init__(self) -> None:
        if not self.agents:
            raise ValueError("instance needs at least one agent")
        if not self.objects:
            raise ValueError("instance needs at least one object")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("duplicate agent ids")
        if len(set(self.objects)) != len(self.objects):
            raise ValueError("duplicate object ids")
        if set(self.agents) & set(self.objects):
            raise ValueError("agent and object ids must be disjoint")
        if not isinstance(self.quota, int) or self.quota < 1:
            raise ValueError(f"quota must be a positive integer, got {self.quota!r}")
        n, m = len(self.agents), len(self.objects)
        if self.relaxed:
            if self.quota != math.ceil(Fraction(m, n)):
                raise ValueError(
                    f"relaxed instance needs quota = ceil(m/n) = {math.ceil(Fraction(m, n))}, "
                    f"got {self.quota}"
                )
        elif m != n * self.quota:
            raise ValueError(
                f"{m} objects cannot be split among {n} agents with quota "
                f"{self.quota}; pass relaxed=True to allow this"
            )

    @property
    def num_agents(self) -> int:
        return len(self.agents)

    @property
    def num_objects(self) -> int:
        return len(self.objects)

    @property
    def row_target(self) -> Fraction:
        """Exact per-agent total probability mass: m / n."""
        return Fraction(self.num_objects, self.num_agents)

    def agent_index(self, agent: str) -> int:
        try:
            return self.agents.index(agent)
        except ValueError:
            raise KeyError(f"unknown agent {agent!r}") from None

    def object_index(self, obj: str) -> int:
        try:
            return self.objects.index(obj)
        except ValueError:
            raise KeyError(f"unknown object {obj!r}") from None


@dataclass(frozen=True)
class PreferenceProfile:
    """One strict preference order per agent, most preferred first."""

    instance: Instance
    orders: tuple[tuple[str, ...], ...]

    def __post_init__(self) -> None:
        inst = self.instance
        if len(self.orders) != inst.num_agents:
            raise ValueError(
                f"expected {inst.num_agents} preference orders, got {len(self.orders)}"
            )
        objs = set(inst.objects)
        for agent, order in zip(inst.agents, self.orders):
            if len(order) != len(objs) or set(order) != objs:
                raise ValueError(
                    f"preferences of agent {agent!r} are not a strict order "
                    f"over the object set"
                )

    def order_of(self, agent: str) -> tuple[str, ...]:
        return self.orders[self.instance.agent_index(agent)]

    def with_order(self, agent: str, order: Sequence[str]) -> "PreferenceProfile":
        """Profile where `agent` reports `order` and everyone else is unchanged."""
        i = self.instance.agent_index(agent)
        new = list(self.orders)
        new[i] = tuple(order)
        return PreferenceProfile(self.instance, tuple(new))

    def with_orders(self, reports: Mapping[str, Sequence[str]]) -> "PreferenceProfile":
        new = list(self.orders)
        for agent, order in reports.items():
            new[self.instance.agent_index(agent)] = tuple(order)
        return PreferenceProfile(self.instance, tuple(new))


@dataclass(frozen=True)
class RandomAssignment:
    """Row-per-agent, column-per-object matrix of exact probabilities."""

    instance: Instance
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        inst = self.instance
        if len(self.matrix) != inst.num_agents:
            raise ValueError(
                f"matrix has {len(self.matrix)} rows, expected {inst.num_agents}"
            )
        checked = []
        for agent, row in zip(inst.agents, self.matrix):
            if len(row) != inst.num_objects:
                raise ValueError(
                    f"row of agent {agent!r} has {len(row)} entries, "
                    f"expected {inst.num_objects}"
                )
            checked.append(
                tuple(_check_rational(v, f"entry ({agent}, {o})")
                      for o, v in zip(inst.objects, row))
            )
        object.__setattr__(self, "matrix", tuple(checked))

    def entry(self, agent: str, obj: str) -> Fraction:
        inst = self.instance
        return self.matrix[inst.agent_index(agent)][inst.object_index(obj)]

    def row(self, index: int) -> tuple[Fraction, ...]:
        return self.matrix[index]

    def allocation(self, agent: str) -> dict[str, Fraction]:
        """Row of `agent` as an object -> probability mapping."""
        row = self.matrix[self.instance.agent_index(agent)]
        return dict(zip(self.instance.objects, row))


@dataclass(frozen=True)
class DiscreteAssignment:
    """Each object owned by exactly one agent; bundles need not be balanced."""

    instance: Instance
    owners: tuple[str, ...]

    def __post_init__(self) -> None:
        inst = self.instance
        if len(self.owners) != inst.num_objects:
            raise ValueError(
                f"expected one owner per object ({inst.num_objects}), "
                f"got {len(self.owners)}"
            )
        known = set(inst.agents)
        for obj, owner in zip(inst.objects, self.owners):
            if owner not in known:
                raise ValueError(f"object {obj!r} owned by unknown agent {owner!r}")

    def owner_of(self, obj: str) -> str:
        return self.owners[self.instance.object_index(obj)]

    def bundle(self, agent: str) -> tuple[str, ...]:
        return tuple(o for o, a in zip(self.instance.objects, self.owners) if a == agent)

    def bundle_sizes(self) -> dict[str, int]:
        sizes = {a: 0 for a in self.instance.agents}
        for a in self.owners:
            sizes[a] += 1
        return sizes

    @property
    def is_balanced(self) -> bool:
        return all(s == self.instance.quota for s in self.bundle_sizes().values())

    def grid(self) -> tuple[tuple[Fraction, ...], ...]:
        """0/1 matrix of this assignment (rows may be unbalanced)."""
        return tuple(
            tuple(Fraction(1) if owner == agent else Fraction(0)
                  for owner in self.owners)
            for agent in self.instance.agents
        )


@dataclass(frozen=True)
class ValidationResult:
    """Feasibility verdict; `reason` names the first violated constraint."""

    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_assignment(assignment: RandomAssignment) -> ValidationResult:
    """Check entry bounds, unit column sums and per-agent row sums.

    Shape problems raise ValueError (they are structural, not a matter of
    feasibility).  Constraint violations are reported in scan order: entries
    row-major first, then columns, then rows.
    """
    inst = assignment.instance
    if len(assignment.matrix) != inst.num_agents or any(
        len(row) != inst.num_objects for row in assignment.matrix
    ):
        raise ValueError("matrix dimensions do not match the instance")
    for agent, row in zip(inst.agents, assignment.matrix):
        for obj, v in zip(inst.objects, row):
            if v < 0 or v > 1:
                return ValidationResult(
                    False, f"entry ({agent}, {obj}) = {v} outside [0, 1]"
                )
    for j, obj in enumerate(inst.objects):
        total = sum(row[j] for row in assignment.matrix)
        if total != 1:
            return ValidationResult(
                False, f"column {obj} sums to {total}, expected 1"
            )
    target = inst.row_target
    for agent, row in zip(inst.agents, assignment.matrix):
        total = sum(row)
        if total != target:
            return ValidationResult(
                False, f"row {agent} sums to {total}, expected {target}"
            )
    return ValidationResult(True)


def discrete_to_random(assignment: DiscreteAssignment) -> RandomAssignment:
    """Embed a balanced discrete assignment as a 0/1 random assignment."""
    if not assignment.is_balanced:
        sizes = assignment.bundle_sizes()
        raise ValueError(
            f"assignment is unbalanced (bundle sizes {sizes}); only balanced "
            f"assignments embed as random assignments"
        )
    return RandomAssignment(assignment.instance, assignment.grid())


def _check_agent_permutation(instance: Instance, pi: Mapping[str, str]) -> None:
    if set(pi.keys()) != set(instance.agents) or set(pi.values()) != set(instance.agents):
        raise ValueError("not a permutation of the agent set")


def _check_object_permutation(instance: Instance, sigma: Mapping[str, str]) -> None:
    if set(sigma.keys()) != set(instance.objects) or set(sigma.values()) != set(instance.objects):
        raise ValueError("not a permutation of the object set")


def permute_agents(x, pi: Mapping[str, str]):
    """Relabel agents by the bijection `pi`: agent pi(a) takes over a's role.

    For a profile, agent pi(a) receives a's preference order; for a random
    assignment, a's row moves to pi(a).  Composing with the inverse is the
    identity.
    """
    if isinstance(x, PreferenceProfile):
        inst = x.instance
        _check_agent_permutation(inst, pi)
        new_orders: list[tuple[str, ...]] = [()] * inst.num_agents
        for agent, order in zip(inst.agents, x.orders):
            new_orders[inst.agent_index(pi[agent])] = order
        return PreferenceProfile(inst, tuple(new_orders))
    if isinstance(x, RandomAssignment):
        inst = x.instance
        _check_agent_permutation(inst, pi)
        new_rows: list[tuple[Fraction, ...]] = [()] * inst.num_agents
        for agent, row in zip(inst.agents, x.matrix):
            new_rows[inst.agent_index(pi[agent])] = row
        return RandomAssignment(inst, tuple(new_rows))
    raise TypeError(f"cannot permute agents of {type(x).__name__}")


def permute_objects(x, sigma: Mapping[str, str]):
    """Relabel objects by the bijection `sigma`.

    For a profile, every occurrence of object o becomes sigma(o); for a
    random assignment, the column of o moves to sigma(o).
    """
    if isinstance(x, PreferenceProfile):
        inst = x.instance
        _check_object_permutation(inst, sigma)
        return PreferenceProfile(
            inst, tuple(tuple(sigma[o] for o in order) for order in x.orders)
        )
    if isinstance(x, RandomAssignment):
        inst = x.instance
        _check_object_permutation(inst, sigma)
        new_rows = []
        for row in x.matrix:
            new_row: list[Fraction] = [Fraction(0)] * inst.num_objects
            for obj, v in zip(inst.objects, row):
                new_row[inst.object_index(sigma[obj])] = v
            new_rows.append(tuple(new_row))
        return RandomAssignment(inst, tuple(new_rows))
    raise TypeError(f"cannot permute objects of {type(x).__name__}")
