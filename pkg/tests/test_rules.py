"""Assignment rules: golden outcomes, eating-trace invariants, cross-checks.

The micro-step oracle re-enacts the eating process on the fixed time grid
1/n^m.  Every exhaustion time of the event-driven engine has a denominator
dividing n^m (each of the at-most-m phases multiplies denominators by at
most n), so the fixed-step replay hits every breakpoint exactly and must
reproduce the engine's outcome with zero error.
"""

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mudra.model import GuardExceeded, Instance, PreferenceProfile, validate_assignment
from mudra.order import sd_weakly_dominates
from mudra.rules import (
    mps,
    mps_trace,
    ops,
    ops_trace,
    priority_rule,
    random_priority,
    serial_dictator,
    top_k,
    uniform,
)

F = Fraction


def make_profile(orders, quota=None, relaxed=False):
    orders = tuple(tuple(o) for o in orders)
    objects = tuple(sorted(orders[0]))
    n = len(orders)
    if quota is None:
        quota = -(-len(objects) // n)
    inst = Instance(
        agents=tuple(str(i) for i in range(1, n + 1)),
        objects=objects,
        quota=quota,
        relaxed=relaxed,
    )
    return PreferenceProfile(inst, orders)


FIG_PROFILE = make_profile([("o1", "o2", "o3", "o4"), ("o3", "o2", "o4", "o1")])


class TestGoldenOutcomes:
    def test_mps_two_agent_interleaved(self):
        trace = mps_trace(FIG_PROFILE)
        assert trace.assignment.matrix == (
            (F(7, 8), F(1, 2), F(1, 4), F(3, 8)),
            (F(1, 8), F(1, 2), F(3, 4), F(5, 8)),
        )
        assert trace.breakpoints == (F(1, 2), F(3, 4), F(7, 8), F(9, 8))
        assert trace.phases[0].eating == (
            frozenset({"o1", "o2"}),
            frozenset({"o2", "o3"}),
        )

    def test_mps_opposed_tails_gives_all_halves(self):
        profile = make_profile([("o1", "o2", "o3", "o4"), ("o2", "o1", "o4", "o3")])
        assert mps(profile).matrix == ((F(1, 2),) * 4, (F(1, 2),) * 4)

    def test_ops_disjoint_tops_then_shared_tail(self):
        profile = make_profile([("a", "b", "c", "d"), ("b", "c", "a", "d")])
        trace = ops_trace(profile)
        assert trace.assignment.matrix == (
            (F(1), F(0), F(1, 2), F(1, 2)),
            (F(0), F(1), F(1, 2), F(1, 2)),
        )
        # a and b exhaust together at 1, then c and d are shared
        assert trace.breakpoints == (F(1), F(3, 2), F(2))

    def test_identical_preferences_collapse_to_uniform(self):
        order = ("o1", "o2", "o3", "o4")
        profile = make_profile([order, order])
        expected = ((F(1, 2),) * 4, (F(1, 2),) * 4)
        assert mps(profile).matrix == expected
        assert ops(profile).matrix == expected

    def test_single_agent_eats_everything(self):
        profile = make_profile([("o1", "o2")])
        assert mps(profile).matrix == ((F(1), F(1)),)
        assert ops(profile).matrix == ((F(1), F(1)),)


class TestSerialDictatorship:
    def test_first_dictator_takes_top_quota(self):
        picked = serial_dictator(FIG_PROFILE, ("1", "2"))
        assert picked.owners == ("1", "1", "2", "2")

    def test_reversed_priority(self):
        picked = serial_dictator(FIG_PROFILE, ("2", "1"))
        assert picked.owners == ("1", "2", "2", "1")

    def test_priority_rule_uses_instance_agent_order(self):
        assert priority_rule(FIG_PROFILE).matrix == (
            (F(1), F(1), F(0), F(0)),
            (F(0), F(0), F(1), F(1)),
        )

    def test_priority_must_cover_all_agents(self):
        with pytest.raises(ValueError, match="every agent"):
            serial_dictator(FIG_PROFILE, ("1", "1"))

    def test_random_priority_averages_all_orders(self):
        assert random_priority(FIG_PROFILE).matrix == (
            (F(1), F(1, 2), F(0), F(1, 2)),
            (F(0), F(1, 2), F(1), F(1, 2)),
        )

    def test_random_priority_refuses_large_instances(self):
        n = 9
        order = tuple(f"o{j}" for j in range(1, n + 1))
        profile = make_profile([order] * n, quota=1)
        with pytest.raises(GuardExceeded, match="9!"):
            random_priority(profile)


class TestUniform:
    def test_two_agents(self):
        assert uniform(FIG_PROFILE.instance).matrix == (
            (F(1, 2),) * 4,
            (F(1, 2),) * 4,
        )

    def test_four_agents(self):
        inst = Instance(
            agents=("1", "2", "3", "4"),
            objects=("a", "b", "c", "d"),
            quota=1,
        )
        assert uniform(inst).matrix == ((F(1, 4),) * 4,) * 4


class TestRelaxedInstances:
    RELAXED = make_profile(
        [("o1", "o2", "o3"), ("o2", "o1", "o3")], quota=2, relaxed=True
    )

    def test_eating_rules_accept_leftover_objects(self):
        for rule in (mps, ops):
            out = rule(self.RELAXED)
            assert all(sum(row) == F(3, 2) for row in out.matrix)
            assert all(
                sum(row[j] for row in out.matrix) == 1 for j in range(3)
            )

    def test_mps_relaxed_golden(self):
        # tops {o1,o2} and {o3,o1} overlap only on o1; after o1 exhausts at
        # 1/2 both agents share the leftovers equally
        staggered = make_profile(
            [("o1", "o2", "o3"), ("o3", "o1", "o2")], quota=2, relaxed=True
        )
        assert mps(staggered).matrix == (
            (F(1, 2), F(3, 4), F(1, 4)),
            (F(1, 2), F(1, 4), F(3, 4)),
        )

    def test_other_rules_reject_relaxed(self):
        inst = self.RELAXED.instance
        with pytest.raises(ValueError, match="balanced"):
            uniform(inst)
        with pytest.raises(ValueError, match="balanced"):
            priority_rule(self.RELAXED)
        with pytest.raises(ValueError, match="balanced"):
            random_priority(self.RELAXED)


class TestTopKPolicy:
    def test_picks_most_preferred_available(self):
        policy = top_k(2)
        assert policy(("a", "b", "c", "d"), {"b", "c", "d"}, 3) == {"b", "c"}

    def test_take_shrinks_with_remaining(self):
        policy = top_k(2)
        assert policy(("a", "b", "c", "d"), {"d"}, 1) == {"d"}

    def test_rejects_nonpositive_k(self):
        with pytest.raises(ValueError):
            top_k(0)


# --------------------------------------------------------------------------
# Trace invariants and the micro-step oracle
# --------------------------------------------------------------------------


def check_trace_invariants(trace, k):
    inst = trace.profile.instance
    assert trace.phases[0].start == 0
    for phase, nxt in zip(trace.phases, trace.phases[1:]):
        assert phase.end == nxt.start
        assert phase.end > phase.start
    eaten_total = dict.fromkeys(inst.objects, F(0))
    acc = [dict.fromkeys(inst.objects, F(0)) for _ in inst.agents]
    for phase in trace.phases:
        available = {o for o in inst.objects if eaten_total[o] < 1}
        take = min(k, len(available))
        for i, order in enumerate(trace.profile.orders):
            expected = frozenset([o for o in order if o in available][:take])
            assert phase.eating[i] == expected
        counts = Counter(o for s in phase.eating for o in s)
        for o, eaters in counts.items():
            eaten_total[o] += phase.duration * eaters
            assert eaten_total[o] <= 1
        for i in range(inst.num_agents):
            for o in phase.eating[i]:
                acc[i][o] += phase.duration
    assert all(v == 1 for v in eaten_total.values())
    for i, agent in enumerate(inst.agents):
        assert trace.assignment.allocation(agent) == acc[i]


def micro_step_outcome(profile, k):
    """Fixed-step replay of the eating process on the 1/n^m time grid."""
    inst = profile.instance
    dt = F(1, inst.num_agents ** inst.num_objects)
    remaining = {o: F(1) for o in inst.objects}
    eaten = [dict.fromkeys(inst.objects, F(0)) for _ in inst.agents]
    while remaining:
        take = min(k, len(remaining))
        demands = [
            [o for o in order if o in remaining][:take] for order in profile.orders
        ]
        counts = Counter(o for picks in demands for o in picks)
        for o, eaters in counts.items():
            assert remaining[o] >= dt * eaters, "fixed step oversteps a breakpoint"
            remaining[o] -= dt * eaters
        for acc, picks in zip(eaten, demands):
            for o in picks:
                acc[o] += dt
        for o in [o for o, left in remaining.items() if left == 0]:
            del remaining[o]
    return tuple(tuple(acc[o] for o in inst.objects) for acc in eaten)


@pytest.mark.parametrize("stride", [37])
def test_eating_engine_matches_micro_step_oracle_on_main_domain(
    main_profiles, stride
):
    for profile in main_profiles[::stride]:
        assert mps(profile).matrix == micro_step_outcome(profile, 2)
        assert ops(profile).matrix == micro_step_outcome(profile, 1)


def test_eating_engine_matches_micro_step_oracle_single_unit():
    profile = make_profile(
        [
            ("a", "b", "c", "d"),
            ("a", "b", "c", "d"),
            ("b", "c", "a", "d"),
            ("b", "c", "a", "d"),
        ],
        quota=1,
    )
    assert mps(profile).matrix == micro_step_outcome(profile, 1)


def test_eating_engine_matches_micro_step_oracle_relaxed():
    profile = make_profile(
        [("o1", "o2", "o3"), ("o3", "o1", "o2")], quota=2, relaxed=True
    )
    assert mps(profile).matrix == micro_step_outcome(profile, 2)
    assert ops(profile).matrix == micro_step_outcome(profile, 1)


@st.composite
def eating_profiles(draw):
    n = draw(st.integers(min_value=1, max_value=3))
    quota = draw(st.integers(min_value=1, max_value=2))
    objects = tuple(f"o{j}" for j in range(1, n * quota + 1))
    inst = Instance(
        agents=tuple(str(i) for i in range(1, n + 1)),
        objects=objects,
        quota=quota,
    )
    orders = tuple(tuple(draw(st.permutations(objects))) for _ in inst.agents)
    return PreferenceProfile(inst, orders)


@settings(max_examples=60, deadline=None)
@given(eating_profiles())
def test_traces_satisfy_eating_invariants(profile):
    check_trace_invariants(mps_trace(profile), profile.instance.quota)
    check_trace_invariants(ops_trace(profile), 1)


@settings(max_examples=60, deadline=None)
@given(eating_profiles())
def test_eating_outputs_are_feasible(profile):
    for rule in (mps, ops):
        assert validate_assignment(rule(profile)).ok


@settings(max_examples=40, deadline=None)
@given(eating_profiles())
def test_ops_equals_mps_at_quota_one(profile):
    if profile.instance.quota == 1:
        assert ops(profile).matrix == mps(profile).matrix


@settings(max_examples=40, deadline=None)
@given(eating_profiles())
def test_mps_weakly_dominates_uniform_share_for_every_agent(profile):
    outcome = mps(profile)
    share = uniform(profile.instance)
    for agent in profile.instance.agents:
        assert sd_weakly_dominates(
            outcome.allocation(agent),
            share.allocation(agent),
            profile.order_of(agent),
        )


@settings(max_examples=40, deadline=None)
@given(eating_profiles())
def test_random_priority_is_feasible_and_anonymous_in_expectation(profile):
    out = random_priority(profile)
    assert validate_assignment(out).ok
