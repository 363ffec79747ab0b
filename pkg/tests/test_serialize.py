"""JSON round trips and schema error reporting."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mudra.model import Instance, PreferenceProfile, RandomAssignment
from mudra.serialize import (
    SchemaError,
    assignment_from_data,
    assignment_to_data,
    canonical_dumps,
    format_rational,
    load_assignment,
    load_profile,
    parse_rational,
    profile_from_data,
    profile_to_data,
    save_assignment,
    save_profile,
)

F = Fraction

PROFILE_DATA = {
    "objects": ["o1", "o2", "o3", "o4"],
    "quota": 2,
    "preferences": {
        "1": ["o1", "o2", "o3", "o4"],
        "2": ["o3", "o2", "o4", "o1"],
    },
}


class TestRationals:
    def test_fraction_string(self):
        assert parse_rational("7/8", "x") == F(7, 8)

    def test_plain_integer_forms(self):
        assert parse_rational("2", "x") == 2
        assert parse_rational(2, "x") == 2

    def test_zero_denominator_rejected(self):
        with pytest.raises(SchemaError, match="7/0"):
            parse_rational("7/0", "x")

    def test_garbage_rejected(self):
        with pytest.raises(SchemaError, match="malformed"):
            parse_rational("seven eighths", "x")

    def test_floats_rejected(self):
        with pytest.raises(SchemaError, match="floating point"):
            parse_rational(0.5, "x")

    def test_error_carries_path(self):
        with pytest.raises(SchemaError) as err:
            parse_rational("1/0", "matrix.1.o2")
        assert err.value.path == "matrix.1.o2"

    def test_format_round_trip(self):
        for v in (F(7, 8), F(0), F(3), F(-1, 2)):
            assert parse_rational(format_rational(v), "x") == v


class TestProfileSchema:
    def test_round_trip(self):
        profile = profile_from_data(PROFILE_DATA)
        assert profile.instance.agents == ("1", "2")
        assert profile.order_of("2") == ("o3", "o2", "o4", "o1")
        assert profile_to_data(profile) == PROFILE_DATA

    def test_canonical_dump_is_stable(self):
        profile = profile_from_data(PROFILE_DATA)
        assert canonical_dumps(profile_to_data(profile)) == canonical_dumps(
            profile_to_data(profile)
        )

    def test_missing_key(self):
        with pytest.raises(SchemaError, match="quota"):
            profile_from_data({"objects": ["o1"], "preferences": {"1": ["o1"]}})

    def test_duplicate_objects(self):
        data = dict(PROFILE_DATA, objects=["o1", "o1", "o3", "o4"])
        with pytest.raises(SchemaError, match="duplicate"):
            profile_from_data(data)

    def test_preferences_must_be_permutations(self):
        data = dict(
            PROFILE_DATA,
            preferences={
                "1": ["o1", "o2", "o3", "o4"],
                "2": ["o3", "o2", "o4", "o4"],
            },
        )
        with pytest.raises(SchemaError, match="preferences.2"):
            profile_from_data(data)

    def test_quota_mismatch_reported_as_schema_error(self):
        data = dict(PROFILE_DATA, quota=3)
        with pytest.raises(SchemaError, match="quota"):
            profile_from_data(data)

    def test_relaxed_flag_permits_leftovers(self):
        data = {
            "objects": ["o1", "o2", "o3"],
            "quota": 2,
            "preferences": {"1": ["o1", "o2", "o3"], "2": ["o3", "o2", "o1"]},
        }
        with pytest.raises(SchemaError):
            profile_from_data(data)
        profile = profile_from_data(data, relaxed=True)
        assert profile.instance.relaxed


class TestAssignmentSchema:
    def setup_method(self):
        self.profile = profile_from_data(PROFILE_DATA)
        self.instance = self.profile.instance

    def test_round_trip(self):
        data = {
            "matrix": {
                "1": {"o1": "7/8", "o2": "1/2", "o3": "1/4", "o4": "3/8"},
                "2": {"o1": "1/8", "o2": "1/2", "o3": "3/4", "o4": "5/8"},
            }
        }
        p = assignment_from_data(data, self.instance)
        assert p.entry("1", "o1") == F(7, 8)
        assert assignment_to_data(p) == data

    def test_agent_keys_must_match(self):
        data = {"matrix": {"1": {}, "3": {}}}
        with pytest.raises(SchemaError, match="agent keys"):
            assignment_from_data(data, self.instance)

    def test_object_keys_must_match(self):
        data = {
            "matrix": {
                "1": {"o1": "1", "o2": "1"},
                "2": {"o1": "0", "o2": "0"},
            }
        }
        with pytest.raises(SchemaError, match="matrix.1"):
            assignment_from_data(data, self.instance)

    def test_entry_errors_carry_paths(self):
        data = {
            "matrix": {
                "1": {"o1": "1/0", "o2": "0", "o3": "0", "o4": "0"},
                "2": {"o1": "0", "o2": "1", "o3": "1", "o4": "1"},
            }
        }
        with pytest.raises(SchemaError) as err:
            assignment_from_data(data, self.instance)
        assert err.value.path == "matrix.1.o1"


class TestFileRoundTrips:
    def test_profile_file(self, tmp_path):
        target = tmp_path / "profile.json"
        profile = profile_from_data(PROFILE_DATA)
        save_profile(profile, target)
        assert load_profile(target).orders == profile.orders
        # byte-identical canonical form on re-save
        first = target.read_text()
        save_profile(load_profile(target), target)
        assert target.read_text() == first

    def test_assignment_file(self, tmp_path):
        profile = profile_from_data(PROFILE_DATA)
        half = F(1, 2)
        p = RandomAssignment(
            profile.instance,
            ((half, half, half, half), (half, half, half, half)),
        )
        target = tmp_path / "assignment.json"
        save_assignment(p, target)
        assert load_assignment(target, profile.instance).matrix == p.matrix


@st.composite
def profiles(draw):
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


@given(profiles())
def test_any_profile_round_trips(profile):
    assert profile_from_data(profile_to_data(profile)).orders == profile.orders


denominators = st.integers(min_value=1, max_value=12)
numerators = st.integers(min_value=0, max_value=12)


@given(st.lists(st.builds(F, numerators, denominators), min_size=4, max_size=4))
def test_any_rational_row_round_trips(values):
    # shape is all that matters for serialization; feasibility is separate
    inst = Instance(agents=("1",), objects=("a", "b", "c", "d"), quota=4)
    p = RandomAssignment(inst, (tuple(values),))
    assert assignment_from_data(assignment_to_data(p), inst).matrix == p.matrix
