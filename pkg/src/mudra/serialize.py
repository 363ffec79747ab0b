"""JSON serialization for profiles, assignments and reports.

Rationals travel as strings "p/q" (plain integers may appear as "k") so that
files round-trip exactly.  Schema violations raise `SchemaError` carrying the
JSON path of the offending element.

Profile files::

    {"objects": ["o1", ...], "quota": 2, "preferences": {"1": ["o1", ...], ...}}

Assignment files::

    {"matrix": {"1": {"o1": "7/8", ...}, ...}}
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import IO, Any

from .model import Instance, PreferenceProfile, RandomAssignment


class SchemaError(Exception):
    """Input file violates the expected schema; `path` locates the problem."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


def parse_rational(value: Any, path: str) -> Fraction:
    """Parse "p/q" or "k" (string) into an exact rational."""
    if isinstance(value, bool):
        raise SchemaError(path, f"expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SchemaError(path, f"floating point value {value!r} is not allowed")
    if not isinstance(value, str):
        raise SchemaError(path, f"expected a rational string, got {type(value).__name__}")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(path, f"malformed rational {value!r} ({exc})") from None


def format_rational(value: Fraction) -> str:
    return str(Fraction(value))


def _require(data: Any, key: str, kind: type, path: str) -> Any:
    if not isinstance(data, dict):
        raise SchemaError(path, f"expected an object, got {type(data).__name__}")
    if key not in data:
        raise SchemaError(f"{path}.{key}" if path else key, "missing")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise SchemaError(
            f"{path}.{key}" if path else key,
            f"expected {kind.__name__}, got {type(value).__name__}",
        )
    return value


def profile_from_data(data: Any, relaxed: bool = False) -> PreferenceProfile:
    objects = _require(data, "objects", list, "")
    for j, o in enumerate(objects):
        if not isinstance(o, str):
            raise SchemaError(f"objects[{j}]", "object ids must be strings")
    if len(set(objects)) != len(objects):
        raise SchemaError("objects", "duplicate object ids")
    quota = _require(data, "quota", int, "")
    prefs = _require(data, "preferences", dict, "")
    if not prefs:
        raise SchemaError("preferences", "at least one agent is required")
    agents = tuple(prefs.keys())
    orders = []
    for agent in agents:
        order = prefs[agent]
        path = f"preferences.{agent}"
        if not isinstance(order, list) or not all(isinstance(o, str) for o in order):
            raise SchemaError(path, "preference list must be a list of object ids")
        if sorted(order) != sorted(objects):
            raise SchemaError(
                path, "preference list is not a strict order over the object set"
            )
        orders.append(tuple(order))
    try:
        instance = Instance(agents, tuple(objects), quota, relaxed=relaxed)
    except ValueError as exc:
        raise SchemaError("quota", str(exc)) from None
    return PreferenceProfile(instance, tuple(orders))


def profile_to_data(profile: PreferenceProfile) -> dict:
    inst = profile.instance
    return {
        "objects": list(inst.objects),
        "quota": inst.quota,
        "preferences": {
            agent: list(order) for agent, order in zip(inst.agents, profile.orders)
        },
    }


def assignment_from_data(data: Any, instance: Instance) -> RandomAssignment:
    matrix = _require(data, "matrix", dict, "")
    if set(matrix.keys()) != set(instance.agents):
        raise SchemaError("matrix", "agent keys must match the instance's agent set")
    rows = []
    for agent in instance.agents:
        row_data = matrix[agent]
        path = f"matrix.{agent}"
        if not isinstance(row_data, dict):
            raise SchemaError(path, "row must map objects to rationals")
        if set(row_data.keys()) != set(instance.objects):
            raise SchemaError(path, "object keys must match the instance's object set")
        rows.append(
            tuple(
                parse_rational(row_data[obj], f"{path}.{obj}")
                for obj in instance.objects
            )
        )
    return RandomAssignment(instance, tuple(rows))


def assignment_to_data(assignment: RandomAssignment) -> dict:
    inst = assignment.instance
    return {
        "matrix": {
            agent: {
                obj: format_rational(v)
                for obj, v in zip(inst.objects, row)
            }
            for agent, row in zip(inst.agents, assignment.matrix)
        }
    }


def canonical_dumps(data: Any) -> str:
    """Stable JSON encoding used for files and byte-identical round trips."""
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _load_json(source: str | Path | IO[str]) -> Any:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None


def load_profile(source: str | Path | IO[str], relaxed: bool = False) -> PreferenceProfile:
    return profile_from_data(_load_json(source), relaxed=relaxed)


def save_profile(profile: PreferenceProfile, target: str | Path) -> None:
    Path(target).write_text(canonical_dumps(profile_to_data(profile)), encoding="utf-8")


def load_assignment(source: str | Path | IO[str], instance: Instance) -> RandomAssignment:
    return assignment_from_data(_load_json(source), instance)


def save_assignment(assignment: RandomAssignment, target: str | Path) -> None:
    Path(target).write_text(
        canonical_dumps(assignment_to_data(assignment)), encoding="utf-8"
    )
