"""JSON formats for groups, distributions, instances and reports.

Distribution::

    {"group": {"moduli": [4, 3]}, "probs": [{"coords": [1, 2], "mass": "1/2"}, ...]}

or a named constructor::

    {"kind": "point_mass", "at": [1, 0]}
    {"kind": "haar", "generators": [[2, 0]]}
    {"kind": "mixture", "components": [{"weight": "1/2", "distribution": {...}}, ...]}

Instance::

    {"group": "Z(9)", "a": [3, -1], "b": [1, 3], "distributions": [...]}

A distribution inside an instance may omit ``group``. Reports are written
with sorted keys and floats rounded to 15 significant digits so that equal
inputs give byte-identical output.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

import numpy as np

from .distributions import Distribution, haar, mixture, point_mass
from .groups import Group, subgroup_generated
from .heyde import LinearFormsSpec


class InputError(ValueError):
    """Malformed or inconsistent JSON input."""


def _mass(value) -> Fraction | float:
    if isinstance(value, bool):
        raise InputError(f"bad mass {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"bad mass {value!r}") from exc
    if isinstance(value, float):
        return value
    raise InputError(f"bad mass {value!r}")


def read_group(obj) -> Group:
    try:
        return Group.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def distribution_from_json(obj: dict, group: Group | None = None) -> Distribution:
    if not isinstance(obj, dict):
        raise InputError("a distribution must be a JSON object")
    if "group" in obj:
        group = read_group(obj["group"])
    if group is None:
        raise InputError("distribution has no group")
    kind = obj.get("kind", "probs")
    try:
        if kind == "point_mass":
            return point_mass(group.element(obj["at"]))
        if kind == "haar":
            return haar(subgroup_generated(group, [group.element(c) for c in obj.get("generators", [])]))
        if kind == "mixture":
            comps = [(_mass(c["weight"]), distribution_from_json(c["distribution"], group)) for c in obj["components"]]
            return mixture(comps)
        if kind != "probs":
            raise InputError(f"unknown distribution kind {kind!r}")
        masses: list = [Fraction(0)] * group.order
        for row in obj["probs"]:
            masses[group.index(row["coords"])] += _mass(row["mass"])
        return Distribution.from_masses(group, masses)
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def distribution_to_json(mu: Distribution, include_group: bool = True) -> dict:
    rows = []
    for i in np.flatnonzero(mu.probs):
        mass = str(mu.exact[i]) if mu.exact is not None else float(mu.probs[i])
        rows.append({"coords": [int(c) for c in mu.group.coords[i]], "mass": mass})
    out: dict[str, Any] = {"probs": rows}
    if include_group:
        out["group"] = mu.group.to_json()
    return out


def instance_from_json(obj: dict) -> tuple[Group, LinearFormsSpec, list[Distribution]]:
    if not isinstance(obj, dict):
        raise InputError("an instance must be a JSON object")
    try:
        g = read_group(obj["group"])
        spec = LinearFormsSpec(tuple(obj["a"]), tuple(obj["b"]))
        mus = [distribution_from_json(d, g) for d in obj["distributions"]]
    except KeyError as exc:
        raise InputError(f"missing field {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(str(exc)) from exc
    if len(mus) != spec.n:
        raise InputError(f"{spec.n} coefficient pairs but {len(mus)} distributions")
    for mu in mus:
        if mu.group != g:
            raise InputError(f"distribution on {mu.group} in an instance on {g}")
    return g, spec, mus


def instance_to_json(g: Group, spec: LinearFormsSpec, mus, **extra) -> dict:
    out = {"group": g.to_json(), "a": list(spec.a), "b": list(spec.b), "distributions": [distribution_to_json(mu, False) for mu in mus]}
    out.update(extra)
    return out


def canonical(value):
    """Round floats to 15 significant digits and convert numpy scalars, recursively."""
    if isinstance(value, dict):
        return {str(k): canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v != v or v in (float("inf"), float("-inf")):
            return str(v)
        v = float(f"{v:.15g}")
        return 0.0 if v == 0 else v
    if isinstance(value, complex):
        return [canonical(value.real), canonical(value.imag)]
    if isinstance(value, Fraction):
        return str(value)
    return value


def dumps(report) -> str:
    return json.dumps(canonical(report), sort_keys=True, indent=2) + "\n"
