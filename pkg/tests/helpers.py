"""Shared document builders for the test suite."""

from __future__ import annotations

import copy
from typing import Any

from sopra.scenarios import bundled_document


def make_doc(**overrides: Any) -> dict[str, Any]:
    """A minimal valid scenario: one abstract root with two atomic
    options, one agent that intentionally prefers opt_a."""
    doc: dict[str, Any] = {
        "contextElements": [
            {"id": "Home", "kind": "Location"},
            {"id": "Away", "kind": "Location"},
            {"id": "Morning", "kind": "Timepoint"},
        ],
        "activities": [
            {"id": "act_root", "type": "Abstract"},
            {"id": "opt_a", "type": "Atomic"},
            {"id": "opt_b", "type": "Atomic"},
        ],
        "activityConnections": [
            {"child": "opt_a", "parent": "act_root", "relation": "IsA"},
            {"child": "opt_b", "parent": "act_root", "relation": "IsA"},
        ],
        "values": ["thrift"],
        "agents": [
            {"id": "ag1", "habitRate": 0.1, "attentionBudget": 1, "location": "Home"}
        ],
        "habitualConnections": [],
        "valuePriorities": [
            {"agent": "ag1", "value": "thrift", "strength": 0.25, "personalView": 0.25}
        ],
        "valueConnections": [
            {"agent": "ag1", "activity": "opt_a", "value": "thrift",
             "strength": 0.9, "personalView": 0.9},
            {"agent": "ag1", "activity": "opt_b", "value": "thrift",
             "strength": 0.5, "personalView": 0.5},
        ],
        "roots": ["act_root"],
        "environment": {"timepoints": ["Morning"], "placements": {}, "relocations": []},
        "globals": {},
    }
    doc.update(overrides)
    return doc


def habit_formation_doc(*, timepoints: list[str], relocations: list[dict] | None = None,
                        habit_rate: float = 0.1) -> dict[str, Any]:
    """One agent choosing between two transports; drive_car wins on values
    and then hardens into a habit."""
    return {
        "contextElements": [
            {"id": "Home", "kind": "Location"},
            {"id": "Away", "kind": "Location"},
            {"id": "Morning", "kind": "Timepoint"},
        ],
        "activities": [
            {"id": "choose_transport", "type": "Abstract"},
            {"id": "drive_car", "type": "Atomic"},
            {"id": "ride_bike", "type": "Atomic"},
        ],
        "activityConnections": [
            {"child": "drive_car", "parent": "choose_transport", "relation": "IsA"},
            {"child": "ride_bike", "parent": "choose_transport", "relation": "IsA"},
        ],
        "values": ["efficiency"],
        "agents": [
            {"id": "ag1", "habitRate": habit_rate, "attentionBudget": 1, "location": "Home"}
        ],
        "habitualConnections": [],
        "valuePriorities": [
            {"agent": "ag1", "value": "efficiency", "strength": 0.25, "personalView": 0.25}
        ],
        "valueConnections": [
            {"agent": "ag1", "activity": "drive_car", "value": "efficiency",
             "strength": 1.0, "personalView": 1.0},
            {"agent": "ag1", "activity": "ride_bike", "value": "efficiency",
             "strength": 0.1, "personalView": 0.1},
        ],
        "roots": ["choose_transport"],
        "environment": {
            "timepoints": timepoints,
            "placements": {},
            "relocations": relocations or [],
        },
        "globals": {"habitThreshold": 0.5, "decayRate": 0.0},
    }


def mutation_fixtures() -> dict[str, tuple[dict[str, Any], str]]:
    """Six broken variants of the commuting scenario, each producing
    exactly one violation class."""
    fixtures: dict[str, tuple[dict, str]] = {}

    doc = bundled_document("commuting")

    d = copy.deepcopy(doc)
    d["activityConnections"].append(
        {"child": "commuting", "parent": "go_to_work", "relation": "IsA"}
    )
    fixtures["cycle"] = (d, "cycle")

    d = copy.deepcopy(doc)
    d["agents"][0]["location"] = "bobs_car"
    fixtures["disjointness"] = (d, "disjointness")

    d = copy.deepcopy(doc)
    for conn in d["activityConnections"]:
        if conn["child"] == "take_train_to_school":
            conn["relation"] = "PartOf"
    fixtures["typing"] = (d, "typing")

    d = copy.deepcopy(doc)
    d["activityConnections"].append(
        {"child": "walk_to_school", "parent": "drive_car_to_work", "relation": "IsA"}
    )
    fixtures["atomic-with-children"] = (d, "atomic-with-children")

    d = copy.deepcopy(doc)
    d["habitualConnections"].append(
        {"agent": "bob", "activity": "teleport_to_work", "contextElement": "Home",
         "strength": 0.5, "personalView": 0.5}
    )
    fixtures["dangling-reference"] = (d, "dangling-reference")

    d = copy.deepcopy(doc)
    d["habitualConnections"][0]["strength"] = 1.7
    fixtures["view-range"] = (d, "view-range")

    return fixtures
