"""Deterministic random scenario generators.

Everything here is a pure function of the passed `random.Random`, so a
pinned seed reproduces the exact document. View numbers are drawn from a
1/64 grid: coarse enough that distinct intentional scores stay clearly
separated in floating point, which keeps argmax decisions stable under
benign transformations of the inputs.
"""

from __future__ import annotations

import random
from typing import Any

GRID = 64


def grid_value(rng: random.Random, lo: float = 0.0, hi: float = 1.0) -> float:
    lo_k = int(lo * GRID)
    hi_k = int(hi * GRID)
    return rng.randint(lo_k, hi_k) / GRID


def random_activity_tree(rng: random.Random, max_activities: int = 20):
    """A typing-correct activity tree: abstract nodes get IsA children,
    sequential nodes PartOf children, and every internal node has at
    least one child. Returns (activities, connections, root_id) in
    document form."""
    n = rng.randint(1, max_activities)
    counter = 0

    def new_id() -> str:
        nonlocal counter
        counter += 1
        return f"act{counter:02d}"

    root = new_id()
    if n == 1:
        return [{"id": root, "type": "Atomic"}], [], root
    activities = [{"id": root, "type": rng.choice(["Sequential", "Abstract"])}]
    connections: list[dict[str, str]] = []
    pending = [(root, activities[0]["type"])]
    budget = n - 1  # nodes still allowed; invariant: budget >= len(pending)
    while pending:
        parent, ptype = pending.pop(rng.randrange(len(pending)))
        relation = "IsA" if ptype == "Abstract" else "PartOf"
        want = rng.randint(1, 3)
        made = 0
        while made < want and (made == 0 or budget > len(pending)):
            budget -= 1
            child = new_id()
            if budget > len(pending) and rng.random() < 0.35:
                ctype = rng.choice(["Sequential", "Abstract"])
                pending.append((child, ctype))
            else:
                ctype = "Atomic"
            activities.append({"id": child, "type": ctype})
            connections.append({"child": child, "parent": parent, "relation": relation})
            made += 1
    return activities, connections, root


def random_scenario_document(
    rng: random.Random,
    *,
    max_activities: int = 12,
    n_agents: int = 2,
    n_locations: int = 2,
    n_values: int = 2,
    n_timepoints: int = 2,
    priority_hi: float = 0.25,
    habit_seeds: int = 2,
    globals_overrides: dict[str, Any] | None = None,
) -> dict[str, Any]:
    activities, connections, root = random_activity_tree(rng, max_activities)
    atomic = [a["id"] for a in activities if a["type"] == "Atomic"]
    locations = [f"loc{i}" for i in range(n_locations)]
    timepoints = [f"tp{i}" for i in range(n_timepoints)]
    values = [f"val{i}" for i in range(n_values)]
    elements = [{"id": loc, "kind": "Location"} for loc in locations]
    elements += [{"id": tp, "kind": "Timepoint"} for tp in timepoints]

    agents = [
        {
            "id": f"ag{i}",
            "habitRate": grid_value(rng, 1 / GRID, 0.3),
            "attentionBudget": rng.randint(1, 2),
            "location": rng.choice(locations),
        }
        for i in range(n_agents)
    ]

    priorities = [
        {
            "agent": ag["id"],
            "value": v,
            "strength": (pv := grid_value(rng, 1 / GRID, priority_hi)),
            "personalView": pv,
        }
        for ag in agents
        for v in values
    ]
    value_connections = [
        {
            "agent": ag["id"],
            "activity": a,
            "value": v,
            "strength": (sv := grid_value(rng)),
            "personalView": sv,
        }
        for ag in agents
        for a in atomic
        for v in values
        if rng.random() < 0.8
    ]
    habitual = [
        {
            "agent": ag["id"],
            "activity": rng.choice(atomic),
            "contextElement": rng.choice(locations + timepoints),
            "strength": (hv := grid_value(rng)),
            "personalView": hv,
        }
        for ag in agents
        for _ in range(habit_seeds)
    ]
    seen: set[tuple[str, str, str]] = set()
    deduped = []
    for h in habitual:
        key = (h["agent"], h["activity"], h["contextElement"])
        if key not in seen:
            seen.add(key)
            deduped.append(h)

    doc: dict[str, Any] = {
        "contextElements": elements,
        "activities": activities,
        "activityConnections": connections,
        "values": values,
        "agents": agents,
        "habitualConnections": deduped,
        "valuePriorities": priorities,
        "valueConnections": value_connections,
        "roots": [root],
        "environment": {"timepoints": timepoints, "placements": {}, "relocations": []},
        "globals": {"habitThreshold": 0.9, "decayRate": 0.01, **(globals_overrides or {})},
    }
    return doc


def scale_value_priorities(document: dict[str, Any], factor: float) -> dict[str, Any]:
    """Copy of a document with every value-priority view multiplied."""
    doc = dict(document)
    doc["valuePriorities"] = [
        {
            **row,
            "strength": row.get("strength", 0.0) * factor,
            "personalView": row.get("personalView", 0.0) * factor,
        }
        for row in document.get("valuePriorities", [])
    ]
    return doc
