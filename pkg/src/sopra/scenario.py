"""Scenario documents: parse, canonicalize, and serialize.

`build_scenario` turns a plain JSON-style mapping into a `Scenario`,
collecting every malformed field before raising, and sorts all
collections into canonical order so equal content builds equal values.
Out-of-range view numbers are deliberately NOT rejected here; they build
fine and surface as `validate_scenario` violations, which keeps the
builder usable on documents you want to diagnose rather than refuse.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .errors import ScenarioError
from .model import (
    Activity,
    ActivityBelief,
    ActivityConnection,
    ActivityType,
    AffordanceConnection,
    AgentSpec,
    CompetenceLevel,
    CompetenceRequirement,
    ContextElement,
    ElementKind,
    Environment,
    Globals,
    HabitualConnection,
    RelationType,
    Relocation,
    Scenario,
    ValueConnection,
    ValuePriority,
    ViewTriple,
)

_TOP_KEYS = {
    "contextElements",
    "activities",
    "activityConnections",
    "values",
    "agents",
    "habitualConnections",
    "valuePriorities",
    "valueConnections",
    "roots",
    "environment",
    "globals",
    "affordances",
    "competences",
    "activityBeliefs",
}

_GLOBALS_KEYS = {
    "habitThreshold": "habit_threshold",
    "decayRate": "decay_rate",
    "socialLearningRate": "social_learning_rate",
    "awarenessRate": "awareness_rate",
    "attenuation": "attenuation",
    "deliberationCost": "deliberation_cost",
    "pressureAggregation": "pressure_aggregation",
    "decayAll": "decay_all",
    "tieBreak": "tie_break",
    "extensionsEnabled": "extensions_enabled",
    "feasibilityThreshold": "feasibility_threshold",
}


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


def _num(obj: Mapping[str, Any], key: str, where: str, errs: list[str], default: float | None = None) -> float:
    if key not in obj:
        if default is not None:
            return default
        errs.append(f"{where}: missing {key!r}")
        return 0.0
    v = obj[key]
    if not _is_number(v):
        errs.append(f"{where}: {key!r} must be a number, got {v!r}")
        return 0.0
    return float(v)


def _int(obj: Mapping[str, Any], key: str, where: str, errs: list[str]) -> int:
    v = obj.get(key)
    if isinstance(v, bool) or not isinstance(v, int):
        errs.append(f"{where}: {key!r} must be an integer, got {v!r}")
        return 0
    return v


def _ident(obj: Mapping[str, Any], key: str, where: str, errs: list[str]) -> str:
    v = obj.get(key)
    if not isinstance(v, str) or not v or v != v.strip() or "," in v or "\n" in v:
        errs.append(f"{where}: {key!r} must be a plain identifier string, got {v!r}")
        return ""
    return v


def _opt_ident(obj: Mapping[str, Any], key: str, where: str, errs: list[str]) -> str | None:
    if obj.get(key) is None:
        return None
    return _ident(obj, key, where, errs)


def _rows(doc: Mapping[str, Any], key: str, errs: list[str]) -> list[Mapping[str, Any]]:
    raw = doc.get(key, [])
    if not isinstance(raw, list):
        errs.append(f"{key!r} must be a list")
        return []
    out = []
    for i, row in enumerate(raw):
        if not isinstance(row, Mapping):
            errs.append(f"{key}[{i}] must be an object")
        else:
            out.append(row)
    return out


def _views(obj: Mapping[str, Any], where: str, errs: list[str]) -> ViewTriple:
    strength = _num(obj, "strength", where, errs, default=0.0)
    personal = _num(obj, "personalView", where, errs, default=0.0)
    collective: float | None = None
    if obj.get("myCollectiveView") is not None:
        collective = _num(obj, "myCollectiveView", where, errs)
    return ViewTriple(strength, personal, collective)


def _enum(obj: Mapping[str, Any], key: str, enum_cls: type, where: str, errs: list[str]):
    v = obj.get(key)
    try:
        return enum_cls(v)
    except ValueError:
        allowed = ", ".join(m.value for m in enum_cls)
        errs.append(f"{where}: {key!r} must be one of {allowed}, got {v!r}")
        return next(iter(enum_cls))


def _parse_globals(doc: Mapping[str, Any], errs: list[str]) -> Globals:
    raw = doc.get("globals", {})
    if not isinstance(raw, Mapping):
        errs.append("'globals' must be an object")
        return Globals()
    unknown = set(raw) - set(_GLOBALS_KEYS)
    if unknown:
        errs.append(f"globals: unknown keys {sorted(unknown)}")
    kwargs: dict[str, Any] = {}
    for json_key, attr in _GLOBALS_KEYS.items():
        if json_key not in raw:
            continue
        v = raw[json_key]
        if attr in ("decay_all", "extensions_enabled"):
            if not isinstance(v, bool):
                errs.append(f"globals: {json_key!r} must be a boolean")
                continue
        elif attr == "deliberation_cost":
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                errs.append(f"globals: {json_key!r} must be a non-negative integer")
                continue
        elif attr == "pressure_aggregation":
            if v not in ("mean", "max", "sum"):
                errs.append(f"globals: {json_key!r} must be mean, max or sum")
                continue
        elif attr == "tie_break":
            if v not in ("lexicographic", "uniform"):
                errs.append(f"globals: {json_key!r} must be lexicographic or uniform")
                continue
        else:
            if not _is_number(v):
                errs.append(f"globals: {json_key!r} must be a number")
                continue
            v = float(v)
            lo, hi = _GLOBAL_RANGES[attr]
            if not (lo[1] <= v if lo[0] else lo[1] < v) or not (v <= hi[1] if hi[0] else v < hi[1]):
                errs.append(f"globals: {json_key!r} out of range: {v!r}")
                continue
        kwargs[attr] = v
    return Globals(**kwargs)


# attr -> ((closed, low), (closed, high))
_GLOBAL_RANGES: dict[str, tuple[tuple[bool, float], tuple[bool, float]]] = {
    "habit_threshold": ((True, 0.0), (True, 1.0)),
    "decay_rate": ((True, 0.0), (False, 1.0)),
    "social_learning_rate": ((False, 0.0), (True, 1.0)),
    "awareness_rate": ((False, 0.0), (True, 1.0)),
    "attenuation": ((True, 0.0), (True, 1.0)),
    "feasibility_threshold": ((True, 0.0), (True, 1.0)),
}


def _parse_environment(doc: Mapping[str, Any], errs: list[str]) -> Environment:
    raw = doc.get("environment", {})
    if not isinstance(raw, Mapping):
        errs.append("'environment' must be an object")
        return Environment()
    unknown = set(raw) - {"timepoints", "placements", "relocations"}
    if unknown:
        errs.append(f"environment: unknown keys {sorted(unknown)}")

    tps = raw.get("timepoints", [])
    timepoints: list[str] = []
    if not isinstance(tps, list) or not all(isinstance(t, str) for t in tps):
        errs.append("environment.timepoints must be a list of ids")
    else:
        timepoints = list(tps)

    placements: list[tuple[str, tuple[str, ...]]] = []
    pl = raw.get("placements", {})
    if not isinstance(pl, Mapping):
        errs.append("environment.placements must map location ids to resource lists")
    else:
        for loc in sorted(pl):
            res = pl[loc]
            if not isinstance(res, list) or not all(isinstance(r, str) for r in res):
                errs.append(f"environment.placements[{loc!r}] must be a list of ids")
                continue
            placements.append((loc, tuple(sorted(res))))

    relocations = []
    rl = raw.get("relocations", [])
    if not isinstance(rl, list):
        errs.append("environment.relocations must be a list")
        rl = []
    for i, row in enumerate(rl):
        where = f"environment.relocations[{i}]"
        if not isinstance(row, Mapping):
            errs.append(f"{where} must be an object")
            continue
        tick = _int(row, "tick", where, errs)
        if tick < 0:
            errs.append(f"{where}: 'tick' must be non-negative")
        relocations.append(
            Relocation(tick, _ident(row, "agent", where, errs), _ident(row, "location", where, errs))
        )
    relocations.sort(key=lambda r: (r.tick, r.agent, r.location))
    return Environment(tuple(timepoints), tuple(placements), tuple(relocations))


def build_scenario(document: Mapping[str, Any], *, check_refs: bool = True) -> Scenario:
    """Build a canonical `Scenario` from a parsed JSON document.

    Raises `ScenarioError` listing every malformed field, duplicate id,
    and (when `check_refs`) dangling reference found. With
    `check_refs=False` dangling references are left for
    `validate_scenario` to report as violations.
    """
    if not isinstance(document, Mapping):
        raise ScenarioError("scenario document must be an object")
    errs: list[str] = []
    unknown = set(document) - _TOP_KEYS
    if unknown:
        errs.append(f"unknown top-level keys: {sorted(unknown)}")

    elements = []
    for i, row in enumerate(_rows(document, "contextElements", errs)):
        where = f"contextElements[{i}]"
        eid = _ident(row, "id", where, errs)
        kind = _enum(row, "kind", ElementKind, where, errs)
        if kind in (ElementKind.ACTIVITY, ElementKind.AGENT):
            errs.append(f"{where}: declare {kind.value} tokens under their own section")
        elements.append(ContextElement(eid, kind, _opt_ident(row, "parent", where, errs)))

    activities = []
    for i, row in enumerate(_rows(document, "activities", errs)):
        where = f"activities[{i}]"
        activities.append(
            Activity(
                _ident(row, "id", where, errs),
                _enum(row, "type", ActivityType, where, errs),
                _opt_ident(row, "parent", where, errs),
            )
        )
    if not activities:
        errs.append("no activities declared")

    connections = []
    for i, row in enumerate(_rows(document, "activityConnections", errs)):
        where = f"activityConnections[{i}]"
        connections.append(
            ActivityConnection(
                _ident(row, "child", where, errs),
                _ident(row, "parent", where, errs),
                _enum(row, "relation", RelationType, where, errs),
            )
        )

    values_raw = document.get("values", [])
    values: list[str] = []
    if not isinstance(values_raw, list) or not all(isinstance(v, str) for v in values_raw):
        errs.append("'values' must be a list of value ids")
    else:
        values = list(values_raw)
        dup = {v for v in values if values.count(v) > 1}
        if dup:
            errs.append(f"duplicate value ids: {sorted(dup)}")

    agents = []
    for i, row in enumerate(_rows(document, "agents", errs)):
        where = f"agents[{i}]"
        aid = _ident(row, "id", where, errs)
        rate = _num(row, "habitRate", where, errs)
        if not 0.0 < rate <= 1.0:
            errs.append(f"{where}: 'habitRate' must be in (0, 1], got {rate!r}")
        budget = _int(row, "attentionBudget", where, errs)
        if budget < 0:
            errs.append(f"{where}: 'attentionBudget' must be non-negative")
        resources: int | None = None
        if row.get("attentionalResources") is not None:
            resources = _int(row, "attentionalResources", where, errs)
            if not 0 <= resources <= budget:
                errs.append(f"{where}: 'attentionalResources' must lie in [0, attentionBudget]")
        agents.append(
            AgentSpec(
                aid,
                rate,
                budget,
                _ident(row, "location", where, errs),
                resources,
                _opt_ident(row, "parent", where, errs),
            )
        )

    habitual = [
        HabitualConnection(
            _ident(row, "agent", (w := f"habitualConnections[{i}]"), errs),
            _ident(row, "activity", w, errs),
            _ident(row, "contextElement", w, errs),
            _views(row, w, errs),
        )
        for i, row in enumerate(_rows(document, "habitualConnections", errs))
    ]
    priorities = [
        ValuePriority(
            _ident(row, "agent", (w := f"valuePriorities[{i}]"), errs),
            _ident(row, "value", w, errs),
            _views(row, w, errs),
        )
        for i, row in enumerate(_rows(document, "valuePriorities", errs))
    ]
    value_connections = [
        ValueConnection(
            _ident(row, "agent", (w := f"valueConnections[{i}]"), errs),
            _ident(row, "activity", w, errs),
            _ident(row, "value", w, errs),
            _views(row, w, errs),
        )
        for i, row in enumerate(_rows(document, "valueConnections", errs))
    ]

    roots_raw = document.get("roots", [])
    roots: list[str] = []
    if not isinstance(roots_raw, list) or not all(isinstance(r, str) for r in roots_raw):
        errs.append("'roots' must be a list of activity ids")
    else:
        roots = list(roots_raw)

    affordances = [
        AffordanceConnection(
            _ident(row, "contextElement", (w := f"affordances[{i}]"), errs),
            _ident(row, "activity", w, errs),
            _num(row, "strength", w, errs),
        )
        for i, row in enumerate(_rows(document, "affordances", errs))
    ]

    comp_raw = document.get("competences", {})
    levels: list[CompetenceLevel] = []
    requirements: list[CompetenceRequirement] = []
    if not isinstance(comp_raw, Mapping):
        errs.append("'competences' must be an object with 'levels' and 'requirements'")
    else:
        unknown = set(comp_raw) - {"levels", "requirements"}
        if unknown:
            errs.append(f"competences: unknown keys {sorted(unknown)}")
        levels = [
            CompetenceLevel(
                _ident(row, "agent", (w := f"competences.levels[{i}]"), errs),
                _ident(row, "competence", w, errs),
                _num(row, "level", w, errs),
            )
            for i, row in enumerate(_rows(comp_raw, "levels", errs))
        ]
        requirements = [
            CompetenceRequirement(
                _ident(row, "activity", (w := f"competences.requirements[{i}]"), errs),
                _ident(row, "competence", w, errs),
                _num(row, "required", w, errs),
            )
            for i, row in enumerate(_rows(comp_raw, "requirements", errs))
        ]

    beliefs = []
    for i, row in enumerate(_rows(document, "activityBeliefs", errs)):
        where = f"activityBeliefs[{i}]"
        rels: list[RelationType | None] = []
        for key in ("personalView", "myCollectiveView"):
            if row.get(key) is None:
                rels.append(None)
            else:
                rels.append(_enum(row, key, RelationType, where, errs))
        beliefs.append(
            ActivityBelief(
                _ident(row, "agent", where, errs),
                _ident(row, "child", where, errs),
                _ident(row, "parent", where, errs),
                rels[0],
                rels[1],
            )
        )

    environment = _parse_environment(document, errs)
    globals_ = _parse_globals(document, errs)

    # One token namespace across elements, activities and agents.
    seen: set[str] = set()
    for eid in [e.id for e in elements] + [a.id for a in activities] + [a.id for a in agents]:
        if eid in seen:
            errs.append(f"duplicate id: {eid!r}")
        seen.add(eid)

    scenario = Scenario(
        context_elements=tuple(sorted(elements, key=lambda e: e.id)),
        activities=tuple(sorted(activities, key=lambda a: a.id)),
        activity_connections=tuple(
            sorted(connections, key=lambda c: (c.child, c.parent, c.relation))
        ),
        values=tuple(sorted(values)),
        agents=tuple(sorted(agents, key=lambda a: a.id)),
        habitual_connections=tuple(
            sorted(habitual, key=lambda h: (h.agent, h.activity, h.context_element))
        ),
        value_priorities=tuple(sorted(priorities, key=lambda p: (p.agent, p.value))),
        value_connections=tuple(
            sorted(value_connections, key=lambda c: (c.agent, c.activity, c.value))
        ),
        roots=tuple(roots),
        environment=environment,
        globals=globals_,
        affordances=tuple(sorted(affordances, key=lambda a: (a.context_element, a.activity))),
        competence_levels=tuple(sorted(levels, key=lambda l: (l.agent, l.competence))),
        competence_requirements=tuple(
            sorted(requirements, key=lambda r: (r.activity, r.competence))
        ),
        activity_beliefs=tuple(sorted(beliefs, key=lambda b: (b.agent, b.child, b.parent))),
    )
    if check_refs and not errs:
        from .validate import check_references

        errs.extend(v.message for v in check_references(scenario))
    if errs:
        raise ScenarioError(errs)
    return scenario


def _views_out(v: ViewTriple) -> dict[str, Any]:
    return {
        "strength": v.strength,
        "personalView": v.personal_view,
        "myCollectiveView": v.my_collective_view,
    }


def serialize_scenario(s: Scenario) -> dict[str, Any]:
    """Inverse of `build_scenario`: emits the canonical document form."""
    return {
        "contextElements": [
            {"id": e.id, "kind": e.kind.value, "parent": e.parent} for e in s.context_elements
        ],
        "activities": [
            {"id": a.id, "type": a.type.value, "parent": a.parent} for a in s.activities
        ],
        "activityConnections": [
            {"child": c.child, "parent": c.parent, "relation": c.relation.value}
            for c in s.activity_connections
        ],
        "values": list(s.values),
        "agents": [
            {
                "id": a.id,
                "habitRate": a.habit_rate,
                "attentionBudget": a.attention_budget,
                "attentionalResources": a.attentional_resources,
                "location": a.location,
                "parent": a.parent,
            }
            for a in s.agents
        ],
        "habitualConnections": [
            {"agent": h.agent, "activity": h.activity, "contextElement": h.context_element}
            | _views_out(h.views)
            for h in s.habitual_connections
        ],
        "valuePriorities": [
            {"agent": p.agent, "value": p.value} | _views_out(p.views)
            for p in s.value_priorities
        ],
        "valueConnections": [
            {"agent": c.agent, "activity": c.activity, "value": c.value} | _views_out(c.views)
            for c in s.value_connections
        ],
        "roots": list(s.roots),
        "environment": {
            "timepoints": list(s.environment.timepoints),
            "placements": {loc: list(res) for loc, res in s.environment.placements},
            "relocations": [
                {"tick": r.tick, "agent": r.agent, "location": r.location}
                for r in s.environment.relocations
            ],
        },
        "globals": {
            "habitThreshold": s.globals.habit_threshold,
            "decayRate": s.globals.decay_rate,
            "socialLearningRate": s.globals.social_learning_rate,
            "awarenessRate": s.globals.awareness_rate,
            "attenuation": s.globals.attenuation,
            "deliberationCost": s.globals.deliberation_cost,
            "pressureAggregation": s.globals.pressure_aggregation,
            "decayAll": s.globals.decay_all,
            "tieBreak": s.globals.tie_break,
            "extensionsEnabled": s.globals.extensions_enabled,
            "feasibilityThreshold": s.globals.feasibility_threshold,
        },
        "affordances": [
            {"contextElement": a.context_element, "activity": a.activity, "strength": a.strength}
            for a in s.affordances
        ],
        "competences": {
            "levels": [
                {"agent": c.agent, "competence": c.competence, "level": c.level}
                for c in s.competence_levels
            ],
            "requirements": [
                {"activity": r.activity, "competence": r.competence, "required": r.required}
                for r in s.competence_requirements
            ],
        },
        "activityBeliefs": [
            {
                "agent": b.agent,
                "child": b.child,
                "parent": b.parent,
                "personalView": b.personal_view.value if b.personal_view else None,
                "myCollectiveView": b.my_collective_view.value if b.my_collective_view else None,
            }
            for b in s.activity_beliefs
        ],
    }


def load_scenario(path: str | Path, *, check_refs: bool = True) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        document = json.load(fh)
    return build_scenario(document, check_refs=check_refs)


def save_scenario(s: Scenario, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(serialize_scenario(s), fh, indent=2, sort_keys=False)
        fh.write("\n")
