"""Structural validation of scenarios.

`validate_scenario` is pure: it returns the same report for the same
scenario, never mutates anything, and never raises on bad content (only
`check_references`-level problems already rejected by the builder are
assumed absent when indexing, which this module does not use). Each
finding is classified so tooling can filter, and messages carry the ids
involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import ScenarioError
from .model import ActivityType, ElementKind, RelationType, Scenario, ViewTriple


class ViolationKind(str, Enum):
    CYCLE = "cycle"
    DISJOINTNESS = "disjointness"
    TYPING = "typing"
    ATOMIC_WITH_CHILDREN = "atomic-with-children"
    DANGLING_REFERENCE = "dangling-reference"
    VIEW_RANGE = "view-range"
    MULTIPLICITY = "multiplicity"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    message: str


class InvalidScenarioError(ScenarioError):
    """Raised when a run is attempted on a scenario with violations."""

    def __init__(self, report: list[Violation]):
        self.report = report
        super().__init__([f"{v.kind.value}: {v.message}" for v in report])


def _kinds(s: Scenario) -> dict[str, ElementKind]:
    kinds = {e.id: e.kind for e in s.context_elements}
    kinds.update({a.id: ElementKind.ACTIVITY for a in s.activities})
    kinds.update({a.id: ElementKind.AGENT for a in s.agents})
    return kinds


def check_references(s: Scenario) -> list[Violation]:
    """Every id used anywhere must be declared somewhere."""
    kinds = _kinds(s)
    activities = {a.id for a in s.activities}
    agents = {a.id for a in s.agents}
    values = set(s.values)
    out: list[Violation] = []
    seen: set[str] = set()

    def miss(message: str) -> None:
        if message not in seen:
            seen.add(message)
            out.append(Violation(ViolationKind.DANGLING_REFERENCE, message))

    def need(token: str, pool: set[str] | dict, what: str, where: str) -> None:
        if token not in pool:
            miss(f"{where}: unknown {what} {token!r}")

    for e in s.context_elements:
        if e.parent is not None:
            need(e.parent, kinds, "element", f"contextElements[{e.id}].parent")
    for a in s.activities:
        if a.parent is not None:
            need(a.parent, kinds, "element", f"activities[{a.id}].parent")
    for ag in s.agents:
        if ag.parent is not None:
            need(ag.parent, kinds, "element", f"agents[{ag.id}].parent")
        need(ag.location, kinds, "element", f"agents[{ag.id}].location")
    for c in s.activity_connections:
        where = f"activityConnections[{c.child}->{c.parent}]"
        need(c.child, activities, "activity", where)
        need(c.parent, activities, "activity", where)
    for h in s.habitual_connections:
        where = f"habitualConnections[{h.agent}]"
        need(h.agent, agents, "agent", where)
        need(h.activity, activities, "activity", where)
        need(h.context_element, kinds, "element", where)
    for p in s.value_priorities:
        where = f"valuePriorities[{p.agent}]"
        need(p.agent, agents, "agent", where)
        need(p.value, values, "value", where)
    for c in s.value_connections:
        where = f"valueConnections[{c.agent}]"
        need(c.agent, agents, "agent", where)
        need(c.activity, activities, "activity", where)
        need(c.value, values, "value", where)
    for r in s.roots:
        need(r, activities, "activity", "roots")
    env = s.environment
    for t in env.timepoints:
        need(t, kinds, "element", "environment.timepoints")
    for loc, resources in env.placements:
        need(loc, kinds, "element", "environment.placements")
        for res in resources:
            need(res, kinds, "element", f"environment.placements[{loc}]")
    for r in env.relocations:
        where = f"environment.relocations[tick={r.tick}]"
        need(r.agent, agents, "agent", where)
        need(r.location, kinds, "element", where)
    for a in s.affordances:
        where = f"affordances[{a.activity}]"
        need(a.context_element, kinds, "element", where)
        need(a.activity, activities, "activity", where)
    for lv in s.competence_levels:
        need(lv.agent, agents, "agent", f"competences.levels[{lv.competence}]")
    for rq in s.competence_requirements:
        need(rq.activity, activities, "activity", f"competences.requirements[{rq.competence}]")
    for b in s.activity_beliefs:
        where = f"activityBeliefs[{b.agent}]"
        need(b.agent, agents, "agent", where)
        need(b.child, activities, "activity", where)
        need(b.parent, activities, "activity", where)
    return out


def _check_kind_usage(s: Scenario, kinds: dict[str, ElementKind]) -> list[Violation]:
    out: list[Violation] = []

    def expect(token: str, kind: ElementKind, where: str) -> None:
        actual = kinds.get(token)
        if actual is not None and actual is not kind:
            out.append(
                Violation(
                    ViolationKind.DISJOINTNESS,
                    f"{where}: {token!r} is a {actual.value}, expected {kind.value}",
                )
            )

    for e in s.context_elements:
        if e.parent is not None and kinds.get(e.parent) is not None:
            if kinds[e.parent] is not e.kind:
                out.append(
                    Violation(
                        ViolationKind.DISJOINTNESS,
                        f"contextElements[{e.id}]: parent {e.parent!r} is a "
                        f"{kinds[e.parent].value}, expected {e.kind.value}",
                    )
                )
    for a in s.activities:
        if a.parent is not None:
            expect(a.parent, ElementKind.ACTIVITY, f"activities[{a.id}].parent")
    for ag in s.agents:
        if ag.parent is not None:
            expect(ag.parent, ElementKind.AGENT, f"agents[{ag.id}].parent")
        expect(ag.location, ElementKind.LOCATION, f"agents[{ag.id}].location")
    env = s.environment
    for t in env.timepoints:
        expect(t, ElementKind.TIMEPOINT, "environment.timepoints")
    for loc, resources in env.placements:
        expect(loc, ElementKind.LOCATION, "environment.placements")
        for res in resources:
            expect(res, ElementKind.RESOURCE, f"environment.placements[{loc}]")
    for r in env.relocations:
        expect(r.location, ElementKind.LOCATION, f"environment.relocations[tick={r.tick}]")
    return out


def _check_parent_forests(s: Scenario) -> list[Violation]:
    parent: dict[str, str | None] = {e.id: e.parent for e in s.context_elements}
    parent.update({a.id: a.parent for a in s.activities})
    parent.update({a.id: a.parent for a in s.agents})
    out = []
    done: set[str] = set()
    for start in sorted(parent):
        if start in done:
            continue
        path: list[str] = []
        on_path: set[str] = set()
        node: str | None = start
        while node is not None and node in parent and node not in done:
            if node in on_path:
                cycle = path[path.index(node) :]
                out.append(
                    Violation(
                        ViolationKind.CYCLE,
                        "context hierarchy cycle: " + " -> ".join(cycle + [node]),
                    )
                )
                break
            on_path.add(node)
            path.append(node)
            node = parent[node]
        done.update(path)
    return out


def _check_activity_graph(s: Scenario) -> list[Violation]:
    out: list[Violation] = []
    types = {a.id: a.type for a in s.activities}
    has_children: set[str] = set()
    seen_edges: set[tuple[str, str, RelationType]] = set()
    parents: dict[str, list[str]] = {}

    for c in s.activity_connections:
        edge = (c.child, c.parent, c.relation)
        if edge in seen_edges:
            out.append(
                Violation(
                    ViolationKind.MULTIPLICITY,
                    f"duplicate activity connection {c.child!r} -{c.relation.value}-> {c.parent!r}",
                )
            )
        seen_edges.add(edge)
        if c.child == c.parent:
            out.append(
                Violation(ViolationKind.CYCLE, f"activity {c.child!r} connected to itself")
            )
            continue
        parents.setdefault(c.child, []).append(c.parent)
        ptype = types.get(c.parent)
        if ptype is None:
            continue
        has_children.add(c.parent)
        if ptype is ActivityType.ATOMIC:
            out.append(
                Violation(
                    ViolationKind.ATOMIC_WITH_CHILDREN,
                    f"atomic activity {c.parent!r} has child {c.child!r}",
                )
            )
        elif ptype is ActivityType.ABSTRACT and c.relation is not RelationType.IS_A:
            out.append(
                Violation(
                    ViolationKind.TYPING,
                    f"abstract activity {c.parent!r} takes IsA children, got "
                    f"{c.relation.value} from {c.child!r}",
                )
            )
        elif ptype is ActivityType.SEQUENTIAL and c.relation is not RelationType.PART_OF:
            out.append(
                Violation(
                    ViolationKind.TYPING,
                    f"sequential activity {c.parent!r} takes PartOf children, got "
                    f"{c.relation.value} from {c.child!r}",
                )
            )

    for a in s.activities:
        if a.type is not ActivityType.ATOMIC and a.id not in has_children:
            out.append(
                Violation(
                    ViolationKind.TYPING,
                    f"{a.type.value.lower()} activity {a.id!r} has no children",
                )
            )

    # Child->parent edges must form a DAG; iterative DFS with colors.
    color: dict[str, int] = {}
    for start in sorted(types):
        if color.get(start):
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        while stack:
            node, i = stack.pop()
            if i == 0:
                if color.get(node) == 2:
                    continue
                color[node] = 1
            nxt = parents.get(node, ())
            if i < len(nxt):
                stack.append((node, i + 1))
                child = nxt[i]
                state = color.get(child, 0)
                if state == 1:
                    out.append(
                        Violation(
                            ViolationKind.CYCLE,
                            f"activity connection cycle through {child!r}",
                        )
                    )
                elif state == 0:
                    stack.append((child, 0))
            else:
                color[node] = 2
    return out


def _view_range(views: ViewTriple, where: str, out: list[Violation]) -> None:
    for label, v in (
        ("strength", views.strength),
        ("personalView", views.personal_view),
        ("myCollectiveView", views.my_collective_view),
    ):
        if v is not None and not 0.0 <= v <= 1.0:
            out.append(
                Violation(ViolationKind.VIEW_RANGE, f"{where}: {label} {v!r} outside [0, 1]")
            )


def _check_ranges(s: Scenario) -> list[Violation]:
    out: list[Violation] = []
    for h in s.habitual_connections:
        _view_range(h.views, f"habitualConnections[{h.agent}:{h.activity}:{h.context_element}]", out)
    for p in s.value_priorities:
        _view_range(p.views, f"valuePriorities[{p.agent}:{p.value}]", out)
    for c in s.value_connections:
        _view_range(c.views, f"valueConnections[{c.agent}:{c.activity}:{c.value}]", out)
    for a in s.affordances:
        if not 0.0 <= a.strength <= 1.0:
            out.append(
                Violation(
                    ViolationKind.VIEW_RANGE,
                    f"affordances[{a.context_element}:{a.activity}]: strength "
                    f"{a.strength!r} outside [0, 1]",
                )
            )
    for lv in s.competence_levels:
        if not 0.0 <= lv.level <= 1.0:
            out.append(
                Violation(
                    ViolationKind.VIEW_RANGE,
                    f"competences.levels[{lv.agent}:{lv.competence}]: level "
                    f"{lv.level!r} outside [0, 1]",
                )
            )
    for rq in s.competence_requirements:
        if not 0.0 <= rq.required <= 1.0:
            out.append(
                Violation(
                    ViolationKind.VIEW_RANGE,
                    f"competences.requirements[{rq.activity}:{rq.competence}]: required "
                    f"{rq.required!r} outside [0, 1]",
                )
            )
    return out


def _check_multiplicity(s: Scenario) -> list[Violation]:
    out: list[Violation] = []

    def dups(keys: list, what: str) -> None:
        seen: set = set()
        flagged: set = set()
        for k in keys:
            if k in seen and k not in flagged:
                flagged.add(k)
                label = ":".join(str(p) for p in k)
                out.append(Violation(ViolationKind.MULTIPLICITY, f"duplicate {what} {label!r}"))
            seen.add(k)

    dups([(h.agent, h.activity, h.context_element) for h in s.habitual_connections],
         "habitual connection")
    dups([(p.agent, p.value) for p in s.value_priorities], "value priority")
    dups([(c.agent, c.activity, c.value) for c in s.value_connections], "value connection")
    dups([(a.context_element, a.activity) for a in s.affordances], "affordance")
    dups([(l.agent, l.competence) for l in s.competence_levels], "competence level")
    dups([(r.activity, r.competence) for r in s.competence_requirements],
         "competence requirement")
    dups([(b.agent, b.child, b.parent) for b in s.activity_beliefs], "activity belief")
    return out


def validate_scenario(s: Scenario) -> list[Violation]:
    """Full structural check; empty report means the scenario is runnable."""
    kinds = _kinds(s)
    report: list[Violation] = []
    report.extend(check_references(s))
    report.extend(_check_kind_usage(s, kinds))
    report.extend(_check_parent_forests(s))
    report.extend(_check_activity_graph(s))
    report.extend(_check_ranges(s))
    report.extend(_check_multiplicity(s))
    return report
