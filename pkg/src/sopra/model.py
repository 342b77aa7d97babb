"""Core domain model: context elements, activities, views, and scenarios.

This module is the data contract shared by the validator, the inference
helpers, and the runtime. Everything here is immutable after
construction; `Scenario.index` lazily derives the lookup tables (interned
ids, ancestor chains, child maps) that the rest of the package works from.

Terminology used throughout the package:

* A *context element* is a token, not a type: ``bobs_car`` and its
  hierarchy parent ``car`` are both elements of kind Resource. Kinds
  partition the token namespace; activities and agents are automatically
  elements of kind Activity and Agent.
* A *view triple* holds three numbers in [0, 1]: the implicit
  ``strength`` of a connection, the agent's explicit ``personal_view`` of
  it, and ``my_collective_view``, the agent's estimate of how the group
  sees it (None until the agent forms one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ScenarioError, UnknownIdError


class ElementKind(str, Enum):
    ACTIVITY = "Activity"
    AGENT = "Agent"
    LOCATION = "Location"
    RESOURCE = "Resource"
    TIMEPOINT = "Timepoint"


class ActivityType(str, Enum):
    ATOMIC = "Atomic"
    SEQUENTIAL = "Sequential"
    ABSTRACT = "Abstract"


class RelationType(str, Enum):
    IS_A = "IsA"
    PART_OF = "PartOf"


class DecisionMode(str, Enum):
    HABITUAL = "Habitual"
    INTENTIONAL = "Intentional"


@dataclass(frozen=True)
class ContextElement:
    id: str
    kind: ElementKind
    parent: str | None = None  # same-kind element, forms a forest per kind


@dataclass(frozen=True)
class Activity:
    id: str
    type: ActivityType
    parent: str | None = None  # optional parent in the Activity element forest


@dataclass(frozen=True)
class ActivityConnection:
    child: str
    parent: str
    relation: RelationType


@dataclass(frozen=True)
class ViewTriple:
    strength: float = 0.0
    personal_view: float = 0.0
    my_collective_view: float | None = None  # None = not yet formed

    def as_tuple(self) -> tuple[float, float, float | None]:
        return (self.strength, self.personal_view, self.my_collective_view)


@dataclass(frozen=True)
class HabitualConnection:
    agent: str
    activity: str
    context_element: str
    views: ViewTriple = ViewTriple()


@dataclass(frozen=True)
class ValuePriority:
    agent: str
    value: str
    views: ViewTriple = ViewTriple()


@dataclass(frozen=True)
class ValueConnection:
    agent: str
    activity: str
    value: str
    views: ViewTriple = ViewTriple()


@dataclass(frozen=True)
class AgentSpec:
    id: str
    habit_rate: float
    attention_budget: int
    location: str
    attentional_resources: int | None = None  # tick-0 stock; defaults to the budget
    parent: str | None = None

    @property
    def initial_resources(self) -> int:
        return (
            self.attention_budget
            if self.attentional_resources is None
            else self.attentional_resources
        )


@dataclass(frozen=True)
class AffordanceConnection:
    context_element: str
    activity: str
    strength: float


@dataclass(frozen=True)
class CompetenceLevel:
    agent: str
    competence: str
    level: float


@dataclass(frozen=True)
class CompetenceRequirement:
    activity: str
    competence: str
    required: float


@dataclass(frozen=True)
class ActivityBelief:
    """An agent's view of one hierarchy edge; views are relation labels."""

    agent: str
    child: str
    parent: str
    personal_view: RelationType | None = None
    my_collective_view: RelationType | None = None


@dataclass(frozen=True)
class Relocation:
    tick: int
    agent: str
    location: str


@dataclass(frozen=True)
class Environment:
    """Scripted world state: a cyclic timepoint schedule, static resource
    placements per location, and agent relocations applied at the end of
    their tick."""

    timepoints: tuple[str, ...] = ()
    placements: tuple[tuple[str, tuple[str, ...]], ...] = ()
    relocations: tuple[Relocation, ...] = ()


@dataclass(frozen=True)
class Globals:
    habit_threshold: float = 0.5
    decay_rate: float = 0.0
    social_learning_rate: float = 0.3
    awareness_rate: float = 0.5
    attenuation: float = 0.5
    deliberation_cost: int = 1
    pressure_aggregation: str = "mean"  # mean | max | sum
    decay_all: bool = False
    tie_break: str = "lexicographic"  # lexicographic | uniform
    extensions_enabled: bool = False
    feasibility_threshold: float = 0.0


@dataclass(frozen=True)
class Scenario:
    """A complete, declarative world description.

    Collections are kept in canonical (sorted) order by the builder, so
    two scenarios with the same content compare equal regardless of the
    order their source documents listed things in. `roots` keeps document
    order: its first entry is the activity every agent starts from.
    """

    context_elements: tuple[ContextElement, ...] = ()
    activities: tuple[Activity, ...] = ()
    activity_connections: tuple[ActivityConnection, ...] = ()
    values: tuple[str, ...] = ()
    agents: tuple[AgentSpec, ...] = ()
    habitual_connections: tuple[HabitualConnection, ...] = ()
    value_priorities: tuple[ValuePriority, ...] = ()
    value_connections: tuple[ValueConnection, ...] = ()
    roots: tuple[str, ...] = ()
    environment: Environment = Environment()
    globals: Globals = Globals()
    affordances: tuple[AffordanceConnection, ...] = ()
    competence_levels: tuple[CompetenceLevel, ...] = ()
    competence_requirements: tuple[CompetenceRequirement, ...] = ()
    activity_beliefs: tuple[ActivityBelief, ...] = ()

    @cached_property
    def index(self) -> ScenarioIndex:
        return ScenarioIndex(self)


_MAX_CHAIN = 10_000  # guard against parent cycles in unvalidated input


class ScenarioIndex:
    """Derived lookup tables for a structurally sound scenario.

    Ids are interned to dense integers in sorted-id order, so index order
    and lexicographic id order coincide; the kernels rely on that for
    deterministic iteration. Building the index assumes references
    resolve and parent chains are acyclic (`build_scenario` checks the
    former, `validate_scenario` the latter).
    """

    def __init__(self, s: Scenario):
        kind_of: dict[str, ElementKind] = {}
        parent_of: dict[str, str | None] = {}
        for ce in s.context_elements:
            kind_of[ce.id] = ce.kind
            parent_of[ce.id] = ce.parent
        for a in s.activities:
            kind_of[a.id] = ElementKind.ACTIVITY
            parent_of[a.id] = a.parent
        for ag in s.agents:
            kind_of[ag.id] = ElementKind.AGENT
            parent_of[ag.id] = ag.parent
        self.kind_of = kind_of
        self.parent_of = parent_of

        self.element_ids: tuple[str, ...] = tuple(sorted(kind_of))
        self.eidx: dict[str, int] = {e: i for i, e in enumerate(self.element_ids)}

        self.activity_ids: tuple[str, ...] = tuple(sorted(a.id for a in s.activities))
        self.aidx: dict[str, int] = {a: i for i, a in enumerate(self.activity_ids)}
        self.activity_type: dict[str, ActivityType] = {a.id: a.type for a in s.activities}
        self.atomic_ids: tuple[str, ...] = tuple(
            a for a in self.activity_ids if self.activity_type[a] is ActivityType.ATOMIC
        )

        self.value_ids: tuple[str, ...] = tuple(sorted(s.values))
        self.vidx: dict[str, int] = {v: i for i, v in enumerate(self.value_ids)}

        # Flattened ancestor chains: chain_data[start[e]:start[e+1]] lists
        # element e itself, then its parents outward.
        chain_data: list[int] = []
        chain_start: list[int] = [0]
        for e in self.element_ids:
            node: str | None = e
            steps = 0
            while node is not None:
                chain_data.append(self.eidx[node])
                node = parent_of.get(node)
                steps += 1
                if steps > _MAX_CHAIN:
                    raise ScenarioError(f"context hierarchy cycle at {e!r}")
            chain_start.append(len(chain_data))
        self.chain_data = chain_data
        self.chain_start = chain_start

        children: dict[tuple[str, RelationType], list[str]] = {}
        for c in s.activity_connections:
            children.setdefault((c.parent, c.relation), []).append(c.child)
        self._children = {k: tuple(sorted(v)) for k, v in children.items()}

        self.agent_ids: tuple[str, ...] = tuple(sorted(a.id for a in s.agents))
        self.agent_specs: dict[str, AgentSpec] = {a.id: a for a in s.agents}

        by_agent: dict[str, list[HabitualConnection]] = {}
        for hc in s.habitual_connections:
            by_agent.setdefault(hc.agent, []).append(hc)
        self.habitual_by_agent: dict[str, tuple[HabitualConnection, ...]] = {
            ag: tuple(sorted(rows, key=lambda h: (h.activity, h.context_element)))
            for ag, rows in by_agent.items()
        }
        prio: dict[str, list[ValuePriority]] = {}
        for vp in s.value_priorities:
            prio.setdefault(vp.agent, []).append(vp)
        self.priorities_by_agent = {
            ag: tuple(sorted(rows, key=lambda p: p.value)) for ag, rows in prio.items()
        }
        conn: dict[str, list[ValueConnection]] = {}
        for vc in s.value_connections:
            conn.setdefault(vc.agent, []).append(vc)
        self.connections_by_agent = {
            ag: tuple(sorted(rows, key=lambda c: (c.activity, c.value)))
            for ag, rows in conn.items()
        }

        aff: dict[str, dict[int, float]] = {}
        for af in s.affordances:
            aff.setdefault(af.activity, {})[self.eidx[af.context_element]] = af.strength
        self.affordances_by_activity = aff

        reqs: dict[str, list[tuple[str, float]]] = {}
        for cr in s.competence_requirements:
            reqs.setdefault(cr.activity, []).append((cr.competence, cr.required))
        self.requirements_by_activity = {a: tuple(sorted(r)) for a, r in reqs.items()}
        self.levels_by_agent: dict[str, dict[str, float]] = {}
        for cl in s.competence_levels:
            self.levels_by_agent.setdefault(cl.agent, {})[cl.competence] = cl.level

        self.beliefs: dict[tuple[str, str, str], ActivityBelief] = {
            (b.agent, b.child, b.parent): b for b in s.activity_beliefs
        }

        self.placements: dict[str, tuple[str, ...]] = {
            loc: res for loc, res in s.environment.placements
        }
        reloc: dict[int, list[Relocation]] = {}
        for r in s.environment.relocations:
            reloc.setdefault(r.tick, []).append(r)
        self.relocations_by_tick = {
            t: tuple(sorted(rs, key=lambda r: r.agent)) for t, rs in reloc.items()
        }
        self.timepoints = s.environment.timepoints

    def element_index(self, element: str) -> int:
        try:
            return self.eidx[element]
        except KeyError:
            raise UnknownIdError(f"unknown context element: {element!r}") from None

    def activity_index(self, activity: str) -> int:
        try:
            return self.aidx[activity]
        except KeyError:
            raise UnknownIdError(f"unknown activity: {activity!r}") from None

    def value_index(self, value: str) -> int:
        try:
            return self.vidx[value]
        except KeyError:
            raise UnknownIdError(f"unknown value: {value!r}") from None

    def type_of(self, activity: str) -> ActivityType:
        try:
            return self.activity_type[activity]
        except KeyError:
            raise UnknownIdError(f"unknown activity: {activity!r}") from None

    def children(self, activity: str, relation: RelationType | None = None) -> tuple[str, ...]:
        if activity not in self.activity_type:
            raise UnknownIdError(f"unknown activity: {activity!r}")
        if relation is not None:
            return self._children.get((activity, relation), ())
        isa = self._children.get((activity, RelationType.IS_A), ())
        part = self._children.get((activity, RelationType.PART_OF), ())
        return tuple(sorted(isa + part)) if isa and part else isa + part

    def ancestors(self, element: str) -> tuple[str, ...]:
        """Parents of `element` walking outward, nearest first."""
        i = self.element_index(element)
        lo, hi = self.chain_start[i], self.chain_start[i + 1]
        return tuple(self.element_ids[j] for j in self.chain_data[lo + 1 : hi])

    def timepoint_at(self, tick: int) -> str | None:
        if not self.timepoints:
            return None
        return self.timepoints[tick % len(self.timepoints)]


def mode_label(mode: DecisionMode) -> str:
    return mode.value
