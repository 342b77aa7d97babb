"""Per-agent runtime state and its construction from a scenario."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ._kernel import get_backend
from .model import Scenario


@dataclass(frozen=True)
class ContextSnapshot:
    """The element tokens an agent perceives at one tick: its location,
    the current timepoint, resources placed at the location, co-located
    agents, and its own previous activity."""

    present: frozenset[str]

    def __post_init__(self):
        if not isinstance(self.present, frozenset):
            object.__setattr__(self, "present", frozenset(self.present))


@dataclass
class SequentialFrame:
    """An entered sequential activity that still has parts to perform.

    `completed` holds the PartOf children already done. `part_in_parent`
    is the part of the enclosing frame's activity this subtree was
    entered through; `pending_part` is cycle-local scratch recording the
    part chosen on the current descent.
    """

    activity: str
    completed: set[str] = field(default_factory=set)
    part_in_parent: str | None = None
    pending_part: str | None = None


@dataclass
class ExecutionState:
    pending: list[SequentialFrame] = field(default_factory=list)

    def top(self) -> SequentialFrame | None:
        return self.pending[-1] if self.pending else None


@dataclass
class AgentState:
    agent_id: str
    habits: object  # HabitStore (selected backend)
    # vidx -> [strength, personal, collective]; collective is NaN until formed
    value_priorities: dict[int, list[float]]
    # (aidx, vidx) -> [strength, personal, collective]
    value_connections: dict[tuple[int, int], list[float]]
    exec_state: ExecutionState
    resources: int
    location: str
    last_activity: str | None = None
    score_raw: dict[str, float] | None = None
    score_norm: dict[str, float] | None = None


def init_agent_state(scenario: Scenario, agent_id: str, backend: str | None = None) -> AgentState:
    idx = scenario.index
    spec = idx.agent_specs[agent_id]
    store = get_backend(backend)(idx.chain_data, idx.chain_start)
    nan = float("nan")
    for hc in idx.habitual_by_agent.get(agent_id, ()):
        cv = hc.views.my_collective_view
        store.set_views(
            idx.activity_index(hc.activity),
            idx.element_index(hc.context_element),
            hc.views.strength,
            hc.views.personal_view,
            nan if cv is None else cv,
        )
    priorities: dict[int, list[float]] = {}
    for vp in idx.priorities_by_agent.get(agent_id, ()):
        cv = vp.views.my_collective_view
        priorities[idx.value_index(vp.value)] = [
            vp.views.strength,
            vp.views.personal_view,
            nan if cv is None else cv,
        ]
    connections: dict[tuple[int, int], list[float]] = {}
    for vc in idx.connections_by_agent.get(agent_id, ()):
        cv = vc.views.my_collective_view
        key = (idx.activity_index(vc.activity), idx.value_index(vc.value))
        connections[key] = [
            vc.views.strength,
            vc.views.personal_view,
            nan if cv is None else cv,
        ]
    return AgentState(
        agent_id=agent_id,
        habits=store,
        value_priorities=priorities,
        value_connections=connections,
        exec_state=ExecutionState(),
        resources=spec.initial_resources,
        location=spec.location,
    )


def build_score_cache(state: AgentState, scenario: Scenario) -> None:
    """Precompute intentional scores; they only change when view tables do,
    which in the current dynamics is never during a run."""
    from .cognition import intentional_score

    idx = scenario.index
    total = 0.0
    for vi in sorted(state.value_priorities):
        total = total + state.value_priorities[vi][1]
    raw: dict[str, float] = {}
    norm: dict[str, float] = {}
    for a in idx.activity_ids:
        r = intentional_score(state, a, scenario)
        raw[a] = r
        norm[a] = r / total if total > 0.0 else 0.0
    state.score_raw = raw
    state.score_norm = norm
