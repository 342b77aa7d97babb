"""Connection dynamics: reinforcement, decay, view tracking, and social
observation.

All updates are saturating moves inside [0, 1]: reinforcement closes a
fraction of the gap to 1, decay scales toward 0, and view tracking
closes a fraction of the gap to the tracked quantity. Values that start
in [0, 1] therefore stay there for any admissible rates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .model import Scenario
from .state import AgentState, ContextSnapshot


@dataclass(frozen=True)
class ObservationEvent:
    observer: str
    actor: str
    activity: str  # atomic activity the actor performed
    context: ContextSnapshot  # the actor's context at that tick
    tick: int

    def __post_init__(self):
        if self.observer == self.actor:
            raise ValueError("an agent does not observe itself")


def _ctx_indices(ctx: ContextSnapshot, scenario: Scenario) -> list[int]:
    idx = scenario.index
    return sorted(idx.element_index(e) for e in ctx.present)


def reinforce_habit(state: AgentState, activity: str, ctx: ContextSnapshot,
                    scenario: Scenario) -> None:
    """Performing `activity` in `ctx` pulls each (activity, element)
    strength toward 1 by the agent's habit rate, creating missing
    connections at 0 first."""
    rate = scenario.index.agent_specs[state.agent_id].habit_rate
    state.habits.reinforce(
        scenario.index.activity_index(activity), _ctx_indices(ctx, scenario), rate
    )


def decay_habits(state: AgentState, performed: str, ctx: ContextSnapshot,
                 scenario: Scenario) -> None:
    """Scale every connection not reinforced this tick by (1 - decayRate)."""
    state.habits.decay(
        scenario.index.activity_index(performed),
        _ctx_indices(ctx, scenario),
        scenario.globals.decay_rate,
    )


def habit_tick(state: AgentState, performed: str, ctx: ContextSnapshot,
               scenario: Scenario) -> None:
    """One tick of strength dynamics from tick-start values.

    Default mode composes reinforcement with decay of everything else.
    In decayAll mode the performed connections take the combined step
    (1-d)h + r(1-h), which equilibrates at r/(r+d) instead of 1.
    """
    g = scenario.globals
    state.habits.habit_tick(
        scenario.index.activity_index(performed),
        _ctx_indices(ctx, scenario),
        scenario.index.agent_specs[state.agent_id].habit_rate,
        g.decay_rate,
        g.decay_all,
    )


def update_personal_view(state: AgentState, scenario: Scenario) -> None:
    """Move each habitual personal view toward its connection's current
    strength by the awareness rate."""
    state.habits.track_personal(scenario.globals.awareness_rate)


def observe(event: ObservationEvent, scenario: Scenario,
            states: Mapping[str, AgentState],
            candidates: Sequence[str] = ()) -> None:
    """Fold one observed performance into the observer's collective views.

    The observer strengthens its collective view of (activity, element)
    for every element of the actor's context, and weakens existing views
    for the `candidates` the actor could have picked instead. Connections
    the negative update would create are left absent.
    """
    observer = states[event.observer]
    actor = states[event.actor]
    if observer.location != actor.location:
        raise ValueError(
            f"{event.observer!r} cannot observe {event.actor!r} from another location"
        )
    idx = scenario.index
    acted = idx.activity_index(event.activity)
    competing = sorted(
        idx.activity_index(c) for c in set(candidates) if c != event.activity
    )
    observer.habits.observe(
        acted, competing, _ctx_indices(event.context, scenario),
        scenario.globals.social_learning_rate,
    )


def equilibrium_strength(habit_rate: float, decay_rate: float,
                         decay_all: bool = True) -> float:
    """Fixed point of the per-tick strength update under constant
    reinforcement: r/(r+d) in decayAll mode, 1 otherwise."""
    if not 0.0 < habit_rate <= 1.0:
        raise ValueError(f"habit rate must be in (0, 1], got {habit_rate!r}")
    if not 0.0 <= decay_rate < 1.0:
        raise ValueError(f"decay rate must be in [0, 1), got {decay_rate!r}")
    if not decay_all:
        return 1.0
    return habit_rate / (habit_rate + decay_rate)
