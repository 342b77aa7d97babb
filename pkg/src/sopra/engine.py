"""Deterministic tick loop.

Each tick runs in five phases over agents in ascending id order:

1. snapshot every agent's context from tick-start state,
2. run every decision cycle against those snapshots,
3. apply strength dynamics and personal-view tracking,
4. deliver observations between co-located agent pairs,
5. log events, replenish attention, record last activities, apply
   scheduled relocations, and advance the clock.

Because phases never read state another agent mutated in the same phase
sweep, and all iteration is over sorted ids, identical scenario + seed
gives byte-identical logs in any process.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .cognition import decision_cycle, habitual_pressure, _norm_score
from .learning import ObservationEvent, habit_tick, observe, update_personal_view
from .hierarchy import project_collective_from_personal
from .model import DecisionMode, Scenario
from .state import AgentState, ContextSnapshot, build_score_cache, init_agent_state
from .validate import InvalidScenarioError, validate_scenario

EVENTS_HEADER = "tick,agent,activity,mode,pressure,score,location,timepoint"

# Logged scores snap to this dyadic grid (finer than the six decimals the
# CSV keeps) so numerically equivalent inputs, e.g. value priorities all
# rescaled by a constant, cannot flip the last printed digit via an
# ulp-sized perturbation.
_SCORE_GRID = float(1 << 20)


def _snap_score(x: float) -> float:
    return round(x * _SCORE_GRID) / _SCORE_GRID


@dataclass(frozen=True)
class Event:
    tick: int
    agent: str
    activity: str
    mode: DecisionMode
    pressure: float
    score: float
    location: str
    timepoint: str | None


@dataclass(frozen=True)
class StrengthSample:
    """End-of-tick aggregate over all stored connections of all agents."""

    connections: int
    strength_total: float
    personal_total: float
    collective_total: float


@dataclass(frozen=True)
class MetricsRow:
    tick: int
    habitual_fraction: float
    counts: tuple[int, ...]  # aligned with the sorted atomic activity ids
    mean_strength: float
    mean_personal_view: float
    mean_collective_view: float


def snapshot_context(world: World, agent_id: str) -> ContextSnapshot:
    """What `agent_id` perceives right now: its location, the current
    timepoint, resources placed there, co-located agents, and its own
    previous activity."""
    idx = world.scenario.index
    state = world.states[agent_id]
    present = {state.location}
    tp = idx.timepoint_at(world.tick)
    if tp is not None:
        present.add(tp)
    present.update(idx.placements.get(state.location, ()))
    for other_id in idx.agent_ids:
        if other_id != agent_id and world.states[other_id].location == state.location:
            present.add(other_id)
    if state.last_activity is not None:
        present.add(state.last_activity)
    return ContextSnapshot(frozenset(present))


class World:
    def __init__(self, scenario: Scenario, seed: int = 0, *,
                 backend: str | None = None, validate: bool = True):
        if validate:
            report = validate_scenario(scenario)
            if report:
                raise InvalidScenarioError(report)
        self.scenario = scenario
        self.rng = random.Random(seed)
        self.tick = 0
        self.events: list[Event] = []
        self.samples: list[StrengthSample] = []
        self.observation_count = 0
        self.states: dict[str, AgentState] = {
            ag: init_agent_state(scenario, ag, backend) for ag in scenario.index.agent_ids
        }
        for state in self.states.values():
            project_collective_from_personal(state)
            build_score_cache(state, scenario)

    def step(self) -> list[Event]:
        s = self.scenario
        idx = s.index
        agent_ids = idx.agent_ids
        tick = self.tick
        timepoint = idx.timepoint_at(tick)

        snaps = {ag: snapshot_context(self, ag) for ag in agent_ids}

        performed: dict[str, str] = {}
        traces = {}
        root_pressures: dict[str, float] = {}
        for ag in agent_ids:
            atomic, trace = decision_cycle(self.states[ag], snaps[ag], s, self.rng)
            performed[ag] = atomic
            traces[ag] = trace
            if not trace.steps:
                # Atomic root: sample the pressure now, before the strength
                # dynamics run, so the log reflects what the agent saw.
                root_pressures[ag] = habitual_pressure(
                    self.states[ag], atomic, snaps[ag], s
                )

        for ag in agent_ids:
            habit_tick(self.states[ag], performed[ag], snaps[ag], s)
            update_personal_view(self.states[ag], s)

        by_location: dict[str, list[str]] = {}
        for ag in agent_ids:
            by_location.setdefault(self.states[ag].location, []).append(ag)
        for location in sorted(by_location):
            here = by_location[location]  # already id-sorted
            if len(here) < 2:
                continue
            for observer in here:
                for actor in here:
                    if observer == actor:
                        continue
                    event = ObservationEvent(
                        observer, actor, performed[actor], snaps[actor], tick
                    )
                    observe(event, s, self.states,
                            traces[actor].final_candidates(performed[actor]))
                    self.observation_count += 1

        new_events = []
        habitual = 0
        for ag in agent_ids:
            state = self.states[ag]
            trace = traces[ag]
            if trace.steps:
                last = trace.steps[-1]
                mode, pressure, score = last.mode, last.pressure, last.score
            else:
                # Atomic root: nothing to choose, so no attention is spent;
                # pressure and score are reported for observability.
                mode = DecisionMode.HABITUAL
                pressure = root_pressures[ag]
                score = _norm_score(state, performed[ag], s)
            if mode is DecisionMode.HABITUAL:
                habitual += 1
            new_events.append(
                Event(tick, ag, performed[ag], mode, pressure, _snap_score(score),
                      state.location, timepoint)
            )
            state.last_activity = performed[ag]
            state.resources = idx.agent_specs[ag].attention_budget
        self.events.extend(new_events)

        connections = 0
        strength_total = 0.0
        personal_total = 0.0
        collective_total = 0.0
        for ag in agent_ids:
            n, ts, tp, tc = self.states[ag].habits.sums()
            connections += n
            strength_total = strength_total + ts
            personal_total = personal_total + tp
            collective_total = collective_total + tc
        self.samples.append(
            StrengthSample(connections, strength_total, personal_total, collective_total)
        )

        for relocation in idx.relocations_by_tick.get(tick, ()):
            self.states[relocation.agent].location = relocation.location
        self.tick += 1
        return new_events

    def run(self, ticks: int) -> tuple[list[Event], list[MetricsRow]]:
        for _ in range(ticks):
            self.step()
        return self.events, collect_metrics(self.events, self.samples,
                                            self.scenario.index.atomic_ids)


def run(scenario: Scenario, ticks: int, seed: int = 0, *,
        backend: str | None = None) -> tuple[list[Event], list[MetricsRow]]:
    """Validate, build a world, and advance it `ticks` ticks."""
    return World(scenario, seed, backend=backend).run(ticks)


def collect_metrics(events: Sequence[Event], samples: Sequence[StrengthSample],
                    atomic_ids: Sequence[str]) -> list[MetricsRow]:
    """Per-tick aggregates: habitual fraction, activity counts, and mean
    views over stored connections (0.0 when nothing is stored)."""
    by_tick: dict[int, list[Event]] = {}
    for e in events:
        by_tick.setdefault(e.tick, []).append(e)
    rows = []
    positions = {a: i for i, a in enumerate(atomic_ids)}
    for tick_i, sample in enumerate(samples):
        tick_events = by_tick.get(tick_i, [])
        counts = [0] * len(atomic_ids)
        habitual = 0
        for e in tick_events:
            counts[positions[e.activity]] += 1
            if e.mode is DecisionMode.HABITUAL:
                habitual += 1
        n_agents = len(tick_events)
        n_conn = sample.connections
        rows.append(
            MetricsRow(
                tick=tick_i,
                habitual_fraction=habitual / n_agents if n_agents else 0.0,
                counts=tuple(counts),
                mean_strength=sample.strength_total / n_conn if n_conn else 0.0,
                mean_personal_view=sample.personal_total / n_conn if n_conn else 0.0,
                mean_collective_view=sample.collective_total / n_conn if n_conn else 0.0,
            )
        )
    return rows


def events_csv(events: Iterable[Event]) -> str:
    lines = [EVENTS_HEADER]
    for e in events:
        lines.append(
            f"{e.tick},{e.agent},{e.activity},{e.mode.value},"
            f"{e.pressure:.6f},{e.score:.6f},{e.location},{e.timepoint or ''}"
        )
    return "\n".join(lines) + "\n"


def metrics_csv(rows: Iterable[MetricsRow], atomic_ids: Sequence[str]) -> str:
    header = ["tick", "habitual_fraction"]
    header.extend(f"count_{a}" for a in atomic_ids)
    header.extend(["mean_strength", "mean_personal_view", "mean_collective_view"])
    lines = [",".join(header)]
    for r in rows:
        cells = [str(r.tick), f"{r.habitual_fraction:.6f}"]
        cells.extend(str(c) for c in r.counts)
        cells.extend(
            f"{v:.6f}"
            for v in (r.mean_strength, r.mean_personal_view, r.mean_collective_view)
        )
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def write_text_atomic(text: str, path: str | Path) -> None:
    """Write via a sibling temp file and rename, so readers never see a
    partial file. Always LF line endings."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)
