from __future__ import annotations

import pytest
from helpers import make_doc, mutation_fixtures

from sopra import (
    DecisionMode,
    InvalidScenarioError,
    World,
    build_scenario,
    collect_metrics,
    events_csv,
    metrics_csv,
    run,
    snapshot_context,
)
from sopra.engine import EVENTS_HEADER


def _two_agents_doc():
    doc = make_doc()
    doc["agents"].append(
        {"id": "ag2", "habitRate": 0.1, "attentionBudget": 1, "location": "Home"}
    )
    doc["contextElements"].append({"id": "Evening", "kind": "Timepoint"})
    doc["contextElements"].append({"id": "mat", "kind": "Resource"})
    doc["environment"]["timepoints"] = ["Morning", "Evening"]
    doc["environment"]["placements"] = {"Home": ["mat"]}
    return doc


def test_snapshot_contents():
    w = World(build_scenario(_two_agents_doc()))
    assert snapshot_context(w, "ag1").present == {"Home", "Morning", "mat", "ag2"}
    w.states["ag1"].last_activity = "opt_b"
    assert snapshot_context(w, "ag1").present == {"Home", "Morning", "mat", "ag2", "opt_b"}
    # Timepoints cycle with the tick; other locations drop co-location.
    w.tick = 1
    w.states["ag2"].location = "Away"
    assert snapshot_context(w, "ag1").present == {"Home", "Evening", "mat", "opt_b"}
    assert snapshot_context(w, "ag2").present == {"Away", "Evening"}
    w.tick = 2
    assert "Morning" in snapshot_context(w, "ag1").present


def test_event_rows_per_tick(commuting):
    events, metrics = run(commuting, 5)
    assert len(events) == 10  # 2 agents x 5 ticks
    assert [e.tick for e in events] == [t for t in range(5) for _ in range(2)]
    assert [e.agent for e in events[:2]] == ["alice", "bob"]  # sorted ids
    assert len(metrics) == 5


def test_events_csv_format(commuting):
    events, _ = run(commuting, 3)
    text = events_csv(events)
    lines = text.split("\n")
    assert lines[0] == EVENTS_HEADER
    assert lines[0] == "tick,agent,activity,mode,pressure,score,location,timepoint"
    assert text.endswith("\n") and "\r" not in text
    assert len(lines) == 1 + 6 + 1  # header + rows + trailing newline
    for row in lines[1:-1]:
        cells = row.split(",")
        assert len(cells) == 8
        assert cells[3] in ("Habitual", "Intentional")
        float(cells[4]), float(cells[5])
        assert len(cells[4].split(".")[1]) == 6


def test_empty_timepoint_column(cascade):
    events, _ = run(cascade, 1)
    line = events_csv(events).split("\n")[1]
    assert line.endswith(",Home,")


def test_metrics_csv_format(commuting):
    events, metrics = run(commuting, 4)
    atomic = commuting.index.atomic_ids
    text = metrics_csv(metrics, atomic)
    lines = text.split("\n")
    want_header = (
        "tick,habitual_fraction,"
        + ",".join(f"count_{a}" for a in atomic)
        + ",mean_strength,mean_personal_view,mean_collective_view"
    )
    assert lines[0] == want_header
    assert list(atomic) == sorted(atomic)
    for row in lines[1:-1]:
        cells = row.split(",")
        assert len(cells) == 2 + len(atomic) + 3
        assert sum(int(c) for c in cells[2:-3]) == 2  # one activity per agent


def test_metrics_match_events(commuting):
    events, metrics = run(commuting, 20)
    atomic = commuting.index.atomic_ids
    for row in metrics:
        tick_events = [e for e in events if e.tick == row.tick]
        assert sum(row.counts) == len(tick_events) == 2
        habitual = sum(e.mode is DecisionMode.HABITUAL for e in tick_events)
        assert row.habitual_fraction == habitual / 2
        for a, n in zip(atomic, row.counts):
            assert n == sum(e.activity == a for e in tick_events)
        assert 0.0 <= row.mean_strength <= 1.0
        assert 0.0 <= row.mean_personal_view <= 1.0
        assert 0.0 <= row.mean_collective_view <= 1.0


def test_run_is_deterministic(commuting):
    a_events, a_metrics = run(commuting, 50, seed=3)
    b_events, b_metrics = run(commuting, 50, seed=3)
    atomic = commuting.index.atomic_ids
    assert events_csv(a_events) == events_csv(b_events)
    assert metrics_csv(a_metrics, atomic) == metrics_csv(b_metrics, atomic)


def test_zero_ticks(commuting):
    events, metrics = run(commuting, 0)
    assert events == [] and metrics == []


def test_world_refuses_invalid_scenario():
    doc, _ = mutation_fixtures()["view-range"]
    s = build_scenario(doc, check_refs=False)
    with pytest.raises(InvalidScenarioError) as exc:
        World(s)
    assert exc.value.report
    # Explicit opt-out skips the gate (for tooling that wants to poke around).
    World(s, validate=False)


def test_decisions_read_tick_start_strengths():
    # Strength 0.95 on one of two context elements averages to 0.475,
    # just under the 0.5 threshold. The tick-0 decision must therefore be
    # intentional even though reinforcement pushes the average over the
    # threshold within the same tick; the flip shows up at tick 1.
    doc = make_doc()
    doc["agents"][0]["habitRate"] = 1.0
    doc["habitualConnections"] = [
        {"agent": "ag1", "activity": "opt_a", "contextElement": "Home",
         "strength": 0.95, "personalView": 0.95}
    ]
    events, _ = run(build_scenario(doc), 2)
    assert events[0].mode is DecisionMode.INTENTIONAL
    assert events[0].activity == "opt_a"
    assert events[1].mode is DecisionMode.HABITUAL
    assert events[1].pressure == pytest.approx(2 / 3)  # (1 + 1 + 0) / 3


def test_attention_replenishes_each_tick(commuting):
    events, _ = run(commuting, 3)
    alice = [e for e in events if e.agent == "alice"]
    # Budget 2 covers both steps of every cycle; without the per-tick
    # replenish the second tick would fall back to habitual mode.
    assert all(e.mode is DecisionMode.INTENTIONAL for e in alice)
    assert [e.activity for e in alice] == [
        "drive_car_to_school", "drive_car_to_work", "drive_car_to_school"
    ]


def test_relocation_applies_at_end_of_its_tick(cascade):
    events, _ = run(cascade, 43)
    ana = {e.tick: e for e in events if e.agent == "ana"}
    assert ana[39].location == "Home"
    assert ana[40].location == "Home"  # still home during the scheduled tick
    assert ana[41].location == "Venue"
    assert ana[42].location == "Venue"


def test_observation_count_counts_ordered_pairs(cascade):
    w = World(cascade)
    w.run(50)
    # Three co-located agents give 3*2 ordered pairs per tick; after ana
    # leaves at the end of tick 40, only ben and cas see each other.
    assert w.observation_count == 41 * 6 + 9 * 2


def test_atomic_root_logs_without_spending_attention():
    doc = make_doc()
    doc["activities"] = [{"id": "only", "type": "Atomic"}]
    doc["activityConnections"] = []
    doc["valueConnections"] = []
    doc["roots"] = ["only"]
    w = World(build_scenario(doc))
    events = w.step()
    assert len(events) == 1
    e = events[0]
    assert e.activity == "only"
    assert e.mode is DecisionMode.HABITUAL
    assert e.pressure == 0.0 and e.score == 0.0
    assert w.states["ag1"].resources == 1


def test_module_run_equals_world_run(commuting):
    a = run(commuting, 10, seed=7)
    b = World(commuting, seed=7).run(10)
    assert a == b


def test_collect_metrics_on_empty():
    assert collect_metrics([], [], ["x"]) == []


def test_cascade_breaks_and_reforms_habits(cascade):
    w = World(cascade)
    events, _ = w.run(140)
    by_agent_tick = {(e.agent, e.tick): e for e in events}

    for t in range(6):
        for ag in ("ana", "ben", "cas"):
            e = by_agent_tick[(ag, t)]
            assert e.activity == "eat_meat" and e.mode is DecisionMode.HABITUAL

    # Alone at the venue the meat cue is gone, so ana deliberates to veg,
    # and within a few ticks the venue context hardens veg into a habit.
    assert by_agent_tick[("ana", 41)].mode is DecisionMode.INTENTIONAL
    for t in range(41, 86):
        e = by_agent_tick[("ana", t)]
        assert e.activity == "eat_veg"
        assert e.location == "Venue"
    assert by_agent_tick[("ana", 60)].mode is DecisionMode.HABITUAL

    # Back home her meat connections have decayed below the threshold;
    # she keeps eating veg and re-hardens it into a habit, while the
    # others never left the old practice.
    for t in range(95, 140):
        assert by_agent_tick[("ana", t)].activity == "eat_veg"
        assert by_agent_tick[("ben", t)].activity == "eat_meat"
        assert by_agent_tick[("cas", t)].activity == "eat_meat"
    assert by_agent_tick[("ana", 139)].mode is DecisionMode.HABITUAL
    assert by_agent_tick[("ben", 139)].mode is DecisionMode.HABITUAL

    # The others watched her: their collective view of veg at home formed.
    # Each tick ben sees ana act veg (up by 0.3 of the gap) and cas act
    # meat (down by factor 0.7), so the view settles at the fixed point of
    # c -> 0.7(c + 0.3(1 - c)), which is 0.21/0.51.
    idx = cascade.index
    veg = idx.activity_index("eat_veg")
    home = idx.element_index("Home")
    assert w.states["ben"].habits.get_views(veg, home)[2] == pytest.approx(
        0.21 / 0.51, rel=1e-9
    )
