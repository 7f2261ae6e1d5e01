import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atdelfi.agents import AGENTS, make_agent, run_episode
from atdelfi.analysis import analyze
from atdelfi.graph import build_graph
from atdelfi.simulator import Action, Simulator, Status, SteppedTerminalState, UnsupportedSpriteClass
from atdelfi.traces import EventTrace, TraceStore
from atdelfi.vgdl import parse_game, parse_level

from conftest import FIXTURES, bundled, fixture_game

STILL = """\
BasicGame
    SpriteSet
        avatar > MovingAvatar
        rock > Immovable
        goal > Immovable
    InteractionSet
        goal avatar > killSprite scoreChange=4
        avatar rock > stepBack
    TerminationSet
        Timeout limit=1000 win=True
        SpriteCounter stype=avatar win=False
    LevelMapping
        A > avatar
        r > rock
        g > goal
"""

FAST = {"n": 3, "depth": 4}


def sim_for(source, level_text):
    game = parse_game(source)
    return Simulator(game, parse_level(level_text, game))


def test_nil_is_a_fixed_point():
    sim = sim_for(STILL, "r g\nA r\n")
    s0 = sim.initial_state(3)
    s1, events = sim.step(s0, Action.Nil)
    assert events == []
    assert s1.tick == s0.tick + 1
    assert [sp.as_tuple() for sp in s1.sprites.values()] == [sp.as_tuple() for sp in s0.sprites.values()]
    assert sim.render(s1) == sim.render(s0) == "r.g\nA.r"


def test_step_leaves_input_untouched():
    sim = sim_for(STILL, "Ag\n")
    s0 = sim.initial_state()
    before = sim.render(s0)
    sim.step(s0, Action.Right)
    assert sim.render(s0) == before and s0.tick == 0


def test_kill_rule_fires_and_scores():
    sim = sim_for(STILL, "Ag\n")
    s1, events = sim.step(sim.initial_state(), Action.Right)
    (ev,) = events
    m = sim.graph.mechanic(ev.mechanic)
    assert sim.game.interactions[m.origin.index].subject == "goal"
    assert ev.score_delta == 4 and s1.score == 4
    assert [sp.name for sp in s1.sprites.values()] == ["avatar"]
    assert ev.snapshot == sim.render(s1) == ".A"


def test_step_back_and_grid_edge():
    sim = sim_for(STILL, "Ar\n")
    s1, events = sim.step(sim.initial_state(), Action.Right)
    assert [sim.graph.mechanic(e.mechanic).origin.index for e in events] == [1]
    assert sim.render(s1) == "Ar"
    s2, events = sim.step(s1, Action.Left)  # off the grid: stays put, nothing fires
    assert events == [] and sim.render(s2) == "Ar"


def test_aliens_shot_scores_two(aliens, aliens_levels):
    sim = Simulator(aliens, aliens_levels[0])
    state = sim.initial_state(0)
    avatar = next(s for s in state.sprites.values() if s.name == "avatar")
    sim._create(state, "alienGreen", avatar.r - 1, avatar.c)
    state, events = sim.step(state, Action.Use)
    g = sim.graph
    kinds = [(g.mechanic(e.mechanic).origin.kind, e.score_delta) for e in events]
    assert ("InputRule", 0) in kinds
    assert ("Interaction", 2) in kinds
    assert state.score == 2
    assert not state.live(["alienGreen"])


def test_flak_shot_starts_above_avatar(aliens, aliens_levels):
    sim = Simulator(aliens, aliens_levels[0])
    state, events = sim.step(sim.initial_state(0), Action.Use)
    avatar = state.live(["avatar"])[0]
    (sam,) = state.live(["sam"])
    assert (sam.r, sam.c) == (avatar.r - 1, avatar.c)
    # singleton projectile: a second shot is refused while the first flies
    state, events = sim.step(state, Action.Use)
    assert len(state.live(["sam"])) == 1
    assert all(sim.graph.mechanic(e.mechanic).origin.kind != "InputRule" for e in events)


def test_missile_dies_at_screen_edge(aliens, aliens_levels):
    sim = Simulator(aliens, aliens_levels[0])
    state = sim.initial_state(0)
    state, _ = sim.step(state, Action.Use)
    for _ in range(10):
        state, events = sim.step(state, Action.Nil)
        if not state.live(["sam"]):
            break
    assert not state.live(["sam"])


def test_step_after_end_raises():
    sim = sim_for(STILL.replace("limit=1000", "limit=1"), "A\n")
    s1, events = sim.step(sim.initial_state(), Action.Nil)
    assert s1.status is Status.Won
    assert sim.graph.mechanic(events[-1].mechanic).origin.kind == "Termination"
    with pytest.raises(SteppedTerminalState):
        sim.step(s1, Action.Nil)


def test_opaque_class_rejected_at_simulation():
    src = STILL.replace("rock > Immovable", "rock > Teleporter")
    game = parse_game(src)
    build_graph(game)  # analysis is fine
    with pytest.raises(UnsupportedSpriteClass):
        run_episode(game, parse_level("Ar\n", game), "DoNothing")


def test_bad_max_ticks():
    game = parse_game(STILL)
    with pytest.raises(ValueError):
        run_episode(game, parse_level("A\n", game), max_ticks=0)
    with pytest.raises(ValueError):
        make_agent("Random", None)


def test_do_nothing_survives_hazard_free_game():
    game = fixture_game("hazard_free")
    level = parse_level((FIXTURES / "hazard_free_lvl0.lvl").read_text(), game)
    trace = run_episode(game, level, "DoNothing", seed=1, max_ticks=100)
    assert trace.outcome == "Won" and trace.last_tick == 30


def test_do_nothing_loses_aliens(aliens, aliens_levels):
    g = build_graph(aliens)
    a = analyze(g)
    lose_ids = {p for path in a.lose_paths for m in path.mechanics for p in a.merged.primitives(m)}
    for level in aliens_levels:
        trace = run_episode(aliens, level, "DoNothing", seed=5, graph=g)
        assert trace.outcome == "Lost"
        assert lose_ids & {e.mechanic for e in trace.events}


def test_timeout_outcome():
    game = parse_game(STILL)
    trace = run_episode(game, parse_level("Ar\n", game), "DoNothing", max_ticks=7)
    assert (trace.outcome, trace.last_tick) == ("TimedOut", 7)


@pytest.mark.parametrize("agent", AGENTS)
def test_traces_are_byte_identical(agent, aliens, aliens_levels):
    runs = [run_episode(aliens, aliens_levels[1], agent, seed=7, max_ticks=150, **(FAST if agent == "BudgetedRollout" else {}))
            for _ in range(2)]
    assert runs[0].dumps() == runs[1].dumps()


def test_trace_store_round_trip(tmp_path, aliens, aliens_levels):
    trace = run_episode(aliens, aliens_levels[0], "DoNothing", seed=2)
    store = TraceStore([trace])
    (path,) = store.save(tmp_path)
    assert path.relative_to(tmp_path).as_posix() == "aliens/aliens_lvl0-DoNothing-2.json"
    loaded = TraceStore.load(tmp_path)
    assert loaded.traces[0].dumps() == trace.dumps()
    assert json.loads(path.read_text())["schema"] == "atdelfi.trace/1"
    with pytest.raises(ValueError):
        EventTrace.from_dict({"schema": "other"})


def check_trace(game, level, trace):
    graph = build_graph(game)
    assert trace.final_score == sum(e.score_delta for e in trace.events)
    assert [e.tick for e in trace.events] == sorted(e.tick for e in trace.events)
    assert all(e.mechanic in graph.mechanics for e in trace.events)
    for e in trace.events:
        rows = e.snapshot.split("\n")
        assert len(rows) == level.height and all(len(r) == level.width for r in rows)
    terminal = [e for e in trace.events if graph.mechanic(e.mechanic).origin.kind == "Termination"]
    if trace.outcome == "TimedOut":
        assert not terminal
    else:
        (last,) = terminal
        assert last is trace.events[-1] and last.tick == trace.last_tick
        assert graph.action_kind(graph.mechanic(last.mechanic)) == ("Win" if trace.outcome == "Won" else "Lose")
    # the frames a clip can ask for are all present
    firsts = {}
    for e in trace.events:
        firsts.setdefault(e.mechanic, e.tick)
    for t in firsts.values():
        for u in range(max(0, t - 2), min(trace.last_tick, t + 2) + 1):
            assert u in trace.frames


@settings(max_examples=25, deadline=None)
@given(
    name=st.sampled_from(["aliens", "butterflies", "dungeon", "survive"]),
    agent=st.sampled_from(AGENTS),
    seed=st.integers(0, 2 ** 32),
    level=st.integers(0, 1),
)
def test_trace_invariants(name, agent, seed, level):
    game, levels = bundled(name)
    lvl = levels[level % len(levels)]
    trace = run_episode(game, lvl, agent, seed, max_ticks=200, **(FAST if agent == "BudgetedRollout" else {}))
    check_trace(game, lvl, trace)


def replay_explains_every_change(game, level, agent, seed, ticks=300):
    """Step an episode by hand and check each appearance/disappearance against that tick's events."""
    sim = Simulator(game, level)
    player = make_agent(agent, sim, seed, **(FAST if agent == "BudgetedRollout" else {}))
    state = sim.initial_state(seed)
    g = sim.graph
    while state.status is Status.Running and state.tick < ticks:
        nxt, events = sim.step(state, player.act(state))
        involved = {i for e in events for i in e.sprites_involved}
        removed = set(state.sprites) - set(nxt.sprites)
        added = set(nxt.sprites) - set(state.sprites)
        assert removed <= involved, (state.tick, removed)
        assert added <= involved, (state.tick, added)
        assert nxt.score - state.score == sum(e.score_delta for e in events)
        for e in events:
            m = g.mechanic(e.mechanic)
            if m.origin.kind == "Interaction":
                subj = e.sprites_involved[0]
                assert state.sprites.get(subj, nxt.sprites.get(subj)).name in game.leaves(
                    game.interactions[m.origin.index].subject)
        state = nxt


@pytest.mark.parametrize("name", ["aliens", "butterflies", "dungeon", "survive"])
@pytest.mark.parametrize("agent", ["DoNothing", "OneStepLookahead", "BudgetedRollout"])
def test_no_silent_rule_firing(name, agent):
    game, levels = bundled(name)
    replay_explains_every_change(game, levels[0], agent, seed=11, ticks=120)


def first_ticks(analysis, path, trace):
    return [min((e.tick for e in trace.events if e.mechanic in set(analysis.merged.primitives(m))), default=None)
            for m in path]


@pytest.mark.parametrize("name", ["aliens", "butterflies", "dungeon", "survive"])
def test_won_traces_follow_win_path_order(name):
    game, levels = bundled(name)
    a = analyze(build_graph(game))
    won = 0
    for seed in range(3):
        for level in levels:
            trace = run_episode(game, level, "BudgetedRollout", seed, max_ticks=400, **FAST)
            if trace.outcome != "Won":
                continue
            won += 1
            for path in a.win_paths:
                ticks = first_ticks(a, path.mechanics, trace)
                if None in ticks:
                    continue  # a different winning terminal fired
                assert ticks == sorted(ticks)
    assert won > 0
