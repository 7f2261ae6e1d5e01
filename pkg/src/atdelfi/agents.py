"""
Baseline agents and the episode runner.

``DoNothing`` never presses a key.  ``OneStepLookahead`` tries every action
for one tick and prefers a win, then score gained, then staying alive.
``BudgetedRollout`` plays ``n`` random continuations of depth ``depth`` after
each action and keeps the best mean return.  Ties always go to the earliest
action in ``Action`` order, so every agent is deterministic given the seed.
"""
from __future__ import annotations

import random
from collections import deque
from typing import Optional

from .graph import MechanicGraph
from .simulator import Action, GameState, Simulator, Status, TraceEvent
from .traces import LOST, TIMED_OUT, WON, EventTrace
from .vgdl import GameDescription, LevelGrid

AGENTS = ("DoNothing", "OneStepLookahead", "BudgetedRollout")
ACTIONS = tuple(Action)
DEFAULT_MAX_TICKS = 2000

WIN_VALUE = 1e9
SCORE_WEIGHT = 1e3
ALIVE_VALUE = 1.0


class DoNothing:
    name = "DoNothing"

    def __init__(self, sim: Simulator, seed: int = 0):
        pass

    def act(self, state: GameState) -> Action:
        return Action.Nil


def _value(before: GameState, after: GameState) -> float:
    if after.status is Status.Won:
        return WIN_VALUE
    if after.status is Status.Lost:
        return -WIN_VALUE
    return (after.score - before.score) * SCORE_WEIGHT + ALIVE_VALUE


class OneStepLookahead:
    name = "OneStepLookahead"

    def __init__(self, sim: Simulator, seed: int = 0):
        self.sim = sim

    def act(self, state: GameState) -> Action:
        best, best_value = Action.Nil, None
        for action in ACTIONS:
            nxt = state.clone()
            self.sim.advance(nxt, action)
            v = _value(state, nxt)
            if best_value is None or v > best_value:
                best, best_value = action, v
        return best


class BudgetedRollout:
    """Flat Monte Carlo search with ``n`` rollouts of ``depth`` ticks per action."""

    name = "BudgetedRollout"

    def __init__(self, sim: Simulator, seed: int = 0, n: int = 20, depth: int = 10):
        self.sim = sim
        self.n, self.depth = n, depth
        # separate stream so searching never perturbs the game's own RNG
        self.rng = random.Random(f"rollout-{seed}")

    def _rollout(self, state: GameState, first: Action) -> float:
        s = state.clone()
        sim = self.sim
        sim.advance(s, first)
        ticks = 1
        while s.status is Status.Running and ticks < self.depth:
            sim.advance(s, self.rng.choice(ACTIONS))
            ticks += 1
        if s.status is Status.Won:
            return WIN_VALUE
        if s.status is Status.Lost:
            return -WIN_VALUE
        return (s.score - state.score) * SCORE_WEIGHT + ALIVE_VALUE

    def act(self, state: GameState) -> Action:
        best, best_value = Action.Nil, None
        for action in ACTIONS:
            v = sum(self._rollout(state, action) for _ in range(self.n)) / self.n
            if best_value is None or v > best_value:
                best, best_value = action, v
        return best


def make_agent(name: str, sim: Simulator, seed: int = 0, **options):
    """Instantiate an agent by name; ``options`` go to ``BudgetedRollout`` (``n``, ``depth``)."""
    if name == "DoNothing":
        return DoNothing(sim, seed)
    if name == "OneStepLookahead":
        return OneStepLookahead(sim, seed)
    if name == "BudgetedRollout":
        return BudgetedRollout(sim, seed, **options)
    raise ValueError(f"unknown agent {name!r}; expected one of {', '.join(AGENTS)}")


def run_episode(
    game: GameDescription,
    level: LevelGrid,
    agent: str = "DoNothing",
    seed: int = 0,
    max_ticks: int = DEFAULT_MAX_TICKS,
    graph: Optional[MechanicGraph] = None,
    **agent_options,
) -> EventTrace:
    """Play one episode and record it.

    Frames are kept for every tick with an event and for the two ticks on
    either side of each mechanic's first occurrence, which is all a
    demonstration clip can ask for.
    """
    if max_ticks <= 0:
        raise ValueError("max_ticks must be positive")
    sim = Simulator(game, level, graph)
    player = make_agent(agent, sim, seed, **agent_options)
    state = sim.initial_state(seed)

    frames = {0: sim.render(state)}
    recent = deque([(0, frames[0])], maxlen=3)  # ticks t-2..t
    seen: set = set()
    keep_until = -1
    events: list = []

    while state.status is Status.Running and state.tick < max_ticks:
        action = player.act(state)
        raw = sim.advance(state, action)
        snap = sim.render(state)
        recent.append((state.tick, snap))
        if raw:
            frames[state.tick] = snap
            fresh = {m for _, m, _, _ in raw} - seen
            if fresh:
                seen |= fresh
                frames.update(recent)
                keep_until = state.tick + 2
        elif state.tick <= keep_until:
            frames[state.tick] = snap
        events.extend(TraceEvent(t, m, ids, d, snap) for t, m, ids, d in raw)

    frames[state.tick] = sim.render(state)
    outcome = {Status.Won: WON, Status.Lost: LOST}.get(state.status, TIMED_OUT)
    return EventTrace(game.name, level.name, agent, seed, events, outcome, state.score, state.tick, frames)
