# Play a level with each agent and read the event trace.
from atdelfi import AGENTS, load_game, load_levels, run_episode
from atdelfi.pipeline import discover_levels, games_dir

game = load_game("butterflies")
levels = load_levels(game, discover_levels(games_dir() / "butterflies.vgdl"))

for agent in AGENTS:
    t = run_episode(game, levels[0], agent, seed=1, max_ticks=400)
    print(f"{agent:17} {t.outcome:8} score={t.final_score} ticks={t.last_tick} events={len(t.events)}")

t = run_episode(game, levels[0], "OneStepLookahead", seed=1)
for e in t.events[:5]:
    print(e.tick, e.mechanic, e.score_delta)
print(t.frames[t.events[0].tick])

# same inputs, same bytes
assert t.dumps() == run_episode(game, levels[0], "OneStepLookahead", seed=1).dumps()
