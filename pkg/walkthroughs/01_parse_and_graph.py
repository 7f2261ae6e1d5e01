# Parse a bundled game and look at the mechanic graph built from it.
from atdelfi import build_graph, graph_stats, load_game

game = load_game("aliens")
print(game.name, "avatars:", game.avatars)
for name, sd in game.sprites.items():
    print("  " * sd.depth + f"{name} ({sd.cls})")

graph = build_graph(game)
print(len(graph.nodes), "nodes,", len(graph.mechanics), "mechanics")

# each mechanic is (participants, condition, action)
for m in graph.mechanics.values():
    print(m.id, m.participants, graph.condition_kind(m), "->", graph.action_kind(m), m.score_delta or "")
