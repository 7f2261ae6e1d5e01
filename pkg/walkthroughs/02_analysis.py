# Controls, critical paths, merged rules and point rules for every bundled game.
from atdelfi import analyze, build_graph, bundled_games, load_game

for name in bundled_games():
    a = analyze(build_graph(load_game(name)))
    g = a.merged
    print(f"== {name}")
    print("controls:", [c.avatar for c in a.controls])
    for p in a.win_paths:
        print("win: ", p.mechanics, "complete" if p.complete else "unreachable")
    for p in a.lose_paths:
        print("lose:", p.mechanics)
    merged = [m for m in g.mechanics.values() if m.merged_from]
    for m in merged:
        print("merged", m.merged_from, "->", m.id, m.participants)
    print("points:", a.point_mechanics)
