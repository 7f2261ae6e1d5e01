# Size metrics and first-occurrence ticks across the bundled corpus.
from atdelfi import bundled_games, corpus_report, load_game, load_levels
from atdelfi.metrics import report_csv
from atdelfi.pipeline import discover_levels, games_dir, play
from atdelfi.traces import TraceStore

games = [load_game(n) for n in bundled_games()]
store = TraceStore()
for g in games:
    levels = load_levels(g, discover_levels(games_dir() / f"{g.name}.vgdl"))
    for t in play(g, levels, ("BudgetedRollout",), seeds=range(1, 4), max_ticks=400, n=3, depth=4):
        store.add(t)

print(report_csv(corpus_report(games, store)))
