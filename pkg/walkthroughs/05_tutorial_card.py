# Full pipeline: analysis, playthroughs, demonstration clips and the card.
from atdelfi import build_tutorial, load_game, load_levels
from atdelfi.pipeline import discover_levels, games_dir

game = load_game("dungeon")
levels = load_levels(game, discover_levels(games_dir() / "dungeon.vgdl"))
tut = build_tutorial(game, levels, seeds=(1, 2), n=5, depth=6)

won = [t.key for t in tut.traces if t.outcome == "Won"]
print("won:", won)
for clip in tut.clips:
    print(clip.clip_id, "missing" if clip.missing else clip.source)
print(tut.card.to_markdown())

# with only the idle agent nothing is won, so the winning lines have no clip
idle = build_tutorial(load_game("aliens"), load_levels(load_game("aliens"),
                      discover_levels(games_dir() / "aliens.vgdl")), agents=("DoNothing",))
print(idle.card.to_markdown().split("## Losing")[0])
