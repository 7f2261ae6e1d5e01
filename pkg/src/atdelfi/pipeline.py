"""
End-to-end helpers: locate games and levels, play them, and build tutorials.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .agents import AGENTS, DEFAULT_MAX_TICKS, run_episode
from .analysis import AnalysisResult, analyze
from .card import CardDocument, assemble_card
from .demos import extract_demos
from .graph import MechanicGraph, StatsRecord, build_graph, graph_stats
from .instructions import InstructionDoc, render_doc
from .traces import TraceStore
from .vgdl import GameDescription, LevelGrid, parse_game, parse_level

GAME_SUFFIX = ".vgdl"
LEVEL_SUFFIX = ".lvl"


def games_dir() -> Path:
    return Path(str(resources.files("atdelfi") / "games"))


def bundled_games() -> list:
    return sorted(p.stem for p in games_dir().glob(f"*{GAME_SUFFIX}"))


def resolve_game(ref) -> Path:
    """A path to a game file, or the name of a bundled game (``aliens`` or ``aliens.vgdl``)."""
    path = Path(ref)
    if path.exists():
        return path
    bundled = games_dir() / (path.stem + GAME_SUFFIX)
    if bundled.exists():
        return bundled
    raise FileNotFoundError(f"no game file {str(ref)!r} and no bundled game called {path.stem!r}")


def discover_levels(game_path: Path) -> list:
    """Levels stored next to a game as ``<stem>_lvl<N>.lvl``."""
    game_path = Path(game_path)
    return sorted(game_path.parent.glob(f"{game_path.stem}_lvl*{LEVEL_SUFFIX}"))


def load_game(ref) -> GameDescription:
    path = resolve_game(ref)
    return parse_game(path.read_text(encoding="utf-8"), name=path.stem)


def load_levels(game: GameDescription, paths) -> list:
    return [parse_level(Path(p).read_text(encoding="utf-8"), game, name=Path(p).stem) for p in paths]


def play(
    game: GameDescription,
    levels: list,
    agents=AGENTS,
    seeds=(0,),
    max_ticks: int = DEFAULT_MAX_TICKS,
    graph: Optional[MechanicGraph] = None,
    **agent_options,
) -> TraceStore:
    """Every agent on every level for every seed.  Episodes share nothing, so order does not matter."""
    graph = graph or build_graph(game)
    store = TraceStore()
    for agent in agents:
        opts = agent_options if agent == "BudgetedRollout" else {}
        for level in levels:
            for seed in seeds:
                store.add(run_episode(game, level, agent, seed, max_ticks, graph, **opts))
    return store


@dataclass
class Tutorial:
    game: GameDescription
    graph: MechanicGraph
    analysis: AnalysisResult
    doc: InstructionDoc
    stats: StatsRecord
    traces: TraceStore = field(default_factory=TraceStore)
    clips: list = field(default_factory=list)
    card: Optional[CardDocument] = None


def build_tutorial(
    game: GameDescription,
    levels: list = (),
    agents=AGENTS,
    seeds=(0,),
    path_strategy: str = "longest-shortest",
    simulate: bool = True,
    max_ticks: int = DEFAULT_MAX_TICKS,
    traces: Optional[TraceStore] = None,
    **agent_options,
) -> Tutorial:
    """Analyse a game and, when ``simulate`` is set, play it and cut demonstration clips."""
    graph = build_graph(game)
    analysis = analyze(graph, path_strategy)
    doc = render_doc(analysis)
    tut = Tutorial(game, graph, analysis, doc, graph_stats(game, graph, analysis))
    if not simulate:
        return tut
    if traces is None:
        traces = play(game, list(levels), agents, seeds, max_ticks, graph, **agent_options)
    tut.traces = traces
    tut.clips = extract_demos(analysis, traces, game.name)
    tut.card = assemble_card(doc, tut.clips, title=f"How to play {game.name}")
    return tut
