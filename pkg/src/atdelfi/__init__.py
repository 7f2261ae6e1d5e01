"""Tutorial generation for grid arcade games described in VGDL."""
from .agents import AGENTS, run_episode
from .analysis import AnalysisResult, analyze
from .card import CardDocument, assemble_card
from .demos import DemoClip, extract_demos
from .graph import MechanicGraph, build_graph, graph_stats
from .instructions import InstructionDoc, render_doc
from .metrics import corpus_report
from .pipeline import build_tutorial, bundled_games, load_game, load_levels
from .simulator import Action, Simulator
from .traces import EventTrace, TraceStore
from .vgdl import GameDescription, LevelGrid, parse_game, parse_level

__all__ = [
    "AGENTS", "Action", "AnalysisResult", "CardDocument", "DemoClip", "EventTrace", "GameDescription",
    "InstructionDoc", "LevelGrid", "MechanicGraph", "Simulator", "TraceStore", "analyze", "assemble_card",
    "build_graph", "build_tutorial", "bundled_games", "corpus_report", "extract_demos", "graph_stats",
    "load_game", "load_levels", "parse_game", "parse_level", "render_doc", "run_episode",
]
