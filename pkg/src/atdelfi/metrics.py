"""
Corpus statistics: per-game size metrics and, for each winning-path
mechanic, the mean tick of its first occurrence over winning playthroughs.
"""
from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import dataclass, field
from typing import Optional

from .analysis import AnalysisResult, analyze
from .graph import StatsRecord, build_graph, graph_stats
from .traces import WON, TraceStore

SCHEMA = "atdelfi.report/1"
UNAVAILABLE = "unavailable"

STAT_COLUMNS = ("sprite_count", "hierarchy_depth", "interaction_count", "win_length",
                "lose_length", "merged_interactions", "point_rules")


class NoWinningTraces(UserWarning):
    pass


@dataclass
class GameReport:
    game: str
    stats: StatsRecord
    win_path: tuple  # mechanic ids along the reported winning path
    won_traces: int
    first_occurrence: Optional[list] = field(default=None)  # mean tick per win_path mechanic

    @property
    def available(self) -> bool:
        return self.first_occurrence is not None

    def to_dict(self) -> dict:
        return {
            "game": self.game,
            **self.stats.to_dict(),
            "win_path": list(self.win_path),
            "won_traces": self.won_traces,
            "first_occurrence": self.first_occurrence if self.available else UNAVAILABLE,
        }


def first_occurrence_ticks(analysis: AnalysisResult, path: tuple, trace) -> list:
    """First tick of each path mechanic in ``trace`` (None where it never fired)."""
    graph = analysis.merged
    out = []
    for mid in path:
        ev = trace.first_occurrence(graph.primitives(mid))
        out.append(ev.tick if ev is not None else None)
    return out


def _reported_path(analysis: AnalysisResult) -> tuple:
    paths = [p for p in analysis.win_paths if p.complete]
    if not paths:
        return ()
    return min(paths, key=lambda p: (-len(p.mechanics), p.mechanics)).mechanics


def game_report(analysis: AnalysisResult, traces) -> GameReport:
    game = analysis.merged.game
    stats = graph_stats(game, None, analysis)
    path = _reported_path(analysis)
    won = [t for t in traces if t.game == game.name and t.outcome == WON]
    report = GameReport(game.name, stats, path, len(won))
    if not won:
        warnings.warn(f"no winning playthroughs of {game.name!r}", NoWinningTraces)
        return report
    columns = list(zip(*(first_occurrence_ticks(analysis, path, t) for t in won))) if path else []
    means = []
    for ticks in columns:
        seen = [t for t in ticks if t is not None]
        means.append(round(sum(seen) / len(seen), 2) if seen else None)
    report.first_occurrence = means
    return report


def corpus_report(games: list, traces: TraceStore, path_strategy: str = "longest-shortest") -> list:
    """One ``GameReport`` per game, in the order given."""
    return [game_report(analyze(build_graph(g), path_strategy), traces) for g in games]


def report_csv(reports: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("game",) + STAT_COLUMNS + ("won_traces", "first_occurrence"))
    for r in reports:
        if r.available:
            fo = ";".join(f"m{m}={'' if v is None else f'{v:.2f}'}" for m, v in zip(r.win_path, r.first_occurrence))
        else:
            fo = UNAVAILABLE
        stats = r.stats.to_dict()
        w.writerow((r.game,) + tuple(stats[c] for c in STAT_COLUMNS) + (r.won_traces, fo))
    return buf.getvalue()


def report_json(reports: list) -> str:
    return json.dumps({"schema": SCHEMA, "games": [r.to_dict() for r in reports]}, indent=2, sort_keys=True)
