"""
Demonstration clips: five frames around the first time a mechanic fired.

Traces record ids from the unmerged graph, so a merged mechanic is looked up
member by member and yields one clip per member.  A winning playthrough is
preferred; failing that any playthrough will do; failing that the clip is
marked missing and carries no frames.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .analysis import AnalysisResult
from .traces import WON, TraceStore

RADIUS = 2
FORM_FEED = "\f"


class EmptyTraceStore(UserWarning):
    pass


@dataclass(frozen=True)
class DemoClip:
    mechanic: int  # id in the analysed (merged) graph
    member: int  # the mechanic actually demonstrated; equals ``mechanic`` unless merged
    frames: tuple = ()
    source: Optional[tuple] = None  # (agent, level, seed, tick)
    missing: bool = True

    @property
    def tick(self) -> Optional[int]:
        return self.source[3] if self.source else None

    @property
    def clip_id(self) -> str:
        return f"m{self.mechanic}" if self.member == self.mechanic else f"m{self.mechanic}.{self.member}"

    def to_dict(self) -> dict:
        return {
            "mechanic": self.mechanic,
            "member": self.member,
            "missing": self.missing,
            "source": list(self.source) if self.source else None,
            "frames": [f.split("\n") for f in self.frames],
        }

    def animation(self) -> str:
        """Frames as a plain-text animation, one snapshot per page."""
        return FORM_FEED.join(f + "\n" for f in self.frames)


def referenced_mechanics(analysis: AnalysisResult) -> list:
    """Mechanics the tutorial text mentions, in first-mention order."""
    out: list = []
    for path in analysis.win_paths + analysis.lose_paths:
        out.extend(m for m in path.mechanics if m not in out)
    out.extend(m for m in analysis.point_mechanics if m not in out)
    return out


def _members(analysis: AnalysisResult, mid: int) -> list:
    m = analysis.merged.mechanic(mid)
    return list(m.merged_from) if m.merged_from else [mid]


def _first_tick(trace, primitives: set) -> Optional[int]:
    ev = trace.first_occurrence(primitives)
    return ev.tick if ev is not None else None


def clip_for(member: int, primitives: set, traces, mechanic: Optional[int] = None) -> DemoClip:
    """Earliest occurrence in the first Won trace containing it, else in the first trace at all."""
    mechanic = member if mechanic is None else mechanic
    ordered = sorted(traces, key=lambda t: t.key)
    for pool in ([t for t in ordered if t.outcome == WON], ordered):
        for trace in pool:
            tick = _first_tick(trace, primitives)
            if tick is not None:
                return DemoClip(mechanic, member, tuple(trace.window(tick, RADIUS)),
                                (trace.agent, trace.level, trace.seed, tick), False)
    return DemoClip(mechanic, member)


def extract_demos(analysis: AnalysisResult, traces: TraceStore, game: Optional[str] = None) -> list:
    """One clip per referenced mechanic, or per merged member for merged ones.

    ``traces`` may hold several games; ``game`` (default: the analysed game's
    name) picks the relevant ones.
    """
    import warnings

    game = game or analysis.merged.game.name
    pool = [t for t in traces if t.game == game]
    if not pool:
        warnings.warn(f"no traces for game {game!r}; every clip will be missing", EmptyTraceStore)
    graph = analysis.merged
    clips = []
    for mid in referenced_mechanics(analysis):
        for member in _members(analysis, mid):
            clips.append(clip_for(member, set(graph.primitives(member)), pool, mid))
    return clips


def export_clips(clips: list, outdir) -> list:
    """Write each present clip as ``<clip id>.txt``, frames separated by form feeds."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for clip in clips:
        if clip.missing:
            continue
        path = outdir / f"{clip.clip_id}.txt"
        path.write_text(clip.animation(), encoding="utf-8")
        paths.append(path)
    return paths
