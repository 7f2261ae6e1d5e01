"""
Playthrough traces and their on-disk store.

A trace keeps every fired mechanic with its tick, plus the rendered grid
frames needed to cut demonstration clips: each event tick and the two ticks
either side of every mechanic's first occurrence.  Traces are JSON documents
stored as ``traces/<game>/<level>-<agent>-<seed>.json``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .simulator import TraceEvent

SCHEMA = "atdelfi.trace/1"

WON, LOST, TIMED_OUT = "Won", "Lost", "TimedOut"


@dataclass
class EventTrace:
    game: str
    level: str
    agent: str
    seed: int
    events: list
    outcome: str
    final_score: int
    last_tick: int
    frames: dict = field(default_factory=dict, repr=False)

    @property
    def key(self) -> tuple:
        return (self.agent, self.level, self.seed)

    def first_occurrence(self, mechanic_ids: Iterable[int]) -> Optional[TraceEvent]:
        wanted = set(mechanic_ids)
        return next((e for e in self.events if e.mechanic in wanted), None)

    def window(self, tick: int, radius: int = 2) -> list:
        """Frames ``tick - radius .. tick + radius``, repeating the edge frame past either end."""
        out = []
        for t in range(tick - radius, tick + radius + 1):
            t = min(max(t, 0), self.last_tick)
            while t not in self.frames and t > 0:
                t -= 1
            out.append(self.frames[t])
        return out

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "game": self.game,
            "level": self.level,
            "agent": self.agent,
            "seed": self.seed,
            "outcome": self.outcome,
            "final_score": self.final_score,
            "last_tick": self.last_tick,
            "events": [
                {"tick": e.tick, "mechanic": e.mechanic, "sprites": list(e.sprites_involved), "score_delta": e.score_delta}
                for e in self.events
            ],
            "frames": {str(t): self.frames[t].split("\n") for t in sorted(self.frames)},
        }

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "EventTrace":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported trace schema {data.get('schema')!r}")
        frames = {int(t): "\n".join(rows) for t, rows in data["frames"].items()}
        events = [
            TraceEvent(e["tick"], e["mechanic"], tuple(e["sprites"]), e["score_delta"], frames.get(e["tick"], ""))
            for e in data["events"]
        ]
        return cls(data["game"], data["level"], data["agent"], data["seed"], events,
                   data["outcome"], data["final_score"], data["last_tick"], frames)


class TraceStore:
    """An ordered collection of traces, keyed by (game, agent, level, seed)."""

    def __init__(self, traces: Iterable[EventTrace] = ()):
        self.traces: list = []
        for t in traces:
            self.add(t)

    def add(self, trace: EventTrace) -> None:
        self.traces.append(trace)
        self.traces.sort(key=lambda t: (t.game, t.key))

    def __iter__(self):
        return iter(self.traces)

    def __len__(self) -> int:
        return len(self.traces)

    def for_game(self, game: str) -> list:
        return [t for t in self.traces if t.game == game]

    def won(self, game: Optional[str] = None) -> list:
        return [t for t in self.traces if t.outcome == WON and (game is None or t.game == game)]

    def save(self, root) -> list:
        root = Path(root)
        paths = []
        for t in self.traces:
            path = root / t.game / f"{t.level}-{t.agent}-{t.seed}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(t.dumps() + "\n", encoding="utf-8")
            paths.append(path)
        return paths

    @classmethod
    def load(cls, root) -> "TraceStore":
        root = Path(root)
        return cls(EventTrace.from_dict(json.loads(p.read_text(encoding="utf-8")))
                   for p in sorted(root.glob("*/*.json")))
