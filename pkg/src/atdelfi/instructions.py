"""
Text replacement from mechanics to tutorial sentences.

The sentence for a mechanic is picked by its (condition kind, action kind)
pair; sprite names are shown the way the game file spells them, annotated
with the parent group (``sam (missile)``) or, for a root avatar, its class
(``avatar (FlakAvatar)``).  Counter terminations over a parent group are
spelled out over the group's leaf sprites.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

from .analysis import AnalysisResult
from .graph import Mechanic, MechanicGraph


class UnrenderableMechanic(UserWarning):
    pass


SECTION_TITLES = ("Controls", "Winning", "Losing", "Points")

COLLISION_TEMPLATES = {
    "KillSprite": "If {a} and {b} collide, then the {target} sprite will be destroyed.",
    "TransformTo": "If {a} and {b} collide, then the {target} sprite will turn into {produces}.",
    "Spawn": "If {a} and {b} collide, then a new {produces} sprite will appear.",
    "StepBack": "If {a} and {b} collide, then the {target} sprite will be pushed back.",
}
FALLBACK_TEMPLATE = "If {a} and {b} collide, then {effect} occurs."


@dataclass(frozen=True)
class InstructionLine:
    text: str
    mechanic: Optional[int] = None  # None for control lines


@dataclass
class InstructionDoc:
    controls: list = field(default_factory=list)
    winning: list = field(default_factory=list)
    losing: list = field(default_factory=list)
    points: list = field(default_factory=list)

    def sections(self) -> list:
        return list(zip(SECTION_TITLES, (self.controls, self.winning, self.losing, self.points)))

    def to_text(self) -> str:
        out = []
        for title, lines in self.sections():
            out.append(f"{title}:")
            out.extend(f"  {line.text}" for line in lines)
            if title == "Points" and not lines:
                out.append("  This game has no scoring rules.")
        return "\n".join(out) + "\n"

    def to_dict(self) -> dict:
        return {
            title.lower(): [{"text": line.text, "mechanic": line.mechanic} for line in lines]
            for title, lines in self.sections()
        }


def _plural(n: int, word: str) -> str:
    return f"{n} {word}" if n == 1 else f"{n} {word}s"


def _counter_sentence(graph: MechanicGraph, m: Mechanic, outcome: str) -> str:
    game = graph.game
    leaves = [leaf for s in m.participants for leaf in game.leaves(s)]
    names = " or ".join(f"{game.display_name(s)} sprites" for s in leaves)
    limit = graph.condition(m)["limit"]
    if limit == 0:
        return f"If there are no more {names} then you will {outcome}."
    return f"If there are {limit} or fewer {names} then you will {outcome}."


def render_mechanic(m: Mechanic, graph: MechanicGraph, points: bool = False) -> str:
    """One English sentence for ``m``.

    With ``points`` the sentence describes the score change instead of the
    effect; point rules appear in their own tutorial section.
    """
    game = graph.game
    name = game.display_name
    cond = graph.condition_kind(m)
    action = graph.action(m)
    kind = action["action"]

    if points and m.score_delta:
        a, b = (name(p) for p in m.participants[:2])
        verb = "gain" if m.score_delta > 0 else "lose"
        return f"If the {a} and the {b} collide, then you will {verb} {_plural(abs(m.score_delta), 'point')}."

    if kind in ("Win", "Lose"):
        outcome = kind.lower()
        if cond == "Timeout":
            return f"If time runs out after {graph.condition(m)['limit']} ticks, then you will {outcome}."
        return _counter_sentence(graph, m, outcome)

    if cond == "PlayerInput":
        return f"If you press space, then {name(action['target'])} will shoot a {name(action['produces'])}."
    if cond == "Periodic":
        return f"Every so often, {name(action['target'])} will release a {name(action['produces'])}."

    a, b = (name(p) for p in m.participants[:2])
    fields = {
        "a": a,
        "b": b,
        "target": name(action["target"]) if action["target"] else "",
        "produces": name(action["produces"]) if action["produces"] else "",
        "effect": action["effect"],
    }
    template = COLLISION_TEMPLATES.get(kind)
    if template is None:
        warnings.warn(f"no sentence template for effect {action['effect']!r}", UnrenderableMechanic)
        template = FALLBACK_TEMPLATE
    return template.format(**fields)


def render_doc(analysis: AnalysisResult, graph: Optional[MechanicGraph] = None) -> InstructionDoc:
    """Lay out the four tutorial sections from an analysis.

    ``graph`` defaults to the analysis' merged graph, which is the one the
    path and point mechanic ids refer to.
    """
    graph = graph or analysis.merged
    doc = InstructionDoc()

    for scheme in analysis.controls:
        for text in (f"As the avatar, {scheme.movement_text}", scheme.action_text):
            if text and all(line.text != text for line in doc.controls):
                doc.controls.append(InstructionLine(text))

    def add(section: list, mid: int, points: bool = False) -> None:
        if any(line.mechanic == mid for line in section):
            return
        section.append(InstructionLine(render_mechanic(graph.mechanic(mid), graph, points=points), mid))

    for path in analysis.win_paths:
        for mid in path.mechanics:
            add(doc.winning, mid)
    for path in analysis.lose_paths:
        for mid in path.mechanics:
            add(doc.losing, mid)
    for mid in analysis.point_mechanics:
        add(doc.points, mid, points=True)
    return doc
