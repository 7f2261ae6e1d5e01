"""
Controls, point rules, critical paths and rule merging over a mechanic graph.

Win paths use the longest-shortest heuristic: for every winning terminal,
take each avatar's shortest mechanic chain to it, then keep the longest of
those.  Mechanic ``A`` precedes ``B`` when something ``A`` produces, removes
or moves is (or descends from) a sprite ``B`` reacts to; a merged mechanic
links wherever its originals did.  Among equally short
chains the lexicographically smallest id sequence wins.

Lose paths are assembled backwards: a sprite-count terminal collects every
mechanic that can change the population of a counted sprite.
"""
from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import Mechanic, MechanicGraph, add_merged

SCHEMA = "atdelfi.analysis/1"

# Movement wording per avatar class.  FlakAvatar follows the published Aliens
# tutorial output rather than the class table it was generated from.
MOVEMENT_TEXT = {
    "MovingAvatar": "use the four arrow keys to move.",
    "HorizontalAvatar": "use the left and right arrow keys to move.",
    "FlakAvatar": "use the arrow keys to turn and move.",
    "VerticalAvatar": "use the up and down arrow keys to move.",
    "OngoingAvatar": "use the arrow keys to change direction. "
                     "You will not stop traveling in that direction until you change direction again.",
    "OngoingShootAvatar": "use the arrow keys to change direction.",
    "OngoingTurningAvatar": "use the arrow keys to change direction. You cannot do 180 degree turns!",
    "OrientedAvatar": "use the arrow keys to turn and move.",
    "ShootAvatar": "use the arrow keys to turn and move.",
}
GENERIC_MOVEMENT = "use the arrow keys to move."

PATH_STRATEGIES = ("longest-shortest", "shortest")


class UnknownAvatarClass(UserWarning):
    pass


class NoWinPath(UserWarning):
    pass


@dataclass(frozen=True)
class ControlScheme:
    avatar: str
    avatar_class: str
    movement_text: str
    action_text: Optional[str] = None

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class CriticalPath:
    kind: str  # Win | Lose
    mechanics: tuple
    terminal: int  # index into the game's TerminationSet
    avatar: Optional[str] = None
    complete: bool = True

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "mechanics": list(self.mechanics),
            "terminal": self.terminal,
            "avatar": self.avatar,
            "complete": self.complete,
        }


@dataclass
class AnalysisResult:
    controls: list
    win_paths: list
    lose_paths: list
    point_mechanics: list
    merged: MechanicGraph
    path_strategy: str = "longest-shortest"

    def to_dict(self) -> dict:
        merges = [
            {"id": m.id, "merged_from": list(m.merged_from), "primitives": self.merged.primitives(m.id)}
            for m in self.merged.mechanics.values()
            if m.merged_from
        ]
        return {
            "schema": SCHEMA,
            "game": self.merged.game.name,
            "path_strategy": self.path_strategy,
            "controls": [c.to_dict() for c in self.controls],
            "win_paths": [p.to_dict() for p in self.win_paths],
            "lose_paths": [p.to_dict() for p in self.lose_paths],
            "point_mechanics": list(self.point_mechanics),
            "merges": merges,
        }


# -- controls -----------------------------------------------------------------


def extract_controls(graph: MechanicGraph) -> list:
    game = graph.game
    out = []
    for name in game.avatars:
        sd = game.sprites[name]
        text = MOVEMENT_TEXT.get(sd.cls)
        if text is None:
            warnings.warn(f"avatar {name!r} has unknown class {sd.cls!r}; using generic controls", UnknownAvatarClass)
            text = GENERIC_MOVEMENT
        action = None
        for mid in graph.input_rules:
            m = graph.mechanic(mid)
            if m.origin.sprite == name:
                action = f"Press space to shoot the {game.display_name(graph.action(m)['produces'])}."
        out.append(ControlScheme(name, sd.cls, text, action))
    return out


# -- path search ----------------------------------------------------------------


def _primitive_mechanics(graph: MechanicGraph, m: Mechanic) -> list:
    return [graph.mechanic(p) for p in graph.primitives(m.id)]


def mechanic_successors(graph: MechanicGraph) -> dict:
    """Adjacency over active mechanics, each successor list sorted by id.

    A merged mechanic links exactly where the rule-file mechanics it replaced
    linked, so merging never cuts or adds a chain.
    """
    game = graph.game
    mechs = sorted(graph.mechanics.values(), key=lambda m: m.id)
    outs, ins = {}, {}
    for m in mechs:
        prims = _primitive_mechanics(graph, m)
        outs[m.id] = {graph.nodes[o].label for p in prims for o in p.outputs}
        ins[m.id] = {name for p in prims for name in p.participants}
    succ = {}
    for a in mechs:
        succ[a.id] = [b.id for b in mechs if any(game.is_a(o, i) for o in outs[a.id] for i in ins[b.id])]
    return succ


def shortest_path(starts, succ: dict, target: int) -> Optional[list]:
    """Lexicographically smallest among the shortest paths from any start to ``target``."""
    pred: dict = {}
    for a, bs in succ.items():
        for b in bs:
            pred.setdefault(b, []).append(a)
    dist = {target: 0}
    queue = deque([target])
    while queue:
        node = queue.popleft()
        for p in pred.get(node, ()):
            if p not in dist:
                dist[p] = dist[node] + 1
                queue.append(p)
    reachable = [s for s in starts if s in dist]
    if not reachable:
        return None
    cur = min(reachable, key=lambda s: (dist[s], s))
    path = [cur]
    while cur != target:
        cur = min(b for b in succ[cur] if dist.get(b) == dist[cur] - 1)
        path.append(cur)
    return path


def avatar_starts(graph: MechanicGraph, avatar: str) -> list:
    """Mechanics a player can set off directly as ``avatar``."""
    game = graph.game
    out = []
    for m in graph.mechanics.values():
        if m.origin.kind == "InputRule":
            if m.origin.sprite == avatar:
                out.append(m.id)
        elif any(game.is_a(avatar, p) for prim in _primitive_mechanics(graph, m) for p in prim.participants):
            out.append(m.id)
    return sorted(out)


def _terminals(graph: MechanicGraph, win: bool) -> list:
    kind = "Win" if win else "Lose"
    return sorted(
        (m for m in graph.mechanics.values() if m.origin.kind == "Termination" and graph.action_kind(m) == kind),
        key=lambda m: m.id,
    )


def find_win_paths(graph: MechanicGraph, strategy: str = "longest-shortest") -> list:
    if strategy not in PATH_STRATEGIES:
        raise ValueError(f"unknown path strategy {strategy!r}")
    succ = mechanic_successors(graph)
    avatars = graph.game.avatars
    out = []
    for term in _terminals(graph, win=True):
        if graph.condition_kind(term) == "Timeout":
            out.append(CriticalPath("Win", (term.id,), term.origin.index))
            continue
        found = []
        for avatar in avatars:
            path = shortest_path(avatar_starts(graph, avatar), succ, term.id)
            if path is not None:
                found.append((avatar, path))
        if not found:
            warnings.warn(f"winning terminal {term.id} is unreachable from every avatar", NoWinPath)
            out.append(CriticalPath("Win", (term.id,), term.origin.index, complete=False))
            continue
        if strategy == "longest-shortest":
            avatar, path = min(found, key=lambda ap: (-len(ap[1]), ap[1]))
        else:
            avatar, path = min(found, key=lambda ap: (len(ap[1]), ap[1]))
        out.append(CriticalPath("Win", tuple(path), term.origin.index, avatar))
    return out


def find_lose_paths(graph: MechanicGraph) -> list:
    game = graph.game
    out = []
    for term in _terminals(graph, win=False):
        if graph.condition_kind(term) == "Timeout":
            out.append(CriticalPath("Lose", (term.id,), term.origin.index))
            continue
        counted = {leaf for s in term.participants for leaf in game.leaves(s)}
        causes = []
        for m in sorted(graph.mechanics.values(), key=lambda m: m.id):
            if graph.is_terminal(m):
                continue
            touched = {leaf for s in m.adds + m.removes for leaf in game.leaves(s)}
            if touched & counted:
                causes.append(m.id)
        out.append(CriticalPath("Lose", tuple(causes) + (term.id,), term.origin.index))
    return out


# -- merging --------------------------------------------------------------------


def _merge_key(graph: MechanicGraph, m: Mechanic, role: int) -> tuple:
    action = graph.action(m)
    params = tuple(sorted(action["params"].items()))
    return (graph.condition_kind(m), action["action"], action["effect"], params,
            m.participants[1 - role], role, m.score_delta)


def _try_merge(graph: MechanicGraph, m: Mechanic, role: int) -> Optional[MechanicGraph]:
    game = graph.game
    sprite = m.participants[role]
    sd = game.sprites.get(sprite)
    if sd is None or sd.parent is None:
        return None
    parent = sd.parent
    siblings = game.sprites[parent].children
    other = m.participants[1 - role]
    if len(siblings) < 2 or other in siblings or other == parent:
        return None
    key = _merge_key(graph, m, role)
    members = []
    for sib in siblings:
        match = next(
            (c.id for c in sorted(graph.mechanics.values(), key=lambda c: c.id)
             if graph.condition_kind(c) == "Collision"
             and c.participants[role] == sib
             and _merge_key(graph, c, role) == key),
            None,
        )
        if match is None:
            return None
        members.append(match)
    participants = list(m.participants)
    participants[role] = parent
    return add_merged(graph, m, tuple(participants), tuple(members))


def merge_rules(graph: MechanicGraph) -> MechanicGraph:
    """Collapse identical collision rules shared by every child of a parent.

    Runs one hierarchy level at a time until nothing changes, so a merge at
    depth two can enable one at depth one.  Retired originals stay reachable
    through ``graph.retired`` and each merged mechanic's ``merged_from``.
    """
    changed = True
    while changed:
        changed = False
        for m in sorted(graph.mechanics.values(), key=lambda m: m.id):
            if graph.condition_kind(m) != "Collision":
                continue
            for role in (0, 1):
                merged = _try_merge(graph, m, role)
                if merged is not None:
                    graph = merged
                    changed = True
                    break
            if changed:
                break
    return graph


def extract_point_rules(graph: MechanicGraph) -> list:
    pts = [m for m in graph.mechanics.values() if m.score_delta != 0]
    return [m.id for m in sorted(pts, key=lambda m: (-abs(m.score_delta), m.id))]


def analyze(graph: MechanicGraph, path_strategy: str = "longest-shortest") -> AnalysisResult:
    """Merge rules, then derive controls, critical paths and point rules from the merged graph."""
    merged = merge_rules(graph)
    return AnalysisResult(
        controls=extract_controls(merged),
        win_paths=find_win_paths(merged, path_strategy),
        lose_paths=find_lose_paths(merged),
        point_mechanics=extract_point_rules(merged),
        merged=merged,
        path_strategy=path_strategy,
    )
