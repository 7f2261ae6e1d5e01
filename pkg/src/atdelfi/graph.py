"""
Mechanic graph: object, condition and action nodes wired into mechanics.

Every sprite gets an object node (plus one for Time, and one for ``EOS`` when
an interaction mentions the screen edge).  Each interaction, termination and
synthesised rule contributes one condition node and one action node::

    subject ─┐
             ├─> Collision ─> KillSprite(subject) ─> subject
    object  ─┘

Synthesised rules cover state changes that no interaction line describes:
pressing space on a shooting avatar (``PlayerInput``) and sprites that spawn
others on a timer (``Periodic``).  Node and mechanic ids follow declaration
order, so two builds of the same game are identical.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .vgdl import EOS, GameDescription

SCHEMA = "atdelfi.graph/1"

OBJECT, CONDITION, ACTION = "Object", "Condition", "Action"
TIME = "Time"

EFFECT_KINDS = {
    "killSprite": "KillSprite",
    "transformTo": "TransformTo",
    "spawn": "Spawn",
    "cloneSprite": "Spawn",
    "stepBack": "StepBack",
}

SHOOTING_AVATARS = ("FlakAvatar", "ShootAvatar", "OngoingShootAvatar")
SPAWNING_CLASSES = ("SpawnPoint", "Bomber")


@dataclass(frozen=True)
class GraphNode:
    id: int
    kind: str
    label: str
    data: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Origin:
    kind: str  # Interaction | Termination | InputRule | Behavior | Merged
    index: Optional[int] = None
    sprite: Optional[str] = None

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.index is not None:
            out["index"] = self.index
        if self.sprite is not None:
            out["sprite"] = self.sprite
        return out


@dataclass(frozen=True)
class Mechanic:
    id: int
    inputs: tuple
    condition: int
    action: int
    outputs: tuple
    score_delta: int
    origin: Origin
    merged_from: tuple = ()
    # sprite-name views of the same rule, used by analysis and simulation
    participants: tuple = ()
    adds: tuple = ()
    removes: tuple = ()


@dataclass
class MechanicGraph:
    game: GameDescription
    nodes: dict
    edges: list
    mechanics: dict
    avatars: list
    input_rules: list
    sprite_nodes: dict
    retired: dict = field(default_factory=dict)

    def mechanic(self, mid: int) -> Mechanic:
        """Active or retired (merged-away) mechanic by id."""
        if mid in self.mechanics:
            return self.mechanics[mid]
        return self.retired[mid]

    def condition(self, m: Mechanic) -> dict:
        return self.nodes[m.condition].data

    def action(self, m: Mechanic) -> dict:
        return self.nodes[m.action].data

    def condition_kind(self, m: Mechanic) -> str:
        return self.nodes[m.condition].data["condition"]

    def action_kind(self, m: Mechanic) -> str:
        return self.nodes[m.action].data["action"]

    def is_terminal(self, m: Mechanic) -> bool:
        return self.action_kind(m) in ("Win", "Lose")

    def primitives(self, mid: int) -> list:
        """Expand a merged mechanic back to the rule-file mechanics it stands for."""
        m = self.mechanic(mid)
        if not m.merged_from:
            return [mid]
        out = []
        for sub in m.merged_from:
            out.extend(self.primitives(sub))
        return out

    def to_dict(self) -> dict:
        def mech(m: Mechanic) -> dict:
            return {
                "id": m.id,
                "inputs": list(m.inputs),
                "condition": m.condition,
                "action": m.action,
                "outputs": list(m.outputs),
                "score_delta": m.score_delta,
                "origin": m.origin.to_dict(),
                "merged_from": list(m.merged_from),
            }

        return {
            "schema": SCHEMA,
            "game": self.game.name,
            "nodes": [{"id": n.id, "kind": n.kind, "label": n.label, **n.data} for n in self.nodes.values()],
            "edges": [list(e) for e in self.edges],
            "mechanics": [mech(m) for m in self.mechanics.values()],
            "retired": [mech(m) for m in self.retired.values()],
            "avatars": list(self.avatars),
            "input_rules": list(self.input_rules),
        }


def interaction_semantics(subject: str, obj: str, effect: str, params: dict) -> dict:
    """What an interaction does, in sprite names: action kind, target, adds/removes."""
    kind = EFFECT_KINDS.get(effect, "Other")
    stype = params.get("stype")
    produces = None
    adds: tuple = ()
    removes: tuple = ()
    if kind == "KillSprite":
        removes = (subject,)
    elif kind == "TransformTo":
        produces = stype
        removes, adds = (subject,), (stype,)
    elif kind == "Spawn":
        produces = subject if effect == "cloneSprite" else stype
        adds = (produces,)
    elif effect == "killBoth":
        removes = (subject, obj) if obj != EOS else (subject,)
    outputs = _unique(removes + adds) or (subject,)
    return {
        "action": kind,
        "effect": effect,
        "target": subject,
        "produces": produces,
        "adds": adds,
        "removes": removes,
        "outputs": outputs,
    }


def _unique(names) -> tuple:
    return tuple(dict.fromkeys(names))


class _Builder:
    def __init__(self, game: GameDescription):
        self.game = game
        self.nodes: dict = {}
        self.edges: list = []
        self.mechanics: dict = {}
        self.sprite_nodes: dict = {}
        self.next_mid = 0

    def node(self, kind: str, label: str, **data) -> int:
        nid = len(self.nodes)
        self.nodes[nid] = GraphNode(nid, kind, label, data)
        return nid

    def edge(self, a: int, b: int) -> None:
        if (a, b) not in self.edges:
            self.edges.append((a, b))

    def mechanic(self, inputs, condition, action, outputs, score, origin, adds=(), removes=()) -> int:
        mid = self.next_mid
        self.next_mid += 1
        in_ids = _unique(self.sprite_nodes[n] for n in inputs)
        out_ids = _unique(self.sprite_nodes[n] for n in outputs)
        for i in in_ids:
            self.edge(i, condition)
        self.edge(condition, action)
        for o in out_ids:
            self.edge(action, o)
        self.mechanics[mid] = Mechanic(
            mid, in_ids, condition, action, out_ids, score, origin,
            participants=tuple(inputs), adds=tuple(adds), removes=tuple(removes),
        )
        return mid


def _score_label(delta: int) -> str:
    return f" {delta:+d}" if delta else ""


def _collision(b: _Builder, subject: str, obj: str, effect: str, params: dict, score: int, origin: Origin) -> int:
    sem = interaction_semantics(subject, obj, effect, params)
    cond = b.node(CONDITION, f"Collision({subject}, {obj})", condition="Collision", sprites=[subject, obj])
    what = sem["produces"] if sem["action"] in ("TransformTo", "Spawn") else sem["target"]
    token = sem["action"] if sem["action"] != "Other" else effect
    act = b.node(
        ACTION,
        f"{token}({what}){_score_label(score)}",
        action=sem["action"],
        effect=effect,
        params=dict(params),
        target=sem["target"],
        produces=sem["produces"],
        score_delta=score,
    )
    return b.mechanic((subject, obj), cond, act, sem["outputs"], score, origin, sem["adds"], sem["removes"])


def build_graph(game: GameDescription) -> MechanicGraph:
    b = _Builder(game)
    for sd in game.sprites.values():
        b.sprite_nodes[sd.name] = b.node(OBJECT, sd.name, sprite=sd.name, cls=sd.cls, parent=sd.parent)
    b.sprite_nodes[TIME] = b.node(OBJECT, TIME, sprite=None, cls=TIME, parent=None)
    if any(i.object == EOS for i in game.interactions):
        b.sprite_nodes[EOS] = b.node(OBJECT, EOS, sprite=None, cls=EOS, parent=None)

    for idx, inter in enumerate(game.interactions):
        _collision(b, inter.subject, inter.object, inter.effect, inter.params, inter.score_delta,
                   Origin("Interaction", index=idx))

    for idx, term in enumerate(game.terminations):
        result = "Win" if term.win else "Lose"
        if term.kind == "Timeout":
            cond = b.node(CONDITION, f"Timeout({term.limit})", condition="Timeout", limit=term.limit, sprites=[])
            inputs: tuple = (TIME,)
        else:
            cond = b.node(
                CONDITION,
                f"{term.kind}({', '.join(term.sprites)} <= {term.limit})",
                condition=term.kind,
                limit=term.limit,
                sprites=list(term.sprites),
            )
            inputs = term.sprites
        act = b.node(ACTION, result, action=result, effect=None, params={}, target=None, produces=None, score_delta=0)
        b.mechanic(inputs, cond, act, (), 0, Origin("Termination", index=idx))

    input_rules = []
    for name in game.avatars:
        sd = game.sprites[name]
        stype = game.effective_params(name).get("stype")
        if sd.cls in SHOOTING_AVATARS and stype:
            cond = b.node(CONDITION, "PlayerInput(space)", condition="PlayerInput", key="space", sprites=[name])
            act = b.node(ACTION, f"Spawn({stype})", action="Spawn", effect="shoot", params={},
                         target=name, produces=stype, score_delta=0)
            input_rules.append(b.mechanic((name,), cond, act, (stype,), 0, Origin("InputRule", sprite=name), adds=(stype,)))

    for sd in game.sprites.values():
        if sd.children or sd.cls not in SPAWNING_CLASSES:
            continue
        params = game.effective_params(sd.name)
        stype = params.get("stype")
        if not stype:
            continue
        removes = (sd.name,) if sd.cls == "SpawnPoint" and "total" in params else ()
        cond = b.node(CONDITION, f"Periodic({sd.name})", condition="Periodic", sprites=[sd.name])
        act = b.node(ACTION, f"Spawn({stype})", action="Spawn", effect="spawn", params={},
                     target=sd.name, produces=stype, score_delta=0)
        b.mechanic((sd.name,), cond, act, (stype,) + removes, 0, Origin("Behavior", sprite=sd.name),
                   adds=(stype,), removes=removes)

    avatars = [b.sprite_nodes[n] for n in game.avatars]
    return MechanicGraph(game, b.nodes, b.edges, b.mechanics, avatars, input_rules, b.sprite_nodes)


def add_merged(graph: MechanicGraph, template: Mechanic, participants: tuple, members: tuple) -> MechanicGraph:
    """Return a copy of ``graph`` with ``members`` retired in favour of one merged mechanic."""
    b = _Builder(graph.game)
    b.nodes = dict(graph.nodes)
    b.edges = list(graph.edges)
    b.sprite_nodes = graph.sprite_nodes
    action = graph.action(template)
    subject, obj = participants
    b.next_mid = max(list(graph.mechanics) + list(graph.retired)) + 1
    mid = _collision(b, subject, obj, action["effect"], action["params"], template.score_delta,
                     Origin("Merged", index=template.origin.index))
    merged = replace(b.mechanics[mid], merged_from=tuple(members))
    mechanics = {k: v for k, v in graph.mechanics.items() if k not in members}
    mechanics[mid] = merged
    retired = dict(graph.retired)
    for k in members:
        retired[k] = graph.mechanics[k]
    return MechanicGraph(graph.game, b.nodes, b.edges, mechanics, list(graph.avatars),
                         list(graph.input_rules), graph.sprite_nodes, retired)


@dataclass(frozen=True)
class StatsRecord:
    sprite_count: int
    hierarchy_depth: int
    interaction_count: int
    win_length: int
    lose_length: int
    merged_interactions: int
    point_rules: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def graph_stats(game: GameDescription, graph: MechanicGraph, analysis) -> StatsRecord:
    """Size metrics for a game and its analysed graph.

    Path lengths count mechanics; multiply by three for a node count.
    ``merged_interactions`` counts rule-file interactions absorbed by merges.
    """
    from .vgdl import hierarchy_depth

    merged = analysis.merged
    absorbed = set()
    for m in merged.mechanics.values():
        if m.merged_from:
            absorbed.update(merged.primitives(m.id))
    return StatsRecord(
        sprite_count=len(game.sprites),
        hierarchy_depth=hierarchy_depth(game),
        interaction_count=len(game.interactions),
        win_length=max((len(p.mechanics) for p in analysis.win_paths), default=0),
        lose_length=max((len(p.mechanics) for p in analysis.lose_paths), default=0),
        merged_interactions=len(absorbed),
        point_rules=len(analysis.point_mechanics),
    )
