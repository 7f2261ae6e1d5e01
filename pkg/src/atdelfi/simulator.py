"""
Deterministic forward model for the supported VGDL subset.

One ``step`` runs four phases in a fixed order:

1. avatars act on the player's action (moving, turning, shooting);
2. every other sprite runs its class behaviour (missiles fly, spawners
   spawn, NPCs wander or chase), drawing randomness from the state's RNG;
3. collisions are resolved interaction by interaction, in declaration
   order, over sprites sharing a cell; a sprite killed earlier in the tick
   takes part in nothing afterwards;
4. terminations are checked in declaration order and the first to fire
   ends the game.

Every rule that changes the state emits a ``TraceEvent`` naming the mechanic
id from the (unmerged) mechanic graph.  A sprite trying to leave the grid
stays put and is flagged as touching ``EOS`` for phase 3.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import Optional

from .graph import MechanicGraph, build_graph
from .vgdl import EOS, GameDescription, LevelGrid


class Action(IntEnum):
    Up = 0
    Down = 1
    Left = 2
    Right = 3
    Use = 4
    Nil = 5


class Status(str, Enum):
    Running = "Running"
    Won = "Won"
    Lost = "Lost"


class SimulationError(Exception):
    pass


class SteppedTerminalState(SimulationError):
    pass


class UnsupportedSpriteClass(SimulationError):
    pass


class UnsupportedEffect(SimulationError):
    pass


MOVES = {Action.Up: (-1, 0), Action.Down: (1, 0), Action.Left: (0, -1), Action.Right: (0, 1)}
ORIENTATIONS = {"UP": (-1, 0), "DOWN": (1, 0), "LEFT": (0, -1), "RIGHT": (0, 1)}
DIRECTIONS = ((-1, 0), (1, 0), (0, -1), (0, 1))

SUPPORTED_EFFECTS = (
    "killSprite", "killBoth", "transformTo", "stepBack", "turnAround", "reverseDirection", "spawn", "cloneSprite",
)

# which arrow keys each avatar class listens to, and whether Use shoots
AVATAR_KEYS = {
    "MovingAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), False),
    "OrientedAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), False),
    "ShootAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), True),
    "HorizontalAvatar": ((Action.Left, Action.Right), False),
    "FlakAvatar": ((Action.Left, Action.Right), True),
    "VerticalAvatar": ((Action.Up, Action.Down), False),
    "OngoingAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), False),
    "OngoingShootAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), True),
    "OngoingTurningAvatar": ((Action.Up, Action.Down, Action.Left, Action.Right), False),
}
ONGOING = ("OngoingAvatar", "OngoingShootAvatar", "OngoingTurningAvatar")


class Sprite:
    __slots__ = ("id", "name", "r", "c", "dr", "dc", "pr", "pc", "eos", "spawned", "last_shot")

    def __init__(self, sid, name, r, c, dr=0, dc=0):
        self.id = sid
        self.name = name
        self.r, self.c = r, c
        self.dr, self.dc = dr, dc
        self.pr, self.pc = r, c
        self.eos = False
        self.spawned = 0
        self.last_shot = -(10 ** 9)

    def copy(self) -> "Sprite":
        s = Sprite.__new__(Sprite)
        s.id, s.name, s.r, s.c, s.dr, s.dc = self.id, self.name, self.r, self.c, self.dr, self.dc
        s.pr, s.pc, s.eos, s.spawned, s.last_shot = self.pr, self.pc, self.eos, self.spawned, self.last_shot
        return s

    def as_tuple(self) -> tuple:
        return (self.id, self.name, self.r, self.c, self.dr, self.dc)


@dataclass
class GameState:
    tick: int
    sprites: dict
    score: int
    status: Status
    rng_seed: int
    rng: random.Random = field(repr=False, compare=False)
    next_id: int = 0
    # sprites no rule, behaviour or termination can ever touch; shared between clones
    static: dict = field(default_factory=dict, repr=False)

    def clone(self) -> "GameState":
        rng = random.Random.__new__(random.Random)
        rng.setstate(self.rng.getstate())
        return GameState(self.tick, {k: s.copy() for k, s in self.sprites.items()}, self.score,
                         self.status, self.rng_seed, rng, self.next_id, self.static)

    def all_sprites(self) -> list:
        return list(self.static.values()) + list(self.sprites.values())

    def live(self, names) -> list:
        return [s for s in self.sprites.values() if s.name in names]


@dataclass(frozen=True)
class TraceEvent:
    tick: int
    mechanic: int
    sprites_involved: tuple
    score_delta: int = 0
    snapshot: str = field(default="", compare=False, repr=False)


class _Rule:
    __slots__ = ("mid", "subjects", "objects", "effect", "stype", "score")

    def __init__(self, mid, subjects, objects, effect, stype, score):
        self.mid, self.subjects, self.objects = mid, subjects, objects
        self.effect, self.stype, self.score = effect, stype, score


def _period(value, default: int = 1) -> int:
    if value is None:
        return default
    v = float(value)
    return max(1, int(round(v)))


def _speed_period(value) -> int:
    if value is None:
        return 1
    v = float(value)
    return 1 if v >= 1 else max(1, int(round(1 / v)))


class Simulator:
    """Compiled rules for one (game, level) pair.

    ``graph`` must be the unmerged graph so event mechanic ids line up with
    the rule file; it is built when omitted.
    """

    def __init__(self, game: GameDescription, level: LevelGrid, graph: Optional[MechanicGraph] = None):
        self.game = game
        self.level = level
        self.graph = graph or build_graph(game)
        self.height, self.width = level.height, level.width
        g = game

        self.leaf_info = {}
        for sd in g.sprites.values():
            if sd.children:
                continue
            p = g.effective_params(sd.name)
            self.leaf_info[sd.name] = {
                "cls": sd.cls,
                "opaque": sd.opaque,
                "avatar": sd.is_avatar,
                "orientation": ORIENTATIONS.get(p.get("orientation", "").upper(), None),
                "speed": _speed_period(p.get("speed")),
                "cooldown": _period(p.get("cooldown")),
                "prob": float(p.get("prob", 1)),
                "total": int(p["total"]) if "total" in p else None,
                "stype": p.get("stype"),
                "singleton": p.get("singleton", "False") in ("True", "true"),
            }

        def leaves(name):
            return frozenset(g.leaves(name))

        mechs = self.graph.mechanics
        self.rules = []
        for m in sorted(mechs.values(), key=lambda m: m.id):
            if m.origin.kind != "Interaction":
                continue
            inter = g.interactions[m.origin.index]
            if inter.effect not in SUPPORTED_EFFECTS:
                raise UnsupportedEffect(f"effect {inter.effect!r} is not simulated")
            objects = EOS if inter.object == EOS else leaves(inter.object)
            self.rules.append(_Rule(m.id, leaves(inter.subject), objects, inter.effect,
                                    inter.params.get("stype"), inter.score_delta))
        self.terminations = []
        for m in sorted(mechs.values(), key=lambda m: m.id):
            if m.origin.kind == "Termination":
                t = g.terminations[m.origin.index]
                counted = frozenset(leaf for s in t.sprites for leaf in g.leaves(s))
                self.terminations.append((m.id, t.kind, counted, t.limit, t.win))
        self.input_rule = {m.origin.sprite: m.id for m in mechs.values() if m.origin.kind == "InputRule"}
        self.behavior = {m.origin.sprite: m.id for m in mechs.values() if m.origin.kind == "Behavior"}

        touched = set()
        for rule in self.rules:
            touched |= rule.subjects
            if rule.objects != EOS:
                touched |= rule.objects
        for _, _, counted, _, _ in self.terminations:
            touched |= counted
        for info in self.leaf_info.values():
            if info["stype"]:
                touched |= set(g.leaves(info["stype"])) if info["stype"] in g.sprites else set()
        self.inert = frozenset(
            name for name, info in self.leaf_info.items()
            if info["cls"] in ("Immovable", "Passive") and not info["avatar"] and name not in touched
        )

        self.chars = self._assign_chars()
        order = {name: i for i, name in enumerate(g.sprites)}
        self.draw_rank = {
            name: (1 if info["avatar"] else 0, order[name]) for name, info in self.leaf_info.items()
        }

    # -- setup -------------------------------------------------------------------

    def _assign_chars(self) -> dict:
        chars = {}
        mapping = self.game.level_mapping
        for name in self.leaf_info:
            best = None
            for ch, names in mapping.items():
                if names and names[-1] == name and (best is None or len(names) < len(mapping[best])):
                    best = ch
            if best is None:
                best = next((ch for ch, names in mapping.items() if name in names), None)
            if best is not None:
                chars[name] = best
        used = set(mapping) | set(chars.values())
        for name in self.leaf_info:
            if name in chars:
                continue
            pool = [ch.lower() for ch in name if ch.isalpha()] + list("abcdefghijklmnopqrstuvwxyz0123456789")
            ch = next((p for p in pool if p not in used and p.upper() not in used), "?")
            used.add(ch)
            chars[name] = ch
        for name, info in self.leaf_info.items():
            if info["avatar"]:
                chars[name] = chars[name].upper()
        return chars

    def _create(self, state: GameState, name: str, r: int, c: int, orientation=None) -> Sprite:
        info = self.leaf_info.get(name)
        if info is None:
            # a parent group was named; instantiate its first leaf
            name = self.game.leaves(name)[0]
            info = self.leaf_info[name]
        if info["opaque"]:
            raise UnsupportedSpriteClass(f"sprite {name!r} has unsupported class {info['cls']!r}")
        if info["orientation"] is not None:
            dr, dc = info["orientation"]
        elif orientation is not None:
            dr, dc = orientation
        elif info["cls"] == "Bomber" or info["cls"] in ONGOING:
            dr, dc = 0, 1
        else:
            dr, dc = 0, 0
        sp = Sprite(state.next_id, name, r, c, dr, dc)
        state.next_id += 1
        if name in self.inert:
            state.static = {**state.static, sp.id: sp}  # copy on write, clones share the old dict
        else:
            state.sprites[sp.id] = sp
        return sp

    def initial_state(self, seed: int = 0) -> GameState:
        state = GameState(0, {}, 0, Status.Running, seed, random.Random(seed))
        for r, c, name in self.level.spawns(self.game):
            self._create(state, name, r, c)
        return state

    # -- stepping -----------------------------------------------------------------

    def step(self, state: GameState, action: Action) -> tuple:
        """Advance one tick; returns ``(new_state, events)`` and leaves ``state`` untouched."""
        new = state.clone()
        events = self.advance(new, action)
        snap = self.render(new)
        return new, [TraceEvent(t, m, ids, d, snap) for t, m, ids, d in events]

    def advance(self, state: GameState, action: Action) -> list:
        """In-place step used by rollouts; events are ``(tick, mechanic, ids, score_delta)``."""
        if state.status is not Status.Running:
            raise SteppedTerminalState(f"game already {state.status.value}")
        state.tick += 1
        events: list = []
        for sp in state.sprites.values():
            sp.pr, sp.pc, sp.eos = sp.r, sp.c, False

        for sp in [s for s in state.sprites.values() if self.leaf_info[s.name]["avatar"]]:
            self._avatar_act(state, sp, Action(action), events)
        for sp in list(state.sprites.values()):
            if sp.id in state.sprites and not self.leaf_info[sp.name]["avatar"]:
                self._npc_act(state, sp, events)
        self._collide(state, events)
        self._terminate(state, events)
        return events

    def _move(self, sp: Sprite, dr: int, dc: int) -> None:
        r, c = sp.r + dr, sp.c + dc
        if 0 <= r < self.height and 0 <= c < self.width:
            sp.r, sp.c = r, c
        else:
            sp.eos = True

    def _spawn(self, state: GameState, parent: Sprite, stype: str, orientation=None) -> Sprite:
        return self._create(state, stype, parent.r, parent.c, orientation)

    def _avatar_act(self, state: GameState, sp: Sprite, action: Action, events: list) -> None:
        info = self.leaf_info[sp.name]
        cls = info["cls"]
        keys, shoots = AVATAR_KEYS[cls]
        if action in keys:
            dr, dc = MOVES[action]
            if cls in ONGOING:
                if not (cls == "OngoingTurningAvatar" and (dr, dc) == (-sp.dr, -sp.dc)):
                    sp.dr, sp.dc = dr, dc
            else:
                if cls in ("OrientedAvatar", "ShootAvatar"):
                    sp.dr, sp.dc = dr, dc
                self._move(sp, dr, dc)
        if cls in ONGOING and (sp.dr or sp.dc):
            self._move(sp, sp.dr, sp.dc)
        if action == Action.Use and shoots and sp.name in self.input_rule:
            stype = info["stype"]
            if state.tick - sp.last_shot < info["cooldown"]:
                return
            leaves = self.game.leaves(stype)
            if self.leaf_info[leaves[0]]["singleton"] and state.live(leaves):
                return
            orientation = (-1, 0) if cls == "FlakAvatar" else (sp.dr, sp.dc) if (sp.dr or sp.dc) else (-1, 0)
            new = self._spawn(state, sp, stype, orientation)
            sp.last_shot = state.tick
            events.append((state.tick, self.input_rule[sp.name], (sp.id, new.id), 0))

    def _npc_act(self, state: GameState, sp: Sprite, events: list) -> None:
        info = self.leaf_info[sp.name]
        cls = info["cls"]
        tick = state.tick
        if cls in ("Missile", "Bomber"):
            if tick % info["speed"] == 0 and (sp.dr or sp.dc):
                self._move(sp, sp.dr, sp.dc)
        elif cls == "RandomNPC":
            if tick % info["cooldown"] == 0:
                dr, dc = state.rng.choice(DIRECTIONS)
                self._move(sp, dr, dc)
        elif cls in ("Chaser", "Fleeing"):
            if tick % info["cooldown"] == 0:
                self._chase(state, sp, info, flee=cls == "Fleeing")

        if cls in ("Bomber", "SpawnPoint") and sp.name in self.behavior:
            if tick % info["cooldown"] == 0 and state.rng.random() < info["prob"]:
                new = self._spawn(state, sp, info["stype"])
                events.append((tick, self.behavior[sp.name], (sp.id, new.id), 0))
                if cls == "SpawnPoint":
                    sp.spawned += 1
                    if info["total"] is not None and sp.spawned >= info["total"]:
                        del state.sprites[sp.id]

    def _chase(self, state: GameState, sp: Sprite, info: dict, flee: bool) -> None:
        targets = state.live(self.game.leaves(info["stype"])) if info["stype"] else []
        if not targets:
            dr, dc = state.rng.choice(DIRECTIONS)
            self._move(sp, dr, dc)
            return
        target = min(targets, key=lambda t: (abs(t.r - sp.r) + abs(t.c - sp.c), t.id))
        scored = []
        for dr, dc in DIRECTIONS:
            r, c = sp.r + dr, sp.c + dc
            if 0 <= r < self.height and 0 <= c < self.width:
                scored.append((abs(target.r - r) + abs(target.c - c), (dr, dc)))
        if not scored:
            return
        best = (max if flee else min)(d for d, _ in scored)
        dr, dc = state.rng.choice([m for d, m in scored if d == best])
        self._move(sp, dr, dc)

    def _collide(self, state: GameState, events: list) -> None:
        sprites = state.sprites

        def index() -> dict:
            by_name: dict = {}
            for s in sprites.values():
                by_name.setdefault(s.name, []).append(s)
            return by_name

        by_name = index()  # may hold sprites killed earlier this tick; every use re-checks liveness
        for rule in self.rules:
            subjects = [s for n in rule.subjects for s in by_name.get(n, ())]
            if not subjects:
                continue
            created = state.next_id
            if rule.objects == EOS:
                for a in subjects:
                    if a.id in sprites and a.eos:
                        self._apply(state, rule, a, None, events)
            else:
                cells: dict = {}
                for n in rule.objects:
                    for s in by_name.get(n, ()):
                        cells.setdefault((s.r, s.c), []).append(s)
                if not cells:
                    continue
                for a in subjects:
                    for b in cells.get((a.r, a.c), ()):
                        if a.id not in sprites:
                            break
                        if b.id == a.id or b.id not in sprites or (b.r, b.c) != (a.r, a.c):
                            continue
                        self._apply(state, rule, a, b, events)
            if state.next_id != created:
                by_name = index()  # sprites made by this rule can meet later rules this tick

    def _apply(self, state: GameState, rule: _Rule, a: Sprite, b: Optional[Sprite], events: list) -> None:
        effect = rule.effect
        sprites = state.sprites
        involved = (a.id,) if b is None else (a.id, b.id)
        if effect == "killSprite":
            del sprites[a.id]
        elif effect == "killBoth":
            del sprites[a.id]
            if b is not None:
                del sprites[b.id]
        elif effect == "transformTo":
            del sprites[a.id]
            new = self._create(state, rule.stype, a.r, a.c, (a.dr, a.dc))
            new.pr, new.pc = a.pr, a.pc
            involved += (new.id,)
        elif effect == "stepBack":
            a.r, a.c = a.pr, a.pc
        elif effect == "turnAround":
            if a.r + 1 < self.height:
                a.r += 1
            a.dr, a.dc = -a.dr, -a.dc
        elif effect == "reverseDirection":
            a.dr, a.dc = -a.dr, -a.dc
        elif effect in ("spawn", "cloneSprite"):
            stype = a.name if effect == "cloneSprite" else rule.stype
            new = self._create(state, stype, a.r, a.c)
            involved += (new.id,)
        state.score += rule.score
        events.append((state.tick, rule.mid, involved, rule.score))

    def _terminate(self, state: GameState, events: list) -> None:
        counts: dict = {}
        for s in state.sprites.values():
            counts[s.name] = counts.get(s.name, 0) + 1
        for mid, kind, counted, limit, win in self.terminations:
            if kind == "Timeout":
                fired = state.tick >= limit
            else:
                fired = sum(counts.get(n, 0) for n in counted) <= limit
            if fired:
                state.status = Status.Won if win else Status.Lost
                events.append((state.tick, mid, (), 0))
                return

    # -- rendering -------------------------------------------------------------------

    def render(self, state: GameState) -> str:
        """One character per cell; avatars in upper case, empty cells as ``.``."""
        grid = [["."] * self.width for _ in range(self.height)]
        rank = self.draw_rank
        for sp in sorted(state.all_sprites(), key=lambda s: (rank[s.name], s.id)):
            grid[sp.r][sp.c] = self.chars[sp.name]
        return "\n".join("".join(row) for row in grid)
