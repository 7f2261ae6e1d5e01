"""
Parser for a compact VGDL dialect: game descriptions (``.vgdl``) and level
files (``.lvl``).

A game file has a single ``BasicGame`` root with four indented sections::

    BasicGame
        SpriteSet
            avatar  > FlakAvatar stype=sam
            missile > Missile
                sam  > orientation=UP singleton=True
        InteractionSet
            alien sam > killSprite scoreChange=2
        TerminationSet
            SpriteCounter stype=avatar limit=0 win=False
        LevelMapping
            A > background avatar

Nesting is by indentation (tabs or spaces, never both in one file) and ``#``
starts a comment.  The parser validates every name reference and computes the
sprite hierarchy; it does not interpret sprite classes, so unknown class
tokens survive as opaque classes for the analysis stages.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

ABSTRACT = "Abstract"
EOS = "EOS"

AVATAR_CLASSES = (
    "MovingAvatar",
    "HorizontalAvatar",
    "VerticalAvatar",
    "FlakAvatar",
    "ShootAvatar",
    "OngoingAvatar",
    "OngoingShootAvatar",
    "OngoingTurningAvatar",
    "OrientedAvatar",
)

SPRITE_CLASSES = (
    "Immovable",
    "Passive",
    "Missile",
    "Bomber",
    "SpawnPoint",
    "RandomNPC",
    "Chaser",
    "Fleeing",
    "Resource",
) + AVATAR_CLASSES

TERMINATION_KINDS = ("SpriteCounter", "MultiSpriteCounter", "Timeout")

SECTIONS = ("SpriteSet", "InteractionSet", "TerminationSet", "LevelMapping")

# leaf sprites without a class token anywhere in their ancestry
DEFAULT_CLASS = "Immovable"


class VGDLError(Exception):
    """Base class for all parse and validation failures."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VGDLSyntaxError(VGDLError):
    pass


class VGDLReferenceError(VGDLError):
    """A name used in an interaction, termination or mapping is not a sprite."""


class MissingSectionError(VGDLError):
    pass


class InvalidGameError(VGDLError):
    """The file parses but violates a game-level invariant (no avatar, ...)."""


class RaggedLevelError(VGDLError):
    pass


class UnmappedCharError(VGDLError):
    def __init__(self, char: str, row: int, col: int):
        self.char, self.row, self.col = char, row, col
        super().__init__(f"character {char!r} at row {row}, col {col} is not in the level mapping")


@dataclass(frozen=True)
class SpriteDef:
    name: str
    cls: str
    params: dict = field(default_factory=dict)
    parent: Optional[str] = None
    depth: int = 0
    class_token: Optional[str] = None
    children: tuple = ()

    @property
    def is_abstract(self) -> bool:
        return self.cls == ABSTRACT

    @property
    def is_avatar(self) -> bool:
        return self.cls in AVATAR_CLASSES or (self.opaque and self.cls.endswith("Avatar"))

    @property
    def opaque(self) -> bool:
        """True for class tokens outside the supported vocabulary."""
        return self.cls != ABSTRACT and self.cls not in SPRITE_CLASSES


@dataclass(frozen=True)
class InteractionDef:
    subject: str
    object: str
    effect: str
    params: dict = field(default_factory=dict)
    score_delta: int = 0
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class TerminationDef:
    kind: str
    sprites: tuple = ()
    limit: int = 0
    win: bool = False
    line: Optional[int] = field(default=None, compare=False)


@dataclass(frozen=True)
class GameDescription:
    sprites: dict
    interactions: tuple
    terminations: tuple
    level_mapping: dict
    name: str = field(default="game", compare=False)
    params: dict = field(default_factory=dict)

    # -- hierarchy helpers -------------------------------------------------

    def __getitem__(self, name: str) -> SpriteDef:
        return self.sprites[name]

    def ancestors(self, name: str) -> list:
        """Parent chain of ``name``, nearest first."""
        out = []
        parent = self.sprites[name].parent if name in self.sprites else None
        while parent is not None:
            out.append(parent)
            parent = self.sprites[parent].parent
        return out

    def is_a(self, name: str, other: str) -> bool:
        """True if ``name`` is ``other`` or one of its descendants."""
        return name == other or other in self.ancestors(name)

    def leaves(self, name: str) -> list:
        """Leaf sprites under ``name`` in declaration order (``name`` itself if a leaf)."""
        if name not in self.sprites:
            return [name]
        sd = self.sprites[name]
        if not sd.children:
            return [name]
        out = []
        for child in sd.children:
            out.extend(self.leaves(child))
        return out

    def effective_params(self, name: str) -> dict:
        merged: dict = {}
        for anc in reversed(self.ancestors(name)):
            merged.update(self.sprites[anc].params)
        merged.update(self.sprites[name].params)
        return merged

    @property
    def avatars(self) -> list:
        """Avatar-class leaf sprites; these are the ones a level can instantiate."""
        return [sd.name for sd in self.sprites.values() if sd.is_avatar and not sd.children]

    def display_name(self, name: str) -> str:
        """Sprite name as shown in tutorial text: ``child (parent)``, ``avatar (Class)`` or bare."""
        sd = self.sprites.get(name)
        if sd is None:
            return name
        if sd.parent is not None:
            return f"{name} ({sd.parent})"
        if sd.is_avatar:
            return f"{name} ({sd.cls})"
        return name


@dataclass(frozen=True)
class LevelGrid:
    width: int
    height: int
    cells: tuple
    name: str = field(default="level", compare=False)

    def spawns(self, game: GameDescription) -> Iterator[tuple]:
        """Yield ``(row, col, sprite_name)`` for every sprite a level places."""
        for r, row in enumerate(self.cells):
            for c, ch in enumerate(row):
                for name in game.level_mapping.get(ch, ()):
                    yield r, c, name


# -- tokenising ---------------------------------------------------------------


@dataclass
class _Line:
    number: int
    indent: int
    text: str
    children: list = field(default_factory=list)


def _logical_lines(source: str) -> list:
    lines = []
    indent_char = None
    for number, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].rstrip()
        if not text.strip():
            continue
        stripped = text.lstrip(" \t")
        lead = text[: len(text) - len(stripped)]
        if lead:
            chars = set(lead)
            if len(chars) > 1 or (indent_char is not None and lead[0] != indent_char):
                raise VGDLSyntaxError("mixed tabs and spaces in indentation", number)
            indent_char = lead[0]
        lines.append(_Line(number, len(lead), stripped))
    return lines


def _build_tree(lines: list) -> list:
    root = _Line(0, -1, "")
    stack = [root]
    for line in lines:
        while stack[-1].indent >= line.indent:
            stack.pop()
        parent = stack[-1]
        if parent.children and parent.children[0].indent != line.indent:
            raise VGDLSyntaxError("inconsistent indentation", line.number)
        parent.children.append(line)
        stack.append(line)
    return root.children


def _split_params(tokens: list, line: int) -> tuple:
    plain, params = [], {}
    for tok in tokens:
        if "=" in tok:
            key, _, value = tok.partition("=")
            if not key or not value:
                raise VGDLSyntaxError(f"malformed parameter {tok!r}", line)
            params[key] = value
        else:
            if params:
                raise VGDLSyntaxError(f"unexpected token {tok!r} after parameters", line)
            plain.append(tok)
    return plain, params


def _is_identifier(tok: str) -> bool:
    return tok.replace("_", "a").isalnum() and not tok[0].isdigit()


def _parse_int(value: str, what: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise VGDLSyntaxError(f"{what} must be an integer, got {value!r}", line) from None


def _parse_bool(value: str, line: int) -> bool:
    if value in ("True", "true"):
        return True
    if value in ("False", "false"):
        return False
    raise VGDLSyntaxError(f"expected True or False, got {value!r}", line)


# -- sections -----------------------------------------------------------------


def _parse_sprites(nodes: list) -> dict:
    raw: dict = {}

    def visit(node: _Line, parent: Optional[str], depth: int) -> None:
        left, sep, right = node.text.partition(">")
        name = left.strip()
        if not sep or not _is_identifier(name) or " " in name:
            raise VGDLSyntaxError(f"expected 'name > [Class] key=value ...', got {node.text!r}", node.number)
        if name == EOS:
            raise VGDLSyntaxError("EOS is reserved", node.number)
        if name in raw:
            raise VGDLSyntaxError(f"duplicate sprite {name!r}", node.number)
        plain, params = _split_params(right.split(), node.number)
        if len(plain) > 1:
            raise VGDLSyntaxError(f"more than one class token in {node.text!r}", node.number)
        token = plain[0] if plain else None
        raw[name] = (token, params, parent, depth, [c for c in node.children])
        for child in node.children:
            visit(child, name, depth + 1)

    for node in nodes:
        visit(node, None, 0)

    sprites: dict = {}
    for name, (token, params, parent, depth, children) in raw.items():
        child_names = tuple(c.text.partition(">")[0].strip() for c in children)
        if token is not None:
            cls = token
        elif child_names:
            cls = ABSTRACT
        else:
            cls = DEFAULT_CLASS
            anc = parent
            while anc is not None:
                anc_token = raw[anc][0]
                if anc_token is not None:
                    cls = anc_token
                    break
                anc = raw[anc][2]
        sprites[name] = SpriteDef(name, cls, params, parent, depth, token, child_names)
    return sprites


def _parse_interactions(nodes: list) -> list:
    out = []
    for node in nodes:
        if node.children:
            raise VGDLSyntaxError("interactions cannot be nested", node.children[0].number)
        left, sep, right = node.text.partition(">")
        names = left.split()
        plain, params = _split_params(right.split(), node.number)
        if not sep or len(names) < 2 or len(plain) != 1:
            raise VGDLSyntaxError(f"expected 'a b > effect key=value ...', got {node.text!r}", node.number)
        delta = _parse_int(params["scoreChange"], "scoreChange", node.number) if "scoreChange" in params else 0
        for obj in names[1:]:
            out.append(InteractionDef(names[0], obj, plain[0], dict(params), delta, node.number))
    return out


def _parse_terminations(nodes: list) -> list:
    out = []
    for node in nodes:
        if node.children:
            raise VGDLSyntaxError("terminations cannot be nested", node.children[0].number)
        plain, params = _split_params(node.text.split(), node.number)
        if len(plain) != 1 or plain[0] not in TERMINATION_KINDS:
            raise VGDLSyntaxError(f"unknown termination {node.text!r}", node.number)
        kind = plain[0]
        limit = _parse_int(params.get("limit", "0"), "limit", node.number)
        win = _parse_bool(params.get("win", "False"), node.number)
        if kind == "SpriteCounter":
            sprites = (params["stype"],) if "stype" in params else ()
            if len(sprites) != 1:
                raise VGDLSyntaxError("SpriteCounter needs exactly one stype", node.number)
        elif kind == "MultiSpriteCounter":
            keys = sorted((k for k in params if k.startswith("stype") and k[5:].isdigit()), key=lambda k: int(k[5:]))
            sprites = tuple(params[k] for k in keys)
            if len(sprites) < 2:
                raise VGDLSyntaxError("MultiSpriteCounter needs stype1, stype2, ...", node.number)
        else:
            sprites = ()
            if any(k.startswith("stype") for k in params):
                raise VGDLSyntaxError("Timeout takes no sprites", node.number)
            if limit <= 0:
                raise VGDLSyntaxError("Timeout needs limit > 0", node.number)
        out.append(TerminationDef(kind, sprites, limit, win, node.number))
    return out


def _parse_mapping(nodes: list) -> dict:
    out: dict = {}
    for node in nodes:
        left, sep, right = node.text.partition(">")
        char = left.strip()
        names = right.split()
        if not sep or len(char) != 1 or not names:
            raise VGDLSyntaxError(f"expected 'c > sprite ...', got {node.text!r}", node.number)
        if char in out:
            raise VGDLSyntaxError(f"duplicate mapping for {char!r}", node.number)
        out[char] = tuple(names)
    return out


def _check_references(game: GameDescription, lines: dict) -> None:
    known = game.sprites
    for i in game.interactions:
        if i.subject not in known:
            raise VGDLReferenceError(f"unknown sprite {i.subject!r} in interaction", i.line)
        if i.object not in known and i.object != EOS:
            raise VGDLReferenceError(f"unknown sprite {i.object!r} in interaction", i.line)
        stype = i.params.get("stype")
        if stype is not None and stype not in known:
            raise VGDLReferenceError(f"unknown sprite {stype!r} in interaction", i.line)
    for t in game.terminations:
        for name in t.sprites:
            if name not in known:
                raise VGDLReferenceError(f"unknown sprite {name!r} in termination", t.line)
    for char, names in game.level_mapping.items():
        for name in names:
            if name not in known:
                raise VGDLReferenceError(f"unknown sprite {name!r} in mapping for {char!r}", lines.get(char))
    for sd in known.values():
        stype = sd.params.get("stype")
        if stype is not None and stype not in known:
            raise VGDLReferenceError(f"unknown stype {stype!r} on sprite {sd.name!r}")


def _check_invariants(game: GameDescription) -> None:
    if not game.avatars:
        raise InvalidGameError("the sprite set declares no avatar")
    if not any(t.win for t in game.terminations):
        raise InvalidGameError("no winning termination")
    if not any(not t.win for t in game.terminations):
        raise InvalidGameError("no losing termination")


def parse_game(source: str, name: str = "game", validate: bool = True) -> GameDescription:
    """Parse a game description.

    Raises VGDLSyntaxError (with line number) on malformed text,
    VGDLReferenceError on unknown sprite names and MissingSectionError when
    one of the four sections is absent.  With ``validate`` the game-level
    invariants (an avatar, a win and a lose termination) are enforced too.
    """
    if not source or not source.strip():
        raise VGDLSyntaxError("empty game description")
    tree = _build_tree(_logical_lines(source))
    if len(tree) != 1:
        raise VGDLSyntaxError("expected a single BasicGame root", tree[1].number if len(tree) > 1 else None)
    root = tree[0]
    head, root_params = _split_params(root.text.split(), root.number)
    if head != ["BasicGame"]:
        raise VGDLSyntaxError(f"expected 'BasicGame', got {root.text!r}", root.number)

    sections: dict = {}
    for node in root.children:
        if node.text not in SECTIONS:
            raise VGDLSyntaxError(f"unknown section {node.text!r}", node.number)
        if node.text in sections:
            raise VGDLSyntaxError(f"duplicate section {node.text!r}", node.number)
        sections[node.text] = node
    for sec in SECTIONS:
        if sec not in sections:
            raise MissingSectionError(f"missing section {sec}")

    sprites = _parse_sprites(sections["SpriteSet"].children)
    interactions = _parse_interactions(sections["InteractionSet"].children)
    terminations = _parse_terminations(sections["TerminationSet"].children)
    mapping = _parse_mapping(sections["LevelMapping"].children)
    mapping_lines = {n.text.partition(">")[0].strip(): n.number for n in sections["LevelMapping"].children}

    game = GameDescription(sprites, tuple(interactions), tuple(terminations), mapping, name, root_params)
    _check_references(game, mapping_lines)
    if validate:
        _check_invariants(game)
    return game


def parse_level(source: str, game: GameDescription, name: str = "level") -> LevelGrid:
    rows = source.splitlines()
    while rows and not rows[-1].strip():
        rows.pop()
    if not rows:
        raise RaggedLevelError("empty level")
    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise RaggedLevelError(f"row {r} has length {len(row)}, expected {width}")
        for c, ch in enumerate(row):
            if ch != " " and ch not in game.level_mapping:
                raise UnmappedCharError(ch, r, c)
    return LevelGrid(width, len(rows), tuple(rows), name)


def hierarchy_depth(game: GameDescription) -> int:
    return max((sd.depth for sd in game.sprites.values()), default=0)


# -- pretty printing ------------------------------------------------------------


def _fmt_params(params: dict) -> str:
    return " ".join(f"{k}={v}" for k, v in params.items())


def format_game(game: GameDescription, indent: str = "    ") -> str:
    """Render ``game`` back to source; ``parse_game(format_game(g)) == g``."""
    out = ["BasicGame" + (" " + _fmt_params(game.params) if game.params else "")]

    def sprite(name: str, level: int) -> None:
        sd = game.sprites[name]
        parts = [sd.class_token] if sd.class_token else []
        if sd.params:
            parts.append(_fmt_params(sd.params))
        out.append(indent * level + f"{name} > " + " ".join(parts))
        for child in sd.children:
            sprite(child, level + 1)

    out.append(indent + "SpriteSet")
    for sd in game.sprites.values():
        if sd.parent is None:
            sprite(sd.name, 2)
    out.append(indent + "InteractionSet")
    for i in game.interactions:
        params = dict(i.params)
        if i.score_delta and "scoreChange" not in params:
            params["scoreChange"] = str(i.score_delta)
        tail = (" " + _fmt_params(params)) if params else ""
        out.append(indent * 2 + f"{i.subject} {i.object} > {i.effect}{tail}")
    out.append(indent + "TerminationSet")
    for t in game.terminations:
        if t.kind == "SpriteCounter":
            stypes = f"stype={t.sprites[0]} "
        elif t.kind == "MultiSpriteCounter":
            stypes = "".join(f"stype{k}={s} " for k, s in enumerate(t.sprites, start=1))
        else:
            stypes = ""
        out.append(indent * 2 + f"{t.kind} {stypes}limit={t.limit} win={t.win}")
    out.append(indent + "LevelMapping")
    for char, names in game.level_mapping.items():
        out.append(indent * 2 + f"{char} > " + " ".join(names))
    return "\n".join(out) + "\n"
