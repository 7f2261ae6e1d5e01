"""Brute-force reference implementations used to check the analysis code."""
import random

from atdelfi.vgdl import parse_game


def ancestors(game, name):
    out = []
    sd = game.sprites.get(name)
    while sd is not None and sd.parent is not None:
        out.append(sd.parent)
        sd = game.sprites[sd.parent]
    return out


def descends(game, name, other):
    return name == other or other in ancestors(game, name)


def originals(graph, m):
    """Rule-file mechanics behind ``m`` (itself unless merged)."""
    if not m.merged_from:
        return [m]
    found = []
    for sub in m.merged_from:
        found += originals(graph, graph.retired[sub])
    return found


def successors(graph):
    game = graph.game
    mechs = graph.mechanics
    out = {}
    for a in mechs.values():
        produced = [graph.nodes[o].label for x in originals(graph, a) for o in x.outputs]
        out[a.id] = set()
        for b in mechs.values():
            wanted = [p for y in originals(graph, b) for p in y.participants]
            if any(descends(game, o, p) for o in produced for p in wanted):
                out[a.id].add(b.id)
    return out


def starts(graph, avatar):
    game = graph.game
    out = set()
    for m in graph.mechanics.values():
        if m.origin.kind == "InputRule":
            if m.origin.sprite == avatar:
                out.add(m.id)
        elif any(descends(game, avatar, p) for x in originals(graph, m) for p in x.participants):
            out.add(m.id)
    return out


def simple_paths(succ, start, target):
    """Every simple path from ``start`` to ``target``, by exhaustive DFS."""
    found = []

    def dfs(node, path):
        if node == target:
            found.append(tuple(path))
            return
        for nxt in succ[node]:
            if nxt not in path:
                path.append(nxt)
                dfs(nxt, path)
                path.pop()

    dfs(start, [start])
    return found


def win_paths(graph, strategy="longest-shortest"):
    """(mechanics, avatar, complete) per win terminal, in terminal id order."""
    succ = successors(graph)
    terminals = sorted(
        (m for m in graph.mechanics.values()
         if m.origin.kind == "Termination" and graph.action_kind(m) == "Win"),
        key=lambda m: m.id,
    )
    out = []
    for term in terminals:
        if graph.condition_kind(term) == "Timeout":
            out.append(((term.id,), None, True))
            continue
        per_avatar = []
        for avatar in graph.game.avatars:
            paths = [p for s in starts(graph, avatar) for p in simple_paths(succ, s, term.id)]
            if paths:
                per_avatar.append((min(paths, key=lambda p: (len(p), p)), avatar))
        if not per_avatar:
            out.append(((term.id,), None, False))
            continue
        if strategy == "longest-shortest":
            path, avatar = min(per_avatar, key=lambda pa: (-len(pa[0]), pa[0]))
        else:
            path, avatar = min(per_avatar, key=lambda pa: (len(pa[0]), pa[0]))
        out.append((path, avatar, True))
    return out


EFFECTS = ("killSprite", "killSprite", "transformTo", "stepBack", "spawn")


def random_game_source(rng: random.Random, max_mechanics: int = 12) -> str:
    """A small valid game whose unmerged graph has at most ``max_mechanics`` mechanics."""
    while True:
        n_roots = rng.randint(2, 4)
        sprites = []  # (name, parent, class or None)
        for r in range(n_roots):
            cls = rng.choice(["Immovable", "RandomNPC", "Missile", None])
            kids = rng.choice([0, 0, 2, 3])
            if cls is None and kids == 0:
                cls = "Immovable"
            sprites.append((f"r{r}", None, cls))
            for k in range(kids):
                sprites.append((f"r{r}k{k}", f"r{r}", None))
        n_av = rng.randint(1, 2)
        shooters = []
        for a in range(n_av):
            shoots = rng.random() < 0.4
            cls = "ShootAvatar" if shoots else "MovingAvatar"
            sprites.append((f"av{a}", None, cls))
            if shoots:
                shooters.append(f"av{a}")
        names = [s[0] for s in sprites]
        inter = []
        for _ in range(rng.randint(2, 8)):
            a, b = rng.choice(names), rng.choice(names)
            effect = rng.choice(EFFECTS)
            extra = f" stype={rng.choice(names)}" if effect in ("transformTo", "spawn") else ""
            if rng.random() < 0.3:
                extra += f" scoreChange={rng.choice([-1, 1, 2])}"
            inter.append(f"        {a} {b} > {effect}{extra}")
        terms = []
        for _ in range(rng.randint(1, 2)):
            terms.append(f"        SpriteCounter stype={rng.choice(names)} limit=0 win=True")
        if rng.random() < 0.2:
            terms.append("        Timeout limit=50 win=True")
        terms.append(f"        SpriteCounter stype={rng.choice([n for n in names if n.startswith('av')])} win=False")
        total = len(inter) + len(terms) + len(shooters)
        if total > max_mechanics:
            continue
        lines = ["BasicGame", "    SpriteSet"]
        for name, parent, cls in sprites:
            indent = "            " if parent else "        "
            params = f" stype={rng.choice(names)}" if name in shooters else ""
            lines.append(f"{indent}{name} > {cls or ''}{params}".rstrip())
        lines += ["    InteractionSet"] + inter + ["    TerminationSet"] + terms
        lines += ["    LevelMapping", "        A > av0"]
        return "\n".join(lines) + "\n"


def random_game(seed: int):
    return parse_game(random_game_source(random.Random(seed)), name=f"random{seed}")
