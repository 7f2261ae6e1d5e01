import json

import pytest

from atdelfi.analysis import analyze
from atdelfi.graph import ACTION, CONDITION, OBJECT, TIME, build_graph, graph_stats
from atdelfi.instructions import render_mechanic
from atdelfi.vgdl import EOS

from conftest import bundled, fixture_game

GAMES = [("bundled", n) for n in ("aliens", "butterflies", "dungeon", "survive")] + [
    ("fixture", n) for n in ("goomba", "chain3", "pacman", "spawn_lose", "hazard_free",
                             "negative_score", "sibling_scores", "synthetic_58")
]


def load(kind, name):
    return bundled(name)[0] if kind == "bundled" else fixture_game(name)


@pytest.mark.parametrize("kind,name", GAMES)
def test_node_count_identity(kind, name):
    game = load(kind, name)
    g = build_graph(game)
    synthesized = sum(m.origin.kind in ("InputRule", "Behavior") for m in g.mechanics.values())
    uses_eos = any(i.object == EOS for i in game.interactions)
    rules = len(game.interactions) + len(game.terminations) + synthesized
    assert len(g.nodes) == (len(game.sprites) + 1 + uses_eos) + 2 * rules
    assert sum(n.kind == CONDITION for n in g.nodes.values()) == rules
    assert sum(n.kind == ACTION for n in g.nodes.values()) == rules


@pytest.mark.parametrize("kind,name", GAMES)
def test_edges_mirror_mechanics(kind, name):
    g = build_graph(load(kind, name))
    expected = set()
    for m in g.mechanics.values():
        expected |= {(i, m.condition) for i in m.inputs}
        expected.add((m.condition, m.action))
        expected |= {(m.action, o) for o in m.outputs}
    assert set(g.edges) == expected
    into = {}
    for a, b in g.edges:
        into.setdefault(b, []).append(a)
    for node in g.nodes.values():
        if node.kind == ACTION:
            (src,) = into[node.id]
            assert g.nodes[src].kind == CONDITION
        if node.kind == CONDITION:
            assert into.get(node.id), node
            assert all(g.nodes[s].kind == OBJECT for s in into[node.id])


@pytest.mark.parametrize("kind,name", GAMES)
def test_every_rule_has_one_mechanic(kind, name):
    game = load(kind, name)
    g = build_graph(game)
    origins = [(m.origin.kind, m.origin.index) for m in g.mechanics.values()]
    for idx in range(len(game.interactions)):
        assert origins.count(("Interaction", idx)) == 1
    for idx in range(len(game.terminations)):
        assert origins.count(("Termination", idx)) == 1
    for m in g.mechanics.values():
        if m.origin.kind == "Interaction":
            inter = game.interactions[m.origin.index]
            assert g.action(m)["score_delta"] == m.score_delta == inter.score_delta


@pytest.mark.parametrize("kind,name", GAMES)
def test_build_is_deterministic(kind, name):
    game = load(kind, name)
    assert json.dumps(build_graph(game).to_dict()) == json.dumps(build_graph(game).to_dict())


def test_goomba_topology():
    g = build_graph(fixture_game("goomba"))
    m = g.mechanic(0)
    node = {n.label: n.id for n in g.nodes.values() if n.kind == OBJECT}
    assert set(m.inputs) == {node["goomba"], node["player"]}
    assert g.condition_kind(m) == "Collision"
    assert g.action_kind(m) == "KillSprite"
    assert m.outputs == (node["goomba"],)
    touching = [e for e in g.edges if m.condition in e or m.action in e]
    assert sorted(touching) == sorted([(node["goomba"], m.condition), (node["player"], m.condition),
                                       (m.condition, m.action), (m.action, node["goomba"])])


def test_time_feeds_only_timeouts():
    for game in (bundled("survive")[0], bundled("aliens")[0], fixture_game("hazard_free")):
        g = build_graph(game)
        time = g.sprite_nodes[TIME]
        for a, b in g.edges:
            if a == time:
                assert g.nodes[b].data["condition"] == "Timeout"


def test_aliens_input_rule():
    game = bundled("aliens")[0]
    g = build_graph(game)
    (mid,) = g.input_rules
    m = g.mechanic(mid)
    assert g.condition_kind(m) == "PlayerInput"
    assert g.action(m)["produces"] == "sam"
    assert render_mechanic(m, g) == "If you press space, then avatar (FlakAvatar) will shoot a sam (missile)."


def test_spawner_behaviours():
    g = build_graph(bundled("aliens")[0])
    behaviours = {m.origin.sprite: g.action(m)["produces"] for m in g.mechanics.values()
                  if m.origin.kind == "Behavior"}
    assert behaviours == {"alienGreen": "bomb", "alienBlue": "bomb",
                          "portalSlow": "alienBlue", "portalFast": "alienGreen"}


def stats_for(game):
    g = build_graph(game)
    return graph_stats(game, g, analyze(g))


def test_stats_constructed_58():
    with pytest.warns(UserWarning):
        s = stats_for(fixture_game("synthetic_58"))
    assert (s.interaction_count, s.merged_interactions) == (58, 12)


def test_stats_empty_interactions():
    s = stats_for(fixture_game("hazard_free"))
    assert (s.interaction_count, s.merged_interactions) == (0, 0)


def test_stats_aliens():
    s = stats_for(bundled("aliens")[0])
    assert s.point_rules == 2
    assert s.win_length == 3
    assert s.hierarchy_depth == 1
    assert s.sprite_count == len(bundled("aliens")[0].sprites)
