from functools import lru_cache
from pathlib import Path

import pytest

from atdelfi.pipeline import discover_levels, games_dir, load_game, load_levels
from atdelfi.vgdl import parse_game

FIXTURES = Path(__file__).parent / "fixtures"


@lru_cache(maxsize=None)
def fixture_game(name: str):
    return parse_game((FIXTURES / f"{name}.vgdl").read_text(), name=name)


@lru_cache(maxsize=None)
def bundled(name: str):
    game = load_game(name)
    return game, tuple(load_levels(game, discover_levels(games_dir() / f"{name}.vgdl")))


@pytest.fixture
def aliens():
    return bundled("aliens")[0]


@pytest.fixture
def aliens_levels():
    return bundled("aliens")[1]
