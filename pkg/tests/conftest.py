"""
Shared fixtures: the sample machine corpus and small tiling systems
"""

import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings

# Add parent directory to path so we can import omegatile modules
sys.path.append(str(Path(__file__).parent.parent))

from omegatile.core.data import DataLoader
from omegatile.core.grid import squares_of_picture
from omegatile.core.models import (
    AcceptanceCondition, Alphabet, PictureWindow, RunAssignment, Square, TilingSystem,
)
from omegatile.core.reductions import CompiledSystem

settings.register_profile("omegatile", derandomize=True, max_examples=60, deadline=None)
settings.load_profile("omegatile")

DATA_PATH = Path(__file__).parent.parent / "data"


@pytest.fixture(scope="session")
def loader():
    return DataLoader(str(DATA_PATH))


@pytest.fixture(scope="session")
def machines(loader):
    return loader.load_machines()


@pytest.fixture(scope="session")
def m_right(machines):
    return machines["m_right"]


@pytest.fixture(scope="session")
def m_a(machines):
    return machines["m_a"]


@pytest.fixture(scope="session")
def m_choice(machines):
    return machines["m_choice"]


@pytest.fixture(scope="session")
def m_reject(machines):
    return machines["m_reject"]


@pytest.fixture(scope="session")
def m_stay(machines):
    return machines["m_stay"]


@pytest.fixture(scope="session")
def m_back(machines):
    return machines["m_back"]


@pytest.fixture(scope="session")
def only_a(loader):
    return loader.load_system("only_a")


@pytest.fixture(scope="session")
def has_b(loader):
    return loader.load_system("has_b")


def omega(rows):
    """Depth-n window from interior rows written bottom row first"""
    return PictureWindow.omega_prefix([list(row) for row in rows])


def random_window(rng: random.Random, depth: int, letters="ab") -> PictureWindow:
    return omega(["".join(rng.choice(letters) for _ in range(depth)) for _ in range(depth)])


def random_system(rng: random.Random, depth: int, states=("s", "t"), letters=("a", "b"),
                  noise: int = 6, drop: int = 2) -> TilingSystem:
    """
    Tiles of one random run on a random window, with a few tiles removed and
    a few random squares added, so that runs exist on some windows only
    """
    window = random_window(rng, depth, letters)
    cols, nrows = window.domain_shape
    run = RunAssignment(rows=tuple(tuple(rng.choice(states) for _ in range(cols)) for _ in range(nrows)))
    tiles = sorted(squares_of_picture(window, run))
    rng.shuffle(tiles)
    tiles = tiles[drop:]
    cells = [(letter, state) for letter in letters + ("#",) for state in states]
    for _ in range(noise):
        tiles.append(Square(*(rng.choice(cells) for _ in range(4))))
    return TilingSystem(states=tuple(states), alphabet=Alphabet(letters=tuple(letters)), tiles=frozenset(tiles))


def compiled(ts: TilingSystem, name: str, accepting=("s",)) -> CompiledSystem:
    return CompiledSystem(system=ts, condition=AcceptanceCondition.buchi(accepting), provenance=name)
