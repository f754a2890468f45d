"""
Tiles, runs and the forbidden-pattern view of tiling systems
"""

import itertools
import logging
from collections import defaultdict
from typing import Dict, FrozenSet, Iterator, Optional, Sequence, Set, Tuple

from .config import get_config
from .errors import DomainMismatch, ShapeMismatch, SizeOverflow
from .models import BORDER, Cell, Coord, PictureWindow, RunAssignment, Square, TilingSystem

logger = logging.getLogger(__name__)

Configuration = Tuple[Tuple[Cell, ...], ...]


def combine(s: Square, t: Square) -> Square:
    """Positionwise pairing of two squares"""
    return Square(*zip(s, t))


def unzip(s: Square) -> Tuple[Square, Square]:
    """Split a square of pairs into its two projections"""
    return Square(*(entry[0] for entry in s)), Square(*(entry[1] for entry in s))


def square_at(rows: Sequence[Sequence], i: int, j: int) -> Square:
    """The square whose bottom-left corner is (i, j)"""
    return Square(rows[j][i], rows[j][i + 1], rows[j + 1][i], rows[j + 1][i + 1])


def _check_domain(p: PictureWindow, run: RunAssignment) -> None:
    if run.shape != p.domain_shape:
        raise DomainMismatch(f"run covers {run.shape} cells per (column, row) but the picture domain is {p.domain_shape}")


def zip_configuration(p: PictureWindow, run: RunAssignment) -> Configuration:
    """Pair every letter of p with its state under run"""
    _check_domain(p, run)
    return tuple(tuple(zip(letters, states)) for letters, states in zip(p.rows, run.rows))


def tile_squares(config: Configuration) -> Iterator[Tuple[Coord, Square]]:
    """Every 2x2 square fully contained in the configuration, keyed by its bottom-left corner"""
    nrows = len(config)
    cols = len(config[0]) if nrows else 0
    for j in range(nrows - 1):
        for i in range(cols - 1):
            yield (i, j), square_at(config, i, j)


def first_violation(ts: TilingSystem, p: PictureWindow, run: RunAssignment) -> Optional[Coord]:
    """Bottom-left corner of the first square (row by row) that is not a tile, or None"""
    for coord, square in tile_squares(zip_configuration(p, run)):
        if square not in ts.tiles:
            return coord
    return None


def validate_run(ts: TilingSystem, p: PictureWindow, run: RunAssignment) -> bool:
    """True iff every square of letters and states contained in the window is a tile of ts"""
    return first_violation(ts, p, run) is None


def check_configuration(config: Configuration, tiles: FrozenSet[Square]) -> bool:
    """True iff the configuration avoids every forbidden pattern, i.e. all its squares are tiles"""
    nrows = len(config)
    if nrows and any(len(row) != len(config[0]) for row in config):
        raise ShapeMismatch("configuration rows must have equal length")
    return all(square in tiles for _, square in tile_squares(config))


def forbidden_complement(ts: TilingSystem, bound: Optional[int] = None) -> FrozenSet[Square]:
    """Gamma^4 minus Delta, materialized only below the enumeration bound"""
    bound = get_config().enumeration_bound if bound is None else bound
    gamma = ts.cell_alphabet
    size = len(gamma) ** 4
    if size > bound:
        raise SizeOverflow(size, bound)
    logger.debug("Enumerating %d squares for the forbidden complement", size)
    return frozenset(
        square for square in map(lambda entries: Square(*entries), itertools.product(gamma, repeat=4))
        if square not in ts.tiles
    )


def _at_most_one(groups: Dict[tuple, Set[str]]) -> bool:
    return all(len(values) <= 1 for values in groups.values())


def is_deterministic(ts: TilingSystem) -> bool:
    """
    Deterministic tiling systems in the sense of bottom-left-to-top-right evaluation

    On any picture: at most one tile covers the origin, the top-right state is a
    function of the letters and the three other states, and border states are
    functions of their predecessor on the border.
    """
    origin: Dict[tuple, Set[Square]] = defaultdict(set)
    interior: Dict[tuple, Set[str]] = defaultdict(set)
    left_border: Dict[tuple, Set[str]] = defaultdict(set)
    bottom_border: Dict[tuple, Set[str]] = defaultdict(set)

    for tile in ts.tiles:
        letters = tuple(cell[0] for cell in tile)
        (_, q1), (_, q2), (_, q3), (_, q4) = tile
        interior[(letters, q1, q2, q3)].add(q4)
        if letters[0] == letters[1] == letters[2] == BORDER:
            origin[letters].add(tile)
        if letters[0] == letters[2] == BORDER:
            left_border[(letters, q1)].add(q3)
        if letters[0] == letters[1] == BORDER:
            bottom_border[(letters, q1)].add(q2)

    if any(len(tiles) > 1 for tiles in origin.values()):
        return False
    return _at_most_one(interior) and _at_most_one(left_border) and _at_most_one(bottom_border)


def squares_of_picture(p: PictureWindow, run: RunAssignment) -> Set[Square]:
    """The tiles a run needs on a picture; a system with exactly these squares accepts the run"""
    return {square for _, square in tile_squares(zip_configuration(p, run))}
