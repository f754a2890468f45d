"""
Codings between words, pictures, grids and runs

pair is the Cantor diagonal bijection b(i, j) = (i+j-2)(i+j-1)/2 + i on
positive integers. Pictures map to grids by dropping the border (phi), words
code pictures through b, and pictures read row by row give omega^2-words.
"""

import math
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from .errors import InvariantViolation, NonPositive, OutOfWindow, PrefixTooShort, ShapeMismatch, WidthOverflow
from .models import Coord, PictureWindow, RunAssignment, WindowKind

GridWindow = np.ndarray  # grid[j, i] = x(i, j), 0-based, row j bottom-to-top


def pair(i: int, j: int) -> int:
    if i < 1 or j < 1:
        raise NonPositive(f"pair needs positive arguments, got ({i}, {j})")
    return (i + j - 2) * (i + j - 1) // 2 + i


def unpair(k: int) -> Tuple[int, int]:
    if k < 1:
        raise NonPositive(f"unpair needs a positive argument, got {k}")
    d = (1 + math.isqrt(8 * k - 7)) // 2
    while d * (d - 1) // 2 >= k:
        d -= 1
    while d * (d + 1) // 2 < k:
        d += 1
    i = k - d * (d - 1) // 2
    return i, d + 1 - i


def word_to_picture(prefix: Sequence[str], n: int) -> PictureWindow:
    """Depth-n window of p(i, j) = sigma(b(i, j))"""
    if n < 1:
        raise NonPositive(f"depth must be at least 1, got {n}")
    required = pair(n, n)
    if len(prefix) < required:
        raise PrefixTooShort(required, len(prefix))
    return PictureWindow.omega_prefix(
        [[prefix[pair(i, j) - 1] for i in range(1, n + 1)] for j in range(1, n + 1)]
    )


def picture_to_word(p: PictureWindow) -> Dict[int, str]:
    """The word positions a window determines, position -> letter"""
    return {pair(i, j): p.at(i, j) for i, j in p.interior()}


def slice_family(prefix: Sequence[str], i: int) -> Sequence[str]:
    """sigma_i(j) = sigma(b(i, j)) for every j the prefix determines"""
    if i < 1:
        raise NonPositive(f"slice index must be positive, got {i}")
    letters = []
    j = 1
    while pair(i, j) <= len(prefix):
        letters.append(prefix[pair(i, j) - 1])
        j += 1
    return "".join(letters) if isinstance(prefix, str) else letters


def slices_distinct(prefix: Sequence[str], count: int) -> bool:
    """True iff the prefix already tells the first count slices apart pairwise"""
    slices = [slice_family(prefix, i) for i in range(1, count + 1)]
    for k in range(count):
        for j in range(k + 1, count):
            if not any(a != b for a, b in zip(slices[k], slices[j])):
                return False
    return True


def phi(p: PictureWindow) -> GridWindow:
    """Drop the border: phi(p)(i, j) = p(i+1, j+1)"""
    if p.kind != WindowKind.OMEGA_PREFIX:
        raise ShapeMismatch("phi applies to omega prefixes")
    return np.array(p.interior_rows(), dtype=object)


def phi_inverse(grid: GridWindow) -> PictureWindow:
    grid = np.asarray(grid, dtype=object)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise ShapeMismatch(f"expected a square grid, got shape {grid.shape}")
    return PictureWindow.omega_prefix(grid.tolist())


class DistanceReport(BaseModel):
    """
    Distance between two finite views of infinite objects

    exact means the difference found is provably the first one; otherwise the
    true distance lies between value and upper_bound.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: Fraction
    exact: bool
    upper_bound: Fraction = Field(..., description="Certified bound on the true distance")


def grid_distance(x: GridWindow, y: GridWindow) -> DistanceReport:
    """2^-n with n the least anti-diagonal i+j (0-based) where x and y differ"""
    x, y = np.asarray(x, dtype=object), np.asarray(y, dtype=object)
    if x.shape != y.shape or x.ndim != 2:
        raise ShapeMismatch(f"grids of shapes {x.shape} and {y.shape} cannot be compared")
    visible = min(x.shape)  # anti-diagonals below this index lie fully inside the window
    rows, cols = np.nonzero(x != y)
    outside = Fraction(1, 2 ** visible)
    if len(rows) == 0:
        return DistanceReport(value=Fraction(0), exact=False, upper_bound=outside)
    n = int((rows + cols).min())
    value = Fraction(1, 2 ** n)
    if n < visible:
        return DistanceReport(value=value, exact=True, upper_bound=value)
    return DistanceReport(value=value, exact=False, upper_bound=outside)


def word_distance(u: Sequence[str], v: Sequence[str]) -> DistanceReport:
    """2^-l with l the length of the longest common prefix"""
    if len(u) != len(v):
        raise ShapeMismatch(f"words of lengths {len(u)} and {len(v)} cannot be compared")
    for index, (a, b) in enumerate(zip(u, v)):
        if a != b:
            value = Fraction(1, 2 ** index)
            return DistanceReport(value=value, exact=True, upper_bound=value)
    return DistanceReport(value=Fraction(0), exact=False, upper_bound=Fraction(1, 2 ** len(u)))


def picture_distance(p: PictureWindow, q: PictureWindow) -> DistanceReport:
    return grid_distance(phi(p), phi(q))


class OrdinalIndex(NamedTuple):
    """The ordinal omega*n + m"""
    n: int
    m: int


def ordinal_index(position: int, depth: int) -> OrdinalIndex:
    """Ordinal of the position-th letter (0-based) of a depth-wide row-by-row stream"""
    if position < 0 or depth < 1:
        raise OutOfWindow(f"no ordinal for position {position} at depth {depth}")
    return OrdinalIndex(position // depth, position % depth)


def row_major(p: PictureWindow, o: OrdinalIndex) -> str:
    """p-bar(omega*n + m) = p(m+1, n+1)"""
    if not (0 <= o.n < p.height and 0 <= o.m < p.width):
        raise OutOfWindow(f"omega*{o.n}+{o.m} lies outside the {p.width}x{p.height} window")
    return p.at(o.m + 1, o.n + 1)


def row_major_stream(p: PictureWindow) -> List[str]:
    """Rows bottom-to-top, each left-to-right"""
    return [row_major(p, OrdinalIndex(n, m)) for n in range(p.height) for m in range(p.width)]


def window_from_stream(stream: Sequence[str], depth: int) -> PictureWindow:
    if depth < 1 or len(stream) != depth * depth:
        raise ShapeMismatch(f"a depth-{depth} window needs {depth * depth} letters, got {len(stream)}")
    return PictureWindow.omega_prefix([list(stream[n * depth:(n + 1) * depth]) for n in range(depth)])


class RunCode(BaseModel):
    """Fixed-width big-endian state indices of a run, cells listed in pairing order"""
    model_config = ConfigDict(frozen=True)

    bits: str = Field(..., pattern=r"^[01]*$")
    width: int = Field(..., ge=1)
    depth: int = Field(..., ge=1)
    state_order: Tuple[str, ...]

    @property
    def cells(self) -> int:
        return len(self.bits) // self.width


def code_width(state_count: int) -> int:
    return max(1, (state_count - 1).bit_length())


def coded_cells(depth: int) -> List[Coord]:
    """Cells (i, j) >= (1, 1) whose whole pairing prefix lies in the depth-n window"""
    return [unpair(k) for k in range(1, depth * (depth + 1) // 2 + 1)]


def encode_run(run: RunAssignment, state_order: Sequence[str], width: Optional[int] = None) -> RunCode:
    state_order = tuple(state_order)
    width = code_width(len(state_order)) if width is None else width
    if width < 1 or len(state_order) > 2 ** width:
        raise WidthOverflow(f"{len(state_order)} states do not fit in {width} bits")
    index = {state: k for k, state in enumerate(state_order)}
    cols, rows = run.shape
    depth = min(cols, rows) - 1
    if depth < 1:
        raise ShapeMismatch("a run code needs a window of depth at least 1")
    chunks = []
    for i, j in coded_cells(depth):
        state = run.at(i, j)
        if state not in index:
            raise InvariantViolation(f"state {state!r} at ({i},{j}) is missing from the state order")
        chunks.append(format(index[state], f"0{width}b"))
    return RunCode(bits="".join(chunks), width=width, depth=depth, state_order=state_order)


def decode_run(code: RunCode) -> Dict[Coord, str]:
    """States of the cells the code determines"""
    if len(code.bits) % code.width:
        raise WidthOverflow(f"{len(code.bits)} bits are not a multiple of the width {code.width}")
    cells: Dict[Coord, str] = {}
    for k in range(code.cells):
        value = int(code.bits[k * code.width:(k + 1) * code.width], 2)
        if value >= len(code.state_order):
            raise WidthOverflow(f"state index {value} exceeds the {len(code.state_order)} declared states")
        cells[unpair(k + 1)] = code.state_order[value]
    return cells
