"""
Data models for pictures, tiles and tiling systems
Using Pydantic for validation and immutability

Coordinates are (column, row): p(i, j) is the letter in column i of row j,
rows counted bottom-to-top starting at the border row 0.
"""

from enum import Enum
from typing import Any, Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import DomainMismatch, InvariantViolation, ShapeMismatch

BORDER = "#"
SYNTAX = frozenset("#,()/{}")
MACHINE_RESERVED = SYNTAX | frozenset(":|")

Cell = Tuple[str, str]  # (letter, state)
Coord = Tuple[int, int]


def check_token(token: str, what: str, reserved: FrozenSet[str] = SYNTAX) -> None:
    """Names must be non-empty and free of characters used by the file formats"""
    if not token or any(ch in reserved or ch.isspace() for ch in token):
        raise InvariantViolation(f"invalid {what} name {token!r}")


class Square(NamedTuple):
    """A 2x2 block, laid out as  b3 b4 / b1 b2"""
    b1: Any  # bottom-left
    b2: Any  # bottom-right
    b3: Any  # top-left
    b4: Any  # top-right


class WindowKind(str, Enum):
    FINITE = "finite"
    OMEGA_PREFIX = "omega-prefix"


class AcceptanceVariant(str, Enum):
    A = "a"
    E = "e"
    BUCHI = "buchi"
    MULLER = "muller"


class AcceptanceMode(str, Enum):
    GLOBAL = "global"
    DIAGONAL = "diagonal"


class Alphabet(BaseModel):
    """Picture alphabet; the border symbol # is implicit and never a letter"""
    model_config = ConfigDict(frozen=True)

    letters: Tuple[str, ...] = Field(..., description="Picture letters in declaration order")

    @model_validator(mode="after")
    def _check_letters(self):
        if not self.letters:
            raise InvariantViolation("alphabet must contain at least one letter")
        if len(set(self.letters)) != len(self.letters):
            raise InvariantViolation(f"duplicate letters in alphabet {self.letters}")
        for letter in self.letters:
            if letter == BORDER:
                raise InvariantViolation("the border symbol # cannot be a picture letter")
            check_token(letter, "letter")
        return self

    @property
    def hat(self) -> Tuple[str, ...]:
        """Letters plus the border symbol"""
        return self.letters + (BORDER,)

    def __contains__(self, letter: str) -> bool:
        return letter in self.letters

    def __len__(self) -> int:
        return len(self.letters)


class PictureWindow(BaseModel):
    """
    A finite picture, or the depth-n prefix of an omega-picture

    rows[j][i] holds p(i, j) over the full domain, border included:
    finite m x n pictures span {0..m+1} x {0..n+1}, omega prefixes of
    depth n span {0..n} x {0..n} with a border on row 0 and column 0 only.
    """
    model_config = ConfigDict(frozen=True)

    kind: WindowKind
    width: int = Field(..., ge=0, description="m for finite pictures, n for omega prefixes")
    height: int = Field(..., ge=0, description="n for both kinds")
    rows: Tuple[Tuple[str, ...], ...] = Field(..., description="Full domain, bottom row first")

    @model_validator(mode="after")
    def _check_shape(self):
        cols, nrows = self.domain_shape
        if len(self.rows) != nrows or any(len(row) != cols for row in self.rows):
            raise ShapeMismatch(f"{self.kind.value} window {self.width}x{self.height} needs {nrows} rows of {cols} cells")
        if self.kind == WindowKind.FINITE and (self.width == 0) != (self.height == 0):
            raise ShapeMismatch(f"finite picture of size ({self.width},{self.height}) is not allowed")
        if self.kind == WindowKind.OMEGA_PREFIX and (self.height < 1 or self.width != self.height):
            raise ShapeMismatch("omega prefixes are square windows of depth at least 1")
        for j, row in enumerate(self.rows):
            for i, letter in enumerate(row):
                if self.is_border(i, j) != (letter == BORDER):
                    expected = "the border symbol" if self.is_border(i, j) else "a picture letter"
                    raise ShapeMismatch(f"cell ({i},{j}) must hold {expected}, found {letter!r}")
        return self

    @classmethod
    def finite(cls, interior_rows: Sequence[Sequence[str]]) -> "PictureWindow":
        """Finite picture from its interior rows, bottom row first"""
        n = len(interior_rows)
        m = len(interior_rows[0]) if n else 0
        if n and m == 0:
            raise ShapeMismatch(f"finite picture of size (0,{n}) is not allowed")
        edge = (BORDER,) * (m + 2)
        body = tuple((BORDER,) + tuple(row) + (BORDER,) for row in interior_rows)
        return cls(kind=WindowKind.FINITE, width=m, height=n, rows=(edge,) + body + (edge,))

    @classmethod
    def omega_prefix(cls, interior_rows: Sequence[Sequence[str]]) -> "PictureWindow":
        """Depth-n prefix of an omega-picture from n interior rows of n letters, bottom row first"""
        n = len(interior_rows)
        body = tuple((BORDER,) + tuple(row) for row in interior_rows)
        return cls(kind=WindowKind.OMEGA_PREFIX, width=n, height=n, rows=((BORDER,) * (n + 1),) + body)

    @property
    def depth(self) -> int:
        return self.height

    @property
    def domain_shape(self) -> Tuple[int, int]:
        """(number of columns, number of rows) of the full domain"""
        if self.kind == WindowKind.FINITE:
            return self.width + 2, self.height + 2
        return self.width + 1, self.height + 1

    def is_border(self, i: int, j: int) -> bool:
        if i == 0 or j == 0:
            return True
        if self.kind == WindowKind.FINITE:
            return i == self.width + 1 or j == self.height + 1
        return False

    def at(self, i: int, j: int) -> str:
        return self.rows[j][i]

    def coordinates(self) -> Iterator[Coord]:
        cols, nrows = self.domain_shape
        for j in range(nrows):
            for i in range(cols):
                yield i, j

    def interior(self) -> List[Coord]:
        """Non-border cells, row by row"""
        return [(i, j) for (i, j) in self.coordinates() if not self.is_border(i, j)]

    def interior_rows(self) -> List[List[str]]:
        cols, nrows = self.domain_shape
        if self.kind == WindowKind.FINITE:
            return [list(self.rows[j][1:cols - 1]) for j in range(1, nrows - 1)]
        return [list(self.rows[j][1:]) for j in range(1, nrows)]

    def letters(self) -> FrozenSet[str]:
        return frozenset(self.at(i, j) for i, j in self.interior())

    def restrict(self, depth: int) -> "PictureWindow":
        """Prefix of smaller depth of an omega prefix"""
        if self.kind != WindowKind.OMEGA_PREFIX or not 1 <= depth <= self.depth:
            raise ShapeMismatch(f"cannot restrict {self.kind.value} window of depth {self.depth} to {depth}")
        return PictureWindow.omega_prefix([row[:depth] for row in self.interior_rows()[:depth]])


class RunAssignment(BaseModel):
    """A state for every cell of a window's full domain, rows[j][i] = rho(i, j)"""
    model_config = ConfigDict(frozen=True)

    rows: Tuple[Tuple[str, ...], ...] = Field(..., description="States over the full domain, bottom row first")

    @classmethod
    def from_cells(cls, cells: Dict[Coord, str], shape: Tuple[int, int]) -> "RunAssignment":
        cols, nrows = shape
        try:
            return cls(rows=tuple(tuple(cells[(i, j)] for i in range(cols)) for j in range(nrows)))
        except KeyError as e:
            raise DomainMismatch(f"run is missing a state for cell {e.args[0]}")

    @classmethod
    def constant(cls, state: str, shape: Tuple[int, int]) -> "RunAssignment":
        cols, nrows = shape
        return cls(rows=tuple((state,) * cols for _ in range(nrows)))

    @property
    def shape(self) -> Tuple[int, int]:
        return (len(self.rows[0]) if self.rows else 0), len(self.rows)

    def at(self, i: int, j: int) -> str:
        return self.rows[j][i]

    def states(self) -> FrozenSet[str]:
        return frozenset(state for row in self.rows for state in row)

    def restrict(self, depth: int) -> "RunAssignment":
        """Restriction to the depth-n prefix of an omega run"""
        return RunAssignment(rows=tuple(row[:depth + 1] for row in self.rows[:depth + 1]))


class TilingSystem(BaseModel):
    """A tiling system (Q, Sigma, Delta); tiles are squares of (letter, state) cells"""
    model_config = ConfigDict(frozen=True)

    states: Tuple[str, ...] = Field(..., description="State set Q in declaration order")
    alphabet: Alphabet
    tiles: FrozenSet[Square] = Field(default_factory=frozenset, description="Tile set Delta")

    @model_validator(mode="after")
    def _check_tiles(self):
        if not self.states:
            raise InvariantViolation("a tiling system needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise InvariantViolation(f"duplicate states in {self.states}")
        for state in self.states:
            check_token(state, "state")
        known_states = set(self.states)
        known_letters = set(self.alphabet.hat)
        for tile in self.tiles:
            for cell in tile:
                if not isinstance(cell, tuple) or len(cell) != 2:
                    raise InvariantViolation(f"tile entry {cell!r} is not a (letter, state) pair")
                letter, state = cell
                if letter not in known_letters:
                    raise InvariantViolation(f"tile uses unknown letter {letter!r}")
                if state not in known_states:
                    raise InvariantViolation(f"tile uses undeclared state {state!r}")
        return self

    @property
    def cell_alphabet(self) -> List[Cell]:
        """Gamma = Sigma-hat x Q"""
        return [(letter, state) for letter in self.alphabet.hat for state in self.states]

    def state_index(self) -> Dict[str, int]:
        return {state: index for index, state in enumerate(self.states)}


class AcceptanceCondition(BaseModel):
    """A / E / Buchi on a set F, or Muller on a family of sets, globally or on the diagonal"""
    model_config = ConfigDict(frozen=True)

    variant: AcceptanceVariant
    accepting: FrozenSet[str] = Field(default_factory=frozenset, description="F for A, E and Buchi")
    muller_sets: Tuple[FrozenSet[str], ...] = Field(default=(), description="The Muller family")
    mode: AcceptanceMode = AcceptanceMode.GLOBAL

    @classmethod
    def buchi(cls, accepting, mode: AcceptanceMode = AcceptanceMode.GLOBAL) -> "AcceptanceCondition":
        return cls(variant=AcceptanceVariant.BUCHI, accepting=frozenset(accepting), mode=mode)

    def check_against(self, system: TilingSystem) -> None:
        known = set(system.states)
        unknown = set(self.accepting) - known
        for family_set in self.muller_sets:
            unknown |= set(family_set) - known
        if unknown:
            raise InvariantViolation(f"acceptance condition names undeclared states {sorted(unknown)}")
