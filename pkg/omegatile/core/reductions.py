"""
Compilers between machines and tiling systems

compile_K turns a machine with 1' acceptance into a Buchi tiling system
recognizing the pictures whose first row is an accepted word and whose other
rows are constant 'a'. compile_H adds every picture that is not of that shape,
and shuffle_machines builds the machine reading two interleaved words.
"""

import logging
import re
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .errors import AlphabetMismatch, InvariantViolation, LengthMismatch, NonPositive, PrefixTooShort
from .models import (
    BORDER, AcceptanceCondition, AcceptanceVariant, Alphabet, PictureWindow, RunAssignment, Square, TilingSystem,
)
from .turing_models import Configuration, MachineAcceptance, Move, Transition, TuringMachine

logger = logging.getLogger(__name__)

FILL_LETTER = "a"
BORDER_STATE = "brd"
WAIT_STATE = "wait"
FOUND_STATE = "found"
THETA_START = "theta~start"

_TAG = re.compile(r"^(\d+\|)+")


class CompiledSystem(BaseModel):
    """A tiling system together with its acceptance condition and origin"""
    model_config = ConfigDict(frozen=True)

    system: TilingSystem
    condition: AcceptanceCondition
    provenance: str = Field(..., description="Which compiler produced the system from which inputs")


def lift_word(prefix: Sequence[str], n: int) -> PictureWindow:
    """Depth-n window of the picture with first row prefix and all other rows 'a'"""
    if n < 1:
        raise NonPositive(f"depth must be at least 1, got {n}")
    if len(prefix) < n:
        raise PrefixTooShort(n, len(prefix))
    rows = [list(prefix[:n])] + [[FILL_LETTER] * n for _ in range(n - 1)]
    return PictureWindow.omega_prefix(rows)


# --- compile_K ---------------------------------------------------------------

class TapeCell(NamedTuple):
    symbol: str
    flag: str  # "R": the head is further right in this row, "N": it is not

    @property
    def name(self) -> str:
        return f"t:{self.symbol}:{self.flag}"


class HeadCell(NamedTuple):
    state: str
    symbol: str
    choice: Transition  # the step this configuration takes next

    @property
    def name(self) -> str:
        return f"h:{self.state}:{self.symbol}:{self.choice.state}:{self.choice.symbol}:{self.choice.move.value}"


RowCell = Union[TapeCell, HeadCell]


class _KBuilder:
    """Local rules relating a row of cells to the next configuration's row"""

    def __init__(self, m: TuringMachine):
        self.m = m
        self.targets = {Move.L: set(), Move.R: set()}
        for (state, _), choices in m.transitions.items():
            if state not in m.accepting:
                continue
            for choice in choices:
                if choice.state in m.accepting and choice.move in self.targets:
                    self.targets[choice.move].add(choice.state)

    def heads(self, state: str, symbol: str) -> List[HeadCell]:
        if state not in self.m.accepting:
            return []
        return [HeadCell(state, symbol, choice) for choice in self.m.delta(state, symbol)
                if choice.state in self.m.accepting]

    def cells(self) -> List[RowCell]:
        tape = [TapeCell(symbol, flag) for symbol in self.m.tape_alphabet for flag in "RN"]
        heads = [h for state in self.m.states for symbol in self.m.tape_alphabet for h in self.heads(state, symbol)]
        return tape + heads

    @staticmethod
    def follows(left: Optional[RowCell], right: RowCell) -> bool:
        """Horizontal consistency; left None stands for the border column"""
        if left is None or (isinstance(left, TapeCell) and left.flag == "R"):
            return isinstance(right, HeadCell) or right.flag == "R"
        return isinstance(right, TapeCell) and right.flag == "N"

    def _after(self, head: HeadCell) -> List[RowCell]:
        choice = head.choice
        if choice.move == Move.S:
            return self.heads(choice.state, choice.symbol)
        return [TapeCell(choice.symbol, "R" if choice.move == Move.R else "N")]

    def _arrivals(self, move: Move, symbol: str) -> List[RowCell]:
        return [h for state in self.m.states if state in self.targets[move] for h in self.heads(state, symbol)]

    def from_left(self, left: Optional[RowCell], mid: RowCell) -> List[RowCell]:
        """Cells allowed above mid, judging from mid and its left neighbour"""
        if isinstance(mid, HeadCell):
            return self._after(mid)
        if isinstance(left, HeadCell):
            if left.choice.move == Move.R:
                return self.heads(left.choice.state, mid.symbol)
            return [TapeCell(mid.symbol, "N")]
        if mid.flag == "N":
            return [TapeCell(mid.symbol, "N")]
        return [TapeCell(mid.symbol, "R")] + self._arrivals(Move.L, mid.symbol)

    def from_right(self, mid: RowCell, right: RowCell) -> List[RowCell]:
        """Cells allowed above mid, judging from mid and its right neighbour"""
        if isinstance(mid, HeadCell):
            return self._after(mid)
        if isinstance(right, HeadCell):
            if right.choice.move == Move.L:
                return self.heads(right.choice.state, mid.symbol)
            return [TapeCell(mid.symbol, "R")]
        if mid.flag == "R":
            return [TapeCell(mid.symbol, "R")]
        return [TapeCell(mid.symbol, "N")] + self._arrivals(Move.R, mid.symbol)


def compile_K(m: TuringMachine) -> CompiledSystem:
    """
    Buchi tiling system whose runs on lifted words are accepting computations of m

    Row j of a run holds the j-th configuration on columns 1, 2, ...: the
    scanned cell carries the state, the symbol and the transition taken next,
    every other cell its symbol and on which side the head is. Row 0 seeds the
    initial configuration from the first-row letters. Only accepting machine
    states are representable, and the head states are the accepting ones.
    """
    if FILL_LETTER not in m.input_alphabet:
        raise AlphabetMismatch(f"machine {m.name} must read the letter {FILL_LETTER!r}")
    builder = _KBuilder(m)
    cells = builder.cells()
    sigma = m.input_alphabet
    brd = (BORDER, BORDER_STATE)
    tiles: Set[Square] = set()

    # origin and row 0: the initial configuration appears on row 1
    for x in sigma:
        for head in builder.heads(m.initial, x):
            tiles.add(Square(brd, brd, brd, (x, head.name)))
        starts = [h.name for h in builder.heads(m.initial, x)] + [TapeCell(x, "N").name]
        for y in sigma:
            for start in starts:
                tiles.add(Square(brd, brd, (x, start), (y, TapeCell(y, "N").name)))

    # column 0: a left move from cell 1 has no tile
    for mid in cells:
        if not builder.follows(None, mid):
            continue
        if isinstance(mid, HeadCell) and mid.choice.move == Move.L:
            continue
        for above in builder.from_left(None, mid):
            for x in sigma:
                tiles.add(Square(brd, (x, mid.name), brd, (FILL_LETTER, above.name)))

    # interior: the upper pair is the successor of the lower pair
    for left in cells:
        for right in cells:
            if not builder.follows(left, right):
                continue
            uppers = [
                (top_left, top_right)
                for top_left in builder.from_right(left, right)
                for top_right in builder.from_left(left, right)
                if builder.follows(top_left, top_right)
            ]
            for x1 in sigma:
                for x2 in sigma:
                    for top_left, top_right in uppers:
                        tiles.add(Square((x1, left.name), (x2, right.name),
                                         (FILL_LETTER, top_left.name), (FILL_LETTER, top_right.name)))

    states = (BORDER_STATE,) + tuple(cell.name for cell in cells)
    accepting = frozenset(cell.name for cell in cells if isinstance(cell, HeadCell))
    system = TilingSystem(states=states, alphabet=Alphabet(letters=sigma), tiles=frozenset(tiles))
    logger.debug("compile_K(%s): %d states, %d tiles", m.name, len(states), len(tiles))
    return CompiledSystem(system=system, condition=AcceptanceCondition.buchi(accepting), provenance=f"K({m.name})")


def decode_cell(state: str) -> Optional[RowCell]:
    """Inverse of the K state naming; None for border and non-K states"""
    parts = _TAG.sub("", state).split(":")
    if parts[0] == "t" and len(parts) == 3:
        return TapeCell(parts[1], parts[2])
    if parts[0] == "h" and len(parts) == 6:
        return HeadCell(parts[1], parts[2], Transition(parts[3], parts[4], Move(parts[5])))
    return None


def decode_rows(run: RunAssignment) -> List[Optional[Configuration]]:
    """
    Configuration encoded by each row 1..n of a run of a compiled K system

    Rows whose head lies outside the window, and rows of other branches of a
    union, decode to None.
    """
    decoded: List[Optional[Configuration]] = []
    for row in run.rows[1:]:
        cells = [decode_cell(state) for state in row[1:]]
        heads = [i for i, cell in enumerate(cells, 1) if isinstance(cell, HeadCell)]
        if len(heads) != 1 or any(cell is None for cell in cells):
            decoded.append(None)
            continue
        head = cells[heads[0] - 1]
        decoded.append(Configuration(state=head.state, tape=tuple(c.symbol for c in cells), head=heads[0]))
    return decoded


# --- complement of the lifted words ------------------------------------------

def complement_first_row_ts(alphabet: Union[Alphabet, Sequence[str]]) -> CompiledSystem:
    """
    Buchi system for the pictures with a letter other than 'a' above row 1

    Deterministic: a cell is 'found' when it carries such a letter or its
    left or lower neighbour is 'found', so the accepting state fills the
    whole quadrant above and right of a witness.
    """
    if not isinstance(alphabet, Alphabet):
        alphabet = Alphabet(letters=tuple(alphabet))
    if FILL_LETTER not in alphabet:
        raise InvariantViolation(f"alphabet {alphabet.letters} must contain {FILL_LETTER!r}")
    sigma = alphabet.letters
    brd = (BORDER, BORDER_STATE)
    inner = (WAIT_STATE, FOUND_STATE)

    def mark(letter: str, *neighbours: str) -> str:
        return FOUND_STATE if letter != FILL_LETTER or FOUND_STATE in neighbours else WAIT_STATE

    tiles: Set[Square] = set()
    for x in sigma:
        tiles.add(Square(brd, brd, brd, (x, WAIT_STATE)))
        for y in sigma:
            tiles.add(Square(brd, brd, (x, WAIT_STATE), (y, WAIT_STATE)))
    for x in sigma:
        for s2 in inner:
            for y in sigma:
                tiles.add(Square(brd, (x, s2), brd, (y, mark(y, s2))))
    for x1 in sigma:
        for x2 in sigma:
            for x3 in sigma:
                for s1 in inner:
                    for s2 in inner:
                        for s3 in inner:
                            for y in sigma:
                                tiles.add(Square((x1, s1), (x2, s2), (x3, s3), (y, mark(y, s2, s3))))

    system = TilingSystem(states=(BORDER_STATE, WAIT_STATE, FOUND_STATE), alphabet=alphabet, tiles=frozenset(tiles))
    return CompiledSystem(system=system, condition=AcceptanceCondition.buchi({FOUND_STATE}),
                          provenance=f"complement-first-row({','.join(sigma)})")


# --- union -------------------------------------------------------------------

def _tagged(tag: int, state: str) -> str:
    return f"{tag}|{state}"


def union_ts(t1: CompiledSystem, t2: CompiledSystem) -> CompiledSystem:
    """Disjoint union: each run lives entirely in one component"""
    if set(t1.system.alphabet.letters) != set(t2.system.alphabet.letters):
        raise AlphabetMismatch(f"alphabets {t1.system.alphabet.letters} and {t2.system.alphabet.letters} differ")
    c1, c2 = t1.condition, t2.condition
    if c1.variant != c2.variant or c1.mode != c2.mode:
        raise InvariantViolation(f"cannot unite {c1.variant.value}/{c1.mode.value} with {c2.variant.value}/{c2.mode.value}")

    states: List[str] = []
    tiles: Set[Square] = set()
    accepting: Set[str] = set()
    muller: List[FrozenSet[str]] = []
    for tag, part in ((1, t1), (2, t2)):
        states.extend(_tagged(tag, q) for q in part.system.states)
        for tile in part.system.tiles:
            tiles.add(Square(*((letter, _tagged(tag, q)) for letter, q in tile)))
        accepting.update(_tagged(tag, q) for q in part.condition.accepting)
        muller.extend(frozenset(_tagged(tag, q) for q in family_set) for family_set in part.condition.muller_sets)

    system = TilingSystem(states=tuple(states), alphabet=t1.system.alphabet, tiles=frozenset(tiles))
    condition = AcceptanceCondition(variant=c1.variant, accepting=frozenset(accepting),
                                    muller_sets=tuple(muller), mode=c1.mode)
    return CompiledSystem(system=system, condition=condition, provenance=f"union({t1.provenance},{t2.provenance})")


def compile_H(m: TuringMachine) -> CompiledSystem:
    """K(m) united with the system for pictures that are not lifted words"""
    united = union_ts(compile_K(m), complement_first_row_ts(m.input_alphabet))
    return united.model_copy(update={"provenance": f"H({m.name})"})


# --- shuffles ----------------------------------------------------------------

def shuffle_words(x: Sequence[str], y: Sequence[str]) -> Union[str, List[str]]:
    """x(1) y(1) x(2) y(2) ... for equal-length prefixes"""
    if len(x) != len(y):
        raise LengthMismatch(f"cannot shuffle prefixes of lengths {len(x)} and {len(y)}")
    merged = [letter for pair in zip(x, y) for letter in pair]
    return "".join(merged) if isinstance(x, str) and isinstance(y, str) else merged


def deinterleave(w: Sequence[str]) -> Tuple[Sequence[str], Sequence[str]]:
    """Odd and even positions of w (1-based)"""
    return w[0::2], w[1::2]


def shuffle_machines(mL: TuringMachine, mZ: TuringMachine,
                     mode: MachineAcceptance = MachineAcceptance.ONE_PRIME) -> TuringMachine:
    """
    Machine accepting w when mL accepts its odd letters or mZ its even letters

    The first step picks a branch: stay on cell 1 for mL, or move to cell 2
    for mZ. Each branch then simulates its machine on every other cell; a
    simulated left or right move is the real move followed by one more move in
    the same direction through an intermediate state, which is accepting
    exactly when the state it leads to is.

    With 1' acceptance the start state is accepting, since every state of an
    accepted run must be. With Buchi acceptance it is not: it occurs once, so
    it would only add an accepting visit that neither branch made.
    """
    if set(mL.input_alphabet) != set(mZ.input_alphabet):
        raise AlphabetMismatch(f"{mL.name} reads {mL.input_alphabet} but {mZ.name} reads {mZ.input_alphabet}")
    tape = tuple(dict.fromkeys(mL.tape_alphabet + mZ.tape_alphabet))
    states: List[str] = [THETA_START]
    accepting: Set[str] = {THETA_START} if mode == MachineAcceptance.ONE_PRIME else set()
    transitions: Dict[Tuple[str, str], Set[Transition]] = {}

    def add(state: str, symbol: str, choice: Transition) -> None:
        transitions.setdefault((state, symbol), set()).add(choice)

    for tag, machine in (("L", mL), ("Z", mZ)):
        # "<tag>~<state>": the tag ends at the first '~', so names stay distinct
        # whatever the source state names contain
        def named(q: str, kind: str = "") -> str:
            return f"{tag}{kind}~{q}"

        intermediates: List[str] = []
        for q in machine.states:
            states.append(named(q))
            if q in machine.accepting:
                accepting.add(named(q))
        for (q, symbol), choices in machine.transitions.items():
            for choice in choices:
                if choice.move == Move.S:
                    add(named(q), symbol, Transition(named(choice.state), choice.symbol, Move.S))
                    continue
                middle = named(choice.state, "r" if choice.move == Move.R else "l")
                add(named(q), symbol, Transition(middle, choice.symbol, choice.move))
                if middle not in intermediates:
                    intermediates.append(middle)
                    if choice.state in machine.accepting:
                        accepting.add(middle)
                    for s in tape:
                        add(middle, s, Transition(named(choice.state), s, choice.move))
        states.extend(sorted(intermediates))

    for x in mL.input_alphabet:
        add(THETA_START, x, Transition(f"L~{mL.initial}", x, Move.S))
        add(THETA_START, x, Transition(f"Z~{mZ.initial}", x, Move.R))

    return TuringMachine(
        name=f"theta({mL.name},{mZ.name})",
        states=tuple(states),
        input_alphabet=mL.input_alphabet,
        tape_alphabet=tape,
        initial=THETA_START,
        accepting=frozenset(accepting),
        transitions={key: frozenset(value) for key, value in transitions.items()},
    )


def compile_H_theta(mL: TuringMachine, mZ: TuringMachine) -> CompiledSystem:
    """The composite reduction H after theta"""
    return compile_H(shuffle_machines(mL, mZ))
