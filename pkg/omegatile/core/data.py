"""
Text formats for machines, tiling systems, pictures, runs and stream codes,
and loading of the sample corpus under data/
"""

import re
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from .config import get_config
from .encodings import RunCode
from .errors import InvariantViolation, OmegaTileError, ParseError, suggest
from .models import (
    AcceptanceCondition, AcceptanceMode, AcceptanceVariant, Alphabet, PictureWindow, RunAssignment, Square,
    TilingSystem, WindowKind,
)
from .turing_models import Move, Transition, TuringMachine

MACHINE_HEADER = "turing-machine v1"
SYSTEM_HEADER = "tiling-system v1"
PBAR_HEADER = "pbar v1"
RHOBAR_HEADER = "rhobar v1"

_CELL = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")
_TRANSITION = re.compile(r"^(\S+)\s+(\S+)\s*->\s*(\S+)\s+(\S+)\s+([LRS])$")


class SystemDocument(BaseModel):
    """A parsed tiling-system file: the system plus its optional acceptance data"""
    model_config = ConfigDict(frozen=True)

    system: TilingSystem
    condition: Optional[AcceptanceCondition] = None
    provenance: Optional[str] = None


class RunDocument(NamedTuple):
    kind: WindowKind
    run: RunAssignment


class StreamDocument(NamedTuple):
    """A row-by-row letter stream of a depth-n window"""
    stream: List[str]
    depth: int


def _content_lines(text: str) -> List[Tuple[int, str]]:
    """Non-empty lines with // comments removed, numbered from 1"""
    lines = []
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("//", 1)[0].strip()
        if line:
            lines.append((number, line))
    return lines


def _expect_header(lines: List[Tuple[int, str]], header: str) -> None:
    if not lines:
        raise ParseError(1, f"empty input, expected '{header}'")
    number, line = lines[0]
    if line != header:
        raise ParseError(number, f"expected header '{header}', found '{line}'")


def _split_key(line: str) -> Tuple[Optional[str], str]:
    match = re.match(r"^([a-z-]+):\s*(.*)$", line)
    if match:
        return match.group(1), match.group(2).strip()
    return None, line


def _require(fields: Dict[str, Tuple[int, str]], key: str, last_line: int) -> Tuple[int, str]:
    if key not in fields:
        raise ParseError(last_line, f"missing '{key}:' line")
    return fields[key]


def _check_name(name: str, known: Sequence[str], what: str) -> None:
    if name not in known:
        hint = suggest(name, known)
        detail = f"undeclared {what} {name!r}"
        raise InvariantViolation(f"{detail}, did you mean {hint!r}?" if hint else detail)


# --- machines ----------------------------------------------------------------

def parse_machine(text: str) -> TuringMachine:
    lines = _content_lines(text)
    _expect_header(lines, MACHINE_HEADER)
    fields: Dict[str, Tuple[int, str]] = {}
    rules: List[Tuple[int, re.Match]] = []
    for number, line in lines[1:]:
        key, value = _split_key(line)
        if key is not None:
            if key not in ("name", "states", "input", "tape", "initial", "accepting"):
                raise ParseError(number, f"unknown field '{key}:'")
            if key in fields:
                raise ParseError(number, f"duplicate '{key}:' line")
            fields[key] = (number, value)
            continue
        match = _TRANSITION.match(line)
        if not match:
            raise ParseError(number, f"expected a transition 'q x -> p y M', found '{line}'")
        rules.append((number, match))

    last = lines[-1][0] + 1
    states = _require(fields, "states", last)[1].split()
    input_alphabet = _require(fields, "input", last)[1].split()
    tape_alphabet = _require(fields, "tape", last)[1].split()
    initial = _require(fields, "initial", last)[1]
    accepting = fields.get("accepting", (0, ""))[1].split()
    name = fields.get("name", (0, "machine"))[1] or "machine"

    for state in accepting + [initial]:
        _check_name(state, states, "state")
    transitions: Dict[Tuple[str, str], set] = {}
    for number, match in rules:
        source, symbol, target, written, move = match.groups()
        for state in (source, target):
            _check_name(state, states, "state")
        for tape_symbol in (symbol, written):
            _check_name(tape_symbol, tape_alphabet, "tape symbol")
        transitions.setdefault((source, symbol), set()).add(Transition(target, written, Move(move)))

    return TuringMachine(
        name=name,
        states=tuple(states),
        input_alphabet=tuple(input_alphabet),
        tape_alphabet=tuple(tape_alphabet),
        initial=initial,
        accepting=frozenset(accepting),
        transitions={key: frozenset(value) for key, value in transitions.items()},
    )


def serialize_machine(m: TuringMachine) -> str:
    lines = [
        MACHINE_HEADER,
        f"name: {m.name}",
        f"states: {' '.join(m.states)}",
        f"input: {' '.join(m.input_alphabet)}",
        f"tape: {' '.join(m.tape_alphabet)}",
        f"initial: {m.initial}",
        f"accepting: {' '.join(q for q in m.states if q in m.accepting)}".rstrip(),
    ]
    for state in m.states:
        for symbol in m.tape_alphabet:
            for choice in m.delta(state, symbol):
                lines.append(f"{state} {symbol} -> {choice.state} {choice.symbol} {choice.move.value}")
    return "\n".join(lines) + "\n"


# --- tiling systems ----------------------------------------------------------

def _parse_tile(number: int, line: str) -> Square:
    body = line[len("tile"):]
    if "/" not in body:
        raise ParseError(number, "a tile needs a top row and a bottom row separated by '/'")
    top, bottom = body.split("/", 1)
    top_cells = _CELL.findall(top)
    bottom_cells = _CELL.findall(bottom)
    if len(top_cells) != 2 or len(bottom_cells) != 2:
        raise ParseError(number, "each tile row needs exactly two (letter,state) cells")
    b3, b4 = top_cells
    b1, b2 = bottom_cells
    return Square(b1, b2, b3, b4)


def _parse_muller(number: int, value: str) -> Tuple[FrozenSet[str], ...]:
    sets = re.findall(r"\{([^{}]*)\}", value)
    if re.sub(r"\{[^{}]*\}", "", value).strip():
        raise ParseError(number, "Muller sets must be written as {q0 q1} {q2}")
    return tuple(frozenset(s.split()) for s in sets)


def parse_system_document(text: str) -> SystemDocument:
    lines = _content_lines(text)
    _expect_header(lines, SYSTEM_HEADER)
    fields: Dict[str, Tuple[int, str]] = {}
    tiles: List[Tuple[int, Square]] = []
    for number, line in lines[1:]:
        if line.startswith("tile"):
            tiles.append((number, _parse_tile(number, line)))
            continue
        key, value = _split_key(line)
        if key not in ("states", "alphabet", "accepting", "muller", "condition", "mode", "provenance"):
            raise ParseError(number, f"unexpected line '{line}'")
        if key in fields:
            raise ParseError(number, f"duplicate '{key}:' line")
        fields[key] = (number, value)

    last = lines[-1][0] + 1
    states = _require(fields, "states", last)[1].split()
    letters = _require(fields, "alphabet", last)[1].split()
    known_letters = letters + ["#"]
    for number, tile in tiles:
        for letter, state in tile:
            _check_name(letter, known_letters, "letter")
            _check_name(state, states, "state")
    system = TilingSystem(states=tuple(states), alphabet=Alphabet(letters=tuple(letters)),
                          tiles=frozenset(tile for _, tile in tiles))

    condition = None
    if any(key in fields for key in ("accepting", "muller", "condition", "mode")):
        number, raw_variant = fields.get("condition", (0, "muller" if "muller" in fields else "buchi"))
        number_mode, raw_mode = fields.get("mode", (0, "global"))
        try:
            variant = AcceptanceVariant(raw_variant)
            mode = AcceptanceMode(raw_mode)
        except ValueError as e:
            raise ParseError(number or number_mode, str(e))
        accepting = fields.get("accepting", (0, ""))[1].split()
        muller = _parse_muller(*fields["muller"]) if "muller" in fields else ()
        for state in accepting + [q for family_set in muller for q in family_set]:
            _check_name(state, states, "state")
        condition = AcceptanceCondition(variant=variant, accepting=frozenset(accepting),
                                        muller_sets=muller, mode=mode)
    provenance = fields["provenance"][1] if "provenance" in fields else None
    return SystemDocument(system=system, condition=condition, provenance=provenance)


def parse_tiling_system(text: str) -> TilingSystem:
    return parse_system_document(text).system


def _cell_text(cell) -> str:
    return f"({cell[0]},{cell[1]})"


def serialize_tiling_system(ts: TilingSystem, condition: Optional[AcceptanceCondition] = None,
                            provenance: Optional[str] = None) -> str:
    lines = [SYSTEM_HEADER]
    if provenance:
        lines.append(f"provenance: {provenance}")
    lines.append(f"states: {' '.join(ts.states)}")
    lines.append(f"alphabet: {' '.join(ts.alphabet.letters)}")
    if condition is not None:
        lines.append(f"condition: {condition.variant.value}")
        lines.append(f"mode: {condition.mode.value}")
        if condition.accepting:
            lines.append(f"accepting: {' '.join(q for q in ts.states if q in condition.accepting)}")
        if condition.muller_sets:
            rendered = [
                "{" + " ".join(q for q in ts.states if q in family_set) + "}" for family_set in condition.muller_sets
            ]
            lines.append(f"muller: {' '.join(rendered)}")
    order = ts.state_index()
    letters = {letter: k for k, letter in enumerate(ts.alphabet.hat)}

    def tile_key(tile: Square):
        return tuple((letters[letter], order[state]) for letter, state in tile)

    for b1, b2, b3, b4 in sorted(ts.tiles, key=tile_key):
        lines.append(f"tile {_cell_text(b3)} {_cell_text(b4)} / {_cell_text(b1)} {_cell_text(b2)}")
    return "\n".join(lines) + "\n"


# --- pictures and runs -------------------------------------------------------

def _parse_shape(number: int, line: str, kind_word: str) -> Tuple[WindowKind, int, int]:
    parts = line.split()
    if len(parts) < 2 or parts[0] != kind_word:
        raise ParseError(number, f"expected '{kind_word} finite m n' or '{kind_word} omega-prefix n'")
    try:
        if parts[1] == WindowKind.FINITE.value and len(parts) == 4:
            return WindowKind.FINITE, int(parts[2]), int(parts[3])
        if parts[1] == WindowKind.OMEGA_PREFIX.value and len(parts) == 3:
            return WindowKind.OMEGA_PREFIX, int(parts[2]), int(parts[2])
    except ValueError:
        pass
    raise ParseError(number, f"malformed {kind_word} header '{line}'")


def _grid_rows(lines: List[Tuple[int, str]], count: int, width: int, what: str) -> List[List[str]]:
    body = lines[1:]
    if len(body) != count:
        where = body[count][0] if len(body) > count else (lines[-1][0] + 1)
        raise ParseError(where, f"expected {count} rows of {what}, found {len(body)}")
    rows = []
    for number, line in body:
        row = line.split()
        if len(row) != width:
            raise ParseError(number, f"expected {width} {what} per row, found {len(row)}")
        rows.append(row)
    return rows


def parse_picture(text: str) -> PictureWindow:
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty picture file")
    kind, width, height = _parse_shape(lines[0][0], lines[0][1], "picture")
    rows = _grid_rows(lines, height, width, "letters")
    try:
        if kind == WindowKind.FINITE:
            return PictureWindow.finite(rows)
        return PictureWindow.omega_prefix(rows)
    except OmegaTileError as e:
        raise ParseError(lines[0][0], str(e))


def serialize_picture(p: PictureWindow) -> str:
    if p.kind == WindowKind.FINITE:
        header = f"picture finite {p.width} {p.height}"
    else:
        header = f"picture omega-prefix {p.depth}"
    return "\n".join([header] + [" ".join(row) for row in p.interior_rows()]) + "\n"


def parse_run(text: str) -> RunDocument:
    """A run over the full window domain, border rows and columns included"""
    lines = _content_lines(text)
    if not lines:
        raise ParseError(1, "empty run file")
    kind, width, height = _parse_shape(lines[0][0], lines[0][1], "run")
    extra = 2 if kind == WindowKind.FINITE else 1
    rows = _grid_rows(lines, height + extra, width + extra, "states")
    return RunDocument(kind, RunAssignment(rows=tuple(tuple(row) for row in rows)))


def serialize_run(run: RunAssignment, kind: WindowKind) -> str:
    cols, nrows = run.shape
    if kind == WindowKind.FINITE:
        header = f"run finite {cols - 2} {nrows - 2}"
    else:
        header = f"run omega-prefix {nrows - 1}"
    return "\n".join([header] + [" ".join(row) for row in run.rows]) + "\n"


# --- stream codes ------------------------------------------------------------

def serialize_pbar(stream: Sequence[str], alphabet: Sequence[str], depth: int) -> str:
    rows = [" ".join(stream[n * depth:(n + 1) * depth]) for n in range(depth)]
    return "\n".join([PBAR_HEADER, f"alphabet: {' '.join(alphabet)}", f"depth: {depth}"] + rows) + "\n"


def parse_pbar(text: str) -> StreamDocument:
    lines = _content_lines(text)
    _expect_header(lines, PBAR_HEADER)
    fields = dict(_split_key(line) for _, line in lines[1:3])
    try:
        depth = int(fields["depth"])
    except (KeyError, ValueError):
        raise ParseError(lines[0][0] + 1, "expected 'alphabet:' and 'depth:' lines")
    stream = [letter for _, line in lines[3:] for letter in line.split()]
    return StreamDocument(stream, depth)


def serialize_rhobar(code: RunCode) -> str:
    return "\n".join([
        RHOBAR_HEADER,
        f"states: {' '.join(code.state_order)}",
        f"width: {code.width}",
        f"depth: {code.depth}",
        code.bits,
    ]) + "\n"


def parse_rhobar(text: str) -> RunCode:
    lines = _content_lines(text)
    _expect_header(lines, RHOBAR_HEADER)
    fields = dict(_split_key(line) for _, line in lines[1:4])
    try:
        return RunCode(
            bits="".join(line for _, line in lines[4:]),
            width=int(fields["width"]),
            depth=int(fields["depth"]),
            state_order=tuple(fields["states"].split()),
        )
    except (KeyError, ValueError) as e:
        raise ParseError(lines[0][0] + 1, f"malformed run code: {e}")


def parse_document(text: str) -> Any:
    """Dispatch on the first line: machine, system document, picture, run or code"""
    lines = _content_lines(text)
    first = lines[0][1] if lines else ""
    if first == MACHINE_HEADER:
        return parse_machine(text)
    if first == SYSTEM_HEADER:
        return parse_system_document(text)
    if first.startswith("picture"):
        return parse_picture(text)
    if first.startswith("run"):
        return parse_run(text)
    if first == PBAR_HEADER:
        return parse_pbar(text)
    if first == RHOBAR_HEADER:
        return parse_rhobar(text)
    raise ParseError(lines[0][0] if lines else 1, f"unrecognized file header '{first}'")


# --- corpus loading ----------------------------------------------------------

class DataLoader:
    """Handles loading of the sample machines, systems and pictures"""

    def __init__(self, data_path: Optional[str] = None):
        self.data_path = Path(data_path or get_config().data_path)

    def _read(self, path: Path) -> str:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()

    def load_machine(self, name: str) -> TuringMachine:
        """Load and validate data/machines/<name>.tm"""
        try:
            return parse_machine(self._read(self.data_path / "machines" / f"{name}.tm"))
        except Exception as e:
            raise ValueError(f"Error loading machine {name}: {e}") from e

    def load_machines(self) -> Dict[str, TuringMachine]:
        return {path.stem: self.load_machine(path.stem)
                for path in sorted((self.data_path / "machines").glob("*.tm"))}

    def load_system(self, name: str) -> SystemDocument:
        try:
            return parse_system_document(self._read(self.data_path / "systems" / f"{name}.ts"))
        except Exception as e:
            raise ValueError(f"Error loading tiling system {name}: {e}") from e

    def load_systems(self) -> Dict[str, SystemDocument]:
        return {path.stem: self.load_system(path.stem)
                for path in sorted((self.data_path / "systems").glob("*.ts"))}

    def load_picture(self, name: str) -> PictureWindow:
        try:
            return parse_picture(self._read(self.data_path / "pictures" / f"{name}.pic"))
        except Exception as e:
            raise ValueError(f"Error loading picture {name}: {e}") from e

    def load_pictures(self) -> Dict[str, PictureWindow]:
        return {path.stem: self.load_picture(path.stem)
                for path in sorted((self.data_path / "pictures").glob("*.pic"))}

    def validate_data_integrity(self) -> Dict[str, Any]:
        """Check that every sample file parses, round-trips and fits its neighbours"""
        issues = []
        warnings = []

        try:
            machines = self.load_machines()
            systems = self.load_systems()
            pictures = self.load_pictures()

            for name, machine in machines.items():
                if parse_machine(serialize_machine(machine)) != machine:
                    issues.append(f"Machine {name} does not survive a serialize/parse round trip")
                if machine.name != name:
                    warnings.append(f"Machine file {name}.tm declares name {machine.name}")
                if not machine.accepting:
                    warnings.append(f"Machine {name} has no accepting states")

            for name, document in systems.items():
                text = serialize_tiling_system(document.system, document.condition, document.provenance)
                if parse_system_document(text) != document:
                    issues.append(f"Tiling system {name} does not survive a serialize/parse round trip")

            letters = {letter for document in systems.values() for letter in document.system.alphabet.letters}
            for name, picture in pictures.items():
                if parse_picture(serialize_picture(picture)) != picture:
                    issues.append(f"Picture {name} does not survive a serialize/parse round trip")
                if letters and not picture.letters() <= letters:
                    warnings.append(f"Picture {name} uses letters outside every sample alphabet")

            return {
                "valid": len(issues) == 0,
                "issues": issues,
                "warnings": warnings,
                "data_summary": {
                    "machines": len(machines),
                    "machine_transitions": sum(m.transition_count() for m in machines.values()),
                    "systems": len(systems),
                    "system_tiles": sum(len(d.system.tiles) for d in systems.values()),
                    "pictures": len(pictures),
                }
            }

        except Exception as e:
            return {
                "valid": False,
                "issues": [f"Data loading error: {e}"],
                "warnings": [],
                "data_summary": {}
            }


# Convenience functions for easy access
def load_all_data(data_path: Optional[str] = None):
    """Load machines, systems and pictures as a tuple of dicts"""
    loader = DataLoader(data_path)
    return loader.load_machines(), loader.load_systems(), loader.load_pictures()


def validate_corpus_data(data_path: Optional[str] = None):
    """Validate sample data integrity"""
    loader = DataLoader(data_path)
    return loader.validate_data_integrity()
