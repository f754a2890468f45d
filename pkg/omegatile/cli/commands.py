"""
One function per CLI verb; each returns the process exit code
"""

import random
import sys
from pathlib import Path
from typing import Any, Optional

from ..core.acceptance import bounded_run_search, classify_run, emptiness_at_depth, exhaustive_verdict
from ..core.data import (
    RunDocument, StreamDocument, SystemDocument, parse_document, serialize_machine, serialize_pbar,
    serialize_picture, serialize_rhobar, serialize_tiling_system,
)
from ..core.encodings import (
    RunCode, decode_run, encode_run, picture_to_word, row_major_stream, window_from_stream, word_to_picture,
)
from ..core.errors import NonPositive, ParseError
from ..core.grid import first_violation
from ..core.models import AcceptanceCondition, AcceptanceMode, AcceptanceVariant, PictureWindow, WindowKind
from ..core.reductions import CompiledSystem, compile_H, compile_K, shuffle_machines
from ..core.turing_models import MachineAcceptance, TuringMachine
from ..core.verdict_models import BoundedVerdict, VerdictOutcome
from ..core.verification import render_records, render_text, verify_reduction
from .render import render_machine, render_picture, render_run, render_system, render_verdict

EXIT_CODES = {
    VerdictOutcome.WITNESS_YES: 0,
    VerdictOutcome.CERTIFIED_NO: 1,
    VerdictOutcome.UNKNOWN: 2,
}
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_DATAERR = 65

_ICONS = {0: "✅", 1: "❌", 2: "⚠️"}


def status(message: str) -> None:
    print(message, file=sys.stderr)


def read_file(path: str) -> Any:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_document(f.read())


def load(path: str, expected: type, what: str) -> Any:
    document = read_file(path)
    if not isinstance(document, expected):
        raise ParseError(1, f"{path} is not a {what} file")
    return document


def emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding='utf-8')
        status(f"📄 Wrote {output}")
    else:
        sys.stdout.write(text)


def require_depth(args, verb: str) -> int:
    if args.depth is None or args.depth < 1:
        raise NonPositive(f"{verb} needs --depth of at least 1")
    return args.depth


def select_condition(document: SystemDocument, args) -> Optional[AcceptanceCondition]:
    """The file's condition, with --condition and --mode taking precedence"""
    base = document.condition
    if args.condition is None and args.mode is None:
        return base
    if args.condition:
        variant = AcceptanceVariant(args.condition)
    else:
        variant = base.variant if base else AcceptanceVariant.BUCHI
    mode = AcceptanceMode(args.mode) if args.mode else (base.mode if base else AcceptanceMode.GLOBAL)
    return AcceptanceCondition(
        variant=variant,
        accepting=base.accepting if base else frozenset(),
        muller_sets=base.muller_sets if base else (),
        mode=mode,
    )


def finish(verdict: BoundedVerdict, args) -> int:
    sys.stdout.write(render_verdict(verdict, args.format))
    code = EXIT_CODES[verdict.outcome]
    status(f"{_ICONS[code]} {verdict.outcome.value}")
    return code


# --- compilers ---------------------------------------------------------------

def _write_compiled(compiled: CompiledSystem, args) -> int:
    emit(serialize_tiling_system(compiled.system, compiled.condition, compiled.provenance), args.output)
    status(f"✅ {compiled.provenance}: {len(compiled.system.states)} states, {len(compiled.system.tiles)} tiles")
    return 0


def cmd_compile_k(args) -> int:
    return _write_compiled(compile_K(load(args.machine, TuringMachine, "machine")), args)


def cmd_compile_h(args) -> int:
    return _write_compiled(compile_H(load(args.machine, TuringMachine, "machine")), args)


def cmd_theta(args) -> int:
    theta = shuffle_machines(load(args.left, TuringMachine, "machine"), load(args.right, TuringMachine, "machine"),
                             MachineAcceptance(args.acceptance))
    emit(serialize_machine(theta), args.output)
    status(f"✅ {theta.name}: {len(theta.states)} states, {theta.transition_count()} transitions")
    return 0


# --- searches ----------------------------------------------------------------

def cmd_search_run(args) -> int:
    document = load(args.system, SystemDocument, "tiling-system")
    picture = load(args.picture, PictureWindow, "picture")
    cond = select_condition(document, args)
    if args.oracle:
        verdict = exhaustive_verdict(document.system, picture, cond, args.budget)
    else:
        verdict = bounded_run_search(document.system, picture, cond, args.budget)
    return finish(verdict, args)


def cmd_check_run(args) -> int:
    document = load(args.system, SystemDocument, "tiling-system")
    picture = load(args.picture, PictureWindow, "picture")
    run_document = load(args.run, RunDocument, "run")
    if run_document.kind != picture.kind:
        raise ParseError(1, f"run is over a {run_document.kind.value} window but the picture is {picture.kind.value}")
    violation = first_violation(document.system, picture, run_document.run)
    if violation is not None:
        verdict = BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=picture.depth,
                                 notes=f"square at {violation} is not a tile")
        return finish(verdict, args)
    return finish(classify_run(run_document.run, select_condition(document, args), picture), args)


def cmd_emptiness(args) -> int:
    document = load(args.system, SystemDocument, "tiling-system")
    depth = require_depth(args, "emptiness")
    return finish(emptiness_at_depth(document.system, depth, select_condition(document, args), args.budget), args)


def cmd_verify_reduction(args) -> int:
    machine = load(args.machine, TuringMachine, "machine")
    depth = require_depth(args, "verify-reduction")
    word = args.word
    if word is None:
        rng = random.Random(args.seed)
        word = "".join(rng.choice(machine.input_alphabet) for _ in range(depth))
    report = verify_reduction(machine, word, depth, args.budget)
    sys.stdout.write(render_records(report) if args.format == "records" else render_text(report))
    if report.budget_exhausted:
        status(f"⚠️ budget exhausted at depth {depth}")
        return EXIT_BUDGET
    if report.agreement:
        status("✅ oracle and compiled system agree")
        return 0
    status("❌ oracle and compiled system disagree")
    return 1


# --- encodings ---------------------------------------------------------------

def cmd_encode(args) -> int:
    if args.word is not None:
        emit(serialize_picture(word_to_picture(args.word, require_depth(args, "encode --word"))), args.output)
        return 0
    if args.input is None:
        raise NonPositive("encode needs an input file or --word")
    document = read_file(args.input)
    if isinstance(document, PictureWindow):
        if document.kind != WindowKind.OMEGA_PREFIX:
            raise ParseError(1, "only omega-prefix pictures have a row-by-row code")
        emit(serialize_pbar(row_major_stream(document), sorted(document.letters()), document.depth), args.output)
        return 0
    if isinstance(document, RunDocument):
        if args.system:
            order = load(args.system, SystemDocument, "tiling-system").system.states
        else:
            order = tuple(dict.fromkeys(state for row in document.run.rows for state in row))
        emit(serialize_rhobar(encode_run(document.run, order)), args.output)
        return 0
    raise ParseError(1, f"{args.input} holds nothing to encode")


def cmd_decode(args) -> int:
    document = read_file(args.input)
    if isinstance(document, PictureWindow):
        positions = picture_to_word(document)
        length = 0
        while length + 1 in positions:
            length += 1
        emit("".join(positions[k] for k in range(1, length + 1)) + "\n", args.output)
        return 0
    if isinstance(document, RunCode):
        cells = decode_run(document)
        emit("".join(f"({i},{j}) {state}\n" for (i, j), state in cells.items()), args.output)
        return 0
    if isinstance(document, StreamDocument):
        emit(serialize_picture(window_from_stream(document.stream, document.depth)), args.output)
        return 0
    raise ParseError(1, f"{args.input} holds nothing to decode")


def cmd_show(args) -> int:
    document = read_file(args.input)
    if isinstance(document, TuringMachine):
        text = render_machine(document)
    elif isinstance(document, SystemDocument):
        text = render_system(document)
    elif isinstance(document, PictureWindow):
        text = render_picture(document)
    elif isinstance(document, RunDocument):
        text = render_run(document.run)
    elif isinstance(document, StreamDocument):
        text = render_picture(window_from_stream(document.stream, document.depth))
    else:
        text = f"run code: depth {document.depth}, {document.cells} cells of {document.width} bits\n"
    sys.stdout.write(text)
    return 0
