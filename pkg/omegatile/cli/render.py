"""
Plain-text rendering of machines, systems, windows and verdicts
"""

from typing import List, Optional

from ..core.data import SystemDocument
from ..core.grid import is_deterministic
from ..core.models import PictureWindow, RunAssignment
from ..core.turing_models import TuringMachine
from ..core.verdict_models import BoundedVerdict
from ..core.verification import format_record


def _grid(rows, width: Optional[int] = None) -> List[str]:
    """Top row first, the way pictures are drawn"""
    width = width or max((len(cell) for row in rows for cell in row), default=1)
    return [" ".join(cell.rjust(width) for cell in row) for row in reversed(rows)]


def render_picture(p: PictureWindow) -> str:
    title = f"{p.kind.value} picture, {p.width}x{p.height}"
    return "\n".join([title] + _grid(p.rows, 1)) + "\n"


def render_run(run: RunAssignment) -> str:
    cols, nrows = run.shape
    return "\n".join([f"run over {cols}x{nrows} cells"] + _grid(run.rows)) + "\n"


def render_machine(m: TuringMachine) -> str:
    lines = [
        f"machine {m.name}: {len(m.states)} states, {m.transition_count()} transitions",
        f"  input {' '.join(m.input_alphabet)} / tape {' '.join(m.tape_alphabet)}",
        f"  initial {m.initial}, accepting {{{' '.join(q for q in m.states if q in m.accepting)}}}",
    ]
    for state in m.states:
        for symbol in m.tape_alphabet:
            choices = m.delta(state, symbol)
            if choices:
                targets = " | ".join(f"{c.state} {c.symbol} {c.move.value}" for c in choices)
                lines.append(f"  {state} {symbol} -> {targets}")
    return "\n".join(lines) + "\n"


def render_system(document: SystemDocument) -> str:
    ts = document.system
    lines = [
        f"tiling system{' ' + document.provenance if document.provenance else ''}: "
        f"{len(ts.states)} states, {len(ts.alphabet)} letters, {len(ts.tiles)} tiles",
        f"  deterministic: {'yes' if is_deterministic(ts) else 'no'}",
    ]
    cond = document.condition
    if cond is not None:
        lines.append(f"  condition: {cond.variant.value} ({cond.mode.value}), "
                     f"{len(cond.accepting)} accepting states, {len(cond.muller_sets)} Muller sets")
    return "\n".join(lines) + "\n"


def render_verdict(verdict: BoundedVerdict, fmt: str = "text") -> str:
    if fmt == "records":
        return format_record({
            "kind": "verdict",
            "outcome": verdict.outcome.value,
            "depth": verdict.depth,
            "score": verdict.score,
            "notes": verdict.notes,
        }) + "\n"
    text = verdict.summary() + "\n"
    witness = verdict.witness
    if witness is not None and witness.run is not None:
        if witness.picture is not None:
            text += render_picture(witness.picture)
        text += render_run(witness.run)
        if witness.cell is not None:
            text += f"accepting cell: {witness.cell}\n"
    return text
