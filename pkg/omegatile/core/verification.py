"""
Reduction fidelity: the machine simulated directly versus its compiled K system

The oracle runs the machine on the word prefix; the compiled pipeline lifts the
word to a picture window and searches K(m) for a run. Both must agree on
whether a run exists, and every decoded row of the run must be a legal step
of the machine.
"""

import json
import logging
from typing import List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from .errors import BudgetExhausted, NonPositive
from .reductions import FILL_LETTER, compile_K, decode_rows, lift_word
from .turing import tm_acceptance_evidence, tm_initial, tm_run_bounded, tm_step
from .turing_models import MachineAcceptance, TraceEvidence, TuringMachine
from .acceptance import bounded_run_search
from .verdict_models import VerdictOutcome

logger = logging.getLogger(__name__)


class RowComparison(BaseModel):
    """One row of the compiled run next to the oracle's configuration"""
    model_config = ConfigDict(frozen=True)

    row: int = Field(..., ge=1, description="Picture row, 1 = initial configuration")
    decoded: Optional[str] = Field(None, description="Configuration decoded from the run row")
    oracle: Optional[str] = Field(None, description="Configuration of the oracle trace at this step")
    consistent: bool = Field(..., description="Decoded row is the initial configuration or a step from the row below")


class FidelityReport(BaseModel):
    """Oracle and compiled verdicts for one (machine, word, depth) triple"""
    model_config = ConfigDict(frozen=True)

    machine_id: str
    word: str
    padded_word: str = Field(..., description="The word cut or padded with 'a' to the depth")
    depth: int = Field(..., ge=1)
    oracle_verdict: VerdictOutcome
    oracle_notes: str = ""
    compiled_verdict: VerdictOutcome
    compiled_notes: str = ""
    rows: List[RowComparison] = Field(default_factory=list)
    agreement: bool
    budget_exhausted: bool = False

    def record(self) -> dict:
        """Flat summary used by the records format and the corpus report"""
        return {
            "machine": self.machine_id,
            "word": self.word,
            "depth": self.depth,
            "oracle": self.oracle_verdict.value,
            "compiled": self.compiled_verdict.value,
            "rows_checked": sum(1 for row in self.rows if row.decoded is not None),
            "rows_consistent": all(row.consistent for row in self.rows),
            "agreement": self.agreement,
            "budget_exhausted": self.budget_exhausted,
        }


def _supports_run(m: TuringMachine, trace: TraceEvidence, depth: int) -> bool:
    """
    True when the trace is the chain of rows of some run on the depth-n window

    All states must be accepting. Either the head leaves the window, or the
    chain fills all n rows and its last configuration still has an accepting
    choice to record in its head cell.
    """
    if not all(trace.accepting_flags):
        return False
    if trace.prefix_exhausted:
        return True
    if len(trace.steps) < depth:
        return False
    last = trace.last
    return any(choice.state in m.accepting for choice in m.delta(last.state, last.tape[last.head - 1]))


def pad_word(word: Sequence[str], depth: int) -> str:
    letters = list(word[:depth])
    return "".join(letters + [FILL_LETTER] * (depth - len(letters)))


def verify_reduction(m: TuringMachine, word: Sequence[str], depth: int,
                     budget: Optional[int] = None) -> FidelityReport:
    """Compare the oracle with the compiled K pipeline on one word at one depth"""
    if depth < 1:
        raise NonPositive(f"depth must be at least 1, got {depth}")
    padded = pad_word(word, depth)

    traces = tm_run_bounded(m, padded, depth)
    supporting = [t for t in traces if _supports_run(m, t, depth)]
    if supporting:
        evidence = tm_acceptance_evidence(supporting[0], MachineAcceptance.ONE_PRIME)
        oracle_verdict, oracle_notes = VerdictOutcome.WITNESS_YES, evidence.notes
        oracle_steps = list(supporting[0].steps)
    else:
        oracle_verdict = VerdictOutcome.CERTIFIED_NO
        oracle_notes = f"no all-accepting chain fills the window ({len(traces)} traces)"
        oracle_steps = []

    compiled = compile_K(m)
    rows: List[RowComparison] = []
    exhausted = False
    try:
        verdict = bounded_run_search(compiled.system, lift_word(padded, depth), compiled.condition, budget)
        compiled_verdict, compiled_notes = verdict.outcome, verdict.notes
    except BudgetExhausted as e:
        logger.warning("Budget exhausted verifying %s on %s at depth %d", m.name, padded, depth)
        compiled_verdict, compiled_notes, verdict, exhausted = VerdictOutcome.UNKNOWN, str(e), None, True

    if verdict is not None and verdict.witness is not None and verdict.witness.run is not None:
        previous = None
        for index, decoded in enumerate(decode_rows(verdict.witness.run), 1):
            if decoded is None:
                break
            if previous is None:
                consistent = decoded == tm_initial(m, padded)
            else:
                consistent = decoded in tm_step(m, previous)
            consistent = consistent and decoded.state in m.accepting
            oracle = oracle_steps[index - 1] if index <= len(oracle_steps) else None
            rows.append(RowComparison(
                row=index,
                decoded=decoded.render(),
                oracle=oracle.render() if oracle is not None and not oracle.exhausted else None,
                consistent=consistent,
            ))
            previous = decoded

    agreement = (not exhausted and oracle_verdict == compiled_verdict
                 and all(row.consistent for row in rows))
    if not agreement:
        logger.warning("Fidelity mismatch for %s on %s at depth %d", m.name, padded, depth)
    return FidelityReport(
        machine_id=m.name,
        word="".join(word),
        padded_word=padded,
        depth=depth,
        oracle_verdict=oracle_verdict,
        oracle_notes=oracle_notes,
        compiled_verdict=compiled_verdict,
        compiled_notes=compiled_notes,
        rows=rows,
        agreement=agreement,
        budget_exhausted=exhausted,
    )


def render_text(report: FidelityReport) -> str:
    lines = [
        f"machine: {report.machine_id}",
        f"word: {report.word} (window row 1: {report.padded_word})",
        f"depth: {report.depth}",
        f"oracle: {report.oracle_verdict.value} ({report.oracle_notes})",
        f"compiled: {report.compiled_verdict.value} ({report.compiled_notes})",
    ]
    for row in report.rows:
        mark = "ok" if row.consistent else "MISMATCH"
        lines.append(f"  row {row.row}: {row.decoded}  | oracle {row.oracle or '-'}  [{mark}]")
    if report.budget_exhausted:
        lines.append("budget exhausted before the search finished")
    lines.append(f"agreement: {'yes' if report.agreement else 'no'}")
    return "\n".join(lines) + "\n"


def _value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    text = str(value)
    return json.dumps(text) if (not text or any(ch.isspace() or ch in '"=' for ch in text)) else text


def format_record(record: dict) -> str:
    """One line of key=value pairs, values with blanks quoted"""
    return " ".join(f"{key}={_value(value)}" for key, value in record.items())


def render_records(report: FidelityReport) -> str:
    lines = [format_record({"kind": "fidelity", **report.record()})]
    for row in report.rows:
        lines.append(format_record({
            "kind": "row", "row": row.row, "decoded": row.decoded,
            "oracle": row.oracle or "-", "consistent": row.consistent,
        }))
    return "\n".join(lines) + "\n"
