"""
Pydantic models for nondeterministic Turing machines on omega-words
"""

from enum import Enum
from typing import Dict, FrozenSet, List, NamedTuple, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvariantViolation
from .models import BORDER, MACHINE_RESERVED, check_token


class Move(str, Enum):
    L = "L"
    R = "R"
    S = "S"


class MachineAcceptance(str, Enum):
    ONE_PRIME = "1prime"
    BUCHI = "buchi"


class Transition(NamedTuple):
    """One choice of delta(q, x): next state, written symbol, head move"""
    state: str
    symbol: str
    move: Move


class TuringMachine(BaseModel):
    """A machine (Q, Sigma, Gamma, delta, q0) with accepting states F"""
    model_config = ConfigDict(frozen=True)

    name: str = Field("machine", description="Identifier used as provenance by the compilers")
    states: Tuple[str, ...]
    input_alphabet: Tuple[str, ...]
    tape_alphabet: Tuple[str, ...]
    initial: str
    accepting: FrozenSet[str] = Field(default_factory=frozenset)
    transitions: Dict[Tuple[str, str], FrozenSet[Transition]] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_machine(self):
        for what, names in (("state", self.states), ("symbol", self.tape_alphabet)):
            if len(set(names)) != len(names):
                raise InvariantViolation(f"duplicate {what} names in {names}")
            for name in names:
                check_token(name, what, MACHINE_RESERVED)
        if not self.states:
            raise InvariantViolation("a machine needs at least one state")
        if not self.input_alphabet:
            raise InvariantViolation("the input alphabet must not be empty")
        if BORDER in self.tape_alphabet:
            raise InvariantViolation("the border symbol # cannot be a tape symbol")
        missing = set(self.input_alphabet) - set(self.tape_alphabet)
        if missing:
            raise InvariantViolation(f"input symbols {sorted(missing)} are not tape symbols")
        if self.initial not in self.states:
            raise InvariantViolation(f"initial state {self.initial!r} is not declared")
        if not self.accepting <= set(self.states):
            raise InvariantViolation(f"accepting states {sorted(self.accepting - set(self.states))} are not declared")
        for (state, symbol), choices in self.transitions.items():
            if state not in self.states or symbol not in self.tape_alphabet:
                raise InvariantViolation(f"transition from undeclared pair ({state}, {symbol})")
            for choice in choices:
                if choice.state not in self.states or choice.symbol not in self.tape_alphabet:
                    raise InvariantViolation(f"transition ({state}, {symbol}) -> {tuple(choice)} uses undeclared names")
        return self

    def delta(self, state: str, symbol: str) -> List[Transition]:
        """Choices for (state, symbol) in canonical order; empty means halt"""
        order = {name: index for index, name in enumerate(self.states)}
        symbols = {name: index for index, name in enumerate(self.tape_alphabet)}
        return sorted(self.transitions.get((state, symbol), ()),
                      key=lambda t: (order[t.state], symbols[t.symbol], t.move.value))

    def transition_count(self) -> int:
        return sum(len(choices) for choices in self.transitions.values())


class Configuration(BaseModel):
    """
    (q, tape, head) with the tape given as the known prefix

    The prefix is the input prefix with every cell the machine rewrote; cells
    past it are the untouched input suffix, unknown at bounded depth.
    """
    model_config = ConfigDict(frozen=True)

    state: str
    tape: Tuple[str, ...]
    head: int = Field(..., ge=1, description="Head position, 1-based")

    @property
    def exhausted(self) -> bool:
        """True when the head reads past the known prefix"""
        return self.head > len(self.tape)

    def render(self) -> str:
        """u q v notation: the state is written in front of the scanned cell"""
        cells = list(self.tape)
        cells.insert(self.head - 1, f"[{self.state}]")
        return " ".join(cells)


class TraceEvidence(BaseModel):
    """A bounded run prefix with completeness and oscillation evidence"""
    model_config = ConfigDict(frozen=True)

    steps: Tuple[Configuration, ...]
    halted: bool = Field(False, description="No transition applies to the last configuration")
    prefix_exhausted: bool = Field(False, description="The head left the supplied prefix")
    complete_evidence: int = Field(..., description="Maximal head position reached")
    oscillation_evidence: Dict[int, int] = Field(default_factory=dict, description="Visits per head position")
    accepting_flags: Tuple[bool, ...] = Field(default=(), description="Per step: state is accepting")

    @property
    def heads(self) -> List[int]:
        return [c.head for c in self.steps]

    @property
    def last(self) -> Configuration:
        return self.steps[-1]
