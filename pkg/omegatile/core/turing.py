"""
Bounded simulation of nondeterministic Turing machines on omega-word prefixes
"""

import logging
from collections import Counter, deque
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .config import get_config
from .errors import AlphabetMismatch, BudgetExhausted, NonPositive, PrefixExhausted
from .turing_models import Configuration, MachineAcceptance, Move, TraceEvidence, TuringMachine
from .verdict_models import BoundedVerdict, VerdictOutcome

logger = logging.getLogger(__name__)


def tm_initial(m: TuringMachine, prefix: Sequence[str]) -> Configuration:
    """The configuration (q0, w, 1)"""
    unknown = set(prefix) - set(m.input_alphabet)
    if unknown:
        raise AlphabetMismatch(f"symbols {sorted(unknown)} are not in the input alphabet of {m.name}")
    return Configuration(state=m.initial, tape=tuple(prefix), head=1)


def tm_step(m: TuringMachine, c: Configuration) -> FrozenSet[Configuration]:
    """All successors of c; a left move from cell 1 falls off the tape and has none"""
    if c.exhausted:
        raise PrefixExhausted(c.head, len(c.tape))
    successors = set()
    for choice in m.delta(c.state, c.tape[c.head - 1]):
        head = c.head + {Move.L: -1, Move.R: 1, Move.S: 0}[choice.move]
        if head < 1:
            continue
        tape = c.tape[:c.head - 1] + (choice.symbol,) + c.tape[c.head:]
        successors.add(Configuration(state=choice.state, tape=tape, head=head))
    return frozenset(successors)


def config_key(m: TuringMachine, c: Configuration) -> tuple:
    """Canonical ordering of configurations"""
    return (m.states.index(c.state), c.tape, c.head)


def make_evidence(steps: Sequence[Configuration], accepting: Iterable[str],
                  halted: bool = False, exhausted: bool = False) -> TraceEvidence:
    accepting = set(accepting)
    heads = [c.head for c in steps]
    return TraceEvidence(
        steps=tuple(steps),
        halted=halted,
        prefix_exhausted=exhausted,
        complete_evidence=max(heads),
        oscillation_evidence=dict(Counter(heads)),
        accepting_flags=tuple(c.state in accepting for c in steps),
    )


def tm_run_bounded(m: TuringMachine, prefix: Sequence[str], k: int,
                   trace_limit: Optional[int] = None) -> List[TraceEvidence]:
    """
    All traces of at most k configurations from (q0, prefix, 1)

    Traces advance breadth-first one step at a time. Traces reaching the same
    configuration with the same all-accepting flag are merged, keeping the
    canonically smallest history. A trace ends early when it halts or when its
    head leaves the prefix.
    """
    if k < 1:
        raise NonPositive(f"trace length must be at least 1, got {k}")
    limit = get_config().trace_limit if trace_limit is None else trace_limit
    start = tm_initial(m, prefix)

    def history_key(steps):
        return tuple(config_key(m, c) for c in steps)

    finished: List[TraceEvidence] = []
    live: List[Tuple[Configuration, ...]] = [(start,)]
    for step in range(1, k):
        merged: Dict[tuple, Tuple[Configuration, ...]] = {}
        for steps in live:
            last = steps[-1]
            if last.exhausted:
                finished.append(make_evidence(steps, m.accepting, exhausted=True))
                continue
            successors = tm_step(m, last)
            if not successors:
                finished.append(make_evidence(steps, m.accepting, halted=True))
                continue
            all_accepting = all(c.state in m.accepting for c in steps)
            for nxt in successors:
                key = (nxt, all_accepting and nxt.state in m.accepting)
                candidate = steps + (nxt,)
                if key not in merged or history_key(candidate) < history_key(merged[key]):
                    merged[key] = candidate
        live = list(merged.values())
        if len(live) > limit:
            logger.warning("Machine %s exceeded %d live traces at step %d", m.name, limit, step)
            raise BudgetExhausted(limit, len(live), "traces")
        logger.debug("Step %d: %d live traces", step, len(live))

    for steps in live:
        last = steps[-1]
        halted = not last.exhausted and not tm_step(m, last)
        finished.append(make_evidence(steps, m.accepting, halted=halted, exhausted=last.exhausted))
    return sorted(finished, key=lambda t: history_key(t.steps))


def tm_acceptance_evidence(t: TraceEvidence, mode: MachineAcceptance,
                           accepting: Optional[Iterable[str]] = None) -> BoundedVerdict:
    """Evidence a single trace gives for 1' or Buchi acceptance"""
    accepting = set(accepting) if accepting is not None else None
    flags = t.accepting_flags if accepting is None else tuple(c.state in accepting for c in t.steps)
    depth = len(t.steps)
    shape = f"max head {t.complete_evidence}, max visits {max(t.oscillation_evidence.values())}"

    if mode == MachineAcceptance.ONE_PRIME:
        for index, flag in enumerate(flags, 1):
            if not flag:
                return BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=depth,
                                      notes=f"state {t.steps[index - 1].state} at step {index} is not accepting")
        return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, score=depth,
                              notes=f"all states accepting so far; {shape}; completeness not certified")

    count = sum(flags)
    return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, score=count,
                          notes=f"{count} accepting steps; {shape}; completeness not certified")


def tm_reachable_sets(m: TuringMachine, prefix: Sequence[str], k: int) -> List[FrozenSet[str]]:
    """Determinized subset simulation: the states reachable at each of k steps"""
    if k < 1:
        raise NonPositive(f"trace length must be at least 1, got {k}")
    current: Set[Configuration] = {tm_initial(m, prefix)}
    states: List[FrozenSet[str]] = []
    for step in range(k):
        if not current:
            break
        states.append(frozenset(c.state for c in current))
        if step < k - 1:
            current = {nxt for c in current if not c.exhausted for nxt in tm_step(m, c)}
    return states


def tm_prefix_verdict(m: TuringMachine, prefix: Sequence[str], mode: MachineAcceptance,
                      limit: Optional[int] = None) -> BoundedVerdict:
    """
    Exact bounded answer from the whole configuration graph inside the prefix

    Every complete run leaves any finite prefix. With 1' acceptance a run
    is accepted only if all its states are accepting, so when no all-accepting
    path leaves the prefix no extension of it is accepted. With Buchi
    acceptance the same holds for paths of any kind; reaching the prefix end
    after an accepting state is positive evidence, reaching it without one
    is inconclusive.
    """
    limit = get_config().trace_limit if limit is None else limit
    start = tm_initial(m, prefix)
    one_prime = mode == MachineAcceptance.ONE_PRIME
    if one_prime and start.state not in m.accepting:
        return BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=len(prefix),
                              notes="initial state is not accepting")

    origin = (start, start.state in m.accepting)
    seen = {origin: 0}
    queue = deque([origin])
    exit_without_f: Optional[int] = None
    while queue:
        config, saw_f = queue.popleft()
        steps = seen[(config, saw_f)]
        if config.exhausted:
            if saw_f:
                return BoundedVerdict(outcome=VerdictOutcome.WITNESS_YES, depth=len(prefix), score=steps + 1,
                                      notes=f"a run leaves the prefix after {steps} steps having visited F")
            exit_without_f = steps if exit_without_f is None else exit_without_f
            continue
        for nxt in sorted(tm_step(m, config), key=lambda c: config_key(m, c)):
            if one_prime and nxt.state not in m.accepting:
                continue
            node = (nxt, saw_f or nxt.state in m.accepting)
            if node not in seen:
                seen[node] = steps + 1
                queue.append(node)
        if len(seen) > limit:
            raise BudgetExhausted(limit, len(seen), "configurations")

    logger.debug("Explored %d configurations of %s on a prefix of length %d", len(seen), m.name, len(prefix))
    if exit_without_f is not None:
        return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=len(prefix),
                              notes=f"runs leave the prefix after {exit_without_f} steps without visiting F")
    what = "all-accepting path" if one_prime else "path"
    return BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=len(prefix),
                          notes=f"no {what} leaves the prefix ({len(seen)} configurations explored)")
