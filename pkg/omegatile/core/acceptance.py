"""
Acceptance conditions on bounded windows and backtracking run search

Every answer is a BoundedVerdict: CertifiedNo only when a finite refutation
extends to every larger window, WitnessYes when the window holds positive
evidence, Unknown otherwise.
"""

import itertools
import math
import logging
from collections import Counter, defaultdict
from typing import Dict, List, Optional, Sequence

from .config import get_config
from .errors import BudgetExhausted, DomainMismatch, ShapeMismatch
from .grid import tile_squares
from .models import (
    BORDER, AcceptanceCondition, AcceptanceMode, AcceptanceVariant, Cell, Coord,
    PictureWindow, RunAssignment, TilingSystem, WindowKind,
)
from .verdict_models import BoundedVerdict, InfApproximation, VerdictOutcome, Witness

logger = logging.getLogger(__name__)


def scope_cells(window: PictureWindow, mode: AcceptanceMode) -> List[Coord]:
    """Cells an acceptance condition looks at: the interior, or its diagonal"""
    cells = window.interior()
    if mode == AcceptanceMode.DIAGONAL:
        return [(i, j) for (i, j) in cells if i == j]
    return cells


def _extent(window: PictureWindow) -> int:
    return max(window.width, window.height)


def inf_approximation(run: RunAssignment, cond: AcceptanceCondition, window: PictureWindow) -> InfApproximation:
    """State counts over the scope, the diagonal and the outer half of the window"""
    half = _extent(window) // 2
    scope = scope_cells(window, cond.mode)
    seen = Counter(run.at(i, j) for i, j in scope)
    diagonal = Counter(run.at(i, j) for i, j in window.interior() if i == j)
    outer = Counter(run.at(i, j) for i, j in scope if max(i, j) > half)
    candidates = [
        sorted(family_set) for family_set in cond.muller_sets
        if family_set and family_set <= set(outer)
    ]
    return InfApproximation(
        seen=dict(seen), diagonal_seen=dict(diagonal), outer_seen=dict(outer), muller_candidates=candidates
    )


def evidence_score(run: RunAssignment, cond: AcceptanceCondition, window: PictureWindow) -> int:
    """Accepting occurrences in scope, or the number of Muller candidates"""
    if cond.variant == AcceptanceVariant.MULLER:
        return len(inf_approximation(run, cond, window).muller_candidates)
    return sum(1 for i, j in scope_cells(window, cond.mode) if run.at(i, j) in cond.accepting)


def evaluate_acceptance(run: RunAssignment, cond: AcceptanceCondition, window: PictureWindow) -> BoundedVerdict:
    """Evaluate one run against an acceptance condition on a finite window"""
    if run.shape != window.domain_shape:
        raise DomainMismatch(f"run shape {run.shape} differs from window domain {window.domain_shape}")

    depth = window.depth
    approx = inf_approximation(run, cond, window)
    scope = scope_cells(window, cond.mode)
    where = "diagonal" if cond.mode == AcceptanceMode.DIAGONAL else "window"

    if cond.variant == AcceptanceVariant.A:
        for i, j in scope:
            if run.at(i, j) not in cond.accepting:
                return BoundedVerdict(
                    outcome=VerdictOutcome.CERTIFIED_NO, depth=depth, evidence=approx,
                    notes=f"state {run.at(i, j)} at ({i},{j}) is not accepting",
                    score=evidence_score(run, cond, window),
                )
        return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, evidence=approx,
                              notes=f"A holds on {where}", score=len(scope))

    if cond.variant == AcceptanceVariant.E:
        for i, j in scope:
            if run.at(i, j) in cond.accepting:
                return BoundedVerdict(
                    outcome=VerdictOutcome.WITNESS_YES, depth=depth, evidence=approx,
                    witness=Witness(picture=window, run=run, cell=(i, j)),
                    notes=f"accepting state {run.at(i, j)} at ({i},{j})",
                    score=evidence_score(run, cond, window),
                )
        return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, evidence=approx,
                              notes=f"0 accepting occurrences on {where}")

    if cond.variant == AcceptanceVariant.BUCHI:
        count = evidence_score(run, cond, window)
        diagonal = sum(n for state, n in approx.diagonal_seen.items() if state in cond.accepting)
        return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, evidence=approx, score=count,
                              notes=f"{count} accepting occurrences on {where}, {diagonal} on the diagonal")

    count = len(approx.muller_candidates)
    return BoundedVerdict(outcome=VerdictOutcome.UNKNOWN, depth=depth, evidence=approx, score=count,
                          notes=f"{count} of {len(cond.muller_sets)} Muller sets seen in the outer half")


def classify_run(run: RunAssignment, cond: Optional[AcceptanceCondition], window: PictureWindow) -> BoundedVerdict:
    """
    Verdict contributed by one valid run

    Finite pictures are accepted by run existence alone. Positive Buchi or
    Muller evidence counts as a bounded witness.
    """
    if cond is None or window.kind == WindowKind.FINITE:
        return BoundedVerdict(outcome=VerdictOutcome.WITNESS_YES, depth=window.depth,
                              witness=Witness(picture=window, run=run), notes="valid run on the window")
    verdict = evaluate_acceptance(run, cond, window)
    if cond.variant in (AcceptanceVariant.BUCHI, AcceptanceVariant.MULLER):
        if verdict.score > 0:
            return verdict.model_copy(update={
                "outcome": VerdictOutcome.WITNESS_YES,
                "witness": Witness(picture=window, run=run),
                "notes": verdict.notes + " (bounded evidence only)",
            })
    if verdict.witness is None:
        verdict = verdict.model_copy(update={"witness": Witness(picture=window, run=run)})
    return verdict


class _SearchComplete(Exception):
    """Raised internally once no better run can exist"""


class RunSearch:
    """
    Backtracking search for runs, cell by cell in anti-diagonal order

    Candidates for a cell come from tile indexes keyed by the cells already
    assigned, so every square is checked exactly when its top-right corner is
    placed. Among valid runs the one with the highest evidence score wins;
    ties go to the first found, i.e. the lexicographically smallest in state
    declaration order.
    """

    def __init__(self, ts: TilingSystem, cond: Optional[AcceptanceCondition] = None,
                 budget: Optional[int] = None):
        if cond is not None:
            cond.check_against(ts)
        self.ts = ts
        self.cond = cond
        self.budget = get_config().search_node_budget if budget is None else budget
        self.nodes = 0
        self._build_indexes()

    def _build_indexes(self) -> None:
        order = self.ts.state_index()
        top_right: Dict[tuple, Dict[str, set]] = defaultdict(lambda: defaultdict(set))
        bottom: Dict[Cell, Dict[str, set]] = defaultdict(lambda: defaultdict(set))
        left: Dict[Cell, Dict[str, set]] = defaultdict(lambda: defaultdict(set))
        origin: Dict[str, set] = defaultdict(set)
        for b1, b2, b3, b4 in self.ts.tiles:
            top_right[(b1, b2, b3)][b4[0]].add(b4[1])
            bottom[b1][b2[0]].add(b2[1])
            left[b1][b3[0]].add(b3[1])
            origin[b1[0]].add(b1[1])

        def ordered(groups):
            return {letter: sorted(states, key=order.__getitem__) for letter, states in groups.items()}

        self._top_right = {key: ordered(groups) for key, groups in top_right.items()}
        self._bottom = {key: ordered(groups) for key, groups in bottom.items()}
        self._left = {key: ordered(groups) for key, groups in left.items()}
        self._origin = ordered(origin)

    def _candidates(self, i: int, j: int, letters: Sequence[str]) -> List[Cell]:
        cells = self._cells
        if i and j:
            groups = self._top_right.get((cells[j - 1][i - 1], cells[j - 1][i], cells[j][i - 1]), {})
        elif i:
            groups = self._bottom.get(cells[j][i - 1], {})
        elif j:
            groups = self._left.get(cells[j - 1][i], {})
        else:
            groups = self._origin
        return [(letter, state) for letter in letters for state in groups.get(letter, ())]

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            logger.warning("Run search stopped after %d nodes", self.budget)
            raise BudgetExhausted(self.budget, self.nodes)

    def search(self, window: PictureWindow, free_letters: bool = False) -> BoundedVerdict:
        """Best run on the window; with free_letters, interior letters are searched too"""
        cols, nrows = window.domain_shape
        self._window = window
        self._order = sorted(window.coordinates(), key=lambda c: (c[0] + c[1], c[0]))
        self._letters = [
            (BORDER,) if window.is_border(i, j)
            else (self.ts.alphabet.letters if free_letters else (window.at(i, j),))
            for (i, j) in self._order
        ]
        self._cells: List[List[Optional[Cell]]] = [[None] * cols for _ in range(nrows)]

        if window.kind == WindowKind.FINITE or self.cond is None:
            scope, self._muller = set(), False
            self._max_score = 0
        else:
            scope = set(scope_cells(window, self.cond.mode))
            self._muller = self.cond.variant == AcceptanceVariant.MULLER
            self._max_score = len(self.cond.muller_sets) if self._muller else len(scope)
        self._gain = [1 if (c in scope and not self._muller) else 0 for c in self._order]
        self._remaining = list(itertools.accumulate(reversed(self._gain + [0])))[::-1]
        self._best_score = -1
        self._best: Optional[List[List[Cell]]] = None
        self.nodes = 0

        try:
            self._dfs(0, 0)
        except _SearchComplete:
            pass
        logger.debug("Run search on depth %d explored %d nodes", window.depth, self.nodes)
        return self._verdict(window)

    def _dfs(self, k: int, score: int) -> None:
        if k == len(self._order):
            self._leaf(score)
            return
        i, j = self._order[k]
        for cell in self._candidates(i, j, self._letters[k]):
            self._tick()
            gain = self._gain[k] if self.cond is None or cell[1] in self.cond.accepting else 0
            if not self._muller and score + gain + self._remaining[k + 1] <= self._best_score:
                continue
            self._cells[j][i] = cell
            self._dfs(k + 1, score + gain)
        self._cells[j][i] = None

    def _leaf(self, score: int) -> None:
        if self._muller:
            run = RunAssignment(rows=tuple(tuple(c[1] for c in row) for row in self._cells))
            score = evidence_score(run, self.cond, self._window)
        if score > self._best_score:
            self._best_score = score
            self._best = [list(row) for row in self._cells]
        if self._best_score >= self._max_score:
            raise _SearchComplete()

    def _verdict(self, window: PictureWindow) -> BoundedVerdict:
        if self._best is None:
            return BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=window.depth,
                                  notes=f"no valid run on the window ({self.nodes} nodes)")
        picture = window.model_copy(update={"rows": tuple(tuple(c[0] for c in row) for row in self._best)})
        run = RunAssignment(rows=tuple(tuple(c[1] for c in row) for row in self._best))
        return classify_run(run, self.cond, picture)


def bounded_run_search(ts: TilingSystem, p: PictureWindow, cond: Optional[AcceptanceCondition] = None,
                       budget: Optional[int] = None) -> BoundedVerdict:
    """Search the runs of ts on p for the best acceptance evidence"""
    illegal = p.letters() - set(ts.alphabet.letters)
    if illegal:
        logger.debug("Picture uses letters %s outside the alphabet", sorted(illegal))
    return RunSearch(ts, cond, budget).search(p)


def emptiness_at_depth(ts: TilingSystem, n: int, cond: Optional[AcceptanceCondition] = None,
                       budget: Optional[int] = None) -> BoundedVerdict:
    """Search letters and states together on the depth-n window"""
    if n < 1:
        raise ShapeMismatch(f"emptiness needs depth at least 1, got {n}")
    placeholder = PictureWindow.omega_prefix([[ts.alphabet.letters[0]] * n for _ in range(n)])
    return RunSearch(ts, cond, budget).search(placeholder, free_letters=True)


def exhaustive_verdict(ts: TilingSystem, p: PictureWindow, cond: Optional[AcceptanceCondition] = None,
                       limit: Optional[int] = None) -> BoundedVerdict:
    """
    Brute-force oracle: enumerate every state assignment of the window

    A cell only takes states that occur with its letter in some tile; any
    other state fails every square covering the cell. Agrees with
    bounded_run_search on the verdict category; only meant for tiny windows.
    """
    cols, nrows = p.domain_shape
    present = {cell for tile in ts.tiles for cell in tile}
    choices = [[q for q in ts.states if (p.rows[j][i], q) in present] for j in range(nrows) for i in range(cols)]
    total = math.prod(len(states) for states in choices)
    limit = get_config().enumeration_bound if limit is None else limit
    if total > limit:
        raise BudgetExhausted(limit, total, "assignments")

    verdicts: List[BoundedVerdict] = []
    for flat in itertools.product(*choices):
        states = [flat[j * cols:(j + 1) * cols] for j in range(nrows)]
        config = [tuple(zip(p.rows[j], states[j])) for j in range(nrows)]
        if all(square in ts.tiles for _, square in tile_squares(config)):
            verdicts.append(classify_run(RunAssignment(rows=tuple(states)), cond, p))

    if not verdicts:
        return BoundedVerdict(outcome=VerdictOutcome.CERTIFIED_NO, depth=p.depth,
                              notes=f"none of {total} assignments is a valid run")
    best = max(verdicts, key=lambda v: v.rank)
    return best.model_copy(update={"notes": f"{len(verdicts)} valid runs; " + best.notes})
