"""
Tests for acceptance conditions, run search and its brute-force oracle
"""

import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import omega, random_system, random_window
from omegatile.core.acceptance import (
    bounded_run_search, classify_run, emptiness_at_depth, evaluate_acceptance, exhaustive_verdict,
    inf_approximation, scope_cells,
)
from omegatile.core.errors import BudgetExhausted, DomainMismatch, ShapeMismatch
from omegatile.core.grid import validate_run
from omegatile.core.models import (
    AcceptanceCondition, AcceptanceMode, AcceptanceVariant, Alphabet, RunAssignment, Square, TilingSystem,
)
from omegatile.core.verdict_models import VerdictOutcome


def has_b_run(window):
    """The unique run of the has_b system: y exactly where the letter is b"""
    return RunAssignment(rows=tuple(
        tuple("y" if letter == "b" else "n" for letter in row) for row in window.rows
    ))


def test_scope_cells_global_and_diagonal():
    p = omega(["aaa"] * 3)
    assert len(scope_cells(p, AcceptanceMode.GLOBAL)) == 9
    assert scope_cells(p, AcceptanceMode.DIAGONAL) == [(1, 1), (2, 2), (3, 3)]


def test_a_acceptance(only_a):
    p = omega(["aa"] * 2)
    run = RunAssignment.constant("s", p.domain_shape)
    holds = evaluate_acceptance(run, only_a.condition, p)
    assert holds.outcome == VerdictOutcome.UNKNOWN
    assert "A holds" in holds.notes

    empty_f = AcceptanceCondition(variant=AcceptanceVariant.A)
    refuted = evaluate_acceptance(run, empty_f, p)
    assert refuted.outcome == VerdictOutcome.CERTIFIED_NO
    print("✅ A-acceptance: Unknown while it holds, CertifiedNo on the first non-accepting cell")


def test_e_acceptance_reports_the_cell(has_b, loader):
    p = loader.load_picture("b_at_2_2")
    verdict = evaluate_acceptance(has_b_run(p), has_b.condition, p)
    assert verdict.outcome == VerdictOutcome.WITNESS_YES
    assert verdict.witness.cell == (2, 2)

    q = omega(["aaa"] * 3)
    assert evaluate_acceptance(has_b_run(q), has_b.condition, q).outcome == VerdictOutcome.UNKNOWN


def test_buchi_counts_accepting_occurrences(has_b):
    p = omega(["ab", "ba"])
    run = has_b_run(p)
    glob = evaluate_acceptance(run, AcceptanceCondition.buchi({"y"}), p)
    diag = evaluate_acceptance(run, AcceptanceCondition.buchi({"y"}, AcceptanceMode.DIAGONAL), p)
    assert glob.score == 2
    assert diag.score == 0
    assert glob.outcome == diag.outcome == VerdictOutcome.UNKNOWN


def test_muller_candidates_use_outer_half():
    p = omega(["aaaa"] * 4)
    rows = [["n"] * 5 for _ in range(5)]
    rows[4][4] = "y"
    run = RunAssignment(rows=tuple(tuple(row) for row in rows))
    cond = AcceptanceCondition(variant=AcceptanceVariant.MULLER,
                               muller_sets=(frozenset({"y"}), frozenset({"n", "y"}), frozenset({"z"})))
    approx = inf_approximation(run, cond, p)
    assert approx.outer_seen["y"] == 1
    assert approx.muller_candidates == [["y"], ["n", "y"]]
    assert evaluate_acceptance(run, cond, p).score == 2


def test_classify_run_upgrades_positive_buchi_evidence(has_b):
    p = omega(["ab", "aa"])
    verdict = classify_run(has_b_run(p), AcceptanceCondition.buchi({"y"}), p)
    assert verdict.outcome == VerdictOutcome.WITNESS_YES
    assert verdict.witness.run == has_b_run(p)


def test_evaluate_rejects_wrong_domain(has_b):
    p = omega(["aa"] * 2)
    with pytest.raises(DomainMismatch):
        evaluate_acceptance(RunAssignment.constant("n", (2, 2)), has_b.condition, p)


def test_search_finds_the_e_witness(has_b, loader):
    p = loader.load_picture("b_at_2_2")
    verdict = bounded_run_search(has_b.system, p, has_b.condition)
    assert verdict.outcome == VerdictOutcome.WITNESS_YES
    assert verdict.witness.cell == (2, 2)
    assert validate_run(has_b.system, p, verdict.witness.run)
    print(f"✅ {verdict.summary()}")


def test_search_certifies_missing_runs(only_a, loader):
    p = loader.load_picture("b_at_2_2")
    verdict = bounded_run_search(only_a.system, p, only_a.condition)
    assert verdict.outcome == VerdictOutcome.CERTIFIED_NO
    assert verdict.witness is None


def test_search_without_condition_is_run_existence(only_a):
    verdict = bounded_run_search(only_a.system, omega(["aaa"] * 3))
    assert verdict.outcome == VerdictOutcome.WITNESS_YES


def test_search_respects_budget(has_b):
    with pytest.raises(BudgetExhausted):
        bounded_run_search(has_b.system, omega(["aaa"] * 3), has_b.condition, budget=3)


def test_emptiness_at_depth(has_b, only_a):
    found = emptiness_at_depth(has_b.system, 2, has_b.condition)
    assert found.outcome == VerdictOutcome.WITNESS_YES
    assert "b" in found.witness.picture.letters()

    assert emptiness_at_depth(only_a.system, 2).outcome == VerdictOutcome.WITNESS_YES

    no_tiles = TilingSystem(states=("s",), alphabet=Alphabet(letters=("a",)))
    assert emptiness_at_depth(no_tiles, 1).outcome == VerdictOutcome.CERTIFIED_NO
    with pytest.raises(ShapeMismatch):
        emptiness_at_depth(only_a.system, 0)


def test_runs_restrict_to_smaller_windows(has_b):
    rng = random.Random(3)
    for _ in range(10):
        p = random_window(rng, 3)
        verdict = bounded_run_search(has_b.system, p)
        run = verdict.witness.run
        assert validate_run(has_b.system, p.restrict(2), run.restrict(2))


@pytest.mark.parametrize("variant", [None, "a", "e", "buchi", "muller"])
def test_search_agrees_with_exhaustive_enumeration(variant):
    rng = random.Random(2024)
    for case in range(30):
        depth = 1 + case % 3
        ts = random_system(rng, depth=max(2, depth))
        p = random_window(rng, depth)
        if variant is None:
            cond = None
        elif variant == "muller":
            cond = AcceptanceCondition(variant=AcceptanceVariant.MULLER,
                                       muller_sets=(frozenset({"s"}), frozenset({"s", "t"})))
        else:
            cond = AcceptanceCondition(variant=AcceptanceVariant(variant), accepting=frozenset({"s"}))
        searched = bounded_run_search(ts, p, cond)
        brute = exhaustive_verdict(ts, p, cond)
        assert searched.outcome == brute.outcome, f"case {case}: {searched.summary()} vs {brute.summary()}"
        if searched.witness is not None:
            assert validate_run(ts, searched.witness.picture, searched.witness.run)


def test_exhaustive_respects_enumeration_bound():
    cells = [(letter, state) for letter in "ab#" for state in "st"]
    free = TilingSystem(states=("s", "t"), alphabet=Alphabet(letters=("a", "b")),
                        tiles=frozenset(Square(*corners) for corners in itertools.product(cells, repeat=4)))
    # nine cells with two states each
    with pytest.raises(BudgetExhausted):
        exhaustive_verdict(free, omega(["aa"] * 2), limit=500)
    assert exhaustive_verdict(free, omega(["aa"] * 2), limit=512).outcome == VerdictOutcome.WITNESS_YES
    with pytest.raises(BudgetExhausted):
        exhaustive_verdict(free, omega(["a"]), limit=0)


def test_exhaustive_skips_states_never_seen_with_a_letter(has_b, loader):
    # has_b pairs a and # with n only, b with y only: a single candidate run
    p = loader.load_picture("b_at_2_2")
    verdict = exhaustive_verdict(has_b.system, p, has_b.condition, limit=1)
    assert verdict.outcome == VerdictOutcome.WITNESS_YES
    assert verdict.witness.run == has_b_run(p)


def test_explicit_zero_budget_is_honoured(has_b):
    with pytest.raises(BudgetExhausted):
        bounded_run_search(has_b.system, omega(["a"]), has_b.condition, budget=0)


@given(st.integers(min_value=1, max_value=4), st.sampled_from(list(AcceptanceMode)), st.randoms(use_true_random=False))
def test_a_refutation_is_an_e_witness_for_the_other_states(depth, mode, rng):
    p = random_window(rng, depth)
    cols, nrows = p.domain_shape
    run = RunAssignment(rows=tuple(tuple(rng.choice("st") for _ in range(cols)) for _ in range(nrows)))
    all_s = AcceptanceCondition(variant=AcceptanceVariant.A, accepting=frozenset({"s"}), mode=mode)
    some_t = AcceptanceCondition(variant=AcceptanceVariant.E, accepting=frozenset({"t"}), mode=mode)
    a_verdict = evaluate_acceptance(run, all_s, p)
    e_verdict = evaluate_acceptance(run, some_t, p)
    assert (a_verdict.outcome == VerdictOutcome.CERTIFIED_NO) == (e_verdict.outcome == VerdictOutcome.WITNESS_YES)


def test_emptiness_refutations_persist_at_greater_depth():
    rng = random.Random(45)
    refuted = 0
    for case in range(50):
        ts = random_system(rng, depth=2)
        at_4 = emptiness_at_depth(ts, 4).outcome
        at_5 = emptiness_at_depth(ts, 5).outcome
        if at_4 == VerdictOutcome.CERTIFIED_NO:
            refuted += 1
            assert at_5 == VerdictOutcome.CERTIFIED_NO, f"case {case}"
        # a run at depth 5 restricts to one at depth 4
        if at_5 == VerdictOutcome.WITNESS_YES:
            assert at_4 == VerdictOutcome.WITNESS_YES, f"case {case}"
    print(f"✅ {refuted} of 50 systems refuted at depth 4 stay refuted at depth 5")
