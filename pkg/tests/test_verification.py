"""
Tests for reduction fidelity: direct simulation against the compiled K system
"""

import itertools

import pytest

from omegatile.core.errors import NonPositive
from omegatile.core.verification import format_record, pad_word, render_records, render_text, verify_reduction
from omegatile.core.verdict_models import VerdictOutcome


def test_pad_word():
    assert pad_word("ab", 4) == "abaa"
    assert pad_word("abbb", 2) == "ab"
    assert pad_word("", 1) == "a"


def test_m_right_rows_match_the_oracle(m_right):
    report = verify_reduction(m_right, "a" * 10, 6)
    assert report.oracle_verdict == VerdictOutcome.WITNESS_YES
    assert report.compiled_verdict == VerdictOutcome.WITNESS_YES
    assert report.agreement
    assert len(report.rows) == 6
    for row in report.rows:
        assert row.consistent
        assert row.decoded == row.oracle
    print(f"✅ {report.machine_id}: {len(report.rows)} rows agree with the oracle")


def test_halting_machine_is_refuted_on_both_sides(m_a):
    report = verify_reduction(m_a, "abaa", 6)
    assert report.padded_word == "abaaaa"
    assert report.oracle_verdict == report.compiled_verdict == VerdictOutcome.CERTIFIED_NO
    assert report.agreement
    assert report.rows == []


def test_machine_without_accepting_states(m_reject):
    report = verify_reduction(m_reject, "ab", 3)
    assert report.oracle_verdict == report.compiled_verdict == VerdictOutcome.CERTIFIED_NO
    assert report.agreement


def test_depth_must_be_positive(m_right):
    with pytest.raises(NonPositive):
        verify_reduction(m_right, "a", 0)


def test_fidelity_sweep_over_the_corpus(machines):
    # every word of length at most 6, depths 2 to 8
    mismatches = []
    checked = 0
    for name in sorted(machines):
        for length in range(0, 7):
            for letters in itertools.product("ab", repeat=length):
                for depth in range(2, 9):
                    checked += 1
                    report = verify_reduction(machines[name], "".join(letters), depth)
                    if not report.agreement:
                        mismatches.append((name, "".join(letters), depth))
    assert checked == 6 * 127 * 7
    assert not mismatches, f"disagreements: {mismatches[:10]}"
    print(f"🎉 {checked} (machine, word, depth) triples agree with the compiled systems")


def test_records_output(m_right):
    report = verify_reduction(m_right, "aaa", 3)
    lines = render_records(report).splitlines()
    assert lines[0].startswith("kind=fidelity machine=m_right word=aaa depth=3")
    assert "agreement=true" in lines[0]
    assert "budget_exhausted=false" in lines[0]
    assert len(lines) == 1 + len(report.rows)
    assert all(line.startswith("kind=row ") for line in lines[1:])


def test_format_record_quotes_blank_values():
    assert format_record({"a": 1, "b": "x y", "c": True}) == 'a=1 b="x y" c=true'
    assert format_record({"empty": ""}) == 'empty=""'


def test_text_report(m_a):
    text = render_text(verify_reduction(m_a, "ab", 2))
    assert text.startswith("machine: m_a\n")
    assert text.rstrip().endswith("agreement: yes")
