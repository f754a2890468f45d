"""
Tests for the corpus fidelity sweep script
"""

import sys
from pathlib import Path

import jsonlines

sys.path.append(str(Path(__file__).parent.parent))

from verify_corpus import CorpusVerifier

DATA_PATH = str(Path(__file__).parent.parent / "data")


def test_triples_are_ordered():
    verifier = CorpusVerifier(DATA_PATH, max_word_length=1, depths=(1, 2))
    triples = verifier.triples()
    # six machines, words "", a, b, depths 1 and 2
    assert len(triples) == 6 * 3 * 2
    assert [(m.name, w, d) for m, w, d in triples[:4]] == [
        ("m_a", "", 1), ("m_a", "", 2), ("m_a", "a", 1), ("m_a", "a", 2),
    ]


def test_sweep_writes_a_jsonl_report(tmp_path):
    report = tmp_path / "fidelity.jsonl"
    verifier = CorpusVerifier(DATA_PATH, report_file=str(report), max_word_length=1, depths=(1, 3))
    records = verifier.run(workers=1)
    verifier.save_report(records)

    with jsonlines.open(report) as reader:
        saved = list(reader)
    assert saved == records
    assert all(record["agreement"] for record in saved)
    assert verifier.print_summary(saved)
    print(f"✅ {len(saved)} fidelity records saved")
