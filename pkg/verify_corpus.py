#!/usr/bin/env python3
"""
Reduction Fidelity Sweep

Runs verify_reduction for every machine in data/machines/, every word up to
a given length and every depth in a range, in parallel, and writes one JSON
record per (machine, word, depth) triple.
"""

import argparse
import itertools
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import jsonlines

# Add omegatile to Python path
sys.path.insert(0, str(Path(__file__).parent))

from omegatile.core.data import DataLoader
from omegatile.core.turing_models import TuringMachine
from omegatile.core.verification import verify_reduction

Triple = Tuple[TuringMachine, str, int]


def _verify(job: Tuple[TuringMachine, str, int, Optional[int]]) -> Dict[str, Any]:
    machine, word, depth, budget = job
    return verify_reduction(machine, word, depth, budget).record()


class CorpusVerifier:
    """Sweeps the machine corpus and collects fidelity records"""

    def __init__(self, data_path: Optional[str] = None, report_file: str = "data/fidelity_report.jsonl",
                 max_word_length: int = 6, depths: Tuple[int, int] = (2, 8), budget: Optional[int] = None):
        self.loader = DataLoader(data_path)
        self.report_file = Path(report_file)
        self.max_word_length = max_word_length
        self.depths = depths
        self.budget = budget

    def triples(self) -> List[Triple]:
        """(machine, word, depth) in a fixed order: machine name, word length, word, depth"""
        machines = self.loader.load_machines()
        jobs = []
        for name in sorted(machines):
            machine = machines[name]
            for length in range(self.max_word_length + 1):
                for letters in itertools.product(machine.input_alphabet, repeat=length):
                    for depth in range(self.depths[0], self.depths[1] + 1):
                        jobs.append((machine, "".join(letters), depth))
        return jobs

    def run(self, workers: Optional[int] = None) -> List[Dict[str, Any]]:
        jobs = [(machine, word, depth, self.budget) for machine, word, depth in self.triples()]
        print(f"📄 Verifying {len(jobs)} (machine, word, depth) triples")
        if workers == 1:
            return [_verify(job) for job in jobs]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_verify, jobs, chunksize=16))

    def save_report(self, records: List[Dict[str, Any]]) -> None:
        self.report_file.parent.mkdir(parents=True, exist_ok=True)
        with jsonlines.open(self.report_file, 'w') as writer:
            writer.write_all(records)
        print(f"💾 Report saved to: {self.report_file}")

    def print_summary(self, records: List[Dict[str, Any]]) -> bool:
        disagreements = [r for r in records if not r["agreement"]]
        exhausted = [r for r in records if r["budget_exhausted"]]

        print(f"\n{'='*60}")
        print("REDUCTION FIDELITY SUMMARY")
        print(f"{'='*60}")
        print(f"🕒 Finished: {datetime.now().isoformat(timespec='seconds')}")
        print(f"📄 Triples: {len(records)}")
        print(f"✅ Agreeing: {len(records) - len(disagreements)}")
        print(f"⚠️  Budget exhausted: {len(exhausted)}")
        print(f"❌ Disagreeing: {len(disagreements)}")
        for record in disagreements[:10]:
            print(f"   - {record['machine']} word={record['word'] or '-'} depth={record['depth']}: "
                  f"oracle {record['oracle']}, compiled {record['compiled']}")
        return not disagreements


def main() -> int:
    parser = argparse.ArgumentParser(description="Reduction fidelity sweep over data/machines")
    parser.add_argument("--max-word-length", type=int, default=6)
    parser.add_argument("--min-depth", type=int, default=2)
    parser.add_argument("--max-depth", type=int, default=8)
    parser.add_argument("--budget", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--report", default="data/fidelity_report.jsonl")
    args = parser.parse_args()

    print("🚀 Reduction Fidelity Sweep")
    print("=" * 50)
    verifier = CorpusVerifier(report_file=args.report, max_word_length=args.max_word_length,
                              depths=(args.min_depth, args.max_depth), budget=args.budget)
    try:
        records = verifier.run(args.workers)
    except Exception as e:
        print(f"\n💥 Fatal error during the sweep: {e}")
        return 1
    verifier.save_report(records)
    if verifier.print_summary(records):
        print("\n🎉 Every triple agrees!")
        return 0
    return 1


if __name__ == "__main__":
    sys.exit(main())
