"""
End-to-end tests of the omegatile command line
"""

from pathlib import Path

import pytest

from omegatile.cli.main import main
from omegatile.core.data import parse_document, parse_system_document

DATA = Path(__file__).parent.parent / "data"
M_RIGHT = str(DATA / "machines" / "m_right.tm")
M_A = str(DATA / "machines" / "m_a.tm")
ONLY_A = str(DATA / "systems" / "only_a.ts")
HAS_B = str(DATA / "systems" / "has_b.ts")
ALL_A3 = str(DATA / "pictures" / "all_a3.pic")
B_AT_2_2 = str(DATA / "pictures" / "b_at_2_2.pic")


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_search_run_exit_codes(capsys):
    assert run_cli(capsys, "search-run", HAS_B, B_AT_2_2)[0] == 0
    assert run_cli(capsys, "search-run", ONLY_A, B_AT_2_2)[0] == 1
    assert run_cli(capsys, "search-run", ONLY_A, ALL_A3)[0] == 2
    print("✅ exit codes follow the verdicts")


def test_search_run_oracle_agrees(capsys):
    assert run_cli(capsys, "search-run", HAS_B, B_AT_2_2, "--oracle")[0] == 0


def test_condition_flag_overrides_the_file(capsys):
    # E on {s}: the all-a run of only_a is a witness
    assert run_cli(capsys, "search-run", ONLY_A, ALL_A3, "--condition", "e")[0] == 0


def test_budget_exhaustion(capsys):
    code, _, err = run_cli(capsys, "search-run", HAS_B, ALL_A3, "--budget", "3")
    assert code == 3
    assert "budget" in err


def test_records_format(capsys):
    code, out, _ = run_cli(capsys, "search-run", HAS_B, B_AT_2_2, "--format", "records")
    assert code == 0
    assert out.startswith("kind=verdict outcome=witness_yes depth=3")


def test_usage_errors(capsys):
    assert run_cli(capsys, "no-such-verb")[0] == 64
    assert run_cli(capsys, "verify-reduction", M_RIGHT, "--depth", "0")[0] == 64
    assert run_cli(capsys, "emptiness", HAS_B)[0] == 64


def test_data_errors(capsys, tmp_path):
    assert run_cli(capsys, "search-run", str(tmp_path / "missing.ts"), ALL_A3)[0] == 65
    assert run_cli(capsys, "search-run", M_RIGHT, ALL_A3)[0] == 65
    bad = tmp_path / "bad.tm"
    bad.write_text("turing-machine v1\nstates: q\n")
    code, _, err = run_cli(capsys, "compile-k", str(bad))
    assert code == 65
    assert "ParseError" in err


def test_compile_k_output_parses(capsys, tmp_path):
    code, out, _ = run_cli(capsys, "compile-k", M_RIGHT)
    assert code == 0
    document = parse_system_document(out)
    assert document.provenance == "K(m_right)"
    assert document.condition is not None

    target = tmp_path / "k.ts"
    assert run_cli(capsys, "compile-k", M_RIGHT, "-o", str(target))[0] == 0
    assert target.read_text() == out


def test_outputs_are_deterministic(capsys):
    first = run_cli(capsys, "compile-h", M_A)
    second = run_cli(capsys, "compile-h", M_A)
    assert first == second


def test_theta_writes_a_machine(capsys):
    code, out, _ = run_cli(capsys, "theta", M_A, M_RIGHT)
    assert code == 0
    assert parse_document(out).name == "theta(m_a,m_right)"
    assert "theta~start" in parse_document(out).accepting


def test_theta_for_buchi_leaves_the_start_state_out_of_f(capsys):
    code, out, _ = run_cli(capsys, "theta", M_A, M_RIGHT, "--acceptance", "buchi")
    assert code == 0
    theta = parse_document(out)
    assert "theta~start" not in theta.accepting
    assert "Z~q0" in theta.accepting


def test_verify_reduction_help_states_its_exit_codes(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["verify-reduction", "--help"])
    assert exit_info.value.code == 0
    out = " ".join(capsys.readouterr().out.split())
    assert "0 agreement, 1 disagreement, 3 budget exhausted" in out


def test_verify_reduction(capsys):
    code, out, _ = run_cli(capsys, "verify-reduction", M_RIGHT, "--word", "aaaaaaaaaa", "--depth", "6")
    assert code == 0
    assert "agreement: yes" in out

    code, out, _ = run_cli(capsys, "verify-reduction", M_A, "--word", "abaa", "--depth", "4", "--format", "records")
    assert code == 0
    assert "agreement=true" in out.splitlines()[0]


def test_verify_reduction_with_seeded_word(capsys):
    first = run_cli(capsys, "verify-reduction", M_A, "--depth", "3", "--seed", "5")
    second = run_cli(capsys, "verify-reduction", M_A, "--depth", "3", "--seed", "5")
    assert first == second
    assert first[0] == 0


def test_check_run(capsys, tmp_path):
    good = tmp_path / "good.run"
    good.write_text("run omega-prefix 3\nn n n n\nn n n n\nn n y n\nn n n n\n")
    assert run_cli(capsys, "check-run", HAS_B, B_AT_2_2, str(good))[0] == 0

    bad = tmp_path / "bad.run"
    bad.write_text("run omega-prefix 3\n" + "n n n n\n" * 4)
    code, out, _ = run_cli(capsys, "check-run", HAS_B, B_AT_2_2, str(bad))
    assert code == 1
    assert "is not a tile" in out


def test_emptiness(capsys):
    assert run_cli(capsys, "emptiness", HAS_B, "--depth", "2")[0] == 0


def test_encode_and_decode_words(capsys, tmp_path):
    picture = tmp_path / "w.pic"
    assert run_cli(capsys, "encode", "--word", "abbaabbbaabab", "--depth", "3", "-o", str(picture))[0] == 0
    code, out, _ = run_cli(capsys, "decode", str(picture))
    assert code == 0
    # cells of a depth-3 window fix the word positions 1..6 without gaps
    assert out == "abbaab\n"


def test_encode_and_decode_streams(capsys, tmp_path):
    stream = tmp_path / "p.pbar"
    assert run_cli(capsys, "encode", B_AT_2_2, "-o", str(stream))[0] == 0
    code, out, _ = run_cli(capsys, "decode", str(stream))
    assert code == 0
    assert parse_document(out) == parse_document(Path(B_AT_2_2).read_text())


def test_encode_run_code(capsys, tmp_path):
    run = tmp_path / "r.run"
    run.write_text("run omega-prefix 2\nn n n\nn y n\nn n n\n")
    code_file = tmp_path / "r.rhobar"
    assert run_cli(capsys, "encode", str(run), "--system", HAS_B, "-o", str(code_file))[0] == 0
    code, out, _ = run_cli(capsys, "decode", str(code_file))
    assert code == 0
    assert out.splitlines() == ["(1,1) y", "(1,2) n", "(2,1) n"]


def test_show(capsys):
    code, out, _ = run_cli(capsys, "show", M_RIGHT)
    assert code == 0
    assert out.startswith("machine m_right: 1 states, 2 transitions")

    code, out, _ = run_cli(capsys, "show", HAS_B)
    assert code == 0
    assert "deterministic: yes" in out


@pytest.mark.parametrize("path", [ONLY_A, ALL_A3, str(DATA / "pictures" / "finite_2x2.pic")])
def test_show_accepts_every_sample_kind(capsys, path):
    code, out, _ = run_cli(capsys, "show", path)
    assert code == 0
    assert out.strip()
