"""
Tests for the text formats and the corpus loader
"""

import pytest

from omegatile.core.data import (
    DataLoader, RunDocument, StreamDocument, SystemDocument, parse_document, parse_machine, parse_pbar,
    parse_picture, parse_rhobar, parse_run, parse_system_document, serialize_machine, serialize_pbar,
    serialize_picture, serialize_rhobar, serialize_run, serialize_tiling_system,
)
from omegatile.core.encodings import encode_run, row_major_stream
from omegatile.core.errors import InvariantViolation, ParseError
from omegatile.core.models import AcceptanceVariant, PictureWindow, RunAssignment, WindowKind
from omegatile.core.reductions import compile_K
from omegatile.core.turing_models import Move

MACHINE_TEXT = """turing-machine v1
name: tiny
states: q0 q1
input: a b
tape: a b
initial: q0
accepting: q1
q0 a -> q1 b R   // rewrite and move on
q1 b -> q0 b L
"""


def test_load_m_right(loader):
    m = loader.load_machine("m_right")
    assert m.name == "m_right"
    assert m.states == ("q0",)
    assert m.transition_count() == 2
    assert m.accepting == frozenset({"q0"})


def test_parse_machine_with_comments():
    m = parse_machine(MACHINE_TEXT)
    assert m.name == "tiny"
    (choice,) = m.delta("q0", "a")
    assert (choice.state, choice.symbol, choice.move) == ("q1", "b", Move.R)
    assert m.delta("q1", "a") == []


def test_missing_initial_is_a_parse_error():
    text = MACHINE_TEXT.replace("initial: q0\n", "")
    with pytest.raises(ParseError) as info:
        parse_machine(text)
    assert "initial" in str(info.value)


def test_bad_transition_line_reports_its_line():
    text = MACHINE_TEXT.replace("q1 b -> q0 b L", "q1 b -> q0 b X")
    with pytest.raises(ParseError) as info:
        parse_machine(text)
    assert info.value.line == 9


def test_undeclared_state_suggests_a_name():
    text = MACHINE_TEXT.replace("q1 b -> q0 b L", "q1 b -> qq0 b L")
    with pytest.raises(InvariantViolation) as info:
        parse_machine(text)
    assert "did you mean 'q0'" in str(info.value)


def test_undeclared_tile_state(loader):
    text = serialize_tiling_system(loader.load_system("only_a").system).replace("(a,s) (a,s) / (a,s)", "(a,ss) (a,s) / (a,s)")
    with pytest.raises(InvariantViolation) as info:
        parse_system_document(text)
    assert "did you mean 's'" in str(info.value)


def test_bad_header():
    with pytest.raises(ParseError):
        parse_machine("turing-machine v2\nstates: q\n")
    with pytest.raises(ParseError):
        parse_document("tiling v1\n")
    with pytest.raises(ParseError):
        parse_picture("picture omega-prefix x\n")


def test_system_document_fields(only_a):
    assert isinstance(only_a, SystemDocument)
    assert only_a.provenance == "only-a"
    assert only_a.condition.variant == AcceptanceVariant.A
    assert len(only_a.system.tiles) == 4


def test_muller_line_selects_the_muller_variant(only_a):
    text = serialize_tiling_system(only_a.system) + "muller: {s} {s}\n"
    document = parse_system_document(text)
    assert document.condition.variant == AcceptanceVariant.MULLER
    assert document.condition.muller_sets == (frozenset({"s"}), frozenset({"s"}))


def test_machine_round_trip(machines):
    for name, m in machines.items():
        assert parse_machine(serialize_machine(m)) == m, name


def test_system_round_trip(loader):
    for name, document in loader.load_systems().items():
        text = serialize_tiling_system(document.system, document.condition, document.provenance)
        assert parse_system_document(text) == document, name


def test_compiled_system_round_trip(m_back):
    k = compile_K(m_back)
    document = parse_system_document(serialize_tiling_system(k.system, k.condition, k.provenance))
    assert document.system == k.system
    assert document.condition == k.condition
    assert document.provenance == "K(m_back)"
    print(f"✅ K(m_back) with {len(k.system.tiles)} tiles survives the text format")


def test_picture_round_trip(loader):
    for name, picture in loader.load_pictures().items():
        assert parse_picture(serialize_picture(picture)) == picture, name
    assert loader.load_picture("finite_2x2").kind == WindowKind.FINITE


def test_picture_row_count_is_checked():
    with pytest.raises(ParseError):
        parse_picture("picture omega-prefix 2\na a\n")
    with pytest.raises(ParseError):
        parse_picture("picture omega-prefix 2\na a\na # \n")


def test_run_round_trip():
    p = PictureWindow.finite([["a"]])
    run = RunAssignment.constant("s", p.domain_shape)
    document = parse_run(serialize_run(run, WindowKind.FINITE))
    assert document == RunDocument(WindowKind.FINITE, run)

    omega_run = RunAssignment.constant("q", (3, 3))
    assert parse_run(serialize_run(omega_run, WindowKind.OMEGA_PREFIX)).run == omega_run


def test_stream_documents(loader):
    p = loader.load_picture("b_at_2_2")
    stream = row_major_stream(p)
    document = parse_pbar(serialize_pbar(stream, ("a", "b"), p.depth))
    assert document == StreamDocument(stream, 3)

    code = encode_run(RunAssignment.constant("s", (4, 4)), ("s", "t"))
    assert parse_rhobar(serialize_rhobar(code)) == code
    assert parse_document(serialize_rhobar(code)) == code


def test_loader_wraps_failures(tmp_path):
    (tmp_path / "machines").mkdir()
    (tmp_path / "machines" / "broken.tm").write_text("turing-machine v1\nstates: q\n")
    with pytest.raises(ValueError) as info:
        DataLoader(str(tmp_path)).load_machine("broken")
    assert "Error loading machine broken" in str(info.value)
