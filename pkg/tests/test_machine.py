import random

import pytest
from hypothesis import given, settings, strategies as st

from agt.constructions import corpus_machine, corpus_text
from agt.machine import (
    DuplicateTransitionError,
    IncompleteMachineError,
    MachineError,
    MachineSyntaxError,
    Mealy,
    UnknownIdentifierError,
    classify,
    parse_machine,
    serialize,
)

from conftest import MACHINE_NAMES, random_machine

SINK_FILE = "mealy v1\nstates: e\nalphabet: a\ne a -> e a\n"


def test_parse_cayley_z3_edge():
    m = corpus_machine("cayley_z3")
    assert (m.n_states, m.n_letters) == (3, 3)
    assert m.delta("2", "1") == "0" and m.lam("2", "1") == "0"


def test_sink_file_roundtrip_exact():
    m = parse_machine(SINK_FILE)
    assert m.states == ("e",) and m.alphabet == ("a",)
    assert serialize(m) == SINK_FILE


def test_serialize_orders_lines_and_strips_comments():
    text = "# c\nmealy v1\r\nstates: p q\nalphabet: 0 1\n\nq 1 -> q 1  # tail\nq 0 -> q 0\np 1 -> p 0\np 0 -> q 1\n"
    out = serialize(parse_machine(text))
    assert out.splitlines()[3:] == ["p 0 -> q 1", "p 1 -> p 0", "q 0 -> q 0", "q 1 -> q 1"]
    assert "\r" not in out


def test_cayley_z3_first_line():
    lines = serialize(corpus_machine("cayley_z3")).splitlines()
    assert len(lines) == 12 and lines[3] == "0 0 -> 0 0"


def test_incomplete_lists_every_missing_pair():
    with pytest.raises(IncompleteMachineError) as exc:
        parse_machine("mealy v1\nstates: p q\nalphabet: 0 1\np 0 -> p 0\np 1 -> p 1\n")
    assert set(exc.value.missing) == {("q", "0"), ("q", "1")}


def test_duplicate_transition():
    with pytest.raises(DuplicateTransitionError):
        parse_machine("mealy v1\nstates: p\nalphabet: 0\np 0 -> p 0\np 0 -> p 0\n")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError):
        parse_machine("mealy v1\nstates: p\nalphabet: 0\np 0 -> r 0\n")


@pytest.mark.parametrize(
    "text",
    [
        "",
        "mealy v2\nstates: p\nalphabet: 0\np 0 -> p 0\n",
        "mealy v1\nalphabet: 0\n",
        "mealy v1\nstates: p\nalphabet: 0\np 0 p 0\n",
        "mealy v1\nstates: p!\nalphabet: 0\np! 0 -> p! 0\n",
        "mealy v1\nstates: p p\nalphabet: 0\np 0 -> p 0\n",
    ],
)
def test_syntax_errors(text):
    with pytest.raises(MachineError):
        parse_machine(text)


def test_syntax_error_reports_line():
    with pytest.raises(MachineSyntaxError) as exc:
        parse_machine("mealy v1\nstates: p\nalphabet: 0\n\np 0 => p 0\n")
    assert exc.value.lineno == 5


def test_classify_aleshin():
    f = classify(corpus_machine("aleshin"))
    assert f.invertible and f.reversible and f.output_reversible and f.bireversible


def test_classify_adding():
    f = classify(corpus_machine("adding"))
    assert f.invertible and not f.reversible
    assert f.sink_states == ("e",) and f.sink_accessible_from_all


def test_classify_cayley_z3():
    f = classify(corpus_machine("cayley_z3"))
    assert f.reversible and not f.invertible and f.sink_states == ()


@pytest.mark.parametrize("name", MACHINE_NAMES)
def test_corpus_roundtrip(name):
    text = corpus_text(name)
    m = parse_machine(text)
    assert parse_machine(serialize(m)) == m


def test_random_machines_invariants():
    seed = 1234
    rng = random.Random(seed)
    for _ in range(300):
        m = random_machine(rng)
        f = classify(m)
        assert parse_machine(serialize(m)) == m, f"seed {seed}"
        assert f.bireversible == (f.reversible and f.output_reversible)
        if f.bireversible:
            assert f.invertible, f"seed {seed}"


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_roundtrip_property(seed):
    m = random_machine(random.Random(seed), max_states=5, max_letters=4)
    assert parse_machine(serialize(m)) == m


def test_mealy_rejects_bad_tables():
    with pytest.raises(MachineError):
        Mealy(("p",), ("0",), [[1]], [[0]])


def test_operator_names_roundtrip():
    from agt.algebra import inverse, power

    for m in (inverse(corpus_machine("aleshin")), power(corpus_machine("adding"), 2)):
        assert parse_machine(serialize(m)) == m
