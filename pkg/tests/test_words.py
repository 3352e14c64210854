import random

import pytest
from hypothesis import given, settings, strategies as st

from agt.constructions import corpus_machine, dual_embed_sum
from agt.dynamics import act, g_regular
from agt.words import (
    WordError,
    commutator_length,
    commutator_words,
    content,
    erase,
    format_word,
    invert,
    is_fragile,
    is_strongly_fragile,
    is_trivial,
    mirror,
    parse_word,
    primitive_root,
    reduce,
    strong_fragility,
)

from oracles import naive_reduce

W = parse_word
letters = st.tuples(st.sampled_from("abcde"), st.sampled_from((1, -1)))
words = st.lists(letters, max_size=12).map(tuple)


def test_parse_format_roundtrip():
    w = W("a b^-1 c")
    assert w == (("a", 1), ("b", -1), ("c", 1))
    assert format_word(w) == "a b^-1 c"


def test_parse_against_states():
    assert W("x^-1", ["x^-1"]) == (("x^-1", 1),)
    with pytest.raises(WordError):
        W("z", ["a", "b"])


@pytest.mark.parametrize(
    "src, expect",
    [
        ("a b b^-1 a^-1", ""),
        ("a b a^-1", "a b a^-1"),
        ("a b^-1 c b c^-1 a^-1 a b^-1 a^-1 b", "a b^-1 c b c^-1 b^-1 a^-1 b"),
    ],
)
def test_reduce_examples(src, expect):
    assert reduce(W(src)) == W(expect)


@settings(max_examples=200, deadline=None)
@given(words)
def test_reduce_properties(w):
    r = reduce(w)
    assert r == naive_reduce(w)
    assert reduce(r) == r and len(r) <= len(w)
    assert reduce(w + invert(w)) == ()
    assert mirror(mirror(w)) == w and invert(invert(w)) == w


def test_mirror_invert_examples():
    assert mirror(W("a b")) == W("b a")
    assert mirror(()) == ()
    assert mirror(W("a b^-1 c")) == W("c b^-1 a")
    assert invert(W("a b")) == W("b^-1 a^-1")
    assert invert(W("a^-1")) == W("a")


def test_erase_examples():
    assert erase(W("a b a^-1 b^-1"), "b") == W("a a^-1")
    assert erase(W("a b a^-1 b^-1"), "a") == W("b b^-1")
    assert erase(W("q e q^-1 e^-1 e"), "e") == W("q q^-1")
    with pytest.raises(WordError):
        erase(W("a"), "z", ["a"])


def test_is_trivial_examples():
    assert is_trivial(W("q e q^-1"), "e")
    assert not is_trivial(W("q e p"), "e")
    assert is_trivial(W("e e e"), "e")


def test_content():
    assert content(W("a b a^-1")) == {"a", "b"}
    assert content(()) == frozenset()
    assert content(W("a a a")) == {"a"}


def test_is_fragile_trivial_input():
    m = corpus_machine("adding")
    r = is_fragile(m, W("a e a^-1"))
    assert not r and r.reason == "trivial input"


def test_is_fragile_before_last_regular_step():
    b = corpus_machine("aleshin")
    a_q = dual_embed_sum(b, b.states)
    rng = random.Random(7)
    pool = [(q, s) for q in ("a", "b", "c") for s in (1, -1)]
    checked = 0
    for _ in range(30):
        w = reduce(tuple(rng.choice(pool) for _ in range(4)))
        if not w:
            continue
        u = g_regular(a_q, w, 32)
        assert u is not None
        if not u:
            continue
        _, sec = act(a_q, w, u[:-1])
        if is_trivial(sec, "e"):
            continue
        assert is_fragile(a_q, sec), (format_word(w), u)
        checked += 1
    assert checked > 0


def test_strong_fragility_examples():
    assert is_strongly_fragile(W("a b a^-1 b^-1"))
    assert is_strongly_fragile(W("a b^-1 c b c^-1 b^-1 a^-1 b c b^-1 a b a^-1 b^-1 c^-1 b"))
    assert not is_strongly_fragile(W("a b"))
    assert strong_fragility(()) == (True, True)
    assert strong_fragility(W("a a")) == (True, True)


def test_commutator_examples():
    two = list(commutator_words(["a", "b"], 1))
    assert len(two) == 4 and all(len(w) == 4 == commutator_length(2) for w in two)
    assert two[-1] == W("a b a^-1 b^-1")
    three = list(commutator_words(["a", "b", "c"], 1))
    assert min(map(len, three)) == 10 == commutator_length(3)
    with pytest.raises(WordError):
        list(commutator_words(["a"], 3))


def test_commutators_strongly_fragile_and_orders():
    ws = list(commutator_words(["a", "b", "c"], 2, all_orders=True))
    assert len(ws) == 6 * 4**4
    assert all(is_strongly_fragile(w) for w in ws)


def test_primitive_root():
    assert primitive_root("abab") == tuple("ab")
    assert primitive_root("ab") == tuple("ab")
    assert primitive_root("aaa") == ("a",)
    with pytest.raises(WordError):
        primitive_root("")
