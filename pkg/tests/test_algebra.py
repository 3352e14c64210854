import random

import pytest
from hypothesis import given, settings, strategies as st

from agt.algebra import (
    AlphabetMismatch,
    BudgetExceeded,
    NotInvertible,
    NotReversible,
    disjoint_union,
    dual,
    enrich,
    enriched_dual,
    flatten_label,
    inverse,
    power,
    product,
    reduction,
)
from agt.constructions import corpus_machine, sink_machine
from agt.dynamics import is_identity
from agt.machine import Mealy, classify, parse_machine

from conftest import MACHINE_NAMES, random_machine
from oracles import reduced_words

SINK = parse_machine("mealy v1\nstates: e\nalphabet: a\ne a -> e a\n")


def edge(m, q, a):
    return m.delta(q, a), m.lam(q, a)


def test_dual_cayley_z3_edges():
    d = dual(corpus_machine("cayley_z3"))
    assert edge(d, "2", "2") == ("2", "1")
    assert edge(d, "1", "2") == ("0", "0")


def test_dual_sink_self_dual():
    d = dual(SINK)
    assert d.states == ("a",) and d.alphabet == ("e",)
    assert classify(d).sink_states == ("a",)


@pytest.mark.parametrize("name", MACHINE_NAMES)
def test_dual_involution_corpus(name):
    m = corpus_machine(name)
    assert dual(dual(m)) == m


def test_inverse_adding():
    inv = inverse(corpus_machine("adding"))
    assert inv.states == ("a^-1", "e^-1")
    assert edge(inv, "a^-1", "1") == ("e^-1", "0")
    assert edge(inv, "a^-1", "0") == ("a^-1", "1")


def test_inverse_sink():
    inv = inverse(SINK)
    assert inv.states == ("e^-1",) and edge(inv, "e^-1", "a") == ("e^-1", "a")


def test_inverse_not_invertible():
    with pytest.raises(NotInvertible) as exc:
        inverse(corpus_machine("cayley_z3"))
    assert exc.value.state in ("1", "2")


def test_enrich_sizes_and_edge():
    assert enrich(dual(corpus_machine("aleshin"))).n_letters == 6
    e = enrich(corpus_machine("cayley_z3"))
    assert edge(e, "1", "1^-1") == ("0", "1^-1")


def test_enrich_not_reversible():
    with pytest.raises(NotReversible):
        enrich(corpus_machine("adding"))


def test_enriched_dual_examples():
    ed = enriched_dual(corpus_machine("aleshin"))
    assert ed.states == ("0", "1") and ed.n_letters == 6
    es = enriched_dual(SINK)
    assert es.states == ("a",) and es.alphabet == ("e", "e^-1")
    assert edge(es, "a", "e") == ("a", "e") and edge(es, "a", "e^-1") == ("a", "e^-1")
    g = corpus_machine("grigorchuk")
    assert enriched_dual(g) == dual(disjoint_union(g, inverse(g)))


def test_product_adding_squared():
    a = corpus_machine("adding")
    p = product(a, a)
    assert p.states == ("(a,a)", "(a,e)", "(e,a)", "(e,e)")
    assert edge(p, "(a,a)", "1") == ("(a,e)", "1")
    assert power(a, 2) == p


def test_product_with_sink_is_identity():
    m = corpus_machine("aleshin")
    p = product(m, sink_machine(m.alphabet))
    assert p.states == tuple(f"({q},e)" for q in m.states)
    assert p.transition == m.transition and p.output == m.output


def test_product_mismatch():
    with pytest.raises(AlphabetMismatch):
        product(corpus_machine("aleshin"), corpus_machine("cayley_z3"))
    with pytest.raises(AlphabetMismatch):
        disjoint_union(corpus_machine("aleshin"), corpus_machine("cayley_z3"))


def test_power_budget():
    m = corpus_machine("aleshin")
    assert power(m, 1) == m
    with pytest.raises(BudgetExceeded) as exc:
        power(m, 13)
    assert exc.value.size == 3**13


def test_power_associativity_after_flattening():
    m = corpus_machine("grigorchuk")
    left = product(product(m, m, flatten=True), m, flatten=True)
    right = product(m, product(m, m, flatten=True), flatten=True)
    assert left == right == power(m, 3)
    assert flatten_label("((a,b),c)") == "(a,b,c)"


def test_disjoint_union_renames():
    m = corpus_machine("aleshin")
    u = disjoint_union(m, m)
    assert u.n_states == 6 and u.states[3:] == ("a_1", "b_1", "c_1")


def test_reduction_examples():
    assert reduction(SINK) == SINK
    two = parse_machine("mealy v1\nstates: e1 e2\nalphabet: a\ne1 a -> e2 a\ne2 a -> e1 a\n")
    r = reduction(two)
    assert r.states == ("e",) and edge(r, "e", "a") == ("e", "a")
    assert reduction(corpus_machine("adding")) == corpus_machine("adding")


@pytest.mark.parametrize("name", MACHINE_NAMES)
def test_reduction_preserves_word_problem(name):
    m = corpus_machine(name)
    r = reduction(m)
    survivors = [q for q in m.states if q in r.states]
    signed = classify(m).invertible
    for length in range(0, 5):
        for w in reduced_words(survivors, length, signed=signed):
            assert is_identity(m, w) == is_identity(r, w), w


def test_transport_random():
    seed = 99
    rng = random.Random(seed)
    for _ in range(300):
        m = random_machine(rng)
        cm, cd = classify(m), classify(dual(m))
        assert cm.invertible == cd.reversible, f"seed {seed}"
        assert cm.bireversible == cd.bireversible, f"seed {seed}"


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_enrich_product_property(seed):
    rng = random.Random(seed)
    n, k = rng.randint(1, 3), rng.randint(1, 3)
    letters = [f"x{j}" for j in range(k)]

    def rev():
        cols = [rng.sample(range(n), n) for _ in range(k)]
        trans = [[cols[j][i] for j in range(k)] for i in range(n)]
        out = [[rng.randrange(k) for _ in range(k)] for _ in range(n)]
        return Mealy([f"s{i}" for i in range(n)], letters, trans, out)

    m1, m2 = rev(), rev()
    assert enrich(product(m1, m2)) == product(enrich(m1), enrich(m2))
