"""Machine zoo: sinks, S_Q, dual-embedding sums, finite groups and Cayley machines."""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .algebra import disjoint_union, dual, NotInvertible
from .machine import Mealy, MachineError, classify, parse_machine

__all__ = [
    "GroupTableError",
    "NotAssociative",
    "NoIdentity",
    "NoInverse",
    "FiniteGroupTable",
    "zn_group",
    "group_from_table",
    "format_group_table",
    "sink_machine",
    "add_sink",
    "s_q",
    "s_q_dual",
    "dual_embed_sum",
    "cayley_machine",
    "bi_cayley_machine",
    "partial_sums",
    "corpus_names",
    "corpus_text",
    "corpus_machine",
    "corpus_group",
]

SINK = "e"
EXHAUSTIVE_ASSOC_LIMIT = 64
SAMPLED_TRIPLES = 10**5


class GroupTableError(MachineError):
    pass


class NotAssociative(GroupTableError):
    def __init__(self, a: str, b: str, c: str):
        super().__init__(f"({a}{b}){c} != {a}({b}{c})")
        self.witness = (a, b, c)


class NoIdentity(GroupTableError):
    def __init__(self, element: str):
        super().__init__(f"first element {element!r} is not a two-sided identity")
        self.witness = element


class NoInverse(GroupTableError):
    def __init__(self, element: str):
        super().__init__(f"element {element!r} has no two-sided inverse")
        self.witness = element


@dataclass(frozen=True)
class FiniteGroupTable:
    elements: tuple[str, ...]
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def product(self, word: Sequence[int]) -> int:
        g = 0
        for x in word:
            g = self.mul[g][x]
        return g

    @classmethod
    def build(cls, elements: Sequence[str], mul: Sequence[Sequence[int]], *, seed: int = 0) -> "FiniteGroupTable":
        elements = tuple(elements)
        n = len(elements)
        if n == 0:
            raise GroupTableError("a group needs at least one element")
        if len(set(elements)) != n:
            raise GroupTableError("duplicate element identifier")
        mul = tuple(tuple(r) for r in mul)
        if len(mul) != n or any(len(r) != n for r in mul):
            raise GroupTableError("multiplication table must be square of size |G|")
        if any(not 0 <= x < n for r in mul for x in r):
            raise GroupTableError("table entry out of range")
        for i in range(n):
            if mul[0][i] != i or mul[i][0] != i:
                raise NoIdentity(elements[0])
        inv = []
        for i in range(n):
            cands = [j for j in range(n) if mul[i][j] == 0 and mul[j][i] == 0]
            if not cands:
                raise NoInverse(elements[i])
            inv.append(cands[0])
        if n <= EXHAUSTIVE_ASSOC_LIMIT:
            triples = ((a, b, c) for a in range(n) for b in range(n) for c in range(n))
        else:
            warnings.warn(f"group of order {n}: associativity sampled on {SAMPLED_TRIPLES} triples")
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(SAMPLED_TRIPLES))
        for a, b, c in triples:
            if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                raise NotAssociative(elements[a], elements[b], elements[c])
        return cls(elements, mul, tuple(inv))


def zn_group(n: int) -> FiniteGroupTable:
    if n < 1:
        raise GroupTableError("Z_n needs n >= 1")
    return FiniteGroupTable(
        tuple(str(i) for i in range(n)),
        tuple(tuple((i + j) % n for j in range(n)) for i in range(n)),
        tuple((-i) % n for i in range(n)),
    )


def group_from_table(text: str) -> FiniteGroupTable:
    """Parse ``group v1`` / ``elements: ...`` / one row of products per element."""
    lines = []
    for raw in text.splitlines():
        ln = raw.split("#", 1)[0].strip()
        if ln:
            lines.append(ln)
    if not lines or lines[0].split() != ["group", "v1"]:
        raise GroupTableError("expected header 'group v1'")
    if len(lines) < 2 or not lines[1].startswith("elements:"):
        raise GroupTableError("expected 'elements:' line")
    elements = lines[1][len("elements:") :].split()
    index = {g: i for i, g in enumerate(elements)}
    rows = []
    for ln in lines[2:]:
        try:
            rows.append([index[t] for t in ln.split()])
        except KeyError as exc:
            raise GroupTableError(f"unknown element {exc.args[0]!r}") from None
    return FiniteGroupTable.build(elements, rows)


def format_group_table(g: FiniteGroupTable) -> str:
    out = ["group v1", "elements: " + " ".join(g.elements)]
    out.extend(" ".join(g.elements[x] for x in row) for row in g.mul)
    return "\n".join(out) + "\n"


def sink_machine(alphabet: Sequence[str], name: str = SINK) -> Mealy:
    alphabet = tuple(alphabet)
    if not alphabet:
        raise MachineError("sink machine needs a nonempty alphabet")
    k = len(alphabet)
    return Mealy((name,), alphabet, [[0] * k], [list(range(k))])


def _fresh_sink_name(taken) -> str:
    if SINK not in taken:
        return SINK
    i = 0
    while f"{SINK}_{i}" in taken:
        i += 1
    return f"{SINK}_{i}"


def add_sink(m: Mealy) -> Mealy:
    name = _fresh_sink_name(set(m.states))
    result = disjoint_union(m, sink_machine(m.alphabet, name))
    if name != SINK:
        return Mealy(result.states, result.alphabet, result.transition, result.output, (f"sink renamed to {name}",))
    return result


def s_q_dual(states: Sequence[str], alphabet: Sequence[str] | None = None) -> Mealy:
    """All-loop machine on ``states``: ``q --x|e--> q`` when ``x = q``, ``q --x|x--> q`` otherwise.

    The alphabet defaults to ``states + [e]``.
    """
    states = tuple(states)
    if not states:
        raise MachineError("S_Q needs at least one state")
    if SINK in states:
        raise MachineError(f"state name {SINK!r} is reserved for the sink")
    if alphabet is None:
        alphabet = states + (SINK,)
    alphabet = tuple(alphabet)
    if SINK not in alphabet or not set(states) <= set(alphabet):
        raise MachineError("alphabet must contain the states and the sink")
    e = alphabet.index(SINK)
    out = [[e if x == q else j for j, x in enumerate(alphabet)] for q in states]
    trans = [[i] * len(alphabet) for i in range(len(states))]
    return Mealy(states, alphabet, trans, out)


def s_q(states: Sequence[str]) -> Mealy:
    return dual(s_q_dual(states))


def dual_embed_sum(b: Mealy, h: Sequence[str]) -> Mealy:
    """``A_H``: the dual of ``dual(b + sink)`` joined with the all-loop machine on ``H``."""
    h = tuple(h)
    if not h:
        raise MachineError("H must be nonempty")
    unknown = [q for q in h if q not in b.states]
    if unknown:
        raise MachineError(f"H contains unknown states: {' '.join(unknown)}")
    if not classify(b).invertible:
        from .algebra import _first_non_invertible

        raise NotInvertible(_first_non_invertible(b))
    be = add_sink(b)
    if SINK not in be.states:
        raise MachineError(f"state name {SINK!r} already used by the base machine")
    return dual(disjoint_union(dual(be), s_q_dual(h, be.states)))


def cayley_machine(g: FiniteGroupTable) -> Mealy:
    """0-transition Cayley machine: ``g --x|x--> gx`` unless ``gx = e``, then ``g --x|e--> e``."""
    n = g.order
    trans = [[g.mul[i][x] for x in range(n)] for i in range(n)]
    out = [[0 if g.mul[i][x] == 0 else x for x in range(n)] for i in range(n)]
    return Mealy(g.elements, g.elements, trans, out)


def bi_cayley_machine(g: FiniteGroupTable) -> Mealy:
    """As ``cayley_machine`` but the identity state writes ``e`` on every input."""
    n = g.order
    trans = [[g.mul[i][x] for x in range(n)] for i in range(n)]
    out = [[0 if (i == 0 or g.mul[i][x] == 0) else x for x in range(n)] for i in range(n)]
    return Mealy(g.elements, g.elements, trans, out)


@dataclass(frozen=True)
class PartialSums:
    phi: tuple[int, ...]
    sums: frozenset[int]
    final: int | None

    @property
    def balanced(self) -> bool:
        return self.final == 0


def partial_sums(u: Sequence[tuple[int, int]], n: int) -> PartialSums:
    """Running sums ``s_j = sum e_i v_i mod n`` of a signed residue word."""
    phi = []
    s = 0
    for v, e in u:
        if not 0 <= v < n:
            raise ValueError(f"residue {v} out of range for modulus {n}")
        if e not in (1, -1):
            raise ValueError("exponents must be +1 or -1")
        s = (s + e * v) % n
        phi.append(s)
    return PartialSums(tuple(phi), frozenset(phi), phi[-1] if phi else None)


# ---------------------------------------------------------------------------
# bundled corpus

_CORPUS = resources.files(__package__) / "corpus"


def corpus_names() -> list[str]:
    return sorted(p.name.rsplit(".", 1)[0] for p in _CORPUS.iterdir() if p.name.endswith((".mealy", ".group")))


def corpus_text(name: str) -> str:
    for ext in (".mealy", ".group"):
        p = _CORPUS / (name + ext)
        if p.is_file():
            return p.read_text(encoding="utf-8")
    raise KeyError(f"no corpus entry {name!r}; known: {', '.join(corpus_names())}")


def corpus_machine(name: str) -> Mealy:
    return parse_machine(corpus_text(name))


def corpus_group(name: str) -> FiniteGroupTable:
    return group_from_table(corpus_text(name))
