"""Letter-to-letter transducers (Mealy machines), classification and the text format.

A machine is stored as two index tables: ``transition[i][j]`` is the index of the
state reached from state ``i`` on letter ``j`` and ``output[i][j]`` the index of the
letter written.  Identifiers keep their declaration order everywhere.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Mealy",
    "ClassFlags",
    "MachineError",
    "MachineSyntaxError",
    "IncompleteMachineError",
    "DuplicateTransitionError",
    "UnknownIdentifierError",
    "parse_machine",
    "serialize",
    "classify",
    "identity_sinks",
    "check_identifier",
]

HEADER = "mealy v1"

# Plain identifiers are [A-Za-z0-9_]+.  Machines produced by the operators also
# carry the rendered forms "q^-1" and "(q,p)", so the file grammar admits them.
_IDENT = re.compile(r"^[A-Za-z0-9_(),^\-]+$")


class MachineError(ValueError):
    """Base class for malformed machine input."""


class MachineSyntaxError(MachineError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class IncompleteMachineError(MachineError):
    def __init__(self, missing: Sequence[tuple[str, str]]):
        pairs = ", ".join(f"({q}, {a})" for q, a in missing)
        super().__init__(f"missing transitions for {pairs}")
        self.missing = list(missing)


class DuplicateTransitionError(MachineError):
    def __init__(self, lineno: int, state: str, letter: str):
        super().__init__(f"line {lineno}: duplicate transition for ({state}, {letter})")
        self.lineno = lineno
        self.pair = (state, letter)


class UnknownIdentifierError(MachineError):
    def __init__(self, lineno: int, ident: str, kind: str):
        super().__init__(f"line {lineno}: unknown {kind} {ident!r}")
        self.lineno = lineno
        self.ident = ident


def check_identifier(ident: str) -> str:
    if ident == "->" or not _IDENT.match(ident):
        raise MachineError(f"invalid identifier {ident!r}")
    return ident


@dataclass(frozen=True)
class Mealy:
    """A complete deterministic transducer with equal input and output alphabets."""

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    transition: tuple[tuple[int, ...], ...]
    output: tuple[tuple[int, ...], ...]
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "transition", tuple(tuple(r) for r in self.transition))
        object.__setattr__(self, "output", tuple(tuple(r) for r in self.output))
        if len(set(self.states)) != len(self.states):
            raise MachineError("duplicate state identifier")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise MachineError("duplicate letter identifier")
        if not self.states or not self.alphabet:
            raise MachineError("a machine needs at least one state and one letter")
        n, k = len(self.states), len(self.alphabet)
        if len(self.transition) != n or len(self.output) != n:
            raise MachineError("transition tables do not match the state list")
        for row_t, row_o in zip(self.transition, self.output):
            if len(row_t) != k or len(row_o) != k:
                raise MachineError("transition tables do not match the alphabet")
            if any(not 0 <= p < n for p in row_t) or any(not 0 <= b < k for b in row_o):
                raise MachineError("transition table entry out of range")

    @classmethod
    def from_edges(
        cls,
        states: Iterable[str],
        alphabet: Iterable[str],
        edges: Mapping[tuple[str, str], tuple[str, str]],
        notes: Sequence[str] = (),
    ) -> "Mealy":
        """Build from ``{(state, letter): (next_state, out_letter)}``."""
        states = tuple(states)
        alphabet = tuple(alphabet)
        si = {q: i for i, q in enumerate(states)}
        ai = {a: j for j, a in enumerate(alphabet)}
        missing = [(q, a) for q in states for a in alphabet if (q, a) not in edges]
        if missing:
            raise IncompleteMachineError(missing)
        trans = [[si[edges[q, a][0]] for a in alphabet] for q in states]
        out = [[ai[edges[q, a][1]] for a in alphabet] for q in states]
        return cls(states, alphabet, trans, out, tuple(notes))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_letters(self) -> int:
        return len(self.alphabet)

    def state_index(self, q: str) -> int:
        try:
            return self.states.index(q)
        except ValueError:
            raise KeyError(f"unknown state {q!r}") from None

    def letter_index(self, a: str) -> int:
        try:
            return self.alphabet.index(a)
        except ValueError:
            raise KeyError(f"unknown letter {a!r}") from None

    def delta(self, q: str, a: str) -> str:
        return self.states[self.transition[self.state_index(q)][self.letter_index(a)]]

    def lam(self, q: str, a: str) -> str:
        return self.alphabet[self.output[self.state_index(q)][self.letter_index(a)]]

    def edges(self) -> list[tuple[str, str, str, str]]:
        """All transitions as ``(q, a, p, b)`` for ``q --a|b--> p``, in canonical order."""
        return [
            (q, a, self.states[self.transition[i][j]], self.alphabet[self.output[i][j]])
            for i, q in enumerate(self.states)
            for j, a in enumerate(self.alphabet)
        ]

    def __str__(self) -> str:
        return serialize(self)


@dataclass(frozen=True)
class ClassFlags:
    invertible: bool
    reversible: bool
    output_reversible: bool
    bireversible: bool
    sink_states: tuple[str, ...]
    sink_accessible_from_all: bool

    def as_dict(self) -> dict:
        return {
            "invertible": self.invertible,
            "reversible": self.reversible,
            "output_reversible": self.output_reversible,
            "bireversible": self.bireversible,
            "sink_states": list(self.sink_states),
            "sink_accessible_from_all": self.sink_accessible_from_all,
        }


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def parse_machine(text: str) -> Mealy:
    """Parse the ``mealy v1`` text format."""
    lines = [(i + 1, _strip_comment(raw).strip()) for i, raw in enumerate(text.splitlines())]
    lines = [(no, ln) for no, ln in lines if ln]
    if not lines:
        raise MachineSyntaxError(1, "empty machine file")
    no, head = lines[0]
    if head.split() != HEADER.split():
        raise MachineSyntaxError(no, f"expected header {HEADER!r}")

    def declaration(pos: int, key: str) -> tuple[str, ...]:
        if pos >= len(lines):
            raise MachineSyntaxError(lines[-1][0], f"missing '{key}:' line")
        no, ln = lines[pos]
        name, sep, rest = ln.partition(":")
        if not sep or name.strip() != key:
            raise MachineSyntaxError(no, f"expected '{key}:' line")
        ids = tuple(rest.split())
        if not ids:
            raise MachineSyntaxError(no, f"no {key} declared")
        for ident in ids:
            if ident == "->" or not _IDENT.match(ident):
                raise MachineSyntaxError(no, f"invalid identifier {ident!r}")
        if len(set(ids)) != len(ids):
            raise MachineSyntaxError(no, f"duplicate identifier in {key}")
        return ids

    states = declaration(1, "states")
    alphabet = declaration(2, "alphabet")
    sset, aset = set(states), set(alphabet)
    edges: dict[tuple[str, str], tuple[str, str]] = {}
    for no, ln in lines[3:]:
        tok = ln.split()
        if len(tok) != 5 or tok[2] != "->":
            raise MachineSyntaxError(no, "expected '<state> <letter> -> <state> <letter>'")
        q, a, _, p, b = tok
        for ident, pool, kind in ((q, sset, "state"), (a, aset, "letter"), (p, sset, "state"), (b, aset, "letter")):
            if ident not in pool:
                raise UnknownIdentifierError(no, ident, kind)
        if (q, a) in edges:
            raise DuplicateTransitionError(no, q, a)
        edges[q, a] = (p, b)
    return Mealy.from_edges(states, alphabet, edges)


def serialize(m: Mealy) -> str:
    out = [HEADER, "states: " + " ".join(m.states), "alphabet: " + " ".join(m.alphabet)]
    out.extend(f"{q} {a} -> {p} {b}" for q, a, p, b in m.edges())
    return "\n".join(out) + "\n"


def _is_perm(values: Sequence[int], size: int) -> bool:
    return len(values) == size and len(set(values)) == size


def identity_sinks(m: Mealy) -> list[int]:
    """Indices of states ``e`` with ``e.a = e`` and ``e(a) = a`` for every letter."""
    k = m.n_letters
    return [
        i
        for i in range(m.n_states)
        if all(m.transition[i][j] == i and m.output[i][j] == j for j in range(k))
    ]


def classify(m: Mealy) -> ClassFlags:
    n, k = m.n_states, m.n_letters
    invertible = all(_is_perm(m.output[i], k) for i in range(n))
    reversible = all(_is_perm([m.transition[i][j] for i in range(n)], n) for j in range(k))
    # For each output letter b the edges q -> delta(q, a) with lambda(q, a) = b must
    # form a permutation of the states.
    output_reversible = True
    for b in range(k):
        srcs = [0] * n
        dsts = [0] * n
        for i in range(n):
            for j in range(k):
                if m.output[i][j] == b:
                    srcs[i] += 1
                    dsts[m.transition[i][j]] += 1
        if any(c != 1 for c in srcs) or any(c != 1 for c in dsts):
            output_reversible = False
            break
    sinks = identity_sinks(m)
    reach = set(sinks)
    if sinks:
        preds: list[set[int]] = [set() for _ in range(n)]
        for i in range(n):
            for j in range(k):
                preds[m.transition[i][j]].add(i)
        queue = deque(sinks)
        while queue:
            p = queue.popleft()
            for q in preds[p]:
                if q not in reach:
                    reach.add(q)
                    queue.append(q)
    return ClassFlags(
        invertible=invertible,
        reversible=reversible,
        output_reversible=output_reversible,
        bireversible=reversible and output_reversible,
        sink_states=tuple(m.states[i] for i in sinks),
        sink_accessible_from_all=bool(sinks) and len(reach) == n,
    )
