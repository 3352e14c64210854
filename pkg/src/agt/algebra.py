"""Operators on transducers: dual, inverse, enrichment, products and reduction."""

from __future__ import annotations

from collections import deque
from itertools import product as cartesian

from .machine import Mealy, MachineError

__all__ = [
    "NotInvertible",
    "NotReversible",
    "AlphabetMismatch",
    "BudgetExceeded",
    "DEFAULT_STATE_BUDGET",
    "INVERSE_SUFFIX",
    "dual",
    "inverse",
    "enrich",
    "enriched_dual",
    "product",
    "power",
    "disjoint_union",
    "reduction",
    "trivial_states",
    "flatten_label",
    "inverse_name",
]

DEFAULT_STATE_BUDGET = 10**6
INVERSE_SUFFIX = "^-1"

# Structural self-check of enriched_dual against its second definition.
CHECK_ENRICHED_DUAL = __debug__


class NotInvertible(MachineError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} does not permute the alphabet")
        self.state = state


class NotReversible(MachineError):
    def __init__(self, letter: str):
        super().__init__(f"letter {letter!r} does not permute the states")
        self.letter = letter


class AlphabetMismatch(MachineError):
    def __init__(self, left: tuple[str, ...], right: tuple[str, ...]):
        super().__init__(f"alphabets differ: {' '.join(left)} vs {' '.join(right)}")


class BudgetExceeded(RuntimeError):
    """A construction or search would exceed its configured budget."""

    def __init__(self, message: str, size: int | None = None):
        super().__init__(message)
        self.size = size


def inverse_name(name: str) -> str:
    if name.endswith(INVERSE_SUFFIX):
        return name[: -len(INVERSE_SUFFIX)]
    return name + INVERSE_SUFFIX


def dual(m: Mealy) -> Mealy:
    """Swap the roles of states and letters: ``p --a|b--> q`` becomes ``a --p|q--> b``."""
    n, k = m.n_states, m.n_letters
    trans = [[m.output[i][j] for i in range(n)] for j in range(k)]
    out = [[m.transition[i][j] for i in range(n)] for j in range(k)]
    return Mealy(m.alphabet, m.states, trans, out)


def _first_non_invertible(m: Mealy) -> str | None:
    k = m.n_letters
    for i, q in enumerate(m.states):
        if len(set(m.output[i])) != k:
            return q
    return None


def _first_non_reversible(m: Mealy) -> str | None:
    n = m.n_states
    for j, a in enumerate(m.alphabet):
        if len({m.transition[i][j] for i in range(n)}) != n:
            return a
    return None


def inverse(m: Mealy) -> Mealy:
    bad = _first_non_invertible(m)
    if bad is not None:
        raise NotInvertible(bad)
    n, k = m.n_states, m.n_letters
    trans = [[0] * k for _ in range(n)]
    out = [[0] * k for _ in range(n)]
    for i in range(n):
        for b in range(k):
            a = m.output[i][b]
            trans[i][a] = m.transition[i][b]
            out[i][a] = b
    return Mealy(tuple(q + INVERSE_SUFFIX for q in m.states), m.alphabet, trans, out)


def enrich(m: Mealy) -> Mealy:
    """Extend a reversible machine to the involutive alphabet ``A + A^-1``."""
    bad = _first_non_reversible(m)
    if bad is not None:
        raise NotReversible(bad)
    n, k = m.n_states, m.n_letters
    trans = [list(row) + [0] * k for row in m.transition]
    out = [list(row) + [0] * k for row in m.output]
    for i in range(n):
        for j in range(k):
            p = m.transition[i][j]
            trans[p][k + j] = i
            out[p][k + j] = k + m.output[i][j]
    alphabet = m.alphabet + tuple(a + INVERSE_SUFFIX for a in m.alphabet)
    return Mealy(m.states, alphabet, trans, out)


def enriched_dual(m: Mealy) -> Mealy:
    bad = _first_non_invertible(m)
    if bad is not None:
        raise NotInvertible(bad)
    result = enrich(dual(m))
    if CHECK_ENRICHED_DUAL:
        other = dual(disjoint_union(m, inverse(m)))
        assert other == result, "enriched dual disagrees with dual of m + m^-1"
    return result


def flatten_label(label: str) -> str:
    """Render nested pair labels ``((a,b),c)`` as the flat tuple ``(a,b,c)``."""
    if not label.startswith("("):
        return label
    return "(" + label.replace("(", "").replace(")", "") + ")"


def _pair_label(q: str, p: str, flatten: bool) -> str:
    if flatten:
        return flatten_label(f"({q},{p})")
    return f"({q},{p})"


def product(m1: Mealy, m2: Mealy, *, flatten: bool = False) -> Mealy:
    """``m1`` reads the input first and feeds its output to ``m2``."""
    if m1.alphabet != m2.alphabet:
        raise AlphabetMismatch(m1.alphabet, m2.alphabet)
    n2, k = m2.n_states, m1.n_letters
    states = []
    trans = []
    out = []
    for i1, q1 in enumerate(m1.states):
        for i2, q2 in enumerate(m2.states):
            states.append(_pair_label(q1, q2, flatten))
            row_t = []
            row_o = []
            for a in range(k):
                c = m1.output[i1][a]
                row_t.append(m1.transition[i1][a] * n2 + m2.transition[i2][c])
                row_o.append(m2.output[i2][c])
            trans.append(row_t)
            out.append(row_o)
    return Mealy(states, m1.alphabet, trans, out)


def power(m: Mealy, k: int, *, budget: int = DEFAULT_STATE_BUDGET) -> Mealy:
    """``m^k = (m^(k-1)) m`` with states rendered as flat k-tuples."""
    if k < 1:
        raise ValueError("power exponent must be positive")
    size = m.n_states**k
    if size > budget:
        raise BudgetExceeded(f"power would have {size} states (budget {budget})", size)
    if k == 1:
        return m
    n, nl = m.n_states, m.n_letters
    tuples = list(cartesian(range(n), repeat=k))
    index = {t: i for i, t in enumerate(tuples)}
    trans = []
    out = []
    for t in tuples:
        row_t = []
        row_o = []
        for a in range(nl):
            letter = a
            nxt = []
            for q in t:
                nxt.append(m.transition[q][letter])
                letter = m.output[q][letter]
            row_t.append(index[tuple(nxt)])
            row_o.append(letter)
        trans.append(row_t)
        out.append(row_o)
    states = ["(" + ",".join(m.states[q] for q in t) + ")" for t in tuples]
    return Mealy(states, m.alphabet, trans, out)


def disjoint_union(m1: Mealy, m2: Mealy) -> Mealy:
    if m1.alphabet != m2.alphabet:
        raise AlphabetMismatch(m1.alphabet, m2.alphabet)
    taken = set(m1.states)
    renamed = []
    notes = []
    for q in m2.states:
        name = q
        suffix = 1
        while name in taken:
            name = f"{q}_{suffix}"
            suffix += 1
        if name != q:
            notes.append(f"renamed {q} -> {name}")
        taken.add(name)
        renamed.append(name)
    n1 = m1.n_states
    trans = list(m1.transition) + [tuple(p + n1 for p in row) for row in m2.transition]
    out = list(m1.output) + list(m2.output)
    return Mealy(m1.states + tuple(renamed), m1.alphabet, trans, out, tuple(notes))


def trivial_states(m: Mealy) -> list[int]:
    """Greatest set T of states that copy every letter and never leave T."""
    k = m.n_letters
    alive = {
        i for i in range(m.n_states) if all(m.output[i][j] == j for j in range(k))
    }
    changed = True
    while changed:
        changed = False
        for i in list(alive):
            if any(m.transition[i][j] not in alive for j in range(k)):
                alive.discard(i)
                changed = True
    return sorted(alive)


def reduction(m: Mealy) -> Mealy:
    """Collapse every trivially acting state into one identity sink."""
    triv = trivial_states(m)
    if not triv:
        return m
    tset = set(triv)
    first = triv[0]
    if len(triv) == 1:
        sink_name = m.states[first]
    else:
        survivors = {m.states[i] for i in range(m.n_states) if i not in tset}
        sink_name = "e"
        suffix = 0
        while sink_name in survivors:
            sink_name = f"e_{suffix}"
            suffix += 1
    keep = [i for i in range(m.n_states) if i not in tset or i == first]
    new_index = {old: new for new, old in enumerate(keep)}
    sink = new_index[first]
    k = m.n_letters
    states = []
    trans = []
    out = []
    for old in keep:
        if old == first:
            states.append(sink_name)
            trans.append([sink] * k)
            out.append(list(range(k)))
            continue
        states.append(m.states[old])
        trans.append([sink if p in tset else new_index[p] for p in m.transition[old]])
        out.append(list(m.output[old]))
    notes = () if len(triv) == 1 else (f"collapsed {' '.join(m.states[i] for i in triv)} -> {sink_name}",)
    return Mealy(states, m.alphabet, trans, out, notes)


def component_of(m: Mealy, start: int) -> list[int]:
    """States reachable from ``start`` in BFS order (letters in declaration order)."""
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for p in m.transition[i]:
            if p not in seen:
                seen.add(p)
                order.append(p)
                queue.append(p)
    return order
