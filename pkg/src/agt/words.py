"""Free-group words over the involutive state alphabet.

A word is a tuple of letters ``(name, sign)`` with sign ``+1`` or ``-1``.
Words refer to states by name, so they stay valid across operators that keep
state names (inverse machines rename, see ``algebra.inverse_name``).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as cartesian, permutations
from typing import Iterable, Iterator, Sequence

from . import kernels
from .machine import MachineError

__all__ = [
    "Letter",
    "GroupWord",
    "WordError",
    "parse_word",
    "format_word",
    "reduce",
    "mirror",
    "invert",
    "erase",
    "is_trivial",
    "content",
    "FragileResult",
    "is_fragile",
    "is_strongly_fragile",
    "strong_fragility",
    "commutator_words",
    "commutator_length",
    "primitive_root",
]

Letter = tuple[str, int]
GroupWord = tuple[Letter, ...]

INV = "^-1"


class WordError(ValueError):
    pass


def _letter_text(x: Letter) -> str:
    return x[0] if x[1] > 0 else x[0] + INV


def format_word(w: Iterable[Letter]) -> str:
    return " ".join(_letter_text(x) for x in w)


def parse_word(text: str, states: Sequence[str] | None = None) -> GroupWord:
    """Parse ``q`` / ``q^-1`` tokens.  With ``states`` given, a token equal to a
    state name wins over stripping the suffix, and unknown names are rejected."""
    known = set(states) if states is not None else None
    out = []
    for tok in text.split():
        if known is not None and tok in known:
            out.append((tok, 1))
            continue
        if tok.endswith(INV) and len(tok) > len(INV):
            base, sign = tok[: -len(INV)], -1
        else:
            base, sign = tok, 1
        if known is not None and base not in known:
            raise WordError(f"unknown state {base!r} in word")
        out.append((base, sign))
    return tuple(out)


def reduce(w: Iterable[Letter]) -> GroupWord:
    stack: list[Letter] = []
    for x in w:
        if stack and stack[-1][0] == x[0] and stack[-1][1] == -x[1]:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def mirror(w: Sequence[Letter]) -> GroupWord:
    return tuple(reversed(w))


def invert(w: Sequence[Letter]) -> GroupWord:
    return tuple((q, -s) for q, s in reversed(w))


def _check_state(q: str, states: Sequence[str] | None) -> None:
    if states is not None and q not in states:
        raise WordError(f"unknown state {q!r}")


def erase(w: Iterable[Letter], q: str, states: Sequence[str] | None = None) -> GroupWord:
    _check_state(q, states)
    return tuple(x for x in w if x[0] != q)


def is_trivial(w: Iterable[Letter], sink: str, states: Sequence[str] | None = None) -> bool:
    return not reduce(erase(w, sink, states))


def content(w: Iterable[Letter]) -> frozenset[str]:
    return frozenset(q for q, _ in w)


@dataclass(frozen=True)
class FragileResult:
    letter: str | None
    reason: str

    def __bool__(self) -> bool:
        return self.letter is not None


def is_fragile(m, w: Sequence[Letter], sink: str | None = None) -> FragileResult:
    """First letter ``a`` whose section ``w·a`` becomes trivial once the sink is erased."""
    from .dynamics import SignedMachine, NoSink

    sm = SignedMachine.of(m)
    if sink is None:
        sinks = sm.sinks
        if not sinks:
            raise NoSink(m)
        sink = m.states[sinks[0]]
    _check_state(sink, m.states)
    if is_trivial(w, sink):
        return FragileResult(None, "trivial input")
    code = sm.encode(w)
    for j, a in enumerate(m.alphabet):
        _, sec = kernels.step(sm.delta, sm.lam, sm.k, code, j)
        if is_trivial(sm.decode(sec), sink):
            return FragileResult(a, "fragile")
    return FragileResult(None, "no letter trivializes the word")


def _encode_over(w: Sequence[Letter], names: Sequence[str]) -> bytes:
    n = len(names)
    index = {}
    for i, q in enumerate(names):
        index[q, 1] = i
        index[q, -1] = i + n
    return bytes(map(index.__getitem__, w))


def strong_fragility(w: Sequence[Letter]) -> tuple[bool, bool]:
    """``(strongly_fragile, degenerate)``; degenerate when the content has at most one state."""
    names = sorted(content(w))
    n = len(names)
    if n > 127:
        raise WordError("too many distinct states in word")
    code = _encode_over(w, names)
    for i in range(n):
        mask = bytearray(2 * n)
        mask[i] = mask[i + n] = 1
        if kernels.normalize(code, n, bytes(mask)):
            return False, n <= 1
    return True, n <= 1


def is_strongly_fragile(w: Sequence[Letter]) -> bool:
    return strong_fragility(w)[0]


def commutator_length(m: int) -> int:
    """Length of the commutator words on ``m`` states with exponents ±1."""
    return 3 * 2 ** (m - 1) - 2


def _exponents(bound: int) -> list[int]:
    return list(range(-bound, 0)) + list(range(1, bound + 1))


def _commutators_in_order(gens: Sequence[str], bound: int) -> Iterator[GroupWord]:
    m = len(gens)
    pos = [((q, 1),) for q in gens]
    neg = [((q, -1),) for q in gens]

    def power(x: GroupWord, x_inv: GroupWord, e: int) -> GroupWord:
        return x * e if e > 0 else x_inv * (-e)

    for vec in cartesian(_exponents(bound), repeat=2 * m - 2):
        e1, e2 = vec[0], vec[1]
        a = power(pos[0], neg[0], e1)
        b = power(pos[1], neg[1], e2)
        a_inv = power(pos[0], neg[0], -e1)
        b_inv = power(pos[1], neg[1], -e2)
        v = a + b + a_inv + b_inv
        for i in range(2, m):
            ei, f = vec[2 * i - 2], vec[2 * i - 1]
            v_inv = invert(v)
            q = power(pos[i], neg[i], ei)
            q_inv = power(pos[i], neg[i], -ei)
            v = q + power(v, v_inv, f) + q_inv + power(v, v_inv, -f)
        yield v


def commutator_words(
    gens: Sequence[str], exponent_bound: int, *, all_orders: bool = False
) -> Iterator[GroupWord]:
    """Nested commutators ``[q_m^e_m, ... [q_3^e_3, [q_1^e_1, q_2^e_2]^f_3] ...]``.

    Exponent vectors ``(e_1, e_2, e_3, f_3, ..., e_m, f_m)`` run lexicographically
    over ``-b..-1, 1..b``.  With ``all_orders`` every ordering of ``gens`` is used
    in turn (permutations in lexicographic order of positions).
    """
    gens = list(gens)
    if len(gens) < 2:
        raise WordError("commutator words need at least two states")
    if len(set(gens)) != len(gens):
        raise WordError("commutator generators must be distinct")
    if exponent_bound < 1:
        raise WordError("exponent bound must be positive")
    orders = permutations(gens) if all_orders else [gens]
    for order in orders:
        yield from _commutators_in_order(order, exponent_bound)


def primitive_root(w: Sequence) -> tuple:
    """Shortest ``z`` with ``w = z^k`` as sequences (no free reduction)."""
    w = tuple(w)
    n = len(w)
    if n == 0:
        raise WordError("primitive root of the empty word")
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return w[:d]
    return w
