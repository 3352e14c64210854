"""Actions, the word problem, orbital graphs and the freeness semi-decision procedures.

Convention: a state word ``q1 q2 ... qk`` acts on input words with ``qk`` first.
Boundary points over the state alphabet (``PeriodicPoint``) are written in the
order the dual machine reads them, so the leftmost letter acts first there; the
group word of a point period ``y`` is ``mirror(y)``.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as cartesian
from typing import Iterable, Iterator, Sequence

from . import kernels
from .algebra import BudgetExceeded, NotInvertible, trivial_states
from .machine import Mealy, MachineError, classify, identity_sinks
from .words import (
    GroupWord,
    WordError,
    format_word,
    invert,
    mirror,
    primitive_root,
    reduce,
)

__all__ = [
    "NoSink",
    "VerificationFailed",
    "SignedMachine",
    "LabeledGraph",
    "OrbitResult",
    "PeriodicPoint",
    "act",
    "is_identity",
    "order_of",
    "orbit_of_word",
    "schreier_level",
    "periodic_orbit",
    "extract_relation",
    "ChiReport",
    "growth_chi",
    "essentially_trivial",
    "RelationReport",
    "find_relations",
    "level_transitive",
    "level_quotient_cayley",
    "g_regular",
    "DEFAULT_SECTION_LIMIT",
]

DEFAULT_SECTION_LIMIT = 10**6


class NoSink(MachineError):
    def __init__(self, m: Mealy | None = None):
        super().__init__("machine has no identity sink state")


class VerificationFailed(RuntimeError):
    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


# ---------------------------------------------------------------------------
# signed tables


class SignedMachine:
    """Flattened tables of ``m + m^-1`` over signed state indices.

    Index ``i < n`` is state ``i``; ``i + n`` is its inverse.  Inverse rows are
    zero-filled when ``m`` is not invertible and ``encode`` refuses inverse letters.
    """

    def __init__(self, m: Mealy):
        n, k = m.n_states, m.n_letters
        if n > 127 or k > 256:
            raise MachineError("kernels support at most 127 states and 256 letters")
        self.m = m
        self.n = n
        self.k = k
        self.invertible = classify(m).invertible
        delta = bytearray(2 * n * k)
        lam = bytearray(2 * n * k)
        for i in range(n):
            for a in range(k):
                delta[i * k + a] = m.transition[i][a]
                lam[i * k + a] = m.output[i][a]
                if self.invertible:
                    b = m.output[i][a]
                    delta[(i + n) * k + b] = m.transition[i][a] + n
                    lam[(i + n) * k + b] = a
        self.delta = bytes(delta)
        self.lam = bytes(lam)
        triv = bytearray(2 * n)
        for i in trivial_states(m):
            triv[i] = triv[i + n] = 1
        self.trivial = bytes(triv)
        self.sinks = identity_sinks(m)
        self._index = {q: i for i, q in enumerate(m.states)}
        self._letters = {a: j for j, a in enumerate(m.alphabet)}

    @staticmethod
    def of(m: Mealy) -> "SignedMachine":
        return _signed(m)

    def require_invertible(self) -> None:
        if not self.invertible:
            from .algebra import _first_non_invertible

            raise NotInvertible(_first_non_invertible(self.m))

    def code(self, letter) -> int:
        q, s = letter
        try:
            i = self._index[q]
        except KeyError:
            raise WordError(f"unknown state {q!r}") from None
        if s < 0:
            if not self.invertible:
                raise NotInvertible(q)
            return i + self.n
        return i

    def encode(self, w: Iterable) -> bytes:
        return bytes(self.code(x) for x in w)

    def decode(self, code: bytes) -> GroupWord:
        n, st = self.n, self.m.states
        return tuple((st[s], 1) if s < n else (st[s - n], -1) for s in code)

    def encode_letters(self, u: Iterable[str]) -> bytes:
        try:
            return bytes(self._letters[a] for a in u)
        except KeyError as exc:
            raise WordError(f"unknown letter {exc.args[0]!r}") from None

    def decode_letters(self, code: bytes) -> tuple[str, ...]:
        return tuple(self.m.alphabet[j] for j in code)

    def signed_count(self) -> int:
        return 2 * self.n if self.invertible else self.n

    def letter_name(self, s: int) -> str:
        return self.m.states[s] if s < self.n else self.m.states[s - self.n] + "^-1"

    # kernel shorthands
    def step(self, code: bytes, a: int) -> tuple[int, bytes]:
        return kernels.step(self.delta, self.lam, self.k, code, a)

    def apply(self, code: bytes, inp: bytes) -> tuple[bytes, bytes]:
        return kernels.apply(self.delta, self.lam, self.k, code, inp)

    def is_identity(self, code: bytes, limit: int = DEFAULT_SECTION_LIMIT) -> int:
        return kernels.is_identity(self.delta, self.lam, self.k, self.n, self.trivial, code, limit)

    def same_action(self, u: bytes, v: bytes, limit: int = DEFAULT_SECTION_LIMIT) -> int:
        return kernels.same_action(self.delta, self.lam, self.k, u, v, limit)

    def dual_read(self, a: int, code: bytes) -> tuple[bytes, int]:
        return kernels.dual_read(self.delta, self.lam, self.k, a, code)

    def normalize(self, code: bytes) -> bytes:
        return kernels.normalize(code, self.n, self.trivial)

    def inverse_code(self, code: bytes) -> bytes:
        n = self.n
        return bytes(s + n if s < n else s - n for s in reversed(code))


@lru_cache(maxsize=128)
def _signed(m: Mealy) -> SignedMachine:
    return SignedMachine(m)


# ---------------------------------------------------------------------------
# graphs


@dataclass
class LabeledGraph:
    vertices: list[str]
    edges: list[tuple[int, str, int]]
    root: int = 0

    def __len__(self) -> int:
        return len(self.vertices)

    def out_map(self) -> dict[tuple[int, str], int]:
        return {(s, lab): d for s, lab, d in self.edges}

    def to_dot(self, name: str = "G") -> str:
        lines = [f"digraph {name} {{"]
        for i, v in enumerate(self.vertices):
            extra = ", peripheries=2" if i == self.root else ""
            lines.append(f'  n{i} [label="{_dot_escape(v)}"{extra}];')
        for s, lab, d in self.edges:
            lines.append(f'  n{s} -> n{d} [label="{_dot_escape(lab)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        rows = ["src\tlabel\tdst"]
        rows.extend(f"{self.vertices[s]}\t{lab}\t{self.vertices[d]}" for s, lab, d in self.edges)
        return "\n".join(rows) + "\n"

    def as_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [[s, lab, d] for s, lab, d in self.edges],
            "root": self.root,
        }

    def isomorphic_rooted(self, other: "LabeledGraph") -> bool:
        """Rooted isomorphism of deterministic graphs whose vertices are reachable from the root."""
        if len(self) != len(other) or len(self.edges) != len(other.edges):
            return False
        mine, theirs = self.out_map(), other.out_map()
        labels_mine: dict[int, set[str]] = {}
        for s, lab, _ in self.edges:
            labels_mine.setdefault(s, set()).add(lab)
        labels_theirs: dict[int, set[str]] = {}
        for s, lab, _ in other.edges:
            labels_theirs.setdefault(s, set()).add(lab)
        phi = {self.root: other.root}
        queue = deque([self.root])
        while queue:
            v = queue.popleft()
            w = phi[v]
            if labels_mine.get(v, set()) != labels_theirs.get(w, set()):
                return False
            for lab in labels_mine.get(v, ()):
                x, y = mine[v, lab], theirs[w, lab]
                if x in phi:
                    if phi[x] != y:
                        return False
                else:
                    phi[x] = y
                    queue.append(x)
        return len(phi) == len(self) and len(set(phi.values())) == len(other)


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


@dataclass
class OrbitResult:
    finite: bool
    graph: LabeledGraph | None
    visited: int
    points: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def outcome(self) -> str:
        return "finite" if self.finite else "exceeded"


def _letters_text(u: Sequence[str]) -> str:
    return " ".join(u)


# ---------------------------------------------------------------------------
# action and word problem


def act(m: Mealy, state_word: Sequence, inp: Sequence[str]) -> tuple[tuple[str, ...], GroupWord]:
    """Image of ``inp`` under ``state_word`` and the section reached."""
    sm = SignedMachine.of(m)
    code = sm.encode(state_word)
    out, sec = sm.apply(code, sm.encode_letters(inp))
    return sm.decode_letters(out), sm.decode(sec)


def is_identity(m: Mealy, w: Sequence, *, limit: int = DEFAULT_SECTION_LIMIT) -> bool:
    sm = SignedMachine.of(m)
    if any(s < 0 for _, s in w):
        sm.require_invertible()
    code = sm.encode(w)
    if sm.invertible:
        r = sm.is_identity(code, limit)
    else:
        r = sm.same_action(code, b"", limit)
    if r < 0:
        raise BudgetExceeded(f"section closure exceeded {limit} words", limit)
    return bool(r)


def order_of(m: Mealy, w: Sequence, bound: int, *, limit: int = DEFAULT_SECTION_LIMIT) -> int | None:
    """Least ``n <= bound`` with ``w^n`` trivial, else ``None``."""
    sm = SignedMachine.of(m)
    sm.require_invertible()
    code = sm.encode(w)
    for n in range(1, bound + 1):
        r = sm.is_identity(code * n, limit)
        if r < 0:
            raise BudgetExceeded(f"section closure exceeded {limit} words", limit)
        if r:
            return n
    return None


def _generators(sm: SignedMachine, signed: bool) -> list[int]:
    if signed:
        sm.require_invertible()
        return list(range(2 * sm.n))
    return list(range(sm.n))


def orbit_of_word(
    m: Mealy, v: Sequence[str], max_vertices: int, *, signed: bool = False
) -> OrbitResult:
    sm = SignedMachine.of(m)
    gens = _generators(sm, signed)
    start = sm.encode_letters(v)
    index = {start: 0}
    order = [start]
    edges = []
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for g in gens:
            img, _ = sm.apply(bytes([g]), u)
            if img not in index:
                if len(order) >= max_vertices:
                    return OrbitResult(False, None, len(order))
                index[img] = len(order)
                order.append(img)
                queue.append(img)
            edges.append((index[u], sm.letter_name(g), index[img]))
    graph = LabeledGraph([_letters_text(sm.decode_letters(u)) for u in order], edges)
    return OrbitResult(True, graph, len(order))


def schreier_level(m: Mealy, k: int, point: Sequence[str], *, max_vertices: int | None = None) -> LabeledGraph:
    """Component of ``point`` in the level-k action graph with edges ``v --q--> q(v)``."""
    if len(point) != k:
        raise ValueError(f"point has length {len(point)}, expected {k}")
    sm = SignedMachine.of(m)
    sm.require_invertible()
    res = orbit_of_word(m, point, max_vertices or m.n_letters**k + 1, signed=True)
    if not res.finite:
        raise BudgetExceeded(f"level {k} component exceeds {max_vertices} vertices", res.visited)
    return res.graph


# ---------------------------------------------------------------------------
# periodic boundary points


@dataclass(frozen=True)
class PeriodicPoint:
    """The ultimately periodic word ``preperiod . period^omega`` over signed states."""

    preperiod: GroupWord
    period: GroupWord

    def __post_init__(self) -> None:
        if not self.period:
            raise WordError("period must be nonempty")

    @classmethod
    def canonical(cls, preperiod: Sequence, period: Sequence) -> "PeriodicPoint":
        x, y = _canonical(tuple(preperiod), tuple(period))
        return cls(x, y)

    def label(self) -> str:
        body = f"({format_word(self.period)})^w"
        return f"{format_word(self.preperiod)} {body}" if self.preperiod else body

    def group_word(self) -> GroupWord:
        """The state word of the period in the action convention (leftmost read first)."""
        return mirror(self.period)


def _canonical(x: tuple, y: tuple) -> tuple[tuple, tuple]:
    """Minimal preperiod and primitive period; this representation is unique per omega-word."""
    y = primitive_root(y)
    while x and x[-1] == y[-1]:
        x = x[:-1]
        y = y[-1:] + y[:-1]
    return x, y


def _point_image(sm: SignedMachine, a: int, x: bytes, y: bytes) -> tuple[bytes, bytes]:
    xo, a1 = sm.dual_read(a, x)
    # return time of a1 under reading y; finite since the maps a -> a o y are permutations
    b = a1
    outs = []
    while True:
        yo, b = sm.dual_read(b, y)
        outs.append(yo)
        if b == a1:
            break
        if len(outs) > sm.k:
            raise MachineError("letter does not return under the period; machine not invertible")
    return xo, b"".join(outs)


@lru_cache(maxsize=4096)
def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def _root_bytes(y: bytes) -> bytes:
    # periods dividing |y| are closed under gcd, so strip prime factors greedily
    n = len(y)
    d = n
    for p in _prime_factors(n):
        while d % p == 0 and y[d // p :] == y[: n - d // p]:
            d //= p
    return y[:d]


def _canonical_codes(x: bytes, y: bytes) -> tuple[bytes, bytes]:
    y = _root_bytes(y)
    while x and x[-1] == y[-1]:
        x = x[:-1]
        y = y[-1:] + y[:-1]
    return x, y


def periodic_orbit(m: Mealy, p: PeriodicPoint, max_vertices: int) -> OrbitResult:
    """Orbit of ``x y^omega`` under the letters of ``m`` acting through the enriched dual."""
    sm = SignedMachine.of(m)
    sm.require_invertible()
    start = _canonical_codes(sm.encode(p.preperiod), sm.encode(p.period))
    index = {start: 0}
    order = [start]
    edges = []
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for a in range(sm.k):
            img = _canonical_codes(*_point_image(sm, a, *v))
            if img not in index:
                if len(order) >= max_vertices:
                    return OrbitResult(False, None, len(order), meta={"budget": max_vertices})
                index[img] = len(order)
                order.append(img)
                queue.append(img)
            edges.append((index[v], m.alphabet[a], index[img]))
    points = [PeriodicPoint(sm.decode(x), sm.decode(y)) for x, y in order]
    graph = LabeledGraph([pt.label() for pt in points], edges)
    return OrbitResult(True, graph, len(order), points=points, meta={"budget": max_vertices})


def _perm_order(sm: SignedMachine, y: bytes) -> int:
    perm = [sm.dual_read(a, y)[1] for a in range(sm.k)]
    order = 1
    seen = [False] * sm.k
    for a in range(sm.k):
        if seen[a]:
            continue
        length = 0
        b = a
        while not seen[b]:
            seen[b] = True
            b = perm[b]
            length += 1
        order = math.lcm(order, length)
    return order


def extract_relation(m: Mealy, orbit: OrbitResult) -> GroupWord:
    """A power of the root period that acts trivially, read off a finite orbit.

    Every vertex of the orbit of a purely periodic point is purely periodic.  With
    ``N`` a common multiple of ``|z| ord(a -> a o z)`` over the vertex periods ``z``,
    reading ``y^(N/|y|)`` from any letter returns to it and emits ``z^(N/|z|)`` for
    the image vertex ``z``, so the group word of ``y^(N/|y|)`` is trivial.
    """
    if not orbit.finite or not orbit.points:
        raise ValueError("extract_relation needs a finite periodic orbit")
    root = orbit.points[orbit.graph.root]
    if root.preperiod:
        raise ValueError("extract_relation needs a purely periodic root")
    sm = SignedMachine.of(m)
    sm.require_invertible()
    n_total = len(root.period)
    for pt in orbit.points:
        if pt.preperiod:
            raise VerificationFailed("orbit of a periodic point left the periodic points", {"vertex": pt.label()})
        z = sm.encode(pt.period)
        n_total = math.lcm(n_total, len(z) * _perm_order(sm, z))
    word = root.group_word() * (n_total // len(root.period))
    if not is_identity(m, word):
        raise VerificationFailed(
            "extracted word does not act trivially",
            {"root": root.label(), "exponent": n_total // len(root.period), "vertices": len(orbit.points)},
        )
    return word


def essentially_trivial(p: PeriodicPoint) -> bool:
    return not reduce(p.period)


# ---------------------------------------------------------------------------
# reduced words


def reduced_codes(n: int, length: int, letters: Sequence[int], *, signed: bool = True, first: int | None = None) -> Iterator[bytes]:
    """Reduced words of exactly ``length`` over ``letters`` in shortlex order."""
    letters = sorted(letters)

    def inv(s: int) -> int:
        return s + n if s < n else s - n

    def rec(prefix: list[int]) -> Iterator[bytes]:
        if len(prefix) == length:
            yield bytes(prefix)
            return
        last = prefix[-1] if prefix else None
        for s in letters:
            if not prefix and first is not None and s != first:
                continue
            if signed and last is not None and s == inv(last):
                continue
            prefix.append(s)
            yield from rec(prefix)
            prefix.pop()

    if length == 0:
        yield b""
        return
    yield from rec([])


# ---------------------------------------------------------------------------
# growth function


@dataclass
class ChiReport:
    values: list[tuple[int, int]]
    exhausted: list[int]
    window: tuple[int, int] | None
    monotone: bool
    signed_inputs: bool

    def as_dict(self) -> dict:
        return {
            "values": [[n, c] for n, c in self.values],
            "exhausted": list(self.exhausted),
            "window": list(self.window) if self.window else None,
            "monotone": self.monotone,
            "signed_inputs": self.signed_inputs,
        }


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}
        self.size: dict = {}

    def add(self, x) -> None:
        if x not in self.parent:
            self.parent[x] = x
            self.size[x] = 1

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def _section_images(sm: SignedMachine, code: bytes) -> list[bytes]:
    return [sm.step(code, a)[1] for a in range(sm.k)]


def _forward_orbit_size(sm: SignedMachine, start: bytes, budget: int) -> int:
    seen = {start}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for img in _section_images(sm, w):
            if img not in seen:
                if len(seen) >= budget:
                    return -1
                seen.add(img)
                queue.append(img)
    return len(seen)


def _chi_chunk(args) -> int:
    m, starts, budget = args
    sm = SignedMachine.of(m)
    best = -2
    for w in starts:
        size = _forward_orbit_size(sm, w, budget)
        if size < 0:
            continue
        if best < 0 or size < best:
            best = size
    return best


def _weak_components(sm: SignedMachine, words: Iterable[bytes], closed: bool, budget: int) -> _UnionFind:
    uf = _UnionFind()
    queue = deque()
    for w in words:
        uf.add(w)
        queue.append(w)
    while queue:
        w = queue.popleft()
        for img in _section_images(sm, w):
            if img not in uf.parent:
                if closed:
                    raise AssertionError("section map left the reduced words")
                if len(uf.parent) >= budget:
                    raise BudgetExceeded("component exploration exceeded budget", budget)
                uf.add(img)
                queue.append(img)
            uf.union(w, img)
    return uf


def growth_chi(
    m: Mealy,
    n_max: int,
    budget: int,
    *,
    signed_inputs: bool = False,
    threads: int = 1,
) -> ChiReport:
    """Minimal orbit size of reduced state words of length n under ``w -> w·a``.

    The default follows the orbit under positive input letters.  With
    ``signed_inputs`` the inputs range over ``A + A^-1``, that is, components are
    taken in the graph with every edge also traversable backwards.
    """
    sm = SignedMachine.of(m)
    sm.require_invertible()
    flags = classify(m)
    letters = list(range(2 * sm.n))
    values: list[tuple[int, int]] = []
    exhausted: list[int] = []
    for n in range(1, n_max + 1):
        starts = list(reduced_codes(sm.n, n, letters))
        try:
            if flags.bireversible:
                # section maps are permutations of the reduced words of length n
                uf = _weak_components(sm, starts, True, budget)
                chi = min(uf.size[uf.find(w)] for w in starts)
            elif signed_inputs:
                uf = _weak_components(sm, starts, False, budget)
                chi = min(uf.size[uf.find(w)] for w in starts)
            else:
                if threads > 1:
                    chunks = [starts[i::threads] for i in range(threads)]
                    with ProcessPoolExecutor(threads) as pool:
                        parts = list(pool.map(_chi_chunk, [(m, c, budget) for c in chunks]))
                else:
                    parts = [_chi_chunk((m, starts, budget))]
                found = [p for p in parts if p > 0]
                if not found:
                    raise BudgetExceeded(f"every orbit at level {n} exceeded {budget}", budget)
                chi = min(found)
        except BudgetExceeded:
            exhausted.append(n)
            continue
        values.append((n, chi))
    monotone = all(values[i][1] <= values[i + 1][1] for i in range(len(values) - 1))
    return ChiReport(values, exhausted, _stable_window(values), monotone, signed_inputs)


def _stable_window(values: list[tuple[int, int]]) -> tuple[int, int] | None:
    best = None
    i = 0
    while i < len(values):
        j = i
        while (
            j + 1 < len(values)
            and values[j + 1][1] == values[i][1]
            and values[j + 1][0] == values[j][0] + 1
        ):
            j += 1
        if j > i and (best is None or values[j][0] - values[i][0] > best[1] - best[0]):
            best = (values[i][0], values[j][0])
        i = j + 1
    return best


# ---------------------------------------------------------------------------
# relation search


@dataclass
class RelationReport:
    relations: list[GroupWord]
    pairs: list[tuple[GroupWord, GroupWord]]
    undetermined: list[GroupWord]
    max_len: int
    positive: bool

    @property
    def complete(self) -> bool:
        return not self.undetermined


def _search_letters(sm: SignedMachine, include_trivial: bool, positive: bool) -> list[int]:
    base = [i for i in range(sm.n) if include_trivial or not sm.trivial[i]]
    if positive:
        return base
    return base + [i + sm.n for i in base]


def _identity_job(args) -> tuple[list[bytes], list[bytes]]:
    m, max_len, letters, positive, first, limit = args
    sm = SignedMachine.of(m)
    hits, unknown = [], []
    for length in range(1, max_len + 1):
        for code in reduced_codes(sm.n, length, letters, signed=not positive, first=first):
            if sm.invertible:
                r = sm.is_identity(code, limit)
            else:
                r = sm.same_action(code, b"", limit)
            if r > 0:
                hits.append(code)
            elif r < 0:
                unknown.append(code)
    return hits, unknown


def _shortlex_key(code: bytes) -> tuple[int, bytes]:
    return (len(code), code)


def find_relations(
    m: Mealy,
    max_len: int,
    *,
    positive_only: bool = False,
    pairs: bool = False,
    include_trivial: bool = False,
    threads: int = 1,
    limit: int = DEFAULT_SECTION_LIMIT,
    pair_level: int | None = None,
) -> RelationReport:
    """Relations of length at most ``max_len`` in shortlex order.

    General mode lists reduced words over the signed states that act trivially,
    keeping only the first of each word and its inverse.  Positive mode lists
    positive words acting trivially and, with ``pairs``, the pairs ``u != v`` of
    positive words with equal action that share neither first nor last letter.
    States that act trivially (the fixpoint set of ``algebra.trivial_states``)
    are left out unless ``include_trivial`` is set.
    """
    sm = SignedMachine.of(m)
    if not positive_only:
        sm.require_invertible()
    letters = _search_letters(sm, include_trivial, positive_only)
    jobs = [(m, max_len, letters, positive_only, f, limit) for f in letters]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(threads) as pool:
            results = list(pool.map(_identity_job, jobs))
    else:
        results = [_identity_job(j) for j in jobs]
    hits = sorted((c for r in results for c in r[0]), key=_shortlex_key)
    unknown = sorted((c for r in results for c in r[1]), key=_shortlex_key)
    emitted: list[bytes] = []
    if positive_only:
        emitted = hits
    else:
        seen: set[bytes] = set()
        for c in hits:
            if sm.inverse_code(c) in seen:
                continue
            seen.add(c)
            emitted.append(c)
    found_pairs: list[tuple[GroupWord, GroupWord]] = []
    if positive_only and pairs:
        pair_codes, pair_unknown = _positive_pairs(sm, max_len, letters, limit, pair_level)
        found_pairs = [(sm.decode(u), sm.decode(v)) for u, v in pair_codes]
        unknown.extend(u + sm.inverse_code(v) if sm.invertible else u for u, v in pair_unknown)
    return RelationReport(
        [sm.decode(c) for c in emitted],
        found_pairs,
        [sm.decode(c) for c in unknown],
        max_len,
        positive_only,
    )


def _positive_pairs(
    sm: SignedMachine, max_len: int, letters: list[int], limit: int, level: int | None
) -> tuple[list[tuple[bytes, bytes]], list[tuple[bytes, bytes]]]:
    if level is None:
        level = 1
        while sm.k ** (level + 1) <= 256:
            level += 1
    inputs = [bytes(t) for t in cartesian(range(sm.k), repeat=level)]
    buckets: dict[bytes, list[bytes]] = {}
    for length in range(1, max_len + 1):
        for code in reduced_codes(sm.n, length, letters, signed=False):
            sig = b"".join(sm.apply(code, u)[0] for u in inputs)
            buckets.setdefault(sig, []).append(code)
    found, unknown = [], []
    for group in buckets.values():
        for i, u in enumerate(group):
            for v in group[i + 1 :]:
                if u[0] == v[0] or u[-1] == v[-1]:
                    continue
                if sm.invertible:
                    r = sm.is_identity(u + sm.inverse_code(v), limit)
                else:
                    r = sm.same_action(u, v, limit)
                if r > 0:
                    found.append((u, v))
                elif r < 0:
                    unknown.append((u, v))
    found.sort(key=lambda p: (_shortlex_key(p[0]), _shortlex_key(p[1])))
    return found, unknown


# ---------------------------------------------------------------------------
# levels


def level_transitive(m: Mealy, k_max: int, *, budget: int = 10**6) -> list[tuple[int, bool | None]]:
    """Whether the dual's letters connect all of ``Q^k`` (weak connectivity), per level.

    ``None`` marks a level whose size exceeds the budget.
    """
    sm = SignedMachine.of(m)
    out: list[tuple[int, bool | None]] = []
    for k in range(1, k_max + 1):
        if sm.n**k > budget:
            out.append((k, None))
            continue
        uf = _UnionFind()
        words = [bytes(t) for t in cartesian(range(sm.n), repeat=k)]
        for w in words:
            uf.add(w)
        for w in words:
            for a in range(sm.k):
                uf.union(w, sm.dual_read(a, w)[0])
        out.append((k, len({uf.find(w) for w in words}) == 1))
    return out


def level_permutation(sm: SignedMachine, code: bytes, inputs: list[bytes], index: dict[bytes, int]) -> tuple[int, ...]:
    return tuple(index[sm.apply(code, u)[0]] for u in inputs)


def level_quotient_cayley(m: Mealy, k: int, budget: int) -> LabeledGraph:
    """Cayley graph of the permutation group induced on ``A^k``; edges ``g --q--> q g``."""
    sm = SignedMachine.of(m)
    sm.require_invertible()
    inputs = [bytes(t) for t in cartesian(range(sm.k), repeat=k)]
    index = {u: i for i, u in enumerate(inputs)}
    gens = [(sm.letter_name(s), level_permutation(sm, bytes([s]), inputs, index)) for s in range(2 * sm.n)]
    ident = tuple(range(len(inputs)))
    seen = {ident: 0}
    labels = ["1"]
    order = [ident]
    edges = []
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        gi = seen[g]
        for name, p in gens:
            h = tuple(p[x] for x in g)
            if h not in seen:
                if len(order) >= budget:
                    raise BudgetExceeded(f"level {k} quotient exceeds {budget} elements", budget)
                seen[h] = len(order)
                order.append(h)
                labels.append(name if gi == 0 else f"{name} {labels[gi]}")
                queue.append(h)
            edges.append((gi, name, seen[h]))
    return LabeledGraph(labels, edges)


def g_regular(m: Mealy, w: Sequence, prefix_bound: int) -> tuple[str, ...] | None:
    """Shortlex-least input prefix driving every letter of ``w`` into a sink, or ``None``."""
    sm = SignedMachine.of(m)
    if not sm.sinks:
        raise NoSink(m)
    if any(s < 0 for _, s in w):
        sm.require_invertible()
    sinkset = set(sm.sinks) | {s + sm.n for s in sm.sinks}
    start = sm.encode(w)
    if all(s in sinkset for s in start):
        return ()
    seen = {start}
    frontier = [(start, b"")]
    for _ in range(prefix_bound):
        nxt = []
        for code, u in frontier:
            for a in range(sm.k):
                _, sec = sm.step(code, a)
                if sec in seen:
                    continue
                if all(s in sinkset for s in sec):
                    return sm.decode_letters(u + bytes([a]))
                seen.add(sec)
                nxt.append((sec, u + bytes([a])))
        frontier = nxt
        if not frontier:
            break
    return None
